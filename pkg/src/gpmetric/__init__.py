"""Partial metrics, G-metrics and GP-metrics on finite universes: axiom
validation, the constructions between them, finite-prefix Cauchy
certificates and fixed-point solvers."""

from .axioms import (
    ValidationReport, validate, validate_g, validate_g_symmetry, validate_gp, validate_partial,
)
from .convergence import (
    CauchyCertificate, ConvergenceCertificate, ball, ball_membership, equivalence_harness,
    g_cauchy, g_converges_to, gp_cauchy, gp_continuity_check, gp_converges_to,
    joint_continuity_probe, limit_equivalence_check, p_cauchy, p_converges_to,
)
from .core import (
    EXACT, ContractionGauge, GMetricCarrier, GPMetricCarrier, NumericPolicy, PairPotential,
    PartialMetricCarrier, PointPotential, PointUniverse, SelfMap, SequenceTrace, floating,
    lookup_pair, lookup_triple,
)
from .documents import dump_carrier, load_carrier, load_map, load_potential
from .fixed_point import (
    FixedPointReport, brute_force_fixed_points, caristi_descent_solve, check_caristi_pair,
    check_gp_caristi, check_partial_caristi, check_partial_weak_contraction,
    check_weak_g_contraction, picard_solve, t_lsc_probe,
)
from .transforms import (
    check_identities, g_to_metric, gp_to_g, gp_to_partial, induced_metric_ps, partial_to_g,
)

__version__ = "0.1.0"
