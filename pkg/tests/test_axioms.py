import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpmetric import (
    GMetricCarrier, GPMetricCarrier, PartialMetricCarrier, PointUniverse, floating, validate,
    validate_g, validate_g_symmetry, validate_gp, validate_partial,
)
from gpmetric.oracles import g_symmetric, oracle_verdicts
from gpmetric.spaces import (
    dyadic_grid, max_combination_g, max_gp, max_partial, mutate_entry, random_gp,
    random_partial, rational_grid,
)
from gpmetric.transforms import partial_to_g

from helpers import mixed_tables, valid_table

AB = PointUniverse(["a", "b"])


def _const(cls, U, c):
    return cls(U, table={k: c for k in U.multisets(cls.arity)})


# partial metrics ------------------------------------------------------------

def test_max_partial_on_small_grid_passes():
    p = max_partial(rational_grid([0, 1, 3]))
    rep = validate_partial(p)
    assert rep.passed and rep.verdict == "valid"
    assert all(oracle_verdicts(p).values())


def test_zero_function_fails_p1():
    rep = validate_partial(_const(PartialMetricCarrier, AB, 0))
    assert not rep.status("P1")
    assert set(rep.results["P1"].witness) == {"a", "b"}


def test_ordinary_metric_passes():
    U = PointUniverse(["a", "b", "c"])
    d = PartialMetricCarrier(U, table={("a", "a"): 0, ("b", "b"): 0, ("c", "c"): 0,
                                       ("a", "b"): 1, ("b", "c"): 2, ("a", "c"): 3})
    assert validate_partial(d).passed


def test_p2_and_p4_witnesses():
    U = PointUniverse(["a", "b"])
    p = PartialMetricCarrier(U, table={("a", "a"): 3, ("b", "b"): 0, ("a", "b"): 1})
    rep = validate_partial(p)
    assert not rep.status("P2")
    r = rep.results["P2"]
    assert r.lhs == 3 and r.rhs == 1
    assert rep.results["P3"].by_construction


# G-metrics ------------------------------------------------------------------

def test_max_combination_on_0125_passes():
    g = max_combination_g(rational_grid([0, 1, 2, 5]))
    assert validate_g(g).passed
    assert validate_g_symmetry(g).passed


def test_zero_g_fails_g2():
    rep = validate_g(_const(GMetricCarrier, AB, 0))
    assert not rep.status("G2")
    assert rep.results["G2"].witness == ("a", "b")


def test_overwritten_entry_fails_g5():
    g = max_combination_g(rational_grid([0, 1, 2, 5])).materialize()
    bad = g.with_entry((1, 2, 2), 100)
    rep = validate_g(bad)
    assert not rep.status("G5")
    r = rep.results["G5"]
    assert r.lhs > r.rhs
    assert not oracle_verdicts(bad)["G5"]


def test_non_symmetric_witness():
    g = GMetricCarrier(AB, table={("a", "a", "a"): 0, ("b", "b", "b"): 0,
                                  ("a", "b", "b"): 1, ("a", "a", "b"): 2})
    rep = validate_g_symmetry(g)
    assert not rep.passed
    assert set(rep.results["symmetric"].witness) == {"a", "b"}


def test_partial_to_g_output_is_symmetric():
    g = partial_to_g(random_partial(3, 6))
    assert validate_g_symmetry(g).passed


# GP-metrics -----------------------------------------------------------------

def test_max_gp_on_0124_passes():
    gp = max_gp(rational_grid([0, 1, 2, 4]))
    rep = validate_gp(gp)
    assert rep.passed
    assert rep.results["GP2"].by_construction


def test_gp1_failure_when_self_value_exceeds():
    gp = GPMetricCarrier(AB, table={("a", "a", "a"): 5, ("b", "b", "b"): 0,
                                    ("a", "a", "b"): 1, ("a", "b", "b"): 2})
    rep = validate_gp(gp)
    assert not rep.status("GP1")
    assert rep.results["GP1"].witness[0] == "a"


def test_constant_gp_fails_gp4():
    rep = validate_gp(_const(GPMetricCarrier, AB, 2))
    assert not rep.status("GP4")
    assert rep.status("positivity")  # positivity alone does not rule out a constant


def test_dispatch_and_summary():
    rep = validate(max_gp(rational_grid([0, 1])))
    assert rep.structure == "gp"
    assert "by construction" in rep.summary()
    bad = validate(_const(GMetricCarrier, AB, 0))
    assert "FAIL" in bad.summary()


def test_first_witness_is_lexicographic():
    U = PointUniverse(["a", "b", "c"])
    g = _const(GMetricCarrier, U, 0)
    assert validate_g(g).results["G2"].witness == ("a", "b")


def test_sampled_mode_reports_no_counterexample():
    gp = max_gp(dyadic_grid(40))
    rep = validate_gp(gp, samples=500, seed=3)
    assert rep.passed and not rep.exhaustive
    assert rep.verdict == "no-counterexample"
    assert (rep.sample_count, rep.seed) == (500, 3)
    again = validate_gp(gp, samples=500, seed=3)
    assert again.summary() == rep.summary()


def test_floating_mode_strictness():
    U = PointUniverse(["a", "b"])
    tiny = GMetricCarrier(U, table={("a", "a", "a"): 0, ("b", "b", "b"): 0,
                                    ("a", "a", "b"): 1e-12, ("a", "b", "b"): 1e-12},
                          policy=floating(1e-9))
    # G2 asks for strict positivity; 1e-12 is within tolerance of 0.
    assert not validate_g(tiny).status("G2")


def test_builtin_examples_pass_at_desk_size():
    assert validate_gp(max_gp(dyadic_grid(14))).passed
    assert validate_partial(max_partial(dyadic_grid(14))).passed
    assert validate_g(max_combination_g(dyadic_grid(10))).passed


# oracle agreement, mutation sensitivity --------------------------------------

@pytest.mark.parametrize("kind", ["partial", "g", "gp"])
def test_oracle_agreement_per_axiom(kind):
    for carrier in mixed_tables(kind, 150, seed=11):
        rep = validate(carrier)
        oracle = oracle_verdicts(carrier)
        for axiom, result in rep.results.items():
            assert result.passed == oracle[axiom], axiom
        assert rep.passed == all(oracle.values())
        if kind == "g":
            assert validate_g_symmetry(carrier).passed == g_symmetric(
                carrier.universe.points, carrier)


@pytest.mark.parametrize("kind", ["partial", "g", "gp"])
def test_mutation_sensitivity(kind):
    rng = random.Random(kind)
    for seed in range(30):
        base = valid_table(kind, seed, rng.randint(2, 5))
        assert validate(base).passed
        found = False
        for key in base.universe.multisets(base.arity):
            for new in (Fraction(0), base(*key) + 50):
                if new == base(*key):
                    continue
                rep = validate(base.with_entry(key, new))
                if not rep.passed:
                    assert all(f.witness is not None for f in rep.failures)
                    found = True
                    break
            if found:
                break
        assert found


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_gp_validity_implies_positivity(seed, n):
    gp = random_gp(seed, n)
    rep = validate_gp(gp)
    assert rep.passed and rep.status("positivity")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["partial", "g", "gp"]))
def test_mutated_tables_agree_with_oracle(seed, kind):
    rng = random.Random(seed)
    carrier, _ = mutate_entry(valid_table(kind, seed, rng.randint(1, 5)), rng)
    assert validate(carrier).passed == all(oracle_verdicts(carrier).values())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_generators_are_valid_and_deterministic(seed, n):
    a, b = random_partial(seed, n), random_partial(seed, n)
    assert dict(a.items()) == dict(b.items())
    assert validate_partial(a).passed
