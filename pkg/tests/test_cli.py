import json
from fractions import Fraction

import pytest

from gpmetric.cli import main
from gpmetric.documents import dump_carrier
from gpmetric.spaces import max_gp, random_gp, random_partial, rational_grid


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def halving_space(tmp_path, capsys):
    path = tmp_path / "maxgp-grid.json"
    code, _, _ = run(capsys, "example", "maxgp", "--depth", 20, "--with-map", "1/2",
                     "--with-phi", 2, "-o", path)
    assert code == 0
    return path


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def test_validate_valid_table(tmp_path, capsys):
    path = _write(tmp_path, "maxgp.json", dump_carrier(max_gp(rational_grid([0, 1, 2, 4]))))
    code, out, _ = run(capsys, "validate", path)
    assert code == 0 and "gp: valid" in out


def test_validate_broken_table_reports_witness(tmp_path, capsys):
    doc = dump_carrier(max_gp(rational_grid([0, 1, 2, 4])))
    doc["entries"][0]["value"] = 7  # GP(0,0,0) above GP(0,0,1)
    path = _write(tmp_path, "broken.json", doc)
    code, report = run_json(capsys, "validate", path)
    assert code == 1 and report["verdict"] == "fail"
    failures = [r for r in report["report"]["axioms"]["results"].values() if not r["passed"]]
    assert failures and all(r["witness"] for r in failures)


def test_validate_sampled(tmp_path, capsys):
    path = _write(tmp_path, "p.json", dump_carrier(random_partial(1, 6)))
    code, report = run_json(capsys, "validate", path, "--sampled", 200, "--seed", 4)
    assert code == 0 and report["verdict"] == "no-counterexample"
    assert report["report"]["axioms"]["sample_count"] == 200


def test_validate_g_prints_symmetry(tmp_path, capsys):
    path = tmp_path / "baire.json"
    assert run(capsys, "example", "baire", "--length", 3, "-o", path)[0] == 0
    code, out, _ = run(capsys, "validate", path)
    assert code == 0 and "symmetric: yes" in out


def test_usage_and_document_errors(tmp_path, capsys):
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2
    bad = _write(tmp_path, "bad.json", {"kind": "partial", "points": ["a", "b"],
                                        "entries": [{"key": ["a", "b"], "value": 1},
                                                    {"key": ["b", "a"], "value": 2}]})
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "conflicting symmetric entries" in err
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_fixedpoint_caristi_worked_example(tmp_path, capsys, halving_space):
    code, out, _ = run(capsys, "fixedpoint", "--solver", "caristi-gp", "--space", halving_space,
                       "--map", halving_space, "--phi", halving_space, "--x0", 1)
    assert code == 0
    assert out.startswith("fixed point found: point 0")


def test_fixedpoint_phi_defaults_to_space_file(capsys, halving_space):
    code, out, _ = run(capsys, "fixedpoint", "--solver", "caristi-gp", "--space", halving_space,
                       "--x0", "1/2")
    assert code == 0 and "point 0" in out


def test_fixedpoint_json_round_trip(capsys, halving_space):
    code, report = run_json(capsys, "fixedpoint", "--solver", "caristi-gp",
                            "--space", halving_space, "--phi", halving_space, "--x0", "1/4")
    assert code == 0 and report["verdict"] == "fixed point found"
    assert report["report"]["point"] == "0"
    assert report["report"]["trace"][0] == "1/4"
    again = json.loads(json.dumps(report))
    assert again == report


def test_fixedpoint_picard_with_inline_map(tmp_path, capsys):
    path = _write(tmp_path, "p.json", dump_carrier(random_partial(2, 3)))
    code, out, _ = run(capsys, "fixedpoint", "--solver", "picard", "--space", path,
                       "--map", "x0->x1,x1->x1,x2->x1", "--gauge", "1/2", "--x0", "x0",
                       "--format", "text")
    assert "x1" in out
    assert code in (0, 1)
    code, _, err = run(capsys, "fixedpoint", "--solver", "picard", "--space", path,
                       "--map", "x0->x1,x1->x1,x2->x1")
    assert code == 2 and "hypothesis" in err
    code, out, _ = run(capsys, "fixedpoint", "--solver", "picard", "--space", path,
                       "--map", "x0->x1,x1->x1,x2->x1", "--no-check")
    assert code == 0 and "point x1" in out


def test_fixedpoint_partial_inline_map_is_usage_error(capsys, halving_space):
    code, _, _ = run(capsys, "fixedpoint", "--solver", "caristi-gp", "--space", halving_space,
                     "--map", "0->0,1->1,1/2->1/2", "--phi", halving_space)
    assert code == 2


def test_fixedpoint_violated_hypothesis_exits_1(capsys, halving_space):
    points = json.loads(halving_space.read_text())["points"]
    to_one = ",".join(f"{p}->1" for p in points)
    code, report = run_json(capsys, "fixedpoint", "--solver", "caristi-gp",
                            "--space", halving_space, "--map", to_one, "--phi", halving_space)
    assert code == 1 and report["verdict"] == "hypothesis violated"


def test_convert_and_check_identity(tmp_path, capsys):
    path = _write(tmp_path, "gp.json", dump_carrier(random_gp(3, 4)))
    out_path = tmp_path / "g.json"
    assert run(capsys, "convert", path, "--to", "g", "-o", out_path)[0] == 0
    assert run(capsys, "validate", out_path)[0] == 0
    code, out, _ = run(capsys, "convert", path, "--to", "partial")
    assert code == 0 and json.loads(out)["kind"] == "partial"
    code, report = run_json(capsys, "check-identity", path)
    assert code == 0 and report["verdict"] == "holds"
    assert {c["max_discrepancy"] for c in report["report"]} == {0}
    code, _, _ = run(capsys, "convert", path, "--check-identity")
    assert code == 0
    assert run(capsys, "convert", path, "--to", "metric")[0] == 2


def test_convert_metric_from_partial(tmp_path, capsys):
    path = _write(tmp_path, "p.json", dump_carrier(random_partial(3, 4)))
    code, out, _ = run(capsys, "convert", path, "--to", "metric")
    doc = json.loads(out)
    assert code == 0
    assert all(e["value"] == 0 for e in doc["entries"] if len(set(e["key"])) == 1)


def test_certify(tmp_path, capsys):
    U = rational_grid([0] + [Fraction(1, n) for n in range(1, 41)])
    space = _write(tmp_path, "s.json", dump_carrier(max_gp(U)))
    trace = _write(tmp_path, "t.json", {"points": [str(Fraction(1, n)) for n in range(1, 41)],
                                       "epsilon": "1/20", "window": 25})
    code, report = run_json(capsys, "certify", space, "--trace", trace, "--limit", "0",
                            "--harness")
    assert code == 0 and report["verdict"] == "certified"
    assert report["report"]["harness"]["disagreements"] == []
    alt = _write(tmp_path, "a.json", {"points": ["0", "1"] * 5, "epsilon": "1/20", "window": 2})
    assert run(capsys, "certify", space, "--trace", alt)[0] == 1
    assert run(capsys, "certify", space, "--trace", alt, "--limit", "7")[0] == 2


def test_ball(tmp_path, capsys):
    U = rational_grid([0, Fraction(1, 2), 1, Fraction(7, 5), 2])
    space = _write(tmp_path, "s.json", dump_carrier(max_gp(U)))
    code, report = run_json(capsys, "ball", space, "--center", 1, "--eps", "1/2")
    assert code == 0 and report["report"]["members"] == ["0", "1/2", "1", "7/5"]
    assert run(capsys, "ball", space, "--center", 1, "--eps", "1/2", "--point", 2)[0] == 1
    assert run(capsys, "ball", space, "--center", 1, "--eps", 0)[0] == 2


def test_example_documents(tmp_path, capsys):
    for name in ("maxg", "maxp", "maxgp", "random-p", "random-gp"):
        code, out, _ = run(capsys, "example", name, "--depth", 3, "--n", 4, "--seed", 9)
        assert code == 0 and json.loads(out)["points"]
    code, out, _ = run(capsys, "example", "maxp", "--values", "0,1/3,2")
    assert json.loads(out)["points"] == ["0", "1/3", "2"]
    assert run(capsys, "example", "random-p", "--with-map", "1/2")[0] == 2
    assert run(capsys, "example", "maxgp", "--with-phi", 2)[0] == 2


def test_floating_tolerance_flag(tmp_path, capsys):
    path = _write(tmp_path, "p.json", {"kind": "partial", "points": ["a", "b"], "entries": [
        {"key": ["a", "a"], "value": 0.1}, {"key": ["b", "b"], "value": 0.2},
        {"key": ["a", "b"], "value": 0.30000000000000004}]})
    assert run(capsys, "validate", path, "--tolerance", 1e-9)[0] == 0
