"""Exit codes, report schema, and determinism of the command line tool."""

import json

import pytest

from buildinglab import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, json.loads(captured.out), captured.err


def test_coxeter_matrix_file(tmp_path, capsys):
    path = tmp_path / "b2.txt"
    path.write_text("1 4\n4 1\n")
    code, report, err = run(
        ["coxeter", "--matrix", str(path), "--poincare"], capsys)
    assert code == 0
    assert report["schema"] == "buildinglab-report/1"
    assert report["results"]["order"] == 8
    assert report["results"]["longest_length"] == 4
    assert report["results"]["poincare"] == [1, 2, 2, 2, 1]
    assert report["checks_failed"] == 0
    assert "coxeter" in err


def test_field_classify_and_eval(capsys):
    code, report, _ = run(["field", "classify", "--field", "F8"], capsys)
    assert code == 0
    assert report["results"]["classification"]["characteristic"] == 2

    code, report, _ = run(
        ["field", "eval", "--field", "Laurent:q=3,prec=8",
         "--expr", "t^-2+2*t"], capsys)
    assert code == 0
    assert report["results"]["valuation"] == -2


def test_field_eval_requires_expr(capsys):
    code = cli.main(["field", "eval", "--field", "F7"])
    assert code == 2
    assert "expr" in capsys.readouterr().err


def test_projline_hua_matches_direct_product(capsys):
    code, report, _ = run(
        ["projline", "hua", "--field", "Q5", "--x", "5", "--y", "2"], capsys)
    assert code == 0
    check = report["checks"][0]
    assert check["id"] == "identity_matches_product"
    assert check["ok"]

    code, report, _ = run(
        ["projline", "hua", "--field", "F7", "--x", "3", "--y", "5"], capsys)
    assert code == 0
    results = report["results"]
    assert results["triple_product"] == results["direct_product"] == "3"


def test_projline_hua_with_infinity(capsys):
    code, report, _ = run(
        ["projline", "hua", "--field", "F7", "--x", "inf", "--y", "2"],
        capsys)
    assert code == 0
    assert report["results"]["x"] == "inf"


def test_projline_recover(capsys):
    code, report, _ = run(
        ["projline", "recover", "--field", "F9", "--samples", "40",
         "--seed", "7"], capsys)
    assert code == 0
    assert report["results"]["checked"] >= 40
    assert report["results"]["failures"] == []
    assert report["seed"] == 7


def test_building_verify_reports_three_axioms(capsys):
    code, report, _ = run(
        ["building", "verify", "--geometry", "PG2:q=2"], capsys)
    assert code == 0
    ids = {c["id"] for c in report["checks"]}
    assert ids == {"B1_apartments", "B2_w_consistency", "B3_thickness"}
    assert report["results"]["chambers"] == 21


def test_building_cells_json_shape(capsys):
    code, report, _ = run(
        ["building", "cells", "--geometry", "PG2:q=2"], capsys)
    assert code == 0
    cells = report["results"]["cells"]
    assert cells["e"] == 1
    assert cells["010"] == 8
    assert sum(cells.values()) == 21


def test_building_coords_single_word(capsys):
    code, report, _ = run(
        ["building", "coords", "--geometry", "PG2:q=3",
         "--word", "0,1,0"], capsys)
    assert code == 0
    rows = report["results"]["coordinates"]
    assert len(rows) == 1
    assert rows[0]["cell_size"] == 27
    assert rows[0]["bijective"]


def test_building_coords_all_words(capsys):
    code, report, _ = run(
        ["building", "coords", "--geometry", "W:q=2"], capsys)
    assert code == 0
    rows = report["results"]["coordinates"]
    assert len(rows) == 8
    assert all(r["bijective"] for r in rows)


def test_moufang_check_full(capsys):
    code, report, _ = run(
        ["moufang", "check", "--geometry", "PG2:q=2", "--mu",
         "--commutators"], capsys)
    assert code == 0
    assert report["results"]["roots_checked"] == 84
    assert report["results"]["orbit_counts"] == [2]
    assert report["results"]["mu"]["mu_unique"]
    ids = [c["id"] for c in report["checks"]]
    assert "mu_product_formula:PG2:q=2" in ids
    assert "commutator_containments:PG2:q=2" in ids


def test_moufang_check_needs_geometry(capsys):
    assert cli.main(["moufang", "check"]) == 2
    capsys.readouterr()


def test_moufang_filtration(capsys):
    code, report, _ = run(
        ["moufang", "filtration", "--field", "Laurent:q=3,prec=8",
         "--from", "0", "--to", "3"], capsys)
    assert code == 0
    assert report["results"]["indices"] == [3, 3, 3, 3]


def test_bt_tree_with_dot_export(tmp_path, capsys):
    dot = tmp_path / "ball.dot"
    code, report, _ = run(
        ["bt", "tree", "--field", "Q3", "--radius", "2",
         "--dot", str(dot)], capsys)
    assert code == 0
    assert report["results"]["tree"]["vertex_count"] == 17
    text = dot.read_text()
    assert text.startswith("graph tree_ball {")
    assert text.count(" -- ") == 16


def test_bt_iwasawa(capsys):
    code, report, _ = run(
        ["bt", "iwasawa", "--field", "Qp:p=5,prec=8", "--samples", "40",
         "--seed", "2"], capsys)
    assert code == 0
    assert report["results"]["iwasawa"]["verified"] == 40


def test_bt_boundary(capsys):
    code, report, _ = run(
        ["bt", "boundary", "--field", "Q2", "--depth", "3"], capsys)
    assert code == 0
    assert report["results"]["boundary"]["orbit_count"] == 1
    assert report["results"]["boundary"]["classes"] == 12


def test_bad_field_spec_is_usage_error(capsys):
    assert cli.main(["field", "classify", "--field", "Fq:q=6"]) == 2
    assert "prime power" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bt", "tree", "--field", "Q2", "--no-such-flag"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_radius_beyond_precision_is_usage_error(capsys):
    assert cli.main(["bt", "tree", "--field", "Q2", "--radius", "40"]) == 2
    capsys.readouterr()


def test_failing_check_exits_one(monkeypatch, capsys):
    def broken(field, pairs, seed):
        return {"field": "X", "pairs_compared": 0, "skipped": 0,
                "failures": [{"x": "0"}], "ok": False}
    monkeypatch.setattr(cli, "recovery_check", broken)
    code, report, err = run(
        ["projline", "recover", "--field", "F7", "--samples", "5"], capsys)
    assert code == 1
    assert report["checks_failed"] == 1
    assert report["failures"][0]["id"] == "recovered_operations_match"
    assert "FAILED" in err


def test_json_only_silences_stderr(capsys):
    code, report, err = run(
        ["field", "classify", "--field", "F5", "--json-only"], capsys)
    assert code == 0
    assert err == ""


def test_all_quick_profile_deterministic(capsys):
    code1, report1, _ = run(
        ["all", "--profile", "quick", "--seed", "1", "--json-only"], capsys)
    code2, report2, _ = run(
        ["all", "--profile", "quick", "--seed", "1", "--json-only"], capsys)
    assert code1 == code2 == 0
    assert report1["checks_failed"] == 0
    assert report1["checks_run"] >= 30
    report1.pop("wall_time_seconds")
    report2.pop("wall_time_seconds")
    assert report1 == report2
