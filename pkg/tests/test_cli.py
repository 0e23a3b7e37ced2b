import csv
import io
import json

import pytest

from cghsat.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_OK, EXIT_USAGE, main, parse_budget


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_parse_budget():
    assert parse_budget("1e8") == 10**8
    assert parse_budget("500") == 500
    with pytest.raises(Exception):
        parse_budget("1.5")


def test_sat(capsys):
    code, out = run(capsys, "sat", "--n", "6", "--pattern", "M1")
    d = json.loads(out)
    assert code == EXIT_OK and d["value"] == 17 and d["exhaustive"] is True
    code, out = run(capsys, "sat", "--n", "6", "--pattern", "G0")
    assert json.loads(out)["value"] == 3
    code, out = run(capsys, "sat", "--n", "7", "--pattern", "D1", "--budget", "1e8")
    assert json.loads(out)["value"] >= 7


def test_sat_budget_exit(capsys):
    code, out = run(capsys, "sat", "--n", "8", "--pattern", "M1", "--budget", "5")
    assert code == EXIT_BUDGET and json.loads(out)["exhaustive"] is False


def test_sat_enumerate(capsys):
    code, out = run(capsys, "sat", "--n", "7", "--pattern", "M1", "--enumerate", "--witnesses")
    d = json.loads(out)
    assert d["classes"] == 1 and len(d["witnesses"][0]["edges"]) == 25


def test_usage_errors(capsys):
    assert main(["sat", "--n", "6"]) == EXIT_USAGE
    assert main(["sat", "--n", "6", "--pattern", "Q7"]) == EXIT_USAGE
    assert main(["construct", "m2", "--n", "6"]) == EXIT_USAGE
    assert "consecutive triple" in capsys.readouterr().err


def test_construct(capsys):
    code, out = run(capsys, "construct", "star_plus", "--n", "9")
    assert code == EXIT_OK and json.loads(out)["actual_size"] == 44
    code, out = run(capsys, "construct", "d2_sum", "--n", "30", "--verify")
    d = json.loads(out)
    assert code == EXIT_OK and all(d["checks"].values())
    code, out = run(capsys, "construct", "d1_chords", "--n", "8", "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["actual_size"] == "12"


def test_structural_sat(capsys):
    code, out = run(capsys, "structural-sat", "--n", "20", "--r", "3")
    assert json.loads(out)["value"] == 220
    code, out = run(capsys, "structural-sat", "--n", "8", "--r", "3")
    s = json.loads(out)["value"]
    code, out = run(capsys, "sat", "--n", "8", "--pattern", "M1")
    assert json.loads(out)["value"] == s


def test_classify(capsys):
    code, out = run(capsys, "classify", "--n", "6", "--e", "0,1,3", "--f", "2,4,5")
    assert json.loads(out)["pattern"] == "M2"
    assert main(["classify", "--n", "6", "--e", "0,1,2", "--f", "0,1,2"]) == EXIT_USAGE


def test_closure_and_extract(capsys, tmp_path):
    code, out = run(capsys, "closure", "--pattern", "M1", "--n", "8", "--edge", "0,1,2")
    d = json.loads(out)
    assert code == EXIT_OK and d["size"] >= 34
    path = tmp_path / "h.json"
    path.write_text(json.dumps(d["cgh"]))
    code, out = run(capsys, "extract-tuple", "--input", str(path))
    assert code == EXIT_OK and len(json.loads(out)["tuple"]) % 2 == 1
    code, out = run(capsys, "closure", "--pattern", "M1", "--n", "6", "--edge", "0,1,2", "--edge", "3,4,5")
    assert code == EXIT_CHECK
    assert main(["closure", "--pattern", "M1"]) == EXIT_USAGE


def test_verify_table1_csv(capsys):
    code, out = run(capsys, "verify", "table1", "--nmax", "7", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert list(rows[0]) == ["pattern", "n", "sat_exact", "paper_lower", "paper_upper", "construction_size"]
    assert len(rows) == 16


def test_verify_markdown(capsys):
    code, out = run(capsys, "verify", "thm11", "--nmax", "7", "--format", "markdown")
    assert code == EXIT_OK and out.startswith("| check | status | detail |")


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text('[sat]\nbudget = "5"\nformat = "csv"\n')
    code, out = run(capsys, "sat", "--n", "8", "--pattern", "M1", "--config", str(cfg))
    assert code == EXIT_BUDGET and out.startswith("n,F,kind")


def test_threads_deterministic(capsys):
    _, a = run(capsys, "sat", "--n", "7", "--pattern", "S3", "--threads", "1", "--witnesses")
    _, b = run(capsys, "sat", "--n", "7", "--pattern", "S3", "--threads", "2", "--witnesses")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "nodes"}  # noqa: E731
    assert strip(a) == strip(b)
