import json

import pytest
from hypothesis import given, settings, strategies as st

from cohsys import cli


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_exit_codes(capsys):
    code, out, _ = run(capsys, "classify", 6, 7, 4, "--format", "json")
    rec = json.loads(out)[0]
    assert code == 0 and rec["status"] == "EXACT" and (rec["lo"], rec["hi"]) == ("5/4", "2")
    code, out, _ = run(capsys, "classify", 4, 6, 2, "--format", "csv")
    assert code == 0 and "EMPTY_ALL" in out
    code, _, _ = run(capsys, "classify", 5, 6, 8)
    assert code == 10
    code, _, err = run(capsys, "classify", 3, 5, 0)
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        cli.main(["classify", "3", "five", "2"])
    assert exc.value.code == 2


def test_classify_unknown_exit_code(capsys):
    rec = cli.make_record(6, 10, 10)
    code, _, _ = run(capsys, "classify", 6, 10, 10)
    assert code == cli.EXIT_CODES[cli.kn.Status(rec.status)]


def test_classify_explain(capsys):
    code, out, err = run(capsys, "classify", 9, 15, 11, "--explain")
    assert code in (0, 10, 11) and "[prop1]" in err


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", 2, 3, 3, "large-alpha")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "certify", 5, 7, 9, "empty")
    assert code == 0 and json.loads(out)["citation"] == "prop5"
    code, out, _ = run(capsys, "certify", 5, 8, 9, "empty")
    assert code == 1 and not json.loads(out)["ok"]
    code, _, _ = run(capsys, "certify", 3, 5, 2, "large-alpha")
    assert code == 2


def test_sample(capsys):
    code, out, _ = run(capsys, "sample", 2, 3, 3, "9/10", 1000, 1)
    rep = json.loads(out)
    assert code == 0 and len(rep["violations"]) == 1
    assert rep["violations"][0]["alpha_range"] == "(0,1]"
    code, out, _ = run(capsys, "sample", 2, 3, 3, "2", "--budget", "300", "--exact")
    assert code == 0 and json.loads(out)["violations"] == []
    code, _, err = run(capsys, "sample", 2, 3, 3, "0.9")
    assert code == 2 and "floating" in err
    code, out, _ = run(capsys, "sample", 2, 3, 3, "3", "--construct", "quotient", "--budget", "50")
    assert code == 0


def test_small_commands(capsys):
    assert run(capsys, "beta", 6, 7, 4)[1].strip() == "1"
    code, out, _ = run(capsys, "extdim", 1, 1, 2, 1, 2, 0)
    assert json.loads(out) == {"c21": 4, "ext1": 4}
    code, out, _ = run(capsys, "conjectures", 5, 6, 8)
    assert "ex1_candidate" in json.loads(out)["flags"]
    assert run(capsys, "conjectures", 3, 6, 4)[0] == 2


def test_eval_bound():
    assert cli.eval_bound("a*n-1", {"a": 3, "n": 4}) == 11
    assert cli.eval_bound("(n+1)//2", {"n": 5}) == 3
    for bad in ("__import__('os')", "n**2", "x", "1.5", "n +"):
        with pytest.raises(cli.UsageError):
            cli.eval_bound(bad, {"n": 2})


def test_sweep_spec_validation():
    with pytest.raises(cli.UsageError):
        cli.SweepSpec(n="2:3", k="n")
    with pytest.raises(cli.UsageError):
        cli.SweepSpec(n="2:3", k="n", d="n", a="2")
    with pytest.raises(cli.UsageError):
        cli.SweepSpec(n="3:2", k="n", d="n").points()


def test_sweep_c6_rows_and_summary(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, err = run(capsys, "sweep", "--n", "2:6", "--a", "2:3", "--k", "n:a*n-1",
                       "--format", "csv", "--out", out)
    assert code == 0 and "summary: points=" in err
    recs = {r.key: r for r in cli.parse_records(out.read_text(), "csv")}
    for key in [(4, 5, 7), (5, 7, 9), (6, 9, 11)]:
        assert recs[key].status == "EMPTY_ALL"


def test_single_point_sweep_equals_classify(capsys):
    _, one, _ = run(capsys, "classify", 6, 7, 4, "--format", "csv")
    _, sw, _ = run(capsys, "sweep", "--n", "6", "--d", "7", "--k", "4", "--format", "csv")
    assert one == sw


def test_conjectures_mode_flags_ex1(capsys):
    _, out, _ = run(capsys, "sweep", "--n", "5", "--d", "6", "--k", "8",
                    "--mode", "conjectures", "--format", "json")
    assert "ex1_candidate" in json.loads(out)[0]["flags"]


def test_certify_mode_flags(capsys):
    _, out, _ = run(capsys, "sweep", "--n", "5", "--d", "7", "--k", "9",
                    "--mode", "certify", "--format", "json")
    assert "empty_certified:prop5" in json.loads(out)[0]["flags"]


def test_cache_and_jobs_byte_identical(capsys, tmp_path):
    base = ["sweep", "--n", "2:5", "--a", "1:3", "--k", "1:(a+1)*n", "--format", "json"]
    _, plain, _ = run(capsys, *base)
    cache = tmp_path / "c.jsonl"
    _, cold, err1 = run(capsys, *base, "--cache", cache)
    _, warm, err2 = run(capsys, *base, "--cache", cache, "--jobs", "2")
    _, par, _ = run(capsys, *base, "--jobs", "3")
    assert plain == cold == warm == par
    assert "cached=0" in err1 and "cached=0" not in err2


def test_cache_version_mismatch_invalidates(capsys, tmp_path):
    cache = tmp_path / "c.jsonl"
    run(capsys, "sweep", "--n", "6", "--d", "7", "--k", "4", "--cache", cache)
    lines = cache.read_text().splitlines()
    lines[0] = lines[0].replace(cli.kn.ENGINE_VERSION, "0.0.0")
    cache.write_text("\n".join(lines) + "\n")
    _, _, err = run(capsys, "sweep", "--n", "6", "--d", "7", "--k", "4", "--cache", cache)
    assert "cached=0" in err
    assert cli.kn.ENGINE_VERSION in cache.read_text().splitlines()[0]


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--n", "2", "--d", "3", "--k", "2",
                       "--out", tmp_path / "missing" / "x.csv")
    assert code == 1 and "cannot write" in err


def test_table_format(capsys):
    _, out, _ = run(capsys, "classify", 2, 3, 3)
    head, row = out.splitlines()
    assert head.split()[:3] == ["n", "d", "k"] and "EXACT" in row


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(-3, 25), st.integers(1, 25))
def test_csv_json_roundtrip(n, d, k):
    rec = cli.make_record(n, d, k, "conjectures")
    for fmt in ("csv", "json"):
        assert cli.parse_records(cli.render([rec], fmt), fmt) == [rec]
