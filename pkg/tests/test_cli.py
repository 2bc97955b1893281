import json

import pytest

from harmzeta.cli import run, run_jobs


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_main_identity(capsys):
    code, out, _ = invoke(capsys, "verify", "main-identity", "--poly", "z^2 - z", "--L", "1", "--order", "10")
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["status"] == "verified"
    assert {"identity", "params", "order", "status", "anchor"} <= set(rows[0])


@pytest.mark.parametrize("argv, message", [
    (["verify", "main-identity", "--poly", "z^2 + 1"], "P(0)=0 violated"),
    (["verify", "main-identity", "--poly", "z^2 + z"], "P(1)=0 violated"),
    (["verify", "main-identity", "--order", "0"], "order >= 1"),
    (["verify", "bachmann-q", "--q", "1.5"], "q must lie in (0, 1)"),
    (["verify", "three-term", "--omega", "-1"], "omega must be > 0"),
    (["verify", "kms", "--S", "a,b"], "cannot parse residue set"),
])
def test_invalid_input_exit_two(capsys, argv, message):
    code, _, err = invoke(capsys, *argv)
    assert code == 2
    assert message in err


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "nonsense"])
    assert exc.value.code == 2


def test_omega_limit_reports_mismatch(capsys):
    code, out, _ = invoke(capsys, "verify", "omega-limit", "--omega", "1e-4", "--rmax", "1", "--format", "text")
    assert code == 1
    assert "mismatch" in out


def test_bernoulli_text(capsys):
    code, out, _ = invoke(capsys, "bernoulli-omega", "--nmax", "2", "--format", "text")
    assert code == 0
    assert out.splitlines() == [
        "B2(omega) = -1/6*omega^2 + 1/6",
        "B4(omega) = 11/30*omega^4 - 1/3*omega^2 - 1/30",
    ]


def test_tables(capsys):
    code, out, _ = invoke(capsys, "table", "q", "--q", "0.5", "--kmax", "4")
    rows = json.loads(out)
    assert code == 0 and rows[0]["name"] == "G1"
    assert all(r["abs_err"] < 1e-9 for r in rows)
    code, out, _ = invoke(capsys, "table", "g-omega", "--omega", "0.7", "--kmax", "4", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0].split(",")[:4] == ["op", "params", "value_re", "value_im"]
    assert len(lines) == 4


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "stirling", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())[0]["identity"] == "stirling"


def test_exact_output_deterministic(capsys):
    argv = ["verify", "solvable", "--N", "3", "--order", "9"]
    first = invoke(capsys, *argv)
    second = invoke(capsys, *argv)
    assert first == second


def test_threads_keep_order(monkeypatch):
    jobs = [lambda i=i: i for i in range(20)]
    assert run_jobs(jobs, threads=4) == list(range(20))
    monkeypatch.setenv("HARMZETA_THREADS", "3")
    assert run_jobs(jobs) == list(range(20))


def test_all_suite(capsys):
    code, out, _ = invoke(capsys, "--all", "--format", "json")
    rows = json.loads(out)
    names = [r["identity"] for r in rows]
    assert names == sorted(names)
    failing = {r["identity"] for r in rows if r["status"] != "verified"}
    assert code == (1 if failing else 0)
    # the small-omega limit is the one check known to miss its tolerance (see README)
    assert failing <= {"omega-limit"}
