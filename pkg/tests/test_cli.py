import json
import subprocess
import sys

import numpy as np
import pytest

from qdouble import cli, dsu2
from qdouble.cli import RunConfig, InputError, main, parse_angle, parse_twice, read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_hopf_csv(capsys):
    code, out, _ = run(capsys, "verify-hopf", "--group", "S3")
    assert code == 0
    rows = read_csv(out).rows
    assert len(rows) == 8 and all(r[2] == 1 for r in rows)


def test_verify_hopf_json(capsys):
    code, out, _ = run(capsys, "verify-hopf", "--group", "Z2", "--format", "json")
    body = json.loads(out)
    assert code == 0 and len(body["rows"]) == 8
    assert {r["axiom"] for r in body["rows"]} == set(cli.verify_hopf.__globals__["AXIOMS"])


def test_bad_group_file(tmp_path, capsys):
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"order": 5, "mult": loop}))
    code, _, err = run(capsys, "verify-hopf", "--group", f"file:{path}")
    assert code == 2
    assert "associative" in err and "*" in err


def test_unknown_group_and_missing_file(capsys):
    assert run(capsys, "fusion", "--group", "A7")[0] == 2
    assert run(capsys, "fusion", "--group", "file:/nonexistent.json")[0] == 2


def test_failed_verification_exit_code(capsys):
    # an impossible tolerance cannot fail exact zeros, so use the quadrature check
    code, _, err = run(capsys, "ortho", "--labels", "pi/2,1/2", "2pi/3,1/2", "--jmax", "1/2",
                       "--order", "8", "--tol", "1e-300")
    assert code == 1 and "failed" in err


def test_fusion_z2(capsys):
    code, out, _ = run(capsys, "fusion", "--group", "Z2")
    t = read_csv(out)
    assert code == 0 and t.columns == ["A", "alpha", "B", "beta", "C", "gamma", "N"]
    assert len(t.rows) == 16


def test_fusion_s3_vacuum_and_dimensions(capsys):
    from qdouble.catalog import builtin_group
    from qdouble.double import all_irreps
    code, out, _ = run(capsys, "fusion", "--group", "S3")
    rows = read_csv(out).rows
    assert code == 0
    dims = {r.label: r.dim for r in all_irreps(builtin_group("S3"))}
    total = {}
    for A, al, B, be, C, ga, N in rows:
        total[(A, al, B, be)] = total.get((A, al, B, be), 0) + N * dims[f"{C}:{ga}"]
        if (A, al) == ("C0", "triv"):
            assert (C, ga, N) == (B, be, 1)
    assert len(total) == 64
    for (A, al, B, be), d in total.items():
        assert d == dims[f"{A}:{al}"] * dims[f"{B}:{be}"]


def test_fusion_oracle_disagreement(monkeypatch, capsys):
    import qdouble.double as dbl
    monkeypatch.setattr(dbl, "_multiplicities_character", lambda a, b: {})
    assert run(capsys, "fusion", "--group", "Z2")[0] == 3


def test_char(capsys):
    code, out, _ = run(capsys, "char", "--group", "Z2", "--labels", "C1:chi1")
    rows = read_csv(out).rows
    assert code == 0 and len(rows) == 2 and rows[1][4] == -1


def test_cgc_matches_library_bitwise(capsys, tmp_path):
    out_path = tmp_path / "cgc.csv"
    code, _, _ = run(capsys, "cgc", "--labels", "pi/2,1/2", "2pi/3,-1/2", "--jmax", "1",
                     "--points", "3", "--out", str(out_path))
    assert code == 0
    table = read_csv(out_path.read_text())
    assert table.columns == cli.CGC_COLUMNS and len(table.rows) > 0
    a, b = dsu2.GenericIrrepLabel(np.pi / 2, 1), dsu2.GenericIrrepLabel(2 * np.pi / 3, -1)
    for row in table.rows:
        tj1, tm1, _, _, tj2, tm2, _, _, tj, tm, tn3, r3, re, im = row
        c = dsu2.dsu2_cgc(a, b, tn3, tj1, tm1, tj2, tm2, tj, tm, r3)
        assert (c.real, c.imag) == (re, im)


def test_csv_round_trip_exact():
    cfg = RunConfig("cgc", labels=["pi/2,1/2", "2pi/3,1/2"], twojmax=1, points=2)
    _, table = cli.cmd_cgc(cfg)
    again = read_csv(table.to_csv())
    assert again.columns == table.columns and again.rows == table.rows


def test_cgc_selection_violation(capsys):
    code, out, err = run(capsys, "cgc", "--labels", "pi/2,1/2", "2pi/3,1/2", "--n3", "1/2")
    assert code == 0 and "warning" in err
    assert read_csv(out).rows == []


def test_cgc_nongeneric(capsys):
    code, _, err = run(capsys, "cgc", "--labels", "0,1/2", "1,1/2")
    assert code == 2 and "generic" in err


def test_ortho(capsys):
    code, out, _ = run(capsys, "ortho", "--labels", "pi/2,1/2", "2pi/3,1/2", "--jmax", "3/2",
                       "--order", "64", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["max_defect"] < 1e-6
    for r in body["rows"]:
        assert abs(r["gram"] - r["expected"]) < 1e-10


def test_braid_check(capsys):
    assert run(capsys, "braid-check", "--group", "Z2")[0] == 0
    code, out, _ = run(capsys, "braid-check", "--group", "SU2", "--labels", "pi/2,1/2",
                       "2pi/3,1/2", "--points", "1", "--order", "16")
    assert code == 0 and max(r[-1] for r in read_csv(out).rows) < 1e-8


@pytest.mark.parametrize("argv", [
    ["ortho", "--labels", "pi/2,1/2", "2pi/3,1/2", "--order", "4"],
    ["ortho", "--labels", "pi/2,1/2", "2pi/3,1/2", "--tol", "-1"],
    ["ortho", "--labels", "pi/2,1/2", "2pi/3,1/2", "--jmax", "1/3"],
    ["ortho", "--labels", "pi/2,1/2"],
    ["cgc", "--labels", "pi/2;1/2", "2pi/3,1/2"],
    ["fusion", "--group", "S3", "--labels", "C0:triv"],
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["nosuchcommand"])
    assert exc.value.code == 2


def test_parsers():
    assert parse_angle("pi/2") == np.pi / 2
    assert parse_angle("2pi/3") == 2 * np.pi / 3
    assert parse_angle("2*pi/3") == 2 * np.pi / 3
    assert parse_angle("-pi") == -np.pi
    assert parse_angle("1.25") == 1.25
    assert parse_twice("3/2") == 3 and parse_twice("-0.5") == -1 and parse_twice("2") == 4
    with pytest.raises(InputError):
        parse_twice("1/3")
    with pytest.raises(InputError):
        parse_angle("tau")


def test_run_config_invariants():
    with pytest.raises(InputError):
        RunConfig("ortho", order=7)
    with pytest.raises(InputError):
        RunConfig("ortho", tol={"default": 0.0})
    with pytest.raises(InputError):
        RunConfig("plot")
    cfg = RunConfig("ortho", tol={"default": 1e-3})
    assert cfg.tolerance() == 1e-3


def test_floats_round_trip_17_digits():
    x = 0.1 + 0.2
    assert float(cli.fmt_float(x)) == x


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qdouble.cli", "verify-hopf", "--group", "Z3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("axiom,defect,ok")
