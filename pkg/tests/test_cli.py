import io
import shutil
import subprocess
import sys

import pytest

from arithphase import cli


def run_main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_table_totient_stdout(capsys):
    code, out, err = run_main(["table", "totient", "--max", "10"], capsys)
    assert code == 0 and err == ""
    assert out.splitlines() == [
        "n,value",
        "1,1", "2,1", "3,2", "4,2", "5,4",
        "6,2", "7,6", "8,4", "9,6", "10,4",
    ]


def test_table_ramanujan_fixed_modulus(capsys):
    code, out, _ = run_main(["table", "ramanujan", "--q", "6", "--nmax", "6"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "n,value",
        "0,2", "1,1", "2,-1", "3,-2", "4,-1", "5,1", "6,2",
    ]


def test_table_carmichael(capsys):
    code, out, _ = run_main(["table", "carmichael", "--max", "8"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "8,2"


def test_table_kloosterman_grid(capsys):
    code, out, _ = run_main(["table", "kloosterman", "--q", "5", "--max", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,l,re,im,integer"
    assert lines[1] == "0,0,4,0,4"
    assert len(lines) == 1 + 3 * 3
    # the irrational entries leave the integer column empty
    cells = {tuple(ln.split(",")[:2]): ln.split(",")[4] for ln in lines[1:]}
    assert cells[("1", "1")] == ""


def test_table_to_file(tmp_path, capsys):
    out = tmp_path / "moebius.csv"
    code, _, _ = run_main(["table", "moebius", "--max", "4", "--out", str(out)], capsys)
    assert code == 0
    assert out.read_text() == "n,value\n1,1\n2,-1\n3,-1\n4,0\n"


def test_table_errors(capsys):
    code, _, err = run_main(["table", "legendre", "--max", "5"], capsys)
    assert code == 2 and err.startswith("error:")
    code, _, err = run_main(["table", "ramanujan", "--max", "5"], capsys)
    assert code == 2 and "q" in err
    code, _, err = run_main(["table", "totient", "--max", "-1"], capsys)
    assert code == 2
    code, out, _ = run_main(["table", "totient", "--max", "0"], capsys)
    assert code == 0 and out == "n,value\n"  # empty table is legal


def test_fig3_exact_rational_rows(tmp_path, capsys):
    out = tmp_path / "circles.csv"
    code, _, _ = run_main(
        ["fig", "fig3", "--out", str(out), "--params", "order=5"], capsys
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# figure: fig3"
    assert lines[1] == "# params: order=5"
    assert lines[2] == (
        "p,q,center_x_num,center_x_den,center_y_num,center_y_den,"
        "radius_num,radius_den"
    )
    rows = [ln.split(",") for ln in lines[3:]]
    assert len(rows) == 11  # |F_5|
    assert rows[0] == ["0", "1", "0", "1", "1", "2", "1", "2"]
    for row in rows:
        assert all(field.lstrip("-").isdigit() for field in row)
        p, q = int(row[0]), int(row[1])
        assert (int(row[4]), int(row[5])) == (1, 2 * q * q) or (p, q) == (0, 1)


def test_fig5_header_and_first_row(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run_main(
        ["fig", "fig5", "--out", str(out), "--params", "qmax=12"], capsys
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "# params: beta_a=0 beta_b=1 qmax=12 window=totient_inclusive"
    assert lines[2] == "q,value_beta_a,value_beta_b,mangoldt_fit"
    assert lines[3] == "2,0,0.722091449378,3.14159265359"
    assert len(lines) == 3 + 11  # q = 2..12


def test_fig6_beta_grid(tmp_path, capsys):
    out = tmp_path / "beta.csv"
    code, _, _ = run_main(
        ["fig", "fig6", "--out", str(out), "--params",
         "beta_max=0.1", "step=0.05", "q_a=5", "q_b=6"],
        capsys,
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[2] == "beta,value_q5,value_q6"
    assert len(lines) == 3 + 3
    assert [ln.split(",")[0] for ln in lines[3:]] == ["0", "0.05", "0.1"]


def test_fig1_slope_footers(tmp_path, capsys):
    out = tmp_path / "spectrum.csv"
    code, _, _ = run_main(
        ["fig", "fig1", "--out", str(out), "--params", "tmax=4096"], capsys
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "# params: f_hi=0.25 f_lo=0.0009765625 tmax=4096"
    assert lines[-3] == "# slope: -1.19874227726"
    assert lines[-2] == "# slope_stderr: 0.042589625676"
    assert lines[-1] == "# fit_band: 0.0009765625,0.25"


def test_fig_rerun_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run_main(
            ["fig", "fig5", "--out", str(out), "--params", "qmax=15"], capsys
        )[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_fig_threaded_byte_identical(tmp_path, capsys, monkeypatch):
    serial, threaded = tmp_path / "s.csv", tmp_path / "t.csv"
    monkeypatch.delenv("ARITHPHASE_THREADS", raising=False)
    run_main(["fig", "fig8", "--out", str(serial), "--params", "qmax=20"], capsys)
    monkeypatch.setenv("ARITHPHASE_THREADS", "4")
    run_main(["fig", "fig8", "--out", str(threaded), "--params", "qmax=20"], capsys)
    assert serial.read_bytes() == threaded.read_bytes()


def test_fig_default_output_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run_main(["fig", "fig3", "--params", "order=3"], capsys)
    assert code == 0
    assert (tmp_path / "fig3.csv").is_file()


def test_fig_stream_mode():
    buf = io.StringIO()
    cli.run_figure(
        cli.FigureJob(figure_id="fig3", params={"order": 2}, output_path=""),
        stream=buf,
    )
    assert buf.getvalue().startswith("# figure: fig3\n# params: order=2\n")


def test_fig_errors(tmp_path, capsys):
    code, _, err = run_main(["fig", "fig11"], capsys)
    assert code == 2 and "unknown figure" in err
    code, _, err = run_main(
        ["fig", "fig5", "--out", str(tmp_path / "x.csv"), "--params", "qmax=12",
         "cutoff=3"],
        capsys,
    )
    assert code == 2 and "unknown parameter" in err
    code, _, err = run_main(
        ["fig", "fig5", "--out", str(tmp_path / "x.csv"), "--params", "qmax:12"],
        capsys,
    )
    assert code == 2 and "key=value" in err
    code, _, err = run_main(
        ["fig", "fig5", "--out", str(tmp_path / "x.csv"), "--params",
         "window=diagonal"],
        capsys,
    )
    assert code == 2
    code, _, err = run_main(
        ["fig", "fig3", "--out", str(tmp_path / "no" / "dir" / "x.csv")], capsys
    )
    assert code == 1


def test_console_script_roundtrip(tmp_path):
    exe = shutil.which("arithphase")
    argv = [exe] if exe else [sys.executable, "-m", "arithphase"]
    proc = subprocess.run(
        argv + ["table", "totient", "--max", "3"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,value\n1,1\n2,1\n3,2\n"
