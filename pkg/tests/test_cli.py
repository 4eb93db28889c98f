import io as stdio
import math
import subprocess
import sys

import numpy as np
import pytest

from spheredisc import io
from spheredisc.cli import run


def call(argv):
    buf = stdio.StringIO()
    code = run(argv, out=buf)
    lines = dict(line.split(" ", 1) for line in buf.getvalue().splitlines() if " " in line)
    return code, lines, buf.getvalue()


@pytest.fixture(scope="module")
def axes16(tmp_path_factory):
    p = tmp_path_factory.mktemp("cli") / "axes16.txt"
    p.write_text(io.format_vectors(np.vstack([np.eye(8), -np.eye(8)])))
    return p


def test_capvol():
    code, out, _ = call(["capvol", "--n", "3", "--theta", "1.0471975512"])
    assert code == 0
    assert abs(float(out["volume"]) - 0.25) <= 1e-10
    code, out, _ = call(["capvol", "--n", "3", "--delta", "0.25"])
    assert abs(float(out["angle"]) - math.pi / 3) <= 1e-9


def test_gauss():
    code, out, _ = call(["gauss", "--t", "0"])
    assert code == 0 and float(out["tail"]) == 0.5
    code, out, _ = call(["gauss", "--delta", "1e-6"])
    assert abs(float(out["inverse"]) - 4.7534243088228989482) <= 1e-11


def test_solve_axes(axes16, tmp_path):
    wit = tmp_path / "x.txt"
    trace = tmp_path / "trace.csv"
    code, out, _ = call(["solve", "--input", str(axes16), "--T", "1000000",
                         "--output", str(wit), "--trace", str(trace)])
    assert code == 0
    assert float(out["value"]) <= float(out["guarantee"])
    assert out["m"] == "16" and out["m_padded"] == "128"
    x = io.parse_vectors(wit.read_text())[0]
    assert abs(np.linalg.norm(x) - 1) <= 1e-9
    assert trace.read_text().startswith("t,phi,heavy_count,x_norm,max_weight")


def test_full_precision_output(axes16):
    _, out, _ = call(["solve", "--input", str(axes16), "--T", "20000"])
    value = float(out["value"])
    assert repr(value) == repr(float(f"{value:.17g}"))
    assert float(out["term_main"]) == math.sqrt(math.log(16)) * math.sqrt(2 / 3)


def test_reduce_then_solve(tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("p nae3 6 2\n1 2 3 0\n-4 5 6 0\n")
    vec = tmp_path / "v.txt"
    code, _, _ = call(["reduce", "--input", str(f), "--output", str(vec)])
    assert code == 0
    V = io.parse_vectors(vec.read_text())
    assert V.shape == (16, 6)
    code, out, _ = call(["solve", "--input", str(vec), "--T", "20000"])
    assert code == 0
    assert float(out["value"]) >= 1 / math.sqrt(6) - 1e-12


def test_reduce_to_stdout(tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("p nae3 3 0\n")
    code, _, text = call(["reduce", "--input", str(f)])
    assert code == 0 and text.splitlines()[0] == "3 6"


def test_witness(tmp_path):
    rng = np.random.default_rng(3)
    P = rng.standard_normal((20, 10))
    P /= np.linalg.norm(P, axis=1)[:, None]
    caps = tmp_path / "caps.txt"
    caps.write_text("theta 0.4\n" + io.format_vectors(P))
    code, out, _ = call(["witness", "--input", str(caps), "--T", "20000"])
    assert code == 0 and out["certified"] == "true"
    assert float(out["max_inner"]) < math.cos(0.4)
    caps.write_text("theta 1.5707963267948966\n" + io.format_vectors(np.array([[1.0] + [0] * 9, [-1.0] + [0] * 9])))
    code, out, _ = call(["witness", "--input", str(caps), "--T", "20000"])
    assert code == 1 and out["certified"] == "false"


def test_pack(tmp_path):
    pts = tmp_path / "pts.txt"
    code, out, _ = call(["pack", "--n", "6", "--m", "4", "--T", "5000", "--output", str(pts)])
    assert code == 0
    P = io.parse_vectors(pts.read_text())
    assert P.shape == (4, 6)
    assert float(out["max_pair_inner"]) <= float(out["guarantee"]) + 1e-6


def test_komlos(tmp_path):
    rng = np.random.default_rng(4)
    W = rng.standard_normal((20, 32))
    W /= np.linalg.norm(W, axis=0)
    mat = tmp_path / "W.txt"
    mat.write_text("columns\n" + io.format_vectors(W.T))
    code, out, _ = call(["komlos", "--input", str(mat), "--seed", "1"])
    assert code == 0
    assert float(out["inf_norm"]) <= float(out["certified_inf_norm"])
    assert float(out["certified_K"]) == 2000 * math.sqrt(2)


def test_input_errors(tmp_path, capsys):
    assert run(["solve", "--input", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n1 1 0\n")
    assert run(["solve", "--input", str(bad)]) == 2
    assert run(["capvol", "--n", "1", "--theta", "1.0"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ")


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["solve", "--bogus"])
    assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spheredisc.cli", "gauss", "--t", "1"],
                          capture_output=True, text=True, check=True)
    assert abs(float(proc.stdout.split()[1]) - 0.15865525393145705141) <= 1e-16
