import os
import subprocess
import sys

import numpy as np
import pytest

from stokes_tension import _hot
from stokes_tension.curve import fourier_curve

pytestmark = pytest.mark.skipif("numba" not in _hot.IMPLS, reason="numba not installed")

CURVE = fourier_curve(64, x_cos=[0.1, 1.3, 0.0, 0.1], y_sin=[0.0, 1.0, 0.15])


def both(name, *args):
    return _hot.IMPLS["numpy"][name](*args), _hot.IMPLS["numba"][name](*args)


def test_self_blocks_agree():
    c = CURVE
    a, b = both("self_blocks", c.position.copy(), c.tangent.copy(), c.speed.copy(), c.theta)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-14)


def test_star_norm_agree():
    a, b = both("star_norm", CURVE.position.copy(), CURVE.theta)
    assert a == pytest.approx(b, rel=1e-14)


def test_target_fields_agree(rng):
    c = CURVE
    pts = np.array([[3.0, 0.1], [0.2, -0.1], [-2.0, 2.0]])
    F = rng.standard_normal((64, 2))
    a, b = both("target_fields", pts, c.position.copy(), F, c.grid.weight)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


def test_double_layer_agree():
    c = CURVE
    pts = np.array([[0.2, 0.1], [3.0, 0.5]])
    a, b = both("double_layer", pts, c.position.copy(), c.normal.copy(), c.speed.copy(), c.grid.weight)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("flag, expected", [("0", "numpy"), ("off", "numpy"), ("1", "numba")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, STOKES_TENSION_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "import stokes_tension as s; print(s.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == expected


def test_table1_identical_under_numpy_backend():
    code = (
        "import numpy as np\n"
        "from stokes_tension import circle, solve_tension\n"
        "from stokes_tension.oracles import table1_force, table1_exact\n"
        "c = circle(32); s = solve_tension(c, table1_force(c.grid), 'mean_zero')\n"
        "print(repr(float(np.abs(s.sigma - table1_exact(c.grid)[0]).max())))\n"
    )
    env = dict(os.environ, STOKES_TENSION_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert float(out.stdout) < 1e-10


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_backends.py"
    mod = runpy.run_path(str(script))
    mod["main"](["--sizes", "16", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "self_blocks" in out and "speedup" in out
