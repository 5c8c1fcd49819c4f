"""Acceptance suite: one test per criterion, each reported as PASS/FAIL in the terminal summary.

Run with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``).
Oracles here are independent of the library code paths: mpmath for Gamma
products and high-precision determinants, brute-force sums for pushdowns.
"""
import math
import subprocess
import sys
import time
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from gtzw.gt_graph import cotransition, verify_coherency, verify_coherency_exact
from gtzw.signatures import Signature
from gtzw.verify import (DEGENERATE_EXAMPLE, REFERENCE_PARAMS, check_cayley, check_cocycle,
                         check_embedding, check_fourier, check_rmt_statistics, check_samplers,
                         check_weyl)
from gtzw.zw_measure import (build_table, exact_table, fourier_coefficient, log_p_prime, log_s_n,
                             verify_dougall, verify_krattenthaler)

SEED = 0
mp.mp.dps = 40


def mp_s_n(n, p):
    """S_N as a direct mpmath Gamma product."""
    z, zp, w, wp = (mp.mpc(v.real, v.imag) for v in (p.z, p.z_prime, p.w, p.w_prime))
    out = mp.mpf(1)
    for i in range(1, n + 1):
        out *= mp.gamma(z + zp + w + wp + i) / (
            mp.gamma(z + w + i) * mp.gamma(z + wp + i) * mp.gamma(zp + w + i)
            * mp.gamma(zp + wp + i) * mp.gamma(i))
    return out


@pytest.mark.criterion(1)
def test_c01_dougall(record):
    worst, slowest = 0.0, 0.0
    assert len(REFERENCE_PARAMS["dougall"]) == 5
    for p in REFERENCE_PARAMS["dougall"]:
        assert p.series_class_z.kind == "principal" and p.total.real >= 1 - 1e-12
        t0 = time.perf_counter()
        rep = verify_dougall(p, 500)
        slowest = max(slowest, time.perf_counter() - t0)
        oracle = complex(mp_s_n(1, p))
        assert abs(rep.rhs - oracle) <= 1e-12 * abs(oracle)
        worst = max(worst, abs(rep.lhs_partial - oracle))
    record(f"max abs error {worst:.2e} (tol 1e-6), slowest set {slowest:.3f}s (< 1s)")
    assert worst <= 1e-6
    assert slowest < 1.0


@pytest.mark.criterion(2)
def test_c02_normalization(record):
    t0 = time.perf_counter()
    worst = 1.0
    assert len(REFERENCE_PARAMS["normalization"]) == 5
    for p in REFERENCE_PARAMS["normalization"]:
        for n in (1, 2, 3):
            assert math.isclose(log_s_n(n, p), float(mp.log(mp.re(mp_s_n(n, p)))), rel_tol=0, abs_tol=1e-11)
            t = build_table(n, p, 1e-7)
            worst = min(worst, t.captured)
            assert 1 - 1e-6 <= t.captured <= 1 + 1e-12, (p, n, t.captured)
    elapsed = time.perf_counter() - t0
    record(f"min captured fraction {worst:.9f} (>= 1-1e-6), {elapsed:.1f}s total (< 30s)")
    assert elapsed < 30


@pytest.mark.criterion(3)
def test_c03_coherency(record):
    worst = 0.0
    for p in REFERENCE_PARAMS["coherency"]:
        for n in (2, 3):
            upper = build_table(n, p, 1e-10)
            lower = build_table(n - 1, p, 1e-10)
            rep = verify_coherency(lower, upper, 1e-7)
            assert rep.max_abs_residual <= 1e-7
            assert rep.max_abs_residual <= 10 * rep.residual_bound + 1e-15
            worst = max(worst, rep.max_abs_residual)
    # brute-force pushdown oracle for a few level-1 points of the first set
    p = REFERENCE_PARAMS["coherency"][0]
    up, down = build_table(2, p, 1e-10), build_table(1, p, 1e-10)
    for nu in (-2, 0, 3):
        pushed = math.fsum(pr * float(cotransition((nu,), sig)) for sig, pr in up.items())
        assert abs(pushed - down.probability((nu,))) <= 1e-7
    exact = verify_coherency_exact(exact_table(1, DEGENERATE_EXAMPLE), exact_table(2, DEGENERATE_EXAMPLE))
    record(f"max residual {worst:.2e} (tol 1e-7); exact residual for (0,0,1,1) = {exact}")
    assert exact == 0


@pytest.mark.criterion(4)
def test_c04_degenerate_closed_case(record):
    t = build_table(1, DEGENERATE_EXAMPLE, 1e-12)
    assert sorted(tuple(s) for s, _ in t.items()) == [(-1,), (0,)]
    devs = [abs(t.log_mass((k,)) - t.log_target_total - math.log(0.5)) for k in (0, -1)]
    assert exact_table(1, DEGENERATE_EXAMPLE) == {Signature((0,)): Fraction(1, 2),
                                                  Signature((-1,)): Fraction(1, 2)}
    assert log_p_prime((1,), DEGENERATE_EXAMPLE) == -math.inf
    record(f"log-weight deviation {max(devs):.1e} (tol 1e-14)")
    assert max(devs) <= 1e-14


def _mp_one_dim(l, z, w):
    z, w = mp.mpc(z), mp.mpc(w)
    return mp.rgamma(1 + z - l) * mp.rgamma(1 + w + l) * mp.gamma(1 + z + w)


@pytest.mark.criterion(5)
def test_c05_fourier_and_krattenthaler(record):
    res = check_fourier(SEED, count=100)
    # high-precision determinant oracle on a fresh sample
    rng = np.random.default_rng(5)
    worst_oracle = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 7))
        la = sorted(rng.integers(-10, 11, n).tolist(), reverse=True)
        z = complex(rng.uniform(-0.4, 1.5), rng.uniform(-1, 1))
        w = complex(rng.uniform(-0.4, 1.5), rng.uniform(-1, 1))
        m = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                m[i, j] = _mp_one_dim(la[i] - i + j, z, w)
        ref = complex(mp.det(m))
        worst_oracle = max(worst_oracle, abs(fourier_coefficient(la, z, w) - ref) / abs(ref))
    worst_k = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 7))
        x = [int(v) for v in rng.choice(np.arange(-10, 11), n, replace=False)]
        a = [complex(v) for v in rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1)]
        b = [complex(v) for v in rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1)]
        rep = verify_krattenthaler(x, a, b)
        m = mp.matrix(n, n)
        for i in range(n):
            for j in range(1, n + 1):
                v = mp.mpc(1)
                for k in range(1, j):
                    v *= x[i] + mp.mpc(a[k - 1])
                for k in range(j, n):
                    v *= x[i] + mp.mpc(b[k - 1])
                m[i, j - 1] = v
        ref = complex(mp.det(m))
        worst_k = max(worst_k, abs(rep.rhs - ref) / abs(ref))
    record(res.summary + f"; mpmath oracles {worst_oracle:.1e} / {worst_k:.1e}")
    assert res.passed
    assert worst_oracle <= 1e-10 and worst_k <= 1e-10


@pytest.mark.criterion(6)
def test_c06_weyl_dimension(record):
    res = check_weyl(SEED)
    record(res.summary)
    assert res.metrics["checked"] == sum(math.comb(9 + n - 1, n) for n in range(1, 5))
    assert res.passed


@pytest.mark.criterion(7)
def test_c07_embedding(record):
    res = check_embedding(SEED, count=10_000)
    record(res.summary)
    assert res.passed


@pytest.mark.criterion(8)
def test_c08_rmt_statistics(record):
    t0 = time.perf_counter()
    res = check_rmt_statistics(SEED, samples=10_000)
    elapsed = time.perf_counter() - t0
    record(res.summary + f"; {elapsed:.1f}s (< 120s)")
    assert res.passed
    assert elapsed < 120


@pytest.mark.criterion(9)
def test_c09_cocycle(record):
    res = check_cocycle(SEED, count=100)
    record(res.summary)
    assert res.passed


@pytest.mark.criterion(10)
def test_c10_cayley(record):
    res = check_cayley(SEED, count=100)
    record(res.summary)
    assert res.passed


@pytest.mark.criterion(11)
def test_c11_samplers(record):
    res = check_samplers(SEED, draws=100_000)
    record(res.summary)
    assert res.passed


@pytest.mark.criterion(12)
def test_c12_determinism(record, tmp_path):
    cmd = [sys.executable, "-m", "gtzw.cli", "verify", "--seed", "0"]
    runs = [subprocess.run(cmd, capture_output=True, cwd=tmp_path, timeout=600) for _ in range(2)]
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout
    record(f"exit codes {codes}, byte-identical reruns: {same}")
    assert codes == [0, 0], runs[0].stderr.decode()[-2000:]
    assert same and runs[0].stdout


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
