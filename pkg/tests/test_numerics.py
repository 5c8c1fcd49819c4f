import cmath
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gtzw.errors import PoleError
from gtzw.numerics import (GaussianRational, det_complex, det_exact, log_gamma, log_sum_exp, loggamma,
                           loggamma_parts, recip_gamma, sinpi)


def cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n))


def test_log_gamma_trivial_values():
    assert log_gamma(1).log_modulus == pytest.approx(0, abs=1e-15)
    assert log_gamma(0.5).log_modulus == pytest.approx(0.5723649429247001, abs=1e-14)
    assert recip_gamma(1) == pytest.approx(1)
    assert recip_gamma(2.5) == pytest.approx(0.7522527780636751, rel=1e-13)


def test_poles():
    assert recip_gamma(-3) == 0
    assert recip_gamma(0) == 0
    with pytest.raises(PoleError):
        log_gamma(-2)
    with pytest.raises(PoleError):
        loggamma(0)
    _, _, pole = loggamma_parts(np.array([0, -1, -1.5, 2]))
    assert pole.tolist() == [True, True, False, False]


@pytest.mark.parametrize("z", [3 + 4j, 0.5 + 0.1j, -2.7 + 0.3j, -10.5 - 7j, 25 + 0.01j, 1e-3 + 1e-3j,
                               -0.5, -3.25, 170.2])
def test_loggamma_matches_mpmath(z):
    ref = complex(mp.loggamma(mp.mpc(z)))
    assert abs(loggamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))
    lc = log_gamma(z)
    g = mp.gamma(mp.mpc(z))
    assert lc.log_modulus == pytest.approx(float(mp.log(abs(g))), abs=1e-12 * max(1, abs(ref)))
    assert cmath.phase(cmath.rect(1, lc.phase - float(mp.arg(g)))) == pytest.approx(0, abs=1e-11)


@settings(max_examples=200, deadline=None)
@given(st.floats(-30, 30), st.floats(-30, 30))
def test_recip_gamma_property(x, y):
    z = complex(x, y)
    ref = complex(mp.rgamma(mp.mpc(z)))
    got = recip_gamma(z)
    assert abs(got - ref) <= 1e-11 * max(abs(ref), 1e-300) + 1e-300


def test_sinpi_exact_at_integers():
    vals = sinpi(np.arange(-5, 6).astype(complex))
    assert np.all(vals == 0)
    assert sinpi(0.5) == pytest.approx(1)


def test_det_small_cases():
    assert det_complex(np.eye(3)) == 1
    assert det_complex([[1, 2], [3, 4]]) == pytest.approx(-2)
    assert det_exact([[1, 2], [3, 4]]) == -2
    assert det_complex(np.zeros((0, 0))) == 1


def test_det_random_vs_cofactor(rng):
    for _ in range(20):
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        ref = cofactor_det(m.tolist())
        assert abs(det_complex(m) - ref) <= 1e-10 * abs(ref)


def test_det_exact_gaussian_rational(rng):
    m = [[complex(rng.integers(-5, 6), rng.integers(-5, 6)) for _ in range(5)] for _ in range(5)]
    ref = cofactor_det([[GaussianRational.of(v) for v in row] for row in m])
    got = det_exact(m)
    assert got == ref
    assert complex(got) == pytest.approx(complex(np.linalg.det(np.array(m))), rel=1e-10)


def test_det_exact_singular_and_pivot():
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[1, 2], [2, 4]]) == 0
    assert det_exact([[Fraction(1, 3), 0], [0, 3]]) == 1


def test_gaussian_rational_arithmetic():
    a = GaussianRational.of(1 + 2j)
    b = GaussianRational.of(Fraction(1, 2))
    assert complex(a * a) == -3 + 4j
    assert complex(a / a) == 1
    assert complex(a - b) == 0.5 + 2j
    assert hash(GaussianRational.of(3)) == hash(GaussianRational.of(3 + 0j))


def test_log_sum_exp():
    assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2))
    tiny = math.log(1e-300)
    assert log_sum_exp([tiny, tiny]) == pytest.approx(math.log(2e-300))
    assert log_sum_exp([-math.inf, 0.0]) == 0.0
    assert log_sum_exp([-math.inf]) == -math.inf
    assert log_sum_exp([0.0, math.log(0.5)], signs=[1, -1]) == pytest.approx(math.log(0.5))
    with pytest.raises(ValueError):
        log_sum_exp([])
    with pytest.raises(ValueError):
        log_sum_exp([0.0, 0.0], signs=[1, -1])


def test_log_sum_exp_vs_high_precision(rng):
    x = rng.normal(scale=30, size=10_000)
    mp.mp.dps = 50
    ref = mp.log(mp.fsum(mp.exp(mp.mpf(float(v))) for v in x))
    assert abs(log_sum_exp(x) - float(ref)) <= 1e-12 * abs(float(ref))
