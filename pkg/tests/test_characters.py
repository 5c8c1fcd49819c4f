import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from gtzw.characters import (OmegaPoint, SpectrumList, chi_omega, det_twist, f_omega, normalize_betas,
                             normalized_character, normalized_characters, omega_fourier_coefficients,
                             weyl_character_ratio, zw_character_restriction)
from gtzw.errors import OmegaError
from gtzw.signatures import box_signatures
from gtzw.zw_measure import ZwParams

CIRCLE = np.exp(1j * np.linspace(-3.0, 3.0, 32))


def random_omega(rng):
    ap = sorted(rng.uniform(0, 0.3, 2), reverse=True)
    bp = sorted(rng.uniform(0, 0.4, 2), reverse=True)
    am = sorted(rng.uniform(0, 0.3, 1), reverse=True)
    bm = sorted(rng.uniform(0, 0.4, 2), reverse=True)
    return OmegaPoint(ap, bp, am, bm, sum(ap) + sum(bp) + 0.2, sum(am) + sum(bm) + 0.1)


def test_trivial_omega():
    assert np.allclose(f_omega(OmegaPoint(), CIRCLE), 1)
    assert chi_omega(OmegaPoint(), []) == 1


def test_betas_equal_one_give_powers():
    om = OmegaPoint((), (1, 1, 1), (), (), 3, 0)
    assert np.allclose(f_omega(om, CIRCLE), CIRCLE ** 3, atol=1e-14)


def test_alpha_geometric_series():
    om = OmegaPoint((0.5,), (), (), (), 0.5, 0)
    assert np.allclose(f_omega(om, CIRCLE), 1 / (1 - 0.5 * (CIRCLE - 1)))
    k, c = omega_fourier_coefficients(om)
    assert math.fsum(np.abs(c).tolist()) == pytest.approx(1.0, abs=1e-12)
    # F = (2/3) / (1 - u/3): coefficients (2/3) 3^-k for k >= 0
    for kk in range(5):
        assert c[k == kk][0] == pytest.approx((2 / 3) * 3.0 ** -kk, abs=1e-12)


def test_gamma_plus_at_minus_one():
    c = 0.7
    om = OmegaPoint((), (), (), (), c, 0)
    assert chi_omega(om, [-1]) == pytest.approx(math.exp(-2 * c))


def test_multiplicativity(rng):
    om = random_omega(rng)
    s1 = SpectrumList(tuple(np.exp(1j * rng.uniform(-3, 3, 3))))
    s2 = SpectrumList(tuple(np.exp(1j * rng.uniform(-3, 3, 2))))
    assert chi_omega(om, s1 + s2) == pytest.approx(chi_omega(om, s1) * chi_omega(om, s2), rel=1e-13)


def test_omega_validation():
    with pytest.raises(OmegaError):
        OmegaPoint((0.5,), (), (), (), 0.2, 0).validate()
    with pytest.raises(OmegaError):
        OmegaPoint((), (0.9,), (), (0.8,), 1, 1).validate()
    assert OmegaPoint((Fraction(1, 2),), (), (), (), Fraction(1, 2), 0).is_valid()
    with pytest.raises(ValueError):
        SpectrumList((2.0,))


def test_det_twist_examples(rng):
    om = random_omega(rng)
    assert det_twist(om, 0) == om
    cube = det_twist(OmegaPoint(), 3)
    assert cube.beta_plus == (1, 1, 1) and cube.delta_plus == 3
    for k in (1, 2, -1, -3):
        tw = det_twist(om, k)
        assert np.allclose(f_omega(tw, CIRCLE), f_omega(om, CIRCLE) * CIRCLE ** k, atol=1e-12)
        assert float(tw.gamma_plus) == pytest.approx(float(om.gamma_plus))
        assert float(tw.gamma_minus) == pytest.approx(float(om.gamma_minus))


def test_normalize_betas_examples():
    om = OmegaPoint((), (0.2,), (), (0.1,), 0.5, 0.3)
    assert normalize_betas(om) == om
    raw = OmegaPoint((), (0.9,), (), (0.8,), 1.0, 0.9)
    fixed = normalize_betas(raw)
    assert fixed.beta_plus == pytest.approx((0.2,)) and fixed.beta_minus == pytest.approx((0.1,))
    assert np.allclose(f_omega(fixed, CIRCLE), f_omega(raw, CIRCLE), atol=1e-13)
    raw = OmegaPoint((), (1.0,), (), (0.5,), 1.0, 0.5)
    fixed = normalize_betas(raw)
    assert fixed.beta_plus == pytest.approx((0.5,)) and fixed.beta_minus == ()
    assert np.allclose(f_omega(fixed, CIRCLE), f_omega(raw, CIRCLE), atol=1e-13)


def test_characters_vs_weyl_ratio(rng):
    for n in (1, 2, 3, 4):
        x = np.exp(1j * rng.uniform(-np.pi, np.pi, n))
        sigs = box_signatures(n, -3, 3)
        fast = normalized_characters(sigs, x)
        for row, val in zip(sigs.tolist(), fast):
            assert val == pytest.approx(weyl_character_ratio(row, x), abs=1e-10)


def test_characters_repeated_eigenvalues():
    x = np.array([1j, 1j, -1.0])
    val = normalized_character((2, 1, 0), x)
    near = np.array([1j, 1j * cmath.exp(1e-7j), -1.0])
    assert val == pytest.approx(weyl_character_ratio((2, 1, 0), near), abs=1e-5)
    assert normalized_character((3, 1, -2), np.ones(3)) == pytest.approx(1)


def test_character_bounds_and_conjugation(rng):
    x = np.exp(1j * rng.uniform(-np.pi, np.pi, 3))
    sigs = box_signatures(3, -4, 4)
    vals = normalized_characters(sigs, x)
    assert np.all(np.abs(vals) <= 1 + 1e-10)
    duals = -sigs[:, ::-1]
    # the dual signature labels the conjugate representation
    assert np.allclose(normalized_characters(duals, x), np.conj(vals), atol=1e-10)


def test_zw_restriction_examples(rng):
    deg = ZwParams(0, 0, 1, 1)
    u = 1j
    val, defect = zw_character_restriction(deg, 1, [u])
    assert val == pytest.approx(0.5 * (1 + 1 / u), abs=1e-14) and defect == pytest.approx(0, abs=1e-15)
    p = ZwParams.principal(1.0 + 0.5j, 1.2 - 0.3j)
    val, defect = zw_character_restriction(p, 2, [])
    assert abs(val - 1) <= defect + 1e-12
    val, defect = zw_character_restriction(p, 2, np.exp(1j * rng.uniform(-3, 3, 2)))
    assert abs(val) <= 1 + defect + 1e-12
