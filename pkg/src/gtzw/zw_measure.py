"""The four-parameter zw-measures on signatures of U(N).

The unnormalized weight of a signature la of length N is

    P'_N(la) = Dim_N(la)^2 * prod_i g_i(la_i),
    g_i(l)   = 1 / (G(z-l+i) G(z'-l+i) G(w+N+1+l-i) G(w'+N+1+l-i)),

(G = Gamma) and its total over all signatures is the closed-form product
S_N(z, z', w, w').  Weights are handled as real log-weights; exact zeros
(reciprocal Gamma poles) are ``-inf``.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, GrowthLimitError, NonAdmissibleError
from .gt_graph import MeasureTable
from .numerics import GaussianRational, LogComplex, det_complex, det_exact, loggamma_parts, recip_gamma
from .signatures import Signature, box_signatures, log_weyl_dim, log_weyl_dim_array, weyl_dim

log = logging.getLogger(__name__)

__all__ = [
    "SeriesClass",
    "ZwParams",
    "classify",
    "is_admissible",
    "PPrimeEvaluator",
    "log_p_prime",
    "p_prime_complex",
    "p_prime_exact",
    "log_s_n",
    "s_n_exact",
    "build_table",
    "exact_table",
    "one_dim_coefficient",
    "fourier_coefficient",
    "fourier_determinant",
    "zw_norm_squared",
    "DougallReport",
    "verify_dougall",
    "KrattenthalerReport",
    "verify_krattenthaler",
]

# phase slack when deciding that a product of Gamma values is a positive real
_PHASE_TOL = 1e-8


@dataclass(frozen=True)
class SeriesClass:
    """Classification of a parameter pair (z, z')."""

    kind: str  # "principal", "complementary", "degenerate" or "none"
    m: int | None = None

    def __str__(self) -> str:
        if self.m is None:
            return self.kind
        return f"{self.kind}({self.m})"

    @property
    def in_z(self) -> bool:
        return self.kind != "none"


def _is_int(x: complex) -> bool:
    return x.imag == 0.0 and x.real == math.floor(x.real)


def classify(z, z_prime) -> SeriesClass:
    """Series of the pair (z, z'); exact comparisons, no tolerance."""
    z, zp = complex(z), complex(z_prime)
    if z.imag != 0.0 or zp.imag != 0.0:
        if zp == z.conjugate() and z.imag != 0.0:
            return SeriesClass("principal")
        return SeriesClass("none")
    x, y = z.real, zp.real
    for a, b in ((x, y), (y, x)):
        if a == math.floor(a) and b > a - 1:
            return SeriesClass("degenerate", int(a))
    if x != math.floor(x) and y != math.floor(y) and math.floor(x) == math.floor(y):
        return SeriesClass("complementary", int(math.floor(x)))
    return SeriesClass("none")


def _parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) == 1:
            return complex(float(v[0]), 0.0)
        re, im = v
        return complex(float(re), float(im))
    if isinstance(v, str):
        parts = [p for p in v.split(",") if p.strip()]
        return _parse_complex([float(p) for p in parts])
    return complex(v)


@dataclass(frozen=True)
class ZwParams:
    """Quadruple (z, z', w, w') with its series classification."""

    z: complex
    z_prime: complex
    w: complex
    w_prime: complex

    def __post_init__(self):
        for name in ("z", "z_prime", "w", "w_prime"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @classmethod
    def principal(cls, z, w) -> "ZwParams":
        z, w = complex(z), complex(w)
        return cls(z, z.conjugate(), w, w.conjugate())

    @classmethod
    def from_json(cls, data: dict) -> "ZwParams":
        z = _parse_complex(data["z"])
        w = _parse_complex(data["w"])
        zp = _parse_complex(data["z_prime"]) if "z_prime" in data else z.conjugate()
        wp = _parse_complex(data["w_prime"]) if "w_prime" in data else w.conjugate()
        return cls(z, zp, w, wp)

    def to_json(self) -> dict:
        return {name: [getattr(self, name).real, getattr(self, name).imag]
                for name in ("z", "z_prime", "w", "w_prime")}

    def swapped(self) -> "ZwParams":
        """(w, w', z, z'): parameters of the dual-signature symmetry."""
        return ZwParams(self.w, self.w_prime, self.z, self.z_prime)

    @property
    def total(self) -> complex:
        return self.z + self.z_prime + self.w + self.w_prime

    @property
    def series_class_z(self) -> SeriesClass:
        return classify(self.z, self.z_prime)

    @property
    def series_class_w(self) -> SeriesClass:
        return classify(self.w, self.w_prime)

    def admissibility_failure(self) -> str | None:
        """None when admissible, otherwise a one-line reason."""
        if not self.total.real > -1:
            return f"Re(z+z'+w+w')={self.total.real:g} is not > -1"
        cz, cw = self.series_class_z, self.series_class_w
        if not cz.in_z:
            return f"(z,z')=({self.z},{self.z_prime}) is in no principal/complementary/degenerate series"
        if not cw.in_z:
            return f"(w,w')=({self.w},{self.w_prime}) is in no principal/complementary/degenerate series"
        if cz.kind == "degenerate" and cw.kind == "degenerate" and cz.m + cw.m < 1:
            return f"both pairs degenerate with k={cz.m}, l={cw.m}: k+l={cz.m + cw.m}<1"
        return None

    @property
    def admissible(self) -> bool:
        return self.admissibility_failure() is None

    def support_bounds(self) -> tuple[int | None, int | None]:
        """(upper bound on la_1, lower bound on la_N); None where unbounded."""
        cz, cw = self.series_class_z, self.series_class_w
        upper = cz.m if cz.kind == "degenerate" else None
        lower = -cw.m if cw.kind == "degenerate" else None
        return upper, lower

    def is_integral(self) -> bool:
        return all(_is_int(v) for v in (self.z, self.z_prime, self.w, self.w_prime))


def is_admissible(p: ZwParams) -> bool:
    return p.admissible


def require_admissible(p: ZwParams) -> None:
    reason = p.admissibility_failure()
    if reason is not None:
        raise NonAdmissibleError(f"parameters are not admissible: {reason}", reason)


class PPrimeEvaluator:
    """Vectorized log P'_N with per-coordinate factor caches.

    ``log g_i(l)`` depends only on (i, l), so the factors are tabulated on
    an integer window that grows on demand.
    """

    def __init__(self, n: int, p: ZwParams):
        if n < 1:
            raise ValueError("level must be >= 1")
        self.n = n
        self.p = p
        self._lo = 0
        self._hi = -1
        self._logmod = np.zeros((n, 0))
        self._phase = np.zeros((n, 0))
        self._zero = np.zeros((n, 0), dtype=bool)

    def _factor_block(self, lo: int, hi: int):
        n, p = self.n, self.p
        ls = np.arange(lo, hi + 1)
        i = np.arange(1, n + 1)[:, None]
        args = [p.z - ls + i, p.z_prime - ls + i,
                p.w + n + 1 + ls - i, p.w_prime + n + 1 + ls - i]
        logmod = np.zeros((n, ls.size))
        phase = np.zeros((n, ls.size))
        zero = np.zeros((n, ls.size), dtype=bool)
        for a in args:
            a = np.broadcast_to(a, (n, ls.size))
            lm, ph, pole = loggamma_parts(a.ravel())
            lm, ph, pole = lm.reshape(a.shape), ph.reshape(a.shape), pole.reshape(a.shape)
            zero |= pole
            logmod -= np.where(pole, 0.0, lm)
            phase -= ph
        return logmod, phase, zero

    def _ensure(self, lo: int, hi: int) -> None:
        if self._hi >= self._lo and lo >= self._lo and hi <= self._hi:
            return
        if self._hi < self._lo:
            new_lo, new_hi = lo, hi
        else:
            new_lo, new_hi = min(lo, self._lo), max(hi, self._hi)
        span = new_hi - new_lo + 1
        pad = max(8, span // 4)
        new_lo -= pad
        new_hi += pad
        self._logmod, self._phase, self._zero = self._factor_block(new_lo, new_hi)
        self._lo, self._hi = new_lo, new_hi

    def parts(self, sigs: np.ndarray):
        """(log|P'|, phase, zero-mask) for an (M, N) array of signatures."""
        sigs = np.asarray(sigs, dtype=np.int64).reshape(-1, self.n)
        if sigs.shape[0] == 0:
            return np.zeros(0), np.zeros(0), np.zeros(0, dtype=bool)
        self._ensure(int(sigs.min()), int(sigs.max()))
        cols = sigs - self._lo
        rows = np.arange(self.n)
        logmod = 2.0 * log_weyl_dim_array(sigs) + self._logmod[rows, cols].sum(axis=1)
        phase = self._phase[rows, cols].sum(axis=1)
        zero = self._zero[rows, cols].any(axis=1)
        return logmod, phase, zero

    def log_weights(self, sigs: np.ndarray, check: bool = True) -> np.ndarray:
        """Real log P' (``-inf`` for exact zeros).

        With ``check`` a :class:`NonAdmissibleError` is raised when a nonzero
        weight is not a positive real number.
        """
        logmod, phase, zero = self.parts(sigs)
        if check:
            wrapped = np.remainder(phase + np.pi, 2 * np.pi) - np.pi
            bad = ~zero & (np.abs(wrapped) > _PHASE_TOL)
            if bad.any():
                k = int(np.argmax(bad))
                raise NonAdmissibleError(
                    f"P' is not a positive real at {np.asarray(sigs)[k].tolist()} "
                    f"(phase {wrapped[k]:.3g}); parameters are not admissible",
                    "negative or complex weight",
                )
        return np.where(zero, -np.inf, logmod)

    def complex_values(self, sigs: np.ndarray) -> np.ndarray:
        logmod, phase, zero = self.parts(sigs)
        with np.errstate(over="ignore"):
            vals = np.exp(logmod) * np.exp(1j * phase)
        return np.where(zero, 0j, vals)


def _sig(x) -> Signature:
    return x if isinstance(x, Signature) else Signature(x)


def log_p_prime(la, p: ZwParams, diagnostic: bool = False):
    """log P'_N(la | z, z', w, w').

    Returns ``-inf`` for an exact zero.  For non-admissible parameters the
    weight may be negative or complex: then a :class:`NonAdmissibleError`
    is raised, or with ``diagnostic=True`` the complex value of P' itself
    is returned instead of a log.
    """
    la = _sig(la)
    ev = PPrimeEvaluator(la.level, p)
    row = np.array([la.entries])
    if diagnostic:
        logmod, phase, zero = ev.parts(row)
        wrapped = math.remainder(float(phase[0]), 2 * math.pi)
        if not zero[0] and abs(wrapped) > _PHASE_TOL:
            return complex(ev.complex_values(row)[0])
    return float(ev.log_weights(row)[0])


def p_prime_complex(la, p: ZwParams) -> complex:
    la = _sig(la)
    return complex(PPrimeEvaluator(la.level, p).complex_values(np.array([la.entries]))[0])


def _recip_gamma_int(n: int) -> Fraction:
    return Fraction(0) if n <= 0 else Fraction(1, math.factorial(n - 1))


def _gamma_int(n: int) -> int:
    if n <= 0:
        raise DomainError(f"Gamma pole at {n}")
    return math.factorial(n - 1)


def _int_params(p: ZwParams) -> tuple[int, int, int, int]:
    if not p.is_integral():
        raise ValueError("exact rational weights need integer parameters")
    return tuple(int(v.real) for v in (p.z, p.z_prime, p.w, p.w_prime))


def p_prime_exact(la, p: ZwParams) -> Fraction:
    """P'_N(la) as an exact rational, for integer-valued parameters."""
    la = _sig(la)
    z, zp, w, wp = _int_params(p)
    n = la.level
    val = Fraction(weyl_dim(la) ** 2)
    for i, l in enumerate(la.entries, start=1):
        val *= (_recip_gamma_int(z - l + i) * _recip_gamma_int(zp - l + i)
                * _recip_gamma_int(w + n + 1 + l - i) * _recip_gamma_int(wp + n + 1 + l - i))
    return val


def s_n_exact(n: int, p: ZwParams) -> Fraction:
    """S_N as an exact rational, for integer-valued parameters."""
    z, zp, w, wp = _int_params(p)
    s = z + zp + w + wp
    val = Fraction(1)
    for i in range(1, n + 1):
        val *= Fraction(_gamma_int(s + i),
                        _gamma_int(z + w + i) * _gamma_int(z + wp + i) * _gamma_int(zp + w + i)
                        * _gamma_int(zp + wp + i) * _gamma_int(i))
    return val


def _log_s_n_parts(n: int, p: ZwParams) -> LogComplex:
    i = np.arange(1, n + 1)
    num = [p.total + i]
    den = [p.z + p.w + i, p.z + p.w_prime + i, p.z_prime + p.w + i, p.z_prime + p.w_prime + i,
           i.astype(complex)]
    logmod = 0.0
    phase = 0.0
    for a in num:
        lm, ph, pole = loggamma_parts(a)
        if pole.any():
            raise DomainError("S_N has a pole: Re(z+z'+w+w') <= -1")
        logmod += math.fsum(lm.tolist())
        phase += float(ph.sum())
    for a in den:
        lm, ph, pole = loggamma_parts(a)
        if pole.any():
            raise DomainError("S_N vanishes: one of z+w, z+w', z'+w, z'+w' is a negative integer")
        logmod -= math.fsum(lm.tolist())
        phase -= float(ph.sum())
    return LogComplex(logmod, phase)


def log_s_n(n: int, p: ZwParams, diagnostic: bool = False):
    """log S_N(z, z', w, w').

    Raises :class:`DomainError` outside the half-space Re(z+z'+w+w') > -1 or
    where S_N vanishes.  If S_N is not a positive real (possible only for
    non-admissible parameters) a :class:`DomainError` is raised unless
    ``diagnostic``, which returns the full :class:`LogComplex`.
    """
    if not p.total.real > -1:
        raise DomainError(f"Re(z+z'+w+w')={p.total.real:g} is not > -1")
    lc = _log_s_n_parts(n, p)
    if diagnostic:
        return lc
    if abs(lc.phase) > _PHASE_TOL:
        raise DomainError(f"S_N is not a positive real (phase {lc.phase:.3g})")
    return lc.log_modulus


def _initial_box(p: ZwParams, half_width: int) -> tuple[int, int]:
    upper, lower = p.support_bounds()
    if upper is not None and lower is not None:
        return lower, upper
    if upper is not None:
        return min(upper, 0) - half_width, upper
    if lower is not None:
        return lower, max(lower, 0) + half_width
    return -half_width, half_width


def _n_box(n: int, lo: int, hi: int) -> int:
    return math.comb(hi - lo + n, n)


def build_table(n: int, p: ZwParams, mass_tolerance: float = 1e-8, *,
                max_half_width: int = 2 ** 14, max_signatures: int = 6_000_000,
                initial_half_width: int | None = None) -> MeasureTable:
    """Probability table of P_N(. | p) on an adaptively doubled box.

    The box starts at half-width ``max(4, degenerate bounds)`` and doubles
    until the captured fraction of the exact S_N reaches
    ``1 - mass_tolerance``.  Doubly degenerate parameters have finite
    support, which is enumerated exactly.
    """
    require_admissible(p)
    log_sn = log_s_n(n, p)
    upper, lower = p.support_bounds()
    finite = upper is not None and lower is not None
    bounds = [abs(b) for b in (upper, lower) if b is not None]
    half = initial_half_width or max(4, *bounds) if bounds else (initial_half_width or 4)
    ev = PPrimeEvaluator(n, p)
    while True:
        lo, hi = _initial_box(p, half)
        count = _n_box(n, lo, hi)
        if count > max_signatures:
            raise GrowthLimitError(
                f"support box [{lo},{hi}]^{n} needs {count} signatures (cap {max_signatures})")
        sigs = box_signatures(n, lo, hi)
        logw = ev.log_weights(sigs)
        keep = np.isfinite(logw)
        sigs, logw = sigs[keep], logw[keep]
        table = MeasureTable.from_log_masses(
            n, sigs, logw, log_sn,
            meta={"params": p.to_json(), "box": [lo, hi], "log_s_n": log_sn},
        )
        log.debug("level %d box [%d,%d]: %d signatures, defect %.3e", n, lo, hi, len(table), table.defect)
        if finite or table.defect <= mass_tolerance:
            return table
        if half >= max_half_width:
            raise GrowthLimitError(
                f"defect {table.defect:.3e} > {mass_tolerance:g} at half-width {half} (cap {max_half_width})")
        half = min(2 * half, max_half_width)


def exact_table(n: int, p: ZwParams) -> dict[Signature, Fraction]:
    """Exact rational P_N for integer-valued doubly degenerate parameters."""
    require_admissible(p)
    upper, lower = p.support_bounds()
    if upper is None or lower is None:
        raise ValueError("exact tables need finite (doubly degenerate) support")
    s = s_n_exact(n, p)
    out = {}
    for row in box_signatures(n, lower, upper).tolist():
        v = p_prime_exact(row, p)
        if v:
            out[Signature(row)] = v / s
    return out


def one_dim_coefficient(l: int, z, w) -> complex:
    """Fourier coefficient of u -> (1+u)^z (1+1/u)^w at u^l."""
    z, w = complex(z), complex(w)
    if recip_gamma(1 + z - l) == 0 or recip_gamma(1 + w + l) == 0:
        return 0j
    lg = loggamma_parts(np.array([1 + z + w, 1 + z - l, 1 + w + l]))
    if lg[2][0]:
        raise DomainError("Gamma(1+z+w) has a pole")
    logmod = lg[0][0] - lg[0][1] - lg[0][2]
    phase = lg[1][0] - lg[1][1] - lg[1][2]
    return cmath.rect(math.exp(logmod), phase)


def fourier_coefficient(la, z, w) -> complex:
    """Coefficient of chi^la in the character expansion of f_{z,w|N} (closed form)."""
    la = _sig(la)
    z, w = complex(z), complex(w)
    n = la.level
    i = np.arange(1, n + 1)
    l = np.array(la.entries)
    top_m, top_p, top_pole = loggamma_parts(z + w + i)
    if top_pole.any():
        raise DomainError("Gamma(z+w+i) has a pole")
    a_m, a_p, a_pole = loggamma_parts(z - l + i)
    b_m, b_p, b_pole = loggamma_parts(w + n + 1 + l - i)
    if a_pole.any() or b_pole.any():
        return 0j
    gi_m, _, _ = loggamma_parts(i.astype(complex))
    logmod = math.fsum((top_m + gi_m - a_m - b_m).tolist()) + log_weyl_dim(la)
    phase = float((top_p - a_p - b_p).sum())
    return cmath.rect(math.exp(logmod), phase)


def _coefficient_ratios(lo: int, hi: int, z: complex, w: complex):
    """Exact c_1(l)/c_1(0) for lo <= l <= hi, from c_1(l+1)/c_1(l) = (z-l)/(1+w+l).

    Returns None when the recurrence meets an exact zero it cannot divide by.
    """
    zq, wq = GaussianRational.of(z), GaussianRational.of(w)
    out = {0: GaussianRational.of(1)}
    try:
        for l in range(0, hi):
            out[l + 1] = out[l] * (zq - l) / (wq + 1 + l)
        for l in range(0, lo, -1):
            out[l - 1] = out[l] * (wq + l) / (zq - l + 1)
    except ZeroDivisionError:
        return None
    return out


def fourier_determinant(la, z, w, exact: bool = True) -> complex:
    """Same coefficient as det[c_1(la_i - i + j)], the one-variable route.

    With ``exact`` the matrix is c_1(0) times a matrix of exact Gaussian
    rationals (the float inputs taken at face value), whose determinant is
    computed without rounding; the float LU route loses up to ~1e-8 relative
    accuracy on large, spread-out signatures.
    """
    la = _sig(la)
    n = la.level
    z, w = complex(z), complex(w)
    ls = [[la[i] - (i + 1) + (j + 1) for j in range(n)] for i in range(n)]
    anchor = one_dim_coefficient(0, z, w)
    if exact and n and anchor != 0:
        ratios = _coefficient_ratios(min(min(r) for r in ls), max(max(r) for r in ls), z, w)
        if ratios is not None:
            d = complex(det_exact([[ratios[l] for l in row] for row in ls]))
            return d * anchor ** n
    m = [[one_dim_coefficient(l, z, w) for l in row] for row in ls]
    return det_complex(m)


def zw_norm_squared(n: int, z, w) -> float:
    """Squared L^2(U(N)) norm of f_{z,w|N}."""
    z, w = complex(z), complex(w)
    if not z.real + w.real > -0.5:
        raise DomainError(f"Re z + Re w = {z.real + w.real:g} is not > -1/2")
    k = np.arange(1, n + 1).astype(complex)
    s = z + z.conjugate() + w + w.conjugate()
    num_a, _, _ = loggamma_parts(k)
    num_b, _, _ = loggamma_parts(k + s)
    den_a, _, _ = loggamma_parts(k + z + w.conjugate())
    den_b, _, _ = loggamma_parts(k + z.conjugate() + w)
    return math.exp(math.fsum((num_a + num_b - den_a - den_b).tolist()))


@dataclass(frozen=True)
class DougallReport:
    truncation: int
    lhs_partial: complex
    rhs: complex
    abs_error: float

    def to_json(self) -> dict:
        return {"K": self.truncation, "lhs_partial": [self.lhs_partial.real, self.lhs_partial.imag],
                "rhs": [self.rhs.real, self.rhs.imag], "abs_error": self.abs_error}


def verify_dougall(p: ZwParams, truncation: int) -> DougallReport:
    """Partial bilateral sum over |k| <= K against the Gamma-product closed form."""
    if not p.total.real > -1:
        raise DomainError(f"Re(z+z'+w+w')={p.total.real:g} is not > -1")
    k = np.arange(-truncation, truncation + 1)
    logmod = np.zeros(k.size)
    phase = np.zeros(k.size)
    zero = np.zeros(k.size, dtype=bool)
    for a in (p.z - k + 1, p.z_prime - k + 1, p.w + k + 1, p.w_prime + k + 1):
        lm, ph, pole = loggamma_parts(a)
        zero |= pole
        logmod -= np.where(pole, 0.0, lm)
        phase -= ph
    terms = np.where(zero, 0j, np.exp(logmod) * np.exp(1j * phase))
    lhs = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    rhs = _log_s_n_parts(1, p).to_complex()
    return DougallReport(truncation, lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class KrattenthalerReport:
    lhs: complex
    rhs: complex
    rel_error: float
    exact: bool

    def to_json(self) -> dict:
        return {"lhs": [self.lhs.real, self.lhs.imag], "rhs": [self.rhs.real, self.rhs.imag],
                "rel_error": self.rel_error, "exact": self.exact}


def verify_krattenthaler(x: Sequence, a: Sequence, b: Sequence, exact: bool = True) -> KrattenthalerReport:
    """det[prod_{k<j}(x_i+a_k) prod_{k>=j}(x_i+b_k)] vs prod_{i<j}(x_i-x_j) prod_{i<=j}(a_i-b_j).

    By default both sides are evaluated exactly (floats and complex numbers
    are taken at their exact binary values); ``exact=False`` uses the
    floating-point determinant instead.
    """
    n = len(x)
    if len(a) != n - 1 or len(b) != n - 1:
        raise ValueError("need len(a) == len(b) == len(x) - 1")
    if exact:
        conv = GaussianRational.of if any(isinstance(v, complex) for v in (*x, *a, *b)) else Fraction
        x, a, b = [conv(v) for v in x], [conv(v) for v in a], [conv(v) for v in b]
        one = conv(1)
    else:
        one = 1 + 0j
    m = []
    for i in range(n):
        row = []
        for j in range(1, n + 1):
            v = one
            for k in range(1, j):
                v = v * (x[i] + a[k - 1])
            for k in range(j, n):
                v = v * (x[i] + b[k - 1])
            row.append(v)
        m.append(row)
    rhs = one
    for i in range(n):
        for j in range(i + 1, n):
            rhs = rhs * (x[i] - x[j])
    for i in range(1, n):
        for j in range(i, n):
            rhs = rhs * (a[i - 1] - b[j - 1])
    if exact:
        lhs = det_exact(m)
        if lhs == rhs:
            err = 0.0
        else:
            err = abs(complex(lhs - rhs)) / abs(complex(rhs)) if rhs != 0 else abs(complex(lhs))
        return KrattenthalerReport(complex(lhs), complex(rhs), err, True)
    lhs = det_complex(m)
    rhs = complex(rhs)
    err = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
    return KrattenthalerReport(lhs, rhs, err, False)
