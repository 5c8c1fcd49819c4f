"""Special functions and numeric kernels shared by the rest of the package.

Gamma is evaluated with a Lanczos rational approximation (g = 607/128,
15 terms) on ``Re z >= 1/2`` and the reflection formula elsewhere.  Every
routine has a scalar entry point and an array kernel (``*_parts``) used by
the vectorized table builders.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import PoleError

__all__ = [
    "LogComplex",
    "sinpi",
    "is_nonpositive_integer",
    "log_gamma",
    "loggamma",
    "loggamma_parts",
    "recip_gamma",
    "det_complex",
    "det_exact",
    "GaussianRational",
    "log_sum_exp",
]

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _wrap_phase(phase):
    """Reduce angles to (-pi, pi]."""
    out = np.remainder(np.asarray(phase, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    out = np.where(out <= -np.pi, out + 2.0 * np.pi, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class LogComplex:
    """Nonzero complex number stored as ``exp(log_modulus) * exp(i * phase)``."""

    log_modulus: float
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "phase", _wrap_phase(self.phase))

    @classmethod
    def from_complex(cls, value: complex) -> "LogComplex":
        if value == 0:
            raise ValueError("zero has no logarithm")
        return cls(math.log(abs(value)), cmath.phase(value))

    def to_complex(self) -> complex:
        return cmath.rect(math.exp(self.log_modulus), self.phase)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_modulus + other.log_modulus, self.phase + other.phase)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_modulus - other.log_modulus, self.phase - other.phase)

    def reciprocal(self) -> "LogComplex":
        return LogComplex(-self.log_modulus, -self.phase)


def is_nonpositive_integer(z) -> bool:
    """Exact test for z in {0, -1, -2, ...}; no tolerance on purpose."""
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def sinpi(z):
    """sin(pi z) with argument reduction, so integer zeros are exact."""
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    r = (z.real - n) + 1j * z.imag
    sign = np.where(np.remainder(n, 2.0) == 0.0, 1.0, -1.0)
    out = sign * np.sin(np.pi * r)
    if out.ndim == 0:
        return complex(out)
    return out


def _lanczos_right(z):
    """Principal log Gamma for Re z >= 1/2 (array in, array out)."""
    zm1 = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for k in range(len(_LANCZOS_COEF) - 1, 0, -1):
        acc = acc + _LANCZOS_COEF[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def loggamma_parts(z):
    """Vectorized log|Gamma(z)|, arg Gamma(z) in (-pi, pi], and a pole mask.

    At poles the modulus entry is ``+inf`` and the phase is 0.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    log_mod = np.empty(z.shape)
    phase = np.empty(z.shape)
    pole = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.floor(z.real))
    right = (z.real >= 0.5) & ~pole
    left = ~right & ~pole
    if right.any():
        lg = _lanczos_right(z[right])
        log_mod[right] = lg.real
        phase[right] = lg.imag
    if left.any():
        zl = z[left]
        lg = _lanczos_right(1.0 - zl)
        s = sinpi(zl)
        s = np.atleast_1d(s)
        log_mod[left] = _LOG_PI - np.log(np.abs(s)) - lg.real
        phase[left] = -np.angle(s) - lg.imag
    log_mod[pole] = np.inf
    phase[pole] = 0.0
    return log_mod, np.atleast_1d(_wrap_phase(phase)), pole


def log_gamma(z) -> LogComplex:
    """Gamma(z) in log-polar form; raises :class:`PoleError` at z = 0, -1, ..."""
    if is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {complex(z)}")
    log_mod, phase, _ = loggamma_parts(complex(z))
    return LogComplex(float(log_mod[0]), float(phase[0]))


def loggamma(z) -> complex:
    """Principal branch of log Gamma (analytic off the negative real axis).

    The imaginary part on ``Re z < 1/2`` is obtained from the upward
    recurrence ``loggamma(z) = loggamma(z + n) - sum log(z + k)``, which
    pins the branch; the real part comes from the reflection formula.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return complex(_lanczos_right(np.array([z]))[0])
    n = int(math.ceil(0.5 - z.real))
    shifted = complex(_lanczos_right(np.array([z + n]))[0])
    imag = shifted.imag - math.fsum(cmath.phase(z + k) for k in range(n))
    log_mod, _, _ = loggamma_parts(z)
    return complex(float(log_mod[0]), imag)


def recip_gamma(z) -> complex:
    """1/Gamma(z); exactly 0 at nonpositive integers."""
    if is_nonpositive_integer(z):
        return 0j
    lc = log_gamma(z)
    value = cmath.rect(math.exp(-lc.log_modulus), -lc.phase)
    if complex(z).imag == 0.0:
        return complex(value.real, 0.0)
    return value


def det_complex(m) -> complex:
    """Determinant of a square complex matrix (LU with partial pivoting)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    if n == 1:
        return complex(a[0, 0])
    return complex(np.linalg.det(a))


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex rational ``re + i*im``; floats convert without rounding."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag))
        return cls(Fraction(v), Fraction(0))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / den,
                                (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, o):
        return GaussianRational.of(o) / self

    def __eq__(self, o):
        try:
            o = GaussianRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))


def _exact(x):
    if isinstance(x, (complex, GaussianRational)):
        return GaussianRational.of(x)
    return Fraction(x)


def det_exact(m: Sequence[Sequence]):
    """Exact determinant by fraction-free Bareiss elimination.

    Entries may be ints, Fractions, floats (taken at their exact binary
    value) or complex numbers (turned into :class:`GaussianRational`).
    """
    a = [[_exact(x) for x in row] for row in m]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def log_sum_exp(log_weights: Iterable[float], signs: Iterable[int] | None = None) -> float:
    """log(sum_i s_i exp(x_i)) with exactly rounded accumulation.

    ``-inf`` entries (exact zeros) are allowed.  With ``signs`` the signed
    sum must come out positive.
    """
    x = np.asarray(list(log_weights) if not isinstance(log_weights, np.ndarray) else log_weights,
                   dtype=float).ravel()
    if x.size == 0:
        raise ValueError("log_sum_exp of an empty sequence")
    if np.isnan(x).any() or np.isposinf(x).any():
        raise ValueError("log-weights must be finite or -inf")
    top = x.max()
    if top == -np.inf:
        return -math.inf
    terms = np.exp(x - top)
    if signs is not None:
        s = np.asarray(list(signs), dtype=float).ravel()
        if s.shape != x.shape:
            raise ValueError("signs and log-weights differ in length")
        terms = terms * s
    total = math.fsum(terms.tolist())
    if total <= 0.0:
        raise ValueError("signed sum is not positive")
    return float(top + math.log(total))
