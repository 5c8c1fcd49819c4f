"""Points of the boundary Omega and the extreme characters of U(infinity).

An :class:`OmegaPoint` ``w`` defines the function on the unit circle

    F(u) = exp(g+ (u-1) + g- (1/u-1))
           * prod_i (1 + b+_i (u-1)) / (1 - a+_i (u-1))
                  * (1 + b-_i (1/u-1)) / (1 - a-_i (1/u-1))

with ``g = delta - sum(alpha + beta)`` on each side, and the character
value at a unitary matrix is the product of F over its eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable

import numpy as np
from scipy.signal import lfilter

from .errors import OmegaError
from .signatures import Signature, weyl_dim

__all__ = [
    "OmegaPoint",
    "SpectrumList",
    "f_omega",
    "chi_omega",
    "det_twist",
    "normalize_betas",
    "omega_fourier_coefficients",
    "normalized_character",
    "normalized_characters",
    "weyl_character_ratio",
    "zw_character_restriction",
]

_FLOAT_SLACK = 1e-12


def _clean(values: Iterable) -> tuple:
    vals = []
    for v in values:
        if not isinstance(v, (Fraction, int)):
            v = float(v)
        if v != 0:
            vals.append(v)
    return tuple(sorted(vals, reverse=True))


def _scalar(v):
    return v if isinstance(v, (Fraction, int)) else float(v)


def _le(a, b) -> bool:
    """a <= b, exact for rationals and with a tiny slack for floats."""
    if isinstance(a, (Fraction, int)) and isinstance(b, (Fraction, int)):
        return a <= b
    return float(a) <= float(b) + _FLOAT_SLACK * max(1.0, abs(float(b)))


@dataclass(frozen=True)
class OmegaPoint:
    """Voiculescu parameters; only nonzero alpha/beta entries are stored.

    Entries may be floats or :class:`~fractions.Fraction` (the latter keeps
    constraint checks exact).  Sequences are sorted on construction.
    """

    alpha_plus: tuple = ()
    beta_plus: tuple = ()
    alpha_minus: tuple = ()
    beta_minus: tuple = ()
    delta_plus: Real = 0
    delta_minus: Real = 0

    def __post_init__(self):
        for name in ("alpha_plus", "beta_plus", "alpha_minus", "beta_minus"):
            object.__setattr__(self, name, _clean(getattr(self, name)))
        object.__setattr__(self, "delta_plus", _scalar(self.delta_plus))
        object.__setattr__(self, "delta_minus", _scalar(self.delta_minus))

    @property
    def gamma_plus(self):
        return self.delta_plus - sum(self.alpha_plus) - sum(self.beta_plus)

    @property
    def gamma_minus(self):
        return self.delta_minus - sum(self.alpha_minus) - sum(self.beta_minus)

    def violations(self, require_beta_cap: bool = True) -> list[str]:
        out = []
        for name in ("alpha_plus", "beta_plus", "alpha_minus", "beta_minus"):
            if any(v < 0 for v in getattr(self, name)):
                out.append(f"{name} has negative entries")
        for side in ("plus", "minus"):
            total = sum(getattr(self, f"alpha_{side}")) + sum(getattr(self, f"beta_{side}"))
            if not _le(total, getattr(self, f"delta_{side}")):
                out.append(f"sum(alpha_{side}+beta_{side}) exceeds delta_{side}")
        if require_beta_cap:
            b1p = self.beta_plus[0] if self.beta_plus else 0
            b1m = self.beta_minus[0] if self.beta_minus else 0
            if not _le(b1p + b1m, 1):
                out.append(f"beta1+ + beta1- = {float(b1p + b1m):g} > 1")
        return out

    def validate(self, require_beta_cap: bool = True) -> "OmegaPoint":
        problems = self.violations(require_beta_cap)
        if problems:
            raise OmegaError("; ".join(problems))
        return self

    def is_valid(self, require_beta_cap: bool = True) -> bool:
        return not self.violations(require_beta_cap)

    def transposed(self) -> "OmegaPoint":
        """Swap the + and - data (character of the conjugate matrix)."""
        return OmegaPoint(self.alpha_minus, self.beta_minus, self.alpha_plus, self.beta_plus,
                          self.delta_minus, self.delta_plus)

    def to_json(self) -> dict:
        return {
            "alpha_plus": [float(v) for v in self.alpha_plus],
            "beta_plus": [float(v) for v in self.beta_plus],
            "alpha_minus": [float(v) for v in self.alpha_minus],
            "beta_minus": [float(v) for v in self.beta_minus],
            "delta_plus": float(self.delta_plus),
            "delta_minus": float(self.delta_minus),
        }

    @classmethod
    def from_json(cls, data: dict) -> "OmegaPoint":
        return cls(data.get("alpha_plus", ()), data.get("beta_plus", ()),
                   data.get("alpha_minus", ()), data.get("beta_minus", ()),
                   data.get("delta_plus", 0), data.get("delta_minus", 0))


@dataclass(frozen=True)
class SpectrumList:
    """Eigenvalues different from 1 (the rest is an implicit tail of 1s)."""

    eigenvalues: tuple[complex, ...] = ()

    def __post_init__(self):
        vals = tuple(complex(u) for u in self.eigenvalues)
        for u in vals:
            if abs(abs(u) - 1.0) > 1e-12:
                raise ValueError(f"eigenvalue {u} is not on the unit circle")
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def __add__(self, other: "SpectrumList") -> "SpectrumList":
        return SpectrumList(self.eigenvalues + other.eigenvalues)

    def padded(self, n: int) -> np.ndarray:
        if len(self) > n:
            raise ValueError(f"{len(self)} eigenvalues do not fit in U({n})")
        return np.concatenate([np.array(self.eigenvalues, dtype=complex),
                               np.ones(n - len(self), dtype=complex)])


def _as_spectrum(spec) -> SpectrumList:
    return spec if isinstance(spec, SpectrumList) else SpectrumList(tuple(spec))


def f_omega(omega: OmegaPoint, u):
    """F^omega(u) for scalar or array ``u`` on the unit circle."""
    u = np.asarray(u, dtype=complex)
    ui = np.conj(u)  # 1/u on the unit circle
    out = np.exp(float(omega.gamma_plus) * (u - 1) + float(omega.gamma_minus) * (ui - 1))
    for b in omega.beta_plus:
        out = out * (1 + float(b) * (u - 1))
    for a in omega.alpha_plus:
        out = out / (1 - float(a) * (u - 1))
    for b in omega.beta_minus:
        out = out * (1 + float(b) * (ui - 1))
    for a in omega.alpha_minus:
        out = out / (1 - float(a) * (ui - 1))
    if out.ndim == 0:
        return complex(out)
    return out


def chi_omega(omega: OmegaPoint, spectrum) -> complex:
    """Extreme character at a matrix with the given (non-1) eigenvalues."""
    spectrum = _as_spectrum(spectrum)
    if not len(spectrum):
        return 1 + 0j
    return complex(np.prod(f_omega(omega, np.array(spectrum.eigenvalues))))


def _twist_once(omega: OmegaPoint) -> OmegaPoint:
    b1m = omega.beta_minus[0] if omega.beta_minus else 0
    new = 1 - b1m
    return OmegaPoint(
        omega.alpha_plus,
        (new,) + omega.beta_plus,
        omega.alpha_minus,
        omega.beta_minus[1:],
        omega.delta_plus + new,
        omega.delta_minus - b1m,
    )


def det_twist(omega: OmegaPoint, k: int) -> OmegaPoint:
    """Parameters of chi^omega * det^k; delta is shifted so that gamma is kept."""
    omega.validate()
    if k < 0:
        return det_twist(omega.transposed(), -k).transposed()
    for _ in range(k):
        omega = _twist_once(omega)
    return omega.validate()


def normalize_betas(omega: OmegaPoint, max_steps: int = 10_000) -> OmegaPoint:
    """Rewrite beta pairs with b+ + b- > 1 so that the cap beta1+ + beta1- <= 1 holds.

    Uses [1+b+(u-1)][1+b-(1/u-1)] = [1+(1-b-)(u-1)][1+(1-b+)(1/u-1)], which leaves F
    unchanged pointwise.
    """
    omega.validate(require_beta_cap=False)
    for _ in range(max_steps):
        bp, bm = omega.beta_plus, omega.beta_minus
        if not bp or not bm or _le(bp[0] + bm[0], 1):
            return omega.validate()
        b_plus, b_minus = bp[0], bm[0]
        new_plus, new_minus = 1 - b_minus, 1 - b_plus
        omega = OmegaPoint(
            omega.alpha_plus,
            (new_plus,) + bp[1:],
            omega.alpha_minus,
            (new_minus,) + bm[1:],
            omega.delta_plus + new_plus - b_plus,
            omega.delta_minus + new_minus - b_minus,
        )
    raise OmegaError("beta normalization did not terminate")


def omega_fourier_coefficients(omega: OmegaPoint, n_nodes: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """(k, c_k) with F(u) ~ sum_k c_k u^k, by the trapezoidal rule on ``n_nodes`` points."""
    theta = 2 * np.pi * np.arange(n_nodes) / n_nodes
    vals = f_omega(omega, np.exp(1j * theta))
    coef = np.fft.fft(vals) / n_nodes
    k = np.fft.fftfreq(n_nodes, d=1.0 / n_nodes).astype(int)
    order = np.argsort(k)
    return k[order], coef[order]


def _complete_homogeneous(x: np.ndarray, kmax: int) -> np.ndarray:
    """h_0..h_kmax of the variables ``x`` (h_k = 0 for k < 0 is handled by callers)."""
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1.0
    for xi in x:
        h = lfilter([1.0], [1.0, -xi], h)
    return h


def normalized_characters(sigs: np.ndarray, eigenvalues) -> np.ndarray:
    """chi^la(U)/Dim(la) for each row of ``sigs`` at a matrix with these eigenvalues.

    Schur functions come from the Jacobi-Trudi determinant det[h_{mu_i - i + j}]
    of the shifted partition mu = la - la_N, times det(U)^{la_N}.  Repeated
    eigenvalues need no special handling.
    """
    sigs = np.asarray(sigs, dtype=np.int64)
    x = np.asarray(eigenvalues, dtype=complex)
    m, n = sigs.shape
    if x.size != n:
        raise ValueError(f"need {n} eigenvalues, got {x.size}")
    if m == 0:
        return np.zeros(0, dtype=complex)
    if n == 0:
        return np.ones(m, dtype=complex)
    shift = sigs[:, -1]
    mu = sigs - shift[:, None]
    kmax = int(mu[:, 0].max()) + n
    h = np.concatenate([np.zeros(n, dtype=complex), _complete_homogeneous(x, kmax)])
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    idx = mu[:, :, None] - i[None] + j[None] + n
    idx = np.clip(idx, 0, None)
    schur = np.linalg.det(h[idx])
    det_u = np.prod(x)
    dims = np.array([float(weyl_dim(row)) for row in sigs.tolist()])
    phase = np.exp(1j * np.angle(det_u) * shift) if abs(abs(det_u) - 1) < 1e-9 else det_u ** shift
    return schur * phase / dims


def normalized_character(la, eigenvalues) -> complex:
    la = la if isinstance(la, Signature) else Signature(la)
    return complex(normalized_characters(np.array([la.entries], dtype=np.int64).reshape(1, -1),
                                         eigenvalues)[0])


def weyl_character_ratio(la, eigenvalues) -> complex:
    """Normalized character via the Weyl alternant ratio; eigenvalues must be distinct."""
    la = la if isinstance(la, Signature) else Signature(la)
    x = np.asarray(eigenvalues, dtype=complex)
    n = la.level
    if n == 0:
        return 1 + 0j
    powers = np.array(la.entries) + n - 1 - np.arange(n)
    num = np.linalg.det(x[:, None] ** powers[None, :])
    den = np.linalg.det(x[:, None] ** (n - 1 - np.arange(n))[None, :])
    if abs(den) < 1e-300:
        raise ValueError("eigenvalues must be distinct")
    return complex(num / den / weyl_dim(la))


def zw_character_restriction(p, n: int, spectrum, mass_tolerance: float = 1e-8, table=None):
    """Truncated character expansion sum_la P_N(la) chi^la(U)/Dim(la).

    Returns ``(value, defect)``; since |chi^la/Dim| <= 1 the truncation error
    is at most ``defect``.
    """
    from .zw_measure import build_table

    spectrum = _as_spectrum(spectrum)
    if table is None:
        table = build_table(n, p, mass_tolerance)
    chars = normalized_characters(table.signatures, spectrum.padded(n))
    probs = table.probabilities
    value = complex(math.fsum((probs * chars.real).tolist()), math.fsum((probs * chars.imag).tolist()))
    return value, table.defect
