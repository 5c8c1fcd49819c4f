"""Finite-N random-matrix constructions around U(N) and Hermitian matrices.

All functions accept a single matrix ``(N, N)`` or a batch ``(..., N, N)``.
Block notation: ``U = [[A, B], [C, D]]`` with ``D`` the lower-right corner.
"""
from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from .errors import DomainError, SingularCayleyError
from .numerics import loggamma_parts

__all__ = [
    "EXCEPTIONAL_TOL",
    "haar_unitary",
    "unitarity_residual",
    "canonical_projection",
    "corner_projection",
    "block_projection",
    "characteristic_function",
    "cayley",
    "inverse_cayley",
    "hermitian_projection",
    "f_zw",
    "f_zw_eigenvalues",
    "embed_group_element",
    "act",
    "group_multiply",
    "CocycleResult",
    "cocycle",
    "log_hua_pickrell_normalizer",
    "HuaPickrellDensity",
    "hua_pickrell_logdensity",
    "HuaPickrellSample",
    "sample_hua_pickrell",
    "effective_sample_size",
    "matrices_to_json",
    "write_gtrm",
    "read_gtrm",
]

EXCEPTIONAL_TOL = 1e-12


def haar_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed U(n) matrices: QR of a complex Ginibre matrix, phases fixed by diag(R)."""
    if n < 1:
        raise ValueError("N must be >= 1")
    shape = (n, n) if size is None else (size, n, n)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    eye = np.eye(u.shape[-1])
    return float(np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - eye).max())


def canonical_projection(u: np.ndarray) -> np.ndarray:
    """U(N) -> U(N-1): A - B (1+D)^{-1} C, or A when |1+D| < 1e-12."""
    u = np.asarray(u, dtype=complex)
    if u.shape[-1] < 2:
        raise ValueError("canonical projection needs N >= 2")
    a = u[..., :-1, :-1]
    b = u[..., :-1, -1:]
    c = u[..., -1:, :-1]
    one_d = 1.0 + u[..., -1, -1]
    exceptional = np.abs(one_d) < EXCEPTIONAL_TOL
    safe = np.where(exceptional, 1.0, one_d)
    out = a - (b @ c) / safe[..., None, None]
    return np.where(exceptional[..., None, None], a, out)


def block_projection(u: np.ndarray, m: int) -> np.ndarray:
    """One-shot A - B (1+D)^{-1} C with D the trailing (N-M)x(N-M) block."""
    u = np.asarray(u, dtype=complex)
    a, b, c, d = u[..., :m, :m], u[..., :m, m:], u[..., m:, :m], u[..., m:, m:]
    one_d = np.eye(d.shape[-1]) + d
    return a - b @ np.linalg.solve(one_d, c)


def corner_projection(u: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """(p_{M,N}(U), D): iterated canonical projection down to level M and the corner block."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[-1]
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= M < N, got M={m}, N={n}")
    v = u
    for _ in range(n - m):
        v = canonical_projection(v)
    return v, u[..., m:, m:].copy()


def characteristic_function(u: np.ndarray, m: int, zeta: complex) -> np.ndarray:
    """A + zeta B (1 - zeta D)^{-1} C."""
    u = np.asarray(u, dtype=complex)
    a, b, c, d = u[..., :m, :m], u[..., :m, m:], u[..., m:, :m], u[..., m:, m:]
    return a + zeta * (b @ np.linalg.solve(np.eye(d.shape[-1]) - zeta * d, c))


def _hermitize(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + np.conj(np.swapaxes(x, -1, -2)))


def cayley(u: np.ndarray, max_condition: float = 1e12) -> np.ndarray:
    """X = i (1 - U)(1 + U)^{-1}; raises :class:`SingularCayleyError` if 1+U is near-singular."""
    u = np.asarray(u, dtype=complex)
    eye = np.eye(u.shape[-1])
    one_u = eye + u
    cond = np.linalg.cond(one_u)
    worst = float(np.max(cond))
    if not np.isfinite(worst) or worst > max_condition:
        raise SingularCayleyError(f"1+U is numerically singular (condition number {worst:.3g})", worst)
    # (1-U) and (1+U) commute, so solving from the right is fine
    x = 1j * np.swapaxes(np.linalg.solve(np.swapaxes(one_u, -1, -2), np.swapaxes(eye - u, -1, -2)), -1, -2)
    return _hermitize(x)


def inverse_cayley(x: np.ndarray) -> np.ndarray:
    """U = (i - X)(i + X)^{-1} for Hermitian X."""
    x = _hermitize(np.asarray(x, dtype=complex))
    eye = np.eye(x.shape[-1])
    return np.swapaxes(np.linalg.solve(np.swapaxes(1j * eye + x, -1, -2),
                                       np.swapaxes(1j * eye - x, -1, -2)), -1, -2)


def hermitian_projection(x: np.ndarray) -> np.ndarray:
    """Delete the last row and column."""
    return np.asarray(x)[..., :-1, :-1]


def f_zw_eigenvalues(eigs: np.ndarray, z, w) -> np.ndarray:
    """prod_k (1+u_k)^z (1+conj u_k)^w over the last axis (principal branches)."""
    eigs = np.asarray(eigs, dtype=complex)
    z, w = complex(z), complex(w)
    one_u = 1.0 + eigs
    singular = (np.abs(one_u) < EXCEPTIONAL_TOL).any(axis=-1)
    safe = np.where(np.abs(one_u) < EXCEPTIONAL_TOL, 1.0, one_u)
    logs = np.log(safe)
    val = np.exp((z * logs + w * np.conj(logs)).sum(axis=-1))
    return np.where(singular, 0j, val)


def f_zw(u: np.ndarray, z, w):
    """f_{z,w|N}(U) via the eigenvalues of U; exactly 0 when -1 is (numerically) an eigenvalue."""
    out = f_zw_eigenvalues(np.linalg.eigvals(np.asarray(u, dtype=complex)), z, w)
    return complex(out) if np.ndim(out) == 0 else out


def embed_group_element(g: tuple[np.ndarray, np.ndarray], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pad (U1, U2) in U(M) x U(M) with an identity block to U(N) x U(N)."""
    out = []
    for v in g:
        v = np.asarray(v, dtype=complex)
        m = v.shape[-1]
        if m > n:
            raise ValueError(f"group element of size {m} does not fit in U({n})")
        big = np.broadcast_to(np.eye(n, dtype=complex), v.shape[:-2] + (n, n)).copy()
        big[..., :m, :m] = v
        out.append(big)
    return out[0], out[1]


def act(u: np.ndarray, g) -> np.ndarray:
    """Right action x.g = U2^{-1} x U1 (U2 unitary, so U2^{-1} = U2^*)."""
    u = np.asarray(u, dtype=complex)
    u1, u2 = embed_group_element(g, u.shape[-1])
    return np.conj(np.swapaxes(u2, -1, -2)) @ u @ u1


def group_multiply(g1, g2):
    """Product in U(M) x U(M) matching the right action: (x.g1).g2 = x.(g1 g2)."""
    return (np.asarray(g1[0]) @ np.asarray(g2[0]), np.asarray(g1[1]) @ np.asarray(g2[1]))


@dataclass(frozen=True)
class CocycleResult:
    value: complex
    projected_value: complex | None
    stability_residual: float | None


def cocycle(u: np.ndarray, g, z, w, check_stability: bool = True) -> CocycleResult:
    """f(x.g) / f(x) at level N, optionally recomputed one level down.

    Raises :class:`DomainError` if either matrix has eigenvalue -1.
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[-1]
    m = np.asarray(g[0]).shape[-1]
    if m >= n:
        raise ValueError(f"group element must act on a smaller corner (M={m} >= N={n})")
    ug = act(u, g)
    den = f_zw(u, z, w)
    num = f_zw(ug, z, w)
    if den == 0 or num == 0:
        raise DomainError("matrix lies in the exceptional set (eigenvalue -1)")
    value = num / den
    if not check_stability:
        return CocycleResult(value, None, None)
    pu = canonical_projection(u)
    pug = canonical_projection(ug)
    pden = f_zw(pu, z, w)
    pnum = f_zw(pug, z, w)
    if pden == 0 or pnum == 0:
        raise DomainError("projected matrix lies in the exceptional set (eigenvalue -1)")
    pvalue = pnum / pden
    return CocycleResult(value, pvalue, abs(pvalue - value) / max(abs(value), 1e-300))


def _require_s(s) -> complex:
    s = complex(s)
    if not s.real > -0.5:
        raise DomainError(f"Re s = {s.real:g} is not > -1/2 (infinite measure)")
    return s


def log_hua_pickrell_normalizer(n: int, s) -> float:
    """log E_Haar |det(1+U)^s|^2 = log prod_k G(k) G(k+s+s*) / (G(k+s) G(k+s*))."""
    s = _require_s(s)
    k = np.arange(1, n + 1).astype(complex)
    a, _, _ = loggamma_parts(k)
    b, _, _ = loggamma_parts(k + 2 * s.real)
    c, _, _ = loggamma_parts(k + s)
    d, _, _ = loggamma_parts(k + s.conjugate())
    return math.fsum((a + b - c - d).tolist())


def _log_hermitian_constant(n: int) -> float:
    """log of the Lebesgue density constant of the Cayley image of Haar measure."""
    return (n * (n - 1) * math.log(2.0) + sum(math.lgamma(j + 1) for j in range(1, n))
            - 0.5 * n * (n + 1) * math.log(math.pi))


@dataclass(frozen=True)
class HuaPickrellDensity:
    """``log_density - log_normalizer`` is the normalized log-density."""

    log_density: np.ndarray | float
    log_normalizer: float

    @property
    def normalized(self):
        return self.log_density - self.log_normalizer


def hua_pickrell_logdensity(mat: np.ndarray, s, form: str = "unitary") -> HuaPickrellDensity:
    """Hua-Pickrell log-density of ``mat``.

    ``unitary``: density |det(1+U)^s|^2 with respect to Haar measure.
    ``hermitian``: density det((1-iX)^{-s}) det((1+iX)^{-conj s}) det(1+X^2)^{-N} with
    respect to Lebesgue measure on Hermitian matrices; the normalizer includes
    the Cayley-transform constant, so both forms describe the same law.
    """
    s = _require_s(s)
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[-1]
    log_z = log_hua_pickrell_normalizer(n, s)
    if form == "unitary":
        eigs = np.linalg.eigvals(mat)
        one_u = 1.0 + eigs
        with np.errstate(divide="ignore"):
            logs = np.log(one_u)
        dens = 2.0 * np.real(s * logs).sum(axis=-1)
        dens = np.where(np.isnan(dens), -np.inf if s.real > 0 else np.inf, dens)
        return HuaPickrellDensity(dens if dens.ndim else float(dens), log_z)
    if form == "hermitian":
        x = np.linalg.eigvalsh(_hermitize(mat))
        dens = (2.0 * np.real(-s * np.log(1.0 - 1j * x)).sum(axis=-1)
                - n * np.log1p(x ** 2).sum(axis=-1))
        log_norm = log_z - _log_hermitian_constant(n) - 2 * n * s.real * math.log(2.0)
        return HuaPickrellDensity(dens if dens.ndim else float(dens), log_norm)
    raise ValueError(f"unknown form {form!r}")


def effective_sample_size(weights: np.ndarray) -> float:
    """(sum w)^2 / sum w^2."""
    w = np.asarray(weights, dtype=float)
    return float(w.sum() ** 2 / np.square(w).sum())


@dataclass
class HuaPickrellSample:
    matrices: np.ndarray
    weights: np.ndarray  # self-normalized, sum to 1
    ess: float
    method: str
    acceptance_rate: float | None = None
    ess_warning: bool = False

    def expectation(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, np.asarray(values)))

    def standard_error(self, values: np.ndarray) -> float:
        """Delta-method standard error of the weighted mean."""
        v = np.asarray(values, dtype=complex)
        mean = np.dot(self.weights, v)
        return float(np.sqrt(np.sum(self.weights ** 2 * np.abs(v - mean) ** 2)))


def sample_hua_pickrell(n: int, s, count: int, rng: np.random.Generator, method: str = "importance",
                        ess_fraction: float = 0.05) -> HuaPickrellSample:
    """Draws for the Hua-Pickrell law on U(N).

    ``importance``: Haar proposals with self-normalized weights |det(1+U)^s|^2.
    ``metropolis``: independence Metropolis chain with Haar proposals; equal
    weights, so ``ess`` ignores autocorrelation (see ``acceptance_rate``).
    A warning is issued when ``ess < ess_fraction * count``.
    """
    s = _require_s(s)
    if count < 1:
        raise ValueError("need at least one draw")
    if method == "importance":
        mats = haar_unitary(n, rng, size=count)
        logw = np.atleast_1d(hua_pickrell_logdensity(mats, s).log_density)
        w = np.exp(logw - logw.max())
        w = w / w.sum()
        acc = None
    elif method == "metropolis":
        props = haar_unitary(n, rng, size=count)
        logw = np.atleast_1d(hua_pickrell_logdensity(props, s).log_density)
        u = rng.random(count)
        mats = np.empty_like(props)
        cur, cur_lw, accepted = props[0], logw[0], 0
        for i in range(count):
            if i > 0 and math.log(u[i]) < logw[i] - cur_lw:
                cur, cur_lw = props[i], logw[i]
                accepted += 1
            mats[i] = cur
        w = np.full(count, 1.0 / count)
        acc = accepted / max(count - 1, 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    ess = effective_sample_size(w)
    low = ess < ess_fraction * count
    if low:
        warnings.warn(f"effective sample size {ess:.1f} is below {ess_fraction:g} x {count}", RuntimeWarning)
    return HuaPickrellSample(mats, w, ess, method, acc, low)


def matrices_to_json(mats: np.ndarray) -> list:
    """Nested [re, im] arrays, one per matrix."""
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    return [[[[float(v.real), float(v.imag)] for v in row] for row in m] for m in mats]


_MAGIC = b"GTRM"


def write_gtrm(mats: np.ndarray, fh: BinaryIO) -> None:
    """Binary records: b"GTRM", little-endian u32 N, then N*N complex entries row-major as (re, im) float64."""
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    for m in mats:
        n = m.shape[0]
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", n))
        fh.write(np.ascontiguousarray(m).astype("<c16").tobytes())


def read_gtrm(fh: BinaryIO) -> list[np.ndarray]:
    out = []
    while True:
        head = fh.read(4)
        if not head:
            return out
        if head != _MAGIC:
            raise ValueError("bad GTRM record header")
        (n,) = struct.unpack("<I", fh.read(4))
        data = fh.read(16 * n * n)
        out.append(np.frombuffer(data, dtype="<c16").reshape(n, n).copy())
