"""Embedding GT_N into Omega, sampling zw-measures, and empirical pushforwards.

A signature la of length N is sent to the point of Omega whose alpha/beta
coordinates are the modified Frobenius coordinates of its positive and
negative parts divided by N, with delta = |la+|/N and |la-|/N.  All of this
is done in exact rational arithmetic.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .characters import OmegaPoint, f_omega
from .errors import NonAdmissibleError
from .gt_graph import MeasureTable
from .signatures import Signature, frobenius_split
from .zw_measure import PPrimeEvaluator, ZwParams, build_table, require_admissible

__all__ = [
    "EmbeddedPoint",
    "EmpiricalMeasure",
    "embed",
    "embedding_violations",
    "sample_signatures",
    "sample_signatures_parallel",
    "pushforward",
    "DIAGNOSTIC_PANEL",
    "convergence_diagnostics",
]


@dataclass(frozen=True)
class EmbeddedPoint:
    omega: OmegaPoint
    source_level: int
    source_signature: Signature

    def coordinate(self, family: str, i: int):
        """i-th (1-based) entry of alpha_plus/beta_plus/..., zero-padded."""
        seq = getattr(self.omega, family)
        return seq[i - 1] if i <= len(seq) else Fraction(0)

    def to_json(self) -> dict:
        return {"level": self.source_level, "signature": self.source_signature.to_json(),
                "omega": self.omega.to_json()}


def embed(la, n: int | None = None) -> EmbeddedPoint:
    """Image of ``la`` in Omega (exact rationals)."""
    la = la if isinstance(la, Signature) else Signature(la)
    n = la.level if n is None else n
    if la.level != n:
        raise ValueError(f"signature has level {la.level}, expected {n}")
    if n == 0:
        raise ValueError("the empty signature has no image in Omega")
    fs = frobenius_split(la)
    scale = Fraction(1, n)
    omega = OmegaPoint(
        tuple(v * scale for v in fs.modified_p_plus),
        tuple(v * scale for v in fs.modified_q_plus),
        tuple(v * scale for v in fs.modified_p_minus),
        tuple(v * scale for v in fs.modified_q_minus),
        Fraction(fs.size_plus, n),
        Fraction(fs.size_minus, n),
    )
    return EmbeddedPoint(omega, n, la)


def embedding_violations(pt: EmbeddedPoint) -> list[str]:
    """Exact checks that an embedded point lies in Omega with no gamma part."""
    om = pt.omega
    out = list(om.violations())
    for side in ("plus", "minus"):
        a, b = getattr(om, f"alpha_{side}"), getattr(om, f"beta_{side}")
        for name, seq in (("alpha", a), ("beta", b)):
            if any(not isinstance(v, Fraction) for v in seq):
                out.append(f"{name}_{side} is not exact")
            if any(x <= y for x, y in zip(seq, seq[1:])):
                out.append(f"{name}_{side} is not strictly decreasing")
        if len(a) != len(b):
            out.append(f"alpha_{side} and beta_{side} differ in length")
        if sum(a) + sum(b) != getattr(om, f"delta_{side}"):
            out.append(f"sum(alpha_{side}+beta_{side}) != delta_{side}")
    return out


@dataclass
class EmpiricalMeasure:
    """Weighted embedded points (weights sum to 1)."""

    points: list[EmbeddedPoint]
    weights: np.ndarray
    level: int
    meta: dict | None = None

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.points) == 0:
            raise ValueError("empirical measure needs at least one point")
        if self.weights.shape != (len(self.points),) or (self.weights < 0).any():
            raise ValueError("weights must be nonnegative, one per point")
        total = math.fsum(self.weights.tolist())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, not 1")

    @classmethod
    def from_signatures(cls, sigs: np.ndarray, level: int, meta: dict | None = None) -> "EmpiricalMeasure":
        sigs = np.asarray(sigs, dtype=np.int64).reshape(-1, level)
        if sigs.shape[0] == 0:
            raise ValueError("cannot build an empirical measure from zero samples")
        uniq, counts = np.unique(sigs, axis=0, return_counts=True)
        pts = [embed(Signature(row), level) for row in uniq.tolist()]
        return cls(pts, counts / counts.sum(), level, meta)

    @classmethod
    def point_mass(cls, la) -> "EmpiricalMeasure":
        pt = embed(la)
        return cls([pt], np.ones(1), pt.source_level)

    def integrate(self, fn: Callable[[EmbeddedPoint], float]) -> float:
        vals = np.array([fn(p) for p in self.points], dtype=complex)
        out = complex(np.dot(self.weights, vals))
        return out.real if out.imag == 0 else out

    def to_jsonl(self) -> str:
        lines = [json.dumps({**p.to_json(), "weight": float(w)}, sort_keys=True)
                 for p, w in zip(self.points, self.weights)]
        return "\n".join(lines) + "\n"

    def to_csv(self, k: int | None = None) -> str:
        if k is None:
            k = max([1] + [len(getattr(p.omega, f)) for p in self.points
                           for f in ("alpha_plus", "beta_plus", "alpha_minus", "beta_minus")])
        header = ([f"a{i}p" for i in range(1, k + 1)] + [f"b{i}p" for i in range(1, k + 1)]
                  + [f"a{i}m" for i in range(1, k + 1)] + [f"b{i}m" for i in range(1, k + 1)]
                  + ["cp", "cm", "weight"])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for p, w in zip(self.points, self.weights):
            row = []
            for fam in ("alpha_plus", "beta_plus", "alpha_minus", "beta_minus"):
                row += [repr(float(p.coordinate(fam, i))) for i in range(1, k + 1)]
            row += [repr(float(p.omega.delta_plus)), repr(float(p.omega.delta_minus)), repr(float(w))]
            writer.writerow(row)
        return buf.getvalue()


def _start_point(n: int, p: ZwParams) -> np.ndarray:
    upper, lower = p.support_bounds()
    v = 0
    if upper is not None:
        v = min(v, upper)
    if lower is not None:
        v = max(v, lower)
    return np.full(n, v, dtype=np.int64)


def _sample_enumerate(table: MeasureTable, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(table.probabilities)
    draws = rng.random(n) * cdf[-1]
    idx = np.searchsorted(cdf, draws, side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return table.signatures[idx]


def _sample_mcmc(n_level: int, p: ZwParams, n: int, rng: np.random.Generator, *,
                 burn_in: int | None, thin: int | None, chains: int | None,
                 start: Sequence[int] | None) -> np.ndarray:
    burn_in = 1000 * n_level if burn_in is None else burn_in
    thin = n_level if thin is None else thin
    chains = min(n, 256) if chains is None else min(chains, n)
    per_chain = -(-n // chains)
    ev = PPrimeEvaluator(n_level, p)
    state = np.tile(np.asarray(start if start is not None else _start_point(n_level, p), dtype=np.int64),
                    (chains, 1))
    logw = ev.log_weights(state)
    if not np.isfinite(logw).all():
        raise NonAdmissibleError("MCMC start point has zero weight", "zero-weight start")
    rows = np.arange(chains)
    out = np.empty((chains, per_chain, n_level), dtype=np.int64)

    def step():
        nonlocal logw
        coord = rng.integers(0, n_level, size=chains)
        delta = np.where(rng.random(chains) < 0.5, -1, 1)
        u = rng.random(chains)
        prop = state.copy()
        prop[rows, coord] += delta
        ok = np.ones(chains, dtype=bool)
        if n_level > 1:
            ok = (np.diff(prop, axis=1) <= 0).all(axis=1)
        new_logw = np.full(chains, -np.inf)
        if ok.any():
            new_logw[ok] = ev.log_weights(prop[ok])
        with np.errstate(invalid="ignore"):
            accept = ok & np.isfinite(new_logw) & (np.log(u) < new_logw - logw)
        state[accept] = prop[accept]
        logw = np.where(accept, new_logw, logw)

    for _ in range(burn_in):
        step()
    for k in range(per_chain):
        for _ in range(thin):
            step()
        out[:, k] = state
    # interleave chains so any prefix mixes all chains
    return out.transpose(1, 0, 2).reshape(-1, n_level)[:n]


def sample_signatures(n_level: int, p: ZwParams, n: int, rng: np.random.Generator,
                      method: str = "enumerate", *, table: MeasureTable | None = None,
                      mass_tolerance: float = 1e-8, burn_in: int | None = None,
                      thin: int | None = None, chains: int | None = None,
                      start: Sequence[int] | None = None) -> np.ndarray:
    """``n`` draws from P_N(.|p) as an (n, N) integer array.

    ``enumerate`` inverts the CDF of a table with defect at most
    ``mass_tolerance`` (renormalized to the captured mass; exact for finite
    support).  ``mcmc`` runs ``chains`` parallel Metropolis chains with
    single-coordinate +-1 proposals; defaults are 1000*N burn-in steps and
    thinning N.
    """
    require_admissible(p)
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    if n == 0:
        return np.zeros((0, n_level), dtype=np.int64)
    if method == "enumerate":
        if table is None:
            table = build_table(n_level, p, mass_tolerance)
        return _sample_enumerate(table, n, rng)
    if method == "mcmc":
        return _sample_mcmc(n_level, p, n, rng, burn_in=burn_in, thin=thin, chains=chains, start=start)
    raise ValueError(f"unknown sampling method {method!r}")


def sample_signatures_parallel(n_level: int, p: ZwParams, n: int, seed: int, method: str = "enumerate",
                               *, workers: int = 1, chunk_size: int = 20_000, **kwargs) -> np.ndarray:
    """Chunked sampling with one spawned stream per chunk.

    The chunking depends only on ``n`` and ``chunk_size``, so the output is
    identical for every worker count.
    """
    require_admissible(p)
    if method == "enumerate" and kwargs.get("table") is None:
        kwargs["table"] = build_table(n_level, p, kwargs.pop("mass_tolerance", 1e-8))
    sizes = [min(chunk_size, n - i) for i in range(0, n, chunk_size)]
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(len(sizes))]
    jobs = list(zip(sizes, streams))

    def run(job):
        size, gen = job
        return sample_signatures(n_level, p, size, gen, method, **kwargs)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    if not parts:
        return np.zeros((0, n_level), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def pushforward(n_level: int, p: ZwParams, n_samples: int, rng: np.random.Generator,
                method: str = "enumerate", **kwargs) -> EmpiricalMeasure:
    """Empirical image in Omega of ``n_samples`` draws from P_N."""
    if n_samples <= 0:
        raise ValueError("pushforward needs at least one sample")
    sigs = sample_signatures(n_level, p, n_samples, rng, method, **kwargs)
    return EmpiricalMeasure.from_signatures(sigs, n_level, {"params": p.to_json(), "samples": n_samples})


_U0 = complex(math.cos(1.0), math.sin(1.0))


def _panel() -> list[tuple[str, Callable[[EmbeddedPoint], float]]]:
    panel = [("one", lambda pt: 1.0)]
    for short, fam in (("a", "alpha"), ("b", "beta")):
        for side, suffix in (("plus", "p"), ("minus", "m")):
            for i in (1, 2):
                panel.append((f"{short}{i}{suffix}",
                              lambda pt, f=f"{fam}_{side}", i=i: float(pt.coordinate(f, i))))
    panel.append(("cp", lambda pt: float(pt.omega.delta_plus)))
    panel.append(("cm", lambda pt: float(pt.omega.delta_minus)))
    panel.append(("re_F_u0", lambda pt: f_omega(pt.omega, _U0).real))
    panel.append(("im_F_u0", lambda pt: f_omega(pt.omega, _U0).imag))
    return panel


DIAGNOSTIC_PANEL = tuple(name for name, _ in _panel())


def convergence_diagnostics(seq: Sequence[EmpiricalMeasure]) -> dict:
    """Integrals of the fixed test-function panel along a sequence of levels.

    The panel: constant 1, the first two alpha/beta coordinates on each side,
    delta+ and delta-, and Re/Im of F^omega at u0 = exp(i).  Successive
    absolute differences are reported; no rate is asserted.
    """
    levels = [m.level for m in seq]
    if levels != sorted(levels):
        raise ValueError("measures must be ordered by increasing level")
    integrals = {}
    diffs = {}
    for name, fn in _panel():
        vals = [float(m.integrate(fn)) for m in seq]
        integrals[name] = vals
        diffs[name] = [abs(b - a) for a, b in zip(vals, vals[1:])]
    return {"levels": levels, "u0": [_U0.real, _U0.imag], "integrals": integrals, "differences": diffs}
