"""The Gelfand-Tsetlin graph as a branching graph with cotransition weights.

Random streams
--------------
Samplers take a :class:`numpy.random.Generator`.  Parallel work derives
its streams from one master seed with ``numpy.random.SeedSequence(seed)
.spawn(k)``; chunk ``i`` always gets child ``i``, so results do not depend
on how many workers run the chunks.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .errors import LevelMismatchError
from .numerics import log_sum_exp
from .signatures import (
    EMPTY,
    Signature,
    enumerate_down,
    interlaces,
    log_weyl_dim,
    log_weyl_dim_array,
    weyl_dim,
)

__all__ = [
    "MeasureTable",
    "Path",
    "CoherencyReport",
    "spawn_generators",
    "cotransition",
    "cotransition_iterated",
    "pushdown_exact",
    "verify_coherency",
    "verify_coherency_exact",
    "sample_path_down",
]

# captured mass may exceed the target by rounding only
_CAPTURE_SLACK = 1e-12


def spawn_generators(seed: int, k: int) -> list[np.random.Generator]:
    """k independent generators derived from a master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def _sig(x) -> Signature:
    return x if isinstance(x, Signature) else Signature(x)


def cotransition(nu, la, exact: bool = True):
    """q(nu, la) = Dim nu / Dim la if nu < la, else 0.

    Returns a :class:`~fractions.Fraction` when ``exact`` (the default) and a
    float otherwise.  q(empty, la) = 1 for every la of level 1.
    """
    nu, la = _sig(nu), _sig(la)
    if la.level != nu.level + 1:
        raise LevelMismatchError(f"levels {nu.level} and {la.level} are not adjacent")
    if nu.level == 0:
        return Fraction(1) if exact else 1.0
    if not interlaces(nu, la):
        return Fraction(0) if exact else 0.0
    if exact:
        return Fraction(weyl_dim(nu), weyl_dim(la))
    return math.exp(log_weyl_dim(nu) - log_weyl_dim(la))


def _push_one_level(dist: Mapping[Signature, Fraction]) -> dict[Signature, Fraction]:
    out: dict[Signature, Fraction] = defaultdict(Fraction)
    for la, mass in dist.items():
        if la.level == 1:
            out[EMPTY] += mass
            continue
        dim_la = weyl_dim(la)
        for nu in enumerate_down(la):
            out[nu] += mass * Fraction(weyl_dim(nu), dim_la)
    return dict(out)


def cotransition_iterated(nu, la) -> Fraction:
    """Probability that the uniformly random path ending at la passes through nu.

    Computed by pushing the delta mass at la down one level at a time.
    """
    nu, la = _sig(nu), _sig(la)
    if nu.level >= la.level:
        raise LevelMismatchError(f"need level(nu) < level(la), got {nu.level}, {la.level}")
    dist = {la: Fraction(1)}
    for _ in range(la.level - nu.level):
        dist = _push_one_level(dist)
    return dist.get(nu, Fraction(0))


def pushdown_exact(dist: Mapping) -> dict[Signature, Fraction]:
    """Image of a finitely supported exact measure under one cotransition step."""
    return _push_one_level({_sig(k): Fraction(v) for k, v in dist.items()})


@dataclass(frozen=True)
class Path:
    """Finite path empty < t_1 < ... < t_N in the graph."""

    vertices: tuple[Signature, ...]

    def __post_init__(self):
        for a, b in zip(self.vertices, self.vertices[1:]):
            if b.level != a.level + 1 or (a.level > 0 and not interlaces(a, b)):
                raise ValueError(f"{a} and {b} do not form an edge")

    def at_level(self, n: int) -> Signature:
        for v in self.vertices:
            if v.level == n:
                return v
        raise KeyError(n)

    def to_json(self) -> list[list[int]]:
        return [v.to_json() for v in self.vertices]


def sample_path_down(la, rng: np.random.Generator) -> Path:
    """Uniform random path from the empty signature to la.

    Each step from level n to n-1 picks nu < mu with probability q(nu, mu).
    """
    la = _sig(la)
    vertices = [la]
    cur = la
    while cur.level > 1:
        below = enumerate_down(cur)
        logq = np.array([log_weyl_dim(nu) for nu in below]) - log_weyl_dim(cur)
        probs = np.exp(logq)
        probs /= probs.sum()
        cur = below[int(rng.choice(len(below), p=probs))]
        vertices.append(cur)
    vertices.append(EMPTY)
    return Path(tuple(reversed(vertices)))


@dataclass(frozen=True)
class MeasureTable:
    """Finite table of log-weights over signatures of one level.

    ``signatures`` is an (M, N) integer array in lexicographic order and
    ``log_masses`` the matching log-weights.  Probabilities are
    ``exp(log_masses - log_target_total)``; the target is the exact total
    mass (e.g. log S_N) or 0 for an already normalized table.  The missing
    mass ``defect`` is always reported.
    """

    level: int
    signatures: np.ndarray
    log_masses: np.ndarray
    log_total_captured: float
    log_target_total: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        logs = np.asarray(self.log_masses, dtype=float).ravel()
        sigs = np.asarray(self.signatures, dtype=np.int64).reshape(logs.shape[0], self.level)
        if sigs.shape[0] != logs.shape[0]:
            raise ValueError("signatures and log_masses differ in length")
        if sigs.shape[0] > 1 and self.level > 0:
            order = np.lexsort(sigs.T[::-1])
            if not np.array_equal(order, np.arange(sigs.shape[0])):
                sigs, logs = sigs[order], logs[order]
        if np.isnan(logs).any() or np.isposinf(logs).any():
            raise ValueError("log-masses must be finite or -inf")
        sigs.setflags(write=False)
        logs.setflags(write=False)
        object.__setattr__(self, "signatures", sigs)
        object.__setattr__(self, "log_masses", logs)
        if self.log_total_captured > self.log_target_total + _CAPTURE_SLACK:
            raise ValueError("captured mass exceeds the target total")

    @classmethod
    def from_log_masses(cls, level: int, sigs, log_masses, log_target_total: float = 0.0,
                        meta: dict | None = None) -> "MeasureTable":
        logs = np.asarray(log_masses, dtype=float)
        captured = log_sum_exp(logs) if logs.size else -math.inf
        if log_target_total < captured <= log_target_total + _CAPTURE_SLACK:
            captured = log_target_total
        return cls(level, sigs, logs, captured, log_target_total, dict(meta or {}))

    @classmethod
    def from_probabilities(cls, level: int, probs: Mapping) -> "MeasureTable":
        items = sorted((_sig(k), float(v)) for k, v in probs.items())
        sigs = np.array([s.entries for s, _ in items], dtype=np.int64).reshape(len(items), level)
        with np.errstate(divide="ignore"):
            logs = np.log(np.array([v for _, v in items]))
        return cls.from_log_masses(level, sigs, logs, 0.0)

    def __len__(self) -> int:
        return self.signatures.shape[0]

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_masses - self.log_target_total)

    @property
    def captured(self) -> float:
        return math.exp(self.log_total_captured - self.log_target_total)

    @property
    def defect(self) -> float:
        return max(0.0, -math.expm1(self.log_total_captured - self.log_target_total))

    def _index(self) -> dict[tuple[int, ...], int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {tuple(row): i for i, row in enumerate(self.signatures.tolist())}
            object.__setattr__(self, "_idx", idx)
        return idx

    def log_mass(self, la) -> float:
        i = self._index().get(tuple(_sig(la).entries))
        return -math.inf if i is None else float(self.log_masses[i])

    def probability(self, la) -> float:
        return math.exp(self.log_mass(la) - self.log_target_total)

    def items(self) -> Iterator[tuple[Signature, float]]:
        for row, p in zip(self.signatures.tolist(), self.probabilities.tolist()):
            yield Signature(row), p

    def as_dict(self) -> dict[Signature, float]:
        return dict(self.items())

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "log_target_total": self.log_target_total,
            "log_total_captured": self.log_total_captured,
            "captured": self.captured,
            "defect": self.defect,
            "meta": self.meta,
            "entries": [
                {"signature": row, "log_mass": lm, "probability": p}
                for row, lm, p in zip(self.signatures.tolist(), self.log_masses.tolist(),
                                      self.probabilities.tolist())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "MeasureTable":
        level = int(data["level"])
        sigs = np.array([e["signature"] for e in data["entries"]], dtype=np.int64)
        sigs = sigs.reshape(len(data["entries"]), level)
        logs = np.array([e["log_mass"] for e in data["entries"]], dtype=float)
        return cls(level, sigs, logs, float(data["log_total_captured"]),
                   float(data["log_target_total"]), dict(data.get("meta", {})))


@dataclass(frozen=True)
class CoherencyReport:
    max_abs_residual: float
    worst_vertex: Signature | None
    l1_residual: float
    residual_bound: float
    defect_upper: float
    defect_lower: float

    def passed(self, tol: float, defect_factor: float = 10.0) -> bool:
        return (self.max_abs_residual <= tol
                and self.max_abs_residual <= defect_factor * self.residual_bound + 1e-15)

    def to_json(self) -> dict:
        return {
            "max_abs_residual": self.max_abs_residual,
            "worst_vertex": None if self.worst_vertex is None else self.worst_vertex.to_json(),
            "l1_residual": self.l1_residual,
            "residual_bound": self.residual_bound,
            "defect_upper": self.defect_upper,
            "defect_lower": self.defect_lower,
        }


def _dense_ratio_cumsum(table: MeasureTable):
    """Summed-area table of P(la)/Dim(la) over the table's bounding box."""
    sigs = table.signatures
    n = table.level
    lo = int(sigs.min())
    hi = int(sigs.max())
    width = hi - lo + 1
    dense = np.zeros((width,) * n)
    vals = np.exp(table.log_masses - table.log_target_total - log_weyl_dim_array(sigs))
    np.add.at(dense, tuple((sigs - lo).T), vals)
    cum = dense
    for ax in range(n):
        cum = np.cumsum(cum, axis=ax)
    cum = np.pad(cum, [(1, 0)] * n)
    return cum, lo, hi


def _box_sums(cum: np.ndarray, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
    """Sums of the underlying dense array over [lows, highs] boxes (inclusive, 0-based)."""
    n = lows.shape[1]
    total = np.zeros(lows.shape[0], dtype=cum.dtype)
    empty = (highs < lows).any(axis=1)
    for corner in range(1 << n):
        idx = []
        sign = 1
        for ax in range(n):
            if corner >> ax & 1:
                idx.append(lows[:, ax])
                sign = -sign
            else:
                idx.append(highs[:, ax] + 1)
        idx = [np.clip(i, 0, cum.shape[ax] - 1) for ax, i in enumerate(idx)]
        total += sign * cum[tuple(idx)]
    total[empty] = 0.0
    return total


def verify_coherency(pn_minus1: MeasureTable, pn: MeasureTable, tol: float = 1e-7) -> CoherencyReport:
    """Compare P_{N-1}(nu) with sum_la q(nu, la) P_N(la) on the captured support of P_{N-1}.

    Mass missing from the level-N table can shift each pushed-down value by
    at most its defect; the reported ``residual_bound`` is that defect plus
    the level-(N-1) defect.
    """
    if pn.level != pn_minus1.level + 1:
        raise LevelMismatchError(f"levels {pn_minus1.level} and {pn.level} are not adjacent")
    lower_probs = pn_minus1.probabilities
    bound = pn.defect + pn_minus1.defect
    if pn_minus1.level == 0:
        pushed = np.array([pn.captured])
    elif len(pn) == 0:
        pushed = np.zeros(len(pn_minus1))
    else:
        cum, lo, hi = _dense_ratio_cumsum(pn)
        nus = pn_minus1.signatures
        n = pn.level
        lows = np.empty((nus.shape[0], n), dtype=np.int64)
        highs = np.empty((nus.shape[0], n), dtype=np.int64)
        lows[:, 0] = nus[:, 0]
        highs[:, 0] = hi
        for i in range(1, n - 1):
            lows[:, i] = nus[:, i]
            highs[:, i] = nus[:, i - 1]
        lows[:, n - 1] = lo
        highs[:, n - 1] = nus[:, n - 2]
        lows = np.maximum(lows, lo) - lo
        highs = np.minimum(highs, hi) - lo
        sums = _box_sums(cum, lows, highs)
        pushed = np.exp(log_weyl_dim_array(nus)) * sums
    resid = np.abs(lower_probs - pushed)
    if resid.size == 0:
        return CoherencyReport(0.0, None, 0.0, bound, pn.defect, pn_minus1.defect)
    k = int(np.argmax(resid))
    return CoherencyReport(
        max_abs_residual=float(resid[k]),
        worst_vertex=Signature(pn_minus1.signatures[k].tolist()),
        l1_residual=float(resid.sum()),
        residual_bound=bound,
        defect_upper=pn.defect,
        defect_lower=pn_minus1.defect,
    )


def verify_coherency_exact(pn_minus1: Mapping, pn: Mapping) -> Fraction:
    """Largest |P_{N-1}(nu) - (q P_N)(nu)| in exact rational arithmetic."""
    pushed = pushdown_exact(pn)
    lower = {_sig(k): Fraction(v) for k, v in pn_minus1.items()}
    keys = set(pushed) | set(lower)
    return max((abs(lower.get(k, Fraction(0)) - pushed.get(k, Fraction(0))) for k in keys),
               default=Fraction(0))
