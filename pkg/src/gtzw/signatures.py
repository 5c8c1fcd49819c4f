"""Signatures of U(N), interlacing, Weyl dimensions and Frobenius data."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import LevelMismatchError

__all__ = [
    "Signature",
    "EMPTY",
    "FrobeniusSplit",
    "interlaces",
    "enumerate_down",
    "weyl_dim",
    "log_weyl_dim",
    "log_weyl_dim_array",
    "dual",
    "transpose",
    "frobenius_split",
    "box_signatures",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class Signature:
    """Weakly decreasing integer tuple; level 0 is the empty signature."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int] = ()):
        values = tuple(int(x) for x in entries)
        for a, b in zip(values, values[1:]):
            if a < b:
                raise ValueError(f"signature entries must be weakly decreasing: {values}")
        object.__setattr__(self, "entries", values)

    @property
    def level(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __repr__(self) -> str:
        return f"Signature({list(self.entries)})"

    def to_json(self) -> list[int]:
        return list(self.entries)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Signature":
        return cls(data)


EMPTY = Signature(())


def _as_signature(x) -> Signature:
    return x if isinstance(x, Signature) else Signature(x)


def interlaces(nu, la) -> bool:
    """True iff nu < la in the Gelfand-Tsetlin order: la_i >= nu_i >= la_{i+1}."""
    nu, la = _as_signature(nu), _as_signature(la)
    if la.level != nu.level + 1:
        raise LevelMismatchError(f"levels {nu.level} and {la.level} are not adjacent")
    return all(la[i] >= nu[i] >= la[i + 1] for i in range(nu.level))


def enumerate_down(la) -> list[Signature]:
    """All nu < la, lexicographically sorted."""
    la = _as_signature(la)
    if la.level == 0:
        raise LevelMismatchError("the empty signature has no level below it")
    ranges = [range(la[i + 1], la[i] + 1) for i in range(la.level - 1)]
    return [Signature(t) for t in itertools.product(*ranges)]


def weyl_dim(la) -> int:
    """Dimension of the irreducible U(N)-module with highest weight la (exact)."""
    la = _as_signature(la)
    n = la.level
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= la[i] - la[j] + j - i
            den *= j - i
    q, r = divmod(num, den)
    assert r == 0
    return q


def log_weyl_dim(la) -> float:
    la = _as_signature(la)
    n = la.level
    return math.fsum(
        math.log(la[i] - la[j] + j - i) - math.log(j - i)
        for i in range(n) for j in range(i + 1, n)
    )


def log_weyl_dim_array(sigs: np.ndarray) -> np.ndarray:
    """Row-wise log Dim for an (M, N) integer array of signatures."""
    sigs = np.asarray(sigs)
    m, n = sigs.shape
    out = np.zeros(m)
    for i in range(n):
        for j in range(i + 1, n):
            out += np.log((sigs[:, i] - sigs[:, j] + (j - i)).astype(float)) - math.log(j - i)
    return out


def dual(la) -> Signature:
    """(-la_N, ..., -la_1): the label of the conjugate representation."""
    la = _as_signature(la)
    return Signature(-x for x in reversed(la.entries))


def transpose(diagram: Sequence[int]) -> tuple[int, ...]:
    """Conjugate Young diagram."""
    parts = [p for p in diagram if p > 0]
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0]))


@dataclass(frozen=True)
class FrobeniusSplit:
    """Positive/negative parts of a signature with modified Frobenius coordinates.

    The coordinate tuples have length d(nu) (number of diagonal boxes); use
    :meth:`coordinate` for the zero-padded convention.
    """

    plus_part: tuple[int, ...]
    minus_part: tuple[int, ...]
    modified_p_plus: tuple[Fraction, ...]
    modified_q_plus: tuple[Fraction, ...]
    modified_p_minus: tuple[Fraction, ...]
    modified_q_minus: tuple[Fraction, ...]
    size_plus: int
    size_minus: int

    def coordinate(self, name: str, i: int) -> Fraction:
        """i-th (1-based) coordinate of ``modified_<name>``, 0 beyond d(nu)."""
        seq = getattr(self, f"modified_{name}")
        return seq[i - 1] if i <= len(seq) else Fraction(0)


def _modified_frobenius(diagram: tuple[int, ...]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    conj = transpose(diagram)
    d = sum(1 for i, p in enumerate(diagram) if p > i)
    p = tuple(diagram[i] - (i + 1) + HALF for i in range(d))
    q = tuple(conj[i] - (i + 1) + HALF for i in range(d))
    return p, q


def frobenius_split(la) -> FrobeniusSplit:
    la = _as_signature(la)
    plus = tuple(x for x in la if x > 0)
    minus = tuple(-x for x in reversed(la.entries) if x < 0)
    pp, qp = _modified_frobenius(plus)
    pm, qm = _modified_frobenius(minus)
    return FrobeniusSplit(plus, minus, pp, qp, pm, qm, sum(plus), sum(minus))


def box_signatures(n: int, lo: int, hi: int) -> np.ndarray:
    """All signatures of length n with hi >= la_1 >= ... >= la_n >= lo.

    Returned as an (M, n) int64 array in lexicographic order.
    """
    if n < 0 or hi < lo:
        raise ValueError("need n >= 0 and lo <= hi")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    rows = np.arange(lo, hi + 1, dtype=np.int64)[:, None]
    for _ in range(n - 1):
        last = rows[:, -1]
        counts = last - lo + 1
        rep = np.repeat(rows, counts, axis=0)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        offsets = np.arange(rep.shape[0]) - starts
        rows = np.column_stack([rep, lo + offsets])
    return rows
