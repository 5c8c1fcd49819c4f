import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gtzw.signatures import (EMPTY, Signature, box_signatures, dual, enumerate_down, frobenius_split,
                             interlaces, log_weyl_dim, log_weyl_dim_array, transpose, weyl_dim)


def gt_patterns(top):
    """Brute-force count of Gelfand-Tsetlin patterns with the given top row."""
    if len(top) == 1:
        return 1
    rows = itertools.product(*[range(top[i + 1], top[i] + 1) for i in range(len(top) - 1)])
    return sum(gt_patterns(r) for r in rows)


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((0, 1))
    assert Signature((2, 0)).level == 2
    assert EMPTY.level == 0


def test_interlacing_examples():
    assert interlaces((1,), (2, 0))
    assert not interlaces((3,), (2, 0))
    assert interlaces((2, 1), (2, 1, 1))


def test_enumerate_down_examples():
    assert enumerate_down((1, 0)) == [Signature((0,)), Signature((1,))]
    assert enumerate_down((2, 0)) == [Signature((v,)) for v in (0, 1, 2)]
    assert enumerate_down((5,)) == [EMPTY]


def test_weyl_dim_examples():
    assert weyl_dim((7,)) == 1
    assert weyl_dim((1, 0)) == 2
    assert weyl_dim((2, 1, 0)) == 8


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weyl_dim_equals_pattern_count(n):
    for combo in itertools.combinations_with_replacement(range(-2, 3), n):
        la = tuple(sorted(combo, reverse=True))
        assert weyl_dim(la) == gt_patterns(la)


def test_weyl_dim_branching_rule():
    la = Signature((3, 1, 1, -2))
    assert weyl_dim(la) == sum(weyl_dim(nu) for nu in enumerate_down(la))


def test_log_weyl_dim_consistent():
    sigs = box_signatures(3, -3, 3)
    logs = log_weyl_dim_array(sigs)
    for row, lv in zip(sigs.tolist(), logs):
        assert lv == pytest.approx(np.log(weyl_dim(row)), abs=1e-12)
        assert log_weyl_dim(row) == pytest.approx(lv, abs=1e-12)


def test_weyl_dim_is_exact_for_huge_signatures():
    la = (10 ** 30, 0, -(10 ** 30))
    assert weyl_dim(la) == (10 ** 30 + 1) * (2 * 10 ** 30 + 2) * (10 ** 30 + 1) // 2


def test_dual_and_shift_invariance():
    la = Signature((4, 2, -1))
    assert dual(la) == Signature((1, -2, -4))
    assert weyl_dim(dual(la)) == weyl_dim(la)
    assert weyl_dim(tuple(x + 5 for x in la)) == weyl_dim(la)


def test_transpose_oracle():
    assert transpose((3, 1)) == (2, 1, 1)
    assert transpose(()) == ()
    assert transpose(transpose((5, 3, 3, 1))) == (5, 3, 3, 1)


def test_frobenius_examples():
    fs = frobenius_split((0, 0, 0))
    assert fs.modified_p_plus == () and fs.size_plus == 0 and fs.size_minus == 0
    fs = frobenius_split((3, 1, 0, -2))
    assert fs.plus_part == (3, 1) and fs.minus_part == (2,)
    assert fs.modified_p_plus == (Fraction(5, 2),) and fs.modified_q_plus == (Fraction(3, 2),)
    assert fs.modified_p_minus == (Fraction(3, 2),) and fs.modified_q_minus == (Fraction(1, 2),)
    fs = frobenius_split((1, 1))
    assert fs.modified_p_plus == (Fraction(1, 2),) and fs.modified_q_plus == (Fraction(3, 2),)


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=9))
def test_frobenius_sum_identity(vals):
    fs = frobenius_split(sorted(vals, reverse=True))
    assert sum(fs.modified_p_plus) + sum(fs.modified_q_plus) == fs.size_plus
    assert sum(fs.modified_p_minus) + sum(fs.modified_q_minus) == fs.size_minus
    assert len(fs.modified_p_plus) == len(fs.modified_q_plus)


def test_box_signatures_count():
    from math import comb
    for n in range(0, 4):
        assert box_signatures(n, -2, 3).shape[0] == comb(6 + n - 1, n)
    rows = box_signatures(3, -1, 1)
    assert all(r[0] >= r[1] >= r[2] for r in rows.tolist())
