import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from gtzw.spectral import (DIAGNOSTIC_PANEL, EmpiricalMeasure, convergence_diagnostics, embed,
                           embedding_violations, pushforward, sample_signatures, sample_signatures_parallel)
from gtzw.zw_measure import ZwParams, build_table

DEG = ZwParams(0, 0, 1, 1)
PRINC = ZwParams.principal(2.0 + 0.5j, 2.0 - 0.3j)


def test_embed_examples():
    pt = embed((0, 0, 0))
    assert pt.omega.alpha_plus == () and pt.omega.delta_plus == 0 and pt.omega.delta_minus == 0
    om = embed((3, 1, 0, -2)).omega
    assert om.alpha_plus == (Fraction(5, 8),) and om.beta_plus == (Fraction(3, 8),)
    assert om.alpha_minus == (Fraction(3, 8),) and om.beta_minus == (Fraction(1, 8),)
    assert om.delta_plus == 1 and om.delta_minus == Fraction(1, 2)
    for n in (1, 5, 40):
        om = embed((1,) * n).omega
        assert om.alpha_plus == (Fraction(1, 2 * n),) and om.beta_plus == (Fraction(2 * n - 1, 2 * n),)
        assert embedding_violations(embed((1,) * n)) == []


def test_embed_rejects_level_mismatch():
    with pytest.raises(ValueError):
        embed((1, 0), 3)


def test_degenerate_pushforward_point_masses(rng):
    m = pushforward(1, DEG, 20_000, rng)
    weights = {tuple(p.source_signature): w for p, w in zip(m.points, m.weights)}
    assert set(weights) == {(0,), (-1,)}
    assert abs(weights[(0,)] - 0.5) <= 3 * math.sqrt(0.25 / 20_000)
    assert m.integrate(lambda pt: 1.0) == pytest.approx(1.0)


def test_zero_samples_rejected(rng):
    with pytest.raises(ValueError):
        pushforward(1, DEG, 0, rng)
    with pytest.raises(ValueError):
        EmpiricalMeasure.from_signatures(np.zeros((0, 1)), 1)


def test_enumerate_frequencies(rng):
    draws = sample_signatures(1, DEG, 100_000, rng)
    hits = int((draws[:, 0] == 0).sum())
    assert abs(hits - 50_000) <= 3 * math.sqrt(25_000)


def test_degenerate_support_respected(rng):
    p = ZwParams(1, 1.5, 2, 2)
    for method in ("enumerate", "mcmc"):
        s = sample_signatures(3, p, 2000, rng, method)
        assert (s[:, 0] <= 1).all() and (s[:, -1] >= -2).all()
        assert (np.diff(s, axis=1) <= 0).all()


def test_mcmc_matches_enumerate(rng):
    t = build_table(2, PRINC, 1e-10)
    s = sample_signatures(2, PRINC, 100_000, rng, "mcmc", chains=1000, thin=20)
    idx = {tuple(r): k for k, r in enumerate(t.signatures.tolist())}
    counts = np.zeros(len(t))
    for row in s.tolist():
        counts[idx[tuple(row)]] += 1
    box = (np.abs(t.signatures) <= 2).all(axis=1)
    tv = 0.5 * np.abs(counts[box] / len(s) - t.probabilities[box]).sum()
    assert tv <= 0.01


def test_parallel_sampling_independent_of_workers():
    a = sample_signatures_parallel(2, PRINC, 50_000, 11, "enumerate", workers=1, chunk_size=7000)
    b = sample_signatures_parallel(2, PRINC, 50_000, 11, "enumerate", workers=4, chunk_size=7000)
    assert np.array_equal(a, b)
    c = sample_signatures_parallel(3, PRINC, 600, 3, "mcmc", workers=3, chunk_size=200, burn_in=300)
    d = sample_signatures_parallel(3, PRINC, 600, 3, "mcmc", workers=1, chunk_size=200, burn_in=300)
    assert np.array_equal(c, d)


def test_csv_and_jsonl_exports():
    m = EmpiricalMeasure.from_signatures(np.array([[3, 1, 0, -2], [3, 1, 0, -2], [0, 0, 0, 0]]), 4)
    rows = list(csv.DictReader(io.StringIO(m.to_csv())))
    assert len(rows) == 2
    assert set(rows[0]) >= {"a1p", "b1p", "a1m", "b1m", "cp", "cm", "weight"}
    full = next(r for r in rows if float(r["cp"]) == 1.0)
    assert float(full["a1p"]) == 0.625 and float(full["weight"]) == pytest.approx(2 / 3)
    lines = [json.loads(line) for line in m.to_jsonl().splitlines()]
    assert sum(x["weight"] for x in lines) == pytest.approx(1)


def test_diagnostics_constant_and_delta_path():
    a = 0.3
    seq = [EmpiricalMeasure.point_mass((round(n * a),) + (0,) * (n - 1)) for n in (10, 40, 160, 640)]
    diag = convergence_diagnostics(seq)
    assert set(diag["integrals"]) == set(DIAGNOSTIC_PANEL)
    assert diag["integrals"]["one"] == [1.0] * 4
    assert diag["integrals"]["a1p"][-1] == pytest.approx(a, abs=2e-3)
    assert diag["integrals"]["b1p"][-1] == pytest.approx(0, abs=1e-3)
    d = diag["differences"]["a1p"]
    assert d[0] > d[1] > d[2]
    with pytest.raises(ValueError):
        convergence_diagnostics(seq[::-1])
