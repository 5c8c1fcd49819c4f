"""Seeded verification suite shared by ``gtzw verify`` and the acceptance tests.

Every check derives its random stream from ``SeedSequence([seed, index])``,
so a check's outcome does not depend on which other checks run.  Results
contain no timings, so a rerun with the same seed serializes identically.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import stats

from . import __version__
from .gt_graph import (MeasureTable, cotransition_iterated, sample_path_down,
                       verify_coherency, verify_coherency_exact)
from .rmt import (act, canonical_projection, cayley, cocycle, f_zw, group_multiply, haar_unitary,
                  hermitian_projection, inverse_cayley)
from .signatures import Signature, weyl_dim
from .spectral import embed, embedding_violations, sample_signatures
from .zw_measure import (ZwParams, build_table, exact_table, fourier_coefficient, fourier_determinant,
                         log_p_prime, verify_dougall, verify_krattenthaler, zw_norm_squared)

__all__ = ["CheckResult", "CHECKS", "run_suite", "REFERENCE_PARAMS"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    summary: str
    metrics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "summary": self.summary,
                "metrics": _plain(self.metrics)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction):
        return str(x)
    return x


# Principal-series reference sets, all with Re(z+z'+w+w') >= 1.
REFERENCE_PARAMS = {
    "dougall": [
        ZwParams.principal(0.05 + 0.05j, 0.45 + 0.1j),   # Re sum = 1
        ZwParams.principal(0.5 + 0.5j, 0.5 - 0.5j),
        ZwParams.principal(1.0 + 0.1j, 0.5 + 0.5j),
        ZwParams.principal(0.75 + 0.25j, 0.25 - 0.4j),
        ZwParams.principal(1.2 + 0.7j, -0.2 + 0.3j),
    ],
    "normalization": [
        ZwParams.principal(1.0 + 0.5j, 1.2 - 0.3j),
        ZwParams.principal(0.8 + 0.2j, 0.7 + 0.6j),
        ZwParams.principal(1.5 - 0.4j, 0.6 + 0.1j),
        ZwParams(0.2, 0.7, 1.1 + 0.3j, 1.1 - 0.3j),      # complementary x principal
        ZwParams(2, 2.5, 0.9 + 0.2j, 0.9 - 0.2j),        # degenerate(2) x principal
    ],
    "coherency": [
        ZwParams.principal(1.5 + 0.5j, 1.5 - 0.3j),
        ZwParams(0.3, 0.6, 1.4 + 0.2j, 1.4 - 0.2j),
    ],
    "sampler": ZwParams.principal(2.0 + 0.5j, 2.0 - 0.3j),
}

DEGENERATE_EXAMPLE = ZwParams(0, 0, 1, 1)


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


# --- identities -----------------------------------------------------------

def check_dougall(seed: int, K: int = 500) -> CheckResult:
    ladder = sorted({k for k in (10, 20, 50, 100, 200, 500) if k < K} | {K})
    rows = []
    ok = True
    for p in REFERENCE_PARAMS["dougall"]:
        errs = [verify_dougall(p, k).abs_error for k in ladder]
        monotone = all(b < a for a, b in zip(errs, errs[1:]))
        good = errs[-1] <= 1e-6 and monotone
        ok &= good
        rows.append({"params": p.to_json(), "K": ladder, "abs_error": errs, "monotone": monotone})
    worst = max(r["abs_error"][-1] for r in rows)
    return CheckResult("dougall", ok, f"max |partial - closed form| at K={K}: {worst:.3e} (tol 1e-6)",
                       {"sets": rows, "worst": worst})


def check_normalization(seed: int) -> CheckResult:
    rows = []
    ok = True
    for p in REFERENCE_PARAMS["normalization"]:
        for n in (1, 2, 3):
            t = build_table(n, p, 1e-7)
            frac = t.captured
            good = 1 - 1e-6 <= frac <= 1 + 1e-12
            ok &= good
            rows.append({"params": p.to_json(), "N": n, "captured_fraction": frac, "box": t.meta["box"]})
    worst = min(r["captured_fraction"] for r in rows)
    return CheckResult("normalization", ok, f"min captured fraction of S_N: {worst:.10f} (need >= 1-1e-6)",
                       {"tables": rows})


@lru_cache(maxsize=None)
def _coherency_table(p: ZwParams, n: int) -> MeasureTable:
    return build_table(n, p, 1e-10)


def check_coherency(seed: int, inject_fault: bool = False) -> CheckResult:
    rows = []
    ok = True
    for p in REFERENCE_PARAMS["coherency"]:
        for n in (2, 3):
            upper = _coherency_table(p, n)
            lower = _coherency_table(p, n - 1)
            if inject_fault:
                upper = MeasureTable.from_log_masses(n, upper.signatures, upper.log_masses,
                                                     upper.log_target_total + math.log1p(1e-3), upper.meta)
            rep = verify_coherency(lower, upper, 1e-7)
            good = rep.passed(1e-7)
            ok &= good
            rows.append({"params": p.to_json(), "levels": [n, n - 1], **rep.to_json(), "passed": good})
    exact_up = exact_table(2, DEGENERATE_EXAMPLE)
    exact_down = exact_table(1, DEGENERATE_EXAMPLE)
    exact_res = verify_coherency_exact(exact_down, exact_up)
    ok &= exact_res == 0
    worst = max(r["max_abs_residual"] for r in rows)
    return CheckResult("coherency", ok,
                       f"max residual {worst:.3e} (tol 1e-7); exact residual for (0,0,1,1): {exact_res}",
                       {"tables": rows, "exact_residual": exact_res, "fault_injected": inject_fault})


def check_degenerate(seed: int) -> CheckResult:
    t = build_table(1, DEGENERATE_EXAMPLE, 1e-12)
    probs = {tuple(s): pr for s, pr in t.items()}
    expect = math.log(0.5)
    devs = [abs(t.log_mass(Signature((k,))) - t.log_target_total - expect) for k in (0, -1)]
    exact = exact_table(1, DEGENERATE_EXAMPLE)
    ok = (set(probs) == {(0,), (-1,)} and max(devs) <= 1e-14
          and exact == {Signature((0,)): Fraction(1, 2), Signature((-1,)): Fraction(1, 2)}
          and log_p_prime((1,), DEGENERATE_EXAMPLE) == -math.inf)
    return CheckResult("degenerate", ok, f"P_1(.|0,0,1,1) log-weight deviation {max(devs):.1e}",
                       {"support": sorted(probs), "log_deviation": max(devs)})


def check_fourier(seed: int, count: int = 100) -> CheckResult:
    rng = _rng(seed, 5)
    worst_f = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 7))
        la = Signature(sorted(rng.integers(-10, 11, n).tolist(), reverse=True))
        z = complex(rng.uniform(-0.4, 1.5), rng.uniform(-1, 1))
        w = complex(rng.uniform(-0.4, 1.5), rng.uniform(-1, 1))
        a = fourier_coefficient(la, z, w)
        b = fourier_determinant(la, z, w)
        worst_f = max(worst_f, abs(a - b) / abs(a))
    worst_k = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 7))
        x = [int(v) for v in rng.choice(np.arange(-10, 11), n, replace=False)]
        a = list(rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
        b = list(rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1))
        worst_k = max(worst_k, verify_krattenthaler(x, a, b).rel_error)
    ok = worst_f <= 1e-10 and worst_k <= 1e-10
    return CheckResult("fourier", ok,
                       f"determinant vs closed form {worst_f:.2e}; Krattenthaler {worst_k:.2e} (tol 1e-10)",
                       {"fourier_max_rel": worst_f, "krattenthaler_max_rel": worst_k, "instances": count})


# --- combinatorics --------------------------------------------------------

def _path_count(top: tuple[int, ...]) -> int:
    @lru_cache(maxsize=None)
    def count(row: tuple[int, ...]) -> int:
        if len(row) <= 1:
            return 1
        total = 0
        ranges = [range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]

        def rec(prefix, i):
            nonlocal total
            if i == len(ranges):
                total += count(tuple(prefix))
                return
            for v in ranges[i]:
                rec(prefix + [v], i + 1)

        rec([], 0)
        return total

    return count(top)


def check_weyl(seed: int) -> CheckResult:
    import itertools
    checked = 0
    bad = []
    for n in range(1, 5):
        for combo in itertools.combinations_with_replacement(range(-4, 5), n):
            la = tuple(sorted(combo, reverse=True))
            checked += 1
            if weyl_dim(la) != _path_count(la):
                bad.append(list(la))
    return CheckResult("weyl", not bad, f"{checked} signatures, {len(bad)} mismatches",
                       {"checked": checked, "mismatches": bad[:10]})


def check_embedding(seed: int, count: int = 10_000) -> CheckResult:
    rng = _rng(seed, 7)
    bad = 0
    for _ in range(count):
        n = int(rng.integers(1, 51))
        span = int(rng.integers(0, 3 * n + 5))
        la = Signature(sorted(rng.integers(-span, span + 1, n).tolist(), reverse=True))
        if embedding_violations(embed(la)):
            bad += 1
    return CheckResult("embedding", bad == 0, f"{count} random signatures, {bad} violations",
                       {"count": count, "violations": bad})


# --- random matrices ------------------------------------------------------

def _zscore(samples: np.ndarray, target: complex) -> float:
    n = samples.shape[0]
    z = 0.0
    for part, tgt in ((samples.real, target.real), (samples.imag, target.imag)):
        sd = part.std(ddof=1)
        if sd > 0:
            z = max(z, abs(part.mean() - tgt) / (sd / math.sqrt(n)))
        elif part.mean() != tgt:
            z = math.inf
    return z


def check_rmt_statistics(seed: int, samples: int = 10_000) -> CheckResult:
    rng = _rng(seed, 8)
    metrics = {}
    ok = True
    n = 4
    u = haar_unitary(n, rng, size=samples)
    tr = np.trace(canonical_projection(u), axis1=-2, axis2=-1)
    moments = {}
    for k in range(1, 5):
        moments[f"E[Tr^{k}]"] = _zscore(tr ** k, 0j)
    moments["E|Tr|^2"] = _zscore(np.abs(tr) ** 2 + 0j, 1 + 0j)
    metrics["pushforward_zscores"] = moments
    ok &= max(moments.values()) <= 3.0
    r = np.abs(u[:, -1, -1])
    ks = stats.kstest(r, lambda x: 1 - (1 - np.clip(x, 0, 1) ** 2) ** (n - 1))
    metrics["corner_ks_pvalue"] = float(ks.pvalue)
    ok &= ks.pvalue > 1e-3
    norm_z = {}
    for z, w in ((0.5, 0.0), (0.3 + 0.2j, 0.1)):
        for m in range(1, 5):
            v = haar_unitary(m, rng, size=samples)
            vals = np.abs(f_zw(v, z, w)) ** 2
            norm_z[f"z={z},w={w},N={m}"] = _zscore(vals + 0j, complex(zw_norm_squared(m, z, w)))
    metrics["norm_zscores"] = norm_z
    ok &= max(norm_z.values()) <= 3.0
    worst = max(max(moments.values()), max(norm_z.values()))
    return CheckResult("rmt_statistics", ok,
                       f"max z-score {worst:.2f} (<= 3); corner KS p = {ks.pvalue:.3g} (> 1e-3)", metrics)


def check_cocycle(seed: int, count: int = 100) -> CheckResult:
    rng = _rng(seed, 9)
    z, w = 0.3 + 0.2j, 0.4 - 0.1j
    worst = {"level_stability": 0.0, "multiplier": 0.0, "k_triviality": 0.0}
    for _ in range(count):
        u = haar_unitary(5, rng)
        g1 = (haar_unitary(3, rng), haar_unitary(3, rng))
        g2 = (haar_unitary(3, rng), haar_unitary(3, rng))
        c1 = cocycle(u, g1, z, w)
        worst["level_stability"] = max(worst["level_stability"], c1.stability_residual)
        c2 = cocycle(act(u, g1), g2, z, w, check_stability=False).value
        c12 = cocycle(u, group_multiply(g1, g2), z, w, check_stability=False).value
        worst["multiplier"] = max(worst["multiplier"], abs(c1.value * c2 - c12) / abs(c12))
        v = haar_unitary(3, rng)
        ck = cocycle(u, (v, v), z, w, check_stability=False).value
        worst["k_triviality"] = max(worst["k_triviality"], abs(ck - 1))
    ok = max(worst.values()) <= 1e-9
    return CheckResult("cocycle", ok, "max residuals " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
                       + " (tol 1e-9)", worst)


def check_cayley(seed: int, count: int = 100) -> CheckResult:
    rng = _rng(seed, 10)
    u = haar_unitary(4, rng, size=count)
    x = cayley(u)
    resid = np.abs(cayley(canonical_projection(u)) - hermitian_projection(x)).max(axis=(-2, -1))
    comm = float(resid.max())
    trip = float(np.abs(inverse_cayley(x) - u).max())
    # float input is unitary only to ~1e-16, and the Cayley map amplifies that by |X|^2
    scaled = float((resid / (1 + np.abs(x).max(axis=(-2, -1)) ** 2)).max())
    ok = comm <= 1e-9 and trip <= 1e-10
    return CheckResult("cayley", ok, f"diagram residual {comm:.1e} (1e-9); round trip {trip:.1e} (1e-10)",
                       {"commutativity": comm, "round_trip": trip, "commutativity_over_norm_sq": scaled,
                        "max_abs_x": float(np.abs(x).max())})


# --- samplers -------------------------------------------------------------

def _chi_square(counts: np.ndarray, probs: np.ndarray) -> float:
    """Goodness-of-fit p-value, pooling cells with expected count < 5 into one."""
    total = counts.sum()
    expected = probs / probs.sum() * total
    big = expected >= 5
    obs = list(counts[big]) + ([counts[~big].sum()] if (~big).any() else [])
    exp = list(expected[big]) + ([expected[~big].sum()] if (~big).any() else [])
    obs, exp = np.array(obs, float), np.array(exp, float)
    if obs.size < 2:
        return 1.0
    stat = float(((obs - exp) ** 2 / exp).sum())
    return float(stats.chi2.sf(stat, obs.size - 1))


def _table_counts(table: MeasureTable, draws: np.ndarray) -> np.ndarray:
    idx = table._index()
    counts = np.zeros(len(table), dtype=np.int64)
    for row in draws.tolist():
        k = idx.get(tuple(row))
        if k is not None:
            counts[k] += 1
    return counts


def check_samplers(seed: int, draws: int = 100_000) -> CheckResult:
    rng = _rng(seed, 11)
    metrics = {}
    ok = True
    for name, n, p in (("N=1 degenerate", 1, DEGENERATE_EXAMPLE),
                       ("N=1 principal", 1, REFERENCE_PARAMS["sampler"]),
                       ("N=2 principal", 2, REFERENCE_PARAMS["sampler"])):
        t = build_table(n, p, 1e-10)
        s = sample_signatures(n, p, draws, rng, "enumerate", table=t)
        pv = _chi_square(_table_counts(t, s), t.probabilities)
        metrics[f"enumerate {name} chi2 p"] = pv
        ok &= pv > 1e-3
    p = REFERENCE_PARAMS["sampler"]
    t = build_table(2, p, 1e-10)
    s = sample_signatures(2, p, draws, rng, "mcmc", chains=1000, thin=20)
    in_box = (np.abs(t.signatures) <= 2).all(axis=1)
    counts = _table_counts(t, s)
    tv = 0.5 * float(np.abs(counts[in_box] / draws - t.probabilities[in_box]).sum())
    metrics["mcmc TV on |la_i|<=2 (N=2)"] = tv
    ok &= tv <= 0.01
    la = Signature((1, 0, -1))
    nu_vals = list(range(-1, 2))
    marg = np.array([float(cotransition_iterated(Signature((v,)), la)) for v in nu_vals])
    paths = [sample_path_down(la, rng).at_level(1)[0] for _ in range(20_000)]
    pc = np.array([paths.count(v) for v in nu_vals])
    pv = _chi_square(pc, marg)
    metrics["path marginal chi2 p"] = pv
    ok &= pv > 1e-3
    return CheckResult("samplers", ok, "; ".join(f"{k} = {v:.3g}" for k, v in metrics.items()), metrics)


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "dougall": check_dougall,
    "normalization": check_normalization,
    "coherency": check_coherency,
    "degenerate": check_degenerate,
    "fourier": check_fourier,
    "weyl": check_weyl,
    "embedding": check_embedding,
    "rmt_statistics": check_rmt_statistics,
    "cocycle": check_cocycle,
    "cayley": check_cayley,
    "samplers": check_samplers,
}


def run_suite(only: list[str] | None = None, seed: int = 0, K: int = 500,
              inject_fault: bool = False) -> dict:
    """Run the named checks (all by default) and return a JSON-ready report."""
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for name in names:
        if name == "dougall":
            res = check_dougall(seed, K=K)
        elif name == "coherency":
            res = check_coherency(seed, inject_fault=inject_fault)
        else:
            res = CHECKS[name](seed)
        results.append(res.to_json())
    return {"version": __version__, "seed": seed, "checks": results,
            "passed": all(r["passed"] for r in results)}


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"
