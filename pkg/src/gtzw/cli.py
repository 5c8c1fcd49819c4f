"""Command-line entry point: ``gtzw tabulate | verify | sample ...``.

Exit codes: 0 success, 1 verification or computation failure, 2 invalid input.
Log level comes from the ``GTZW_LOG`` environment variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .errors import DomainError, GrowthLimitError, NonAdmissibleError
from .rmt import matrices_to_json, sample_hua_pickrell, write_gtrm
from .spectral import embed, sample_signatures_parallel
from .verify import CHECKS, dumps_report, run_suite
from .zw_measure import ZwParams, build_table

log = logging.getLogger("gtzw")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _complex_arg(text: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _params(args) -> ZwParams:
    if args.z is None or args.w is None:
        raise InputError("--z and --w are required")
    zp = args.zp if args.zp is not None else args.z.conjugate()
    wp = args.wp if args.wp is not None else args.w.conjugate()
    try:
        return ZwParams(args.z, zp, args.w, wp)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("zw parameters (z' and w' default to conjugates)")
    g.add_argument("--z", type=_complex_arg)
    g.add_argument("--zp", type=_complex_arg)
    g.add_argument("--w", type=_complex_arg)
    g.add_argument("--wp", type=_complex_arg)


def _add_output_flags(p: argparse.ArgumentParser, formats=("json", "csv")) -> None:
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _classification(p: ZwParams) -> dict:
    return {"z_pair": str(p.series_class_z), "w_pair": str(p.series_class_w),
            "admissible": p.admissible, "reason": p.admissibility_failure()}


def _check_admissible(p: ZwParams) -> None:
    reason = p.admissibility_failure()
    if reason is not None:
        raise NonAdmissibleError(
            f"parameters are not admissible ({p.series_class_z} x {p.series_class_w}): {reason}", reason)


def cmd_tabulate(args) -> int:
    p = _params(args)
    _check_admissible(p)
    if args.level < 1:
        raise InputError("--level must be >= 1")
    table = build_table(args.level, p, args.mass_tol)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"la{i}" for i in range(1, args.level + 1)] + ["probability", "log_mass"])
        for sig, lm in zip(table.signatures.tolist(), table.log_masses.tolist()):
            w.writerow(sig + [repr(math.exp(lm - table.log_target_total)), repr(lm)])
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    doc = {
        "command": "tabulate",
        "version": __version__,
        "config": {"level": args.level, "mass_tol": args.mass_tol},
        "params": p.to_json(),
        "classification": _classification(p),
        "log_s_n": table.log_target_total,
        "s_n": math.exp(table.log_target_total),
        **table.to_json(),
    }
    _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    only = None
    if args.only:
        only = [n.strip() for item in args.only for n in item.split(",") if n.strip()]
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise InputError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    if args.K < 1:
        raise InputError("--K must be >= 1")
    report = run_suite(only, seed=args.seed, K=args.K, inject_fault=args.inject_fault)
    _emit(dumps_report(report), args.out)
    for chk in report["checks"]:
        log.info("%s %s: %s", "PASS" if chk["passed"] else "FAIL", chk["name"], chk["summary"])
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _header(args, extra: dict) -> dict:
    cfg = {k: (v if not isinstance(v, complex) else [v.real, v.imag])
           for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return {"type": "header", "version": __version__, "config": cfg, **extra}


def _draw(args, p: ZwParams) -> tuple[np.ndarray, dict]:
    _check_admissible(p)
    if args.level < 1:
        raise InputError("--level must be >= 1")
    if args.samples < 1:
        raise InputError("-n/--samples must be >= 1")
    method = args.method
    kwargs = {}
    table = None
    if method in ("enumerate", "auto"):
        try:
            table = build_table(args.level, p, args.mass_tol)
            method = "enumerate"
        except GrowthLimitError as exc:
            if method == "enumerate":
                raise
            log.info("enumeration infeasible (%s); using mcmc", exc)
            method = "mcmc"
    extra = {"params": p.to_json(), "classification": _classification(p), "method": method}
    if table is not None:
        kwargs["table"] = table
        extra["table_defect"] = table.defect
    else:
        kwargs.update(burn_in=args.burn_in, thin=args.thin)
    sigs = sample_signatures_parallel(args.level, p, args.samples, args.seed, method,
                                      workers=args.workers, **kwargs)
    return sigs, extra


def cmd_sample_signatures(args) -> int:
    p = _params(args)
    sigs, extra = _draw(args, p)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"la{i}" for i in range(1, args.level + 1)])
        w.writerows(sigs.tolist())
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    lines = [_dump(_header(args, extra))]
    lines += [_dump({"index": i, "signature": row}) for i, row in enumerate(sigs.tolist())]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sample_embed(args) -> int:
    p = _params(args)
    sigs, extra = _draw(args, p)
    cache = {}
    points = []
    for row in sigs.tolist():
        key = tuple(row)
        if key not in cache:
            cache[key] = embed(row, args.level)
        points.append(cache[key])
    if args.format == "csv":
        from .spectral import EmpiricalMeasure
        m = EmpiricalMeasure(points, np.full(len(points), 1.0 / len(points)), args.level)
        _emit(m.to_csv(), args.out)
        return EXIT_OK
    lines = [_dump(_header(args, extra))]
    lines += [_dump({"index": i, **pt.to_json()}) for i, pt in enumerate(points)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sample_hua_pickrell(args) -> int:
    s = args.s
    if not s.real > -0.5:
        raise InputError(f"Re s = {s.real:g} must be > -1/2")
    if args.N < 1 or args.samples < 1:
        raise InputError("--N and -n must be >= 1")
    rng = np.random.default_rng(args.seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = sample_hua_pickrell(args.N, s, args.samples, rng, args.method, args.ess_fraction)
    extra = {"ess": res.ess, "ess_warning": res.ess_warning, "acceptance_rate": res.acceptance_rate,
             "method": res.method}
    if res.ess_warning:
        log.warning("effective sample size %.1f is low", res.ess)
    if args.format == "gtrm":
        if not args.out:
            raise InputError("--format gtrm needs --out")
        with open(args.out, "wb") as fh:
            write_gtrm(res.matrices, fh)
        sys.stdout.write(_dump(_header(args, extra)) + "\n")
        return EXIT_OK
    mats = matrices_to_json(res.matrices)
    lines = [_dump(_header(args, extra))]
    lines += [_dump({"index": i, "weight": float(w), "matrix": m})
              for i, (w, m) in enumerate(zip(res.weights.tolist(), mats))]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gtzw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gtzw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tabulate", help="probability table of a zw-measure at one level")
    _add_param_flags(t)
    t.add_argument("--level", type=int, required=True)
    t.add_argument("--mass-tol", type=float, default=1e-8)
    t.add_argument("--seed", type=int, default=0, help="accepted for uniformity; tables are deterministic")
    _add_output_flags(t)
    t.set_defaults(func=cmd_tabulate)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--only", action="append", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    v.add_argument("--K", type=int, default=500, help="Dougall truncation")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", help="draw samples")
    ssub = s.add_subparsers(dest="what", required=True)
    for name, func, helptext in (("signatures", cmd_sample_signatures, "signatures from P_N"),
                                 ("embed", cmd_sample_embed, "signatures embedded in Omega")):
        q = ssub.add_parser(name, help=helptext)
        _add_param_flags(q)
        q.add_argument("--level", type=int, required=True)
        q.add_argument("-n", "--samples", type=int, default=1000)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--method", choices=("auto", "enumerate", "mcmc"), default="auto",
                       help="auto: enumerate when the support box fits, otherwise mcmc")
        q.add_argument("--burn-in", type=int)
        q.add_argument("--thin", type=int)
        q.add_argument("--mass-tol", type=float, default=1e-8)
        q.add_argument("--workers", type=int, default=1)
        _add_output_flags(q)
        q.set_defaults(func=func)
    h = ssub.add_parser("hua-pickrell", help="Hua-Pickrell unitary matrices")
    h.add_argument("--N", type=int, required=True)
    h.add_argument("--s", type=_complex_arg, required=True)
    h.add_argument("-n", "--samples", type=int, default=100)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--method", choices=("importance", "metropolis"), default="importance")
    h.add_argument("--ess-fraction", type=float, default=0.05)
    h.add_argument("--workers", type=int, default=1, help="accepted for uniformity; sampling is vectorized")
    _add_output_flags(h, ("json", "gtrm"))
    h.set_defaults(func=cmd_sample_hua_pickrell)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("GTZW_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except NonAdmissibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GrowthLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
