"""Command-line interface: rewriting, verification suites, numeric reports.

Every subcommand prints one JSON report to stdout (or CSV where a sweep is
more natural).  Exit codes: 0 all checks passed, 1 a verification failed,
2 usage or input error, 3 internal cross-check disagreement.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from fractions import Fraction
from typing import List, Optional, Tuple

from . import scalars
from .errors import (
    FinitenessError,
    FuelError,
    InternalConsistencyError,
    SizeLimitError,
    WindowError,
)
from .ergodic import (
    check_cesaro_bound,
    check_nonconvergence,
    fixed_point_check,
    omega_t,
    vacuum_certificate,
)
from .exel_laca import ELKind, ELMatrixSpec, verify_el_suite
from .expr import Case, ParseError, parse, word_str
from .fock import TruncSpace
from .reports import EXACT_ZERO, Instance, Report, csv_render, jsonify
from .rewrite import normalize_n, normalize_z
from .spectral import (
    RepSpec,
    build_direct_sum,
    commutant_dim,
    decompose,
    limit_residual,
    moment_sequence,
    verify_rep,
)
from .suites import anti_suite, relations_z_suite

USAGE_ERROR = 2
CHECK_FAILED = 1
INTERNAL_ERROR = 3


def _parse_window(text: str) -> Tuple[int, int]:
    if ".." not in text:
        raise ValueError(f"window must look like a..b, got {text!r}")
    a, b = text.split("..", 1)
    return int(a), int(b)


def _parse_tuple(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(v) for v in text.replace("(", "").replace(")", "").split(","))


def _parse_scalar(text: str):
    """Exact rational or p/q string for state parameters."""
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def _finish(report: Report, started: float, as_json: bool = True) -> int:
    report.runtime_millis = int((time.monotonic() - started) * 1000)
    print(report.render())
    return 0 if report.passed else CHECK_FAILED


def _cmd_rewrite(args) -> int:
    started = time.monotonic()
    case = Case.coerce(args.case.upper())
    x = parse(args.expr, case)
    log: Optional[list] = [] if args.show_steps else None
    out = {"case": case.value, "input": args.expr}
    if case is Case.Z:
        nf = normalize_z(x, log=log)
        out["normalForm"] = str(nf.to_element())
        out["unit"] = jsonify(nf.unit)
        out["lambdaTerms"] = {word_str(w): jsonify(c)
                              for w, c in sorted(nf.lam.items(), key=lambda kv: (len(kv[0]), kv[0]))}
        out["pairTerms"] = {str(i): jsonify(c) for i, c in sorted(nf.pairs.items())}
    elif case is Case.N:
        nf = normalize_n(x, log=log)
        out["normalForm"] = str(nf.to_element())
        out["unit"] = jsonify(nf.unit)
        out["pathTerms"] = {_path_label(mu, nu): jsonify(c)
                            for (mu, nu), c in sorted(nf.paths.items())}
    else:
        raise ValueError("rewriting is defined for the z and n cases")
    if log is not None:
        out["steps"] = log
    out["runtimeMillis"] = int((time.monotonic() - started) * 1000)
    print(json.dumps(out, indent=2))
    return 0


def _path_label(mu, nu) -> str:
    parts = [f"c({i})" for i in mu] + [f"a({i})" for i in reversed(nu)]
    return "".join(parts) if parts else "I"


def _cmd_verify(args) -> int:
    started = time.monotonic()
    lo, hi = _parse_window(args.window)
    if args.suite == "relations-z":
        space = TruncSpace(Case.Z, lo, hi, args.particles)
        report = relations_z_suite(space, depth=args.depth)
    elif args.suite == "exel-laca":
        case_kind = ELKind.WM_Z if lo < 1 else ELKind.WM_N
        spec = ELMatrixSpec(case_kind)
        space = TruncSpace(spec.case, lo, hi, args.particles)
        depth = args.depth
        universe = range(lo + depth, hi - depth + 1)
        pairs = None
        if args.family:
            with open(args.family, "r", encoding="utf-8") as fh:
                fam = json.load(fh)
            pairs = [(p["X"], p["Y"]) for p in fam["pairs"]]
        report = verify_el_suite(space, spec, list(universe),
                                 max_size=args.max_size, pairs=pairs)
    elif args.suite == "rep-n":
        if lo != 1:
            raise ValueError("rep-n windows start at 1")
        space = TruncSpace(Case.N, 1, hi, args.particles)
        report = Report(suite="rep-n", config={"window": [1, hi],
                                               "particles": args.particles,
                                               "levels": args.levels,
                                               "maxIndex": args.max_index or hi})
        for level in (int(v) for v in args.levels.split(",")):
            sub = verify_rep(RepSpec(level, "formal", space), args.max_index or hi)
            for inst in sub.instances:
                report.add(Instance(f"level{level}:{inst.id}", inst.passed,
                                    inst.discrepancy, inst.details))
    elif args.suite == "anti":
        space = TruncSpace(Case.ANTI, lo, hi, args.particles)
        report = anti_suite(space)
    else:
        raise ValueError(f"unknown suite {args.suite!r}")
    return _finish(report, started)


def _cmd_moments(args) -> int:
    started = time.monotonic()
    x = parse(args.expr, Case.coerce(args.case.upper()))
    seq = moment_sequence(x, args.max_order)
    if args.csv:
        print(csv_render(["order", "moment"],
                         [[k, scalars.to_text(v) if not isinstance(v, int) else v]
                          for k, v in enumerate(seq)]), end="")
        return 0
    out = {
        "suite": "moments",
        "config": {"expr": args.expr, "maxOrder": args.max_order},
        "moments": [jsonify(v) for v in seq],
        "runtimeMillis": int((time.monotonic() - started) * 1000),
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_cesaro(args) -> int:
    started = time.monotonic()
    x = parse(args.word, Case.Z)
    idx = x.indices()
    if not idx:
        raise ValueError("the averaged word must contain at least one letter")
    space = TruncSpace(Case.Z, min(idx), max(idx) + args.n - 1, x.max_word_len() + 1)
    chk = check_cesaro_bound(space, x, args.n)
    report = Report(suite="cesaro",
                    config={"word": args.word, "n": args.n,
                            "window": [space.lo, space.hi],
                            "particles": space.trunc})
    report.add(Instance(f"bound[n={args.n}]", chk.passed, chk.norm_lower,
                        {"bound": chk.bound, "columns": chk.columns}))
    return _finish(report, started)


def _cmd_limit(args) -> int:
    started = time.monotonic()
    xi = _parse_tuple(args.vector)
    ns = [int(v) for v in str(args.N).split(",")]
    rows: List[List[object]] = []
    report = Report(suite="limit", config={"vector": list(xi), "N": ns})
    for n in ns:
        lo = min(-n, *(xi or (0,)))
        hi = max(n, *(xi or (0,)))
        space = TruncSpace(Case.Z, lo, hi, len(xi) + 2)
        resid = limit_residual(space, n, xi)
        details = {"residual": resid}
        if xi == ():
            want = 1.0 / math.sqrt(2 * n + 1)
            ok = abs(resid - want) <= 1e-12
            details["closedForm"] = want
        else:
            ok = True
        rows.append([n, resid])
        report.add(Instance(f"residual[N={n}]", ok, resid, details))
    if args.csv:
        print(csv_render(["N", "residual"], rows), end="")
        return 0 if report.passed else CHECK_FAILED
    return _finish(report, started)


def _cmd_states(args) -> int:
    started = time.monotonic()
    x = parse(args.expr, Case.Z)
    t = _parse_scalar(args.t)
    value = omega_t(x, t)
    fp = fixed_point_check(x)
    report = Report(suite="states", config={"expr": args.expr, "t": jsonify(t)})
    report.add(Instance("omega-t", True, None, {"value": jsonify(value)}))
    report.add(Instance("fixed-point", True, None,
                        {"fixed": fp.fixed,
                         "scalar": jsonify(fp.scalar) if fp.fixed else None,
                         "witness": fp.witness}))
    return _finish(report, started)


def _cmd_certificate(args) -> int:
    started = time.monotonic()
    case = Case.coerce(args.case.upper())
    x = parse(args.expr, case)
    value = vacuum_certificate(x)
    threshold = 0.5 - 1e-12
    report = Report(suite="certificate", config={"expr": args.expr, "case": case.value})
    report.add(Instance("vacuum-distance", value >= threshold, value,
                        {"threshold": threshold}))
    return _finish(report, started)


def _cmd_nonconvergence(args) -> int:
    started = time.monotonic()
    space = TruncSpace(Case.Z, -args.n, 0, 2)
    chk = check_nonconvergence(space, args.n)
    report = Report(suite="nonconvergence", config={"n": args.n})
    report.add(Instance(f"norm-one[n={args.n}]", chk.passed,
                        EXACT_ZERO if chk.passed else None,
                        {"diagonal": chk.diagonal,
                         "witnessEntry": jsonify(chk.witness_entry),
                         "strongResidual": jsonify(chk.strong_residual)}))
    return _finish(report, started)


def _cmd_commutant(args) -> int:
    started = time.monotonic()
    spec = _load_json_arg(args.gens)
    case = Case.coerce(str(spec.get("case", "N")).upper())
    lo, hi = spec["window"] if isinstance(spec["window"], list) else _parse_window(spec["window"])
    space = TruncSpace(case, lo, hi, spec["particles"])
    from .fock import evaluate

    mats = [evaluate(space, parse(e, case)) for e in spec["exprs"]]
    dim, _basis = commutant_dim(mats)
    report = Report(suite="commutant",
                    config={"case": case.value, "window": [lo, hi],
                            "particles": spec["particles"], "exprs": spec["exprs"]})
    expect = spec.get("expect")
    ok = True if expect is None else dim == expect
    report.add(Instance("dimension", ok, EXACT_ZERO if ok else abs(dim - (expect or 0)),
                        {"dim": dim, "expect": expect}))
    return _finish(report, started)


def _parse_phase(v):
    if isinstance(v, dict):
        re = Fraction(str(v.get("re", 0)))
        im = Fraction(str(v.get("im", 0)))
        return scalars.gaussian(re, im)
    if isinstance(v, str):
        return Fraction(v)
    return v


def _cmd_reps(args) -> int:
    started = time.monotonic()
    if args.action != "decompose":
        raise ValueError(f"unknown reps action {args.action!r}")
    spec = _load_json_arg(args.spec)
    comps = [(c["level"], _parse_phase(c["phase"]), c.get("mult", 1))
             for c in spec["components"]]
    gens, meta = build_direct_sum(spec["d"], spec["particles"], comps,
                                  zero_dim=spec.get("zeroDim", 0))
    result = decompose(gens)
    report = Report(suite="reps-decompose",
                    config={"d": spec["d"], "particles": spec["particles"],
                            "declared": [{"level": l, "phase": scalars.to_text(p),
                                          "mult": m} for l, p, m in comps],
                            "zeroDim": spec.get("zeroDim", 0), "dim": meta["dim"]})
    declared = sorted(
        ((l, complex(scalars.to_complex(p)), m) for l, p, m in comps),
        key=lambda t: (t[0], t[1].real, t[1].imag))
    found = sorted(((c.level, c.phase, c.multiplicity) for c in result.components),
                   key=lambda t: (t[0], t[1].real, t[1].imag))
    ok_shape = len(found) == len(declared) and \
        all(f[0] == d[0] and f[2] == d[2] for f, d in zip(found, declared))
    worst = max((abs(f[1] - d[1]) for f, d in zip(found, declared)), default=0.0) \
        if ok_shape else None
    report.add(Instance("components", ok_shape and (worst is not None and worst <= 1e-9),
                        worst,
                        {"found": [{"level": l, "phase": {"re": p.real, "im": p.imag},
                                    "mult": m} for l, p, m in found]}))
    ok_resid = result.residual_dim == spec.get("zeroDim", 0)
    report.add(Instance("residual", ok_resid, None,
                        {"residualDim": result.residual_dim,
                         "expected": spec.get("zeroDim", 0)}))
    return _finish(report, started)


def _load_json_arg(text: str) -> dict:
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    with open(text, "r", encoding="utf-8") as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wmfock",
                                description="symbolic and numeric workbench "
                                            "for weakly monotone operator families")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("rewrite", help="normal form of an expression")
    q.add_argument("--case", choices=["z", "n"], required=True)
    q.add_argument("--expr", required=True)
    q.add_argument("--show-steps", action="store_true")
    q.set_defaults(func=_cmd_rewrite)

    q = sub.add_parser("verify", help="run a verification suite")
    q.add_argument("--suite", required=True,
                   choices=["relations-z", "exel-laca", "rep-n", "anti"])
    q.add_argument("--window", required=True, help="index window a..b")
    q.add_argument("--particles", type=int, required=True)
    q.add_argument("--depth", type=int, default=2,
                   help="letter margin inside the window")
    q.add_argument("--max-size", type=int, default=2,
                   help="largest constraint-set size for exel-laca")
    q.add_argument("--family", help="JSON file with explicit X/Y pairs")
    q.add_argument("--levels", default="0,1,2", help="rep levels, comma separated")
    q.add_argument("--max-index", type=int, default=None)
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("moments", help="vacuum moments of an expression")
    q.add_argument("--expr", required=True)
    q.add_argument("--case", default="z", choices=["z", "n", "anti"])
    q.add_argument("--max-order", type=int, required=True)
    q.add_argument("--csv", action="store_true")
    q.set_defaults(func=_cmd_moments)

    q = sub.add_parser("cesaro", help="Cesaro average contraction bound")
    q.add_argument("--word", required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=_cmd_cesaro)

    q = sub.add_parser("limit", help="averaged squared-position residual")
    q.add_argument("--N", required=True, help="half-width, or comma list")
    q.add_argument("--vector", default="", help="basis tuple i1,i2,...")
    q.add_argument("--csv", action="store_true")
    q.set_defaults(func=_cmd_limit)

    q = sub.add_parser("states", help="omega_t value and fixed-point check")
    q.add_argument("--expr", required=True)
    q.add_argument("--t", required=True)
    q.set_defaults(func=_cmd_states)

    q = sub.add_parser("certificate", help="vacuum-distance certificate")
    q.add_argument("--expr", required=True)
    q.add_argument("--case", default="z", choices=["z", "anti"])
    q.set_defaults(func=_cmd_certificate)

    q = sub.add_parser("nonconvergence", help="norm-one witness for shifted averages")
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=_cmd_nonconvergence)

    q = sub.add_parser("commutant", help="exact commutant dimension")
    q.add_argument("--gens", required=True, help="JSON file or inline JSON")
    q.set_defaults(func=_cmd_commutant)

    q = sub.add_parser("reps", help="representation tooling")
    q.add_argument("action", choices=["decompose"])
    q.add_argument("--spec", required=True, help="JSON file or inline JSON")
    q.set_defaults(func=_cmd_reps)

    return p


def _join_window_values(argv: List[str]) -> List[str]:
    # argparse reads "-6..6" as an option; fold it into "--window=-6..6"
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--window" and i + 1 < len(argv) and \
                re.fullmatch(r"-?\d+\.\.-?\d+", argv[i + 1]):
            out.append(f"--window={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_join_window_values(list(argv)))
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except (ParseError, ValueError, WindowError, SizeLimitError,
            FinitenessError, FuelError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
