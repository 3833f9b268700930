"""Batch front-end: sequence files and system specs in, deterministic reports out.

JSON is the single machine-readable output; the plain-text summary is a
rendering of the JSON, never the source of truth.  Identical (inputs,
params, seed) give byte-identical reports.  Exit code 0 means a verdict was
computed (even a failing one); nonzero is reserved for operational errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .intsets import (
    SequenceFormatError,
    Verdict,
    Window,
    banach_density_estimate,
    is_syndetic,
    is_thick,
    parse_sequence_file,
    piecewise_syndetic_certificate,
    write_sequence_file,
)
from .systems import (
    GOLDEN,
    CyclicSystem,
    OdometerSystem,
    ProductSystem,
    RotationSystem,
    SkewProductSystem,
)
from .recurrence import (
    DEFAULT_SWEEP_SEED,
    crosscheck_cyclic_equivalence,
    product_transitive_finite,
    r_sequence_cyclic,
    r_sequence_metric,
    random_windows,
    shift_family_test,
)
from .permpoly import (
    CapExceededError,
    PolyModP,
    PolynomialSyntaxError,
    brute_permutation_check,
    find_non_surjective_prime,
    format_int_polynomial,
    hermite_check,
    is_permutation,
    parse_int_polynomial,
)
from .constructions import (
    IPBlockSchedule,
    build_ip_block_sequence,
    verify_not_pws,
    verify_shifted_recurrence,
)


class SystemSpecError(ValueError):
    pass


def _parse_angle_token(token: str):
    """'golden' | 'p/q' | decimal float -> (float angle, Fraction or None)."""
    token = token.strip()
    if token == "golden":
        return GOLDEN, None
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            frac = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise SystemSpecError(f"bad rational angle {token!r}") from exc
        return float(frac % 1), frac % 1
    try:
        return float(token) % 1.0, None
    except ValueError as exc:
        raise SystemSpecError(f"bad angle {token!r}") from exc


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_system_spec(spec: str):
    """cyclic:m | rot:angle[,angle...] | rot:p/q | odo:p^d | skew:angle | prod(a,b)."""
    spec = spec.strip()
    if spec.startswith("prod(") and spec.endswith(")"):
        inner = _split_top_level(spec[5:-1])
        if len(inner) != 2:
            raise SystemSpecError(f"prod(...) takes exactly two specs: {spec!r}")
        return ProductSystem(parse_system_spec(inner[0]), parse_system_spec(inner[1]))
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise SystemSpecError(f"bad system spec {spec!r}")
    if kind == "cyclic":
        try:
            return CyclicSystem(int(arg))
        except ValueError as exc:
            raise SystemSpecError(f"bad cyclic period {arg!r}") from exc
    if kind == "rot":
        tokens = arg.split(",")
        parsed = [_parse_angle_token(t) for t in tokens]
        fracs = [f for _, f in parsed]
        if all(f is not None for f in fracs):
            return RotationSystem.from_rationals(*fracs)
        return RotationSystem(tuple(a for a, _ in parsed))
    if kind == "odo":
        base, sep2, depth = arg.partition("^")
        if not sep2:
            raise SystemSpecError(f"odometer spec needs p^d, got {arg!r}")
        try:
            return OdometerSystem(int(base), int(depth))
        except ValueError as exc:
            raise SystemSpecError(f"bad odometer spec {arg!r}") from exc
    if kind == "skew":
        angle, frac = _parse_angle_token(arg)
        return SkewProductSystem(angle, frac)
    raise SystemSpecError(f"unknown system kind {kind!r}")


def _parse_shifts(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise SystemSpecError(f"shift range must look like 'a..b', got {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError as exc:
        raise SystemSpecError(f"bad shift range {text!r}") from exc
    if b < a:
        raise SystemSpecError(f"empty shift range {text!r}")
    return range(a, b + 1)


def _jsonify(value):
    if isinstance(value, Verdict):
        return value.to_json()
    if isinstance(value, Fraction):
        return {"exact": f"{value.numerator}/{value.denominator}", "float": float(value)}
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _load_window(path: str, horizon_override: Optional[int]) -> Window:
    w = parse_sequence_file(path)
    if horizon_override is not None:
        if horizon_override < w.horizon:
            w = w.restrict(horizon_override)
        else:
            w = Window(w.elements, horizon_override)
    return w


def _sequence_info(source: str, w: Window) -> dict:
    return {"source": source, "horizon": w.horizon, "count": len(w)}


def _emit(report: dict, args) -> None:
    doc = json.dumps(_jsonify(report), sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    if getattr(args, "json", False):
        sys.stdout.write(doc)


def _params_of(args, exclude=("func", "out", "json", "report")) -> dict:
    # Output routing (--out/--json/--report) is not part of the run config:
    # the same inputs + params + seed must give byte-identical reports
    # wherever they are written.
    params = {k: v for k, v in vars(args).items() if k not in exclude and not callable(v)}
    if isinstance(params.get("shifts"), range):
        r = params["shifts"]
        params["shifts"] = f"{r.start}..{r.stop - 1}"
    return params


def _print_verdict(label: str, v: Verdict) -> None:
    extra = f" witness={v.witness}" if v.witness is not None else ""
    note = f"  ({v.note})" if v.note else ""
    print(f"{label}: {v.status.value}{extra}{note}")


def _cmd_classify(args) -> int:
    w = _load_window(args.path, args.horizon)
    checks = {
        "syndetic": is_syndetic(w, args.gap),
        "thick": is_thick(w, args.run),
        "piecewise_syndetic": piecewise_syndetic_certificate(w, args.gap, args.block),
    }
    density = banach_density_estimate(w, min(args.density_length, w.horizon) or 1)
    report = {
        "sequence": _sequence_info(args.path, w),
        "family": "window classifiers",
        "checks": {k: v for k, v in checks.items()},
        "banach_density": density,
        "params": _params_of(args),
    }
    print(f"sequence {args.path}: {len(w)} elements, horizon {w.horizon}")
    _print_verdict(f"syndetic (gap {args.gap})", checks["syndetic"])
    _print_verdict(f"thick (run {args.run})", checks["thick"])
    _print_verdict(f"piecewise-syndetic certificate (gap {args.gap}, block {args.block})", checks["piecewise_syndetic"])
    print(f"banach density (length {args.density_length}): {density} = {float(density):.6g}")
    _emit(report, args)
    return 0


def _cmd_recurrence(args) -> int:
    w = _load_window(args.path, args.horizon)
    family = args.family.strip()
    if family.startswith("cyclic:<="):
        max_period = int(family[len("cyclic:<="):])
        family_str = f"cyclic m <= {max_period}"

        def tester(window):
            return r_sequence_cyclic(window, max_period)

    else:
        sys_obj = parse_system_spec(family)
        family_str = f"{family} eps={args.eps}"

        def tester(window):
            return r_sequence_metric(window, sys_obj, args.eps, args.start_grid)

    if args.shifts is not None:
        verdict = shift_family_test(w, args.shifts, tester)
        rep_json: dict = {"per_system": [], "family": family_str + ", shifted"}
        rep_json.update(verdict.to_json())
    else:
        report_obj = tester(w)
        verdict = report_obj.verdict
        rep_json = report_obj.to_json()
    report = {
        "sequence": _sequence_info(args.path, w),
        "params": _params_of(args),
        **rep_json,
    }
    _print_verdict(f"recurrence vs {family}", verdict)
    _emit(report, args)
    return 0


def _cmd_crosscheck(args) -> int:
    if args.path:
        windows = [(_load_window(args.path, args.horizon), args.path)]
    else:
        windows = [
            (w, f"seeded[{i}]")
            for i, w in enumerate(random_windows(args.count, args.horizon or 10_000, seed=args.seed))
        ]
    entries = []
    disagreements = 0
    for w, name in windows:
        v = crosscheck_cyclic_equivalence(w, args.max_period, args.shifts)
        if not v.holds:
            disagreements += 1
        entries.append({"sequence": _sequence_info(name, w), **v.to_json()})
    overall = (
        Verdict.hold(note=f"three predicates agree on all {len(windows)} windows")
        if disagreements == 0
        else Verdict.fail(disagreements, note=f"{disagreements} windows disagree")
    )
    report = {
        "family": f"cyclic m <= {args.max_period} equivalence cross-check",
        "per_system": entries,
        "params": _params_of(args),
        **overall.to_json(),
    }
    _print_verdict(
        f"cross-check ({len(windows)} windows, m <= {args.max_period}, shifts {args.shifts.start}..{args.shifts.stop - 1})",
        overall,
    )
    _emit(report, args)
    return 0


def _cmd_permpoly(args) -> int:
    coeffs = parse_int_polynomial(args.polynomial)
    if args.action == "check":
        if args.p is None:
            raise SystemSpecError("permpoly check needs --p")
        f = PolyModP.make(args.p, coeffs)
        permutes = is_permutation(f)
        ok_h, evidence = hermite_check(f)
        _, image = brute_permutation_check(f)
        report = {
            "polynomial": format_int_polynomial(coeffs),
            "p": args.p,
            "is_permutation": permutes,
            "criterion_evidence": evidence,
            "image_size": len(image),
            "image": list(image),
            "params": _params_of(args),
        }
        print(
            f"{report['polynomial']} over F_{args.p}: "
            + ("permutation" if permutes else f"not a permutation (image size {len(image)})")
        )
    else:  # find-prime
        res = find_non_surjective_prime(coeffs, args.cap)
        report = {
            "polynomial": format_int_polynomial(coeffs),
            **res.to_json(),
            "image": list(res.image),
            "params": _params_of(args),
        }
        print(
            f"{report['polynomial']}: p = {res.p}, missing residue {res.missing} "
            f"(image size {len(res.image)} of {res.p})"
        )
    _emit(report, args)
    return 0


def _cmd_construct(args) -> int:
    if args.schedule:
        with open(args.schedule, "r", encoding="utf-8") as fh:
            schedule = IPBlockSchedule.from_json(json.load(fh))
    else:
        schedule = IPBlockSchedule.default(args.blocks)
    built = build_ip_block_sequence(schedule)
    w = built.window
    not_pws = verify_not_pws(built, args.gap, args.block_length)
    shifted = verify_shifted_recurrence(built, args.max_period, args.shifts)
    if args.out:
        comment = (
            f"ip-block sequence: {schedule.block_count} blocks, "
            f"t-schedule {'default' if schedule.uses_default_t else 'custom'}"
        )
        write_sequence_file(args.out, w, comment)
        print(f"wrote {len(w)} elements to {args.out}")
    report = {
        "sequence": _sequence_info(args.out or "<not written>", w),
        "family": "ip-block construction",
        "spacing_law": built.spacing_law_holds(),
        "blocks": [
            {"index": b.index, "t": b.t, "offset": b.offset, "size": b.hi - b.lo, "lo": b.lo, "hi": b.hi}
            for b in built.blocks
        ],
        "not_piecewise_syndetic": not_pws,
        "shifted_recurrence": shifted,
        "params": _params_of(args),
    }
    print(f"built {schedule.block_count} blocks, horizon {w.horizon}")
    print(f"spacing law: {'holds' if built.spacing_law_holds() else 'VIOLATED'}")
    _print_verdict(f"not piecewise syndetic (gap {args.gap}, block {args.block_length})", not_pws)
    _print_verdict(
        f"shifted recurrence (m <= {args.max_period}, shifts {args.shifts.start}..{args.shifts.stop - 1})",
        shifted,
    )
    # --out holds the sequence file; the JSON report goes to --report/--json.
    if args.report:
        doc = json.dumps(_jsonify(report), sort_keys=True, indent=2) + "\n"
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(doc)
    if args.json:
        sys.stdout.write(json.dumps(_jsonify(report), sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_product(args) -> int:
    left = parse_system_spec(args.left)
    right = parse_system_spec(args.right)
    if not isinstance(left, CyclicSystem) or not isinstance(right, CyclicSystem):
        raise SystemSpecError("product transitivity oracle takes two cyclic:m specs")
    res = product_transitive_finite(left.period, right.period)
    report = {**res.to_json(), "params": _params_of(args)}
    print(
        f"cyclic:{res.m} x cyclic:{res.n}: transitive={res.coprime} "
        f"(orbit of (0,0) has {res.orbit_size} states of {res.m * res.n}; "
        f"enumeration {'agrees' if res.agrees else 'DISAGREES'})"
    )
    _emit(report, args)
    return 0 if res.agrees else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynwindow",
        description="Window-bounded recurrence, density and permutation-polynomial checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SWEEP_SEED, help="seed recorded in the report")

    p = sub.add_parser("classify", help="syndetic / thick / piecewise-syndetic / density checks")
    p.add_argument("path", help="sequence file")
    p.add_argument("--horizon", type=int, default=None, help="override the file's horizon")
    p.add_argument("--gap", type=int, default=10, help="gap bound for syndeticity")
    p.add_argument("--run", type=int, default=10, help="run length for thickness")
    p.add_argument("--block", type=int, default=100, help="interval length for the pws certificate")
    p.add_argument("--density-length", type=int, default=1000, help="interval length for banach density")
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("recurrence", help="orbit-density test against a system family")
    p.add_argument("path", help="sequence file")
    p.add_argument("family", help="cyclic:<=M, rot:..., or skew:...")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--eps", type=float, default=0.05, help="cell size for metric families")
    p.add_argument("--start-grid", type=float, default=0.25, dest="start_grid", help="start grid resolution")
    p.add_argument("--shifts", type=_parse_shifts, default=None, help="also require every shifted copy to pass (a..b)")
    add_common(p)
    p.set_defaults(func=_cmd_recurrence)

    p = sub.add_parser("crosscheck", help="three-way equivalence cross-check on the cyclic family")
    p.add_argument("path", nargs="?", default=None, help="sequence file (omit to sweep seeded random windows)")
    p.add_argument("--count", type=int, default=500, help="number of random windows when no file is given")
    p.add_argument("--horizon", type=int, default=None, help="horizon for random windows / override for files")
    p.add_argument("--max-period", type=int, default=12, dest="max_period")
    p.add_argument("--shifts", type=_parse_shifts, default=range(-6, 7))
    add_common(p)
    p.set_defaults(func=_cmd_crosscheck)

    p = sub.add_parser("permpoly", help="permutation-polynomial checks over prime fields")
    p.add_argument("action", choices=("check", "find-prime"))
    p.add_argument("polynomial", help='e.g. "x^2+3x+1"')
    p.add_argument("--p", type=int, default=None, help="prime field for 'check'")
    p.add_argument("--cap", type=int, default=10_000, help="prime cap for 'find-prime'")
    add_common(p)
    p.set_defaults(func=_cmd_permpoly)

    p = sub.add_parser("construct", help="build the ip-block sequence and verify both halves")
    p.add_argument("kind", choices=("example",), help="construction to build")
    p.add_argument("--blocks", type=int, default=30)
    p.add_argument("--schedule", default=None, help="custom schedule JSON ({t, k, base})")
    p.add_argument("--out", default=None, help="write the sequence file here")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    p.add_argument("--gap", type=int, default=10)
    p.add_argument("--block-length", type=int, default=100, dest="block_length")
    p.add_argument("--max-period", type=int, default=20, dest="max_period")
    p.add_argument("--shifts", type=_parse_shifts, default=range(-10, 11))
    p.add_argument("--seed", type=int, default=DEFAULT_SWEEP_SEED)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("product", help="transitivity oracle for a product of two cycles")
    p.add_argument("left", help="cyclic:m")
    p.add_argument("right", help="cyclic:n")
    add_common(p)
    p.set_defaults(func=_cmd_product)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        SequenceFormatError,
        SystemSpecError,
        PolynomialSyntaxError,
        CapExceededError,
        FileNotFoundError,
        ValueError,
        TypeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
