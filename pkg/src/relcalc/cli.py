"""Command-line interface.

Exit codes are a stable contract: 0 success (all checks pass), 1 check
failure, 2 parse error, 3 precondition violation, 4 lower-bound
certification failure.  All numeric output is exact rational strings; the
only floating value is the bound estimate, labeled approximate in both
formats.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import BoundCertificationError, ParseError, PreconditionError, RelcalcError
from .extensions import (
    extremal_check,
    friedrichs,
    krein,
    order_leq,
    weak_friedrichs,
    weak_krein,
)
from .forms import bound_bisect, form_of_relation
from .harness import InstanceSpec, random_semibounded, run_suite, verify_all
from .relations import (
    adjoint,
    is_selfadjoint,
    is_symmetric,
    numerical_range_zero,
    parts,
)
from .serialize import (
    canonical_dumps,
    parse_rational,
    rational_to_str,
    read_relation,
    relation_to_json,
    subspace_to_json,
    vector_to_json,
    write_relation,
)

EXTEND_KINDS = {
    "friedrichs": (friedrichs, ("repmap-product", "adjoint-domain-membership", "multivalued-graph-sum")),
    "weak-friedrichs": (weak_friedrichs, ("multivalued-graph-sum", "equals-friedrichs")),
    "krein": (krein, ("companion-product", "eigenspace-graph-sum", "inverse-duality", "closure-graph-sum")),
    "weak-krein": (weak_krein, ("eigenspace-graph-sum", "equals-krein")),
}


def _emit(args, data: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        payload = canonical_dumps(data)
    else:
        payload = "\n".join(text_lines) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def cmd_analyze(args) -> int:
    rel = read_relation(args.file)
    p = parts(rel)
    data: dict = {
        "parts": {
            "dom": {"dim": p.dom.dim, **subspace_to_json(p.dom)},
            "ran": {"dim": p.ran.dim, **subspace_to_json(p.ran)},
            "ker": {"dim": p.ker.dim, **subspace_to_json(p.ker)},
            "mul": {"dim": p.mul.dim, **subspace_to_json(p.mul)},
        },
    }
    lines = [
        f"dom: dim {p.dom.dim}  basis {[vector_to_json(b) for b in p.dom.basis_vectors()]}",
        f"ran: dim {p.ran.dim}  basis {[vector_to_json(b) for b in p.ran.basis_vectors()]}",
        f"ker: dim {p.ker.dim}  basis {[vector_to_json(b) for b in p.ker.basis_vectors()]}",
        f"mul: dim {p.mul.dim}  basis {[vector_to_json(b) for b in p.mul.basis_vectors()]}",
    ]
    if rel.src != rel.dst:
        data.update({"symmetric": False, "selfadjoint": False, "numerical_range_zero": False, "bound": None})
        lines.append("relation is not an endorelation; no form analysis")
        _emit(args, data, lines)
        return 3
    symmetric = is_symmetric(rel)
    data["symmetric"] = symmetric
    data["selfadjoint"] = is_selfadjoint(rel)
    data["numerical_range_zero"] = numerical_range_zero(rel)
    lines.append(f"symmetric: {symmetric}")
    lines.append(f"selfadjoint: {data['selfadjoint']}")
    lines.append(f"numerical range zero: {data['numerical_range_zero']}")
    if not symmetric:
        data["bound"] = None
        lines.append("not symmetric: the form of the relation is undefined")
        _emit(args, data, lines)
        return 3
    t = form_of_relation(rel)
    if t.domain.dim == 0:
        data["bound"] = None
        lines.append("bound: empty domain, no finite lower bound to certify")
    else:
        width = parse_rational(args.width, "--width")
        interval = bound_bisect(t, width)
        data["bound"] = {
            "certified_lo": rational_to_str(interval.lo),
            "refuted_hi": rational_to_str(interval.hi),
            "estimate_approximate": interval.estimate,
        }
        lines.append(
            f"bound: certified at {interval.lo}, refuted at {interval.hi} "
            f"(estimate approximate: {interval.estimate})"
        )
    _emit(args, data, lines)
    return 0


def cmd_extend(args) -> int:
    rel = read_relation(args.file)
    c = parse_rational(args.c, "--c") if args.c is not None else None
    if c is None:
        t = form_of_relation(rel)
        if t.domain.dim == 0:
            c = Fraction(0)
        else:
            c = bound_bisect(t, Fraction(1, 64)).lo
    builder, checks = EXTEND_KINDS[args.kind]
    out = builder(rel, c)
    if args.output:
        write_relation(args.output, out)
    data = {
        "kind": args.kind,
        "c": rational_to_str(c),
        "asserted_checks": list(checks),
        "relation": relation_to_json(out),
    }
    lines = [
        f"kind: {args.kind}",
        f"c: {c}",
        f"asserted cross-checks: {', '.join(checks)}",
        f"graph dimension: {out.graph.dim}",
    ]
    if args.output:
        lines.append(f"wrote {args.output}")
        data["wrote"] = args.output
    emit_args = argparse.Namespace(format=args.format, output=None)
    _emit(emit_args, data, lines)
    return 0


def cmd_order(args) -> int:
    h = read_relation(args.h_file)
    k = read_relation(args.k_file)
    hk = order_leq(h, k).leq
    kh = order_leq(k, h).leq
    verdict = {(True, True): "equal", (True, False): "leq", (False, True): "geq", (False, False): "incomparable"}[(hk, kh)]
    _emit(args, {"order": verdict}, [verdict])
    return 0


def cmd_extremal(args) -> int:
    h = read_relation(args.h_file)
    s = read_relation(args.s_file)
    c = parse_rational(args.c, "--c")
    res = extremal_check(h, s, c)
    _emit(args, {"extremal": res, "c": rational_to_str(c)}, [str(res).lower()])
    return 0


def _parse_dims(raw: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = raw.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise ParseError(f"--dims: expected A..B, got {raw!r}") from None
    if lo < 1 or hi < lo:
        raise ParseError(f"--dims: invalid range {raw!r}")
    return lo, hi


def cmd_check(args) -> int:
    if args.file is not None:
        rel = read_relation(args.file)
        if args.c is not None:
            c = parse_rational(args.c, "--c")
        else:
            t = form_of_relation(rel)
            c = bound_bisect(t, Fraction(1, 64)).lo if t.domain.dim else Fraction(0)
        results = verify_all(rel, c, seed=args.seed)
        failures = [r for r in results if not r.passed]
        data = {
            "c": rational_to_str(c),
            "checks": [
                {"name": r.name, "passed": r.passed, **({"witness": r.witness} if r.witness else {})}
                for r in results
            ],
            "summary": f"{len(results) - len(failures)}/{len(results)} checks, {len(failures)} failures",
        }
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}" + (f"  [{r.witness}]" if r.witness else "") for r in results]
        lines.append(data["summary"])
        _emit(args, data, lines)
        return 0 if not failures else 1
    dims = _parse_dims(args.dims)
    reports = run_suite(args.count, dims, args.seed)
    failures = [rep for rep in reports if not rep.passed]
    data = {
        "instances": [
            {
                "instance": {
                    "dim": rep.spec.dim,
                    "seed": rep.spec.seed,
                    "mul_dim": rep.spec.mul_dim,
                    "restrict_dim": rep.spec.restrict_dim,
                    "entry_bound": rep.spec.entry_bound,
                },
                "c": rational_to_str(rep.c),
                "checks": [
                    {"name": ch.name, "passed": ch.passed, **({"witness": ch.witness} if ch.witness else {})}
                    for ch in rep.checks
                ],
            }
            for rep in reports
        ],
        "summary": f"{len(reports) - len(failures)}/{len(reports)} instances, {len(failures)} failures",
    }
    lines = []
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        lines.append(f"{status} dim={rep.spec.dim} seed={rep.spec.seed} c={rep.c}")
        for ch in rep.checks:
            if not ch.passed:
                lines.append(f"  FAIL {ch.name}: {ch.witness}")
    lines.append(data["summary"])
    _emit(args, data, lines)
    return 0 if not failures else 1


def cmd_random(args) -> int:
    spec = InstanceSpec(
        dim=args.dim,
        seed=args.seed,
        mul_dim=args.mul,
        restrict_dim=args.restrict if args.restrict is not None else max(1, args.dim // 2),
        entry_bound=args.bound,
    )
    s, c = random_semibounded(spec)
    if args.output:
        write_relation(args.output, s)
    data = {"c": rational_to_str(c), "relation": relation_to_json(s)}
    lines = [f"certified c: {c}", f"graph dimension: {s.graph.dim}"]
    if args.output:
        lines.append(f"wrote {args.output}")
    emit_args = argparse.Namespace(format=args.format, output=None)
    _emit(emit_args, data, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcalc",
        description="Exact calculus of semibounded linear relations and their extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("analyze", help="parts, predicates and certified bound interval")
    p.add_argument("file")
    p.add_argument("--width", default="1/64", help="bound interval width (default 1/64)")
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("extend", help="compute an extension and write its graph")
    p.add_argument("file")
    p.add_argument("--kind", choices=tuple(EXTEND_KINDS), required=True)
    p.add_argument("--c", default=None, help="rational base point p/q (default: certified bisection point)")
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("order", help="compare two selfadjoint relations")
    p.add_argument("h_file")
    p.add_argument("k_file")
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("extremal", help="extremality of an extension")
    p.add_argument("h_file")
    p.add_argument("s_file")
    p.add_argument("--c", required=True)
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("check", help="run the identity suite on a file or random instances")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--c", default=None)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--dims", default="2..6")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random", help="generate a random semibounded relation file")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mul", type=int, default=0)
    p.add_argument("--restrict", type=int, default=None)
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except BoundCertificationError as exc:
        print(f"bound certification failed: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"counterexample: {vector_to_json(exc.witness)}", file=sys.stderr)
        return 4
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 3
    except RelcalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
