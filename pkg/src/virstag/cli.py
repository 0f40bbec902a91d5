"""Command-line frontend.

Subcommands cover classification, singular vectors, the Shapovalov form and
its determinant check, the intersection spaces, existence decisions, beta
invariants, the brute-force oracle, the generic-parameter table, and named
end-to-end reproductions with golden expected values.

Module notation: ``--left h/g1[,g2]`` is the weight-h Verma module quotiented
by its singular vectors at (relative) grades g1 (and g2); plain ``--left h``
is the Verma module itself.  Exactly one of --t/--c selects the parameter.

Exit codes: 0 success, 2 usage error, 3 incompatible left/right pair,
4 unsupported configuration (the documented open corner).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .intersection import intersection_basis, intersection_dim
from .scalars import (
    IrrationalRootsError,
    KacLabel,
    kac_weight,
    parse_scalar,
    scalar_str,
    scalar_to_json,
    t_candidates_from_c,
)
from .staggered import (
    BetaValue,
    DataPair,
    StaggeredProblem,
    UnsupportedConfigurationError,
    beta_invariants,
    exists,
    generic_beta_bar,
    moduli_dimension,
    oracle_singular,
    rohsiepe_exists,
)
from .structure import IncompatibleError, classify
from .verma import (
    HWModule,
    VermaModule,
    find_singular,
    kac_determinant_ratio,
    kac_determinant_roots,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3
EXIT_UNSUPPORTED = 4


def _thread_cap() -> int:
    # parallelism cap honoured by the (currently single-threaded) kernels
    try:
        return max(1, int(os.environ.get("VIRSTAG_THREADS", "1")))
    except ValueError:
        return 1


def emit_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _resolve_t(args) -> Fraction:
    if args.t is not None and args.c is not None:
        raise SystemExit2("provide exactly one of --t / --c")
    if args.t is not None:
        try:
            t = parse_scalar(args.t)
        except (ValueError, ZeroDivisionError) as err:
            raise SystemExit2(f"bad --t value: {err}")
        if t == 0:
            raise SystemExit2("t must be nonzero")
        return t
    if args.c is not None:
        try:
            return t_candidates_from_c(parse_scalar(args.c))[0]
        except IrrationalRootsError as err:
            raise SystemExit2(str(err))
    raise SystemExit2("one of --t / --c is required")


class SystemExit2(Exception):
    """Usage error carrying its message; mapped to exit code 2."""


def _arg_scalar(text: str, flag: str):
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as err:
        raise SystemExit2(f"bad {flag} value {text!r}: {err}")


def _parse_module(spec: str, t) -> HWModule:
    """h or h/k1[,k2]: the weight-h Verma module, quotiented by the singular
    vectors of weights k1 (and k2), mirroring the usual V_h / V_k labels.

    Fractional weights keep their slashes ("1/4/9/4" is the weight-1/4 module
    with a weight-9/4 generator); the reading is fixed by requiring every
    k - h to be a positive integer, which singles out one split.
    """
    candidates = []
    pieces = spec.split("/")
    for cut in range(1, len(pieces) + 1):
        try:
            h = parse_scalar("/".join(pieces[:cut]))
            tail = "/".join(pieces[cut:])
            grades = []
            for item in (x for x in tail.split(",") if x) if tail else ():
                rel = parse_scalar(item) - h
                if rel.denominator != 1 or rel <= 0:
                    raise ValueError
                grades.append(int(rel))
        except (ValueError, ZeroDivisionError):
            continue
        candidates.append((h, tuple(grades)))
    if not candidates:
        raise SystemExit2(f"bad module {spec!r}: expected h or h/k1[,k2] with "
                          "each k - h a positive integer")
    # shortest-weight readings first ("0/2" is the weight-0 module with a
    # grade-2 generator); the first that actually constructs wins
    first_error = None
    for h, grades in candidates:
        try:
            return HWModule.get(VermaModule.get(h, t), grades)
        except ValueError as err:
            if first_error is None:
                first_error = err
    raise SystemExit2(f"bad module {spec!r}: {first_error}")


def _parse_beta(text: str, b: int) -> BetaValue:
    parts = [_arg_scalar(x, "--beta") for x in text.strip("() ").split(",") if x.strip()]
    if b == 0 and not parts:
        return BetaValue.none()
    if b == 1 and len(parts) == 1:
        return BetaValue.single(parts[0])
    if b == 2 and len(parts) == 2:
        return BetaValue.pair(*parts)
    raise SystemExit2(f"--beta needs {b} value(s), got {text!r}")


# -- subcommand handlers -----------------------------------------------------


def cmd_classify(args, out):
    t = _resolve_t(args)
    st = classify(_arg_scalar(args.h, "--h"), t, args.max_grade)
    if args.json:
        out(emit_json(st.to_json()))
    else:
        out(f"type: {st.kind}")
        for e in st.entries:
            sign = {0: "", -1: " (-)", 1: " (+)"}[e.sign]
            out(f"  grade {e.grade}{sign}  rank {e.rank}")
    return EXIT_OK


def cmd_singular(args, out):
    t = _resolve_t(args)
    sv = find_singular(VermaModule.get(_arg_scalar(args.h, "--h"), t), args.grade)
    if sv is None:
        out("none")
        return EXIT_OK
    if args.json:
        out(emit_json(sv.to_json()))
    else:
        out(f"grade {sv.grade}, rank {sv.rank}")
        out(f"element: {sv.element}")
        for i, f in enumerate(sv.factors):
            out(f"factor {i}: {f}")
    return EXIT_OK


def cmd_gram(args, out):
    t = _resolve_t(args)
    mod = _parse_module(args.h, t)
    matrix = mod.gram_matrix(args.grade)
    if args.json:
        out(emit_json([[scalar_to_json(x) for x in row] for row in matrix]))
    else:
        for row in matrix:
            out("  ".join(scalar_str(x) for x in row))
    return EXIT_OK


def cmd_kacdet_check(args, out):
    t = _resolve_t(args)
    import random

    rng = random.Random(args.seed)
    ok = True
    for n in range(1, args.max_grade + 1):
        roots = {kac_weight(lab, t) for lab, _ in kac_determinant_roots(n, t)}
        ratios = set()
        samples = 0
        while samples < args.samples:
            h = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            if h in roots:
                continue
            samples += 1
            ratios.add(kac_determinant_ratio(VermaModule.get(h, t), n))
        const = len(ratios) == 1 and all(r != 0 for r in ratios)
        ok = ok and const
        roots = ", ".join(f"({lab.r},{lab.s})^{m}" for lab, m in kac_determinant_roots(n, t))
        out(f"grade {n}: ratio constant and nonzero: {const}  [factors {roots}]")
    return EXIT_OK if ok else 1


def cmd_intersection(args, out):
    basis = intersection_basis(args.m, Fraction(0))
    if args.json:
        out(emit_json({"m": args.m, "dim": intersection_dim(args.m),
                       "basis": [b.to_json() for b in basis]}))
    else:
        out(f"d({args.m}) = {intersection_dim(args.m)}")
        for b in basis:
            out(f"  U1 = {b.u1}")
            out(f"  U2 = {b.u2}")
    return EXIT_OK


def _build_problem(args):
    t = _resolve_t(args)
    left = _parse_module(args.left, t)
    right = _parse_module(args.right, t)
    return StaggeredProblem.build(left, right)


def _answer_text(ans, out):
    if ans.status == "empty":
        out(f"empty: {ans.reason}")
        return
    out(f"affine space of dimension {ans.beta_dim} in beta space of dimension {ans.b}")
    for c in ans.constraints:
        terms = " + ".join(f"({scalar_str(x)})*beta{i}" for i, x in enumerate(c.coeffs))
        out(f"  constraint[gen@{c.generator_grade}, crit@{c.critical_grade}]: "
            f"({scalar_str(c.offset)}) + {terms} = 0" if terms else
            f"  constraint[gen@{c.generator_grade}, crit@{c.critical_grade}]: "
            f"({scalar_str(c.offset)}) = 0")
    if ans.point is not None:
        out(f"  point: ({', '.join(scalar_str(x) for x in ans.point)})")
        for d in ans.directions:
            out(f"  direction: ({', '.join(scalar_str(x) for x in d)})")


def cmd_exists(args, out):
    problem = _build_problem(args)
    ans = exists(problem)
    if args.json:
        out(emit_json(ans.to_json()))
    else:
        _answer_text(ans, out)
    return EXIT_OK


def cmd_beta(args, out):
    problem = _build_problem(args)
    b, tag = moduli_dimension(problem)
    from .scalars import scalar_from_json

    payload = json.loads(args.data)
    left = problem.left
    ell = problem.ell

    def vec(key, grade):
        coords = [scalar_from_json(x) for x in payload.get(key, [])]
        if grade < 0:
            return left.zero(grade)
        if len(coords) != left.dim(grade):
            raise SystemExit2(f"{key} needs {left.dim(grade)} coordinates at grade {grade}")
        return left.vector(grade, tuple(coords))

    d = DataPair(vec("omega1", ell - 1), vec("omega2", ell - 2))
    val = beta_invariants(problem, d)
    if args.json:
        out(emit_json({"case": tag, "b": b, "beta": val.to_json()}))
    else:
        out(f"case ({tag}), b = {b}")
        out("beta = " + ", ".join(scalar_str(v) for v in val.values))
    return EXIT_OK


def cmd_oracle(args, out):
    problem = _build_problem(args)
    b, _ = moduli_dimension(problem)
    target = _parse_beta(args.beta or "", b)
    witnesses = oracle_singular(problem, target)
    if witnesses is None:
        out("no singular vector: no staggered module at this beta")
        return EXIT_OK
    if args.json:
        out(emit_json([w.to_json() for w in witnesses]))
    else:
        for sv, w in zip(problem.right.generators, witnesses):
            out(f"witness at grade {problem.ell + sv.grade}:")
            out(f"  varpi = {problem.left.parent.vector_to_element(problem.left.lift(w))}")
    return EXIT_OK


def cmd_table_6_12(args, out):
    rows = [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (2, 2), (3, 2)]
    payload = []
    for r, s in rows:
        val = generic_beta_bar(r, s)
        ts = _existence_points(r, s)
        payload.append({"r": r, "s": s, "beta_bar": scalar_to_json(val),
                        "exists_at": [scalar_to_json(x) for x in ts]})
        if not args.json:
            pretty = ", ".join(f"t={x}" for x in ts) if ts else "--"
            out(f"({r},{s}): {scalar_str(val)}   [{pretty}]")
    if args.json:
        out(emit_json(payload))
    return EXIT_OK


def _existence_points(r: int, s: int):
    """Rational t where the gap-zero module for the (r, s) generator exists."""
    from .structure import classify as _classify

    val = generic_beta_bar(r, s)
    roots = _rational_roots(val.num)
    out = []
    for t0 in sorted(set(roots)):
        if t0 == 0:
            continue
        h = kac_weight(KacLabel(r, s), t0)
        lattice = _classify(h, t0, max_grade=max(r * s, 1))
        entry = lattice.entry_at(r * s)
        if entry is None or entry.rank != 1:
            continue  # the generator degenerated to a composite singular vector
        if rohsiepe_exists(h, t0):
            out.append(t0)
    return out


def _rational_roots(poly):
    """All rational roots of an integer polynomial (by divisor scanning)."""
    from .scalars import poly_eval

    coeffs = list(poly)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        return []
    lead, const = coeffs[-1], coeffs[0]

    def divisors(n):
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                out.add(n // d)
            d += 1
        return sorted(out)

    roots = []
    for p in divisors(const):
        for q in divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if poly_eval(poly, cand) == 0:
                    roots.append(cand)
    return roots


def cmd_reproduce(args, out):
    from .reproduce import run_example

    return run_example(args.example, out, json_mode=args.json)


HANDLERS = {
    "classify": cmd_classify,
    "singular": cmd_singular,
    "gram": cmd_gram,
    "kacdet-check": cmd_kacdet_check,
    "intersection": cmd_intersection,
    "exists": cmd_exists,
    "beta": cmd_beta,
    "oracle": cmd_oracle,
    "table-6-12": cmd_table_6_12,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="virstag",
        description="Exact decisions about rank-2 staggered Virasoro modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modules=False, grade=False):
        p.add_argument("--t", help="parameter t as an exact rational, e.g. 3/2")
        p.add_argument("--c", help="central charge; converted to t when rational")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        if modules:
            p.add_argument("--left", required=True, help="left module h/g1[,g2]")
            p.add_argument("--right", required=True, help="right module h/g1[,g2]")
        if grade:
            p.add_argument("--grade", type=int, required=True)

    p = sub.add_parser("classify", help="point/link/chain/braid lattice of a Verma module")
    common(p)
    p.add_argument("--h", required=True)
    p.add_argument("--max-grade", type=int, default=16)

    p = sub.add_parser("singular", help="normalised singular vector at a grade")
    common(p, grade=True)
    p.add_argument("--h", required=True)

    p = sub.add_parser("gram", help="Shapovalov form at a grade")
    common(p, grade=True)
    p.add_argument("--h", required=True, help="module h or h/g1[,g2]")

    p = sub.add_parser("kacdet-check", help="verify the determinant factorisation")
    common(p)
    p.add_argument("--max-grade", type=int, default=5)
    p.add_argument("--samples", type=int, default=5)

    p = sub.add_parser("intersection", help="basis of the L1/L2 intersection at -m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("exists", help="decide existence for a left/right pair")
    common(p, modules=True)

    p = sub.add_parser("beta", help="invariants of supplied data")
    common(p, modules=True)
    p.add_argument("--data", required=True,
                   help='JSON {"omega1": [...], "omega2": [...]} in quotient coordinates')

    p = sub.add_parser("oracle", help="brute-force singular-vector search")
    common(p, modules=True)
    p.add_argument("--beta", help="target invariants, e.g. -1/2 or (1,0)")

    p = sub.add_parser("table-6-12", help="generic-parameter obstruction table")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reproduce", help="run a named worked example end to end")
    p.add_argument("example", help="example id, e.g. ex-4.4 (or 'list')")
    p.add_argument("--json", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    _thread_cap()
    lines = []

    def out(line=""):
        lines.append(str(line))

    try:
        code = HANDLERS[args.command](args, out)
    except SystemExit2 as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except IncompatibleError as err:
        print(f"incompatible: {err.reason}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except UnsupportedConfigurationError as err:
        print(f"unsupported configuration: {err}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
