"""Named end-to-end reproductions with frozen expected values.

Each example builds its modules from scratch, runs the full decision
pipeline, and diffs the outcome against the published values.  The runner
prints one pass/fail line per check and exits nonzero on any mismatch.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraElement
from .scalars import RatFunc
from .staggered import (
    BetaValue,
    StaggeredProblem,
    exists,
    generic_beta_bar,
    moduli_dimension,
    oracle_singular,
)
from .verma import HWModule, VermaModule, find_singular_element

F = Fraction


class Check:
    def __init__(self, out):
        self.out = out
        self.failures = 0

    def eq(self, label, got, want):
        ok = got == want
        if not ok:
            self.failures += 1
        self.out(f"[{'pass' if ok else 'FAIL'}] {label}: got {got!r}"
                 + ("" if ok else f", want {want!r}"))

    def true(self, label, cond):
        self.eq(label, bool(cond), True)


def _problem(t, h_left, left_grades, h_right, right_grades) -> StaggeredProblem:
    left = HWModule.get(VermaModule.get(F(h_left), F(t)), left_grades)
    right = HWModule.get(VermaModule.get(F(h_right), F(t)), right_grades)
    return StaggeredProblem.build(left, right)


def _witness_element(problem, vec):
    return problem.left.parent.vector_to_element(problem.left.lift(vec))


def _elem(c, terms):
    out = AlgebraElement(c)
    for mono, coeff in terms.items():
        out._add_terms({mono: F(coeff) if isinstance(coeff, (int, str)) else coeff})
    return out


def ex_4_4(ck: Check):
    p = _problem("3/2", 1, (4,), 7, (8,))
    ans = exists(p)
    ck.eq("status", ans.status, "affine")
    ck.eq("dimension", ans.beta_dim, 0)
    ck.eq("beta", ans.point, (F(-10780000, 243),))
    ck.true("oracle agrees", oracle_singular(p, BetaValue.single(F(-10780000, 243))) is not None)


def ex_5_15(ck: Check):
    p = _problem("3/2", 0, (), 5, ())
    b, tag = moduli_dimension(p)
    ck.eq("moduli dimension", b, 2)
    ck.eq("case", tag, "2")
    c = p.left.c
    chi_minus = find_singular_element(VermaModule.get(F(1), F(3, 2)), 4)
    ck.eq("minus factor", chi_minus, _elem(c, {
        ((-1, 4),): 1, ((-2, 1), (-1, 2)): F(-20, 3), ((-2, 2),): 4,
        ((-3, 1), (-1, 1)): 4, ((-4, 1),): -4}))
    chi_plus = find_singular_element(VermaModule.get(F(2), F(3, 2)), 3)
    ck.eq("plus factor", chi_plus, _elem(c, {
        ((-1, 3),): 1, ((-2, 1), (-1, 1)): -6, ((-3, 1),): 6}))


def ex_5_16(ck: Check):
    p = _problem("2", 0, (), 3, ())
    b, tag = moduli_dimension(p)
    ck.eq("moduli dimension", b, 1)
    from .staggered import _projection_steps

    steps = _projection_steps(p.left.parent, p.info.left_lattice, 3)
    ck.eq("one projection step", len(steps), 1)
    (elem, norm), = steps[0].zn
    ck.eq("complement element", elem, _elem(p.left.c, {((-3, 1),): 1}))
    ck.eq("complement norm", norm, -4)


def ex_6_3a(ck: Check):
    p = _problem("2", 0, (3,), 1, (5,))
    ans = exists(p)
    ck.eq("status", ans.status, "affine")
    ck.eq("dimension", ans.beta_dim, 1)
    # witness coefficients at sample beta values, frozen from the published form
    c = p.left.c
    for beta in (F(0), F(1), F(-1)):
        w = oracle_singular(p, BetaValue.single(beta))
        ck.true(f"witness exists at beta={beta}", w is not None)
        got = _witness_element(p, w[0])
        want = _elem(c, {
            ((-2, 2), (-1, 2)): F(-16, 3) * (beta + 1),
            ((-3, 1), (-2, 1), (-1, 1)): F(4, 3) * (14 * beta + 5),
            ((-3, 2),): -6 * beta,
            ((-4, 1), (-1, 2)): -6 * (beta - 2),
            ((-4, 1), (-2, 1)): 8 * beta,
            ((-5, 1), (-1, 1)): F(-2, 3) * (5 * beta + 2),
            ((-6, 1),): 4 * beta,
        })
        ck.eq(f"witness coefficients at beta={beta}", got, want)


def ex_6_3b(ck: Check):
    p = _problem("3/2", 0, (2,), 1, (4,))
    ans = exists(p)
    ck.eq("status", ans.status, "affine")
    ck.eq("beta", ans.point, (F(-1, 2),))
    cons = ans.constraints
    ck.eq("one constraint", len(cons), 1)
    scale = cons[0].offset / F(-1120, 3)
    ck.true("constraint is -(1120/3)(2b+1)",
            scale != 0 and cons[0].coeffs[0] == scale * F(-2240, 3))
    w = oracle_singular(p, BetaValue.single(F(-1, 2)))
    ck.true("witness exists", w is not None)
    ck.eq("witness", _witness_element(p, w[0]), _elem(p.left.c, {
        ((-3, 1), (-2, 1)): F(-32, 9), ((-4, 1), (-1, 1)): F(16, 3), ((-5, 1),): 2}))
    ck.true("no witness at beta=0", oracle_singular(p, BetaValue.single(F(0))) is None)


def ex_6_6(ck: Check):
    p = _problem("2", 0, (3,), 1, (2,))
    cons = exists(p).constraints
    ck.eq("one constraint", len(cons), 1)
    ck.eq("affine relation 12 - 15 beta", (cons[0].offset, cons[0].coeffs), (F(12), (F(-15),)))
    ck.eq("beta", exists(p).point, (F(4, 5),))


def ex_6_9(ck: Check):
    ex_6_3b(ck)
    p = _problem("3/2", 0, (2,), 1, (4, 6))
    ck.eq("V1/(V5+V7) empty", exists(p).status, "empty")


def ex_6_9b(ck: Check):
    p = _problem("3/2", 0, (2,), 1, (6,))
    ans = exists(p)
    ck.eq("beta", ans.point, (F(1, 3),))
    cons = ans.constraints
    scale = cons[0].offset / F(17248000, 243)
    ck.true("constraint is -(17248000/243)(3b-1)",
            scale != 0 and cons[0].coeffs[0] == scale * F(-17248000, 81))


def ex_6_10a(ck: Check):
    p = _problem("3/2", 0, (12, 15), 5, (7,))
    ans = exists(p)
    ck.eq("point", ans.point, (F(-11200, 51), F(1680, 17)))
    ck.eq("dimension", ans.beta_dim, 0)


def ex_6_10b(ck: Check):
    p = _problem("3/2", 0, (12, 15), 5, (10,))
    ans = exists(p)
    ck.eq("point", ans.point, (F(-5600, 57), F(3360, 19)))
    ck.eq("dimension", ans.beta_dim, 0)


def ex_6_10c(ck: Check):
    p = _problem("3/2", 0, (12, 15), 5, (7, 10))
    ck.eq("empty", exists(p).status, "empty")


def ex_6_10d(ck: Check):
    p = _problem("3/2", 0, (7,), 5, (7,))
    ans = exists(p)
    ck.eq("dimension", ans.beta_dim, 1)
    (c0,) = ans.constraints
    # one line in (beta-, beta+): proportional to 189 b- + 80 b+ + 33600 = 0.
    # The constant is sometimes quoted as -3360, but the published point
    # values lie on the -33600 line, as does the brute-force witness region.
    scale = c0.coeffs[0] / 189
    ck.true("line 189 b- + 80 b+ = -33600",
            scale != 0 and c0.coeffs[1] == 80 * scale and c0.offset == 33600 * scale)
    ck.true("oracle on line", oracle_singular(
        p, BetaValue.pair(F(-11200, 51), F(1680, 17))) is not None)
    ck.true("oracle off line", oracle_singular(
        p, BetaValue.pair(F(-3360, 189), F(0))) is None)


def ex_6_11(ck: Check):
    p = _problem("1", F(1, 4), (2,), F(1, 4), (2,))
    ans = exists(p)
    ck.eq("exists", ans.status, "affine")
    ck.eq("dimension", ans.beta_dim, 0)
    w = oracle_singular(p, BetaValue.none())
    ck.true("witness exists", w is not None)
    ck.eq("witness", _witness_element(p, w[0]),
          _elem(p.left.c, {((-2, 1),): F(4, 3)}))


def ex_6_12(ck: Check):
    t = None
    expected = {
        (1, 1): "2",
        (2, 1): "4 (t^2 - 1)",
        (3, 1): "24 (t^2 - 1) (4t^2 - 1)",
        (4, 1): "288 (t^2 - 1) (4t^2 - 1) (9t^2 - 1)",
        (5, 1): "5760 (t^2 - 1) (4t^2 - 1) (9t^2 - 1) (16t^2 - 1)",
        (6, 1): "172800 (t^2 - 1) (4t^2 - 1) (9t^2 - 1) (16t^2 - 1) (25t^2 - 1)",
        (2, 2): "-8 t^-4 (t^2 - 1)^2 (t^2 - 4) (4t^2 - 1)",
        (3, 2): "-192 t^-6 (t^2 - 1)^3 (t^2 - 4) (4t^2 - 1)^2 (9t^2 - 1)",
    }
    from .scalars import T_GEN

    t = T_GEN
    want_exprs = {
        (1, 1): RatFunc((2,)),
        (2, 1): 4 * (t * t - 1),
        (3, 1): 24 * (t * t - 1) * (4 * t * t - 1),
        (4, 1): 288 * (t * t - 1) * (4 * t * t - 1) * (9 * t * t - 1),
        (5, 1): 5760 * (t * t - 1) * (4 * t * t - 1) * (9 * t * t - 1) * (16 * t * t - 1),
        (6, 1): 172800 * (t * t - 1) * (4 * t * t - 1) * (9 * t * t - 1)
                * (16 * t * t - 1) * (25 * t * t - 1),
        (2, 2): -8 * (t ** -4) * (t * t - 1) ** 2 * (t * t - 4) * (4 * t * t - 1),
        (3, 2): -192 * (t ** -6) * (t * t - 1) ** 3 * (t * t - 4)
                * (4 * t * t - 1) ** 2 * (9 * t * t - 1),
    }
    want_exist = {
        (1, 1): [],
        (2, 1): [F(-1), F(1)],
        (3, 1): [F(-1), F(1)],
        (4, 1): [F(-1), F(-1, 2), F(1, 2), F(1)],
        (5, 1): [F(-1), F(1)],
        (6, 1): [F(-1), F(-1, 2), F(-1, 3), F(1, 3), F(1, 2), F(1)],
        (2, 2): [F(-2), F(-1, 2), F(1, 2), F(2)],
        (3, 2): [F(-2), F(-1, 3), F(1, 3), F(2)],
    }
    from .cli import _existence_points

    for key, want in want_exprs.items():
        got = generic_beta_bar(*key)
        ck.eq(f"row {key}", got, want)
        ck.eq(f"row {key} exists at", sorted(_existence_points(*key)), sorted(want_exist[key]))
    _ = expected  # human-readable forms shown by the table command


EXAMPLES = {
    "ex-4.4": ex_4_4,
    "ex-5.15": ex_5_15,
    "ex-5.16": ex_5_16,
    "ex-6.3a": ex_6_3a,
    "ex-6.3b": ex_6_3b,
    "ex-6.6": ex_6_6,
    "ex-6.9": ex_6_9,
    "ex-6.9b": ex_6_9b,
    "ex-6.10a": ex_6_10a,
    "ex-6.10b": ex_6_10b,
    "ex-6.10c": ex_6_10c,
    "ex-6.10d": ex_6_10d,
    "ex-6.11": ex_6_11,
    "ex-6.12": ex_6_12,
}


def run_example(name: str, out, json_mode=False) -> int:
    if name == "list":
        for key in sorted(EXAMPLES):
            out(key)
        return 0
    if name == "all":
        total = 0
        for key in sorted(EXAMPLES):
            out(f"== {key}")
            total += run_example(key, out)
        return 1 if total else 0
    fn = EXAMPLES.get(name)
    if fn is None:
        out(f"unknown example {name!r}; try 'list'")
        return 2
    ck = Check(out)
    fn(ck)
    return 1 if ck.failures else 0
