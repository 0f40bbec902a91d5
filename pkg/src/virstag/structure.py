"""Singular-vector lattices of Verma modules and left/right compatibility.

A Verma module is of point, link, chain or braid type.  The lattice records
every singular grade up to a truncation bound, together with rank and (for
braid) the -/+ tower label.  Grades are found by solving h = h_{r,s} over
positive integers: with D = (t-1)^2 + 4 t h, the solutions are exactly
s = t r +/- sqrt(D), so a rational square root decides everything.  The
sequence of grades then follows by descending into the submodule generated
by the lowest singular vector and repeating.

Chain and braid lattices only arise for rational t; a non-constant symbolic
t admits at most a single (r, s), the link case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement
from .scalars import KacLabel, RatFunc, Scalar, ZeroParameterError, _fraction_sqrt, kac_weight
from .verma import HWModule, SingularVector, find_singular, find_singular_element


class IncompatibleError(ValueError):
    """left/right pair cannot belong to any rank-2 staggered extension."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class LatticeEntry:
    grade: int
    sign: int  # -1 / +1 inside a braid, 0 for chain or link
    rank: int

    def to_json(self):
        sign = {-1: "-", 1: "+", 0: "none"}[self.sign]
        return {"grade": self.grade, "sign": sign, "rank": self.rank}


@dataclass(frozen=True)
class ModuleStructure:
    kind: str  # point | link | chain | braid
    entries: tuple
    max_grade: int

    def grades(self):
        return [e.grade for e in self.entries]

    def entry_at(self, grade: int):
        for e in self.entries:
            if e.grade == grade:
                return e
        return None

    def rank_entries(self, rank: int):
        return [e for e in self.entries if e.rank == rank]

    def descent_path(self, grade: int):
        """Grades of one maximal factorisation chain ending at ``grade``.

        In a braid the path descends through the minus tower; the returned
        list is strictly increasing and ends at ``grade``.
        """
        target = self.entry_at(grade)
        if target is None:
            raise ValueError(f"grade {grade} is not in the lattice")
        path = []
        for k in range(1, target.rank):
            level = self.rank_entries(k)
            if not level:
                raise ValueError(f"lattice has no rank-{k} entry")
            path.append(min(e.grade for e in level))
        path.append(grade)
        return path

    def to_json(self):
        return {"type": self.kind, "grades": [e.to_json() for e in self.entries]}


def _kac_solutions(h: Fraction, t: Fraction, budget: int):
    """{product rs: [(r, s), ...]} for all positive-integer solutions h = h_{r,s}."""
    if budget < 1:
        return {}
    disc = (t - 1) ** 2 + 4 * t * h
    if disc < 0:
        return {}
    delta = _fraction_sqrt(disc)
    if delta is None:
        return {}
    out: dict = {}
    signs = (delta, -delta) if delta else (delta,)
    for r in range(1, budget + 1):
        for d in signs:
            s = t * r + d
            if s.denominator == 1 and s >= 1:
                s = int(s)
                if r * s <= budget:
                    out.setdefault(r * s, [])
                    if (r, s) not in out[r * s]:
                        out[r * s].append((r, s))
    return out


def classify(h: Scalar, t: Scalar, max_grade: int) -> ModuleStructure:
    """Type and singular-grade lattice of the weight-h Verma module, truncated."""
    if max_grade < 1:
        raise ValueError("max_grade must be positive")
    if isinstance(t, RatFunc) and not t.is_constant():
        return _classify_symbolic(h, t, max_grade)
    t = t.as_fraction() if isinstance(t, RatFunc) else Fraction(t)
    if t == 0:
        raise ZeroParameterError("t must be nonzero")
    if isinstance(h, RatFunc):
        h = h.as_fraction()

    first = _kac_solutions(h, t, max_grade)
    if not first:
        return ModuleStructure("point", (), max_grade)
    m1 = min(first)
    p, q = t.denominator, t.numerator
    braid = all(r % p != 0 and s % abs(q) != 0 for r, s in first[m1])

    entries = []
    offset = 0
    h_cur = h
    rank = 1
    if braid:
        while True:
            sols = _kac_solutions(h_cur, t, max_grade - offset)
            if not sols:
                break
            products = sorted(sols)
            entries.append(LatticeEntry(offset + products[0], -1, rank))
            if len(products) < 2 or offset + products[1] > max_grade:
                # unpaired minus entry: either the degenerate t < 0 ending or
                # the truncation bound; deeper grades exceed it either way
                break
            entries.append(LatticeEntry(offset + products[1], +1, rank))
            offset += products[0]
            h_cur += products[0]
            rank += 1
        return ModuleStructure("braid", tuple(entries), max_grade)

    while True:
        sols = _kac_solutions(h_cur, t, max_grade - offset)
        if not sols:
            break
        m = min(sols)
        entries.append(LatticeEntry(offset + m, 0, rank))
        offset += m
        h_cur += m
        rank += 1
    return ModuleStructure("chain", tuple(entries), max_grade)


def _classify_symbolic(h, t, max_grade: int) -> ModuleStructure:
    hits = []
    for r in range(1, max_grade + 1):
        for s in range(1, max_grade // r + 1):
            if kac_weight(KacLabel(r, s), t) == h:
                hits.append((r * s, r, s))
    if not hits:
        return ModuleStructure("point", (), max_grade)
    products = sorted({p for p, _, _ in hits})
    if len(products) > 1:
        raise ValueError("symbolic parameter behaves rationally; classify at a rational t")
    return ModuleStructure("link", (LatticeEntry(products[0], 0, 1),), max_grade)


@dataclass(frozen=True)
class CompatInfo:
    """The derived integers that drive the existence decision.

    ell is the grade of the connecting singular vector omega0; rho its rank;
    rho_bar the (shared) rank of the right quotient generators; b counts the
    nonzero rank-(rho-1) singular vectors of the left module, g the nonzero
    rank-(rho+rho_bar-1) ones, and n the number of right generators.
    rho_bar and g are None when the right module is Verma.
    """

    ell: int
    rho: int
    rho_bar: int | None
    b: int
    g: int | None
    n: int
    omega0: SingularVector
    left_lattice: ModuleStructure
    critical_entries: tuple  # nonzero rank-(rho+rho_bar-1) LatticeEntry of the left module

    def as_tuple(self):
        return (self.ell, self.rho, self.rho_bar, self.b, self.g, self.n)

    def to_json(self):
        return {"ell": self.ell, "rho": self.rho, "rho_bar": self.rho_bar,
                "b": self.b, "g": self.g, "n": self.n}


def _as_integer(x) -> int | None:
    if isinstance(x, RatFunc):
        if not x.is_constant():
            return None
        x = x.as_fraction()
    x = Fraction(x)
    return int(x) if x.denominator == 1 else None


def left_right_compatible(left: HWModule, right: HWModule) -> CompatInfo:
    """Necessary-condition check; raises IncompatibleError with the reason.

    Verifies ell in N, a nonzero omega0 in the left module, and that every
    right quotient generator kills omega0 there; returns the counting data
    of the final classification on success.
    """
    if left.t != right.t:
        raise IncompatibleError("left and right modules have different parameters t")
    ell = _as_integer(right.h - left.h)
    if ell is None or ell < 0:
        raise IncompatibleError(
            f"weight gap h_right - h_left = {right.h - left.h} is not a nonnegative integer")

    if ell == 0:
        omega0 = SingularVector(0, AlgebraElement.one(left.c), 0, ())
        rho = 0
    else:
        omega0 = find_singular(left.parent, ell)
        if omega0 is None:
            raise IncompatibleError(
                f"left Verma module has no singular vector at grade {ell}")
        rho = omega0.rank
        w0 = left.parent.element_to_vector(omega0.element, ell)
        if left.reduce(w0).is_zero():
            raise IncompatibleError("omega0 is zero in the left module")

    n = len(right.generators)
    rho_bar = None
    g = None
    critical = ()
    horizon = ell + max((sv.grade for sv in right.generators), default=0)
    left_lattice = classify(left.h, left.t, max_grade=max(horizon, ell, 1))

    if n:
        ranks = {sv.rank for sv in right.generators}
        if len(ranks) != 1:
            raise IncompatibleError("right quotient generators have unequal ranks")
        rho_bar = ranks.pop()
        w0 = (left.parent.element_to_vector(omega0.element, ell) if ell
              else left.parent.highest_weight_vector())
        for sv in right.generators:
            elem = AlgebraElement(left.c, sv.element.terms)
            img = left.parent.act(elem, w0)
            if not left.reduce(img).is_zero():
                raise IncompatibleError(
                    f"right generator at grade {sv.grade} does not annihilate omega0 "
                    "in the left module")
        if rho + rho_bar - 1 == 0:
            # the critical vector is the highest-weight vector itself
            critical = (LatticeEntry(0, 0, 0),)
        else:
            crit = []
            for e in left_lattice.rank_entries(rho + rho_bar - 1):
                el = find_singular_element(left.parent, e.grade)
                vec = left.parent.element_to_vector(el, e.grade)
                if not left.reduce(vec).is_zero():
                    crit.append(e)
            critical = tuple(sorted(crit, key=lambda e: e.grade))
        g = len(critical)

    if rho == 0:
        b = 0
    elif rho == 1:
        b = 1
    else:
        b = 0
        for e in left_lattice.rank_entries(rho - 1):
            el = find_singular_element(left.parent, e.grade)
            vec = left.parent.element_to_vector(el, e.grade)
            if not left.reduce(vec).is_zero():
                b += 1

    return CompatInfo(ell=ell, rho=rho, rho_bar=rho_bar, b=b, g=g, n=n,
                      omega0=omega0, left_lattice=left_lattice,
                      critical_entries=critical)
