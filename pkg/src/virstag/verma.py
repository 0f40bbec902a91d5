"""Verma modules, their highest-weight quotients, and the Shapovalov form.

A Verma module is pinned by the highest weight h and the parameter t (the
central charge is c(t)).  Grade-n coordinates are taken against the
partition-indexed basis from :func:`virstag.algebra.partitions`, whose first
entry is the all-ones partition; the L_{-1}^n coefficient of any grade-n
vector is therefore coordinate 0, which makes the standard normalisation of
singular vectors a single-coordinate check.

The mode action is evaluated by the usual commutator recursion and memoised
per (mode, basis partition).  Highest-weight quotients store reduced row
echelon spans of the quotiented submodule per grade; quotient coordinates
live on the non-pivot partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import (
    AlgebraElement,
    ContextMismatchError,
    mono_grade,
    mono_word,
    neg_mono_from_partition,
    negative_basis,
    part_count,
    partitions,
)
from .scalars import Scalar, central_charge, exact_div, scalar_to_json


class NormDegenerateError(ArithmeticError):
    """A complement vector of zero Shapovalov norm could not be avoided."""


@dataclass(frozen=True)
class GradedVector:
    """Coordinates of a homogeneous vector against the fixed graded basis."""

    module: "VermaModule | HWModule"
    grade: int
    coords: tuple

    def __post_init__(self):
        want = self.module.dim(self.grade)
        if len(self.coords) != want:
            raise ValueError(f"expected {want} coordinates at grade {self.grade}, "
                             f"got {len(self.coords)}")

    def __add__(self, other: "GradedVector") -> "GradedVector":
        self._align(other)
        return GradedVector(self.module, self.grade,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        self._align(other)
        return GradedVector(self.module, self.grade,
                            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, factor) -> "GradedVector":
        return GradedVector(self.module, self.grade, tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _align(self, other):
        if self.module is not other.module or self.grade != other.grade:
            raise ValueError("vectors live in different graded components")

    def to_json(self):
        return {"grade": self.grade, "coords": [scalar_to_json(x) for x in self.coords]}


@dataclass(frozen=True)
class SingularVector:
    """A normalised singular vector: grade, lowering element, rank, prime chain.

    ``factors`` multiply out to ``element`` left to right; each suffix product
    applied to the highest-weight vector is again singular.
    """

    grade: int
    element: AlgebraElement
    rank: int
    factors: tuple

    def to_json(self):
        return {
            "grade": self.grade,
            "element": self.element.to_json(),
            "rank": self.rank,
            "factors": [f.to_json() for f in self.factors],
        }


class VermaModule:
    """The free highest-weight module of weight h at parameter t."""

    _registry: dict = {}

    def __init__(self, h: Scalar, t: Scalar):
        self.h = h
        self.t = t
        self.c = central_charge(t)
        self._act_memo: dict = {}
        self._gram_cache: dict = {}

    @classmethod
    def get(cls, h, t) -> "VermaModule":
        key = (h, t)
        mod = cls._registry.get(key)
        if mod is None:
            mod = cls._registry[key] = cls(h, t)
        return mod

    def __repr__(self):
        return f"Verma(h={self.h}, t={self.t})"

    # -- graded structure ---------------------------------------------------
    def dim(self, n: int) -> int:
        return part_count(n)

    def basis(self, n: int):
        return partitions(n)

    def zero(self, n: int = 0) -> GradedVector:
        return GradedVector(self, n, (0,) * self.dim(n))

    def highest_weight_vector(self) -> GradedVector:
        return GradedVector(self, 0, (1,))

    def vector(self, n: int, coords) -> GradedVector:
        return GradedVector(self, n, tuple(coords))

    def vector_from_dict(self, n: int, d: dict) -> GradedVector:
        idx = {p: i for i, p in enumerate(partitions(n))}
        coords = [0] * self.dim(n)
        for p, v in d.items():
            coords[idx[p]] = v
        return GradedVector(self, n, tuple(coords))

    def element_to_vector(self, elem: AlgebraElement, n: int) -> GradedVector:
        """Apply a pure-lowering element of grade n to the highest-weight vector."""
        d = {}
        for mono, v in elem.terms.items():
            if mono_grade(mono) != n or any(m >= 0 for m, _ in mono):
                raise ValueError(f"not a grade-{n} lowering monomial: {mono}")
            d[tuple(-m for m, e in mono for _ in range(e))] = v
        return self.vector_from_dict(n, d)

    def vector_to_element(self, w: GradedVector) -> AlgebraElement:
        out = AlgebraElement(self.c)
        for p, v in zip(partitions(w.grade), w.coords):
            if v:
                out._add_terms({neg_mono_from_partition(p): v})
        return out

    # -- action ---------------------------------------------------------------
    def act_mode_partition(self, m: int, part: tuple) -> dict:
        """L_m applied to the basis vector of a partition; {partition: coeff}."""
        key = (m, part)
        cached = self._act_memo.get(key)
        if cached is not None:
            return cached

        if not part:
            if m > 0:
                out = {}
            elif m == 0:
                out = {(): self.h}
            else:
                out = {(-m,): Fraction(1)}
        elif m == 0:
            out = {part: self.h + sum(part)}
        elif m < 0 and -m >= part[0]:
            out = {(-m,) + part: Fraction(1)}
        else:
            mu = part[0]
            rest = part[1:]
            out = {}

            def add(terms, factor):
                for p2, v in terms.items():
                    val = out.get(p2)
                    val = v * factor if val is None else val + v * factor
                    if val:
                        out[p2] = val
                    elif p2 in out:
                        del out[p2]

            # L_m L_{-mu} = L_{-mu} L_m + (m + mu) L_{m-mu} + delta (m^3 - m)/12 c
            for p2, v in self.act_mode_partition(m, rest).items():
                add(self.act_mode_partition(-mu, p2), v)
            add(self.act_mode_partition(m - mu, rest), m + mu)
            if m == mu:
                central = Fraction(m**3 - m, 12) * self.c
                if central:
                    add({rest: Fraction(1)}, central)

        self._act_memo[key] = out
        return out

    def _apply_mode_dict(self, m: int, vec: dict) -> dict:
        out: dict = {}
        for part, v in vec.items():
            for p2, v2 in self.act_mode_partition(m, part).items():
                val = out.get(p2)
                val = v * v2 if val is None else val + v * v2
                if val:
                    out[p2] = val
                elif p2 in out:
                    del out[p2]
        return out

    def _apply_word_dict(self, word, vec: dict) -> dict:
        for m in reversed(word):
            if not vec:
                return {}
            vec = self._apply_mode_dict(m, vec)
        return vec

    def act(self, u, w: GradedVector) -> GradedVector:
        """Module action of a homogeneous element; below grade 0 gives zero."""
        if isinstance(u, AlgebraElement) and u.c != self.c:
            raise ContextMismatchError("central charge of element does not match module")
        if w.module is not self:
            raise ValueError("vector does not belong to this module")
        terms = u.terms if isinstance(u, AlgebraElement) else {u: Fraction(1)}
        grades = {mono_grade(m) for m in terms}
        if len(grades) > 1:
            raise ValueError("act requires a homogeneous element")
        if not grades:
            return self.zero(0)
        target = w.grade + grades.pop()
        if target < 0:
            return self.zero(0)
        vec_in = {p: v for p, v in zip(partitions(w.grade), w.coords) if v}
        acc: dict = {}
        for mono, coeff in terms.items():
            res = self._apply_word_dict(mono_word(mono), vec_in)
            for p, v in res.items():
                val = acc.get(p)
                val = coeff * v if val is None else val + coeff * v
                if val:
                    acc[p] = val
                elif p in acc:
                    del acc[p]
        return self.vector_from_dict(target, acc)

    # -- Shapovalov form --------------------------------------------------------
    def gram_entries(self, n: int, rows_idx, cols_idx):
        """Matrix of basis pairings <B_i v, B_j v> for the requested indices.

        Columns are evaluated by peeling the adjoint modes of all requested
        rows along a shared prefix trie, so repeated subwords cost once.
        """
        cache = self._gram_cache.setdefault(n, {})
        parts = partitions(n)
        for j in cols_idx:
            missing = [i for i in rows_idx if (i, j) not in cache]
            if not missing:
                continue
            col = self._gram_column(n, parts, missing, j)
            for i, v in col.items():
                cache[(i, j)] = v
                cache[(j, i)] = v
        return [[cache[(i, j)] for j in cols_idx] for i in rows_idx]

    def _gram_column(self, n, parts, rows_idx, j) -> dict:
        out: dict = {}

        def rec(vec: dict, items):
            finished = [i for i, rem in items if not rem]
            for i in finished:
                out[i] = vec.get((), Fraction(0))
            groups: dict = {}
            for i, rem in items:
                if rem:
                    groups.setdefault(rem[0], []).append((i, rem[1:]))
            for a, sub in groups.items():
                vec2 = self._apply_mode_dict(a, vec) if vec else {}
                if vec2:
                    rec(vec2, sub)
                else:
                    stack = list(sub)
                    while stack:
                        i, _ = stack.pop()
                        out[i] = Fraction(0)

        # adjoint of L_{-l1}...L_{-lk} applies L_{l1} first
        rec({parts[j]: Fraction(1)}, [(i, parts[i]) for i in rows_idx])
        return out

    def gram_matrix(self, n: int):
        idx = list(range(self.dim(n)))
        return self.gram_entries(n, idx, idx)

    def pair(self, u: GradedVector, w: GradedVector) -> Scalar:
        """Shapovalov pairing of two grade-n vectors."""
        if u.grade != w.grade:
            return Fraction(0)
        n = u.grade
        rows = [i for i, v in enumerate(u.coords) if v]
        cols = [j for j, v in enumerate(w.coords) if v]
        if not rows or not cols:
            return Fraction(0)
        g = self.gram_entries(n, rows, cols)
        total = 0
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                total = total + u.coords[i] * g[a][b] * w.coords[j]
        return total


def find_singular_element(module: VermaModule, n: int):
    """The normalised grade-n singular lowering element, or None.

    Solves the exact linear system L_1 (X v) = L_2 (X v) = 0 over the grade-n
    coordinates of X; at most one solution exists up to scale, and its
    L_{-1}^n coefficient never vanishes, which fixes the normalisation.
    """
    if n < 1:
        raise ValueError("singular vectors live at positive grades")
    cols = partitions(n)
    rows_out = []
    for target_grade, mode in ((n - 1, 1), (n - 2, 2)):
        if target_grade < 0:
            continue
        idx = {p: i for i, p in enumerate(partitions(target_grade))}
        block = [[0] * len(cols) for _ in range(len(idx))]
        for j, p in enumerate(cols):
            for p2, v in module.act_mode_partition(mode, p).items():
                block[idx[p2]][j] = v
        rows_out.extend(block)
    null = linalg.nullspace(rows_out, len(cols))
    if not null:
        return None
    if len(null) > 1:
        raise AssertionError(f"multiple singular vectors at grade {n} of {module!r}")
    vec = null[0]
    lead = vec[0]
    if not lead:
        raise AssertionError("normalisation coefficient vanished; contradicts theory")
    coords = [exact_div(v, lead) for v in vec]
    elem = AlgebraElement(module.c)
    for p, v in zip(cols, coords):
        if v:
            elem._add_terms({neg_mono_from_partition(p): v})
    return elem


def find_singular(module: VermaModule, n: int):
    """Full singular-vector data at grade n: element, rank and prime chain.

    Rank and factorisation are read off the singular-grade lattice; for
    grades <= 7 the chain is verified by multiplying the factors back
    together.
    """
    elem = find_singular_element(module, n)
    if elem is None:
        return None
    from .structure import classify  # local import; structure builds on verma

    lattice = classify(module.h, module.t, max_grade=n)
    entry = lattice.entry_at(n)
    if entry is None:
        raise AssertionError(f"grade {n} singular vector not reflected in lattice")
    rank = entry.rank
    factors = []
    prev_grade = 0
    for g in lattice.descent_path(n):
        sub = VermaModule.get(module.h + prev_grade, module.t)
        step = find_singular_element(sub, g - prev_grade)
        if step is None:
            raise AssertionError("lattice promised a singular vector that does not exist")
        factors.append(AlgebraElement(module.c, step.terms))
        prev_grade = g
    factors.reverse()
    if n <= 7:
        prod = AlgebraElement.one(module.c)
        for f in factors:
            prod = prod * f
        if prod != elem:
            raise AssertionError("prime factor chain failed verification")
    return SingularVector(grade=n, element=elem, rank=rank, factors=tuple(factors))


class HWModule:
    """A quotient of a Verma module by 0, 1 or 2 singular vectors.

    An empty generator list is the Verma module itself presented through the
    same interface.
    """

    _registry: dict = {}

    def __init__(self, parent: VermaModule, generator_grades=()):
        self.parent = parent
        grades = tuple(sorted(generator_grades))
        if len(grades) > 2:
            raise ValueError("at most two quotient generators are supported")
        gens = []
        for g in grades:
            sv = find_singular(parent, g)
            if sv is None:
                raise ValueError(f"no singular vector at grade {g} of {parent!r}")
            gens.append(sv)
        self.generators = tuple(gens)
        self.generator_grades = grades
        if len(gens) == 2:
            a, b = gens
            if self._in_submodule_of(a, b) or self._in_submodule_of(b, a):
                raise ValueError("quotient generators must be independent singular vectors")
        self._span_cache: dict = {}

    @classmethod
    def get(cls, parent: VermaModule, generator_grades=()) -> "HWModule":
        key = (parent.h, parent.t, tuple(sorted(generator_grades)))
        mod = cls._registry.get(key)
        if mod is None:
            mod = cls._registry[key] = cls(parent, generator_grades)
        return mod

    def _in_submodule_of(self, a: SingularVector, b: SingularVector) -> bool:
        if a.grade < b.grade:
            return False
        span, pivots = submodule_span(self.parent, (b,), a.grade)
        vec = self.parent.element_to_vector(a.element, a.grade)
        return linalg.in_span(span, pivots, list(vec.coords)) is None

    @property
    def h(self):
        return self.parent.h

    @property
    def t(self):
        return self.parent.t

    @property
    def c(self):
        return self.parent.c

    def is_verma(self) -> bool:
        return not self.generators

    def __repr__(self):
        if self.is_verma():
            return f"HW(Verma h={self.h}, t={self.t})"
        return f"HW(h={self.h}, t={self.t}, mod grades {self.generator_grades})"

    # -- quotient bookkeeping ---------------------------------------------------
    def _span(self, n: int):
        got = self._span_cache.get(n)
        if got is None:
            got = self._span_cache[n] = submodule_span(self.parent, self.generators, n)
        return got

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        return part_count(n) - len(self._span(n)[0])

    def free_columns(self, n: int):
        span, pivots = self._span(n)
        piv = set(pivots)
        return [i for i in range(part_count(n)) if i not in piv]

    def reduce(self, w: GradedVector) -> GradedVector:
        """Quotient coordinates of a parent-Verma vector."""
        if w.module is not self.parent:
            raise ValueError("reduce expects a vector of the parent Verma module")
        span, pivots = self._span(w.grade)
        res = list(w.coords)
        for row, pc in zip(span, pivots):
            if res[pc]:
                f = res[pc]
                for k in range(len(res)):
                    if row[k]:
                        res[k] = res[k] - f * row[k]
        free = self.free_columns(w.grade)
        return GradedVector(self, w.grade, tuple(res[i] for i in free))

    def lift(self, w: GradedVector) -> GradedVector:
        """Canonical parent representative (zeros on pivot coordinates)."""
        if w.module is not self:
            raise ValueError("lift expects a quotient vector")
        coords = [0] * part_count(w.grade)
        for i, v in zip(self.free_columns(w.grade), w.coords):
            coords[i] = v
        return GradedVector(self.parent, w.grade, tuple(coords))

    # -- module interface ---------------------------------------------------------
    def zero(self, n: int = 0) -> GradedVector:
        return GradedVector(self, n, (0,) * self.dim(n))

    def highest_weight_vector(self) -> GradedVector:
        return GradedVector(self, 0, (1,))

    def vector(self, n: int, coords) -> GradedVector:
        return GradedVector(self, n, tuple(coords))

    def act(self, u, w: GradedVector) -> GradedVector:
        if w.module is not self:
            raise ValueError("vector does not belong to this module")
        res = self.parent.act(u, self.lift(w))
        return self.reduce(res)

    def gram_matrix(self, n: int):
        """The descended Shapovalov form on the quotient basis."""
        free = self.free_columns(n)
        return self.parent.gram_entries(n, free, free)


def submodule_span(parent: VermaModule, generators, n: int):
    """rref span of the grade-n piece of the submodule the generators create."""
    rows = []
    for gen in generators:
        if n < gen.grade:
            continue
        base = parent.element_to_vector(gen.element, gen.grade)
        vec_in = {p: v for p, v in zip(partitions(gen.grade), base.coords) if v}
        for mono in negative_basis(n - gen.grade):
            res = parent._apply_word_dict(mono_word(mono), vec_in)
            idx = {p: i for i, p in enumerate(partitions(n))}
            row = [0] * part_count(n)
            for p, v in res.items():
                row[idx[p]] = v
            rows.append(row)
    return linalg.rref(rows, part_count(n))


def is_zero_in_quotient(module: HWModule, w: GradedVector) -> bool:
    """True iff a parent-Verma vector lies in the quotiented submodule."""
    return module.reduce(w).is_zero()


def kac_determinant_roots(n: int, t: Scalar):
    """All (r, s) with rs <= n, each with multiplicity p(n - rs)."""
    from .scalars import KacLabel

    if n < 1:
        raise ValueError("grade must be positive")
    out = []
    for r in range(1, n + 1):
        for s in range(1, n // r + 1):
            out.append((KacLabel(r, s), part_count(n - r * s)))
    out.sort(key=lambda it: (it[0].r * it[0].s, it[0].r))
    return out


def kac_determinant_ratio(module: VermaModule, n: int) -> Scalar:
    """det(Gram at grade n) divided by the product over (h - h_{r,s})^p(n-rs).

    The classical determinant formula says this ratio is a nonzero constant
    independent of h; callers verify constancy across several h.
    """
    from .scalars import kac_weight

    d = linalg.det(module.gram_matrix(n))
    denom = 1
    for label, mult in kac_determinant_roots(n, module.t):
        denom = denom * (module.h - kac_weight(label, module.t)) ** mult
    return exact_div(d, denom)


def orthogonal_complement(module: VermaModule, n: int, span_rows, span_pivots):
    """An orthogonal basis (with norms) of a complement of a submodule's grade slice.

    Returns a list of (GradedVector, norm) with pairwise-orthogonal vectors
    spanning a complement of the span inside grade n; every norm is nonzero.
    The vectors are supported on the non-pivot partitions, and rescaled to
    primitive integer coordinates, which leaves projection operators
    Z N^{-1} Z^\\dagger unchanged.
    """
    total = part_count(n)
    piv = set(span_pivots)
    free = [i for i in range(total) if i not in piv]
    if not free:
        return []
    k = len(free)
    s = [row[:] for row in module.gram_entries(n, free, free)]
    basis = [[1 if j == i else 0 for j in range(k)] for i in range(k)]

    # symmetric elimination with congruence bookkeeping: after step i the
    # basis rows 0..i are pairwise orthogonal with norms on the diagonal of s
    for i in range(k):
        if not s[i][i]:
            j = next((j for j in range(i + 1, k) if s[j][j]), None)
            if j is not None:
                s[i], s[j] = s[j], s[i]
                for row in s:
                    row[i], row[j] = row[j], row[i]
                basis[i], basis[j] = basis[j], basis[i]
            else:
                j = next((j for j in range(i + 1, k) if s[i][j]), None)
                if j is None:
                    raise NormDegenerateError(
                        "complement carries a degenerate form; submodule span was not maximal")
                # all later norms vanish but a cross term survives: e_i += e_j
                basis[i] = [a + b for a, b in zip(basis[i], basis[j])]
                for col in range(k):
                    s[i][col] = s[i][col] + s[j][col]
                for row in s:
                    row[i] = row[i] + row[j]
        d = s[i][i]
        col = [s[r][i] for r in range(k)]
        for r in range(i + 1, k):
            if col[r]:
                f = exact_div(col[r], d)
                basis[r] = [a - f * b for a, b in zip(basis[r], basis[i])]
        # Schur complement: S[r][c] -= S[r][i] S[c][i] / d on the trailing block
        for r in range(i + 1, k):
            cr = col[r]
            if not cr:
                continue
            sr = s[r]
            for c_ in range(r, k):
                if col[c_]:
                    sr[c_] = sr[c_] - exact_div(cr * col[c_], d)
        for r in range(i + 1, k):
            sr = s[r]
            for c_ in range(i + 1, r):
                sr[c_] = s[c_][r]
            sr[i] = 0
            s[i][r] = 0

    def primitive(vec, norm):
        den = 1
        for v in vec:
            f = Fraction(v)
            den = den * f.denominator // math.gcd(den, f.denominator)
        ints = [int(Fraction(v) * den) for v in vec]
        gg = 0
        for v in ints:
            gg = math.gcd(gg, v)
        gg = gg or 1
        ints = [v // gg for v in ints]
        scale = Fraction(den, gg)
        return ints, norm * scale * scale

    out = []
    for i in range(k):
        vec, norm = primitive(basis[i], s[i][i])
        if not norm:
            raise NormDegenerateError("orthogonalisation produced a null vector")
        coords = [0] * total
        for val, idx in zip(vec, free):
            coords[idx] = val
        out.append((GradedVector(module, n, tuple(coords)), norm))
    return out
