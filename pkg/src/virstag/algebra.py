"""The mode algebra with its central element already identified with a scalar.

Elements are finite linear combinations of normal-ordered monomials
``L_{m1}^{e1} ... L_{mk}^{ek}`` with strictly increasing mode indices, so
negative modes sit leftmost, then powers of L_0, then positive modes.  A
monomial is a tuple of (mode, exponent) pairs; the empty tuple is the unit.

Normal ordering repeatedly applies

    [L_m, L_n] = (m - n) L_{m+n} + delta_{m+n,0} (m^3 - m)/12 c

to adjacent out-of-order pairs; each swap strictly reduces either the word
length or its inversion count, so the rewrite terminates.  Results are
memoised per (word, central charge).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .scalars import Scalar

Mono = tuple  # tuple[tuple[int, int], ...]: (mode, exponent) pairs, modes strictly increasing

UNIT: Mono = ()


class ContextMismatchError(ValueError):
    """Two elements with different central charges were combined."""


class NotDecomposableError(ValueError):
    """An element required to end in positive modes has L_0 or negative tails."""


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """All partitions of n as non-increasing tuples, ascending-lex ordered.

    The all-ones partition comes first, so the L_{-1}^n coefficient of a
    grade-n element is always coordinate 0.
    """
    if n < 0:
        return ()
    if n == 0:
        return ((),)

    def gen(remaining, max_part):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return tuple(sorted(gen(n, n)))


def part_count(n: int) -> int:
    """Number of partitions of n (0 for negative n)."""
    return len(partitions(n)) if n >= 0 else 0


def mono_from_modes(modes) -> Mono:
    """Compress a weakly increasing mode sequence into (mode, exp) pairs."""
    pairs = []
    for m in modes:
        if pairs and pairs[-1][0] == m:
            pairs[-1][1] += 1
        else:
            pairs.append([m, 1])
    return tuple((m, e) for m, e in pairs)


def mono_word(mono: Mono) -> tuple:
    """Expand a monomial into its flat mode sequence."""
    out = []
    for m, e in mono:
        out.extend([m] * e)
    return tuple(out)


def mono_grade(mono: Mono) -> int:
    """grade = -sum(mode * exp); L_n lowers module grades by n."""
    return -sum(m * e for m, e in mono)


def mono_adjoint(mono: Mono) -> Mono:
    """Reverse the word and negate every mode; always normal-ordered again."""
    return tuple((-m, e) for m, e in reversed(mono))


def mono_str(mono: Mono) -> str:
    if not mono:
        return "1"
    parts = []
    for m, e in mono:
        parts.append(f"L_{{{m}}}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def neg_mono_from_partition(p) -> Mono:
    """Partition (l1 >= l2 >= ...) -> L_{-l1} L_{-l2} ... as a monomial."""
    return mono_from_modes(-x for x in p)


def pos_mono_from_partition(p) -> Mono:
    """Partition (l1 >= l2 >= ...) -> L_{lk} ... L_{l1} (increasing modes)."""
    return mono_from_modes(sorted(x for x in p))


def negative_basis(n: int) -> list:
    """The p(n) normal-ordered monomials spanning grade n of the lowering side."""
    return [neg_mono_from_partition(p) for p in partitions(n)]


def positive_basis(n: int) -> list:
    """The p(n) normal-ordered monomials spanning grade -n of the raising side."""
    return [pos_mono_from_partition(p) for p in partitions(n)]


# -- normal ordering --------------------------------------------------------

_NORMAL_MEMO: dict = {}


def _normal_order_word(word: tuple, c: Scalar) -> dict:
    """Normal-order a flat mode word; returns {Mono: coefficient}."""
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            break
    else:
        return {mono_from_modes(word): Fraction(1)}

    key = (word, c)
    cached = _NORMAL_MEMO.get(key)
    if cached is not None:
        return cached

    m, n = word[i], word[i + 1]
    out: dict = {}

    def add(terms, factor):
        for mono, coeff in terms.items():
            v = out.get(mono)
            v = coeff * factor if v is None else v + coeff * factor
            if v:
                out[mono] = v
            elif mono in out:
                del out[mono]

    add(_normal_order_word(word[:i] + (n, m) + word[i + 2:], c), 1)
    add(_normal_order_word(word[:i] + (m + n,) + word[i + 2:], c), m - n)
    if m + n == 0:
        central = Fraction(m**3 - m, 12) * c
        if central:
            add(_normal_order_word(word[:i] + word[i + 2:], c), central)

    _NORMAL_MEMO[key] = out
    return out


class AlgebraElement:
    """A finite Scalar-linear combination of normal-ordered monomials.

    The central-charge context c travels with the element; combining elements
    from different contexts raises ContextMismatchError.
    """

    __slots__ = ("c", "terms")

    def __init__(self, c: Scalar, terms=None):
        self.c = c
        self.terms = dict(terms) if terms else {}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, c):
        return cls(c)

    @classmethod
    def one(cls, c):
        return cls(c, {UNIT: Fraction(1)})

    @classmethod
    def mode(cls, c, n, power=1):
        return cls(c, {((n, power),): Fraction(1)})

    @classmethod
    def from_word(cls, c, word, coeff=1):
        out = cls(c)
        out._add_terms(_normal_order_word(tuple(word), c), coeff)
        return out

    # -- internals -----------------------------------------------------------
    def _add_terms(self, terms, factor=1):
        mine = self.terms
        for mono, coeff in terms.items():
            v = mine.get(mono)
            v = coeff * factor if v is None else v + coeff * factor
            if v:
                mine[mono] = v
            elif mono in mine:
                del mine[mono]

    def _check(self, other: "AlgebraElement"):
        if self.c != other.c:
            raise ContextMismatchError(f"central charges differ: {self.c} vs {other.c}")

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = AlgebraElement(self.c, self.terms)
        out._add_terms(other.terms)
        return out

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = AlgebraElement(self.c, self.terms)
        out._add_terms(other.terms, -1)
        return out

    def __neg__(self):
        return AlgebraElement(self.c, {m: -v for m, v in self.terms.items()})

    def scale(self, factor) -> "AlgebraElement":
        if not factor:
            return AlgebraElement(self.c)
        return AlgebraElement(self.c, {m: v * factor for m, v in self.terms.items()})

    def __mul__(self, other):
        """Normal-ordered product; scalars multiply pointwise."""
        if isinstance(other, AlgebraElement):
            self._check(other)
            out = AlgebraElement(self.c)
            for ma, va in self.terms.items():
                wa = mono_word(ma)
                for mb, vb in other.terms.items():
                    out._add_terms(_normal_order_word(wa + mono_word(mb), self.c), va * vb)
            return out
        return self.scale(other)

    def __rmul__(self, factor):
        return self.scale(factor)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.c == other.c and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (mono_grade(m), m)):
            bits.append(f"({self.terms[mono]})*{mono_str(mono)}")
        return " + ".join(bits)

    # -- structure -------------------------------------------------------------
    def adjoint(self) -> "AlgebraElement":
        """The linear anti-multiplicative involution L_n -> L_{-n}."""
        return AlgebraElement(self.c, {mono_adjoint(m): v for m, v in self.terms.items()})

    def grade(self):
        """Common grade of all monomials, or None when inhomogeneous or zero."""
        grades = {mono_grade(m) for m in self.terms}
        return grades.pop() if len(grades) == 1 else None

    def coeff(self, mono: Mono):
        return self.terms.get(mono, Fraction(0))

    def graded_component(self, g: int) -> "AlgebraElement":
        return AlgebraElement(self.c, {m: v for m, v in self.terms.items() if mono_grade(m) == g})

    def to_json(self):
        items = sorted(self.terms.items(), key=lambda kv: (mono_grade(kv[0]), kv[0]))
        from .scalars import scalar_to_json

        return [{"monomial": [[m, e] for m, e in mono], "coeff": scalar_to_json(v)}
                for mono, v in items]

    @classmethod
    def from_json(cls, c, data):
        from .scalars import scalar_from_json

        out = cls(c)
        for item in data:
            mono = tuple((int(m), int(e)) for m, e in item["monomial"])
            out._add_terms({mono: scalar_from_json(item["coeff"])})
        return out


def normal_order(word, c: Scalar) -> AlgebraElement:
    """Normal-form expansion of a product of modes given by index sequence."""
    return AlgebraElement.from_word(c, word)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint()


# -- rewriting trailing modes in terms of L_1 and L_2 ------------------------
#
# Positive modes satisfy L_{n+1} = [L_n, L_1] / (n - 1) for n >= 2; applying
# this to the rightmost mode of a word recursively expresses any element of
# the raising side as U_1 L_1 + U_2 L_2.  The recursion is deterministic, so
# decompositions (and everything serialised from them) are reproducible.

_POS_SPLIT_MEMO: dict = {}


def _split_positive_word(word: tuple) -> tuple:
    """word (a product of positive modes, not necessarily ordered) = U1*L1 + U2*L2.

    Returns ({mono: coeff}, {mono: coeff}) in normal form.  The recursion only
    ever rewrites the trailing mode, which strictly decreases, so it
    terminates; positive-mode rewriting never meets central terms, so the
    result is context-free.
    """
    cached = _POS_SPLIT_MEMO.get(word)
    if cached is not None:
        return cached

    def add(dst, terms, factor):
        for mono, coeff in terms.items():
            v = dst.get(mono)
            v = coeff * factor if v is None else v + coeff * factor
            if v:
                dst[mono] = v
            elif mono in dst:
                del dst[mono]

    last = word[-1]
    if last == 1:
        res = (dict(_normal_order_word(word[:-1], 0)), {})
    elif last == 2:
        res = ({}, dict(_normal_order_word(word[:-1], 0)))
    else:
        # L_last = (L_{last-1} L_1 - L_1 L_{last-1}) / (last - 2)
        f = Fraction(1, last - 2)
        u1_all: dict = {}
        u2_all: dict = {}
        add(u1_all, _normal_order_word(word[:-1] + (last - 1,), 0), f)
        s1, s2 = _split_positive_word(word[:-1] + (1, last - 1))
        add(u1_all, s1, -f)
        add(u2_all, s2, -f)
        res = (u1_all, u2_all)

    _POS_SPLIT_MEMO[word] = res
    return res


def _mono_split_parts(mono: Mono):
    """Split a monomial into (negative pairs, L_0 exponent, positive pairs)."""
    neg = tuple(p for p in mono if p[0] < 0)
    zero = sum(e for m, e in mono if m == 0)
    pos = tuple(p for p in mono if p[0] > 0)
    return neg, zero, pos


def decompose_against_l1_l2(u: AlgebraElement):
    """Write u = U1*L1 + U2*L2 for u whose every monomial ends in a positive mode.

    The pair is not unique; this fixed recursion makes the output canonical.
    """
    c = u.c
    u1 = AlgebraElement(c)
    u2 = AlgebraElement(c)
    for mono, coeff in u.terms.items():
        neg, zero, pos = _mono_split_parts(mono)
        if not pos:
            raise NotDecomposableError(f"term {mono_str(mono)} does not end in a positive mode")
        prefix = neg + (((0, zero),) if zero else ())
        s1, s2 = _split_positive_word(mono_word(pos))
        for target, split in ((u1, s1), (u2, s2)):
            for pm, pv in split.items():
                target._add_terms({prefix + pm: pv}, coeff)
    return u1, u2


def decompose_mod_annihilator(u: AlgebraElement, h: Scalar):
    """Write u = U0*(L_0 - h) + U1*L_1 + U2*L_2, valid when u kills a weight-h
    highest-weight vector.

    Terms ending in positive modes go through the L_1/L_2 rewrite; powers of
    L_0 telescope against (L_0 - h).  Whatever is left is a pure lowering
    element that must cancel identically, otherwise u did not annihilate the
    vector and a ValueError is raised.
    """
    c = u.c
    u0 = AlgebraElement(c)
    u1 = AlgebraElement(c)
    u2 = AlgebraElement(c)
    residual = AlgebraElement(c)
    for mono, coeff in u.terms.items():
        neg, zero, pos = _mono_split_parts(mono)
        if pos:
            prefix = neg + (((0, zero),) if zero else ())
            s1, s2 = _split_positive_word(mono_word(pos))
            for target, split in ((u1, s1), (u2, s2)):
                for pm, pv in split.items():
                    target._add_terms({prefix + pm: pv}, coeff)
        elif zero:
            # L_0^e = (sum_j h^(e-1-j) L_0^j) (L_0 - h) + h^e
            hp = [1]
            for _ in range(zero):
                hp.append(hp[-1] * h)
            for j in range(zero):
                mono_j = neg + (((0, j),) if j else ())
                u0._add_terms({mono_j: hp[zero - 1 - j]}, coeff)
            residual._add_terms({neg: hp[zero]}, coeff)
        else:
            residual._add_terms({neg: 1}, coeff)
    if residual:
        raise ValueError("element does not annihilate the highest-weight vector")
    return u0, u1, u2
