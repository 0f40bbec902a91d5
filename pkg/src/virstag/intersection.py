"""The graded pieces of the intersection of the right ideals U+ L_1 and U+ L_2.

An element of grade -m is a pair (U1, U2) of raising elements with
U1 L_1 + U2 L_2 = 0; evaluated on module data these pairs produce the
consistency functionals that cut out admissible data.  The dimension at
grade -m is d(m) = p(m-1) + p(m-2) - p(m), which first becomes positive at
m = 5.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import (
    AlgebraElement,
    decompose_against_l1_l2,
    mono_word,
    part_count,
    partitions,
    pos_mono_from_partition,
    _normal_order_word,
)
from .scalars import Scalar, exact_div


def intersection_dim(m: int) -> int:
    """d(m) = p(m-1) + p(m-2) - p(m), and 0 at m = 0."""
    if m <= 0:
        return 0
    return part_count(m - 1) + part_count(m - 2) - part_count(m)


@dataclass(frozen=True)
class IntersectionElement:
    """A relation U1 L_1 = -U2 L_2 between raising elements.

    u1 has grade 1-m and u2 grade 2-m; the canonical combined element is
    u1 * L_1 (equal to -u2 * L_2 by construction).
    """

    m: int
    u1: AlgebraElement
    u2: AlgebraElement

    def combined(self) -> AlgebraElement:
        return self.u1 * AlgebraElement.mode(self.u1.c, 1)

    def to_json(self):
        return {"m": self.m, "u1": self.u1.to_json(), "u2": self.u2.to_json()}


def intersection_basis(m: int, c: Scalar) -> list:
    """A deterministic basis of the grade -m intersection, of size d(m).

    Computed as the nullspace of (A, B) -> A L_1 + B L_2 in normal-ordered
    coordinates; each basis element is scaled so its first nonzero coordinate
    is one.
    """
    if m < 5:
        return []
    a_parts = partitions(m - 1)
    b_parts = partitions(m - 2)
    target = {p: i for i, p in enumerate(partitions(m))}
    ncols = len(a_parts) + len(b_parts)
    rows = [[0] * ncols for _ in range(len(target))]
    for j, p in enumerate(a_parts):
        word = mono_word(pos_mono_from_partition(p)) + (1,)
        for mono, v in _normal_order_word(word, 0).items():
            rows[target[tuple(sorted((mm for mm, e in mono for _ in range(e)), reverse=True))]][j] = v
    for j, p in enumerate(b_parts):
        word = mono_word(pos_mono_from_partition(p)) + (2,)
        for mono, v in _normal_order_word(word, 0).items():
            key = tuple(sorted((mm for mm, e in mono for _ in range(e)), reverse=True))
            rows[target[key]][len(a_parts) + j] = v
    basis = linalg.nullspace(rows, ncols)
    if len(basis) != intersection_dim(m):
        raise AssertionError(f"intersection dimension mismatch at m={m}")
    out = []
    for vec in basis:
        lead = next(v for v in vec if v)
        vec = [exact_div(v, lead) for v in vec]
        u1 = AlgebraElement(c)
        u2 = AlgebraElement(c)
        for v, p in zip(vec[:len(a_parts)], a_parts):
            if v:
                u1._add_terms({pos_mono_from_partition(p): v})
        for v, p in zip(vec[len(a_parts):], b_parts):
            if v:
                u2._add_terms({pos_mono_from_partition(p): v})
        out.append(IntersectionElement(m=m, u1=u1, u2=u2))
    return out


def decompose_against_L1L2(u: AlgebraElement):
    """Some (U1, U2) with u = U1 L_1 + U2 L_2; u must end in positive modes.

    The pair is not unique, but any two choices differ by an intersection
    element, so evaluations on admissible data are unambiguous.
    """
    return decompose_against_l1_l2(u)
