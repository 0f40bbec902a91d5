"""Existence and classification of rank-2 staggered extensions.

Given a left and a right highest-weight module with the same parameter t, the
extension is pinned by the data pair (omega1, omega2) = (L_1 y, L_2 y) up to
gauge y -> y + u.  This module implements, entirely in exact arithmetic:

* admissibility of data when the right module is Verma (the intersection
  functionals),
* the constructive projection of data into the submodule generated by the
  rank-(rho-1) singular vectors, via orthogonal complement bases with
  tracked norms,
* the gauge-invariant beta coordinates on the moduli space, and the inverse
  map from target invariants to representative data,
* the critical-rank constraints: affine functions of the invariants whose
  simultaneous vanishing decides existence for non-Verma right modules,
* a closed-form criterion for the weight-gap-zero corner with a prime
  minimal quotient generator,
* the full decision procedure, and an independent brute-force oracle that
  searches for the predicted singular vectors inside an explicit realization
  of the extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import (
    AlgebraElement,
    decompose_against_l1_l2,
    decompose_mod_annihilator,
    mono_word,
    negative_basis,
    partitions,
    _mono_split_parts,
    _normal_order_word,
)
from .intersection import intersection_basis
from .scalars import RatFunc, Scalar, T_GEN, exact_div, kac_weight
from .structure import (
    CompatInfo,
    ModuleStructure,
    classify,
    _kac_solutions,
    left_right_compatible,
)
from .verma import (
    GradedVector,
    HWModule,
    VermaModule,
    find_singular_element,
    orthogonal_complement,
    submodule_span,
)


class InconsistentSystemError(ValueError):
    """A linear condition that admissible data must satisfy failed."""


class NonUniqueSolutionError(ValueError):
    """A solve that theory promises unique came back underdetermined."""


class UndefinedInvariantError(ValueError):
    """Beta invariants are not defined at weight gap zero."""


class UnsupportedConfigurationError(RuntimeError):
    """The one corner the theory leaves open: weight gap zero, composite
    quotient generator, and a nonzero obstruction constant."""


@dataclass(frozen=True)
class DataPair:
    """The pair (L_1 y, L_2 y) of left-module vectors at grades ell-1, ell-2."""

    omega1: GradedVector
    omega2: GradedVector

    def to_json(self):
        return {"omega1": self.omega1.to_json(), "omega2": self.omega2.to_json()}


@dataclass(frozen=True)
class GaugeTransform:
    """Redefinition y -> y + u; shifts data by (L_1 u, L_2 u)."""

    u: GradedVector

    def apply(self, d: DataPair) -> DataPair:
        mod = self.u.module
        w1, w2 = d.omega1, d.omega2
        if w1.grade >= 0:
            w1 = w1 + mod.act(((1, 1),), self.u)
        if w2.grade >= 0:
            w2 = w2 + mod.act(((2, 1),), self.u)
        return DataPair(w1, w2)


def gauge_apply(u: GradedVector, d: DataPair) -> DataPair:
    return GaugeTransform(u).apply(d)


@dataclass(frozen=True)
class BetaValue:
    """kind 'none' (gap zero), 'single' (one invariant) or 'pair' (two)."""

    kind: str
    values: tuple = ()

    @classmethod
    def none(cls):
        return cls("none", ())

    @classmethod
    def single(cls, v):
        return cls("single", (v,))

    @classmethod
    def pair(cls, minus, plus):
        return cls("pair", (minus, plus))

    def to_json(self):
        from .scalars import scalar_to_json

        return {"kind": self.kind, "values": [scalar_to_json(v) for v in self.values]}


@dataclass(frozen=True)
class AffineConstraint:
    """offset + coeffs . beta = 0, one per (right generator, critical vector)."""

    coeffs: tuple
    offset: Scalar
    generator_grade: int
    critical_grade: int

    def to_json(self):
        from .scalars import scalar_to_json

        return {"coeffs": [scalar_to_json(x) for x in self.coeffs],
                "offset": scalar_to_json(self.offset),
                "generator_grade": self.generator_grade,
                "critical_grade": self.critical_grade}


@dataclass(frozen=True)
class StaggeredAnswer:
    """The space of isomorphism classes, as an affine subspace of beta space."""

    status: str  # "empty" | "affine"
    b: int
    reason: str | None = None
    constraints: tuple = ()
    point: tuple | None = None
    directions: tuple = ()

    @property
    def beta_dim(self) -> int | None:
        return None if self.status == "empty" else len(self.directions)

    def to_json(self):
        from .scalars import scalar_to_json

        out = {"status": self.status, "beta_dim": self.beta_dim,
               "b": self.b,
               "constraints": [c.to_json() for c in self.constraints]}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.point is not None:
            out["solutions"] = {
                "point": [scalar_to_json(x) for x in self.point],
                "directions": [[scalar_to_json(x) for x in d] for d in self.directions],
            }
        return out


class StaggeredProblem:
    """A compatible left/right pair with its derived counting data."""

    def __init__(self, left: HWModule, right: HWModule, info: CompatInfo):
        self.left = left
        self.right = right
        self.info = info

    @classmethod
    def build(cls, left: HWModule, right: HWModule) -> "StaggeredProblem":
        return cls(left, right, left_right_compatible(left, right))

    def __repr__(self):
        return f"StaggeredProblem({self.left!r} -> {self.right!r}, {self.info.as_tuple()})"

    # -- frequently used vectors -------------------------------------------
    @property
    def ell(self) -> int:
        return self.info.ell

    def omega0_vector(self) -> GradedVector:
        """omega0 as a vector of the left module."""
        if self.ell == 0:
            return self.left.highest_weight_vector()
        w = self.left.parent.element_to_vector(self.info.omega0.element, self.ell)
        return self.left.reduce(w)

    def zero_data(self) -> DataPair:
        return DataPair(self.left.zero(self.ell - 1), self.left.zero(self.ell - 2))

    def right_verma_variant(self) -> "StaggeredProblem":
        """Same left module, right module replaced by the full Verma module."""
        if self.right.is_verma():
            return self
        right = HWModule.get(self.right.parent, ())
        return StaggeredProblem.build(self.left, right)

    def left_verma_variant(self) -> "StaggeredProblem":
        """Both modules replaced by Verma modules (the auxiliary extension)."""
        left = HWModule.get(self.left.parent, ())
        right = HWModule.get(self.right.parent, ())
        return StaggeredProblem.build(left, right)


# ---------------------------------------------------------------------------
# case analysis of the left module around omega0
# ---------------------------------------------------------------------------


def case_tag(problem: StaggeredProblem) -> str:
    """'0', '1', '1p', '2' or '2p' following the left-module configuration."""
    info = problem.info
    if info.ell == 0:
        return "0"
    lattice = info.left_lattice
    entry = lattice.entry_at(info.ell)
    if lattice.kind in ("chain", "link"):
        return "1"
    rho = info.rho
    base = "1" if rho == 1 else "2"
    if entry.sign < 0:
        return base
    minus = [e for e in lattice.rank_entries(rho) if e.sign < 0]
    if not minus:
        return base
    el = find_singular_element(problem.left.parent, minus[0].grade)
    vec = problem.left.parent.element_to_vector(el, minus[0].grade)
    return base + ("p" if not problem.left.reduce(vec).is_zero() else "")


def moduli_dimension(problem: StaggeredProblem):
    """(b, case tag): the dimension of the moduli space for a Verma right module."""
    return problem.info.b, case_tag(problem)


# ---------------------------------------------------------------------------
# admissibility for a Verma right module
# ---------------------------------------------------------------------------



def _act_into(module, elem, vec, target_grade):
    """elem applied to vec, with zero elements and negative-grade vectors
    contributing zero at the requested grade."""
    if not elem or vec.grade < 0 or target_grade < 0:
        return module.zero(target_grade)
    return module.act(elem, vec)


def is_admissible_right_verma(problem: StaggeredProblem, d: DataPair) -> bool:
    """Whether (omega1, omega2) satisfies every intersection-functional identity.

    Only grades 5..ell carry nontrivial functionals, so data at small weight
    gaps is unconditionally admissible.
    """
    left = problem.left
    for m in range(5, problem.ell + 1):
        for rel in intersection_basis(m, left.c):
            val = (_act_into(left, rel.u1, d.omega1, problem.ell - m)
                   + _act_into(left, rel.u2, d.omega2, problem.ell - m))
            if not val.is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# projection machinery (the constructive lemma)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionStep:
    """One filtration step: gauge by descendants of the anchor singular vector."""

    anchor_grade: int
    vprime: VermaModule
    d: int  # grade of the complement basis inside vprime
    zn: tuple  # ((element, norm), ...) orthogonal complement with norms


_STEP_CACHE: dict = {}
_MAXPROPER_CACHE: dict = {}
_COMPLEMENT_CACHE: dict = {}


def _maximal_proper_span(module: VermaModule, n: int):
    """rref span of the grade-n slice of the maximal proper submodule."""
    key = (module.h, module.t, n)
    got = _MAXPROPER_CACHE.get(key)
    if got is not None:
        return got
    if n < 1:
        got = ([], [])
    else:
        from .verma import find_singular

        lattice = classify(module.h, module.t, max_grade=n)
        gens = [find_singular(module, e.grade) for e in lattice.rank_entries(1)]
        got = submodule_span(module, gens, n)
    _MAXPROPER_CACHE[key] = got
    return got


def _complement_with_norms(module: VermaModule, n: int):
    key = (module.h, module.t, n)
    got = _COMPLEMENT_CACHE.get(key)
    if got is None:
        span, pivots = _maximal_proper_span(module, n)
        pairs = orthogonal_complement(module, n, span, pivots)
        got = tuple((module.vector_to_element(vec), norm) for vec, norm in pairs)
        _COMPLEMENT_CACHE[key] = got
    return got


def _projection_steps(parent: VermaModule, lattice: ModuleStructure, m: int):
    """Steps taking grade-m data into the rank-(R-1) submodule, R = rank at m."""
    key = (parent.h, parent.t, m)
    got = _STEP_CACHE.get(key)
    if got is not None:
        return got
    entry = lattice.entry_at(m)
    if entry is None:
        raise ValueError(f"no singular vector at grade {m}")
    r = entry.rank
    nodes = [0]
    if r >= 2:
        if lattice.kind in ("chain", "link"):
            for k in range(1, r - 1):
                nodes.append(lattice.rank_entries(k)[0].grade)
        else:
            for k in range(1, r - 1):
                level = sorted(lattice.rank_entries(k), key=lambda e: e.grade)
                nodes.extend(e.grade for e in level)
    steps = []
    if r >= 2:
        for g in nodes:
            vprime = VermaModule.get(parent.h + g, parent.t)
            dgrade = m - g
            zn = _complement_with_norms(vprime, dgrade)
            steps.append(ProjectionStep(anchor_grade=g, vprime=vprime, d=dgrade, zn=zn))
    got = tuple(steps)
    _STEP_CACHE[key] = got
    return got


def _anchor_vector(problem_module, parent: VermaModule, grade: int) -> GradedVector:
    """X_k x as a vector of the given left module (Verma or quotient)."""
    if grade == 0:
        return problem_module.highest_weight_vector()
    el = find_singular_element(parent, grade)
    vec = parent.element_to_vector(el, grade)
    return problem_module.reduce(vec) if isinstance(problem_module, HWModule) else vec


def _proportional(val: GradedVector, anchor: GradedVector) -> Scalar:
    """val = zeta * anchor, exactly; raises if val leaves the line."""
    if val.is_zero():
        return Fraction(0)
    for i, a in enumerate(anchor.coords):
        if a:
            zeta = exact_div(val.coords[i], a)
            break
    else:
        raise InconsistentSystemError("anchor vector vanishes but value does not")
    if val != anchor.scale(zeta):
        raise InconsistentSystemError("value is not proportional to the anchor; "
                                      "data violates an admissibility constraint")
    return zeta


def project_data(problem: StaggeredProblem, d: DataPair):
    """Gauge-equivalent data inside the rank-(rho-1) submodule.

    Returns (GaugeTransform, DataPair).  Implements the constructive lemma
    with orthogonal complement bases: at each filtration step the data is
    shifted by z = -sum_mu zeta_mu N_mu^{-1} Z_mu X_k x, which kills every
    complement component exactly.
    """
    left = problem.left
    ell = problem.ell
    u_total = left.zero(ell)
    if problem.info.rho <= 1:
        return GaugeTransform(u_total), d
    steps = _projection_steps(left.parent, problem.info.left_lattice, ell)
    cur = d
    for step in steps:
        if not step.zn:
            continue
        anchor = _anchor_vector(left, left.parent, step.anchor_grade)
        if anchor.is_zero():
            if not (cur.omega1.is_zero() and cur.omega2.is_zero()):
                raise InconsistentSystemError("anchor vanished with nonzero data")
            continue
        z = left.zero(ell)
        moved = False
        for elem, norm in step.zn:
            z1, z2 = decompose_against_l1_l2(elem.adjoint())
            val = (_act_into(left, z1, cur.omega1, step.anchor_grade)
                   + _act_into(left, z2, cur.omega2, step.anchor_grade))
            zeta = _proportional(val, anchor)
            if zeta:
                z = z - left.act(elem, anchor).scale(exact_div(zeta, norm))
                moved = True
        if moved:
            cur = gauge_apply(z, cur)
            u_total = u_total + z
    return GaugeTransform(u_total), cur


# ---------------------------------------------------------------------------
# beta invariants
# ---------------------------------------------------------------------------


def _minsubmod_anchors(problem: StaggeredProblem):
    """Grades of the rank-(rho-1) generators: one (chain-like) or two (braid)."""
    info = problem.info
    if info.rho == 0:
        return []
    if info.rho == 1:
        return [0]
    lattice = info.left_lattice
    return sorted(e.grade for e in lattice.rank_entries(info.rho - 1))


def _chi_element(parent: VermaModule, anchor_grade: int, top_grade: int) -> AlgebraElement:
    """The prime factor with X_top = chi X_anchor; singular for the shifted weight."""
    el = find_singular_element(VermaModule.get(parent.h + anchor_grade, parent.t),
                               top_grade - anchor_grade)
    if el is None:
        raise AssertionError("factorisation step missing a singular vector")
    return AlgebraElement(parent.c, el.terms)


def _w_projector_data(parent: VermaModule, g_minus: int, g_plus: int):
    """Orthogonal basis (elements, norms) of the lowering side between two anchors."""
    vprime = VermaModule.get(parent.h + g_minus, parent.t)
    return _complement_with_norms(vprime, g_plus - g_minus)


def _reduce_mod_minus(problem_module, parent, val, g_minus, g_plus):
    """Subtract the descendant-of-X^- component of a grade-g_plus vector."""
    anchor_m = _anchor_vector(problem_module, parent, g_minus)
    if anchor_m.is_zero():
        return val
    for elem, norm in _w_projector_data(parent, g_minus, g_plus):
        zeta_vec = problem_module.act(elem.adjoint(), val)
        zeta = _proportional(zeta_vec, anchor_m)
        if zeta:
            val = val - problem_module.act(elem, anchor_m).scale(exact_div(zeta, norm))
    return val


def beta_invariants(problem: StaggeredProblem, d: DataPair) -> BetaValue:
    """The gauge-invariant coordinates of admissible data.

    Cases with one rank-(rho-1) generator give a single value; the braid
    cases with two generators give the pair (minus, plus), the plus value
    read off modulo descendants of the minus generator.
    """
    info = problem.info
    if info.ell == 0:
        raise UndefinedInvariantError("no beta invariants at weight gap zero")
    _, dp = project_data(problem, d)
    left = problem.left
    ell = info.ell
    anchors = _minsubmod_anchors(problem)

    def evaluate(anchor_grade):
        chi = _chi_element(left.parent, anchor_grade, ell)
        y1, y2 = decompose_against_l1_l2(chi.adjoint())
        return (_act_into(left, y1, dp.omega1, anchor_grade)
                + _act_into(left, y2, dp.omega2, anchor_grade))

    if len(anchors) == 1:
        anchor = _anchor_vector(left, left.parent, anchors[0])
        return BetaValue.single(_proportional(evaluate(anchors[0]), anchor))

    g_minus, g_plus = anchors
    anchor_minus = _anchor_vector(left, left.parent, g_minus)
    beta_minus = _proportional(evaluate(g_minus), anchor_minus)
    val_plus = _reduce_mod_minus(left, left.parent, evaluate(g_plus), g_minus, g_plus)
    anchor_plus = _anchor_vector(left, left.parent, g_plus)
    beta_plus = _proportional(val_plus, anchor_plus)
    return BetaValue.pair(beta_minus, beta_plus)


def naive_beta(problem: StaggeredProblem, d: DataPair) -> Scalar:
    """The classical pairing <x, X^dagger y>; identically zero once rho > 1."""
    if problem.ell == 0:
        raise UndefinedInvariantError("no beta invariants at weight gap zero")
    y1, y2 = decompose_against_l1_l2(problem.info.omega0.element.adjoint())
    left = problem.left
    val = (_act_into(left, y1, d.omega1, 0) + _act_into(left, y2, d.omega2, 0))
    return val.coords[0]


def expected_beta_kind(b: int) -> str:
    return {0: "none", 1: "single", 2: "pair"}[b]


def data_from_beta(problem: StaggeredProblem, target: BetaValue) -> DataPair:
    """A representative admissible data pair with prescribed invariants.

    Solves, inside the rank-(rho-1) submodule, the joint linear system of the
    intersection-functional identities and the invariant evaluations.
    """
    info = problem.info
    b = info.b
    if target.kind != expected_beta_kind(b):
        if b == 0 and target.kind != "none":
            raise ValueError("no invariants exist at weight gap zero")
        raise ValueError(f"target kind {target.kind!r} does not match b = {b}")
    if b == 0:
        return problem.zero_data()

    left = problem.left
    ell = info.ell
    anchors = _minsubmod_anchors(problem)

    # spanning vectors of the admissible-search space, componentwise
    span1: list = []
    span2: list = []
    for g in anchors:
        anchor = _anchor_vector(left, left.parent, g)
        if anchor.is_zero():
            continue
        for target_list, j in ((span1, 1), (span2, 2)):
            rel = ell - j - g
            if rel < 0:
                continue
            for mono in negative_basis(rel):
                target_list.append(left.act(mono, anchor))
    nvars = len(span1) + len(span2)
    if nvars == 0:
        raise NonUniqueSolutionError("no admissible search space at this weight gap")

    def pair_of(coeffs) -> DataPair:
        w1 = left.zero(ell - 1)
        for c_, v in zip(coeffs[:len(span1)], span1):
            if c_:
                w1 = w1 + v.scale(c_)
        w2 = left.zero(ell - 2)
        for c_, v in zip(coeffs[len(span1):], span2):
            if c_:
                w2 = w2 + v.scale(c_)
        return DataPair(w1, w2)

    rows: list = []
    rhs: list = []

    def add_vector_equation(vec_of_var, constant_vec):
        # one scalar row per coordinate: sum_k x_k vec_k[i] = constant[i]
        dim = len(constant_vec.coords)
        for i in range(dim):
            rows.append([v.coords[i] for v in vec_of_var])
            rhs.append(constant_vec.coords[i])

    # admissibility: every intersection functional kills the data
    for m in range(5, ell + 1):
        for rel in intersection_basis(m, left.c):
            per_var = []
            for k in range(nvars):
                if k < len(span1):
                    val = _act_into(left, rel.u1, span1[k], ell - m)
                else:
                    val = _act_into(left, rel.u2, span2[k - len(span1)], ell - m)
                per_var.append(val)
            add_vector_equation(per_var, left.zero(ell - m))

    # invariant evaluations equal the target
    def invariant_rows(anchor_grade, reduce_minus=None):
        chi = _chi_element(left.parent, anchor_grade, ell)
        y1, y2 = decompose_against_l1_l2(chi.adjoint())
        per_var = []
        for k in range(nvars):
            if k < len(span1):
                val = _act_into(left, y1, span1[k], anchor_grade)
            else:
                val = _act_into(left, y2, span2[k - len(span1)], anchor_grade)
            if reduce_minus is not None:
                val = _reduce_mod_minus(left, left.parent, val, reduce_minus, anchor_grade)
            per_var.append(val)
        return per_var

    if b == 1:
        anchor = _anchor_vector(left, left.parent, anchors[0])
        add_vector_equation(invariant_rows(anchors[0]), anchor.scale(target.values[0]))
    else:
        g_minus, g_plus = anchors
        anchor_m = _anchor_vector(left, left.parent, g_minus)
        anchor_p = _anchor_vector(left, left.parent, g_plus)
        add_vector_equation(invariant_rows(g_minus), anchor_m.scale(target.values[0]))
        add_vector_equation(invariant_rows(g_plus, reduce_minus=g_minus),
                            anchor_p.scale(target.values[1]))

    sol = linalg.solve(rows, rhs, nvars)
    if sol is None:
        raise AssertionError("invariants failed to parametrise the moduli space")
    return pair_of(sol[0])


# ---------------------------------------------------------------------------
# the explicit realization used for varpi solving and the oracle
# ---------------------------------------------------------------------------


@dataclass
class TVec:
    """A vector of the extension: left-module part plus lowering-basis part on y."""

    grade: int
    left: GradedVector
    ypart: dict  # partition of (grade - ell) -> Scalar


class StaggeredRealization:
    """Explicit action table of the extension with a Verma right module.

    Vectors at grade n are pairs (left-module vector, coefficients over the
    grade-(n - ell) lowering basis applied to y).  Single modes act by normal
    ordering against the y-basis monomial and resolving positive tails
    through the data and L_0 tails through h_right and omega0.
    """

    def __init__(self, left, h_right: Scalar, omega0_vec: GradedVector, data: DataPair):
        self.left = left
        self.h_right = h_right
        self.omega0 = omega0_vec
        self.ell = omega0_vec.grade
        self.data = data
        self.c = left.c
        self._ly: dict = {1: data.omega1 if data.omega1.grade >= 0 else None,
                          2: data.omega2 if data.omega2.grade >= 0 else None}
        self._pos_y: dict = {}
        self._mode_y: dict = {}

    # -- building blocks ----------------------------------------------------
    def l_y(self, m: int):
        """L_m y as a left-module vector (None when it lands below grade 0)."""
        got = self._ly.get(m)
        if got is not None or m in self._ly:
            return got
        if self.ell - m < 0:
            self._ly[m] = None
            return None
        prev = self.l_y(m - 1)
        w1 = self._ly[1]
        a = self.left.act(((m - 1, 1),), w1) if w1 is not None else self.left.zero(self.ell - m)
        bvec = self.left.act(((1, 1),), prev) if prev is not None else self.left.zero(self.ell - m)
        out = (a - bvec).scale(Fraction(1, m - 2))
        self._ly[m] = out
        return out

    def _pos_on_y(self, pos_mono):
        """A raising monomial applied to y; None once anything dips below grade 0."""
        got = self._pos_y.get(pos_mono)
        if got is not None or pos_mono in self._pos_y:
            return got
        word = mono_word(pos_mono)
        w = self.l_y(word[-1])
        for m in reversed(word[:-1]):
            if w is None or w.grade - m < 0:
                w = None
                break
            w = self.left.act(((m, 1),), w)
        self._pos_y[pos_mono] = w
        return w

    def _mode_on_ypart(self, m: int, part: tuple):
        """L_m (B_part y): (left contribution, {partition: coeff} y contribution)."""
        key = (m, part)
        got = self._mode_y.get(key)
        if got is not None:
            return got
        target = self.ell + sum(part) - m
        left_acc = None
        y_acc: dict = {}
        word = (m,) + tuple(-x for x in part)
        for mono, v in _normal_order_word(word, self.c).items():
            neg, e0, pos = _mono_split_parts(mono)
            neg_part = tuple(-mm for mm, e in neg for _ in range(e))
            if pos:
                w = self._pos_on_y(pos)
                if w is None or w.is_zero():
                    continue
                if e0:
                    w = w.scale((self.left.h + w.grade) ** e0)
                for mm, e in reversed(neg):
                    for _ in range(e):
                        w = self.left.act(((mm, 1),), w)
                w = w.scale(v)
                left_acc = w if left_acc is None else left_acc + w
            elif e0:
                hr = self.h_right
                y_acc[neg_part] = y_acc.get(neg_part, 0) + v * hr ** e0
                w = self.omega0
                for mm, e in reversed(neg):
                    for _ in range(e):
                        w = self.left.act(((mm, 1),), w)
                w = w.scale(v * e0 * hr ** (e0 - 1))
                left_acc = w if left_acc is None else left_acc + w
            else:
                y_acc[neg_part] = y_acc.get(neg_part, 0) + v
        if left_acc is None:
            left_acc = self.left.zero(target)
        y_acc = {p: val for p, val in y_acc.items() if val}
        got = (left_acc, y_acc)
        self._mode_y[key] = got
        return got

    # -- vector interface ------------------------------------------------------
    def zero(self, grade: int) -> TVec:
        return TVec(grade, self.left.zero(grade), {})

    def from_lowering(self, elem: AlgebraElement) -> TVec:
        """elem * y for a homogeneous pure-lowering element."""
        g = elem.grade()
        if g is None:
            raise ValueError("need a homogeneous lowering element")
        ypart = {}
        for mono, v in elem.terms.items():
            if any(mm >= 0 for mm, _ in mono):
                raise ValueError("element must be pure lowering")
            ypart[tuple(-mm for mm, e in mono for _ in range(e))] = v
        return TVec(self.ell + g, self.left.zero(self.ell + g), ypart)

    def add_left(self, tv: TVec, vec: GradedVector) -> TVec:
        return TVec(tv.grade, tv.left + vec, tv.ypart)

    def act_mode(self, m: int, tv: TVec) -> TVec:
        target = tv.grade - m
        if target < 0:
            return self.zero(0)
        left_acc = self.left.zero(target)
        if not tv.left.is_zero():
            left_acc = left_acc + self.left.act(((m, 1),), tv.left)
        y_acc: dict = {}
        for part, a in tv.ypart.items():
            if not a:
                continue
            lc, yc = self._mode_on_ypart(m, part)
            if not lc.is_zero():
                left_acc = left_acc + lc.scale(a)
            for p, v in yc.items():
                val = y_acc.get(p, 0) + a * v
                if val:
                    y_acc[p] = val
                elif p in y_acc:
                    del y_acc[p]
        return TVec(target, left_acc, y_acc)

    def act_element(self, elem: AlgebraElement, tv: TVec) -> TVec:
        g = elem.grade()
        if g is None:
            raise ValueError("need a homogeneous element")
        target = tv.grade + g
        acc = self.zero(target)
        for mono, coeff in elem.terms.items():
            cur = tv
            for m in reversed(mono_word(mono)):
                cur = self.act_mode(m, cur)
            acc = TVec(target, acc.left + cur.left.scale(coeff),
                       _merge_scaled(acc.ypart, cur.ypart, coeff))
        return acc

    def pure_left(self, tv: TVec) -> GradedVector:
        if any(tv.ypart.values()):
            raise AssertionError("vector has an unexpected component along y")
        return tv.left

    def graded_dim(self, n: int) -> int:
        from .algebra import part_count

        return self.left.dim(n) + (part_count(n - self.ell) if n >= self.ell else 0)

    def basis_tvec(self, n: int, i: int) -> TVec:
        """The i-th basis vector at grade n: left-module basis first, then the
        lowering monomials applied to y."""
        dl = self.left.dim(n)
        if i < dl:
            return TVec(n, self.left.vector(n, [1 if j == i else 0 for j in range(dl)]), {})
        part = partitions(n - self.ell)[i - dl]
        return TVec(n, self.left.zero(n), {part: Fraction(1)})

    def coords(self, tv: TVec):
        out = list(tv.left.coords)
        if tv.grade >= self.ell:
            out.extend(tv.ypart.get(p, 0) for p in partitions(tv.grade - self.ell))
        return out

    def action_table(self, max_grade: int):
        """Row-major matrices of the modes -2..2 on the truncation up to max_grade.

        The module is infinite dimensional, but its isomorphism class is pinned
        by (left, right, invariants); this finite table is the concrete
        low-mode action on the graded slices."""
        table = {}
        for m in (-2, -1, 0, 1, 2):
            per_grade = {}
            for n in range(0, max_grade + 1):
                if n - m < 0 or n - m > max_grade:
                    continue
                cols = [self.coords(self.act_mode(m, self.basis_tvec(n, i)))
                        for i in range(self.graded_dim(n))]
                per_grade[n] = [[cols[j][i] for j in range(len(cols))]
                                for i in range(self.graded_dim(n - m))]
            table[m] = per_grade
        return table


def _merge_scaled(base: dict, extra: dict, factor) -> dict:
    out = dict(base)
    for k, v in extra.items():
        val = out.get(k, 0) + factor * v
        if val:
            out[k] = val
        elif k in out:
            del out[k]
    return out


# ---------------------------------------------------------------------------
# varpi and the singular-vector oracle
# ---------------------------------------------------------------------------


def _mode_action_matrix(module, n: int, mode: int):
    """Matrix of L_mode from grade n to grade n - mode in module coordinates."""
    dim_src = module.dim(n)
    dim_dst = module.dim(n - mode)
    cols = []
    for i in range(dim_src):
        e = [0] * dim_src
        e[i] = 1
        res = module.act(((mode, 1),), module.vector(n, e))
        cols.append(res.coords)
    return [[cols[j][i] for j in range(dim_src)] for i in range(dim_dst)]


def _solve_two_mode_system(module, n: int, rhs1: GradedVector, rhs2: GradedVector):
    """q at grade n with L_1 q = rhs1 and L_2 q = rhs2, or None."""
    rows = [list(r) for r in _mode_action_matrix(module, n, 1)]
    rows.extend(_mode_action_matrix(module, n, 2))
    rhs = list(rhs1.coords) + list(rhs2.coords)
    sol = linalg.solve(rows, rhs, module.dim(n))
    if sol is None:
        return None
    vec, null = sol
    if null:
        raise NonUniqueSolutionError(
            "left module retains a singular vector where theory forbids one")
    return module.vector(n, vec)


def varpi(problem: StaggeredProblem, d: DataPair, generator_index: int = 0) -> GradedVector:
    """The unique companion vector with L_n varpi = L_n (Xbar y) for n = 1, 2.

    Computed from the decomposition L_n Xbar = U0 (L_0 - h) + U1 L_1 + U2 L_2
    and then solved exactly; an inconsistent system signals inadmissible data.
    """
    if not problem.right.generators:
        raise ValueError("right module is Verma; varpi is not defined")
    sv = problem.right.generators[generator_index]
    left = problem.left
    xbar = AlgebraElement(left.c, sv.element.terms)
    w0 = problem.omega0_vector()
    rhs = []
    for n in (1, 2):
        u = AlgebraElement.mode(left.c, n) * xbar
        u0, u1, u2 = decompose_mod_annihilator(u, problem.right.h)
        target = problem.ell + sv.grade - n
        r = (_act_into(left, u0, w0, target)
             + _act_into(left, u1, d.omega1, target)
             + _act_into(left, u2, d.omega2, target))
        rhs.append(r)
    out = _solve_two_mode_system(left, problem.ell + sv.grade, rhs[0], rhs[1])
    if out is None:
        raise InconsistentSystemError("no varpi exists; the data is not admissible")
    return out


def oracle_singular(problem: StaggeredProblem, target: BetaValue):
    """Brute-force witness search used to cross-check the decision procedure.

    Realises the extension with a Verma right module and representative data
    for the target invariants, then solves for singular vectors Xbar y - q at
    the grades of the right quotient generators.  Returns the list of q
    witnesses (one per generator) or None when some witness does not exist.
    """
    if not problem.right.generators:
        raise ValueError("right module is Verma; nothing to search for")
    rv = problem.right_verma_variant()
    d = data_from_beta(rv, target)
    real = StaggeredRealization(problem.left, problem.right.h,
                                problem.omega0_vector(), d)
    witnesses = []
    for sv in problem.right.generators:
        xbar = AlgebraElement(problem.left.c, sv.element.terms)
        ybar = real.from_lowering(xbar)
        rhs = []
        for n in (1, 2):
            rn = real.act_mode(n, ybar)
            rhs.append(real.pure_left(rn))
        q = _solve_two_mode_system(problem.left, problem.ell + sv.grade, rhs[0], rhs[1])
        if q is None:
            return None
        witnesses.append(q)
    return witnesses


# ---------------------------------------------------------------------------
# critical-rank constraints and the decision procedure
# ---------------------------------------------------------------------------


def _beta_bar_values(problem: StaggeredProblem, d: DataPair):
    """The obstruction constants for one auxiliary extension with given data.

    Works in the both-sides-Verma auxiliary module: projects Xbar y into the
    rank-(rho + rhobar - 1) submodule with the constructive-lemma gauge steps
    and pairs against the prime factors over each surviving critical vector.
    Returns {(generator grade, critical grade): value}.
    """
    info = problem.info
    parent = problem.left.parent
    left_hw = HWModule.get(parent, ())
    w0 = (parent.element_to_vector(info.omega0.element, info.ell) if info.ell
          else parent.highest_weight_vector())
    w0 = left_hw.reduce(w0)
    d_lift = DataPair(
        left_hw.vector(info.ell - 1, d.omega1.coords) if d.omega1.grade >= 0 else left_hw.zero(info.ell - 1),
        left_hw.vector(info.ell - 2, d.omega2.coords) if d.omega2.grade >= 0 else left_hw.zero(info.ell - 2),
    )
    real = StaggeredRealization(left_hw, problem.right.h, w0, d_lift)
    out = {}
    for sv in problem.right.generators:
        m = info.ell + sv.grade
        lattice = classify(parent.h, parent.t, max_grade=m)
        entry = lattice.entry_at(m)
        if entry is None or entry.rank != info.rho + info.rho_bar:
            raise AssertionError("augmented singular vector has unexpected rank")
        xbar = AlgebraElement(parent.c, sv.element.terms)
        ybar = real.from_lowering(xbar)
        for step in _projection_steps(parent, lattice, m):
            if not step.zn:
                continue
            anchor = _anchor_vector(left_hw, parent, step.anchor_grade)
            z = left_hw.zero(m)
            for elem, norm in step.zn:
                val_tv = real.act_element(elem.adjoint(), ybar)
                val = real.pure_left(val_tv)
                zeta = _proportional(val, anchor)
                if zeta:
                    z = z - left_hw.act(elem, anchor).scale(exact_div(zeta, norm))
            if not z.is_zero():
                ybar = real.add_left(ybar, z)
        crit_level = lattice.rank_entries(info.rho + info.rho_bar - 1)
        minus_grade = min(e.grade for e in crit_level) if crit_level else None
        for e in problem.info.critical_entries:
            chi = _chi_element(parent, e.grade, m)
            val = real.pure_left(real.act_element(chi.adjoint(), ybar))
            if e.sign > 0 and minus_grade is not None and minus_grade < e.grade:
                val = _reduce_mod_minus(left_hw, parent, val, minus_grade, e.grade)
            anchor = _anchor_vector(left_hw, parent, e.grade)
            out[(sv.grade, e.grade)] = _proportional(val, anchor)
    return out


def critical_constraints(problem: StaggeredProblem):
    """Affine functionals of the invariants that must all vanish for existence.

    Empty unless both g > 0 and n > 0.  Each functional is pinned down by
    evaluating the obstruction constants at b + 1 interpolation targets; the
    values are gauge invariant, so any representative data works.
    """
    info = problem.info
    if not info.n or not info.g:
        return []
    aux = problem.left_verma_variant()
    b = info.b
    if b == 0:
        targets = [BetaValue.none()]
    elif b == 1:
        targets = [BetaValue.single(Fraction(0)), BetaValue.single(Fraction(1))]
    else:
        targets = [BetaValue.pair(Fraction(0), Fraction(0)),
                   BetaValue.pair(Fraction(1), Fraction(0)),
                   BetaValue.pair(Fraction(0), Fraction(1))]
    evals = []
    for tgt in targets:
        d = data_from_beta(aux, tgt)
        evals.append(_beta_bar_values(problem, d))
    constraints = []
    for sv in problem.right.generators:
        for e in info.critical_entries:
            key = (sv.grade, e.grade)
            base = evals[0][key]
            coeffs = tuple(evals[k + 1][key] - base for k in range(b))
            constraints.append(AffineConstraint(coeffs=coeffs, offset=base,
                                                generator_grade=sv.grade,
                                                critical_grade=e.grade))
    return constraints


def rohsiepe_exists(h_right: Scalar, t: Scalar) -> bool:
    """Closed-form existence at weight gap zero with a prime minimal generator.

    True iff the minimal solution (r, s) of h_right = h_{r,s} has p | r and
    q | s (t = q/p reduced) with |p| s != |q| r; a braid-type minimal pair
    never qualifies.
    """
    if isinstance(t, RatFunc):
        if not t.is_constant():
            raise ValueError("criterion requires rational t")
        t = t.as_fraction()
    t = Fraction(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    if isinstance(h_right, RatFunc):
        h_right = h_right.as_fraction()
    h_right = Fraction(h_right)
    sols = {}
    budget = 16
    while not sols and budget <= 4096:
        sols = _kac_solutions(h_right, t, budget)
        budget *= 4
    if not sols:
        return False
    m1 = min(sols)
    p, q = t.denominator, abs(t.numerator)
    for r, s in sols[m1]:
        if r % p == 0 and s % q == 0 and p * s != q * r:
            return True
    return False


def exists(problem: StaggeredProblem) -> StaggeredAnswer:
    """The full decision: the space of staggered extensions as an affine set."""
    info = problem.info
    b = info.b
    if info.n == 0 or not info.g:
        return _full_space_answer(b)
    if b > 0:
        constraints = critical_constraints(problem)
        sol = linalg.solve([list(c.coeffs) for c in constraints],
                           [-c.offset for c in constraints], b)
        if sol is None:
            return StaggeredAnswer(status="empty", b=b,
                                   reason="critical-rank constraints are inconsistent",
                                   constraints=tuple(constraints))
        point, dirs = sol
        return StaggeredAnswer(status="affine", b=b, constraints=tuple(constraints),
                               point=tuple(point), directions=tuple(tuple(v) for v in dirs))
    return _exists_gap_zero(problem)


def _full_space_answer(b: int) -> StaggeredAnswer:
    dirs = tuple(tuple(Fraction(1) if j == i else Fraction(0) for j in range(b))
                 for i in range(b))
    return StaggeredAnswer(status="affine", b=b, point=(Fraction(0),) * b, directions=dirs)


def _exists_gap_zero(problem: StaggeredProblem) -> StaggeredAnswer:
    """b = 0: every obstruction constant must vanish on its own."""
    info = problem.info
    right_lattice = classify(problem.right.h, problem.right.t,
                             max_grade=max(sv.grade for sv in problem.right.generators))
    composite = [sv for sv in problem.right.generators if sv.rank > 1]
    for sv in problem.right.generators:
        if sv.rank > 1:
            continue
        first = right_lattice.entries[0]
        if sv.grade == first.grade:
            ok = rohsiepe_exists(problem.right.h, problem.right.t)
        else:
            # the second braid generator: its obstruction constant never vanishes
            ok = False
        if not ok:
            return StaggeredAnswer(
                status="empty", b=0,
                reason=f"obstruction constant for the grade-{sv.grade} generator "
                       "does not vanish")
    if composite:
        constraints = critical_constraints(problem)
        bad = [c for c in constraints if c.offset and
               c.generator_grade in {sv.grade for sv in composite}]
        if bad:
            raise UnsupportedConfigurationError(
                "weight gap zero with a composite quotient generator and a nonzero "
                "obstruction constant: non-existence is outside the supported theory")
    return StaggeredAnswer(status="affine", b=0, point=(), directions=())


# ---------------------------------------------------------------------------
# the generic-parameter obstruction table
# ---------------------------------------------------------------------------


def generic_beta_bar(r: int, s: int) -> RatFunc:
    """The pairing <Xbar y, Xbar y>-style constant over Q(t) at weight gap zero.

    Builds the unique gap-zero extension of the weight-h_{r,s}(t) Verma module
    by itself and evaluates Xbar^dagger Xbar y against x, with Xbar the
    normalised grade-rs singular element over Q(t).
    """
    if r < 1 or s < 1 or r * s > 6:
        raise ValueError("table rows need 1 <= r*s <= 6")
    t = T_GEN
    h = kac_weight((r, s), t)
    parent = VermaModule.get(h, t)
    left = HWModule.get(parent, ())
    xbar = find_singular_element(parent, r * s)
    if xbar is None:
        raise AssertionError("generic singular vector must exist")
    data = DataPair(left.zero(-1), left.zero(-2))
    real = StaggeredRealization(left, h, left.highest_weight_vector(), data)
    ybar = real.from_lowering(xbar)
    val = real.pure_left(real.act_element(xbar.adjoint(), ybar))
    out = val.coords[0]
    return out if isinstance(out, RatFunc) else RatFunc((Fraction(out).numerator,),
                                                        (Fraction(out).denominator,))


# ---------------------------------------------------------------------------
# psi functionals (admissibility characterisation, exposed for verification)
# ---------------------------------------------------------------------------


def psi_values(problem: StaggeredProblem, d: DataPair, anchor_grade: int,
               mod_minus_grade: int | None = None):
    """Values of the admissibility functionals tied to one anchor vector.

    For each intersection element at grade -(ell - anchor_grade) the value is
    the coefficient of the anchor in U1 omega1 + U2 omega2, read modulo the
    descendants of a lower minus-anchor when one is supplied.
    """
    left = problem.left
    ell = problem.ell
    out = []
    anchor = _anchor_vector(left, left.parent, anchor_grade)
    for rel in intersection_basis(ell - anchor_grade, left.c):
        val = (_act_into(left, rel.u1, d.omega1, anchor_grade)
               + _act_into(left, rel.u2, d.omega2, anchor_grade))
        if mod_minus_grade is not None:
            val = _reduce_mod_minus(left, left.parent, val, mod_minus_grade, anchor_grade)
        out.append(_proportional(val, anchor))
    return out
