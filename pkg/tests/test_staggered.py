import random
from fractions import Fraction as F

import pytest

from virstag import linalg
from virstag.algebra import AlgebraElement, negative_basis
from virstag.intersection import intersection_basis
from virstag.scalars import KacLabel, kac_weight
from virstag.staggered import (
    BetaValue,
    DataPair,
    InconsistentSystemError,
    StaggeredProblem,
    UndefinedInvariantError,
    UnsupportedConfigurationError,
    beta_invariants,
    data_from_beta,
    exists,
    gauge_apply,
    generic_beta_bar,
    is_admissible_right_verma,
    moduli_dimension,
    naive_beta,
    oracle_singular,
    project_data,
    psi_values,
    rohsiepe_exists,
    varpi,
)
from virstag.structure import classify
from virstag.verma import HWModule, VermaModule, submodule_span


def make(t, h_left, left_grades, h_right, right_grades=()):
    t = F(t)
    left = HWModule.get(VermaModule.get(F(h_left), t), left_grades)
    right = HWModule.get(VermaModule.get(F(h_right), t), right_grades)
    return StaggeredProblem.build(left, right)


def elem(c, terms):
    out = AlgebraElement(c)
    for mono, coeff in terms.items():
        out._add_terms({mono: F(coeff)})
    return out


def random_data(rng, p):
    left = p.left
    ell = p.ell
    def vec(g):
        if g < 0:
            return left.zero(g)
        return left.vector(g, [F(rng.randint(-4, 4), rng.randint(1, 3))
                               for _ in range(left.dim(g))])
    return DataPair(vec(ell - 1), vec(ell - 2))


# -- case analysis -----------------------------------------------------------


def test_moduli_dimensions_and_tags():
    assert moduli_dimension(make("2", 0, (), 0)) == (0, "0")
    assert moduli_dimension(make("2", 0, (), 1)) == (1, "1")
    assert moduli_dimension(make("3/2", 0, (), 5)) == (2, "2")
    # braid with omega0 the plus vector of its rank
    assert moduli_dimension(make("3/2", 0, (), 2)) == (1, "1p")
    assert moduli_dimension(make("3/2", 0, (), 7)) == (2, "2p")
    # killing the minus partner downgrades the primed cases
    assert moduli_dimension(make("3/2", 0, (1,), 2)) == (1, "1")


# -- admissibility ------------------------------------------------------------


def test_low_gap_always_admissible():
    rng = random.Random(1)
    for spec in (("2", 0, (), 3), ("3/2", 0, (), 2)):
        p = make(*spec)
        for _ in range(5):
            assert is_admissible_right_verma(p, random_data(rng, p))


def test_zero_data_admissible():
    p = make("3/2", 1, (4,), 7)
    assert is_admissible_right_verma(p, p.zero_data())


def test_admissibility_cuts_a_ray_in_the_worked_slice():
    # weight gap 6: data (0, (a L_{-4} + b L_{-2}^2) x) is admissible only on
    # the ray 7a + 18b = 0 cut out by the grade-5 and grade-6 functionals
    p = make("3/2", 1, (4,), 7)
    left = p.left

    def data_ab(a, b):
        el = elem(left.c, {((-4, 1),): a, ((-2, 2),): b})
        return DataPair(left.zero(5), left.reduce(left.parent.element_to_vector(el, 4)))

    assert is_admissible_right_verma(p, data_ab(18, -7))
    assert not is_admissible_right_verma(p, data_ab(1, 0))
    assert not is_admissible_right_verma(p, data_ab(0, 1))
    assert not is_admissible_right_verma(p, data_ab(18, -6))


# -- projections ---------------------------------------------------------------


def test_project_identity_on_target_data():
    p = make("2", 0, (), 3)
    d = data_from_beta(p, BetaValue.single(F(5, 7)))
    g, d2 = project_data(p, d)
    assert g.u.is_zero()
    assert d2.omega1 == d.omega1 and d2.omega2 == d.omega2


def test_project_lands_in_target_submodule_chain():
    rng = random.Random(8)
    p = make("2", 0, (), 3)  # chain, rank-2 omega0 at grade 3
    parent = p.left.parent
    from virstag.verma import find_singular

    span, pivots = submodule_span(parent, [find_singular(parent, 1)], 2)
    for _ in range(6):
        d = random_data(rng, p)
        g, d2 = project_data(p, d)
        assert gauge_apply(g.u, d).omega1 == d2.omega1
        # omega1' is a grade-2 descendant of the rank-1 singular vector
        assert linalg.in_span(span, pivots, list(d2.omega1.coords)) is None
        assert d2.omega2 == gauge_apply(g.u, d).omega2


def test_project_multi_step_braid():
    # omega0 of rank 3 at grade 12: the braid path needs two nontrivial steps.
    # Start from admissible data pushed out of the target submodule by a
    # random gauge; projecting must bring it back without changing the class.
    rng = random.Random(4)
    p = make("3/2", 0, (), 12)
    parent = p.left.parent
    from virstag.verma import find_singular

    gens = [find_singular(parent, 5), find_singular(parent, 7)]
    span, pivots = submodule_span(parent, gens, 11)
    span2, pivots2 = submodule_span(parent, gens, 10)
    target = BetaValue.pair(F(3), F(-1, 2))
    d0 = data_from_beta(p, target)
    u = p.left.vector(12, [F(rng.randint(-3, 3), rng.randint(1, 2))
                           for _ in range(p.left.dim(12))])
    d = gauge_apply(u, d0)
    assert linalg.in_span(span, pivots, list(d.omega1.coords)) is not None
    g, d2 = project_data(p, d)
    assert gauge_apply(g.u, d).omega1 == d2.omega1
    assert linalg.in_span(span, pivots, list(d2.omega1.coords)) is None
    assert linalg.in_span(span2, pivots2, list(d2.omega2.coords)) is None
    assert beta_invariants(p, d) == target


# -- invariants -----------------------------------------------------------------


def test_beta_worked_fusion_values():
    # weight gap one, omega1 = beta x, omega2 = 0
    p = make("2", 0, (3,), 1)
    x = p.left.highest_weight_vector()
    d_minus = DataPair(x.scale(F(-1)), p.left.zero(-1))
    assert beta_invariants(p, d_minus) == BetaValue.single(F(-1))
    d_half = DataPair(x.scale(F(1, 2)), p.left.zero(-1))
    assert beta_invariants(p, d_half) == BetaValue.single(F(1, 2))
    assert naive_beta(p, d_half) == F(1, 2)


def test_naive_beta_vanishes_for_composite():
    rng = random.Random(12)
    for spec in (("2", 0, (), 3), ("3/2", 0, (), 5), ("3/2", 0, (), 7)):
        p = make(*spec)
        for _ in range(4):
            assert naive_beta(p, random_data(rng, p)) == 0


def test_beta_undefined_at_gap_zero():
    p = make("2", 0, (), 0)
    with pytest.raises(UndefinedInvariantError):
        beta_invariants(p, p.zero_data())
    with pytest.raises(ValueError):
        data_from_beta(p, BetaValue.single(F(1)))
    assert data_from_beta(p, BetaValue.none()) == p.zero_data()


CASE_INSTANCES = {
    "1": ("2", 0, (), 3),
    "1p": ("3/2", 0, (), 2),
    "2": ("3/2", 0, (), 5),
    "2p": ("3/2", 0, (), 7),
}


def test_data_from_beta_round_trip_per_case():
    rng = random.Random(77)
    for tag, spec in CASE_INSTANCES.items():
        p = make(*spec)
        b, got_tag = moduli_dimension(p)
        assert got_tag == tag
        for _ in range(5):
            if b == 1:
                target = BetaValue.single(F(rng.randint(-9, 9), rng.randint(1, 4)))
            else:
                target = BetaValue.pair(F(rng.randint(-9, 9), rng.randint(1, 4)),
                                        F(rng.randint(-9, 9), rng.randint(1, 4)))
            d = data_from_beta(p, target)
            assert is_admissible_right_verma(p, d)
            assert beta_invariants(p, d) == target, tag


def test_invariant_coordinates_are_independent():
    for spec in (CASE_INSTANCES["2"], CASE_INSTANCES["2p"]):
        p = make(*spec)
        d10 = data_from_beta(p, BetaValue.pair(F(1), F(0)))
        d01 = data_from_beta(p, BetaValue.pair(F(0), F(1)))
        assert beta_invariants(p, d10) == BetaValue.pair(F(1), F(0))
        assert beta_invariants(p, d01) == BetaValue.pair(F(0), F(1))


def test_gauge_invariance_sampled():
    rng = random.Random(5)
    for tag, spec in CASE_INSTANCES.items():
        p = make(*spec)
        b, _ = moduli_dimension(p)
        target = (BetaValue.single(F(3, 2)) if b == 1 else BetaValue.pair(F(2), F(-1, 3)))
        d = data_from_beta(p, target)
        for _ in range(6):
            u = p.left.vector(p.ell, [F(rng.randint(-5, 5), rng.randint(1, 3))
                                      for _ in range(p.left.dim(p.ell))])
            assert beta_invariants(p, gauge_apply(u, d)) == target, tag


def test_psi_well_definedness_under_decomposition_change():
    # replacing a decomposition output by another valid one shifts it by an
    # intersection element, which kills admissible data
    p = make("3/2", 1, (4,), 7)
    left = p.left
    d = data_from_beta(p, BetaValue.single(F(4)))
    for rel in intersection_basis(5, left.c):
        v = left.act(rel.u1, d.omega1) + left.act(rel.u2, d.omega2)
        assert v.is_zero()
    for rel in intersection_basis(6, left.c):
        v = left.act(rel.u1, d.omega1) + left.act(rel.u2, d.omega2)
        assert v.is_zero()


def _admissible_space_dim(p):
    """dim of the admissible pairs inside the rank-(rho-1) submodule."""
    from virstag.staggered import _minsubmod_anchors, _anchor_vector

    left = p.left
    ell = p.ell
    span_vecs = []
    for g in _minsubmod_anchors(p):
        anchor = _anchor_vector(left, left.parent, g)
        for j in (1, 2):
            rel = ell - j - g
            if rel < 0:
                continue
            for mono in negative_basis(rel):
                span_vecs.append((j, left.act(mono, anchor)))
    # independent coordinates of the pair space
    dims = {1: left.dim(ell - 1), 2: left.dim(ell - 2)}
    cols = []
    for j, v in span_vecs:
        col = [0] * (max(dims[1], 0) + max(dims[2], 0))
        off = 0 if j == 1 else max(dims[1], 0)
        for i, x in enumerate(v.coords):
            col[off + i] = x
        cols.append(col)
    ncols = len(cols)
    if not ncols:
        return 0
    # rows: admissibility functionals
    rows = []
    for m in range(5, ell + 1):
        for rel in intersection_basis(m, left.c):
            per = []
            for j, v in span_vecs:
                per.append(left.act(rel.u1 if j == 1 else rel.u2, v))
            dim_out = left.dim(ell - m)
            for i in range(dim_out):
                rows.append([pv.coords[i] for pv in per])
    # dimension of the image of the span map intersected with the kernel
    span_matrix_rank = linalg.rank([list(c) for c in zip(*cols)], ncols) if cols else 0
    kernel_of_span = ncols - span_matrix_rank
    if rows:
        sol_rank = linalg.rank(rows, ncols)
    else:
        sol_rank = 0
    # solutions in coefficient space minus redundancy of the spanning set
    return (ncols - sol_rank) - kernel_of_span


def test_admissible_dimension_matches_classification():
    # dim D' = dim M_ell (single-generator cases), dim M_ell + 1 (two)
    p1 = make("2", 0, (), 3)
    from virstag.verma import find_singular

    parent = p1.left.parent
    span, _ = submodule_span(parent, [find_singular(parent, 1)], 3)
    assert _admissible_space_dim(p1) == len(span)

    p2 = make("3/2", 0, (), 5)
    parent = p2.left.parent
    span, _ = submodule_span(
        parent, [find_singular(parent, 1), find_singular(parent, 2)], 5)
    assert _admissible_space_dim(p2) == len(span) + 1
    # the worked example: 8-dimensional data, 6 gauges, 2 moduli
    assert _admissible_space_dim(p2) == 8
    assert len(span) - 1 == 6


def test_admissible_dimension_with_cap_functionals():
    # braid at t = 5/2 with omega0 = X_2^+ at grade 13: the minus-anchored
    # extra functionals are nonvacuous (grade gap 6), and the dimension still
    # comes out at dim M_ell + 1
    t = F(5, 2)
    st = classify(F(0), t, 14)
    assert [(e.grade, e.sign) for e in st.entries][:4] == [(1, -1), (4, 1), (7, -1), (13, 1)]
    p = make("5/2", 0, (), 13)
    assert moduli_dimension(p) == (2, "2p")
    from virstag.verma import find_singular

    parent = p.left.parent
    span, _ = submodule_span(
        parent, [find_singular(parent, 1), find_singular(parent, 4)], 13)
    assert _admissible_space_dim(p) == len(span) + 1
    target = BetaValue.pair(F(5, 3), F(-7))
    d = data_from_beta(p, target)
    assert beta_invariants(p, d) == target
    # the extra minus-anchored functionals vanish on admissible data
    vals = psi_values(p, d, 7)
    assert vals and all(v == 0 for v in vals)


# -- varpi and the oracle --------------------------------------------------------


def test_varpi_matches_oracle_witness():
    p = make("3/2", 0, (2,), 1, (4,))
    d = data_from_beta(p.right_verma_variant(), BetaValue.single(F(-1, 2)))
    w = oracle_singular(p, BetaValue.single(F(-1, 2)))
    assert w is not None
    pv = varpi(p, d, 0)
    assert pv == w[0]
    # and the witness is the displayed one
    got = p.left.parent.vector_to_element(p.left.lift(pv))
    assert got == elem(p.left.c, {((-3, 1), (-2, 1)): F(-32, 9),
                                  ((-4, 1), (-1, 1)): F(16, 3), ((-5, 1),): 2})


def test_varpi_inconsistent_for_wrong_beta():
    p = make("3/2", 0, (2,), 1, (4,))
    d = data_from_beta(p.right_verma_variant(), BetaValue.single(F(0)))
    with pytest.raises(InconsistentSystemError):
        varpi(p, d, 0)
    assert oracle_singular(p, BetaValue.single(F(0))) is None


def test_varpi_gap_zero():
    p = make("1", F(1, 4), (2,), F(1, 4), (2,))
    pv = varpi(p, p.zero_data(), 0)
    got = p.left.parent.vector_to_element(p.left.lift(pv))
    assert got == elem(p.left.c, {((-2, 1),): F(4, 3)})


# -- decisions ---------------------------------------------------------------------


def test_exists_unconstrained_cases():
    # right Verma: dimension b, no constraints
    for spec, want_b in ((("2", 0, (), 1), 1), (("3/2", 0, (), 5), 2), (("2", 0, (), 0), 0)):
        ans = exists(make(*spec))
        assert ans.status == "affine" and ans.beta_dim == want_b and not ans.constraints
    # g = 0: quotient right module, full beta space survives
    ans = exists(make("2", 0, (3,), 1, (5,)))
    assert ans.status == "affine" and ans.beta_dim == 1


def test_exists_critical_worked_values():
    ans = exists(make("2", 0, (3,), 1, (2,)))
    assert ans.point == (F(4, 5),)
    (c0,) = ans.constraints
    assert (c0.offset, c0.coeffs) == (F(12), (F(-15),))

    ans = exists(make("3/2", 0, (2,), 1, (4,)))
    assert ans.point == (F(-1, 2),)

    ans = exists(make("3/2", 0, (2,), 1, (6,)))
    assert ans.point == (F(1, 3),)

    ans = exists(make("3/2", 0, (2,), 1, (4, 6)))
    assert ans.status == "empty"


def test_exists_matches_oracle_on_fast_instances():
    p = make("3/2", 0, (2,), 1, (4,))
    assert oracle_singular(p, BetaValue.single(F(-1, 2))) is not None
    assert oracle_singular(p, BetaValue.single(F(1, 3))) is None
    p2 = make("2", 0, (3,), 1, (2,))
    assert oracle_singular(p2, BetaValue.single(F(4, 5))) is not None
    assert oracle_singular(p2, BetaValue.single(F(1))) is None
    p3 = make("2", 0, (3,), 1, (5,))
    for beta in (F(0), F(-1), F(7, 3)):
        assert oracle_singular(p3, BetaValue.single(beta)) is not None


def test_monotonicity_right_verma():
    # whenever the constrained answer is nonempty, the Verma-right variant is
    # nonempty with the same invariants available
    for spec in (("2", 0, (3,), 1, (2,)), ("3/2", 0, (2,), 1, (4,))):
        p = make(*spec)
        ans = exists(p)
        assert ans.status == "affine"
        rv = exists(p.right_verma_variant())
        assert rv.status == "affine" and rv.beta_dim == p.info.b


def test_gap_zero_decisions():
    # unique module for matching quotients at the right parameters
    p = make("1", F(1, 4), (2,), F(1, 4), (2,))
    assert exists(p).status == "affine"
    # (1,1) never admits one
    p11 = make("2", 0, (1,), 0, (1,))
    assert exists(p11).status == "empty"
    # prime generator with vanishing obstruction: (2,1) at t = 1
    h = kac_weight(KacLabel(2, 1), F(1))
    p21 = make("1", h, (2,), h, (2,))
    assert exists(p21).status == "affine"
    # same labels at t = 2: obstruction does not vanish
    h2 = kac_weight(KacLabel(2, 1), F(2))
    p21b = make("2", h2, (2,), h2, (2,))
    assert exists(p21b).status == "empty"


def test_gap_zero_unsupported_corner():
    # composite generator with a nonzero obstruction constant
    h = kac_weight(KacLabel(3, 1), F(1, 2))
    p = make("1/2", h, (3,), h, (3,))
    assert p.info.as_tuple() == (0, 0, 2, 0, 1, 1)
    with pytest.raises(UnsupportedConfigurationError):
        exists(p)


def test_rohsiepe_table_rows():
    rows = {(2, 1): {F(1), F(-1)}, (1, 1): set(),
            (6, 1): {F(1), F(-1), F(1, 2), F(-1, 2), F(1, 3), F(-1, 3)}}
    for (r, s), want in rows.items():
        for t in sorted(want):
            assert rohsiepe_exists(kac_weight(KacLabel(r, s), t), t), (r, s, t)
    # non-members: spot-check values where the criterion must fail
    assert not rohsiepe_exists(kac_weight(KacLabel(2, 1), F(2)), F(2))
    assert not rohsiepe_exists(kac_weight(KacLabel(1, 1), F(1)), F(1))


def test_generic_beta_bar_small_rows():
    from virstag.scalars import T_GEN

    t = T_GEN
    assert generic_beta_bar(1, 1) == 2
    assert generic_beta_bar(2, 1) == 4 * (t * t - 1)
    assert generic_beta_bar(2, 2) == -8 * (t ** -4) * (t * t - 1) ** 2 * (t * t - 4) * (4 * t * t - 1)


def test_realization_action_table():
    # the emitted finite action table satisfies the commutation relations on
    # its truncation and shows the rank-2 Jordan block of the zero mode
    from virstag.staggered import StaggeredRealization

    p = make("3/2", 0, (2,), 1)
    d = data_from_beta(p, BetaValue.single(F(-1, 2)))
    real = StaggeredRealization(p.left, F(1), p.omega0_vector(), d)
    tab = real.action_table(6)
    assert tab[0][1] == [[F(1), F(1)], [0, F(1)]]  # L_0 y = y + omega0

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
                 for j in range(len(b[0]))] for i in range(len(a))]

    for m, n, g in ((1, -1, 3), (2, -2, 4), (-1, 2, 4), (1, -2, 4)):
        A, B = tab[m].get(g - n), tab[n].get(g)
        A2, B2 = tab[n].get(g - m), tab[m].get(g)
        lhs = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(mul(A, B), mul(A2, B2))]
        central = F(m ** 3 - m, 12) * p.left.c if m + n == 0 else 0
        C = tab[m + n][g]
        want = [[(m - n) * C[i][j] + (central if (m + n == 0 and i == j) else 0)
                 for j in range(len(C[0]))] for i in range(len(C))]
        assert lhs == want, (m, n, g)


def test_gauge_by_omega0_is_identity():
    # the singular vector itself generates the trivial gauge transformation
    p = make("3/2", 0, (2,), 1)
    d = data_from_beta(p, BetaValue.single(F(2, 3)))
    w0 = p.omega0_vector()
    d2 = gauge_apply(w0, d)
    assert d2.omega1 == d.omega1 and d2.omega2 == d.omega2
