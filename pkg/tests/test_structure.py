from fractions import Fraction as F

import pytest

from virstag.scalars import KacLabel, T_GEN, kac_weight
from virstag.structure import IncompatibleError, classify, left_right_compatible
from virstag.verma import HWModule, VermaModule, find_singular_element


def test_classify_braid_c0():
    st = classify(F(0), F(3, 2), 16)
    assert st.kind == "braid"
    assert [(e.grade, e.sign, e.rank) for e in st.entries] == [
        (1, -1, 1), (2, 1, 1), (5, -1, 2), (7, 1, 2), (12, -1, 3), (15, 1, 3)]


def test_classify_chain_cminus2():
    st = classify(F(0), F(2), 11)
    assert st.kind == "chain"
    assert [(e.grade, e.rank) for e in st.entries] == [(1, 1), (3, 2), (6, 3), (10, 4)]


def test_classify_chain_t1():
    st = classify(F(1, 4), F(1), 5)
    assert st.kind == "chain"
    assert st.entries[0].grade == 2


def test_classify_point():
    assert classify(F(1, 3), F(2), 12).kind == "point"


def test_classify_symbolic_link():
    h = kac_weight(KacLabel(2, 3), T_GEN)
    st = classify(h, T_GEN, 10)
    assert st.kind == "link"
    assert [(e.grade, e.rank) for e in st.entries] == [(6, 1)]
    assert classify(T_GEN + 7, T_GEN, 8).kind == "point"


def test_classified_grades_carry_singular_vectors_and_no_others():
    for h, t in ((F(0), F(3, 2)), (F(0), F(2)), (F(1), F(3, 2))):
        mod = VermaModule.get(h, t)
        grades = set(classify(h, t, 10).grades())
        for n in range(1, 11):
            found = find_singular_element(mod, n) is not None
            assert found == (n in grades), (h, t, n)


def test_negative_t_lattices_are_finite():
    st = classify(F(0), F(-1), 40)
    assert st.kind == "chain"
    assert st.grades() == [1]
    # braid degenerate ending: unpaired minus entry
    st2 = classify(F(0), F(-3, 2), 40)
    assert st2.kind == "braid"
    assert [(e.grade, e.sign) for e in st2.entries] == [(1, -1)]


def test_positive_t_chain_extends_past_any_bound():
    state_small = classify(F(0), F(2), 10)
    state_big = classify(F(0), F(2), 22)
    assert len(state_big.entries) > len(state_small.entries)
    assert [e.grade for e in state_big.entries[:4]] == [e.grade for e in state_small.entries]


def test_compatible_worked_tuples():
    t = F(2)
    left = HWModule.get(VermaModule.get(F(0), t), (3,))
    right = HWModule.get(VermaModule.get(F(1), t), (5,))
    assert left_right_compatible(left, right).as_tuple() == (1, 1, 2, 1, 0, 1)

    t = F(3, 2)
    left = HWModule.get(VermaModule.get(F(0), t), (2,))
    right = HWModule.get(VermaModule.get(F(1), t), (4,))
    assert left_right_compatible(left, right).as_tuple() == (1, 1, 1, 1, 1, 1)


def test_compatible_rejections():
    t = F(2)
    # omega0 killed by the left quotient
    left = HWModule.get(VermaModule.get(F(0), t), (1,))
    right = HWModule.get(VermaModule.get(F(1), t), ())
    with pytest.raises(IncompatibleError):
        left_right_compatible(left, right)
    # non-integer weight gap
    left2 = HWModule.get(VermaModule.get(F(0), t), ())
    right2 = HWModule.get(VermaModule.get(F(1, 2), t), ())
    with pytest.raises(IncompatibleError):
        left_right_compatible(left2, right2)
    # Verma left with a quotient right contradicts the annihilation condition
    left3 = HWModule.get(VermaModule.get(F(0), t), ())
    right3 = HWModule.get(VermaModule.get(F(1), t), (2,))
    with pytest.raises(IncompatibleError):
        left_right_compatible(left3, right3)
    # mismatched parameters
    left4 = HWModule.get(VermaModule.get(F(0), F(2)), ())
    right4 = HWModule.get(VermaModule.get(F(1), F(3, 2)), ())
    with pytest.raises(IncompatibleError):
        left_right_compatible(left4, right4)


def test_lattice_json_shape():
    st = classify(F(0), F(3, 2), 7)
    data = st.to_json()
    assert data["type"] == "braid"
    assert data["grades"][0] == {"grade": 1, "sign": "-", "rank": 1}
