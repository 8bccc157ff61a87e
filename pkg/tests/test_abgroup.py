import pytest

from gsla.errors import NoSuchRoot, NotHomomorphism
from gsla.fields import Cyclotomic, PrimeField, Rationals
from gsla.groups import (
    FinAbGroup,
    GroupIso,
    QuotientGroup,
    all_subgroups,
    annihilator,
    character_coset_reps,
    character_group_order_multiset,
    character_matrix,
    characters,
    fixed_subgroup,
    full_subgroup,
    order_multiset,
    subgroup_generate,
    trivial_subgroup,
)

Q = Rationals()
Z2xZ2 = FinAbGroup((2, 2))
Z4 = FinAbGroup((4,))
Z6 = FinAbGroup((6,))
Z2xZ4 = FinAbGroup((2, 4))


def test_subgroup_generate():
    assert subgroup_generate(Z2xZ2, []).sorted_elements() == [(0, 0)]
    assert subgroup_generate(Z2xZ2, [(1, 1)]).sorted_elements() == [(0, 0), (1, 1)]
    assert subgroup_generate(Z4, [(2,)]).sorted_elements() == [(0,), (2,)]


def test_all_subgroups_z2xz2():
    subs = all_subgroups(Z2xZ2)
    assert [s.order for s in subs] == [1, 2, 2, 2, 4]


def test_characters_z2_over_rationals():
    Z2 = FinAbGroup((2,))
    chars = characters(Z2, Q)
    assert len(chars) == 2
    values = sorted(tuple(f.value(a) for a in Z2.elements()) for f in chars)
    assert values == [(1, -1), (1, 1)]


def test_characters_z2xz2_over_Qi():
    K = Cyclotomic(4)
    chars = characters(Z2xZ2, K)
    assert len(chars) == 4
    for f in chars:
        for a in Z2xZ2.elements():
            assert f.value(a) in (K.one(), K.neg(K.one()))
    # pointwise products stay in the list (group closure)
    keys = {f.exponents for f in chars}
    for f in chars:
        for g in chars:
            assert f.mul(g).exponents in keys


def test_characters_no_root():
    Z3 = FinAbGroup((3,))
    with pytest.raises(NoSuchRoot):
        characters(Z3, PrimeField(3))


@pytest.mark.parametrize("group,field", [
    (Z2xZ2, Cyclotomic(4)),
    (Z4, Cyclotomic(4)),
    (Z6, Cyclotomic(6)),
    (Z2xZ4, Cyclotomic(4)),
])
def test_character_group_isomorphic_to_group(group, field):
    chars = characters(group, field)
    assert len(chars) == group.order
    # abelian groups are determined by their element-order multisets
    assert character_group_order_multiset(chars) == order_multiset(group)


@pytest.mark.parametrize("group,field", [
    (Z2xZ2, Cyclotomic(4)),
    (Z4, Cyclotomic(4)),
    (Z6, Cyclotomic(6)),
    (Z2xZ4, Cyclotomic(4)),
])
def test_annihilator_index_formula(group, field):
    chars = characters(group, field)
    for P in all_subgroups(group):
        perp = annihilator(chars, P)
        assert len(chars) // len(perp) == P.order
        # double annihilator recovers P
        assert fixed_subgroup(group, perp).elements == P.elements


def test_annihilator_edge_cases():
    K = Cyclotomic(4)
    chars = characters(Z2xZ2, K)
    assert len(annihilator(chars, trivial_subgroup(Z2xZ2))) == 4
    assert len(annihilator(chars, full_subgroup(Z2xZ2))) == 1
    P = subgroup_generate(Z2xZ2, [(1, 0)])
    perp = annihilator(chars, P)
    assert all(f.exponents[0] == 0 for f in perp)
    assert len(chars) // len(perp) == 2


def test_character_matrix_z2():
    Z2 = FinAbGroup((2,))
    chars = characters(Z2, Q)
    m = character_matrix(Q, chars, [(0,), (1,)], alpha=(0,))
    rows = sorted(m.rows)
    assert rows == sorted([[Q.one(), Q.one()], [Q.one(), Q.neg(Q.one())]])
    assert m.rank() == 2


def test_character_matrix_trivial_and_z4():
    chars1 = characters(FinAbGroup((1,)), Q)
    m1 = character_matrix(Q, chars1, [(0,)])
    assert m1.rows == [[Q.one()]]
    K = Cyclotomic(4)
    chars = characters(Z4, K)
    m = character_matrix(K, chars, Z4.elements(), alpha=(0,))
    assert m.rank() == 4


def test_quotient_reps_are_lex_least():
    P = subgroup_generate(Z2xZ2, [(1, 1)])
    qm = QuotientGroup.make(Z2xZ2, P)
    assert qm.reps == ((0, 0), (0, 1))
    assert qm.rep((1, 0)) == (0, 1)
    assert qm.rep((1, 1)) == (0, 0)


def test_character_coset_reps():
    K = Cyclotomic(4)
    chars = characters(Z2xZ2, K)
    P = subgroup_generate(Z2xZ2, [(1, 0)])
    perp = annihilator(chars, P)
    reps = character_coset_reps(chars, perp)
    assert len(reps) == P.order


def test_group_iso_validation():
    Z2 = FinAbGroup((2,))
    GroupIso.from_table(Z2, Z2, {(0,): (0,), (1,): (1,)})
    with pytest.raises(NotHomomorphism):
        GroupIso.from_table(Z2, Z2, {(0,): (1,), (1,): (0,)})
    neg = GroupIso.from_table(Z4, Z4, {(k,): ((-k) % 4,) for k in range(4)})
    P = subgroup_generate(Z4, [(2,)])
    assert neg.maps_subgroup_onto(P, P)
