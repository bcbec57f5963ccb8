import random
from fractions import Fraction

import pytest

from gkcert.characters import (
    Parity,
    character_table,
    fixed_dim,
    idempotent,
    induced_character,
    inner_product,
    odd_characters,
    parity,
    verify_character_table,
)
from gkcert.cyclotomic import CycNumber
from gkcert.errors import NotASubgroup, ScaleExceeded, TauNotCentralInvolution
from gkcert.groups import (
    abelian_group,
    dihedral_group,
    group_from_table,
    quaternion_group,
    subgroup_embedding,
)
from helpers import dicyclic12_group, permutation_group, sl23_group, supported_groups


def test_c2_table():
    table = character_table(abelian_group([2]))
    values = sorted(tuple(v.as_int() for v in ch.values) for ch in table)
    assert values == [(1, -1), (1, 1)]


def test_q8_table_and_parity():
    q8 = quaternion_group()
    table = character_table(q8)
    assert [ch.degree for ch in table] == [1, 1, 1, 1, 2]
    two = table[-1]
    assert two.value_at(1) == -2  # the central involution column
    assert parity(two, 1) is Parity.ODD
    assert all(parity(ch, 1) is Parity.EVEN for ch in table[:4])
    verify_character_table(table)


def test_d6_table():
    d6 = dihedral_group(6)
    table = character_table(d6)
    assert sorted(ch.degree for ch in table) == [1, 1, 1, 1, 2, 2]
    assert sum(ch.degree**2 for ch in table) == 12
    verify_character_table(table)
    # odd 2-dim character: chi(a) = zeta_6 + zeta_6^-1 = 1, chi(a^3) = -2
    odd2 = [ch for ch in odd_characters(table, 3) if ch.degree == 2]
    assert len(odd2) == 1
    assert odd2[0].value_at(1) == 1 and odd2[0].value_at(3) == -2


def test_parity_requires_central_involution():
    d6 = dihedral_group(6)
    chi = character_table(d6)[0]
    with pytest.raises(TauNotCentralInvolution):
        parity(chi, 6)


def test_deterministic_row_order():
    g1 = group_from_table(dihedral_group(4).table)
    t1 = character_table(g1)
    t2 = character_table(group_from_table(dihedral_group(4).table))
    assert [[(v.num, v.den) for v in ch.values] for ch in t1] == [
        [(v.num, v.den) for v in ch.values] for ch in t2
    ]
    assert [ch.degree for ch in t1] == [1, 1, 1, 1, 2]


def test_dixon_matches_closed_forms():
    # the modular route on a raw D4 table must agree with the closed form
    raw = character_table(group_from_table(dihedral_group(4).table))
    closed = character_table(dihedral_group(4))
    raw_keys = [[v.sort_key(4) for v in ch.values] for ch in raw]
    closed_keys = [[v.sort_key(4) for v in ch.values] for ch in closed]
    assert raw_keys == closed_keys


def test_dixon_bigger_groups():
    for G, degrees in (
        (permutation_group(3), [1, 1, 2]),
        (permutation_group(4, even_only=True), [1, 1, 1, 3]),
        (dicyclic12_group(), [1, 1, 1, 1, 2, 2]),
        (sl23_group(), [1, 1, 1, 2, 2, 2, 3]),
    ):
        table = character_table(G)
        assert sorted(ch.degree for ch in table) == degrees
        verify_character_table(table)


def test_scale_bound():
    with pytest.raises(ScaleExceeded):
        character_table(abelian_group([65]))


def test_fixed_dim_examples():
    d6 = dihedral_group(6)
    table = character_table(d6)
    for ch in table:
        assert fixed_dim(ch, {0}) == ch.degree
        trivial = all(v == 1 for v in ch.values)
        assert fixed_dim(ch, range(12)) == (1 if trivial else 0)
    odd2 = [ch for ch in odd_characters(table, 3) if ch.degree == 2][0]
    assert fixed_dim(odd2, {0, 6}) == 1  # (2 + 0)/2
    with pytest.raises(NotASubgroup):
        fixed_dim(table[0], {0, 1})


def test_induction_examples():
    c2 = abelian_group([2])
    H, emb = subgroup_embedding(c2, {0})
    ind = induced_character(c2, emb, character_table(H)[0])
    assert ind.value_at(0).as_int() == 2 and ind.value_at(1).as_int() == 0
    d6 = dihedral_group(6)
    Hb, embb = subgroup_embedding(d6, {0, 6})
    triv = [c for c in character_table(Hb) if all(v == 1 for v in c.values)][0]
    ind_b = induced_character(d6, embb, triv)
    assert ind_b.value_at(0).as_int() == 6  # [D6 : <b>]


def test_frobenius_reciprocity_oracle():
    rng = random.Random(77)
    pool = [g for g in supported_groups(24) if g.order <= 24]
    checked = 0
    while checked < 100:
        G = pool[rng.randrange(len(pool))]
        subs = G.all_subgroups()
        H_set = subs[rng.randrange(len(subs))]
        H, emb = subgroup_embedding(G, H_set)
        triv = [c for c in character_table(H) if all(v == 1 for v in c.values)][0]
        ind = induced_character(G, emb, triv)
        for chi in character_table(G):
            lhs = inner_product(ind, chi)
            assert lhs.is_rational
            assert lhs.as_fraction() == fixed_dim(chi, H_set)
        checked += 1


def test_idempotents():
    c2 = abelian_group([2])
    coeffs = sorted(
        tuple(c.as_fraction() for c in idempotent(ch).coeffs) for ch in character_table(c2)
    )
    assert coeffs == [(Fraction(1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(1, 2))]
    d6 = dihedral_group(6)
    idems = [idempotent(ch) for ch in character_table(d6)]
    for i, ei in enumerate(idems):
        assert ei.algebra_mul(ei).coeffs == ei.coeffs  # e^2 = e
        for j in range(i):
            assert ei.algebra_mul(idems[j]).is_zero  # distinct idempotents kill each other


def test_idempotent_orthogonality_order_16():
    G = abelian_group([4, 4])
    idems = [idempotent(ch) for ch in character_table(G)]
    rng = random.Random(5)
    for _ in range(20):
        i, j = rng.randrange(16), rng.randrange(16)
        prod = idems[i].algebra_mul(idems[j])
        if i == j:
            assert prod.coeffs == idems[i].coeffs
        else:
            assert prod.is_zero


def test_contragredient():
    z = character_table(abelian_group([5]))
    chi = next(ch for ch in z if ch.values[1] == CycNumber.zeta(5))
    assert chi.contragredient().values[1] == CycNumber.zeta(5, 4)
