import pytest

from gkcert.errors import IrreducibilityUndecided, NotPrime, Reducible, UnsafePrime
from gkcert.intpoly import IntPoly, from_vector
from gkcert.numberfield import (
    SplittingType,
    cyclotomic_field,
    is_totally_split,
    make_field,
    splitting_type,
)
from gkcert.numutil import euler_phi, kronecker, multiplicative_order, primes_upto

GAUSSIAN = make_field(IntPoly([1, 0, 1]))


def test_make_field_examples():
    assert GAUSSIAN.degree == 2 and GAUSSIAN.signature == (0, 1) and GAUSSIAN.poly_disc == -4
    cubic = make_field(from_vector([-12, -26, 0]))
    assert cubic.degree == 3 and cubic.signature == (3, 0)
    with pytest.raises(Reducible):
        make_field(IntPoly([-6, 5, 0, 1]))  # root X = 1
    with pytest.raises(Reducible):
        make_field(IntPoly([1, 2, 1]))  # (X+1)^2, disc = 0


def test_pattern_certification_a4_style():
    # Galois group A4 admits no irreducible reduction; the (2,2)/(1,3)
    # pattern crossing still certifies.  x^4 + 8x + 12 is the classic A4 quartic.
    F = make_field(IntPoly([12, 8, 0, 0, 1]))
    assert F.degree == 4


def test_undecided_for_biquadratic():
    # x^4 + 1 has Galois group (Z/8)^* = C2 x C2: every reduction factors,
    # and degree 2 survives every pattern, so certification must refuse.
    with pytest.raises(IrreducibilityUndecided):
        make_field(IntPoly([1, 0, 0, 0, 1]))
    # the cyclotomic constructor covers that family soundly
    assert cyclotomic_field(8).degree == 4


def test_splitting_examples():
    assert splitting_type(GAUSSIAN, 5).entries == ((1, 1), (1, 1))
    assert splitting_type(GAUSSIAN, 3).entries == ((1, 2),)
    z7 = cyclotomic_field(7)
    assert splitting_type(z7, 2).entries == ((1, 3), (1, 3))
    with pytest.raises(NotPrime):
        splitting_type(GAUSSIAN, 9)


def test_totally_split():
    assert is_totally_split(GAUSSIAN, 13)
    assert not is_totally_split(GAUSSIAN, 7)
    assert is_totally_split(cyclotomic_field(5), 11)


def test_quadratic_reciprocity_small():
    for d in (2, 3, -1, -2, 10, -15, 21):
        F = make_field(IntPoly([-d, 0, 1]))
        disc = d if d % 4 == 1 else 4 * d
        for p in primes_upto(60):
            if p == 2 or d % p == 0:
                continue
            st = splitting_type(F, p)
            symbol = kronecker(disc, p)
            if symbol == 1:
                assert st.entries == ((1, 1), (1, 1))
            else:
                assert st.entries == ((1, 2),)


def test_cyclotomic_order_law_small():
    for m in (5, 8, 9, 12):
        F = cyclotomic_field(m)
        for p in primes_upto(40):
            if m % p == 0:
                continue
            st = splitting_type(F, p)
            f = multiplicative_order(p, m)
            assert st.residue_degrees == tuple([f] * (euler_phi(m) // f))
            assert st.degree_sum == F.degree


def test_ramified_quadratic():
    F = make_field(IntPoly([-15, 0, 1]))
    assert splitting_type(F, 5).entries == ((2, 1),)
    assert splitting_type(F, 3).entries == ((2, 1),)


def test_unsafe_prime_dedekind():
    # x^2 - 12: Z[theta] has index 2 in the maximal order (12 = 4*3);
    # Dedekind's criterion must refuse p = 2 rather than misreport it.
    F = make_field(IntPoly([-12, 0, 1]))
    with pytest.raises(UnsafePrime):
        splitting_type(F, 2)
    # but p = 2 stays fine for x^2 - 3 itself
    F3 = make_field(IntPoly([-3, 0, 1]))
    assert splitting_type(F3, 2).certified


def test_splitting_type_invariants():
    st = SplittingType(p=5, entries=((1, 2), (1, 1)), certified=False)
    assert st.entries == ((1, 1), (1, 2))  # sorted
    assert st.degree_sum == 3 and not st.is_totally_split
