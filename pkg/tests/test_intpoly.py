import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfkernel.intpoly import (
    IntPoly,
    NonIntegerCoefficient,
    PolyParseError,
    ROOTS,
    bounded_by_congruences,
    bounded_by_parity,
    is_bounded_family,
    parity_profile,
    parse_poly,
    phase,
    residue_mod4,
    row_A1,
    row_A2,
    special_case_tag,
)

polys = st.lists(st.integers(-40, 40), min_size=1, max_size=7).map(lambda c: IntPoly(tuple(c)))

X, X2, TWO_X2 = IntPoly((0, 1)), IntPoly((0, 0, 1)), IntPoly((0, 0, 2))
I = 1j


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("x^2+2x", (0, 2, 1)),
        ("4x", (0, 4)),
        ("1,0,0", (0, 0, 1)),
        ("-x^3 + 2*x - 7", (-7, 2, 0, -1)),
        ("0", ()),
        ("x-x", ()),
    ],
)
def test_parse(text, coeffs):
    assert parse_poly(text).coeffs == coeffs


@pytest.mark.parametrize("bad", ["", "x^^", "x^2.5", "1.5x", "y", "2x^"])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        parse_poly(bad)


def test_non_integer_is_specific():
    with pytest.raises(NonIntegerCoefficient):
        parse_poly("0.5x")


def test_residue_examples():
    assert residue_mod4(X, -1) == 3
    assert residue_mod4(X2, -3) == 1
    assert residue_mod4(TWO_X2, -1) == 2


def test_row_examples():
    assert row_A1(X).values == (1, -I, -1, I)
    assert row_A1(X2).values == (1, I, 1, I)
    assert row_A1(IntPoly(())).values == (1, 1, 1, 1)
    assert row_A2(X2, 2).values == (I, 1, I, 1)
    assert row_A2(X, 4).values == (-I, 1, I, -1)


def test_bounded_examples():
    assert is_bounded_family(X2)
    assert not is_bounded_family(X)
    assert is_bounded_family(parse_poly("2x+4x^3"))


def test_special_tags():
    assert special_case_tag(parse_poly("0")) == "identity-plane-wave"
    assert special_case_tag(parse_poly("4x")) == "identity-plane-wave"
    assert special_case_tag(X) == "clifford-fourier"
    assert special_case_tag(TWO_X2) == "inverse-plane-wave"
    assert special_case_tag(X2) is None


@given(polys, st.integers(-50, 50))
def test_residue_matches_direct_evaluation(G, k):
    assert residue_mod4(G, k) == G(k) % 4
    assert phase(G, k) == ROOTS[G(k) % 4]


@given(polys)
def test_phase_at_minus_one_from_parity_sums(G):
    p = parity_profile(G)
    assert phase(G, -1) == ROOTS[(p.s0 + 3 * p.s1) % 4]
    assert phase(G, 3) == phase(G, -1)


@given(polys, st.integers(-20, 20))
def test_residue_is_periodic(G, k):
    assert residue_mod4(G, k) == residue_mod4(G, k + 4)


@given(polys)
def test_bounded_predicate_equals_congruences(G):
    for m in range(2, 8):
        assert bounded_by_parity(G) == bounded_by_congruences(G, m)


def test_bounded_equivalence_exhaustive_small_coefficients():
    # every coefficient pattern mod 4 up to degree 4 (the residue table only sees coefficients mod 4 and k mod 4)
    for c in np.ndindex(4, 4, 4, 4, 4):
        G = IntPoly(tuple(int(v) for v in c))
        assert bounded_by_parity(G) == bounded_by_congruences(G)


@given(polys)
def test_str_roundtrip(G):
    assert parse_poly(str(G)).coeffs == G.coeffs
    assert parse_poly(G.compact()).coeffs == G.coeffs
