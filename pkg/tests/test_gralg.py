"""Graded algebra arithmetic: signs, bases, derivations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdgacyc import gralg
from cdgacyc.gralg import (
    AlgebraError,
    Derivation,
    FreeCDGA,
    Generator,
    GradedAlgebra,
    monomial_degree,
    monomial_mul,
    poly_add,
    poly_mul,
    poly_scale,
)

X = Generator(0, "x", 2)
Y = Generator(1, "y", 3)
Z = Generator(2, "z", 3)
W = Generator(3, "w", 4)
ALG = GradedAlgebra([X, Y, Z, W])


def mono(*pairs):
    return tuple(pairs)


def test_odd_square_is_zero():
    assert monomial_mul(mono((Y, 1)), mono((Y, 1))) is None
    p = poly_mul({mono((Y, 1)): Fraction(1)}, {mono((Y, 1)): Fraction(1)})
    assert p == {}


def test_koszul_sign():
    yz = monomial_mul(mono((Y, 1)), mono((Z, 1)))
    zy = monomial_mul(mono((Z, 1)), mono((Y, 1)))
    assert yz == (1, mono((Y, 1), (Z, 1)))
    assert zy == (-1, mono((Y, 1), (Z, 1)))


def _random_poly(draw_monos):
    return {m: Fraction(c) for m, c in draw_monos if c}


monomials = st.builds(
    lambda ex, ey, ez, ew: tuple(
        (g, e) for g, e in ((X, ex), (Y, ey), (Z, ez), (W, ew)) if e
    ),
    st.integers(0, 3), st.integers(0, 1), st.integers(0, 1),
    st.integers(0, 2),
)
polys = st.dictionaries(monomials, st.integers(-4, 4), max_size=4).map(
    lambda d: {m: Fraction(c) for m, c in d.items() if c}
)


@given(polys, polys)
@settings(max_examples=150, deadline=None)
def test_graded_commutativity(p, q):
    pq = poly_mul(p, q)
    qp = poly_mul(q, p)
    # compare termwise with the Koszul sign of the homogeneous pieces
    for m, c in pq.items():
        assert m in qp or c == 0
    # bilinear check on homogeneous parts
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            a = poly_mul({m1: c1}, {m2: c2})
            b = poly_mul({m2: c2}, {m1: c1})
            sign = -1 if (monomial_degree(m1) % 2
                          and monomial_degree(m2) % 2) else 1
            assert a == poly_scale(sign, b)


@given(polys, polys, polys)
@settings(max_examples=100, deadline=None)
def test_associativity(p, q, r):
    assert poly_mul(poly_mul(p, q), r) == poly_mul(p, poly_mul(q, r))


def test_basis_counts():
    # degree 6 over x2, y3, z3, w4: x^3, xw, yz
    assert len(ALG.basis(6)) == 3
    assert len(ALG.basis(0)) == 1
    assert len(ALG.basis(1)) == 0
    # generating-function cross-check through degree 12
    import itertools
    for n in range(13):
        count = 0
        for ex, ew in itertools.product(range(7), range(4)):
            for ey, ez in itertools.product(range(2), range(2)):
                if 2 * ex + 3 * ey + 3 * ez + 4 * ew == n:
                    count += 1
        assert len(ALG.basis(n)) == count


def test_degree_zero_generator_needs_bound():
    a = GradedAlgebra([Generator(0, "t", 0)])
    with pytest.raises(AlgebraError):
        a.basis(0)
    assert len(a.basis(0, counted={0}, max_count=2)) == 3


def test_counted_basis_truncation():
    # count y and z exponents, allow at most one of them in total
    monos = ALG.basis(6, counted={1, 2}, max_count=0)
    assert all(all(g.uid not in (1, 2) for g, _ in m) for m in monos)


D = Derivation(
    ALG, 1,
    {"y": {mono((X, 2)): Fraction(1)}, "z": {mono((X, 2)): Fraction(2)}},
)


@given(polys, polys)
@settings(max_examples=100, deadline=None)
def test_derivation_leibniz(p, q):
    lhs = D.apply(poly_mul(p, q))
    rhs = {}
    for m1, c1 in p.items():
        sign = -1 if monomial_degree(m1) % 2 else 1
        rhs = poly_add(
            rhs,
            poly_mul(D.apply({m1: c1}), q),
        )
        rhs = poly_add(
            rhs,
            poly_scale(sign, poly_mul({m1: c1}, D.apply(q))),
        )
    assert lhs == rhs


def test_derivation_squares_to_zero_is_enforced():
    g2 = Generator(0, "a", 2)
    g3 = Generator(1, "b", 3)
    with pytest.raises(AlgebraError):
        # d(b) = a^2 requires d(a^2) = 0; make d(a) nonzero of degree 3
        FreeCDGA([g2, g3], {
            "a": {((g3, 1),): Fraction(1)},
            "b": {((g2, 2),): Fraction(1)},
        })


def test_derivation_degree_check():
    with pytest.raises(AlgebraError):
        Derivation(ALG, 1, {"y": {mono((X, 1)): Fraction(1)}})


def test_free_cdga_rejects_nonpositive_degrees():
    with pytest.raises(AlgebraError):
        FreeCDGA([Generator(0, "u", 0)], {})


def test_simply_connected():
    assert FreeCDGA([X, Y], {"y": {mono((X, 2)): Fraction(1)}}) \
        .is_simply_connected()
    assert not FreeCDGA([Generator(0, "t", 1)], {}).is_simply_connected()
