import itertools

import pytest
from hypothesis import given, strategies as st

from sbcubic.field import (
    FieldError, UniPoly, common_field, cube_roots_of_unity, embed, factor_unipoly,
    frobenius, in_subfield, make_field, primitive_cube_root, restrict, roots,
)


def monic_irreducible_quadratics(p):
    # x^2 + b x + c has no root in F_p
    for c, b in itertools.product(range(p), range(p)):
        if all((x * x + b * x + c) % p for x in range(p)):
            yield (c, b, 1)


def test_prime_field(F7):
    assert F7.order == 7 and F7.n == 1
    assert F7.elem(10) == F7.elem(3)


def test_modulus_is_least_irreducible():
    for p in (5, 7):
        F = make_field(p, 2)
        least = min(monic_irreducible_quadratics(p))
        assert tuple(F.modulus) == least


def test_rejects_bad_characteristic():
    for p in (9, 2, 3):
        with pytest.raises(FieldError):
            make_field(p)


def test_cube_roots():
    F7 = make_field(7)
    assert sorted(int(r.c[0]) for r in cube_roots_of_unity(F7)) == [1, 2, 4]
    assert [int(r.c[0]) for r in cube_roots_of_unity(make_field(5))] == [1]
    F25 = make_field(5, 2)
    cr = cube_roots_of_unity(F25)
    scan = [x for x in F25.elements() if x ** 3 == F25.one()]
    assert sorted(cr) == sorted(scan) and len(cr) == 3
    assert not in_subfield(primitive_cube_root(F25), make_field(5))


def test_factor_examples(F7):
    x3m1 = UniPoly(F7, [-1, 0, 0, 1])
    fs = factor_unipoly(x3m1)
    assert sorted(tuple(int(c.c[0]) for c in f.coeffs) for f in fs) == [(3, 1), (5, 1), (6, 1)]
    assert len(factor_unipoly(UniPoly(F7, [1, 0, 1]))) == 1
    lin = UniPoly(F7, [3, 1])
    assert factor_unipoly(lin) == [lin]


def test_frobenius_examples(F7, F25):
    a = F7.elem(3)
    assert frobenius(a) == a
    rho = primitive_cube_root(F25)
    assert frobenius(rho) == rho * rho
    for x in F25.elements():
        assert frobenius(x, 2) == x


@pytest.mark.parametrize("p,n", [(7, 2), (5, 2), (5, 3), (11, 2), (13, 1)])
def test_inverses_exhaustive(p, n):
    F = make_field(p, n)
    for a in F.elements():
        if a:
            assert a * a.inverse() == F.one()


@pytest.mark.parametrize("p,n", [(7, 2), (5, 3), (5, 4)])
def test_frobenius_fixed_field(p, n):
    F = make_field(p, n)
    fixed = [a for a in F.elements() if frobenius(a) == a]
    assert len(fixed) == p
    assert all(in_subfield(a, make_field(p)) for a in fixed)


def test_cube_root_group_order():
    for p, n in [(5, 1), (7, 1), (5, 2), (11, 2), (11, 1), (13, 1)]:
        F = make_field(p, n)
        cr = cube_roots_of_unity(F)
        from math import gcd
        assert len(cr) == gcd(3, F.order - 1)
        assert all(a * b in cr for a in cr for b in cr)


def test_embedding_roundtrip():
    F7, F49 = make_field(7), make_field(7, 2)
    for a in F7.elements():
        b = embed(a, F49)
        assert restrict(b, F7) == a
    big = common_field(make_field(7, 2), make_field(7, 3))
    assert big.n == 6


elems7_2 = st.tuples(st.integers(0, 6), st.integers(0, 6))


@given(elems7_2, elems7_2, elems7_2)
def test_field_axioms(a, b, c):
    F = make_field(7, 2)
    a, b, c = F.elem(a), F.elem(b), F.elem(c)
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)


@given(st.lists(st.integers(0, 12), min_size=2, max_size=13), st.integers(0, 2 ** 16))
def test_factor_multiplies_back(coeffs, seed):
    F = make_field(13)
    f = UniPoly(F, coeffs)
    if f.degree < 1:
        return
    fs = factor_unipoly(f, seed=seed)
    prod = UniPoly(F, [f.lead()])
    for g in fs:
        prod = prod * g
    assert prod.coeffs == f.coeffs
    assert all(g.lead() == F.one() for g in fs)


@given(st.lists(st.integers(0, 6), min_size=2, max_size=8))
def test_roots_against_scan(coeffs):
    F = make_field(7)
    f = UniPoly(F, coeffs)
    if f.degree < 1:
        return
    assert sorted(set(roots(f))) == sorted(x for x in F.elements() if not f(x))
