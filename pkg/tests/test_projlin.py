import random

import pytest
from hypothesis import given, strategies as st

from sbcubic.field import make_field
from sbcubic.projlin import (
    MONOMIALS, Mat3, ProjError, ProjLine, ProjMat, ProjPoint, act_line, act_point, all_lines,
    all_points, collinear, eigen_planes, invariant_lines_bruteforce, line_through, meet,
    projective_frame_matrix, substitute_cubic, sym3_matrix, veronese3,
)
from sbcubic.cubic import CubicForm

F7 = make_field(7)


def random_mat(spec, rng):
    while True:
        m = Mat3([[rng.randrange(spec.p) for _ in range(3)] for _ in range(3)], spec)
        if m.det():
            return m


def test_normalization():
    P = ProjPoint(3, 6, 0, spec=F7)
    assert P == ProjPoint(1, 2, 0, spec=F7)
    with pytest.raises(ProjError):
        ProjPoint(0, 0, 0, spec=F7)


def test_counts():
    assert len(all_points(F7)) == 57
    assert len(all_lines(F7)) == 57


def test_act_point_example():
    m = Mat3.diag(1, 2, 4, F7)
    assert act_point(m, ProjPoint(1, 3, 0, spec=F7)) == ProjPoint(1, 6, 0, spec=F7)


def test_veronese_example():
    v = veronese3(ProjPoint(1, 2, 0, spec=F7))
    assert [int(c.c[0]) for c in v] == [1, 2, 0, 4, 0, 0, 1, 0, 0, 0]


def test_monomial_order_fixed():
    assert MONOMIALS[0] == (3, 0, 0) and MONOMIALS[4] == (1, 1, 1) and MONOMIALS[9] == (0, 0, 3)
    assert len(set(MONOMIALS)) == 10


def test_line_meet():
    P, Q = ProjPoint(1, 0, 0, spec=F7), ProjPoint(0, 1, 0, spec=F7)
    L = line_through(P, Q)
    assert L == ProjLine(0, 0, 1, spec=F7)
    assert meet(L, ProjLine(1, 0, 0, spec=F7)) == Q
    assert collinear(P, Q, ProjPoint(1, 1, 0, spec=F7))


def test_eigen_planes_diagonal():
    m = Mat3.diag(1, 2, 4, F7)
    planes = eigen_planes(m)
    assert planes == sorted(ProjLine(*e, spec=F7) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert sorted(planes) == sorted(invariant_lines_bruteforce(m))


def test_eigen_planes_over_extension():
    # cyclic permutation over F5 has eigenvalues the cube roots of unity, in F25
    F5 = make_field(5)
    m = Mat3([[0, 0, 1], [1, 0, 0], [0, 1, 0]], F5)
    planes = eigen_planes(m)
    assert len(planes) == 3 and planes[0].spec.order == 25
    for L in planes:
        assert act_line(m.embed(L.spec), L) == L
    # only the rational plane x+y+z=0 is visible over F5
    assert invariant_lines_bruteforce(m) == [ProjLine(1, 1, 1, spec=F5)]


def test_eigen_planes_rejects():
    with pytest.raises(ProjError):
        eigen_planes(Mat3.identity(F7))
    with pytest.raises(ProjError):
        eigen_planes(Mat3([[1, 1, 0], [0, 1, 0], [0, 0, 1]], F7))


def test_frame_matrix():
    rng = random.Random(1)
    src = [ProjPoint(*e, spec=F7) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]]
    m = random_mat(F7, rng)
    dst = [act_point(m, P) for P in src]
    assert ProjMat(projective_frame_matrix(src, dst)) == ProjMat(m)


@given(st.integers(0, 2 ** 32))
def test_incidence_preserved(seed):
    rng = random.Random(seed)
    m = random_mat(F7, rng)
    pts = all_points(F7)
    P, L = rng.choice(pts), rng.choice(all_lines(F7))
    assert L.contains(P) == act_line(m, L).contains(act_point(m, P))


@given(st.integers(0, 2 ** 32))
def test_projmat_group(seed):
    rng = random.Random(seed)
    a, b = ProjMat(random_mat(F7, rng)), ProjMat(random_mat(F7, rng))
    assert (a @ a.inverse()).is_identity()
    assert ProjMat(a.mat * F7.elem(3)) == a
    P = rng.choice(all_points(F7))
    assert act_point(a @ b, P) == act_point(a, act_point(b, P))


@given(st.integers(0, 2 ** 32))
def test_sym3_matches_veronese(seed):
    rng = random.Random(seed)
    m = random_mat(F7, rng)
    S = sym3_matrix(m)
    P = rng.choice(all_points(F7))
    v = veronese3(P)
    img = [sum((S[a][b] * v[b] for b in range(10)), F7.zero()) for a in range(10)]
    # proportional to veronese3(m P)
    w = veronese3(act_point(m, P))
    k = next(i for i in range(10) if w[i])
    assert all(img[i] * w[k] == w[i] * img[k] for i in range(10))


@given(st.integers(0, 2 ** 32))
def test_substitute_moves_zero_set(seed):
    rng = random.Random(seed)
    m = random_mat(F7, rng)
    f = CubicForm([rng.randrange(7) for _ in range(10)], F7)
    if not f:
        return
    g = substitute_cubic(m, f)
    for P in all_points(F7):
        assert (not f(P)) == (not g(act_point(m, P)))
