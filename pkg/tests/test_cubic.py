import itertools
import random

import pytest

from sbcubic.field import make_field
from sbcubic.projlin import Mat3, ProjPoint, act_point, all_points, collinear, substitute_cubic
from sbcubic.cubic import (
    CubicForm, NotTorsion, ReducibleDegenerate, SingularCurve, WeierstrassCurve, chord_add, chord_neg,
    count_points, fermat, flex_points, flex_to_weierstrass, hesse_form, hessian, inflection_points,
    is_smooth, j_invariant, third_intersection, torsion3, weil3, weil3_by_definition, xyz,
)

F7 = make_field(7)
F13 = make_field(13)


def P7(*c):
    return ProjPoint(*c, spec=F7)


def random_smooth(spec, rng):
    while True:
        f = CubicForm([rng.randrange(spec.p) for _ in range(10)], spec)
        if f and is_smooth(f):
            return f


def brute_singular(f):
    # exhaustive over F_{p^2}, enough to witness a singular point of the forms used here
    big = make_field(f.spec.p, 2)
    g = f.embed(big)
    return any(not g(P) and not any(g.gradient(P)) for P in all_points(big))


def test_hessian_examples():
    assert hessian(fermat(F7)) == xyz(F7)
    assert hessian(xyz(F7)) == xyz(F7)


def test_hessian_covariance():
    rng = random.Random(3)
    f = random_smooth(F7, rng)
    for _ in range(5):
        m = Mat3([[rng.randrange(7) for _ in range(3)] for _ in range(3)], F7)
        if not m.det():
            continue
        assert hessian(substitute_cubic(m, f)) == substitute_cubic(m, hessian(f))


def test_smoothness_examples():
    assert is_smooth(fermat(F7))
    assert not is_smooth(xyz(F7))
    assert not is_smooth(hesse_form(F7, -3))  # x^3+y^3+z^3-3xyz


@pytest.mark.parametrize("seed", range(6))
def test_smoothness_against_scan(seed):
    rng = random.Random(seed)
    f = CubicForm([rng.randrange(5) for _ in range(10)], make_field(5))
    if f:
        if not is_smooth(f):
            return  # a singular point may live beyond F25
        assert not brute_singular(f)


def test_hesse_member_singular_values():
    # lam*xyz + x^3+y^3+z^3 is singular exactly when lam^3 = -27
    for lam in range(7):
        f = hesse_form(F7, lam)
        assert is_smooth(f) == ((lam ** 3 + 27) % 7 != 0)


def test_fermat_inflections():
    cfg = inflection_points(fermat(F7))
    rho = [1, 2, 4]
    want = set()
    for r in rho:
        want |= {P7(0, 1, -r), P7(1, 0, -r), P7(1, -r, 0)}
    assert set(cfg.points) == want
    assert len(cfg.triples) == 12


def test_hesse_pencil_same_inflections():
    base = set(inflection_points(fermat(F7)).points)
    for lam in (3, 5, 6):
        assert set(inflection_points(hesse_form(F7, lam)).points) == base


def test_third_intersection_examples():
    f = fermat(F7)
    assert third_intersection(f, P7(1, 3, 0), P7(1, 5, 0)) == P7(1, 6, 0)
    O = P7(1, 6, 0)
    assert third_intersection(f, O, O) == O


def test_third_intersection_tangent_nonflex():
    f = CubicForm.from_dict({(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): -1}, F7)  # y^2 z = x^3 + z^3
    P = next(P for P in all_points(F7) if not f(P) and P[2] and P[1] and P[0])
    R = third_intersection(f, P, P)
    assert R != P and not f(R)
    assert collinear(P, R, third_intersection(f, P, R)) and third_intersection(f, P, R) == P


def test_reducible_line():
    f = CubicForm.from_dict({(2, 0, 1): 1, (0, 2, 1): 1, (0, 0, 3): 1}, F7)  # z (x^2+y^2+z^2)
    with pytest.raises(ReducibleDegenerate):
        third_intersection(f, P7(1, 0, 0), P7(0, 1, 0))


def test_chord_add_examples():
    f = fermat(F7)
    O = P7(1, 6, 0)
    assert chord_add(f, O, P7(1, 3, 0), P7(1, 5, 0)) == O
    P = P7(0, 1, 6)
    assert chord_add(f, O, O, P) == P
    assert chord_add(f, O, P, chord_neg(f, O, P)) == O


def test_chord_associative_exhaustive():
    f = CubicForm.from_dict({(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): -1}, F7)
    O = P7(0, 1, 0)
    pts = [P for P in all_points(F7) if not f(P)]
    for P, Q, R in itertools.product(pts, repeat=3):
        assert chord_add(f, O, chord_add(f, O, P, Q), R) == chord_add(f, O, P, chord_add(f, O, Q, R))
        assert chord_add(f, O, P, Q) == chord_add(f, O, Q, P)


def test_count_example():
    f = CubicForm.from_dict({(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): -1}, F7)
    assert count_points(f) == 12
    W = WeierstrassCurve(0, 0, 0, 0, 1, F7)
    assert count_points(W) == 12
    assert len(W.points()) == 12


def test_weierstrass_examples():
    f = fermat(F7)
    W, M = flex_to_weierstrass(f, P7(1, -1, 0))
    assert W.j() == 0
    assert j_invariant(f) == 0
    assert j_invariant(CubicForm.from_dict({(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -1}, F7)) == F7.elem(1728)
    W0 = WeierstrassCurve(0, 0, 0, 0, 1, F7)
    W1, _ = flex_to_weierstrass(W0.cubic(), P7(0, 1, 0))
    assert W1 == W0


def test_singular_weierstrass_rejected():
    with pytest.raises(SingularCurve):
        WeierstrassCurve(0, 0, 0, 0, 0, F7)
    with pytest.raises(SingularCurve):
        j_invariant(xyz(F7))


@pytest.mark.parametrize("seed", range(8))
def test_reduction_is_group_iso(seed):
    rng = random.Random(seed)
    f = random_smooth(F7, rng)
    _, flexes = flex_points(f)
    O = flexes[0]
    W, M = flex_to_weierstrass(f, O)
    spec = O.spec
    fb = f.embed(spec)
    assert act_point(M, O) == W.identity(spec)
    pts = [P for P in all_points(spec) if not fb(P)][:8] if spec.order <= 49 else []
    for P, Q in itertools.product(pts, repeat=2):
        assert act_point(M, chord_add(fb, O, P, Q)) == W.add(act_point(M, P), act_point(M, Q))
    if spec == F7:
        assert count_points(f) == count_points(W)
    # flex independence of j
    for F in flexes[1:4]:
        assert flex_to_weierstrass(f, F)[0].j() == W.j()


@pytest.mark.parametrize("seed", range(10))
def test_hasse_and_invariance(seed):
    rng = random.Random(seed)
    f = random_smooth(F13, rng)
    n = count_points(f)
    assert (n - 14) ** 2 <= 4 * 13
    m = Mat3([[rng.randrange(13) for _ in range(3)] for _ in range(3)], F13)
    if m.det():
        assert j_invariant(substitute_cubic(m, f)) == j_invariant(f)
        assert count_points(substitute_cubic(m, f)) == n


def test_weil_pairing_exhaustive():
    W = WeierstrassCurve(0, 0, 0, 0, 2, F7)  # full 3-torsion over F7
    big, E = torsion3(W)
    assert big == F7 and len(E) == 9
    one = F7.one()
    table = {(P, Q): weil3(W, P, Q) for P in E for Q in E}
    for P in E:
        assert table[P, P] == one
        assert table[P, W.neg(P)] == one
    for P, P2, Q in itertools.product(E, repeat=3):
        assert table[W.add(P, P2), Q] == table[P, Q] * table[P2, Q]
    # nondegenerate: only O pairs trivially with everything
    for P in E:
        trivial = all(table[P, Q] == one for Q in E)
        assert trivial == (P == W.identity())
    # independent oracle straight from the definition
    for P, Q in itertools.product(E[:5], E[:5]):
        assert weil3_by_definition(W, P, Q) == table[P, Q]


def test_weil_pairing_galois():
    # over F5 the torsion lives in an extension; the pairing commutes with Frobenius
    from sbcubic.field import frobenius
    W = WeierstrassCurve(0, 0, 0, 1, 1, make_field(5))
    big, E = torsion3(W)
    fr = lambda P: ProjPoint(tuple(frobenius(c) for c in P.coords))
    for P, Q in itertools.product(E[1:4], E[4:7]):
        assert frobenius(weil3(W, P, Q)) == weil3(W, fr(P), fr(Q))


def test_weil_rejects_non_torsion():
    W = WeierstrassCurve(0, 0, 0, 0, 1, F7)
    P = next(P for P in W.points() if W.mul(3, P) != W.identity())
    with pytest.raises(NotTorsion):
        weil3(W, P, P)
