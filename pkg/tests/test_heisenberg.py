import itertools
import random

import pytest

from sbcubic._linalg import rank
from sbcubic.field import frobenius, make_field
from sbcubic.projlin import Mat3, ProjMat, ProjPoint, act_point, veronese3
from sbcubic.cubic import CubicForm, fermat, inflection_points, is_smooth, xyz
from sbcubic.hesse import build_EI, psi
from sbcubic.heisenberg import (
    GL2_F3, SL2_F3, NotSkewPair, SGroup, commutator_exponent, conjugation_matrix, fixed_pencil,
    hesse_identity_check, inflections_to_S, normalizer_generators, normalizer_group,
    pairing_transport, pencil_orbits, random_conjugate, s_to_inflections, standard_pair,
    verify_normalizer_element,
)

F7 = make_field(7)
F13 = make_field(13)


def test_commutator_examples(S7):
    x, y = S7.pair.x, S7.pair.y
    assert commutator_exponent(x, y) == 1
    assert commutator_exponent(x, x) == 0
    assert commutator_exponent(x, y @ y) == 2
    assert commutator_exponent(y, x) == 2
    with pytest.raises(NotSkewPair):
        commutator_exponent(x, Mat3([[1, 1, 0], [0, 1, 0], [0, 0, 1]], F7))


def test_pairing_bilinear_alternating(S7):
    table = S7.pairing_table()
    keys = sorted(S7.elements)
    for i, s in enumerate(keys):
        assert table[i][i] == 0
        for j, t in enumerate(keys):
            assert table[i][j] == S7.pairing(s, t) == (-table[j][i]) % 3
    assert any(any(r) for r in table)


def test_heisenberg_group_order(S7):
    # cubes of the standard lifts are 1, so they generate the order-27 Heisenberg group
    x, y = S7.pair.x, S7.pair.y
    assert (x ** 3).is_scalar() and (x ** 3) == Mat3.identity(F7) and (y ** 3) == Mat3.identity(F7)
    seen, frontier = {Mat3.identity(F7)}, [Mat3.identity(F7)]
    while frontier:
        nxt = []
        for h in frontier:
            for g in (x, y):
                if g @ h not in seen:
                    seen.add(g @ h)
                    nxt.append(g @ h)
        frontier = nxt
    assert len(seen) == 27


def test_standard_inflections(S7):
    cfg = s_to_inflections(S7.pair)
    assert cfg == inflection_points(fermat(F7))
    assert ProjPoint(1, 3, 0, spec=F7) in cfg.points
    # S acts simply transitively
    for P in cfg.points:
        assert sorted(act_point(s, P) for s in S7) == sorted(cfg.points)


def test_round_trip_and_equivariance(S13):
    rng = random.Random(5)
    base = s_to_inflections(S13)
    for _ in range(10):
        g, S1 = random_conjugate(S13, rng)
        cfg1 = s_to_inflections(S1)
        assert set(cfg1.points) == {act_point(g, P) for P in base.points}
        assert inflections_to_S(cfg1).same_as(S1)
        assert s_to_inflections(inflections_to_S(cfg1)) == cfg1


def test_inflections_to_S_translations(S7):
    cfg = s_to_inflections(S7)
    E = build_EI(cfg)
    S = inflections_to_S(cfg)
    assert S.same_as(S7)
    assert sorted(psi(E, s) for s in S) == list(range(9))


def test_frobenius_stable_over_F25():
    F25 = make_field(5, 2)
    S = SGroup(standard_pair(F25))
    cfg = s_to_inflections(S)
    fr = lambda P: ProjPoint(tuple(frobenius(c) for c in P.coords))
    assert {fr(P) for P in cfg.points} == set(cfg.points)
    x = S.pair.x
    fx = ProjMat(Mat3([[frobenius(c) for c in r] for r in x.rows]))
    assert fx == S.elements[2, 0]


def test_normalizer_generators(S7):
    gens = normalizer_generators(S7)
    assert set(gens) == set(SL2_F3) and len(gens) == 24
    for abcd, g in gens.items():
        assert verify_normalizer_element(S7, g, abcd)
        assert conjugation_matrix(S7, g) == abcd
    assert gens[1, 0, 0, 1] in S7
    N = normalizer_group(S7)
    assert len(N) == 216
    cfg = s_to_inflections(S7)
    assert all(cfg.permutation_of(g) is not None for g in N)


def test_fixed_pencil(S7):
    pencil = fixed_pencil(S7)
    span = {pencil.member(p) for p in itertools.product(F7.elements(), repeat=2) if any(p)}
    assert xyz(F7) in span and fermat(F7) in span
    assert pencil.parameter(CubicForm.from_dict({(2, 1, 0): 1}, F7)) is None
    cfg = s_to_inflections(S7)
    for f in span:
        assert all(not f(P) for P in cfg.points)
    assert hesse_identity_check(F7) and hesse_identity_check(F13)


def test_pencil_is_everything_through_I(S13):
    rng = random.Random(2)
    for _ in range(3):
        _, S = random_conjugate(S13, rng)
        cfg = s_to_inflections(S)
        rows = [list(veronese3(P)) for P in cfg.points]
        assert rank(rows, cfg.spec) == 8
        pencil = fixed_pencil(S)
        for f in pencil.basis:
            fb = f.embed(cfg.spec)
            assert all(not fb(P) for P in cfg.points)


def test_conjugated_pencil_invariant(S7):
    rng = random.Random(9)
    _, S = random_conjugate(S7, rng)
    pencil = fixed_pencil(S)
    from sbcubic.projlin import substitute_cubic
    for f in pencil.basis:
        for s in S:
            assert pencil.parameter(substitute_cubic(s, f)) == pencil.parameter(f)


def test_pencil_orbits_F13(S13):
    orbits = pencil_orbits(S13, fixed_pencil(S13))
    assert sum(o["size"] for o in orbits) == 14
    singular = [o for o in orbits if not o["smooth"]]
    assert sum(o["size"] for o in singular) == 4
    by_j = {int(o["j"].c[0]): o["size"] for o in orbits if o["smooth"]}
    assert by_j == {0: 4, 1728 % 13: 6}
    fermat_orbit = next(o for o in orbits if o["smooth"] and int(o["j"].c[0]) == 0)
    pencil = fixed_pencil(S13)
    assert any(pencil.member(p) == fermat(F13) for p in fermat_orbit["members"])


def test_pairing_transport(S7):
    pencil = fixed_pencil(S7)
    f = pencil.member(F7.one(), F7.elem(3))
    assert is_smooth(f)
    rows = pairing_transport(S7, f)
    assert len(rows) == 81
    assert all(c == w for _, _, c, w in rows)


def test_gl2_lists():
    assert len(GL2_F3) == 48 and len(SL2_F3) == 24
