import itertools
import random

import numpy as np
import pytest

from sbcubic.field import make_field
from sbcubic.projlin import ProjPoint
from sbcubic.cubic import CubicForm, WeierstrassCurve, count_points, fermat, flex_points, inflection_points, is_smooth, j_invariant, torsion3
from sbcubic.hesse import EIGroup, aff_group, canonical_cocycle, translations
from sbcubic.heisenberg import (
    GL2_F3, SL2_F3, SGroup, random_conjugate, s_to_inflections, standard_pair,
)
from sbcubic.cohomology import (
    GaloisSetup, InvalidModule, NoEquivariantIso, NotStable, curve_cocycle, cyclic_group,
    descent_construct, equivariant_isomorphisms, frobenius_module, generators, h1,
    h1_bruteforce, inflation_restriction_dims, is_cocycle, is_coboundary, matrix_group_f3,
    natural_module, nullspace3, phi_realized, sl2_structure, subgroup, trivial_module,
    unique_gamma_check,
)
from sbcubic.acceptance import f5_target, f7_full_torsion

F5, F7 = make_field(5), make_field(7)


def sub_matrix_group(mats):
    G = matrix_group_f3(GL2_F3)
    members = [G.index[m] for m in mats]
    H, _ = subgroup(G, members)
    return H, [np.array([[m[0], m[1]], [m[2], m[3]]]) for m in H.elements]


def small_cases():
    """(name, group, action) pairs for groups of order <= 24."""
    out = []
    for n in (1, 2, 3, 6, 9):
        G = cyclic_group(n)
        out.append((f"C{n}-trivial", G, trivial_module(G)))
    G = cyclic_group(3)
    sh = np.array([[1, 1], [0, 1]])
    out.append(("C3-shear", G, [np.linalg.matrix_power(sh, k) % 3 for k in range(3)]))
    G = cyclic_group(2)
    out.append(("C2-neg", G, [np.eye(2, dtype=np.int64), 2 * np.eye(2, dtype=np.int64)]))
    out.append(("C2-diag", G, [np.eye(2, dtype=np.int64), np.diag([2, 1])]))
    G = matrix_group_f3(SL2_F3)
    out.append(("SL2-natural", G, natural_module(G)))
    out.append(("SL2-trivial", G, trivial_module(G)))
    # upper unitriangular and Borel subgroups
    U = [m for m in GL2_F3 if m[2] == 0 and m[0] == 1 and m[3] == 1]
    Bor = [m for m in GL2_F3 if m[2] == 0]
    for name, mats in (("U", U), ("Borel", Bor)):
        H, act = sub_matrix_group(mats)
        out.append((name, H, act))
    return out


@pytest.mark.parametrize("name,G,action", small_cases(), ids=lambda v: v if isinstance(v, str) else "")
def test_h1_matches_bruteforce(name, G, action):
    assert h1(G, action).dim == h1_bruteforce(G, action)


def test_h1_examples():
    G = matrix_group_f3(SL2_F3)
    assert h1(G, natural_module(G)).dim == 0
    # E(I) acting trivially on itself: Hom(F3^2, F3^2)
    cfg = inflection_points(fermat(F7))
    E = EIGroup(cfg)
    d = canonical_cocycle(cfg, translations(E), group=E)
    assert h1(d.group, d.action).dim == 4
    assert h1(cyclic_group(1), trivial_module(cyclic_group(1))).dim == 0
    # a cyclic group of order prime to 3 has no cohomology
    assert h1(cyclic_group(2), trivial_module(cyclic_group(2))).dim == 0
    assert h1(cyclic_group(3), trivial_module(cyclic_group(3))).dim == 2


def test_h1_cocycles_against_all_pairs():
    G = matrix_group_f3(GL2_F3)
    act = natural_module(G)
    res = h1(G, act)
    for z in res.z1:
        assert is_cocycle(G, act, z)
    # all-pairs solve of the cocycle identity gives the same dimension
    n = len(G)
    rows = []
    for g, h in itertools.product(range(n), repeat=2):
        for r in range(2):
            row = np.zeros(2 * n, dtype=np.int64)
            row[2 * G.table[g, h] + r] += 1
            row[2 * h:2 * h + 2] -= act[g][r]
            row[2 * g + r] -= 1
            rows.append(row % 3)
    assert len(nullspace3(np.array(rows), 2 * n)) == res.dim_z1


def test_invalid_module():
    G = cyclic_group(2)
    with pytest.raises(InvalidModule):
        h1(G, [np.eye(2, dtype=np.int64), np.array([[1, 1], [0, 1]])])
    with pytest.raises(InvalidModule):
        h1(G, [np.eye(2, dtype=np.int64)])


def test_is_coboundary():
    G = matrix_group_f3(SL2_F3)
    act = natural_module(G)
    m = np.array([1, 2])
    z = np.array([(A @ m - m) % 3 for A in act])
    sol = is_coboundary(G, act, z)
    assert sol is not None
    assert all(np.array_equal((A @ sol - sol) % 3, zz) for A, zz in zip(act, z))
    G3 = cyclic_group(3)
    z = np.array([[0, 0], [1, 0], [2, 0]])
    assert is_cocycle(G3, trivial_module(G3), z)
    assert is_coboundary(G3, trivial_module(G3), z) is None


def test_inflation_restriction():
    G = matrix_group_f3(GL2_F3)
    act = natural_module(G)
    normal = [G.index[m] for m in SL2_F3]
    a, b = inflation_restriction_dims(G, act, normal)
    assert a == b == 0
    # Aff(I) with the translation subgroup: M^N = M, G/N = GL2(F3) acting naturally
    cfg = inflection_points(fermat(F7))
    E = EIGroup(cfg)
    aff, _ = aff_group(cfg, E)
    d = canonical_cocycle(cfg, aff, group=E)
    trans = [d.group.index[t] for t in translations(E)]
    a, b = inflation_restriction_dims(d.group, d.action, trans)
    assert a == b
    # nonzero inflation: every hom C9 -> F3^2 kills 3*C9, so all of H^1 is inflated from C3
    G9 = cyclic_group(9)
    a, b = inflation_restriction_dims(G9, trivial_module(G9), [0, 3, 6])
    assert a == b == 2
    G3x = cyclic_group(6)
    a, b = inflation_restriction_dims(G3x, trivial_module(G3x), [0, 3])
    assert a == b == 2


def test_unique_gamma():
    rep = unique_gamma_check(inflection_points(fermat(F7)))
    for name, order in (("SAff", 216), ("Aff", 432)):
        r = rep[name]
        assert r["order"] == order and r["cocycle"] and r["restricts_to_identity"] and r["unique"]
    assert rep["no_element_of_order_9"] and rep["max_element_order"] < 9


def test_sl2_structure():
    r = sl2_structure()
    assert r["order"] == 24 and r["Q_order"] == 8
    assert r["Q_normal"] and r["Q_unique_involution"] and r["Q_nonabelian"] and r["semidirect"]


def test_generators_generate():
    G = matrix_group_f3(GL2_F3)
    gens = generators(G)
    assert len(gens) <= 3
    assert h1(G, natural_module(G), gens=gens).dim == h1(G, natural_module(G)).dim


# -- Frobenius ----------------------------------------------------------------------

def standard_S(p):
    k = 1 if p % 3 == 1 else 2
    return SGroup(standard_pair(make_field(p, k)))


def test_frobenius_module_examples():
    r = frobenius_module(GaloisSetup(F7), standard_S(7))
    assert r["S"] == (1, 0, 0, 1)
    r = frobenius_module(GaloisSetup(F5, 2), standard_S(5))
    assert r["S"] == (2, 0, 0, 1)
    for p in (5, 7, 11, 13):
        r = frobenius_module(GaloisSetup(make_field(p)), standard_S(p))
        assert (r["det"] == 2) == (p % 3 == 2)


def test_frobenius_not_stable():
    S = standard_S(5)
    rng = random.Random(4)
    for _ in range(20):
        _, S1 = random_conjugate(S, rng)
        try:
            frobenius_module(GaloisSetup(F5, 2), S1)
        except NotStable:
            return
    pytest.fail("no unstable conjugate found")


def test_curve_cocycle_rational_flex():
    f = fermat(F5)
    r = curve_cocycle(GaloisSetup(F5), f, ProjPoint(1, 4, 0, spec=F5))
    assert r["is_cocycle"] and r["equals_pullback"]
    assert not r["vectors"].any()
    # a non-rational flex gives a nonzero cocycle that is a coboundary
    fld, pts = flex_points(f)
    P = next(P for P in pts if GaloisSetup(F5).sigma_point(P) != P)
    r = curve_cocycle(GaloisSetup(F5), f, P)
    assert r["is_cocycle"] and r["equals_pullback"] and r["vectors"].any()
    assert r["rational_flex"] and r["coboundary"] is not None


def test_curve_cocycle_no_rational_flex():
    rng = random.Random(0)
    setup = GaloisSetup(F5)
    for _ in range(200):
        f = CubicForm([rng.randrange(5) for _ in range(10)], F5)
        if not f or not is_smooth(f):
            continue
        fld, pts = flex_points(f)
        if any(setup.sigma_point(P) == P for P in pts):
            continue
        r = curve_cocycle(setup, f)
        assert r["is_cocycle"] and r["equals_pullback"]
        assert not r["rational_flex"] and r["coboundary"] is None
        # another base flex gives a cohomologous cocycle
        r2 = curve_cocycle(setup, f, pts[3])
        G = cyclic_group(r["field_degree"])
        E = r["group"]
        assert r2["group"].cfg == E.cfg
        diff = (r2["vectors"] - r["vectors"]) % 3
        act = [E.linear_matrix(tuple(E.cfg.index(setup.sigma_point(Q, k)) for Q in E.cfg.points))
               for k in range(r["field_degree"])]
        assert is_coboundary(G, act, diff) is not None
        return
    pytest.fail("no cubic without a rational flex found")


def test_curve_cocycle_rejects_non_rational():
    F25 = make_field(5, 2)
    f = CubicForm([F25.elem((0, 1))] + [0] * 5 + [1, 0, 0, 1], F25)
    with pytest.raises(ValueError):
        curve_cocycle(GaloisSetup(F5), f)


# -- descent ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def descent_f5():
    S = standard_S(5)
    return S, descent_construct(GaloisSetup(F5), S, f5_target())


def test_descent_f5(descent_f5):
    S, res = descent_f5
    C = res.curve
    assert C.spec == F5 and is_smooth(C)
    tr = res.transcripts[0]
    assert tr["ok"] and tr["fixed_by_frobenius"] and tr["frobenius_matches"]
    assert tr["frobenius_on_jacobian_3_torsion"] == (2, 0, 0, 1)
    assert count_points(C) == count_points(f5_target())
    assert j_invariant(C) == f5_target().j()
    cfg = s_to_inflections(S)
    assert all(not C.embed(cfg.spec)(P) for P in cfg.points)


def test_descent_round_trip(descent_f5):
    S, res = descent_f5
    tr = res.transcripts[0]
    phi = tr["phis"][0]["phi"]
    again = descent_construct(GaloisSetup(F5), S, f5_target(), phi=phi)
    assert j_invariant(again.curve) == j_invariant(res.curve)
    assert phi_realized(S, s_to_inflections(S), again.curve, f5_target(), phi)


def test_descent_f7_all_phi():
    S = standard_S(7)
    E = f7_full_torsion()
    setup = GaloisSetup(F7)
    _, phis = equivariant_isomorphisms(setup, S, E)
    assert len(phis) == 24
    res = descent_construct(setup, S, E)
    cfg = s_to_inflections(S)
    assigned = {}
    for tr in res.transcripts:
        assert tr["ok"] and tr["phi_realized"]
        for r in tr["phis"]:
            assigned[r["phi"]] = tr["curve"]
    assert set(assigned) == set(phis)
    # phi_realized discriminates: a phi is realized on its own curve only
    for phi, C in assigned.items():
        for D in res.curves:
            assert phi_realized(S, cfg, D, E, phi) == (D == C)


def test_descent_wrong_phi_rejected():
    S = standard_S(7)
    E = f7_full_torsion()
    _, phis = equivariant_isomorphisms(GaloisSetup(F7), S, E)
    P1, P2 = phis[0]
    with pytest.raises(NoEquivariantIso):
        descent_construct(GaloisSetup(F7), S, E, phi=(P2, P1))  # inverts the pairing


def test_no_equivariant_iso():
    # over F7 a curve without rational 3-torsion cannot match the all-rational S
    S = standard_S(7)
    E = WeierstrassCurve(0, 0, 0, 1, 1, F7)
    assert torsion3(E)[0] != F7
    with pytest.raises(NoEquivariantIso):
        descent_construct(GaloisSetup(F7), S, E)
