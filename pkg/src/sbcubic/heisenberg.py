"""Skew-commuting pairs in GL_3, the translation group S they generate, and
its relation to inflection configurations and the Hesse pencil."""

from __future__ import annotations

import itertools

from ._linalg import nullspace, rref
from .cubic import CubicForm, fermat, is_smooth, j_invariant, xyz
from .field import (
    FieldSpec, UniPoly, common_field, cube_roots_of_unity, embed, make_field,
    primitive_cube_root, roots,
)
from .hesse import EIGroup, InflectionConfig
from .projlin import (
    MONOMIALS, Mat3, ProjError, ProjMat, ProjPoint, collinear, eigen_planes, eigenvectors,
    meet, projective_frame_matrix, restrict_projmat, substitute_cubic,
)


class NotSkewPair(ValueError):
    pass


SL2_F3 = tuple(m for m in itertools.product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3 == 1)
GL2_F3 = tuple(m for m in itertools.product(range(3), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 3)


def commutator_value(x: Mat3, y: Mat3):
    """The scalar c with x y = c y x."""
    if x.spec != y.spec:
        spec = common_field(x.spec, y.spec)
        x, y = x.embed(spec), y.embed(spec)
    xy, yx = (x @ y).flat(), (y @ x).flat()
    k = next(i for i in range(9) if yx[i])
    c = xy[k] / yx[k]
    if any(a != c * b for a, b in zip(xy, yx)):
        raise NotSkewPair("commutator is not scalar")
    if c ** 3 != 1:
        raise NotSkewPair("commutator is not a cube root of unity")
    return c


def commutator_exponent(x, y) -> int:
    """i with x y = rho^i y x, for the canonical rho of the matrices' field."""
    x = x.mat if isinstance(x, ProjMat) else x
    y = y.mat if isinstance(y, ProjMat) else y
    c = commutator_value(x, y)
    for i, r in enumerate(cube_roots_of_unity(c.spec)):
        if c == r:
            return i
    raise NotSkewPair("commutator is not a cube root of unity")  # pragma: no cover


class HeisenbergPair:
    """Lifts x, y in GL_3 with scalar cubes and x y = rho y x."""

    __slots__ = ("x", "y")

    def __init__(self, x: Mat3, y: Mat3):
        if x.spec != y.spec:
            spec = common_field(x.spec, y.spec)
            x, y = x.embed(spec), y.embed(spec)
        if not (x ** 3).is_scalar() or not (y ** 3).is_scalar():
            raise NotSkewPair("cubes are not scalar")
        if commutator_exponent(x, y) != 1:
            raise NotSkewPair("pair does not satisfy x y = rho y x")
        self.x, self.y = x, y

    @property
    def spec(self):
        return self.x.spec

    @property
    def rho(self):
        return primitive_cube_root(self.spec)

    def conjugate(self, g) -> "HeisenbergPair":
        g = g.mat if isinstance(g, ProjMat) else g
        if g.spec != self.spec:
            spec = common_field(g.spec, self.spec)
            g = g.embed(spec)
            return HeisenbergPair(g @ self.x.embed(spec) @ g.inverse(), g @ self.y.embed(spec) @ g.inverse())
        gi = g.inverse()
        return HeisenbergPair(g @ self.x @ gi, g @ self.y @ gi)

    def embed(self, target):
        return HeisenbergPair(self.x.embed(target), self.y.embed(target))

    def __repr__(self):
        return f"HeisenbergPair({self.x!r}, {self.y!r})"


def standard_pair(spec: FieldSpec) -> HeisenbergPair:
    """x = diag(1, rho, rho^2) and the cyclic shift e_i -> e_{i+1}."""
    rho = primitive_cube_root(spec)
    x = Mat3.diag(spec.one(), rho, rho * rho)
    z, o = spec.zero(), spec.one()
    y = Mat3([[z, z, o], [o, z, z], [z, o, z]])
    return HeisenbergPair(x, y)


class SGroup:
    """The order-9 subgroup of PGL_3 generated by a Heisenberg pair; element
    (a, b) is x^a y^b."""

    def __init__(self, pair: HeisenbergPair):
        self.pair = pair
        self.elements = {}
        for a in range(3):
            for b in range(3):
                self.elements[a, b] = ProjMat(pair.x ** a @ pair.y ** b)
        if len(set(self.elements.values())) != 9:
            raise NotSkewPair("x and y do not generate a group of order 9")
        self._coords = {m: k for k, m in self.elements.items()}

    @property
    def spec(self):
        return self.pair.spec

    @property
    def x(self):
        return self.elements[1, 0]

    @property
    def y(self):
        return self.elements[0, 1]

    def as_set(self):
        return frozenset(self.elements.values())

    def __iter__(self):
        return iter(self.elements.values())

    def coords(self, m: ProjMat):
        if m.spec != self.spec:
            m = m.embed(self.spec)
        return self._coords[m]

    def __contains__(self, m):
        if m.spec != self.spec:
            try:
                m = m.embed(self.spec)
            except Exception:
                return False
        return m in self._coords

    def lift(self, a: int, b: int) -> Mat3:
        return self.pair.x ** (a % 3) @ self.pair.y ** (b % 3)

    def pairing(self, s, t) -> int:
        """Commutator exponent of two elements given by coordinates."""
        return (s[0] * t[1] - s[1] * t[0]) % 3

    def same_as(self, other: "SGroup") -> bool:
        spec = common_field(self.spec, other.spec)
        return ({m.embed(spec) for m in self} == {m.embed(spec) for m in other})

    def pairing_table(self):
        keys = sorted(self.elements)
        return [[commutator_exponent(self.lift(*s), self.lift(*t)) for t in keys] for s in keys]

    def to_json(self):
        keys = sorted(self.elements)
        return {"elements": [self.elements[k].to_json() for k in keys],
                "coords": [list(k) for k in keys],
                "generators": [keys.index((1, 0)), keys.index((0, 1))],
                "pairing": self.pairing_table()}


def _as_pair(S):
    if isinstance(S, SGroup):
        return S.pair
    return S


def s_to_inflections(S) -> InflectionConfig:
    """The nine points V_i meet W_j for the invariant planes of x and y."""
    pair = _as_pair(S)
    px, py = eigen_planes(pair.x), eigen_planes(pair.y)
    spec = common_field(px[0].spec, py[0].spec)
    pts = [meet(L.embed(spec), M.embed(spec)) for L in px for M in py]
    return InflectionConfig.from_points(pts)


def _general_position_frame(cfg: InflectionConfig):
    for rest in itertools.combinations(range(2, 9), 2):
        idx = (0, 1) + rest
        if not any(collinear(*(cfg.points[i] for i in t)) for t in itertools.combinations(idx, 3)):
            return idx
    raise ProjError("no four points in general position")  # pragma: no cover


def translation_matrices(cfg: InflectionConfig, group: EIGroup | None = None):
    """For each class a of E(I), the ProjMat inducing translation by a."""
    E = group or EIGroup(cfg)
    idx = _general_position_frame(cfg)
    out = {}
    for a in range(9):
        perm = E.translation(a)
        src = [cfg.points[i] for i in idx]
        dst = [cfg.points[perm[i]] for i in idx]
        m = ProjMat(projective_frame_matrix(src, dst))
        if cfg.permutation_of(m) != perm:
            raise ProjError("translation of I is not induced by a collineation")
        out[a] = m
    return out


def inflections_to_S(cfg: InflectionConfig, group: EIGroup | None = None) -> SGroup:
    """The translations of I as a subgroup of PGL_3, generated by the lifts
    of translation by alpha and beta (beta replaced by 2 beta if needed so
    that x y = rho y x)."""
    E = group or EIGroup(cfg)
    mats = translation_matrices(cfg, E)
    x, y = mats[E.alpha].mat, mats[E.beta].mat
    e = commutator_exponent(x, y)
    if e == 0:
        raise NotSkewPair("translations commute in GL_3")
    if e == 2:
        y = y @ y
    return SGroup(HeisenbergPair(x, y))


# -- normalizer -------------------------------------------------------------------

def _cube_root(c):
    """(field, root) for a cube root of c in the smallest extension containing one."""
    spec = c.spec
    poly = UniPoly(spec, [-c, 0, 0, 1])
    for k in (1, 3):
        big = make_field(spec.p, spec.n * k)
        rs = roots(poly.map_coeffs(lambda a: embed(a, big), big))
        if rs:
            return big, rs[0]
    raise ArithmeticError("no cube root found")  # pragma: no cover


def _cyclic_frame(x: Mat3, y: Mat3):
    """(B, c, field): B has columns w, y w, y^2 w for an eigenvector w of x,
    and y^3 = c."""
    lam, w = eigenvectors(x)[0]
    spec = lam.spec
    ys = y.embed(spec)
    cols = [list(w.coords)]
    for _ in range(2):
        cols.append(list(ys @ cols[-1]))
    return Mat3.from_columns(cols), (ys ** 3).scalar_value()


def conjugator(S: SGroup, x1: Mat3, y1: Mat3) -> ProjMat:
    """A g with g x g^-1 ~ x1 and g y g^-1 ~ y1 (requires x1 y1 = rho y1 x1)."""
    x, y = S.pair.x, S.pair.y
    B, c = _cyclic_frame(x, y)
    B1, c1 = _cyclic_frame(x1, y1)
    spec = common_field(B.spec, B1.spec)
    ratio = embed(c, spec) / embed(c1, spec)
    big, delta = _cube_root(ratio)
    D = Mat3.diag(big.one(), delta, delta * delta)
    g = B1.embed(big) @ D @ B.embed(big).inverse()
    return ProjMat(g)


def _prefer_rational(S: SGroup, g: ProjMat) -> ProjMat:
    """Among g s (s in S) pick the least one defined over S's field, if any."""
    spec = S.spec
    cands = []
    for s in S:
        h = g @ s.embed(g.spec)
        r = restrict_projmat(h, spec)
        if r is not None:
            cands.append(r)
    return min(cands) if cands else min(g @ s.embed(g.spec) for s in S)


def normalizer_generators(S: SGroup) -> dict:
    """For each (a,b,c,d) in SL_2(F_3) a g in PGL_3 with g x g^-1 = x^a y^b and
    g y g^-1 = x^c y^d projectively."""
    out = {}
    for (a, b, c, d) in SL2_F3:
        x1, y1 = S.lift(a, b), S.lift(c, d)
        g = _prefer_rational(S, conjugator(S, x1, y1))
        out[a, b, c, d] = g
    return out


def verify_normalizer_element(S: SGroup, g: ProjMat, abcd) -> bool:
    a, b, c, d = abcd
    spec = common_field(S.spec, g.spec)
    gi = g.inverse().embed(spec)
    gg = g.embed(spec)
    return (gg @ S.x.embed(spec) @ gi == S.elements[a, b].embed(spec)
            and gg @ S.y.embed(spec) @ gi == S.elements[c, d].embed(spec))


def conjugation_matrix(S: SGroup, g: ProjMat):
    """(a,b,c,d) with g x g^-1 = x^a y^b and g y g^-1 = x^c y^d, or None."""
    spec = common_field(S.spec, g.spec)
    gg, gi = g.embed(spec), g.inverse().embed(spec)
    try:
        a, b = S.coords(gg @ S.x.embed(spec) @ gi)
        c, d = S.coords(gg @ S.y.embed(spec) @ gi)
    except KeyError:
        return None
    return (a, b, c, d)


def group_closure(gens, limit: int = 10000):
    gens = list(gens)
    ident = ProjMat(Mat3.identity(gens[0].spec))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = g @ h
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
                    if len(seen) > limit:
                        raise ArithmeticError("group closure exceeded limit")
        frontier = nxt
    return sorted(seen)


def normalizer_group(S: SGroup):
    """All elements generated by S and the normalizer generators."""
    gens = list(normalizer_generators(S).values())
    spec = common_field(S.spec, *(g.spec for g in gens))
    return group_closure([g.embed(spec) for g in gens] + [s.embed(spec) for s in S])


# -- the Hesse pencil ----------------------------------------------------------------

def _action_matrix(m: Mat3):
    """10x10 matrix (columns = images of monomials) of f -> f o m^-1."""
    spec = m.spec
    cols = []
    for e in MONOMIALS:
        f = CubicForm.from_dict({e: 1}, spec)
        cols.append(substitute_cubic(m, f).coeffs)
    return [[cols[j][i] for j in range(10)] for i in range(10)]


class HessePencil:
    """Two-dimensional space of cubics fixed by S.  The basis is in reduced
    echelon form on the monomial coefficients; member(l, m) = l*f0 + m*f1."""

    def __init__(self, S: SGroup, basis, adapt: ProjMat | None = None):
        self.S = S
        self.basis = tuple(basis)
        self.pivots = tuple(next(i for i, c in enumerate(f.coeffs) if c) for f in self.basis)
        self.adapt = adapt

    @property
    def spec(self):
        return self.basis[0].spec

    def member(self, lam, mu=None) -> CubicForm:
        if mu is None:
            lam, mu = lam
        spec = lam.spec if hasattr(lam, "spec") else self.spec
        f0, f1 = (f.embed(spec) for f in self.basis)
        return f0 * spec.elem(lam) + f1 * spec.elem(mu)

    def parameter(self, f: CubicForm):
        """(l : m) with f proportional to member(l, m), or None if f is not in the pencil."""
        lam, mu = f.coeffs[self.pivots[0]], f.coeffs[self.pivots[1]]
        if f != self.member(lam, mu) or not (lam or mu):
            return None
        return _p1_normalize(lam, mu)

    def to_json(self):
        return {"basis": [f.to_json() for f in self.basis],
                "adapt": self.adapt.to_json() if self.adapt is not None else None}


def _p1_normalize(lam, mu):
    if lam:
        return (lam.spec.one(), mu / lam)
    return (mu.spec.zero(), mu.spec.one())


def p1_points(spec: FieldSpec):
    pts = [(spec.one(), t) for t in spec.elements()]
    pts.append((spec.zero(), spec.one()))
    return pts


def adapted_frame(S: SGroup) -> ProjMat:
    """B with B^-1 x B diagonal and B^-1 y B the plain cyclic shift."""
    B, c = _cyclic_frame(S.pair.x, S.pair.y)
    big, delta = _cube_root(c.inverse())
    return ProjMat(B.embed(big) @ Mat3.diag(big.one(), delta, delta * delta))


def fixed_pencil(S: SGroup) -> HessePencil:
    """Solve f o x^-1 = c_x^-1 f and f o y^-1 = c_y^-1 f with x^3 = c_x, y^3 = c_y."""
    spec = S.spec
    rows = []
    for m in (S.pair.x, S.pair.y):
        c = (m ** 3).scalar_value()
        T = _action_matrix(m)
        rows.extend([[T[i][j] - (c.inverse() if i == j else 0) for j in range(10)] for i in range(10)])
    ker = nullspace(rows, spec)
    if len(ker) != 2:
        raise ArithmeticError(f"fixed space has dimension {len(ker)}, expected 2")
    red, _ = rref(ker, spec)
    basis = [CubicForm(r, spec) for r in red]
    return HessePencil(S, basis, adapted_frame(S))


def pencil_action(pencil: HessePencil, g: ProjMat, spec: FieldSpec):
    """2x2 matrix over spec of f -> f o g^-1 on the pencil coordinates."""
    cols = []
    for f in pencil.basis:
        h = substitute_cubic(g.embed(spec) if g.spec != spec else g, f.embed(spec))
        lam, mu = h.coeffs[pencil.pivots[0]], h.coeffs[pencil.pivots[1]]
        if h != pencil.member(lam, mu):
            raise ArithmeticError("element does not preserve the pencil")
        cols.append((lam, mu))
    return cols


def pencil_orbits(S: SGroup, pencil: HessePencil, field: FieldSpec | None = None, flex=None):
    """Orbits of the normalizer on the pencil members with parameters in field.

    Returns a list of dicts {members, size, smooth, j} sorted by members.
    The representative of an orbit decides smoothness; j is computed on
    every smooth member and must be constant on the orbit.
    """
    field = field or pencil.spec
    cfg = s_to_inflections(S)
    gens = list(normalizer_generators(S).values())
    spec = common_field(field, pencil.spec, cfg.spec, *(g.spec for g in gens))
    if spec != field:
        raise ValueError("field must contain the pencil, the configuration and the normalizer")
    mats = [pencil_action(pencil, g, spec) for g in gens]
    flex = flex or cfg.points[0].embed(spec)
    remaining = set(p1_points(field))
    orbits = []
    while remaining:
        start = min(remaining)
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for (l, m) in frontier:
                for (c0, c1) in mats:
                    q = _p1_normalize(l * c0[0] + m * c1[0], l * c0[1] + m * c1[1])
                    if q not in orbit:
                        orbit.add(q)
                        nxt.append(q)
            frontier = nxt
        remaining -= orbit
        members = sorted(orbit)
        smooth = is_smooth(pencil.member(members[0]))
        js = {j_invariant(pencil.member(p), flex=flex) for p in members} if smooth else set()
        if len(js) > 1:
            raise ArithmeticError("j is not constant on an orbit")
        orbits.append({"members": members, "size": len(members), "smooth": smooth,
                       "j": js.pop() if js else None})
    return orbits


def hesse_identity_check(spec: FieldSpec) -> bool:
    """w0 w1 w2 = (v0^3 + v1^3 + v2^3) - 3 v0 v1 v2 for w_j = sum_i rho^(ij) v_i."""
    rho = primitive_cube_root(spec)
    W = Mat3([[rho ** (i * j) for i in range(3)] for j in range(3)])
    # w0 w1 w2 as a cubic in v: product of the three linear forms
    from . import _poly
    prod = {(0, 0, 0): spec.one()}
    for j in range(3):
        lin = {tuple(1 if k == i else 0 for k in range(3)): W.rows[j][i] for i in range(3)}
        prod = _poly.pmul(prod, lin)
    lhs = CubicForm([prod.get(e, spec.zero()) for e in MONOMIALS], spec)
    rhs = fermat(spec) - xyz(spec) * 3
    return lhs.coeffs == rhs.coeffs


def phi_matrix(S: SGroup, cfg: InflectionConfig, f: CubicForm, O: ProjPoint):
    """{(a, b): phi_C(x^a y^b)} with identity O."""
    from .hesse import phi_C
    return {k: phi_C(cfg, f, O, m) for k, m in S.elements.items()}


def pairing_transport(S: SGroup, f: CubicForm, O: ProjPoint | None = None):
    """For all 81 pairs (s, t): (commutator exponent, Weil pairing exponent of
    phi_C(s), phi_C(t) on the Weierstrass model at O)."""
    from .cubic import flex_to_weierstrass, weil3
    cfg = s_to_inflections(S)
    O = O or cfg.points[0]
    phis = phi_matrix(S, cfg, f, O)
    W, M = flex_to_weierstrass(f, O)
    spec = O.spec
    rho = primitive_cube_root(spec)
    out = []
    keys = sorted(S.elements)
    for s in keys:
        for t in keys:
            comm = commutator_value(S.lift(*s).embed(spec), S.lift(*t).embed(spec))
            w = weil3(W, M @ phis[s], M @ phis[t])
            out.append((s, t, [rho ** i for i in range(3)].index(comm), [rho ** i for i in range(3)].index(w)))
    return out


def random_conjugate(S: SGroup, rng) -> tuple:
    spec = S.spec
    while True:
        g = Mat3([[spec.random(rng) for _ in range(3)] for _ in range(3)])
        if g.det():
            return ProjMat(g), SGroup(S.pair.conjugate(g))



def stabilizer_scan(S: SGroup, workers: int = 1, progress=None) -> dict:
    """Exhaustive scan of PGL_3(F_p) for S over a prime field F_p.

    Finds the stabilizer of the configuration of S and the normalizer of S
    independently, then reports the translation kernel and the image of the
    stabilizer in GL_2(F_3) acting on E(I).
    """
    import numpy as np

    from ._pglscan import key_to_matrix, scan

    spec = S.spec
    if spec.n != 1:
        raise ValueError("the exhaustive scan runs over prime fields only")
    p = spec.p
    cfg = s_to_inflections(S)
    if cfg.spec != spec:
        raise ValueError("configuration is not rational over the scanned field")
    points = np.array([[int(c) for c in P.coords] for P in cfg.points], dtype=np.int64).T
    to_int = lambda m: [[int(c) for c in r] for r in m.rows]
    s_flat = [[int(c) for c in m.mat.flat()] for m in S]
    res = scan(p, points, to_int(S.pair.x), to_int(S.pair.y), s_flat, workers=workers, progress=progress)
    stab = [ProjMat(Mat3([[spec.elem(c) for c in r] for r in key_to_matrix(int(k), p)])) for k in res["stabilizer"]]
    E = EIGroup(cfg)
    trans = {E.translation(a) for a in range(9)}
    perms = [cfg.permutation_of(g) for g in stab]
    kernel = [g for g, pm in zip(stab, perms) if pm in trans]
    fibers = {}
    for pm in perms:
        key = tuple(int(v) for v in E.linear_matrix(pm).flatten())
        fibers[key] = fibers.get(key, 0) + 1
    sl2 = {(a, b, c, d) for (a, b, c, d) in SL2_F3}
    # linear_matrix is column-major in (alpha, beta); flatten is row-major
    return {
        "canonical_matrices": res["canonical"],
        "invertible": res["invertible"],
        "stabilizer_order": len(res["stabilizer"]),
        "normalizer_order": len(res["normalizer"]),
        "stabilizer_equals_normalizer": bool(np.array_equal(res["stabilizer"], res["normalizer"])),
        "kernel_order": len(kernel),
        "kernel_is_S": set(kernel) == set(S),
        "quotient_order": len(fibers),
        "quotient_is_SL2": set(fibers) == sl2,
        "fiber_sizes": sorted(set(fibers.values())),
        "stabilizer": stab,
    }
