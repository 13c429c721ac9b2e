"""Projective plane over a finite field: points, lines, 3x3 matrices, PGL_3,
invariant planes of order-3 elements, the change-of-variables action on
cubic forms and the degree-3 Veronese map P^2 -> P^9.
"""

from __future__ import annotations

import math

from . import _poly
from ._linalg import nullspace
from .field import (
    FieldElem, FieldSpec, UniPoly, embed, factor_unipoly, in_subfield, make_field, restrict, roots,
)

# Fixed monomial order for ternary cubics; part of the wire format.
MONOMIALS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)
MONOMIAL_INDEX = {e: i for i, e in enumerate(MONOMIALS)}


class ProjError(ValueError):
    pass


def _normalize(coords):
    for c in coords:
        if c:
            inv = c.inverse()
            return tuple(x * inv for x in coords)
    raise ProjError("all coordinates are zero")


class _Proj:
    __slots__ = ("coords",)

    def __init__(self, *coords, spec: FieldSpec | None = None):
        if len(coords) == 1 and not isinstance(coords[0], (int, FieldElem)):
            coords = tuple(coords[0])
        if spec is None:
            spec = next(c.spec for c in coords if isinstance(c, FieldElem))
        self.coords = _normalize(tuple(spec.elem(c) for c in coords))

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return type(self) is type(other) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        return tuple(c.c for c in self.coords) < tuple(c.c for c in other.coords)

    def __repr__(self):
        return "[" + ":".join(map(repr, self.coords)) + "]"

    def embed(self, target: FieldSpec):
        return type(self)(*(embed(c, target) for c in self.coords))

    def to_json(self):
        return [c.to_json() for c in self.coords]


class ProjPoint(_Proj):
    """Point of P^2, first nonzero coordinate scaled to 1."""

    __slots__ = ()


class ProjLine(_Proj):
    """Line a*x + b*y + c*z = 0 of P^2, stored by its dual coordinates."""

    __slots__ = ()

    def contains(self, P: ProjPoint) -> bool:
        return not dot(self.coords, P.coords)


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def line_through(P: ProjPoint, Q: ProjPoint) -> ProjLine:
    if P == Q:
        raise ProjError("need two distinct points")
    return ProjLine(cross(P.coords, Q.coords))


def meet(L: ProjLine, M: ProjLine) -> ProjPoint:
    if L == M:
        raise ProjError("need two distinct lines")
    return ProjPoint(cross(L.coords, M.coords))


def collinear(P, Q, R) -> bool:
    return not dot(cross(P.coords, Q.coords), R.coords)


def all_points(spec: FieldSpec):
    """The q^2 + q + 1 points of P^2(F_q) in canonical order."""
    one, zero = spec.one(), spec.zero()
    els = list(spec.elements())
    pts = [ProjPoint(zero, zero, one)]
    pts += [ProjPoint(zero, one, z) for z in els]
    pts += [ProjPoint(one, y, z) for y in els for z in els]
    return sorted(pts)


def all_lines(spec: FieldSpec):
    return [ProjLine(P.coords) for P in all_points(spec)]


class Mat3:
    """3x3 matrix over a field (rows of FieldElem)."""

    __slots__ = ("rows",)

    def __init__(self, rows, spec: FieldSpec | None = None):
        rows = [list(r) for r in rows]
        if spec is None:
            spec = next(c.spec for r in rows for c in r if isinstance(c, FieldElem))
        self.rows = tuple(tuple(spec.elem(c) for c in r) for r in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ProjError("Mat3 needs a 3x3 array")

    @property
    def spec(self) -> FieldSpec:
        return self.rows[0][0].spec

    @classmethod
    def identity(cls, spec):
        return cls([[1 if i == j else 0 for j in range(3)] for i in range(3)], spec)

    @classmethod
    def diag(cls, a, b, c, spec=None):
        z = 0
        return cls([[a, z, z], [z, b, z], [z, z, c]], spec)

    @classmethod
    def from_columns(cls, cols):
        return cls([[cols[j][i] for j in range(3)] for i in range(3)])

    def __matmul__(self, other):
        if isinstance(other, Mat3):
            b = other.rows
            return Mat3([[sum((self.rows[i][k] * b[k][j] for k in range(3)), self.spec.zero())
                          for j in range(3)] for i in range(3)])
        v = tuple(other)
        return tuple(dot(r, v) for r in self.rows)

    def __mul__(self, c):
        return Mat3([[x * c for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Mat3.identity(self.spec)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Mat3) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Mat3(" + repr([list(r) for r in self.rows]) + ")"

    def transpose(self):
        return Mat3([[self.rows[j][i] for j in range(3)] for i in range(3)])

    def det(self):
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def adjugate(self):
        r = self.rows
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                rr = [k for k in range(3) if k != i]
                cc = [k for k in range(3) if k != j]
                m = r[rr[0]][cc[0]] * r[rr[1]][cc[1]] - r[rr[0]][cc[1]] * r[rr[1]][cc[0]]
                cof[i][j] = m if (i + j) % 2 == 0 else -m
        return Mat3([[cof[j][i] for j in range(3)] for i in range(3)])

    def inverse(self):
        d = self.det()
        if not d:
            raise ProjError("singular matrix")
        return self.adjugate() * d.inverse()

    def is_scalar(self) -> bool:
        r = self.rows
        return (all(not r[i][j] for i in range(3) for j in range(3) if i != j)
                and r[0][0] == r[1][1] == r[2][2])

    def scalar_value(self):
        if not self.is_scalar():
            raise ProjError("matrix is not scalar")
        return self.rows[0][0]

    def embed(self, target: FieldSpec):
        return Mat3([[embed(c, target) for c in r] for r in self.rows])

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(3))

    def flat(self):
        return tuple(c for r in self.rows for c in r)

    def to_json(self):
        return [[c.to_json() for c in r] for r in self.rows]


class ProjMat:
    """Element of PGL_3: an invertible Mat3 scaled so its first nonzero entry
    (row-major) is 1."""

    __slots__ = ("mat",)

    def __init__(self, m):
        if not isinstance(m, Mat3):
            m = Mat3(m)
        if not m.det():
            raise ProjError("singular matrix does not define an element of PGL_3")
        first = next(c for c in m.flat() if c)
        self.mat = m * first.inverse()

    @property
    def spec(self):
        return self.mat.spec

    def __eq__(self, other):
        return isinstance(other, ProjMat) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __lt__(self, other):
        return tuple(c.c for c in self.mat.flat()) < tuple(c.c for c in other.mat.flat())

    def __matmul__(self, other):
        if isinstance(other, ProjMat):
            return ProjMat(self.mat @ other.mat)
        if isinstance(other, ProjPoint):
            return act_point(self, other)
        return NotImplemented

    def inverse(self):
        return ProjMat(self.mat.adjugate())

    def __pow__(self, e):
        return ProjMat(self.mat ** e) if e >= 0 else ProjMat(self.mat.adjugate() ** (-e))

    def is_identity(self):
        return self.mat.is_scalar()

    def embed(self, target):
        return ProjMat(self.mat.embed(target))

    def __repr__(self):
        return "ProjMat(" + repr([list(r) for r in self.mat.rows]) + ")"

    def to_json(self):
        return self.mat.to_json()


def act_point(m, P: ProjPoint) -> ProjPoint:
    mat = m.mat if isinstance(m, ProjMat) else m
    return ProjPoint(mat @ P.coords)


def act_line(m, L: ProjLine) -> ProjLine:
    """Image of a line under m: coordinates transform by the inverse transpose."""
    mat = m.mat if isinstance(m, ProjMat) else m
    return ProjLine(mat.adjugate().transpose() @ L.coords)


def projectively_equal(a: Mat3, b: Mat3) -> bool:
    fa, fb = a.flat(), b.flat()
    return all(not (fa[i] * fb[j] - fa[j] * fb[i]) for i in range(9) for j in range(i + 1, 9))


def char_poly(m: Mat3) -> UniPoly:
    r = m.rows
    tr = r[0][0] + r[1][1] + r[2][2]
    minors = (r[0][0] * r[1][1] - r[0][1] * r[1][0]
              + r[0][0] * r[2][2] - r[0][2] * r[2][0]
              + r[1][1] * r[2][2] - r[1][2] * r[2][1])
    return UniPoly(m.spec, [-m.det(), minors, -tr, 1])


def splitting_degree(f: UniPoly) -> int:
    d = 1
    for g in factor_unipoly(f):
        d = math.lcm(d, g.degree)
    return d


def eigenvectors(m: Mat3):
    """[(eigenvalue, eigenvector)] over the splitting field of the characteristic
    polynomial, one vector per distinct eigenvalue (requires distinct eigenvalues)."""
    spec = m.spec
    k = splitting_degree(char_poly(m))
    big = make_field(spec.p, spec.n * k)
    mb = m.embed(big)
    vals = roots(char_poly(mb))
    if len(vals) != 3:
        raise ProjError("eigenvalues are not distinct")
    out = []
    for lam in vals:
        rows = [[mb.rows[i][j] - (lam if i == j else 0) for j in range(3)] for i in range(3)]
        ker = nullspace(rows, big)
        if len(ker) != 1:
            raise ProjError("unexpected eigenspace dimension")  # pragma: no cover
        out.append((lam, ProjPoint(ker[0])))
    return out


def eigen_planes(m: Mat3):
    """The three 2-dimensional subspaces invariant under an order-3 projective
    element, as lines of P^2 (over the smallest field containing the eigenvalues),
    sorted canonically."""
    if isinstance(m, ProjMat):
        m = m.mat
    if m.is_scalar():
        raise ProjError("scalar matrix has every plane invariant")
    if not (m @ m @ m).is_scalar():
        raise ProjError("cube of matrix is not scalar")
    # invariant planes are kernels of left eigenvectors
    return sorted(ProjLine(v.coords) for _, v in eigenvectors(m.transpose()))


def invariant_lines_bruteforce(m: Mat3):
    """All lines L of P^2(F_q) with m(L) = L (exhaustive oracle)."""
    return [L for L in all_lines(m.spec) if act_line(m, L) == L]


def substitute_cubic(m, f):
    """f o m^{-1}, so that the zero set transforms covariantly: Z(result) = m(Z(f))."""
    mat = m.mat if isinstance(m, ProjMat) else m
    inv = mat.inverse()
    poly = {e: c for e, c in zip(MONOMIALS, f.coeffs) if c}
    sub = _poly.linear_substitute(poly, [list(r) for r in inv.rows], 3)
    spec = mat.spec
    return type(f)([sub.get(e, spec.zero()) for e in MONOMIALS])


def sym3_matrix(m) -> list:
    """10x10 matrix of the induced action on degree-3 monomial values:
    veronese3(m P) is proportional to sym3_matrix(m) . veronese3(P)."""
    mat = m.mat if isinstance(m, ProjMat) else m
    spec = mat.spec
    out = [[spec.zero()] * 10 for _ in range(10)]
    for a, e in enumerate(MONOMIALS):
        poly = _poly.linear_substitute({e: spec.one()}, [list(r) for r in mat.rows], 3)
        for b, eb in enumerate(MONOMIALS):
            c = poly.get(eb)
            if c:
                out[a][b] = c
    return out


def veronese3(P: ProjPoint) -> tuple:
    """Values of the ten cubic monomials at P, normalized (first nonzero = 1)."""
    vals = []
    for e in MONOMIALS:
        v = P.spec.one()
        for x, k in zip(P.coords, e):
            v = v * x ** k
        vals.append(v)
    return _normalize(tuple(vals))


def projective_frame_matrix(src, dst) -> Mat3:
    """Matrix sending four points in general position src[i] to dst[i] projectively."""
    def frame(pts):
        A = Mat3.from_columns([p.coords for p in pts[:3]])
        lam = A.inverse() @ pts[3].coords
        if any(not x for x in lam):
            raise ProjError("points not in general position")
        return Mat3.from_columns([[c * l for c in p.coords] for p, l in zip(pts[:3], lam)])
    return frame(dst) @ frame(src).inverse()


def restrict_point(P: ProjPoint, sub: FieldSpec):
    """P as a point over the subfield sub, or None if it is not defined there."""
    if P.spec == sub:
        return P
    if not all(in_subfield(c, sub) for c in P.coords):
        return None
    return ProjPoint(tuple(restrict(c, sub) for c in P.coords))


def restrict_projmat(m: ProjMat, sub: FieldSpec):
    """m over the subfield sub (the canonical representative is Frobenius
    stable, so this decides rationality), or None."""
    if m.spec == sub:
        return m
    flat = m.mat.flat()
    if not all(in_subfield(c, sub) for c in flat):
        return None
    vals = [restrict(c, sub) for c in flat]
    return ProjMat(Mat3([vals[0:3], vals[3:6], vals[6:9]]))
