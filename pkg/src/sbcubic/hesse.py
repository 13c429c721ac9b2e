"""The nine inflection points as a combinatorial object.

Everything here is derived from collinearity alone: the group E(I) of
pair classes, its simply transitive action on the points, the collineation
group Aff(I) of triple-preserving permutations and the canonical cocycle
d(g) = {(g(P), P)}.
"""

from __future__ import annotations

import itertools

import numpy as np

from .projlin import ProjMat, ProjPoint, collinear


class InvalidConfig(ValueError):
    pass


class NotContained(ValueError):
    pass


class NotTranslation(ValueError):
    pass


class InflectionConfig:
    """Nine points of P^2 with their twelve collinear triples (index triples
    into the sorted point list)."""

    __slots__ = ("points", "triples", "_third", "_index")

    def __init__(self, points, triples):
        self.points = tuple(points)
        self.triples = tuple(sorted(tuple(sorted(t)) for t in triples))
        self._index = {P: i for i, P in enumerate(self.points)}
        self._third = {}
        for t in self.triples:
            for a, b in itertools.permutations(t, 2):
                self._third[a, b] = t[3 - t.index(a) - t.index(b)]
        self._validate()

    @classmethod
    def from_points(cls, points):
        pts = sorted(set(points))
        if len(pts) != 9:
            raise InvalidConfig(f"expected 9 distinct points, got {len(pts)}")
        triples = [t for t in itertools.combinations(range(9), 3)
                   if collinear(pts[t[0]], pts[t[1]], pts[t[2]])]
        return cls(pts, triples)

    def _validate(self):
        if len(self.points) != 9 or len(self._index) != 9:
            raise InvalidConfig("need 9 distinct points")
        if len(self.triples) != 12:
            raise InvalidConfig(f"{len(self.triples)} collinear triples instead of 12")
        if len(self._third) != 72:
            raise InvalidConfig("some pair lies on more than one triple")
        for i in range(9):
            if sum(i in t for t in self.triples) != 4:
                raise InvalidConfig(f"point {i} is not on exactly 4 triples")

    @property
    def spec(self):
        return self.points[0].spec

    def __len__(self):
        return 9

    def __eq__(self, other):
        return isinstance(other, InflectionConfig) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"InflectionConfig({list(self.points)})"

    def index(self, P: ProjPoint) -> int:
        return self._index[P]

    def collinear_third(self, i: int, j: int) -> int:
        """The unique k with {i, j, k} a triple."""
        if i == j:
            raise ValueError("collinear_third needs two distinct points")
        return self._third[i, j]

    def third(self, i: int, j: int) -> int:
        """Collinear completion with the convention that (i, i, i) is collinear."""
        return i if i == j else self._third[i, j]

    def is_triple(self, i, j, k) -> bool:
        return tuple(sorted((i, j, k))) in self.triples

    def permutation_of(self, m: ProjMat):
        """Permutation induced by m on the points, or None if m does not stabilize them."""
        if m.spec != self.spec:
            m = m.embed(self.spec)
        perm = []
        for P in self.points:
            j = self._index.get(m @ P)
            if j is None:
                return None
            perm.append(j)
        return tuple(perm)

    def map_points(self, fn):
        return InflectionConfig.from_points([fn(P) for P in self.points])

    def embed(self, target):
        return InflectionConfig.from_points([P.embed(target) for P in self.points])

    def to_json(self):
        return {"points": [P.to_json() for P in self.points],
                "triples": [list(t) for t in self.triples]}


# -- E(I) --------------------------------------------------------------------------

def pair_equivalent(cfg: InflectionConfig, a, b) -> bool:
    """(P,Q) ~ (R,S) iff a single T makes P,S,T and R,Q,T collinear."""
    (P, Q), (R, S) = a, b
    return cfg.third(P, S) == cfg.third(R, Q)


class EIGroup:
    """E(I): classes of ordered pairs of configuration points.

    Class i is the class containing (i, 0), so class 0 is the diagonal
    (identity) and class i carries point 0 to point i.
    """

    def __init__(self, cfg: InflectionConfig):
        self.cfg = cfg
        pairs = [(i, j) for i in range(9) for j in range(9)]
        parent = {p: p for p in pairs}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        for a in pairs:
            for b in pairs:
                if pair_equivalent(cfg, a, b):
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
        roots = {find(p) for p in pairs}
        if len(roots) != 9:
            raise InvalidConfig(f"pair relation has {len(roots)} classes")
        # the relation must already be transitive (it is an equivalence)
        for a in pairs:
            for b in pairs:
                if (find(a) == find(b)) != pair_equivalent(cfg, a, b):
                    raise InvalidConfig("pair relation is not an equivalence relation")
        root_to_id = {find((i, 0)): i for i in range(9)}
        if len(root_to_id) != 9:
            raise InvalidConfig("the map P -> {(P, Q)} is not a bijection")
        self.cls = {p: root_to_id[find(p)] for p in pairs}
        self.members = {c: sorted(p for p in pairs if self.cls[p] == c) for c in range(9)}
        # Cayley table: {(P,Q)} + {(R,S)} = {(P,U)} whenever (R,S) ~ (Q,U)
        self.table = np.zeros((9, 9), dtype=np.int64)
        for a in range(9):
            for b in range(9):
                vals = set()
                for (P, Q) in self.members[a]:
                    for U in range(9):
                        if self.cls[Q, U] == b:
                            vals.add(self.cls[P, U])
                if len(vals) != 1:
                    raise InvalidConfig("sum of classes is not well defined")
                self.table[a, b] = vals.pop()
        self.alpha = 1
        span = {0, 1, int(self.table[1, 1])}
        self.beta = min(c for c in range(9) if c not in span)
        self._coords = {}
        for x in range(3):
            for y in range(3):
                self._coords[self.combine(x, y)] = (x, y)
        if len(self._coords) != 9:
            raise InvalidConfig("E(I) is not elementary abelian of rank 2")

    identity = 0

    def add(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def neg(self, a: int) -> int:
        return next(b for b in range(9) if self.table[a, b] == 0)

    def mul(self, k: int, a: int) -> int:
        acc = 0
        for _ in range(k % 3):
            acc = self.add(acc, a)
        return acc

    def combine(self, x: int, y: int) -> int:
        return self.add(self.mul(x, self.alpha), self.mul(y, self.beta))

    def coords(self, a: int):
        """Coordinates of a class in the basis (alpha, beta)."""
        return self._coords[a]

    def from_coords(self, v) -> int:
        return self.combine(int(v[0]) % 3, int(v[1]) % 3)

    def class_of(self, i: int, j: int) -> int:
        return self.cls[i, j]

    def act(self, a: int, i: int) -> int:
        """i + a: the point Q with (Q, i) in class a."""
        return next(Q for Q in range(9) if self.cls[Q, i] == a)

    def translation(self, a: int):
        return tuple(self.act(a, i) for i in range(9))

    def linear_matrix(self, perm):
        """Matrix over F_3 (basis alpha, beta) of the action of a collineation
        on E(I): {(P,Q)} -> {(g P, g Q)}."""
        cols = []
        for b in (self.alpha, self.beta):
            P, Q = self.members[b][0]
            cols.append(self.coords(self.cls[perm[P], perm[Q]]))
        return np.array(cols, dtype=np.int64).T % 3

    def to_json(self):
        return {"table": self.table.tolist(), "basis": [self.alpha, self.beta]}


def build_EI(cfg: InflectionConfig) -> EIGroup:
    return EIGroup(cfg)


def ei_act(group: EIGroup, a: int, i: int) -> int:
    return group.act(a, i)


# -- Aff(I) ---------------------------------------------------------------------------

def triple_preserving_permutations(cfg: InflectionConfig):
    """All permutations of the points preserving the triple set (backtracking)."""
    triples = set(cfg.triples)
    out = []
    img = [None] * 9
    used = [False] * 9

    def consistent(k):
        for t in cfg.triples:
            if k in t and all(img[i] is not None for i in t):
                if tuple(sorted(img[i] for i in t)) not in triples:
                    return False
        return True

    def rec(k):
        if k == 9:
            out.append(tuple(img))
            return
        for v in range(9):
            if not used[v]:
                img[k] = v
                used[v] = True
                if consistent(k):
                    rec(k + 1)
                used[v] = False
                img[k] = None

    rec(0)
    return out


def compose(g, h):
    """(g o h)(i) = g[h[i]]."""
    return tuple(g[i] for i in h)


def invert(g):
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


class AffMap:
    """A collineation of the configuration with its decomposition
    g = (translation by t) o A, where A fixes the base point."""

    __slots__ = ("perm", "translation", "linear", "base")

    def __init__(self, perm, group: EIGroup, base: int = 0):
        self.perm = tuple(perm)
        self.base = base
        self.translation = group.class_of(self.perm[base], base)
        self.linear = group.linear_matrix(self.perm)

    @property
    def det(self) -> int:
        m = self.linear
        return int(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) % 3

    def __eq__(self, other):
        return isinstance(other, AffMap) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"AffMap({self.perm})"


def linear_part_fixing(group: EIGroup, matrix, base: int = 0):
    """The collineation A_P fixing the base point with the given linear part:
    base + v -> base + matrix v."""
    perm = []
    for i in range(9):
        v = np.array(group.coords(group.class_of(i, base)))
        w = matrix @ v % 3
        perm.append(group.act(group.from_coords(w), base))
    return tuple(perm)


def aff_group(cfg: InflectionConfig, group: EIGroup | None = None, base: int = 0):
    """(Aff, SAff) as lists of AffMaps; also checks the decomposition
    g = tau_t o A_P for every element."""
    group = group or EIGroup(cfg)
    perms = triple_preserving_permutations(cfg)
    aff = [AffMap(p, group, base) for p in perms]
    for g in aff:
        a = linear_part_fixing(group, g.linear, base)
        if compose(group.translation(g.translation), a) != g.perm:
            raise InvalidConfig("collineation does not split as translation o linear")
    saff = [g for g in aff if g.det == 1]
    return aff, saff


def translations(group: EIGroup):
    return [group.translation(a) for a in range(9)]


def psi(group: EIGroup, s) -> int:
    """Class of (s(P), P) for a translation s (a permutation or a ProjMat);
    checked to be independent of P."""
    if isinstance(s, ProjMat):
        perm = group.cfg.permutation_of(s)
        if perm is None:
            raise NotTranslation("matrix does not stabilize the configuration")
    else:
        perm = tuple(s)
    vals = {group.class_of(perm[P], P) for P in range(9)}
    if len(vals) != 1:
        raise NotTranslation("element acts nontrivially on E(I)")
    return vals.pop()


def phi_C(cfg: InflectionConfig, f, O: ProjPoint, s, base: ProjPoint | None = None) -> ProjPoint:
    """The 3-torsion point (s(P) - P) + O for the group law on f with identity O."""
    from .cubic import chord_add, chord_neg

    spec = cfg.spec
    fb = f.embed(spec)
    if any(fb(P) for P in cfg.points):
        raise NotContained("configuration is not contained in the cubic")
    P = base if base is not None else O

    def image(Q):
        if isinstance(s, ProjMat):
            return (s.embed(spec) if s.spec != spec else s) @ Q
        return cfg.points[s[cfg.index(Q)]]

    if P == O:
        return image(O)
    return chord_add(fb, O, image(P), chord_neg(fb, O, P))


# -- finite groups of permutations and cocycles ------------------------------------------

class PermGroup:
    """A finite group given by an explicit element list and multiplication table."""

    def __init__(self, elements, mul=compose):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        self.table = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                self.table[i, j] = self.index[mul(g, h)]
        e = [i for i in range(n) if all(self.table[i, j] == j for j in range(n))]
        if len(e) != 1:
            raise ValueError("no unique identity")
        self.identity = e[0]

    def __len__(self):
        return len(self.elements)

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = int(self.table[x, i])
            k += 1
        return k


class Cocycle:
    """Map from a finite group to E(I) (class ids) for an action through
    matrices over F_3 on class coordinates."""

    def __init__(self, group: PermGroup, module: EIGroup, action, values):
        self.group = group
        self.module = module
        self.action = action  # element index -> 2x2 matrix over F_3
        self.values = list(values)

    def vector(self, i):
        return np.array(self.module.coords(self.values[i]), dtype=np.int64)

    def check(self) -> bool:
        """d(gh) = g d(h) + d(g) for all pairs."""
        n = len(self.group)
        vecs = [self.vector(i) for i in range(n)]
        for g in range(n):
            for h in range(n):
                lhs = vecs[self.group.table[g, h]]
                rhs = (self.action[g] @ vecs[h] + vecs[g]) % 3
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def to_json(self):
        return {str(i): list(self.module.coords(v)) for i, v in enumerate(self.values)}


def canonical_cocycle(cfg: InflectionConfig, elements, base: int = 0,
                      group: EIGroup | None = None) -> Cocycle:
    """d(g) = {(g(P), P)} on a subgroup of Aff(I) given as AffMaps or permutations."""
    E = group or EIGroup(cfg)
    perms = [g.perm if isinstance(g, AffMap) else tuple(g) for g in elements]
    G = PermGroup(perms)
    action = [E.linear_matrix(p) for p in perms]
    values = [E.class_of(p[base], base) for p in perms]
    return Cocycle(G, E, action, values)
