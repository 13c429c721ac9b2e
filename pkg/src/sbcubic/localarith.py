"""Cubic symbols over Laurent-series fields F_q((t)) and F_q((s))((t)).

Elements are finite Laurent polynomials; every invariant used here (valuation,
leading residue, cube class, tame symbol) only reads finitely many terms, so
nothing is truncated.  At level 2 the coefficients of t are level-1 elements
in s.

Cube classes are exponent vectors over the basis (g, t) or (g, s, t) where g
is the least generator of F_q^*.  A symbol algebra (a, b) splits at level 1
iff its tame symbol vanishes; at level 2 iff both its t-residue class and
the residual symbol over F_q((s)) vanish.
"""

from __future__ import annotations

import itertools

from .field import FieldSpec, embed, frobenius, make_field, mu3_exponent


class LocalFieldError(ValueError):
    pass


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primitive_root(spec: FieldSpec):
    """Least generator of spec^* in element order."""
    q = spec.order
    ps = _prime_factors(q - 1)
    one = spec.one()
    for x in spec.elements():
        if x and all(x ** ((q - 1) // l) != one for l in ps):
            return x
    raise LocalFieldError("no generator found")  # pragma: no cover


class LocalField:
    """F_q((t)) (level 1) or F_q((s))((t)) (level 2), q = 1 mod 3."""

    def __init__(self, residue: FieldSpec, level: int = 1, names=None):
        if residue.p in (2, 3):
            raise LocalFieldError("residue characteristic must be prime to 6")
        if (residue.order - 1) % 3:
            raise LocalFieldError("q must be 1 mod 3 so that rho lies in the residue field")
        if level not in (1, 2):
            raise LocalFieldError("level must be 1 or 2")
        self.residue = residue
        self.level = level
        self.names = tuple(names) if names else (("t",) if level == 1 else ("s", "t"))
        if len(self.names) != level:
            raise LocalFieldError("one uniformizer name per level")
        self.g = primitive_root(residue)
        self.base = residue if level == 1 else LocalField(residue, 1, self.names[:1])

    @property
    def q(self):
        return self.residue.order

    def __eq__(self, other):
        return (isinstance(other, LocalField) and self.residue == other.residue
                and self.level == other.level and self.names == other.names)

    def __hash__(self):
        return hash((self.residue, self.level, self.names))

    def __repr__(self):
        inner = repr(self.residue)
        for n in self.names:
            inner += f"(({n}))"
        return inner

    # constructors
    def _coeff(self, c):
        if self.level == 1:
            return self.residue.elem(c)
        return c if isinstance(c, LocalElem) else self.base.const(c)

    def elem(self, terms: dict) -> "LocalElem":
        return LocalElem(self, {e: self._coeff(c) for e, c in terms.items()})

    def const(self, c) -> "LocalElem":
        return self.elem({0: c})

    def one(self):
        return self.const(1)

    def t(self, e: int = 1):
        return self.elem({e: 1})

    def s(self, e: int = 1):
        if self.level != 2:
            raise LocalFieldError("s exists only at level 2")
        return self.const(self.base.t(e))

    def monomial(self, c, *exps):
        """c * s^e_s * t^e_t (level 2) or c * t^e (level 1)."""
        if self.level == 1:
            (e,) = exps
            return self.elem({e: c})
        es, et = exps
        return self.elem({et: self.base.elem({es: c})})

    # cube classes
    @property
    def class_basis(self):
        return ("g",) + self.names

    @property
    def class_rank(self):
        return self.level + 1

    def classes(self):
        return [v for v in itertools.product(range(3), repeat=self.class_rank)]

    def class_rep(self, vec) -> "LocalElem":
        g = self.g ** (vec[0] % 3)
        return self.monomial(g, *[v % 3 for v in vec[1:]])

    def chi(self, u) -> int:
        """Exponent of the canonical rho in u^((q-1)/3)."""
        return mu3_exponent(u ** ((self.q - 1) // 3))

    def to_json(self):
        return {"residue": self.residue.to_json(), "level": self.level, "names": list(self.names)}


class LocalElem:
    """A nonzero finite Laurent polynomial."""

    __slots__ = ("field", "terms")

    def __init__(self, field: LocalField, terms: dict):
        self.field = field
        self.terms = {e: c for e, c in terms.items() if _nonzero(c)}

    def __bool__(self):
        return bool(self.terms)

    @property
    def valuation(self) -> int:
        if not self.terms:
            raise LocalFieldError("zero has no valuation")
        return min(self.terms)

    @property
    def leading(self):
        return self.terms[self.valuation]

    def __eq__(self, other):
        return isinstance(other, LocalElem) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LocalElem(self.field, out)

    def __neg__(self):
        return LocalElem(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LocalElem):
            other = self.field.const(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = c1 * c2
                out[e1 + e2] = out[e1 + e2] + c if e1 + e2 in out else c
        return LocalElem(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise LocalFieldError("only monomials are inverted exactly")
            (e, c), = self.terms.items()
            return LocalElem(self.field, {-e: _inv(c)}) ** (-k)
        out = self.field.one()
        for _ in range(k):
            out = out * self
        return out

    def map_terms(self, field, fn):
        """Sum of fn(e, c) over the terms, in the target field."""
        out = LocalElem(field, {})
        for e, c in self.terms.items():
            out = out + fn(e, c)
        return out

    def __repr__(self):
        name = self.field.names[-1]
        return " + ".join(f"({c!r})*{name}^{e}" for e, c in sorted(self.terms.items())) or "0"

    def to_json(self):
        name = self.field.names[-1]
        return {name: [[e, c.to_json()] for e, c in sorted(self.terms.items())]}


def _nonzero(c):
    return bool(c)


def _inv(c):
    if isinstance(c, LocalElem):
        return c ** -1
    return c.inverse()


# -- classes and symbols --------------------------------------------------------------

def cube_class(F: LocalField, a: LocalElem) -> tuple:
    """Exponent vector of a in F^*/(F^*)^3 over the basis (g, [s,] t)."""
    if not a:
        raise LocalFieldError("zero has no cube class")
    v = a.valuation % 3
    if F.level == 1:
        k = F.chi(F.g)
        return ((F.chi(a.leading) * k) % 3, v)  # k is 1 or 2, its own inverse mod 3
    return cube_class(F.base, a.leading) + (v,)


def tame_symbol3(F: LocalField, a: LocalElem, b: LocalElem) -> int:
    """chi((-1)^(v(a)v(b)) a^v(b) / b^v(a)) at level 1, as an exponent of rho."""
    if F.level != 1:
        raise LocalFieldError("tame_symbol3 is the level-1 symbol")
    va, vb = a.valuation, b.valuation
    u = a.leading ** vb if vb >= 0 else a.leading.inverse() ** (-vb)
    w = b.leading ** va if va >= 0 else b.leading.inverse() ** (-va)
    r = u / w
    if (va * vb) % 2:
        r = -r
    return F.chi(r)


def level2_invariants(F: LocalField, a: LocalElem, b: LocalElem):
    """(t-residue class in F_q((s))^*/cubes, residual symbol over F_q((s)))."""
    if F.level != 2:
        raise LocalFieldError("level-2 invariants need a level-2 field")
    va, vb = a.valuation, b.valuation
    ca, cb = cube_class(F.base, a.leading), cube_class(F.base, b.leading)
    res = tuple((x * vb - y * va) % 3 for x, y in zip(ca, cb))
    return res, tame_symbol3(F.base, a.leading, b.leading)


def symbol_invariants(F: LocalField, a, b):
    if F.level == 1:
        return (tame_symbol3(F, a, b),)
    res, r = level2_invariants(F, a, b)
    return res + (r,)


class SymbolAlgebra:
    """The degree-3 algebra generated by x, y with x^3 = a, y^3 = b, xy = rho yx."""

    def __init__(self, F: LocalField, a: LocalElem, b: LocalElem):
        if not a or not b:
            raise LocalFieldError("symbol entries must be nonzero")
        self.F, self.a, self.b = F, a, b

    def invariants(self):
        return symbol_invariants(self.F, self.a, self.b)

    def is_split(self, over=None) -> bool:
        return is_split(self, over)

    def to_json(self):
        return {"field": self.F.to_json(), "a": self.a.to_json(), "b": self.b.to_json(),
                "invariants": list(self.invariants())}


# -- Kummer extensions ---------------------------------------------------------------

def _normalize_class(c, pos):
    """Scale c so that c[pos] = 1 (c and c^2 define the same extension)."""
    k = c[pos] % 3
    return tuple((x * k) % 3 for x in c)  # k^-1 = k mod 3


def kummer_extension(F: LocalField, c):
    """F(c^(1/3)) as a LocalField of the same level, with the inclusion map.

    Ramified: substitute the uniformizer (t = g^-e pi^3 for c = g^e t).
    Unramified: extend the residue field to F_{q^3}."""
    c = tuple(v % 3 for v in c)
    if not any(c):
        return F, (lambda a: a)
    g = F.g
    q1 = F.q - 1

    def gpow(e):
        return g ** (e % q1)

    if c[-1]:
        c = _normalize_class(c, -1)
        names = F.names[:-1] + (F.names[-1] + "'",)
        L = LocalField(F.residue, F.level, names)
        if F.level == 1:
            e = c[0]
            return L, lambda a: a.map_terms(L, lambda i, x: L.monomial(x * gpow(-e * i), 3 * i))
        eg, es = c[0], c[1]

        def m2(a):
            def term(i, x):
                shifted = LocalElem(L.base, {j - es * i: y * gpow(-eg * i) for j, y in x.terms.items()})
                return L.elem({3 * i: shifted})
            return a.map_terms(L, term)
        return L, m2
    if F.level == 2 and c[1]:
        c = _normalize_class(c, 1)
        eg = c[0]
        names = (F.names[0] + "'", F.names[1])
        L = LocalField(F.residue, 2, names)

        def sub_s(x):
            return LocalElem(L.base, {3 * j: y * gpow(-eg * j) for j, y in x.terms.items()})
        return L, lambda a: LocalElem(L, {i: sub_s(x) for i, x in a.terms.items()})
    big = make_field(F.residue.p, F.residue.n * 3)
    L = LocalField(big, F.level, F.names)
    return L, lambda a: extend_residue(a, L)


def extend_residue(a: LocalElem, L: LocalField) -> LocalElem:
    if L.level == 1:
        return LocalElem(L, {e: embed(c, L.residue) for e, c in a.terms.items()})
    return LocalElem(L, {e: extend_residue(c, L.base) for e, c in a.terms.items()})


def is_split(A: SymbolAlgebra, over=None) -> bool:
    """Does F(c^(1/3)) split A (c a cube-class vector; None means F itself)?"""
    if over is None:
        L, m = A.F, (lambda a: a)
    else:
        L, m = kummer_extension(A.F, over)
    return not any(symbol_invariants(L, m(A.a), m(A.b)))


def norm_classes(F: LocalField, c) -> list:
    """Cube classes of norms from F(c^(1/3)): a is a norm iff (c, a) splits."""
    c = tuple(v % 3 for v in c)
    if not any(c):
        raise LocalFieldError("trivial class does not define a cubic field")
    rc = F.class_rep(c)
    return [a for a in F.classes() if not any(symbol_invariants(F, rc, F.class_rep(a)))]


def prop17_decide(A: SymbolAlgebra, K) -> dict:
    """Is there a norm class a of K/F, a nontrivial, with F(a^(1/3)) splitting A?
    Scans every class and reports the whole table."""
    F = A.F
    norms = set(norm_classes(F, K))
    table = []
    witness = None
    for a in F.classes():
        if not any(a):
            continue
        row = {"class": list(a), "norm": a in norms, "splits": is_split(A, a)}
        table.append(row)
        if witness is None and row["norm"] and row["splits"]:
            witness = a
    return {
        "exists": witness is not None,
        "witness": list(witness) if witness else None,
        "basis": list(F.class_basis),
        "algebra_split": is_split(A),
        "norm_index": len(F.classes()) // len(norms),
        "table": table,
    }


# -- quadratic extensions and the dihedral search --------------------------------------

class QuadraticExtension:
    """K/F quadratic over a level-1 F: unramified F_{q^2}((t)), or ramified
    F((u)) with u^2 = d t for a unit d.  sigma is the nontrivial automorphism."""

    def __init__(self, F: LocalField, kind: str = "unramified", d=1):
        if F.level != 1:
            raise LocalFieldError("quadratic extensions are modelled at level 1")
        self.F, self.kind = F, kind
        if kind == "unramified":
            self.K = LocalField(make_field(F.residue.p, F.residue.n * 2), 1, F.names)
        elif kind == "ramified":
            self.d = F.residue.elem(d)
            if not self.d:
                raise LocalFieldError("d must be a unit")
            self.K = LocalField(F.residue, 1, ("u",))
        else:
            raise LocalFieldError(f"unknown quadratic kind {kind!r}")

    def include(self, a: LocalElem) -> LocalElem:
        K = self.K
        if self.kind == "unramified":
            return extend_residue(a, K)
        dinv = self.d.inverse()
        return a.map_terms(K, lambda i, x: K.monomial(x * dinv ** (i % (K.q - 1)), 2 * i))

    def sigma(self, a: LocalElem) -> LocalElem:
        K = self.K
        if self.kind == "unramified":
            n = self.F.residue.n
            return LocalElem(K, {e: frobenius(c, n) for e, c in a.terms.items()})
        return LocalElem(K, {e: (-c if e % 2 else c) for e, c in a.terms.items()})

    def sigma_matrix(self):
        """Columns: classes of sigma applied to the basis representatives."""
        K = self.K
        cols = []
        for i in range(K.class_rank):
            e = [0] * K.class_rank
            e[i] = 1
            cols.append(cube_class(K, self.sigma(K.class_rep(e))))
        return cols

    def sigma_class(self, b):
        cols = self.sigma_matrix()
        return tuple(sum(b[i] * cols[i][r] for i in range(len(b))) % 3 for r in range(len(b)))

    def to_json(self):
        out = {"kind": self.kind, "field": self.K.to_json()}
        if self.kind == "ramified":
            out["d"] = self.d.to_json()
        return out


def cor19_decide(D: SymbolAlgebra, K: QuadraticExtension) -> dict:
    """Search for a nontrivial class b of K with sigma(b) = -b such that
    K(b^(1/3)) splits D over K.  Split D short-circuits to True."""
    if is_split(D):
        return {"exists": True, "split_D": True, "witness": None, "table": []}
    KK = K.K
    DK = SymbolAlgebra(KK, K.include(D.a), K.include(D.b))
    table = []
    witness = None
    for b in KK.classes():
        if not any(b):
            continue
        sb = K.sigma_class(b)
        anti = all((x + y) % 3 == 0 for x, y in zip(sb, b))
        splits = is_split(DK, b)
        table.append({"class": list(b), "sigma": list(sb), "anti_invariant": anti, "splits": splits})
        if witness is None and anti and splits:
            witness = b
    return {
        "exists": witness is not None,
        "split_D": False,
        "witness": list(witness) if witness else None,
        "basis": list(KK.class_basis),
        "sigma_matrix": [list(c) for c in K.sigma_matrix()],
        "table": table,
    }


def division_classes(F: LocalField):
    """Pairs of class vectors (a, b) whose symbol algebra is not split."""
    return [(a, b) for a in F.classes() for b in F.classes()
            if any(symbol_invariants(F, F.class_rep(a), F.class_rep(b)))]
