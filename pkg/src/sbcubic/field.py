"""Exact arithmetic in F_p and F_{p^n} (p >= 5), univariate polynomials,
factorization, cube roots of unity and Frobenius.

Elements of F_{p^n} are coefficient vectors (low degree first) with respect
to the canonical modulus: the lexicographically least monic irreducible
polynomial of degree n over F_p.  Extensions of extensions are always
re-expressed as a single extension F_{p^N}; moving between the two is done
with :func:`embed` and :func:`restrict`.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


# -- dense polynomials over Z/p as int lists (low degree first) -------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        t = a[k] * inv % p
        if t:
            q[k - db] = t
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - t * b[i]) % p
    return _trim(q), _trim(a[:db])


def _zp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _zp_divmod([x % p for x in r], m, p)[1]


def _zp_powmod(a, e, m, p):
    result = [1]
    base = _zp_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = _zp_mulmod(result, base, m, p)
        base = _zp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _zp_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _zp_divmod(a, b, p)[1]
    return a


def _zp_is_irreducible(f, p):
    """Rabin's irreducibility test for a monic f over F_p."""
    n = len(f) - 1

    def frob_minus_x(d):
        h = _zp_powmod([0, 1], p ** d, f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        return _trim(h)

    for d in {n // r for r in range(2, n + 1) if n % r == 0 and is_prime(r)}:
        if len(_zp_gcd(f, frob_minus_x(d), p)) != 1:
            return False
    return not frob_minus_x(n)


# -- fields -------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple

    @property
    def order(self) -> int:
        return self.p ** self.n

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __call__(self, value) -> "FieldElem":
        return self.elem(value)

    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldError(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElem(self, (value % self.p,) + (0,) * (self.n - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.n:
            raise FieldError("too many coefficients")
        return FieldElem(self, tuple(coeffs) + (0,) * (self.n - len(coeffs)))

    def zero(self) -> "FieldElem":
        return self.elem(0)

    def one(self) -> "FieldElem":
        return self.elem(1)

    def gen(self) -> "FieldElem":
        """Class of x modulo the modulus."""
        if self.n == 1:
            return self.elem(0)
        return self.elem([0, 1])

    def elements(self):
        """All elements in the deterministic (lexicographic) order."""
        for c in itertools.product(range(self.p), repeat=self.n):
            yield FieldElem(self, c)

    def random(self, rng: random.Random) -> "FieldElem":
        return FieldElem(self, tuple(rng.randrange(self.p) for _ in range(self.n)))

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n}


@functools.cache
def make_field(p: int, n: int = 1) -> FieldSpec:
    """F_{p^n} with the canonical modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p in (2, 3):
        raise FieldError("characteristic 2 and 3 are not supported")
    if n < 1:
        raise FieldError("extension degree must be >= 1")
    if n == 1:
        return FieldSpec(p, 1, (0, 1))
    for low in itertools.product(range(p), repeat=n):
        f = list(low) + [1]
        if low[0] != 0 and _zp_is_irreducible(f, p):
            return FieldSpec(p, n, tuple(f))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_from_json(obj) -> FieldSpec:
    return make_field(int(obj["p"]), int(obj.get("n", 1)))


class FieldElem:
    """Element of F_{p^n}; immutable."""

    __slots__ = ("spec", "c")

    def __init__(self, spec: FieldSpec, c: tuple):
        self.spec = spec
        self.c = c

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldError(f"mixing {self.spec} and {other.spec}")
            return other
        if isinstance(other, int):
            return self.spec.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.spec.p
        return FieldElem(self.spec, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElem(self.spec, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.spec.p
        return FieldElem(self.spec, tuple((a - b) % p for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        p, n = spec.p, spec.n
        if n == 1:
            return FieldElem(spec, (self.c[0] * other.c[0] % p,))
        a, b = self.c, other.c
        r = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        m = spec.modulus
        for k in range(2 * n - 2, n - 1, -1):
            t = r[k] % p
            if t:
                base = k - n
                for i in range(n):
                    r[base + i] -= t * m[i]
        return FieldElem(spec, tuple(x % p for x in r[:n]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        spec = self.spec
        if spec.n == 1:
            return FieldElem(spec, (pow(self.c[0], -1, spec.p),))
        # extended Euclid in F_p[x]
        p = spec.p
        r0, r1 = list(spec.modulus), _trim(list(self.c))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, r = _zp_divmod(r0, r1, p)
            qs = _poly_mul_zp(q, s1, p)
            s0, s1 = s1, _trim([((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p
                                for i in range(max(len(s0), len(qs)))])
            r0, r1 = r1, r
        inv = pow(r1[0], -1, p)
        s = [x * inv % p for x in s1]
        return spec.elem(s + [0] * (spec.n - len(s)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.c == other.c and self.spec == other.spec
        if isinstance(other, int):
            return self == self.spec.elem(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.n, self.c))

    def __lt__(self, other):
        return self.c < other.c

    def __le__(self, other):
        return self.c <= other.c

    def __gt__(self, other):
        return self.c > other.c

    def __ge__(self, other):
        return self.c >= other.c

    def is_prime_field(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def __int__(self):
        if not self.is_prime_field():
            raise FieldError(f"{self} is not in the prime field")
        return self.c[0]

    def __repr__(self):
        if self.spec.n == 1:
            return str(self.c[0])
        terms = []
        for i, a in enumerate(self.c):
            if a:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                terms.append(f"{a}{'*' + mono if mono else ''}" if a != 1 or not mono else mono)
        return "(" + " + ".join(terms) + ")" if terms else "0"

    def to_json(self):
        return list(self.c)


def _poly_mul_zp(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] = (r[i + j] + x * y) % p
    return _trim(r)


def frobenius(a: FieldElem, k: int = 1) -> FieldElem:
    """a -> a^(p^k)."""
    spec = a.spec
    k %= spec.n
    if k == 0 or spec.n == 1:
        return a
    return a ** (spec.p ** k)


# -- univariate polynomials over F_{p^n} --------------------------------------

class UniPoly:
    """Polynomial with FieldElem coefficients, low degree first."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs):
        cs = [spec.elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.spec = spec
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, spec):
        return cls(spec, [0, 1])

    @classmethod
    def const(cls, spec, c):
        return cls(spec, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lead(self) -> FieldElem:
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        return (self.degree, tuple(c.c for c in self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else ("*x" if i == 1 else f"*x^{i}")))
        return " + ".join(terms)

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly(self.spec, [other])

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(self.spec, [x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.spec, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            c = self.spec.elem(other)
            return UniPoly(self.spec, [x * c for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(self.spec, [])
        zero = self.spec.zero()
        r = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] = r[i + j] + x * y
        return UniPoly(self.spec, r)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv = b[-1].inverse()
        zero = self.spec.zero()
        q = [zero] * max(len(a) - db, 0)
        for k in range(len(a) - 1, db - 1, -1):
            t = a[k] * inv
            if t:
                q[k - db] = t
                for i in range(db + 1):
                    a[k - db + i] = a[k - db + i] - t * b[i]
        return UniPoly(self.spec, q), UniPoly(self.spec, a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        result = UniPoly(self.spec, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def powmod(self, e: int, m: "UniPoly") -> "UniPoly":
        result = UniPoly(self.spec, [1])
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def monic(self) -> "UniPoly":
        return self * self.lead().inverse()

    def derivative(self) -> "UniPoly":
        return UniPoly(self.spec, [c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = x * 0 if not isinstance(x, int) else self.spec.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn, spec=None) -> "UniPoly":
        return UniPoly(spec or self.spec, [fn(c) for c in self.coeffs])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def _squarefree(f: UniPoly):
    """Yun-style squarefree decomposition; returns [(g, mult)] with g monic."""
    spec = f.spec
    p = spec.p
    out = []
    f = f.monic()
    if f.degree < 1:
        return out
    i = 1
    fp = f.derivative()
    if not fp:
        root = _pth_root(f)
        return [(g, m * p) for g, m in _squarefree(root)]
    c = poly_gcd(f, fp)
    w = f // c
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        root = _pth_root(c)
        out.extend((g, m * p) for g, m in _squarefree(root))
    return out


def _pth_root(f: UniPoly) -> UniPoly:
    spec = f.spec
    p = spec.p
    e = p ** (spec.n - 1)
    return UniPoly(spec, [f.coeffs[i] ** e for i in range(0, len(f.coeffs), p)])


def _distinct_degree(f: UniPoly):
    spec = f.spec
    q = spec.order
    x = UniPoly.x(spec)
    h = x
    out = []
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _equal_degree(f: UniPoly, d: int, rng: random.Random):
    if f.degree == d:
        return [f.monic()]
    spec = f.spec
    q = spec.order
    e = (q ** d - 1) // 2
    while True:
        a = UniPoly(spec, [spec.random(rng) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree < f.degree:
            break
        b = a.powmod(e, f) - 1
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_unipoly(f: UniPoly, seed: int = 0) -> list:
    """Monic irreducible factors of f with multiplicity, in deterministic order.

    The product of the factors times ``f.lead()`` is f.
    """
    if not f:
        raise FieldError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out = []
    for g, m in _squarefree(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                out.extend([irr] * m)
    return sorted(out, key=UniPoly.sort_key)


def roots(f: UniPoly, seed: int = 0) -> list:
    """Distinct roots of f in its coefficient field, sorted."""
    if not f:
        raise FieldError("zero polynomial has every element as a root")
    if f.degree < 1:
        return []
    spec = f.spec
    x = UniPoly.x(spec)
    g = poly_gcd(f, x.powmod(spec.order, f) - x)
    if g.degree < 1:
        return []
    rng = random.Random(seed)
    return sorted(-h.coeffs[0] for h in _equal_degree(g, 1, rng))


def is_irreducible(f: UniPoly) -> bool:
    fs = factor_unipoly(f)
    return len(fs) == 1 and fs[0].degree == f.degree


def cube_roots_of_unity(spec: FieldSpec) -> list:
    """[1] if 3 does not divide q - 1, else [1, rho, rho^2] with rho the least primitive root."""
    one = spec.one()
    if (spec.order - 1) % 3:
        return [one]
    prim = roots(UniPoly(spec, [1, 1, 1]))
    rho = min(prim)
    return [one, rho, rho * rho]


def primitive_cube_root(spec: FieldSpec) -> FieldElem:
    cr = cube_roots_of_unity(spec)
    if len(cr) == 1:
        raise FieldError(f"{spec} has no primitive cube root of unity")
    return cr[1]


def mu3_exponent(z: FieldElem) -> int:
    """i with z = rho^i for the canonical rho of z's field."""
    for i, r in enumerate(cube_roots_of_unity(z.spec)):
        if z == r:
            return i
    raise FieldError(f"{z} is not a cube root of unity")


# -- subfields and embeddings -------------------------------------------------

def common_field(*specs: FieldSpec) -> FieldSpec:
    p = specs[0].p
    if any(s.p != p for s in specs):
        raise FieldError("different characteristics")
    n = 1
    for s in specs:
        n = math.lcm(n, s.n)
    return make_field(p, n)


@functools.cache
def _embedding_image(source: FieldSpec, target: FieldSpec) -> FieldElem:
    """Canonical image of the generator of source inside target (its least root)."""
    if source.p != target.p or target.n % source.n:
        raise FieldError(f"{source} does not embed in {target}")
    mod = UniPoly(target, list(source.modulus))
    return roots(mod)[0]


def embed(a: FieldElem, target: FieldSpec) -> FieldElem:
    src = a.spec
    if src == target:
        return a
    if src.n == 1:
        return target.elem(a.c[0])
    theta = _embedding_image(src, target)
    acc = target.zero()
    for c in reversed(a.c):
        acc = acc * theta + c
    return acc


@functools.cache
def _restriction_basis(source: FieldSpec, target: FieldSpec):
    theta = _embedding_image(source, target)
    powers = [target.one()]
    for _ in range(source.n - 1):
        powers.append(powers[-1] * theta)
    return powers


def in_subfield(a: FieldElem, sub: FieldSpec) -> bool:
    try:
        restrict(a, sub)
    except FieldError:
        return False
    return True


def restrict(a: FieldElem, sub: FieldSpec) -> FieldElem:
    """Preimage of a under the canonical embedding sub -> a.spec."""
    big = a.spec
    if sub == big:
        return a
    if big.n % sub.n or big.p != sub.p:
        raise FieldError(f"{sub} is not a subfield of {big}")
    if sub.n == 1:
        if a.is_prime_field():
            return sub.elem(a.c[0])
        raise FieldError(f"{a} is not in {sub}")
    # solve sum_i x_i * theta^i = a over F_p
    basis = _restriction_basis(sub, big)
    p = big.p
    rows = [[basis[i].c[r] for i in range(sub.n)] + [a.c[r]] for r in range(big.n)]
    sol = _solve_zp(rows, sub.n, p)
    if sol is None:
        raise FieldError(f"{a} is not in {sub}")
    return sub.elem(sol)


def _solve_zp(rows, nvars, p):
    rows = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(nvars):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                t = rows[i][c]
                rows[i] = [(x - t * y) % p for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(all(x % p == 0 for x in row[:nvars]) and row[nvars] % p for row in rows):
        return None
    sol = [0] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][nvars]
    return sol


def extension_degree_of(a: FieldElem) -> int:
    """Degree over F_p of the smallest subfield containing a."""
    n = a.spec.n
    for d in sorted(d for d in range(1, n + 1) if n % d == 0):
        if frobenius(a, d) == a:
            return d
    return n  # pragma: no cover
