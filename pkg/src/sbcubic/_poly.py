"""Sparse multivariate polynomials as {exponent tuple: FieldElem} dicts."""

from __future__ import annotations

from .field import UniPoly


def padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def pscale(a: dict, c) -> dict:
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def pmul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e)
            out[e] = ca * cb if s is None else s + ca * cb
    return {e: c for e, c in out.items() if c}


def pderiv(a: dict, var: int) -> dict:
    out = {}
    for e, c in a.items():
        if e[var]:
            ne = list(e)
            ne[var] -= 1
            v = c * e[var]
            if v:
                out[tuple(ne)] = v
    return out


def peval(a: dict, point, spec):
    acc = spec.zero()
    for e, c in a.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x ** k
        acc = acc + term
    return acc


def linear_substitute(a: dict, forms, nvars: int) -> dict:
    """Substitute variable i -> forms[i] (each a list of nvars coefficients)."""
    lin = []
    for f in forms:
        d = {}
        for j, c in enumerate(f):
            if c:
                e = [0] * nvars
                e[j] = 1
                d[tuple(e)] = c
        lin.append(d)
    cache = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = {(0,) * nvars: forms[0][0].spec.one()}
            else:
                cache[key] = pmul(power(i, k - 1), lin[i])
        return cache[key]

    out = {}
    for e, c in a.items():
        term = {(0,) * nvars: c}
        for i, k in enumerate(e):
            if k:
                term = pmul(term, power(i, k))
        out = padd(out, term)
    return out


def as_poly_in(a: dict, var: int, other: int, spec):
    """View a bivariate dict (vars var, other) as coefficient list in `var`
    whose entries are UniPoly in `other`."""
    deg = max((e[var] for e in a), default=-1)
    buckets = [dict() for _ in range(deg + 1)]
    for e, c in a.items():
        buckets[e[var]][e[other]] = c
    out = []
    for b in buckets:
        if b:
            d = max(b)
            out.append(UniPoly(spec, [b.get(i, spec.zero()) for i in range(d + 1)]))
        else:
            out.append(UniPoly(spec, []))
    return out
