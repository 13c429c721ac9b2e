"""Batch front end: JSON lines in, JSON lines out.

Each input line is an object with a "verb" and its parameters.  A verb may
also be given on the command line with its parameters as one JSON argument.
Every output line carries "schema": "1".

Exit codes: 0 success, 2 invalid input, 3 a checked invariant failed,
4 internal arithmetic failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

SCHEMA = "1"
EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


# -- JSON helpers ------------------------------------------------------------------

def to_jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


def _field(doc, key="field", default=None):
    from .field import FieldError, field_from_json
    obj = doc.get(key, default)
    if obj is None:
        raise InputError(f"missing {key!r}")
    try:
        return field_from_json(obj)
    except (FieldError, KeyError, TypeError) as e:
        raise InputError(f"bad field {obj!r}: {e}") from e


def _elems(spec, values, n, what):
    if not isinstance(values, list) or len(values) != n:
        raise InputError(f"{what} needs a list of {n} field elements")
    try:
        return [spec.elem(v) for v in values]
    except Exception as e:
        raise InputError(f"bad {what}: {e}") from e


def _cubic(doc, spec, required=True):
    from .cubic import CubicForm, fermat
    if "cubic" not in doc:
        if required:
            raise InputError("missing 'cubic' (10 coefficients in the order x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3)")
        return fermat(spec)
    coeffs = _elems(spec, doc["cubic"], 10, "cubic")
    if not any(coeffs):
        raise InputError("zero cubic")
    return CubicForm(coeffs)


def _weierstrass(doc, spec):
    from .cubic import WeierstrassCurve
    return WeierstrassCurve(*_elems(spec, doc["weierstrass"], 5, "weierstrass"))


# -- verbs ---------------------------------------------------------------------------

def v_inflections(doc, ctx):
    from .cubic import inflection_points
    f = _cubic(doc, _field(doc))
    cfg = inflection_points(f)
    return {"field": cfg.spec, **cfg.to_json()}, True


def v_ei_table(doc, ctx):
    from .cubic import inflection_points
    from .hesse import EIGroup
    cfg = inflection_points(_cubic(doc, _field(doc)))
    E = EIGroup(cfg)
    return {"config": cfg.to_json(), **E.to_json(),
            "coords": [list(E.coords(a)) for a in range(9)]}, True


def v_heisenberg_roundtrip(doc, ctx):
    from .heisenberg import SGroup, inflections_to_S, random_conjugate, s_to_inflections, standard_pair
    spec = _field(doc, default={"p": 7})
    rng = random.Random(ctx["seed"])
    count = int(doc.get("count", 10))
    S0 = SGroup(standard_pair(spec))
    rows = []
    for _ in range(count):
        g, S = random_conjugate(S0, rng)
        I = s_to_inflections(S)
        S2 = inflections_to_S(I)
        rows.append({"g": g, "S_roundtrip": S2.same_as(S), "I_roundtrip": s_to_inflections(S2) == I})
    ok = all(r["S_roundtrip"] and r["I_roundtrip"] for r in rows)
    return {"count": count, "rows": rows}, ok


def v_pencil(doc, ctx):
    from .heisenberg import SGroup, fixed_pencil, pencil_orbits, standard_pair
    spec = _field(doc, default={"p": 7})
    S = SGroup(standard_pair(spec))
    pen = fixed_pencil(S)
    out = {"S": S, "pencil": pen}
    if "orbits_field" in doc:
        orbs = pencil_orbits(S, pen, field=_field(doc, "orbits_field"))
        out["orbits"] = [{**o, "members": [list(m) for m in o["members"]]} for o in orbs]
    return out, True


def v_j(doc, ctx):
    from .cubic import j_invariant
    spec = _field(doc)
    if "weierstrass" in doc:
        return {"j": _weierstrass(doc, spec).j()}, True
    return {"j": j_invariant(_cubic(doc, spec))}, True


def v_stabilizer_scan(doc, ctx):
    from .heisenberg import SGroup, stabilizer_scan, standard_pair
    if not (ctx["long"] or doc.get("long")):
        raise InputError("stabilizer-scan is long; pass --long or \"long\": true")
    spec = _field(doc, default={"p": 7})
    def progress(i, n):
        print(json.dumps({"schema": SCHEMA, "progress": [i, n]}), file=sys.stderr, flush=True)
    r = stabilizer_scan(SGroup(standard_pair(spec)), workers=ctx["workers"],
                        progress=progress if ctx.get("progress") else None)
    r["stabilizer"] = len(r["stabilizer"])
    ok = (r["stabilizer_order"] == 216 and r["stabilizer_equals_normalizer"] and r["kernel_is_S"]
          and r["quotient_is_SL2"])
    return r, ok


def _group_and_module(doc):
    from .cohomology import cyclic_group, matrix_group_f3, natural_module, trivial_module
    from .heisenberg import GL2_F3, SL2_F3
    name = doc.get("group", "SL2")
    if name in ("SL2", "GL2"):
        G = matrix_group_f3(SL2_F3 if name == "SL2" else GL2_F3)
    elif name == "cyclic":
        G = cyclic_group(int(doc.get("n", 3)))
    elif name in ("translations", "aff", "saff"):
        from .cubic import fermat, inflection_points
        from .field import make_field
        from .hesse import EIGroup, PermGroup, aff_group, translations
        cfg = inflection_points(fermat(make_field(7)))
        E = EIGroup(cfg)
        if name == "translations":
            G = PermGroup(translations(E))
        else:
            aff, saff = aff_group(cfg, E)
            G = PermGroup([g.perm for g in (aff if name == "aff" else saff)])
        if doc.get("module", "natural") == "natural":
            return G, [E.linear_matrix(p) for p in G.elements]
    else:
        raise InputError(f"unknown group {name!r}")
    module = doc.get("module", "natural")
    if module == "trivial":
        return G, trivial_module(G, int(doc.get("dim", 2)))
    if module == "natural" and name in ("SL2", "GL2"):
        return G, natural_module(G)
    raise InputError(f"module {module!r} is not available for group {name!r}")


def v_cohomology(doc, ctx):
    from .cohomology import h1, h1_bruteforce
    G, M = _group_and_module(doc)
    r = h1(G, M)
    out = {"group_order": len(G), "dim": r.dim, "dim_z1": r.dim_z1, "dim_b1": r.dim_b1,
           "basis": [{str(i): v for i, v in enumerate(z.tolist())} for z in r.basis]}
    ok = True
    if doc.get("bruteforce") and len(G) <= 24:
        out["bruteforce_dim"] = h1_bruteforce(G, M)
        ok = out["bruteforce_dim"] == r.dim
    return out, ok


def v_gamma_check(doc, ctx):
    from .cohomology import unique_gamma_check
    from .cubic import inflection_points
    spec = _field(doc, default={"p": 7})
    r = unique_gamma_check(inflection_points(_cubic(doc, spec, required=False)))
    ok = all(r[k]["unique"] and r[k]["restricts_to_identity"] for k in ("SAff", "Aff"))
    return r, ok and r["no_element_of_order_9"]


def _standard_S_over(base):
    from .field import make_field
    from .heisenberg import SGroup, standard_pair
    k = 1 if (base.order - 1) % 3 == 0 else 2
    return SGroup(standard_pair(make_field(base.p, base.n * k)))


def v_descent(doc, ctx):
    from .cohomology import GaloisSetup, descent_construct, equivariant_isomorphisms
    base = _field(doc, "base")
    E = _weierstrass(doc, base)
    setup = GaloisSetup(base)
    S = _standard_S_over(base)
    phi = None
    if "phi_index" in doc:
        _, phis = equivariant_isomorphisms(setup, S, E)
        try:
            phi = phis[int(doc["phi_index"])]
        except IndexError:
            raise InputError(f"only {len(phis)} admissible phi") from None
    r = descent_construct(setup, S, E, phi=phi)
    trans = []
    for tr in r.transcripts:
        tr = dict(tr)
        tr["phis"] = [{"phi": list(p["phi"]), "gbar": list(p["gbar"])} for p in tr["phis"]]
        trans.append(tr)
    return {"curve": r.curve, "curves": r.curves, "transcripts": trans}, all(t["ok"] for t in trans)


def v_curve_cocycle(doc, ctx):
    from .cohomology import GaloisSetup, curve_cocycle
    base = _field(doc)
    f = _cubic(doc, base, required=False)
    setup = GaloisSetup(base)
    r = curve_cocycle(setup, f)
    if "flex" in doc:
        r = curve_cocycle(setup, f, r["config"].points[int(doc["flex"])])
    out = {k: v for k, v in r.items() if k not in ("group",)}
    out["coboundary"] = None if r["coboundary"] is None else r["coboundary"].tolist()
    return out, r["is_cocycle"] and r["equals_pullback"]


def _local(doc):
    from .field import make_field
    from .localarith import LocalField
    return LocalField(make_field(int(doc.get("p", 7)), int(doc.get("n", 1))), int(doc.get("level", 1)))


def _class_vec(F, v, what):
    if not isinstance(v, list) or len(v) != F.class_rank:
        raise InputError(f"{what} must be a cube-class vector over {list(F.class_basis)}")
    return tuple(int(x) % 3 for x in v)


def _algebra(F, obj):
    from .localarith import SymbolAlgebra
    a = _class_vec(F, obj.get("a"), "a")
    b = _class_vec(F, obj.get("b"), "b")
    return SymbolAlgebra(F, F.class_rep(a), F.class_rep(b))


def v_prop17(doc, ctx):
    from .localarith import prop17_decide
    F = _local(doc)
    A = _algebra(F, doc.get("algebra", {}))
    K = _class_vec(F, doc.get("K"), "K")
    if not any(K):
        raise InputError("K must be a nontrivial class")
    return {"algebra": A, **prop17_decide(A, K)}, True


def v_cor19(doc, ctx):
    from .localarith import QuadraticExtension, cor19_decide
    F = _local(doc)
    if F.level != 1:
        raise InputError("cor19 works at level 1")
    D = _algebra(F, doc.get("D", {}))
    K = doc.get("K", {"kind": "unramified"})
    Q = QuadraticExtension(F, K.get("kind", "unramified"), K.get("d", 1))
    return {"D": D, "K": Q, **cor19_decide(D, Q)}, True


def v_selftest(doc, ctx):
    from .acceptance import run_all
    r = run_all(long=ctx["long"] or bool(doc.get("long")), workers=ctx["workers"])
    return r, all(v["ok"] is not False for v in r.values())


VERBS = {
    "inflections": v_inflections,
    "ei-table": v_ei_table,
    "heisenberg-roundtrip": v_heisenberg_roundtrip,
    "pencil": v_pencil,
    "j": v_j,
    "stabilizer-scan": v_stabilizer_scan,
    "cohomology": v_cohomology,
    "gamma-check": v_gamma_check,
    "descent": v_descent,
    "curve-cocycle": v_curve_cocycle,
    "prop17": v_prop17,
    "cor19": v_cor19,
    "selftest": v_selftest,
}


def run(doc: dict, seed: int = 0, workers: int = 1, long: bool = False, progress: bool = False):
    """Executes one command; returns (report dict, exit code)."""
    from .cohomology import ConstructionFailed
    verb = doc.get("verb") if isinstance(doc, dict) else None
    if verb not in VERBS:
        return _error(verb, EXIT_INPUT, "UnknownVerb", f"unknown verb {verb!r}"), EXIT_INPUT
    ctx = {"seed": int(doc.get("seed", seed)), "workers": int(doc.get("workers", workers)),
           "long": long, "progress": progress}
    try:
        result, ok = VERBS[verb](doc, ctx)
    except (InputError, KeyError, TypeError) as e:
        return _error(verb, EXIT_INPUT, type(e).__name__, str(e)), EXIT_INPUT
    except ConstructionFailed as e:
        return _error(verb, EXIT_VERIFY, type(e).__name__, str(e)), EXIT_VERIFY
    except ArithmeticError as e:
        return _error(verb, EXIT_INTERNAL, type(e).__name__, str(e)), EXIT_INTERNAL
    except ValueError as e:
        # domain preconditions (singular curve, unstable S, ...) are input errors
        return _error(verb, EXIT_INPUT, type(e).__name__, str(e)), EXIT_INPUT
    except Exception as e:  # pragma: no cover
        return _error(verb, EXIT_INTERNAL, type(e).__name__, str(e)), EXIT_INTERNAL
    code = EXIT_OK if ok else EXIT_VERIFY
    return {"schema": SCHEMA, "verb": verb, "ok": bool(ok), "result": to_jsonable(result)}, code


def _error(verb, code, kind, message):
    return {"schema": SCHEMA, "verb": verb, "ok": False,
            "error": {"code": code, "type": kind, "message": message}}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="sbcubic", description=__doc__.splitlines()[0])
    ap.add_argument("verb", nargs="?", help="run one verb instead of reading JSON lines from stdin")
    ap.add_argument("params", nargs="?", default="{}", help="JSON object of parameters for the verb")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--long", action="store_true", help="allow the exhaustive PGL_3 scan")
    ap.add_argument("--progress", action="store_true", help="progress lines on stderr for long scans")
    args = ap.parse_args(argv)
    docs = []
    try:
        if args.verb:
            params = json.loads(args.params)
            if not isinstance(params, dict):
                raise InputError("parameters must be a JSON object")
            docs.append({**params, "verb": args.verb})
        else:
            for line in sys.stdin:
                if line.strip():
                    docs.append(json.loads(line))
    except (json.JSONDecodeError, InputError) as e:
        print(json.dumps(_error(None, EXIT_INPUT, type(e).__name__, str(e)), sort_keys=True))
        return EXIT_INPUT
    # unknown verbs are rejected before any computation
    bad = [d for d in docs if not isinstance(d, dict) or d.get("verb") not in VERBS]
    if bad:
        for d in bad:
            verb = d.get("verb") if isinstance(d, dict) else None
            print(json.dumps(_error(verb, EXIT_INPUT, "UnknownVerb", f"unknown verb {verb!r}"), sort_keys=True))
        return EXIT_INPUT
    worst = EXIT_OK
    for d in docs:
        report, code = run(d, seed=args.seed, workers=args.workers, long=args.long, progress=args.progress)
        print(json.dumps(report, sort_keys=True), flush=True)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
