"""Plane cubics: smoothness, Hessian, the nine flexes, chord-tangent law, Weil pairing.

Run: python3 demos/02_cubics_and_flexes.py
"""
from sbcubic.field import make_field
from sbcubic.cubic import (
    WeierstrassCurve, chord_add, count_points, fermat, hesse_form, hessian, inflection_points,
    is_smooth, j_invariant, torsion3, weil3,
)

F7 = make_field(7)
f = fermat(F7)                      # x^3 + y^3 + z^3
print("smooth:", is_smooth(f), " hessian:", hessian(f))

# members of the Hesse pencil lam*xyz + x^3 + y^3 + z^3 are singular when lam^3 = -27
for lam in range(7):
    print("  lam =", lam, "smooth" if is_smooth(hesse_form(F7, lam)) else "singular")

cfg = inflection_points(f)
print("flexes over", cfg.spec, ":", cfg.points)
print("lines through three flexes:", len(cfg.triples))

# group law with the first flex as identity
O, P, Q = cfg.points[0], cfg.points[3], cfg.points[7]
print("P + Q =", chord_add(f, O, P, Q))
print("j =", j_invariant(f), " #C(F_7) =", count_points(f))

# 3-torsion and the Weil pairing on y^2 = x^3 + 2
W = WeierstrassCurve(0, 0, 0, 0, 2, F7)
big, E3 = torsion3(W)
print("E[3] lives over", big, "with", len(E3), "points")
P, Q = E3[1], E3[4]
print("e3(P, Q) =", weil3(W, P, Q), " e3(Q, P) =", weil3(W, Q, P))
