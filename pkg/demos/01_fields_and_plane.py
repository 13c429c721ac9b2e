"""Finite fields and the projective plane over them.

Run: python3 demos/01_fields_and_plane.py
"""
from sbcubic.field import make_field
from sbcubic.projlin import Mat3, ProjPoint, act_point, all_points, collinear

F7 = make_field(7)
F25 = make_field(5, 2)
print(F7, F25)

# arithmetic in F_25 goes through the canonical modulus
a = F25.gen()
print("a^24 =", a ** 24, " inverse of a+1:", (a + 1).inverse())

# P^2(F_7) has 7^2 + 7 + 1 points
pts = list(all_points(F7))
print("points of P^2(F_7):", len(pts))

P, Q = ProjPoint(1, 0, 0, spec=F7), ProjPoint(0, 1, 0, spec=F7)
R = ProjPoint(1, 1, 0, spec=F7)
print("collinear", P, Q, R, "->", collinear(P, Q, R))

# a linear map moves points but keeps lines as lines
g = Mat3([[1, 2, 0], [0, 1, 3], [0, 0, 1]], F7)
print("images:", [act_point(g, X) for X in (P, Q, R)])
print("still collinear:", collinear(*(act_point(g, X) for X in (P, Q, R))))
