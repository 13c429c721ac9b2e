"""Cubic symbol algebras over F_7((t)) and F_7((s))((t)).

Run: python3 demos/06_local_symbols.py
"""
from sbcubic.field import make_field
from sbcubic.localarith import (
    LocalField, QuadraticExtension, SymbolAlgebra, cor19_decide, division_classes, is_split, norm_classes,
    prop17_decide,
)

F7 = make_field(7)
L1 = LocalField(F7)          # F_7((t))
L2 = LocalField(F7, 2)       # F_7((s))((t))

# a symbol algebra (a, b) is described by the cube classes of a and b
A = SymbolAlgebra(L1, L1.const(3), L1.t())
print("(3, t) split:", A.is_split())
print("division pairs over F_7((t)):", len(division_classes(L1)))

# cubic extension K = F(t^(1/3)); its norms are an index-3 subgroup of cube classes
K = (0, 1)
print("norm classes from K:", sorted(norm_classes(L1, K)))
r = prop17_decide(A, K)
print("A contains K:", r["exists"], " witness:", r["witness"], " split by witness:", is_split(A, tuple(r["witness"])))

# at level two the t-unramified algebra (3, s) does not contain the t-ramified K
B = SymbolAlgebra(L2, L2.const(3), L2.s())
r = prop17_decide(B, (0, 0, 1))
print("level 2: exists =", r["exists"], " norm index =", r["norm_index"])

# no division algebra over F_7((t)) has an anti-invariant splitting class for a quadratic K
for kind, d in (("unramified", 1), ("ramified", 1), ("ramified", 3)):
    Q = QuadraticExtension(L1, kind, d)
    hits = [cor19_decide(SymbolAlgebra(L1, L1.class_rep(a), L1.class_rep(b)), Q)["exists"]
            for a, b in division_classes(L1)]
    print(kind, d, "any:", any(hits))
