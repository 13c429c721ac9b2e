"""Group cohomology H^1 with F_3 coefficients, and the canonical class gamma.

Run: python3 demos/04_cohomology.py
"""
from sbcubic.field import make_field
from sbcubic.cubic import fermat, inflection_points
from sbcubic.heisenberg import GL2_F3, SL2_F3
from sbcubic.cohomology import (
    cyclic_group, h1, h1_bruteforce, inflation_restriction_dims, matrix_group_f3, natural_module,
    trivial_module, unique_gamma_check,
)

# with trivial action on F_3^2, H^1 of a cyclic group is Hom(C_n, F_3^2)
for n in (2, 3, 6, 9):
    G = cyclic_group(n)
    print(f"C{n}: dim H^1 =", h1(G, trivial_module(G)).dim)

# GL_2(F_3) and SL_2(F_3) acting on F_3^2: no nontrivial classes
for name, mats in (("GL2", GL2_F3), ("SL2", SL2_F3)):
    G = matrix_group_f3(mats)
    print(name, "order", len(G.elements), "dim H^1 =", h1(G, natural_module(G)).dim)
G = matrix_group_f3(SL2_F3)
print("brute force agrees for SL2:", h1_bruteforce(G, natural_module(G)))

# inflation-restriction: the two sides match
G = cyclic_group(9)
print("C9 over C3:", inflation_restriction_dims(G, trivial_module(G), [0, 3, 6]))

# the class of the affine group acting on E(I) that restricts to the identity on translations
rep = unique_gamma_check(inflection_points(fermat(make_field(7))))
for name in ("SAff", "Aff"):
    r = rep[name]
    print(name, "order", r["order"], "unique gamma:", r["unique"])
print("largest element order in Aff:", rep["max_element_order"])
