"""The Hesse configuration, its translation group E(I), and the Heisenberg group S.

Run: python3 demos/03_hesse_and_heisenberg.py
"""
from sbcubic.field import make_field
from sbcubic.cubic import fermat, inflection_points
from sbcubic.hesse import aff_group, build_EI, psi
from sbcubic.heisenberg import SGroup, fixed_pencil, inflections_to_S, pencil_orbits, s_to_inflections, standard_pair

F7 = make_field(7)
cfg = inflection_points(fermat(F7))

# E(I): the nine translations of the flex configuration, isomorphic to (Z/3)^2
E = build_EI(cfg)
print("Cayley table of E(I):")
print(E.table)
print("alpha, beta =", E.alpha, E.beta)
aff, saff = aff_group(cfg, E)
print("affine automorphisms:", len(aff), " special ones:", len(saff))

# the Heisenberg group fixing the flexes, recovered from the points alone
S = inflections_to_S(cfg)
print("S recovered from the flexes matches the standard pair:", S.same_as(SGroup(standard_pair(F7))))
print("translation of each element of S:", sorted(psi(E, s) for s in S))
print("round trip gives the same points:", s_to_inflections(S) == cfg)

# cubics invariant under S form a pencil; the normalizer permutes its members
F13 = make_field(13)
S13 = SGroup(standard_pair(F13))
pencil = fixed_pencil(S13)
for orb in pencil_orbits(S13, pencil):
    print("orbit of size", orb["size"], "smooth" if orb["smooth"] else "singular", "j =", orb["j"])
