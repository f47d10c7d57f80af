"""The CM form attached to a Hecke character of Q(sqrt(-3)).

The character sends a principal ideal (alpha) to alpha^6, which is well defined
because every unit of Q(sqrt(-3)) is a sixth root of unity. Infinity types that
are not multiples of 6 are rejected.
"""
from congr.heckechar import HeckeCharSpec, ImagQuadField, UnitObstruction, cm_form, ideals_of_norm

K = ImagQuadField(-3)
g = cm_form(HeckeCharSpec(K, 6), 40)
print(f"weight {g.weight}, level {g.level}")
print("nonzero coefficients:", {n: g[n] for n in range(1, 41) if g[n]})

for p in (2, 5, 7, 13):
    print(f"p = {p:>2} {K.splitting(p):<8} ideals of norm p: {[str(a) for a in ideals_of_norm(K, p)]}")

try:
    HeckeCharSpec(K, 4)
except UnitObstruction as exc:
    print("u = -4 is rejected:", exc)
