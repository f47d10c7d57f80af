"""Level-one eigenforms from Eisenstein series and Delta.

Builds the weight 26 newform, checks that its Hecke eigenvalues are
multiplicative, and reduces it modulo a congruence prime.
"""
from congr.exact import primes_upto
from congr.qexp import delta, eisenstein, newform_s26, reduce_mod, satake

phi = newform_s26(200)
print("weight 26 newform:", list(phi.coeffs[1:7]))
print("Delta:            ", list(delta(7).coeffs[1:7]))
print("E_4:              ", list(eisenstein(4, 6).coeffs))

# a(mn) = a(m) a(n) for coprime m, n, and a(p^2) = a(p)^2 - p^25
assert phi[6] == phi[2] * phi[3]
assert all(phi[p * p] == phi[p] ** 2 - p**25 for p in primes_upto(14))

for p in (2, 3, 5):
    s = satake(phi, p)
    print(f"p = {p}: alpha + beta = {s.trace}, alpha beta = p^25, discriminant < 0: {s.hecke_discriminant() < 0}")

print("a(n) mod 31 for n < 12:", reduce_mod(phi, 31)[1:12])
