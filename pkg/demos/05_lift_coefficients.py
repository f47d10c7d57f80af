"""Fourier coefficients of the lift and the congruence they inherit."""
from congr.ikeda import LiftContext, lift_coeff, lift_congruence_check, nonvanishing_sweep, supported_gammas
from congr.qexp import newform_s26

ctx = LiftContext(5, 2, 13)
phi = newform_s26(300)

for gamma in supported_gammas(ctx, 30):
    print(f"c({gamma:>3}) = {lift_coeff(gamma, ctx, phi)}")

coeffs = list(phi.coeffs)
coeffs[5] += 31**2
twin = phi.with_coeffs(coeffs, "perturbed at 5")
print(lift_congruence_check(phi, twin, 31, 2, 300, ctx))

for ell in (31, 523, 6761):
    print(nonvanishing_sweep(phi, ell, 100).message())
