"""Numerical L-values and the functional-equation test.

Lambda(s) is computed twice with different splitting parameters; the two agree
only when conductor, gamma factor and root number are right.
"""
import mpmath

from congr.exact import DirichletCharacter
from congr.lseries import afe_eval, dirichlet_spec, euler_product, fe_residual, sym2_selected, zeta_spec
from congr.qexp import newform_s26

print(afe_eval(zeta_spec(), 2, 50))

spec = dirichlet_spec(DirichletCharacter.kronecker(-4))
with mpmath.workdps(50):
    print("L(1, chi_-4) =", mpmath.nstr(afe_eval(spec, 1, 50).value, 40))
    print("pi/4         =", mpmath.nstr(mpmath.pi / 4, 40))

wrong = spec.replace(conductor=8)
s = mpmath.mpc("0.7", "1.1")
print("residual, right conductor:", mpmath.nstr(fe_residual(spec, s, 50), 3))
print("residual, wrong conductor:", mpmath.nstr(fe_residual(wrong, s, 50), 3))

with mpmath.workdps(40):
    print("Euler product p <= 10^4 at s = 12:", mpmath.nstr(euler_product(spec, 12, 10**4), 30))

# choose the conductor and gamma shift of the twisted symmetric square
phi = newform_s26(10_000)
chosen, report = sym2_selected(phi, DirichletCharacter.kronecker(-3))
print("\n".join(report.lines()))
