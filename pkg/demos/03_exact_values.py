"""Exact Dirichlet L-values and rational recognition from high-precision floats."""
from fractions import Fraction

import mpmath

from congr.exact import DirichletCharacter, cf_recognize, dirichlet_L_critical, factor

chi = DirichletCharacter.kronecker(-3)
for j in range(2, 6):
    value = dirichlet_L_critical(j, chi.power(j))
    print(f"L({j}, {chi.power(j).tag()}) / pi^{j} = {value.algebraic()}")

print("factor(2^37 * 523 * 6761) =", factor(2**37 * 523 * 6761))

target = Fraction(2**37 * 523, 3**33 * 5**5 * 7**2 * 11 * 13 * 23)
with mpmath.workdps(160):
    x = mpmath.mpf(target.numerator) / target.denominator
    print("recognized:", cf_recognize(x, 150, 40) == target)
    print("pi recognized as:", cf_recognize(+mpmath.pi, 150, 40))
