"""Congruence primes for Ikeda lifts on U(n, n): exact q-expansions, special
L-values with rational recognition, and certification of congruence primes."""

__version__ = "0.1.0"
