"""Local solubility of quadratic equations over Q_p and R.

A nondegenerate rational quadratic form is handled through a diagonal
representative ``<a_1, ..., a_r>``; its local invariants are the
discriminant class and the Hasse invariant ``prod_{i<j} (a_i, a_j)_p``.
Isotropy over Q_p then follows the classical rank-by-rank criterion:

    rank 2: -d is a square
    rank 3: (-1, -d) == eps
    rank 4: d is not a square, or eps == (-1, -1)
    rank >= 5: always

and ``f`` represents ``a != 0`` iff ``f + <-a>`` is isotropic.
"""

from fractions import Fraction
from math import isqrt

from sympy import factorint

REAL = "real"


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def square_class(x) -> int:
    """Integer representative of the square class of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    return x.numerator * x.denominator


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals; ``p == REAL`` for R."""
    a, b = square_class(a), square_class(b)
    if p == REAL:
        return -1 if a < 0 and b < 0 else 1
    alpha, beta = valuation(a, p), valuation(b, p)
    u, v = a // p**alpha, b // p**beta
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * _legendre(u, p) ** beta * _legendre(v, p) ** alpha


def is_local_square(x, p) -> bool:
    x = square_class(x)
    if p == REAL:
        return x > 0
    v = valuation(x, p)
    if v % 2:
        return False
    u = x // p**v
    if p == 2:
        return u % 8 == 1
    return _legendre(u, p) == 1


def invariants(diag, p):
    """Discriminant square class and Hasse invariant of ``<diag>`` at ``p``."""
    d = 1
    for a in diag:
        d *= square_class(a)
    eps = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            eps *= hilbert_symbol(diag[i], diag[j], p)
    return d, eps


def is_isotropic(diag, p) -> bool:
    """Whether the nondegenerate diagonal form has a nonzero zero over Q_p (or R)."""
    diag = [Fraction(a) for a in diag]
    if any(a == 0 for a in diag):
        raise ValueError("degenerate form")
    r = len(diag)
    if p == REAL:
        return any(a > 0 for a in diag) and any(a < 0 for a in diag)
    if r <= 1:
        return False
    if r >= 5:
        return True
    d, eps = invariants(diag, p)
    if r == 2:
        return is_local_square(-d, p)
    if r == 3:
        return hilbert_symbol(-1, -d, p) == eps
    return (not is_local_square(d, p)) or eps == hilbert_symbol(-1, -1, p)


def represents_locally(diag, n, p) -> bool:
    """Whether ``sum a_i x_i^2 = n`` has a solution over Q_p with x != 0."""
    if n == 0:
        return is_isotropic(diag, p)
    return is_isotropic(list(diag) + [-Fraction(n)], p)


def relevant_places(n: int, det: int):
    """Places where ``<v,v> = n`` can fail locally: R, 2 and primes of n*det."""
    primes = set(factorint(abs(2 * det * n) if n else abs(2 * det)))
    return [REAL] + sorted(primes)


def is_rational_square(x) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    return isqrt(x.numerator) ** 2 == x.numerator and isqrt(x.denominator) ** 2 == x.denominator
