"""Univariate polynomials over Q with exact Fraction coefficients.

gcd, square-free decomposition (Yun) and resultants are done here;
irreducible factorization of square-free parts is delegated to sympy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .errors import InvalidInput
from .jsonio import to_rational


class Poly:
    """Immutable polynomial; ``coeffs`` ascending, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [to_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, deg: int, coeff=1) -> Poly:
        return cls([0] * deg + [coeff])

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        elif not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            f = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = f
            if f:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= f * c
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return Poly([c / self.lead for c in self.coeffs])

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divides(self, other) -> bool:
        return (_coerce(other) % self).is_zero()

    def primitive_integer(self) -> Poly:
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if self.is_zero():
            return self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return Poly([x // g for x in ints])

    def reversed_to(self, deg: int) -> Poly:
        """s^deg * f(1/s) for a formal degree ``deg`` >= degree."""
        if self.is_zero():
            return self
        if self.degree > deg:
            raise InvalidInput(f"degree {self.degree} exceeds formal degree {deg}")
        c = list(self.coeffs) + [Fraction(0)] * (deg - self.degree)
        return Poly(reversed(c))

    def to_json(self):
        return [c for c in self.coeffs]

    def to_sympy(self, var):
        import sympy

        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)], var, domain="QQ")


def _coerce(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero only if both are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def squarefree_decomposition(f: Poly) -> list:
    """Yun's algorithm: [(a_i, i)] with f = lead * prod a_i**i, a_i square-free, coprime."""
    if f.is_zero():
        raise InvalidInput("zero polynomial has no square-free decomposition")
    f = f.monic()
    out = []
    b = poly_gcd(f, f.derivative())
    c = f // b
    d = f.derivative() // b - c.derivative()
    i = 1
    while c.degree and c.degree > 0:
        a = poly_gcd(c, d)
        c = c // a
        d = d // a - c.derivative()
        if a.degree and a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def squarefree_part(f: Poly) -> Poly:
    out = Poly([1])
    for a, _ in squarefree_decomposition(f):
        out = out * a
    return out


def resultant(f: Poly, g: Poly) -> Fraction:
    """Determinant of the Sylvester matrix, by exact Gaussian elimination."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return Fraction(1)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(reversed(f.coeffs)) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(reversed(g.coeffs)) + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col]:
                f_ = rows[r][col] / rows[col][col]
                rows[r] = [x - f_ * y for x, y in zip(rows[r], rows[col])]
    return det


def irreducible_factors(f: Poly) -> list:
    """[(monic irreducible factor over Q, multiplicity)], sorted by (degree, coefficients)."""
    import sympy

    t = sympy.Symbol("t")
    out = []
    for a, mult in squarefree_decomposition(f):
        for fac, e in a.to_sympy(t).factor_list()[1]:
            coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
            out.append((Poly(coeffs).monic(), mult * e))
    out.sort(key=lambda fe: (fe[0].degree, fe[0].coeffs))
    return out


def valuation(f: Poly, pi: Poly) -> int | None:
    """Multiplicity of the irreducible ``pi`` in f (None for f = 0)."""
    if f.is_zero():
        return None
    v = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return v
        f, v = q, v + 1
