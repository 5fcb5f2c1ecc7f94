"""Even integral lattices given by Gram matrices.

Everything here is exact: inner products are Python integers, signatures
come from a rational congruence diagonalization, and negative answers to
"does the lattice contain a vector of square n" are backed by a local
(p-adic or real) obstruction that can be re-checked independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import comb, gcd, isqrt
from typing import Sequence

import numpy as np
from sympy import factorint

from . import local
from .errors import InvalidInput
from .jsonio import int_matrix, to_int

WITNESS = "Witness"
OBSTRUCTED = "LocallyObstructed"
UNKNOWN = "UnknownWithinBound"

# Largest box (number of lattice points) scanned exhaustively by `represents`.
BOX_LIMIT = 4_000_000


@dataclass(frozen=True)
class GramLattice:
    gram: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        g = int_matrix(self.gram)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise InvalidInput("Gram matrix must be square and non-empty")
        for i in range(n):
            if g[i][i] % 2:
                raise InvalidInput(f"diagonal entry {g[i][i]} at {i} is odd; lattice must be even")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise InvalidInput(f"Gram matrix is not symmetric at ({i},{j})")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def diagonalization(self):
        return diagonalize(self.gram)

    @cached_property
    def determinant(self) -> int:
        d = Fraction(1)
        for a in self.diagonalization[0]:
            d *= a
        return int(d)

    @property
    def signature(self) -> tuple[int, int]:
        diag = self.diagonalization[0]
        return sum(1 for a in diag if a > 0), sum(1 for a in diag if a < 0)

    @property
    def is_nondegenerate(self) -> bool:
        return self.determinant != 0

    @property
    def is_hyperbolic(self) -> bool:
        return self.is_nondegenerate and self.signature == (1, self.rank - 1)

    @property
    def is_indefinite(self) -> bool:
        plus, minus = self.signature
        return plus > 0 and minus > 0

    def square(self, v) -> int:
        return inner_product(self, v, v)

    def to_json(self):
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data) -> GramLattice:
        if not isinstance(data, dict) or "gram" not in data:
            raise InvalidInput('lattice JSON must be an object with a "gram" key')
        lat = cls(data["gram"], name=data.get("name"))
        if "rank" in data and to_int(data["rank"]) != lat.rank:
            raise InvalidInput(f"declared rank {data['rank']} does not match Gram size {lat.rank}")
        return lat


def diagonalize(gram):
    """Exact congruence diagonalization over Q.

    Returns ``(diag, basis)`` with ``basis[i] . G . basis[j] = 0`` for i != j
    and ``diag[i] = basis[i] . G . basis[i]``. The change of basis has
    determinant +-1, so ``prod(diag) == det(G)``.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        basis[i], basis[j] = basis[j], basis[i]

    def add_to(i, j, f):
        # b_i <- b_i + f b_j (congruence: row and column operation)
        for k in range(n):
            a[i][k] += f * a[j][k]
        for k in range(n):
            a[k][i] += f * a[k][j]
        basis[i] = [x + f * y for x, y in zip(basis[i], basis[j])]

    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            add_to(i, j, Fraction(1))
            piv = i
        if piv != k:
            swap(piv, k)
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add_to(i, k, -a[i][k] / a[k][k])
    return [a[i][i] for i in range(n)], basis


def _vec(v) -> tuple:
    if isinstance(v, LatticeVector):
        return v.coords
    return tuple(to_int(x) for x in v)


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_int(x) for x in self.coords))

    @property
    def content(self) -> int:
        return reduce(gcd, self.coords, 0)

    @property
    def primitive(self) -> bool:
        return is_primitive(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def to_json(self):
        return list(self.coords)


def inner_product(lat: GramLattice, v, w) -> int:
    v, w = _vec(v), _vec(w)
    n = lat.rank
    if len(v) != n or len(w) != n:
        raise InvalidInput(f"vector lengths {len(v)}, {len(w)} do not match rank {n}")
    g = lat.gram
    return sum(v[i] * g[i][j] * w[j] for i in range(n) if v[i] for j in range(n) if w[j])


def is_primitive(v) -> bool:
    return reduce(gcd, _vec(v), 0) == 1


def primitive_part(v) -> tuple:
    v = _vec(v)
    c = reduce(gcd, v, 0)
    if c == 0:
        raise InvalidInput("zero vector has no primitive part")
    return tuple(x // c for x in v)


# --- standard lattices -------------------------------------------------------

# Bourbaki labelling: chain 1-3-4-5-6-7-8, node 2 attached to node 4.
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def _e8():
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    return g


def direct_sum(*blocks) -> list:
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def _scaled(g, c):
    return [[c * x for x in row] for row in g]


H_GRAM = [[0, 1], [1, 0]]

STANDARD_NAMES = ("H", "E8", "minusE8", "K3Lattice")


def standard_lattice(name: str) -> GramLattice:
    key = name.strip()
    lookup = {n.lower(): n for n in STANDARD_NAMES}
    lookup.update({"-e8": "minusE8", "k3": "K3Lattice", "u": "H"})
    canon = lookup.get(key.lower())
    if canon is None:
        raise InvalidInput(f"unknown standard lattice {name!r}; expected one of {', '.join(STANDARD_NAMES)}")
    if canon == "H":
        g = H_GRAM
    elif canon == "E8":
        g = _e8()
    elif canon == "minusE8":
        g = _scaled(_e8(), -1)
    else:
        g = direct_sum(H_GRAM, H_GRAM, H_GRAM, _scaled(_e8(), -1), _scaled(_e8(), -1))
    return GramLattice(g, name=canon)


def canonical_primitive(n: int) -> LatticeVector:
    """The representative (n/2, 1, 0, ..., 0) of primitive K3-lattice vectors of square n."""
    n = to_int(n)
    if n % 2:
        raise InvalidInput(f"square {n} is odd; the K3 lattice is even")
    return LatticeVector((n // 2, 1) + (0,) * 20)


def kummer_square(ell: int) -> int:
    """Square of the immersed rational curve built from a genus-2 curve of square 2*ell."""
    _check_ell(ell)
    return ell - 3


def ambient_square(ell: int) -> int:
    _check_ell(ell)
    return 2 * ell


def ell_for_square(n: int) -> int:
    n = to_int(n)
    if n < 0 or n % 2:
        raise InvalidInput(f"square {n} must be even and non-negative")
    return n + 3


def _check_ell(ell):
    if isinstance(ell, bool) or not isinstance(ell, int) or ell < 3 or ell % 2 == 0:
        raise InvalidInput(f"ell must be an odd integer >= 3, got {ell!r}")


# --- vector search -------------------------------------------------------------


def _dtype_for(lat: GramLattice, bound: int):
    top = max(abs(x) for row in lat.gram for x in row) or 1
    return np.int64 if top * lat.rank**2 * bound**2 < 2**62 else object


def _positive_first(rows: np.ndarray) -> np.ndarray:
    """Mask of rows whose first nonzero entry is positive."""
    nz = rows != 0
    has = nz.any(axis=1)
    first = nz.argmax(axis=1)
    lead = rows[np.arange(len(rows)), first]
    return has & (lead > 0)


def _box_blocks(lat: GramLattice, bound: int, coords: Sequence[int], cap: int = 200_000):
    """Yield (vectors, squares) for the sub-box supported on ``coords``.

    Vectors are full-length, cover every point with |x_i| <= bound on the
    given coordinates (zero elsewhere) and arrive in lexicographic order.
    """
    k = len(coords)
    dtype = _dtype_for(lat, bound)
    G = np.array([[lat.gram[i][j] for j in coords] for i in coords], dtype=dtype)
    side = 2 * bound + 1
    n_suf = 1
    while n_suf < k and side ** (n_suf + 1) <= cap:
        n_suf += 1
    n_pre = k - n_suf
    grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n_suf)), dtype=dtype)
    Gss = G[n_pre:, n_pre:]
    q_suf = ((grid @ Gss) * grid).sum(axis=1)
    for pre in itertools.product(range(-bound, bound + 1), repeat=n_pre):
        if n_pre:
            x = np.array(pre, dtype=dtype)
            cross = 2 * (x @ G[:n_pre, n_pre:])
            sq = int(x @ G[:n_pre, :n_pre] @ x) + grid @ cross + q_suf
        else:
            sq = q_suf
        yield pre, grid, sq


def _scan(lat, n, bound, coords, primitive_only, stop_first=False):
    r = lat.rank
    found = []
    for pre, grid, sq in _box_blocks(lat, bound, coords):
        if any(pre):
            if next(x for x in pre if x) < 0:
                continue
            mask = sq == n
        else:
            mask = (sq == n) & _positive_first(grid)
        if not mask.any():
            continue
        for row in grid[mask]:
            sub = tuple(pre) + tuple(int(x) for x in row)
            v = [0] * r
            for c, x in zip(coords, sub):
                v[c] = x
            v = tuple(v)
            if not any(v):
                continue
            if primitive_only and not is_primitive(v):
                continue
            found.append(v)
            if stop_first:
                return found
    return found


def enumerate_square(lat: GramLattice, n: int, bound: int, primitive_only: bool = False) -> list:
    """All nonzero v with max|v_i| <= bound and <v,v> = n, one of each pair +-v.

    The result is sorted lexicographically. The scan is exhaustive, so the
    cost grows like (2*bound+1)**rank.
    """
    bound = to_int(bound)
    if bound < 1:
        raise InvalidInput("bound must be >= 1")
    vecs = _scan(lat, to_int(n), bound, list(range(lat.rank)), primitive_only)
    return [LatticeVector(v) for v in sorted(vecs)]


def box_size(rank: int, bound: int) -> int:
    return (2 * bound + 1) ** rank


def _sparse_supports(rank: int, bound: int, budget: int):
    """Supports of increasing size whose total sub-box volume stays within budget."""
    spent = 0
    for s in range(1, rank + 1):
        cost = comb(rank, s) * (2 * bound + 1) ** s
        if spent + cost > budget:
            return
        spent += cost
        yield from itertools.combinations(range(rank), s)


def find_vector(lat: GramLattice, n: int, bound: int, primitive: bool = False):
    """Search for a vector of square n with coordinates bounded by ``bound``.

    Returns ``(vector or None, exhaustive)``; ``exhaustive`` tells whether the
    whole box was scanned (otherwise only sparse sub-boxes were tried).
    """
    # cheap sparse pass first: finds basis-like witnesses in large ranks instantly
    for support in _sparse_supports(lat.rank, bound, min(BOX_LIMIT, 200_000)):
        hit = _scan(lat, n, bound, list(support), primitive, stop_first=True)
        if hit:
            return hit[0], False
    if box_size(lat.rank, bound) <= BOX_LIMIT:
        hit = _scan(lat, n, bound, list(range(lat.rank)), primitive, stop_first=True)
        return (hit[0] if hit else None), True
    for support in _sparse_supports(lat.rank, bound, BOX_LIMIT):
        hit = _scan(lat, n, bound, list(support), primitive, stop_first=True)
        if hit:
            return hit[0], False
    return None, False


def _squarefree_split(x: Fraction):
    """Write a nonzero rational as ``c**2 * s`` with s a squarefree integer."""
    n = x.numerator * x.denominator
    s, c = (1 if n > 0 else -1), Fraction(1, x.denominator)
    for p, e in factorint(abs(n)).items():
        c *= p ** (e // 2)
        if e % 2:
            s *= p
    return c, s


def rational_isotropic_vector(lat: GramLattice, max_height: int = 16):
    """Primitive isotropic integer vector found through the rational diagonal form.

    Each diagonal entry is rescaled to a squarefree integer and a sub-form
    on at most five coordinates containing both signs is searched for a
    zero. Five-variable indefinite forms are isotropic over Q (Meyer), but
    the height needed can be large; prefer `isotropic_vector`, which uses
    this only for non-hyperbolic signatures.
    """
    diag, basis = lat.diagonalization
    if any(a == 0 for a in diag) or not lat.is_indefinite:
        return None
    split = [_squarefree_split(a) for a in diag]
    sf = [s for _, s in split]
    order = sorted(range(len(diag)), key=lambda i: (abs(sf[i]), i))
    pivot = next(i for i in order if sf[i] > 0)
    neg = next(i for i in order if sf[i] < 0)
    free = [neg] + [i for i in order if i not in (pivot, neg)][:3]
    coef = np.array([sf[i] for i in free], dtype=object)
    for h in range(1, max_height + 1):
        axis = np.arange(-h, h + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * len(free)), indexing="ij"), -1).reshape(-1, len(free))
        grid = grid[(np.abs(grid).max(axis=1) == h) & _positive_first(grid)]
        target = -sf[pivot] * (grid.astype(object) ** 2 @ coef)
        for idx in np.flatnonzero(target >= 0):
            t = int(target[idx])
            r = isqrt(t)
            if r * r != t:
                continue
            # sf[pivot] * z_pivot**2 = -sum sf_j z_j**2 with z_pivot = r / sf[pivot]
            z = {pivot: Fraction(r, sf[pivot])}
            z.update(zip(free, (Fraction(int(y)) for y in grid[idx])))
            # diag entry i is c_i**2 * sf_i, so the basis coefficient is z_i / c_i
            x = [sum(z[i] / split[i][0] * basis[i][k] for i in z) for k in range(lat.rank)]
            return _integral_primitive(lat, x)
    return None


def _integral_primitive(lat, x):
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in x), 1)
    v = primitive_part([int(c * den) for c in x])
    if inner_product(lat, v, v) != 0:  # pragma: no cover - exact arithmetic
        raise AssertionError("isotropic reconstruction failed")
    return v


def kernel_basis(c) -> list:
    """Integral basis (as rows) of {v in Z^n : c . v = 0}."""
    c = list(_vec(c))
    n = len(c)
    cols = [[int(i == j) for j in range(n)] for i in range(n)]  # cols[i] is column i of U
    while sum(1 for x in c if x) > 1:
        piv = min((i for i in range(n) if c[i]), key=lambda i: abs(c[i]))
        for j in range(n):
            if j != piv and c[j]:
                f = c[j] // c[piv]
                c[j] -= f * c[piv]
                cols[j] = [a - f * b for a, b in zip(cols[j], cols[piv])]
    return [cols[j] for j in range(n) if c[j] == 0]


def _gram_of(lat, basis):
    return [[inner_product(lat, u, w) for w in basis] for u in basis]


def _size_reduce(basis, gram_fn):
    """Greedy pairwise reduction of a positive definite basis (keeps the lattice)."""
    basis = [list(b) for b in basis]
    changed = True
    while changed:
        changed = False
        g = gram_fn(basis)
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                f = round(Fraction(g[i][j], g[j][j]))
                if f and g[i][i] - 2 * f * g[i][j] + f * f * g[j][j] < g[i][i]:
                    basis[i] = [a - f * b for a, b in zip(basis[i], basis[j])]
                    changed = True
                    break
            if changed:
                break
    return basis


def short_vectors(gram, max_norm: int):
    """Yield ``(u, norm)`` for nonzero u (one of +-u) with u.G.u <= max_norm.

    ``gram`` must be positive definite. Fincke-Pohst enumeration on the
    exact LDL^T decomposition; norms are exact integers.
    """
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    # q[i][i] holds the pivots, q[i][j] (j > i) the multipliers
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    diag = [q[i][i] for i in range(n)]
    mult = [[q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    u = [0] * n

    def rec(i, remaining):
        centre = -sum(mult[i][j] * u[j] for j in range(i + 1, n))
        span = isqrt(int(remaining / diag[i])) + 1
        lo, hi = int(centre) - span, int(centre) + span
        for x in range(lo, hi + 1):
            part = diag[i] * (x - centre) ** 2
            if part > remaining:
                continue
            u[i] = x
            if i == 0:
                if any(u):
                    norm = max_norm - (remaining - part)
                    yield tuple(u), int(norm)
            else:
                yield from rec(i - 1, remaining - part)
        u[i] = 0

    for vec, norm in rec(n - 1, Fraction(max_norm)):
        if next(x for x in vec if x) > 0:
            yield vec, norm


def _small_positive_vector(lat, budget: int = 1_000_000):
    """A vector of small positive square, preferring the smallest found in a small box."""
    best = None
    for bound in (1, 2, 3, 4):
        if box_size(lat.rank, bound) <= budget:
            supports = [tuple(range(lat.rank))]
        else:
            supports = _sparse_supports(lat.rank, bound, budget)
        for support in supports:
            for pre, grid, sq in _box_blocks(lat, bound, list(support)):
                pos = sq > 0
                if not pos.any():
                    continue
                idx = np.flatnonzero(pos)[np.argmin(sq[pos])]
                val = int(sq[idx])
                if best is None or val < best[0]:
                    sub = tuple(pre) + tuple(int(x) for x in grid[idx])
                    v = [0] * lat.rank
                    for c, x in zip(support, sub):
                        v[c] = x
                    best = (val, tuple(v))
        if best is not None:
            return best[1]
    diag, basis = lat.diagonalization
    i = next(i for i, a in enumerate(diag) if a > 0)
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in basis[i]), 1)
    return tuple(int(c * den) for c in basis[i])


def isotropic_vector(lat: GramLattice, max_norm: int = 10**7):
    """Primitive isotropic vector of an indefinite lattice, or None.

    Hyperbolic case: with <h,h> = a > 0 the complement M = h^perp is
    negative definite, and every isotropic v gives w = a v - <v,h> h in M
    with -<w,w> = a <v,h>**2. Conversely k h + w is isotropic whenever
    -<w,w> = a k**2, so short vectors of -M are scanned for norms of the
    form a k**2. The scan is complete up to ``max_norm``.
    """
    if not lat.is_indefinite:
        return None
    if not lat.is_hyperbolic:
        return rational_isotropic_vector(lat)
    h = _small_positive_vector(lat)
    a = inner_product(lat, h, h)
    c = [sum(lat.gram[i][j] * h[j] for j in range(lat.rank)) for i in range(lat.rank)]
    basis = kernel_basis(c)
    neg_gram = lambda b: [[-x for x in row] for row in _gram_of(lat, b)]
    basis = _size_reduce(basis, neg_gram)
    P = neg_gram(basis)
    bound = 4 * a
    while bound <= max_norm:
        for u, norm in short_vectors(P, bound):
            if norm % a:
                continue
            k = isqrt(norm // a)
            if k * k * a != norm:
                continue
            w = [sum(u[i] * basis[i][j] for i in range(len(basis))) for j in range(lat.rank)]
            return _integral_primitive(lat, [k * x + y for x, y in zip(h, w)])
        bound *= 4
    return None


# --- representation with certificates -----------------------------------------


@dataclass(frozen=True)
class RepresentationResult:
    status: str
    square: int
    search_bound: int
    witness: LatticeVector | None = None
    obstruction_place: int | str | None = None
    exhaustive: bool = False
    escalated: bool = False

    def __post_init__(self):
        if self.status not in (WITNESS, OBSTRUCTED, UNKNOWN):
            raise ValueError(f"bad status {self.status}")
        if (self.status == WITNESS) != (self.witness is not None):
            raise ValueError("witness present iff status is Witness")
        if (self.status == OBSTRUCTED) != (self.obstruction_place is not None):
            raise ValueError("obstruction place present iff status is LocallyObstructed")

    @property
    def obstruction_prime(self) -> int | None:
        p = self.obstruction_place
        return p if isinstance(p, int) else None

    @property
    def negative(self) -> bool:
        return self.status == OBSTRUCTED

    def to_json(self):
        out = {"status": self.status, "square": self.square, "search_bound": self.search_bound,
               "exhaustive": self.exhaustive, "escalated": self.escalated}
        if self.witness is not None:
            out["witness"] = list(self.witness.coords)
        if self.obstruction_place is not None:
            out["obstruction_place"] = self.obstruction_place
        return out


def local_obstruction(lat: GramLattice, n: int):
    """First place (``"real"`` or a prime) where <v,v> = n has no nonzero solution, or None."""
    diag = lat.diagonalization[0]
    for place in local.relevant_places(n, lat.determinant):
        if not local.represents_locally(diag, n, place):
            return place
    return None


def verify_obstruction(lat: GramLattice, n: int, place) -> bool:
    """Re-check a LocallyObstructed certificate from scratch."""
    diag, _ = diagonalize(lat.gram)
    return not local.represents_locally(diag, n, place)


def represents(lat: GramLattice, n: int, bound: int, escalate: bool = False) -> RepresentationResult:
    """Decide, as far as possible, whether some nonzero vector has square ``n``.

    Witness vectors for n = 0 are primitive. For n = 0 on indefinite
    lattices of rank >= 5 the answer is always a witness (the search is
    escalated past ``bound``); ``escalate=True`` extends that to any rank
    once no local obstruction exists.
    """
    n, bound = to_int(n), to_int(bound)
    if bound < 1:
        raise InvalidInput("bound must be >= 1")
    if not lat.is_nondegenerate:
        raise InvalidInput("degenerate lattice (determinant 0)")
    v, exhaustive = find_vector(lat, n, bound, primitive=(n == 0))
    if v is not None:
        return RepresentationResult(WITNESS, n, bound, witness=LatticeVector(v), exhaustive=exhaustive)
    place = local_obstruction(lat, n)
    if place is not None:
        return RepresentationResult(OBSTRUCTED, n, bound, obstruction_place=place, exhaustive=exhaustive)
    if n == 0 and (escalate or (lat.rank >= 5 and lat.is_indefinite)):
        v = isotropic_vector(lat)
        if v is not None:
            return RepresentationResult(WITNESS, n, bound, witness=LatticeVector(v),
                                        exhaustive=exhaustive, escalated=True)
    return RepresentationResult(UNKNOWN, n, bound, exhaustive=exhaustive)


def random_hyperbolic_lattice(rank: int, rng, entry_bound: int = 3, mix_steps: int = 4) -> GramLattice:
    """Random even lattice of signature (1, rank - 1).

    A positive first diagonal entry over a diagonally dominant negative
    block always gives the right signature (the Schur complement is
    positive); a few random unimodular row/column operations then hide
    the block shape.
    """
    if rank < 1:
        raise InvalidInput("rank must be positive")
    k = entry_bound
    g = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i):
            g[i][j] = g[j][i] = rng.randint(-k, k)
    g[0][0] = 2 * rng.randint(1, k)
    for i in range(1, rank):
        off = sum(abs(g[i][j]) for j in range(1, rank) if j != i)
        g[i][i] = -2 * rng.randint(off // 2 + 1, off // 2 + k)
    for _ in range(mix_steps):
        i, j = rng.sample(range(rank), 2) if rank > 1 else (0, 0)
        if i == j:
            break
        f = rng.choice((-1, 1))
        for c in range(rank):
            g[i][c] += f * g[j][c]
        for c in range(rank):
            g[c][i] += f * g[c][j]
    lat = GramLattice(g)
    if not lat.is_hyperbolic:  # pragma: no cover - guaranteed by construction
        raise AssertionError("generated lattice is not hyperbolic")
    return lat
