"""Reference implementations that share no code with the package.

Each one is deliberately naive: brute force over a finite set, cofactor
expansion, explicit permutations. They are slow but obviously correct.
"""

from fractions import Fraction
from itertools import product
from math import gcd


def det_cofactor(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det_cofactor(minor)
    return total


def prime_divisors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def sl2_elements(m):
    return [(a, b, c, d) for a, b, c, d in product(range(m), repeat=4) if (a * d - b * c) % m == 1 % m]


def index_gamma(n):
    """[SL2(Z) : Gamma(N)] = N^3 prod (1 - 1/p^2)."""
    x = Fraction(n**3)
    for p in prime_divisors(n):
        x *= 1 - Fraction(1, p * p)
    return int(x)


def index_gamma0(n):
    x = Fraction(n)
    for p in prime_divisors(n):
        x *= 1 + Fraction(1, p)
    return int(x)


def index_gamma1(n):
    x = Fraction(n * n)
    for p in prime_divisors(n):
        x *= 1 - Fraction(1, p * p)
    return int(x)


def _act(mat, pt, m):
    a, b, c, d = mat
    x, y = pt
    return ((a * x + b * y) % m, (c * x + d * y) % m)


def orbit_bfs(gens, pt, m):
    seen, frontier = {pt}, [pt]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _act(g, p, m)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def count_cycles(perm):
    seen, cycles = set(), 0
    for start in perm:
        if start in seen:
            continue
        cycles += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = perm[x]
    return cycles


def nodal_genus(m, n_fibers, point=(1, 0)):
    """(degree, chi, genus) of the orbit of ``point`` under the full group mod m,
    branched over n_fibers points, each with local monodromy [[1,1],[0,1]]."""
    T = (1, 1, 0, 1)
    S = (0, m - 1, 1, 0)
    orb = orbit_bfs([T, S], point, m)
    perm = {p: _act(T, p, m) for p in orb}
    d = len(orb)
    chi = 2 * d - n_fibers * (d - count_cycles(perm))
    return d, chi, (2 - chi) // 2


def min_nodal_genus(m, n_fibers):
    """Minimal genus over all orbits of primitive points (full group mod m)."""
    T = (1, 1, 0, 1)
    S = (0, m - 1, 1, 0)
    todo = {(x, y) for x in range(m) for y in range(m) if gcd(gcd(x, y), m) == 1}
    best = None
    while todo:
        p = min(todo)
        orb = orbit_bfs([T, S], p, m)
        todo -= orb
        perm = {q: _act(T, q, m) for q in orb}
        d = len(orb)
        g = (2 - (2 * d - n_fibers * (d - count_cycles(perm)))) // 2
        best = g if best is None else min(best, g)
    return best


# Kodaira data from the standard table: name -> (euler, components)
KODAIRA = {"II": (2, 1), "III": (3, 2), "IV": (4, 3), "I0*": (6, 5), "IV*": (8, 7), "III*": (9, 8), "II*": (10, 9)}


def kodaira_types(max_chi):
    """(name, euler, rank) for every type with euler <= max_chi."""
    out = [(f"I_{n}", n, n - 1) for n in range(1, max_chi + 1)]
    for name, (e, k) in KODAIRA.items():
        if e <= max_chi:
            out.append((name, e, k - 1))
    out += [(f"I_{n}*", n + 6, n + 4) for n in range(1, max_chi - 5)]
    return out


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def _multisets(items, k):
    if k == 0:
        yield ()
        return
    for i, it in enumerate(items):
        for rest in _multisets(items[i:], k - 1):
            yield (it,) + rest


def configurations_by_partition(total_chi, max_rank):
    """Sorted-name multisets of fiber types: partition chi, then assign types per part."""
    by_euler = {}
    for name, e, r in kodaira_types(total_chi):
        by_euler.setdefault(e, []).append((name, r))
    out = set()
    for part in _partitions(total_chi):
        counts = {}
        for k in part:
            counts[k] = counts.get(k, 0) + 1
        choices = [list(_multisets(by_euler[k], c)) for k, c in sorted(counts.items())]
        for combo in product(*choices):
            fibs = [f for group in combo for f in group]
            if sum(r for _, r in fibs) <= max_rank:
                out.add(tuple(sorted(name for name, _ in fibs)))
    return out


def tate_type(vp, vq, vd):
    """Characteristic-zero Kodaira type from minimal valuations, written independently."""
    if vd == 0:
        return None
    if vp == 0 and vq == 0:
        return f"I_{vd}"
    table = [
        (lambda: vq == 1 and vd == 2, "II"),
        (lambda: vp == 1 and vd == 3, "III"),
        (lambda: vq == 2 and vd == 4, "IV"),
        (lambda: vd == 6 and vp >= 2 and vq >= 3, "I0*"),
        (lambda: vp == 2 and vq == 3 and vd > 6, f"I_{vd - 6}*"),
        (lambda: vq == 4 and vd == 8, "IV*"),
        (lambda: vp == 3 and vd == 9, "III*"),
        (lambda: vq == 5 and vd == 10, "II*"),
    ]
    for cond, name in table:
        if cond():
            return name
    return "?"
