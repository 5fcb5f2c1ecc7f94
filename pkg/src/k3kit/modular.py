"""Monodromy images in SL2(Z/m) and torsion multisections.

A torsion multisection of order m in a Jacobian elliptic fibration is an
orbit of the monodromy group on the m-torsion of a general fiber. The
action on m-torsion factors through SL2(Z/m), so all computations here
run inside that finite group: orbits, indices, degree bounds, and the
Euler characteristic of the multisection as a branched cover of the base.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, pi
from typing import Iterable, Sequence

import numpy as np
from sympy import primefactors

from .errors import InvalidInput
from .jsonio import int_matrix, to_int

T = ((1, 1), (0, 1))
S = ((0, -1), (1, 0))

# rational bracket of pi, used to bound 6/pi^2 from both sides exactly
PI_LOWER = Fraction(314159265358979, 10**14)
PI_UPPER = Fraction(314159265358980, 10**14)


def six_over_pi_squared_bounds() -> tuple[Fraction, Fraction]:
    return 6 / PI_UPPER**2, 6 / PI_LOWER**2


def _level(m) -> int:
    m = to_int(m)
    if m < 2:
        raise InvalidInput(f"level must be >= 2, got {m}")
    return m


def sl2_order(m: int) -> int:
    """|SL2(Z/m)| = m^3 prod_{p | m} (1 - 1/p^2)."""
    out = m**3
    for p in primefactors(m):
        out = out // (p * p) * (p * p - 1)
    return out


def _reduce(mat, m) -> tuple:
    (a, b), (c, d) = int_matrix(mat)
    return (a % m, b % m, c % m, d % m)


def _mul(x, y, m):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m, (c * f + d * h) % m)


@dataclass(frozen=True)
class MatrixMod:
    entries: tuple
    level: int

    def __post_init__(self):
        m = _level(self.level)
        ent = tuple(self.entries)
        if len(ent) == 2:
            ent = _reduce(ent, m)
        else:
            ent = tuple(to_int(x) % m for x in ent)
        a, b, c, d = ent
        if (a * d - b * c) % m != 1:
            raise InvalidInput(f"matrix {ent} has determinant {(a * d - b * c) % m} != 1 mod {m}")
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "level", m)

    def __mul__(self, other: MatrixMod) -> MatrixMod:
        if self.level != other.level:
            raise InvalidInput("level mismatch")
        return MatrixMod(_mul(self.entries, other.entries, self.level), self.level)

    def act(self, point) -> tuple:
        a, b, c, d = self.entries
        x, y = point
        return ((a * x + b * y) % self.level, (c * x + d * y) % self.level)

    def to_json(self):
        a, b, c, d = self.entries
        return [[a, b], [c, d]]


@dataclass(frozen=True)
class TorsionPoint:
    x: int
    y: int
    level: int

    def __post_init__(self):
        m = _level(self.level)
        object.__setattr__(self, "x", to_int(self.x) % m)
        object.__setattr__(self, "y", to_int(self.y) % m)
        object.__setattr__(self, "level", m)

    @property
    def coords(self) -> tuple:
        return (self.x, self.y)

    @property
    def order(self) -> int:
        return self.level // gcd(self.x, self.y, self.level)

    @property
    def primitive(self) -> bool:
        return gcd(self.x, self.y, self.level) == 1


def closure(generators: Iterable, m: int) -> frozenset:
    """Elements of the subgroup of SL2(Z/m) generated by ``generators`` (BFS)."""
    gens = [g for g in generators]
    ident = (1, 0, 0, 1)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _mul(x, g, m)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


@lru_cache(maxsize=64)
def _sl2_array(m: int) -> np.ndarray:
    r = np.arange(m)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    ok = (a * d - b * c) % m == 1
    return np.stack([a[ok], b[ok], c[ok], d[ok]], axis=1)


class FiniteMatrixGroup:
    """A subgroup of SL2(Z/m), stored as its full element set."""

    def __init__(self, level: int, elements: Iterable, generators: Sequence = (), label: str = ""):
        self.level = _level(level)
        self.elements = frozenset(tuple(int(x) for x in e) for e in elements)
        self.generators = tuple(generators)
        self.label = label
        if (1, 0, 0, 1) not in self.elements:
            raise InvalidInput("group must contain the identity")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, mat) -> bool:
        ent = mat.entries if isinstance(mat, MatrixMod) else _reduce(mat, self.level)
        return ent in self.elements

    def __repr__(self):
        return f"FiniteMatrixGroup({self.label or 'custom'}, level={self.level}, order={len(self)})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(sorted(self.elements), dtype=np.int64).reshape(-1, 4)

    def is_closed(self) -> bool:
        m = self.level
        for x in self.elements:
            for y in self.generators or self.elements:
                if _mul(x, y, m) not in self.elements:
                    return False
        return True

    def generating_set(self) -> tuple:
        """Generators as given, or a greedy generating set for filtered images."""
        if self.generators:
            return self.generators
        gens, span = [], frozenset({(1, 0, 0, 1)})
        for e in sorted(self.elements):
            if e not in span:
                gens.append(e)
                span = closure(gens, self.level)
                if len(span) == len(self.elements):
                    break
        return tuple(gens)

    def to_json(self):
        return {
            "label": self.label,
            "level": self.level,
            "order": self.order,
            "index": index_in_full(self),
            "generators": [[[a, b], [c, d]] for a, b, c, d in self.generating_set()],
        }

    @classmethod
    def from_json(cls, data) -> FiniteMatrixGroup:
        """Rebuild from ``to_json`` output; the declared order is re-checked."""
        if not isinstance(data, dict) or not {"level", "generators"} <= data.keys():
            raise InvalidInput('group JSON needs "level" and "generators"')
        m = _level(data["level"])
        gens = tuple(_reduce(int_matrix(g), m) for g in data["generators"])
        G = cls(m, closure(gens, m), gens, label=data.get("label", ""))
        if "order" in data and to_int(data["order"]) != G.order:
            raise InvalidInput(f"declared order {data['order']} != generated order {G.order}")
        return G


_SPEC_RE = re.compile(r"^\s*(gamma0|gamma1|gamma)\s*\(\s*(\d+)\s*\)\s*$", re.IGNORECASE)


def parse_group_spec(spec):
    """Normalize a group spec: "full", "gamma(N)", "gamma0(N)", "gamma1(N)" or generators."""
    if isinstance(spec, str):
        s = spec.strip()
        if s.lower() == "full":
            return ("full", None)
        match = _SPEC_RE.match(s)
        if match:
            kind, n = match.group(1).lower(), int(match.group(2))
            if n < 1:
                raise InvalidInput("congruence level N must be >= 1")
            return (kind, n)
        if s.startswith("["):
            try:
                spec = json.loads(s)
            except json.JSONDecodeError:
                raise InvalidInput(f"malformed generator list {spec!r}") from None
        else:
            raise InvalidInput(f"unknown group spec {spec!r}")
    gens = [int_matrix(g) for g in spec]
    for g in gens:
        if len(g) != 2 or any(len(r) != 2 for r in g):
            raise InvalidInput(f"generator {g} is not 2x2")
        (a, b), (c, d) = g
        if a * d - b * c != 1:
            raise InvalidInput(f"generator {g} is not in SL2(Z) (det {a * d - b * c})")
    return ("generators", tuple(gens))


def group_image(spec, level: int) -> FiniteMatrixGroup:
    """Image of a subgroup of SL2(Z) in SL2(Z/level).

    Congruence subgroups are realized by their defining congruences mod
    gcd(N, level); reduction SL2(Z) -> SL2(Z/L) is onto, so this is the
    exact image. Generator lists are closed under multiplication.
    """
    m = _level(level)
    kind, arg = parse_group_spec(spec)
    if kind == "full":
        gens = (_reduce(T, m), _reduce(S, m))
        return FiniteMatrixGroup(m, closure(gens, m), gens, label="full")
    if kind == "generators":
        gens = tuple(_reduce(g, m) for g in arg)
        return FiniteMatrixGroup(m, closure(gens, m), gens, label="generators")
    g = gcd(arg, m)
    a, b, c, d = _sl2_array(m).T
    if kind == "gamma":
        ok = (a % g == 1 % g) & (b % g == 0) & (c % g == 0) & (d % g == 1 % g)
    elif kind == "gamma0":
        ok = c % g == 0
    else:
        ok = (c % g == 0) & (a % g == 1 % g) & (d % g == 1 % g)
    elems = map(tuple, _sl2_array(m)[ok].tolist())
    return FiniteMatrixGroup(m, elems, label=f"{kind}({arg})")


def index_in_full(G: FiniteMatrixGroup) -> int:
    """Index of the mod-m image in SL2(Z/m); a lower bound for the index in SL2(Z)."""
    return sl2_order(G.level) // G.order


def _point(p, m) -> tuple:
    if isinstance(p, TorsionPoint):
        if p.level != m:
            raise InvalidInput(f"point level {p.level} does not match group level {m}")
        return p.coords
    x, y = (to_int(t) for t in p)
    return (x % m, y % m)


def orbit(G: FiniteMatrixGroup, p) -> frozenset:
    """Orbit of a torsion point under the column action v -> M v (mod m)."""
    m = G.level
    x, y = _point(p, m)
    if G.generators:
        seen = {(x, y)}
        queue = deque(seen)
        while queue:
            u, v = queue.popleft()
            for a, b, c, d in G.generators:
                w = ((a * u + b * v) % m, (c * u + d * v) % m)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return frozenset(seen)
    arr = G.array
    img = np.stack([(arr[:, 0] * x + arr[:, 1] * y) % m, (arr[:, 2] * x + arr[:, 3] * y) % m], axis=1)
    return frozenset(map(tuple, np.unique(img, axis=0).tolist()))


def primitive_points(m: int) -> list:
    m = _level(m)
    return [(x, y) for x in range(m) for y in range(m) if gcd(x, y, m) == 1]


def orbit_partition(G: FiniteMatrixGroup, points: Iterable | None = None) -> list:
    """Orbits of G on the given points (default: all of (Z/m)^2), sorted."""
    m = G.level
    pts = sorted(points) if points is not None else [(x, y) for x in range(m) for y in range(m)]
    seen, out = set(), []
    for p in pts:
        if p in seen:
            continue
        orb = orbit(G, p)
        seen |= orb
        out.append(tuple(sorted(orb)))
    return out


def primitive_orbit_size_full(m: int) -> int:
    """m^2 prod_{p | m} (1 - 1/p^2): the number of points of exact order m."""
    m = _level(m)
    out = m * m
    for p in primefactors(m):
        out = out // (p * p) * (p * p - 1)
    return out


@dataclass(frozen=True)
class DegreeBound:
    level: int
    index: int
    exact: Fraction
    analytic: float

    def to_json(self):
        return {"level": self.level, "index": self.index, "exact": self.exact, "analytic": self.analytic}


def degree_lower_bound(m: int, index: int) -> DegreeBound:
    """Orbit-size bound for torsion multisections of order m under a group of the given index.

    ``exact`` is the sharp value m^2 prod(1 - 1/p^2) / index; ``analytic``
    is the float (6/pi^2) m^2 / index, for comparison only.
    """
    m, index = _level(m), to_int(index)
    if index < 1:
        raise InvalidInput("index must be >= 1")
    return DegreeBound(m, index, Fraction(primitive_orbit_size_full(m), index), 6 / pi**2 * m * m / index)


def torsion_count_in_In_fiber(m: int, k: int) -> int:
    """Upper bound m*k on m-torsion points of the smooth locus of an I_k fiber."""
    m, k = to_int(m), to_int(k)
    if m < 1 or k < 1:
        raise InvalidInput("m and k must be positive")
    return m * k


# --- branched covers -------------------------------------------------------------


@dataclass(frozen=True)
class BranchData:
    """Local monodromies (integer matrices in SL2(Z)) around the singular fibers."""

    locals: tuple
    base_euler: int = 2

    def __post_init__(self):
        mats = tuple(int_matrix(t) for t in self.locals)
        for t in mats:
            if len(t) != 2 or any(len(r) != 2 for r in t):
                raise InvalidInput(f"local monodromy {t} is not 2x2")
            (a, b), (c, d) = t
            if a * d - b * c != 1:
                raise InvalidInput(f"local monodromy {t} has determinant {a * d - b * c}")
        object.__setattr__(self, "locals", mats)
        object.__setattr__(self, "base_euler", to_int(self.base_euler))

    def __len__(self):
        return len(self.locals)

    def to_json(self):
        return {"base_euler": self.base_euler, "locals": [[list(r) for r in t] for t in self.locals]}

    @classmethod
    def from_json(cls, data) -> BranchData:
        if isinstance(data, dict) and "locals" in data:
            return cls(tuple(data["locals"]), data.get("base_euler", 2))
        if isinstance(data, dict) and "fibers" in data:
            from .fibers import FiberConfiguration

            return FiberConfiguration.from_json(data).branch_data()
        raise InvalidInput('branch data JSON needs "locals" (matrices) or "fibers" (Kodaira types)')


def cycle_type(t, points: Sequence, m: int) -> list:
    """Cycle lengths (sorted, descending) of the matrix t acting on a finite point set."""
    a, b, c, d = _reduce(t, m)
    pts = set(points)
    seen, lengths = set(), []
    for start in sorted(pts):
        if start in seen:
            continue
        n, p = 0, start
        while p not in seen:
            if p not in pts:
                raise InvalidInput(f"local monodromy {t} does not preserve the orbit")
            seen.add(p)
            p = ((a * p[0] + b * p[1]) % m, (c * p[0] + d * p[1]) % m)
            n += 1
        if p != start:
            raise InvalidInput(f"local monodromy {t} does not preserve the orbit")
        lengths.append(n)
    return sorted(lengths, reverse=True)


@dataclass(frozen=True)
class MultisectionEuler:
    degree: int
    chi: int
    genus: int | None
    connected: bool
    cycle_types: tuple = field(repr=False)
    orbit_representative: tuple = ()

    @property
    def contributions(self) -> list:
        """Per-fiber ramification (d - #cycles) / d."""
        return [Fraction(self.degree - len(ct), self.degree) for ct in self.cycle_types]

    def to_json(self):
        return {
            "orbit_size": self.degree,
            "chi": self.chi,
            "genus": self.genus,
            "connected": self.connected,
            "point": list(self.orbit_representative),
            "cycle_types": [list(c) for c in self.cycle_types],
        }


def multisection_euler(G: FiniteMatrixGroup, p, branch: BranchData) -> MultisectionEuler:
    """Euler characteristic and genus of the torsion multisection through p.

    The multisection is the cover of the base whose fiber is the orbit O
    of p; Riemann-Hurwitz with exact cycle counts gives

        chi = |O| chi(B) - sum_i (|O| - #cycles of t_i on O).

    Without branch points only |O| = 1 is a connected cover of P^1; any
    chi > 2 likewise means the cover is disconnected and no genus is given.
    """
    m = G.level
    pt = _point(p, m)
    orb = sorted(orbit(G, pt))
    d = len(orb)
    types = tuple(tuple(cycle_type(t, orb, m)) for t in branch.locals)
    chi = d * branch.base_euler - sum(d - len(ct) for ct in types)
    if chi % 2:
        raise InvalidInput(f"odd Euler characteristic {chi}: branch data is inconsistent")
    # chi > 2 is impossible for a connected curve: the cover splits (e.g. trivial locals)
    connected = (bool(types) or d == 1) and chi <= 2
    genus = (2 - chi) // 2 if connected else None
    return MultisectionEuler(d, chi, genus, connected, types, pt)


@dataclass(frozen=True)
class SweepRow:
    level: int
    index: int
    orbits: tuple  # MultisectionEuler per primitive orbit

    @property
    def min_genus(self):
        genera = [o.genus for o in self.orbits]
        return None if any(g is None for g in genera) else min(genera)

    def to_json(self):
        return {
            "m": self.level,
            "index": self.index,
            "orbit_sizes": [o.degree for o in self.orbits],
            "genera": [o.genus for o in self.orbits],
            "min_genus": self.min_genus,
        }


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    m0: int | None
    status: str

    def table(self) -> list:
        return [(r.level, r.min_genus) for r in self.rows]

    def to_json(self):
        return {"status": self.status, "m0": self.m0, "rows": [r.to_json() for r in self.rows]}


def _sweep_level(spec, branch, m):
    G = group_image(spec, m)
    orbits = orbit_partition(G, primitive_points(m))
    return SweepRow(m, index_in_full(G), tuple(multisection_euler(G, o[0], branch) for o in orbits))


def genus_sweep(spec, branch: BranchData, levels: Iterable[int]) -> SweepResult:
    """Minimal genus of torsion multisections of exact order m, for each m.

    ``m0`` is the least value such that every level in (m0, max] has all
    genera >= 2; it is empirical for the given branch data.
    """
    levels = sorted({_level(m) for m in levels})
    if not levels:
        raise InvalidInput("empty level range")
    from .parallel import pmap

    rows = tuple(pmap(_sweep_level, [(spec, branch, m) for m in levels]))
    if any(r.min_genus is None for r in rows):
        return SweepResult(rows, None, "disconnected")
    m0 = levels[0] - 1
    for r in rows:
        if r.min_genus < 2:
            m0 = r.level
    return SweepResult(rows, m0, "ok")
