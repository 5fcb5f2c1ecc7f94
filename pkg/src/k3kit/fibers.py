"""Kodaira fiber types and singular-fiber configurations of elliptic surfaces.

Each fiber type carries its Euler number chi, number of components k and
rank r = k - 1 of the lattice spanned by its components. Multiplicative
fibers (I_n) have chi - r = 1; every other type has chi - r = 2. The
enumerator lists all multisets of fibers with prescribed total chi (24
for a K3 surface) and bounded total rank.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import InvalidInput
from .jsonio import to_int

# family -> (euler offset, components offset, tag order); n-families use chi = n + offset
_FAMILIES = {
    "I": (0, 0, 0),
    "II": (2, 1, 1),
    "III": (3, 2, 2),
    "IV": (4, 3, 3),
    "I*": (6, 5, 4),
    "IV*": (8, 7, 5),
    "III*": (9, 8, 6),
    "II*": (10, 9, 7),
}

_MONODROMY = {
    "II": ((1, 1), (-1, 0)),
    "III": ((0, 1), (-1, 0)),
    "IV": ((0, 1), (-1, -1)),
    "IV*": ((-1, -1), (1, 0)),
    "III*": ((0, -1), (1, 0)),
    "II*": ((0, -1), (1, 1)),
}

# order of the local monodromy; None means infinite
_ORDER = {"II": 6, "III": 4, "IV": 3, "IV*": 3, "III*": 4, "II*": 6}


@dataclass(frozen=True)
class FiberDescriptor:
    family: str
    n: int = 0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise InvalidInput(f"unknown Kodaira family {self.family!r}")
        n = to_int(self.n)
        if self.family == "I" and n < 1:
            raise InvalidInput("I_n needs n >= 1 (I_0 is a smooth fiber)")
        if self.family == "I*" and n < 0:
            raise InvalidInput("I_n* needs n >= 0")
        if self.family not in ("I", "I*") and n != 0:
            raise InvalidInput(f"type {self.family} takes no index")
        object.__setattr__(self, "n", n)

    @property
    def name(self) -> str:
        if self.family == "I":
            return f"I_{self.n}"
        if self.family == "I*":
            return "I0*" if self.n == 0 else f"I_{self.n}*"
        return self.family

    def __str__(self):
        return self.name

    @property
    def euler(self) -> int:
        return self.n + _FAMILIES[self.family][0]

    @property
    def components(self) -> int:
        return self.n + _FAMILIES[self.family][1]

    @property
    def rank(self) -> int:
        return self.components - 1

    @property
    def multiplicative(self) -> bool:
        return self.family == "I"

    @property
    def potentially_multiplicative(self) -> bool:
        """Pole of the j-map: I_n and I_n* with n >= 1."""
        return self.family in ("I", "I*") and self.n >= 1

    @property
    def local_monodromy(self) -> tuple:
        if self.family == "I":
            return ((1, self.n), (0, 1))
        if self.family == "I*":
            return ((-1, -self.n), (0, -1))
        return _MONODROMY[self.family]

    @property
    def monodromy_order(self) -> int | None:
        if self.family == "I":
            return None
        if self.family == "I*":
            return 2 if self.n == 0 else None
        return _ORDER[self.family]

    def sort_key(self):
        return (-self.euler, _FAMILIES[self.family][2])

    def to_json(self):
        return {"type": self.name}


_NAME_RE = re.compile(r"^I_?(\d+)(\*?)$")


def fiber(name: str) -> FiberDescriptor:
    """Parse a Kodaira symbol: I_5, I5, II, III, IV, I0*, I_0*, I_3*, IV*, III*, II*."""
    s = str(name).strip().replace(" ", "")
    if s in ("II", "III", "IV", "IV*", "III*", "II*"):
        return FiberDescriptor(s)
    match = _NAME_RE.match(s)
    if not match:
        raise InvalidInput(f"unknown Kodaira type {name!r}")
    n = int(match.group(1))
    return FiberDescriptor("I*" if match.group(2) else "I", n)


def fiber_table(max_n: int = 24) -> list:
    """All fiber types with euler number <= max_n, in canonical order."""
    out = [FiberDescriptor("I", n) for n in range(1, max_n + 1)]
    out += [FiberDescriptor(f) for f in ("II", "III", "IV")]
    out += [FiberDescriptor("I*", n) for n in range(0, max_n - 5)]
    out += [FiberDescriptor(f) for f in ("IV*", "III*", "II*")]
    return sorted((f for f in out if f.euler <= max_n), key=FiberDescriptor.sort_key)


@dataclass(frozen=True)
class FiberConfiguration:
    fibers: tuple

    def __post_init__(self):
        fibs = tuple(sorted((f if isinstance(f, FiberDescriptor) else fiber(f) for f in self.fibers),
                            key=FiberDescriptor.sort_key))
        object.__setattr__(self, "fibers", fibs)

    @property
    def total_euler(self) -> int:
        return sum(f.euler for f in self.fibers)

    @property
    def total_rank(self) -> int:
        return sum(f.rank for f in self.fibers)

    @property
    def count(self) -> int:
        return len(self.fibers)

    @property
    def potentially_multiplicative_count(self) -> int:
        return sum(f.potentially_multiplicative for f in self.fibers)

    @property
    def isotrivial(self) -> bool:
        """No pole of the j-map: only potentially good fibers."""
        return self.potentially_multiplicative_count == 0

    def names(self) -> list:
        return [f.name for f in self.fibers]

    def branch_data(self, base_euler: int = 2):
        from .modular import BranchData

        return BranchData(tuple(f.local_monodromy for f in self.fibers), base_euler)

    def __str__(self):
        return "{" + ", ".join(self.names()) + "}"

    def to_json(self):
        return {"fibers": [f.to_json() for f in self.fibers], "chi": self.total_euler, "rank": self.total_rank}

    @classmethod
    def from_json(cls, data) -> FiberConfiguration:
        if not isinstance(data, dict) or "fibers" not in data:
            raise InvalidInput('configuration JSON needs a "fibers" list')
        fibs = []
        for f in data["fibers"]:
            if isinstance(f, dict):
                if "type" not in f:
                    raise InvalidInput("fiber entry without a type")
                fibs.extend([fiber(f["type"])] * to_int(f.get("count", 1)))
            else:
                fibs.append(fiber(f))
        conf = cls(tuple(fibs))
        if "chi" in data and to_int(data["chi"]) != conf.total_euler:
            raise InvalidInput(f"declared chi {data['chi']} != {conf.total_euler}")
        if "rank" in data and to_int(data["rank"]) != conf.total_rank:
            raise InvalidInput(f"declared rank {data['rank']} != {conf.total_rank}")
        return conf


@dataclass(frozen=True)
class Filters:
    """Optional restrictions on enumerated configurations.

    ``only_multiplicative``: every fiber is I_n. ``require_potentially_multiplicative``:
    at least one I_n or I_n* (n >= 1). ``no_potentially_multiplicative``: none.
    """

    min_fibers: int | None = None
    max_fibers: int | None = None
    only_multiplicative: bool = False
    require_potentially_multiplicative: bool = False
    no_potentially_multiplicative: bool = False

    def accepts(self, conf: FiberConfiguration) -> bool:
        if self.min_fibers is not None and conf.count < self.min_fibers:
            return False
        if self.max_fibers is not None and conf.count > self.max_fibers:
            return False
        if self.only_multiplicative and not all(f.multiplicative for f in conf.fibers):
            return False
        pm = conf.potentially_multiplicative_count
        if self.require_potentially_multiplicative and pm == 0:
            return False
        if self.no_potentially_multiplicative and pm:
            return False
        return True


def enumerate_configurations(total_chi: int, max_rank: int, filters: Filters | None = None) -> Iterator[FiberConfiguration]:
    """All fiber multisets with sum chi = total_chi and sum r <= max_rank.

    Fibers inside a configuration are in canonical order (descending chi,
    then type); configurations come out in lexicographic order of those
    canonical sequences.
    """
    total_chi, max_rank = to_int(total_chi), to_int(max_rank)
    if total_chi < 1:
        raise InvalidInput("total_chi must be >= 1")
    if max_rank < 0:
        raise InvalidInput("max_rank must be >= 0")
    filters = filters or Filters()
    table = fiber_table(total_chi)
    if filters.only_multiplicative:
        table = [f for f in table if f.multiplicative]
    if filters.no_potentially_multiplicative:
        table = [f for f in table if not f.potentially_multiplicative]
    cap = filters.max_fibers if filters.max_fibers is not None else total_chi
    chosen: list = []

    def rec(start, chi_left, rank_left):
        if chi_left == 0:
            conf = FiberConfiguration(tuple(chosen))
            if filters.accepts(conf):
                yield conf
            return
        if len(chosen) >= cap:
            return
        for i in range(start, len(table)):
            f = table[i]
            if f.euler > chi_left or f.rank > rank_left:
                continue
            chosen.append(f)
            yield from rec(i, chi_left - f.euler, rank_left - f.rank)
            chosen.pop()

    yield from rec(0, total_chi, max_rank)


@dataclass(frozen=True)
class MinCount:
    minimum: int | None
    witness: FiberConfiguration | None
    configurations_at_minimum: int

    @property
    def satisfiable(self) -> bool:
        return self.minimum is not None

    def to_json(self):
        if self.minimum is None:
            return {"min": None, "witness": None, "status": "unsatisfiable"}
        return {"min": self.minimum, "witness": self.witness.to_json(),
                "count_at_min": self.configurations_at_minimum, "status": "ok"}


def _witness_key(conf: FiberConfiguration):
    # fewest poles of j first, then largest fibers first
    return (conf.potentially_multiplicative_count, [f.sort_key() for f in conf.fibers])


def min_fiber_count(total_chi: int, max_rank: int, filters: Filters | None = None) -> MinCount:
    """Smallest number of singular fibers over all admissible configurations.

    The witness is the minimal configuration with the fewest potentially
    multiplicative fibers, ties broken by the canonical (largest-first) order.
    """
    filters = filters or Filters()
    lo = filters.min_fibers or 1
    hi = filters.max_fibers if filters.max_fibers is not None else to_int(total_chi)
    for k in range(lo, hi + 1):
        exact = Filters(k, k, filters.only_multiplicative, filters.require_potentially_multiplicative,
                        filters.no_potentially_multiplicative)
        confs = list(enumerate_configurations(total_chi, max_rank, exact))
        if confs:
            return MinCount(k, min(confs, key=_witness_key), len(confs))
    return MinCount(None, None, 0)
