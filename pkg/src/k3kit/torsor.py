"""Degree and order bookkeeping for genus-one fibrations and their multisections.

A genus-one fibration E -> B of degree d (index of Pic(E) restricted to a
fiber) has torsor class of order d; its multiples J^m form a cyclic
family indexed by Z/d. Multisections are tracked by degree and torsion
status only: the cohomology classes themselves are not represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from sympy import isprime

from .errors import InvalidInput
from .jsonio import to_int


class _AllOrders:
    """Symbolic stand-in for the set of all positive integers."""

    def __contains__(self, n):
        return isinstance(n, int) and n >= 1

    def __repr__(self):
        return "ALL"

    def to_json(self):
        return "ALL"


ALL = _AllOrders()


@dataclass(frozen=True)
class Torsion:
    order: int

    def __post_init__(self):
        if to_int(self.order) < 1:
            raise InvalidInput("torsion order must be >= 1")

    def to_json(self):
        return {"kind": "torsion", "order": self.order}


@dataclass(frozen=True)
class NonTorsion:
    def to_json(self):
        return {"kind": "nt"}


@dataclass(frozen=True)
class UndeterminedWithOrderNotIn:
    excluded: frozenset

    def to_json(self):
        return {"kind": "undetermined", "excluded": sorted(self.excluded)}


@dataclass(frozen=True)
class FibrationDescriptor:
    """A genus-one fibration described by its degree and optional monodromy data.

    ``monodromy`` is a group spec accepted by ``modular.group_image`` and
    ``fibers`` a FiberConfiguration; together they supply branch data for
    genus computations.
    """

    degree: int
    jacobian: bool | None = None
    monodromy: object = None
    fibers: object = None
    isotrivial: bool | None = None

    def __post_init__(self):
        d = to_int(self.degree)
        if d < 1:
            raise InvalidInput("fibration degree must be >= 1")
        jac = (d == 1) if self.jacobian is None else bool(self.jacobian)
        if jac and d != 1:
            raise InvalidInput("a Jacobian fibration has a section, so its degree is 1")
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "jacobian", jac)

    @property
    def is_isotrivial(self) -> bool:
        if self.isotrivial is not None:
            return self.isotrivial
        return self.fibers is not None and self.fibers.isotrivial

    def to_json(self):
        out = {"degree": self.degree, "jacobian": self.jacobian}
        if self.monodromy is not None:
            out["monodromy"] = self.monodromy if isinstance(self.monodromy, str) else [
                [list(r) for r in g] for g in self.monodromy]
        if self.fibers is not None:
            out["fibers"] = self.fibers.to_json()
        return out


@dataclass(frozen=True)
class MultisectionDescriptor:
    degree: int
    torsion: object = field(default_factory=lambda: UndeterminedWithOrderNotIn(frozenset()))
    genus: int | None = None
    ambient_degree: int = 1
    saliently_ramified: bool = False

    def __post_init__(self):
        deg, amb = to_int(self.degree), to_int(self.ambient_degree)
        if deg < 1 or amb < 1:
            raise InvalidInput("degrees must be positive")
        if deg % amb:
            raise InvalidInput(f"multisection degree {deg} is not divisible by the fibration degree {amb}")
        if self.genus is not None and to_int(self.genus) < 0:
            raise InvalidInput("genus must be non-negative")
        if not isinstance(self.torsion, (Torsion, NonTorsion, UndeterminedWithOrderNotIn)):
            raise InvalidInput(f"bad torsion status {self.torsion!r}")
        if self.saliently_ramified and isinstance(self.torsion, Torsion):
            raise InvalidInput("a saliently ramified multisection is non-torsion")
        if self.saliently_ramified and not isinstance(self.torsion, NonTorsion):
            object.__setattr__(self, "torsion", NonTorsion())

    def to_json(self):
        return {
            "degree": self.degree,
            "torsion": self.torsion.to_json(),
            "genus": self.genus,
            "ambient_degree": self.ambient_degree,
            "saliently_ramified": self.saliently_ramified,
        }


def class_order(F: FibrationDescriptor) -> int:
    """Order of the torsor class; equals the fibration degree."""
    return F.degree


def jm_class(m: int, F: FibrationDescriptor) -> int:
    """Class of J^m in the cyclic group Z/d generated by [E]."""
    m = to_int(m)
    if m < 0:
        raise InvalidInput("m must be >= 0")
    return m % F.degree


def transfer_order(t: int, m: int) -> int:
    """Order of eta^m(M) for a torsion multisection M of order t."""
    t, m = to_int(t), to_int(m)
    if t < 1 or m < 1:
        raise InvalidInput("t and m must be positive")
    return t // gcd(t, m)


def transfer(M: MultisectionDescriptor, m: int) -> MultisectionDescriptor:
    """Image of M under eta^m. Degree is kept when the map is birational
    (M non-torsion, or order coprime to m); otherwise only the order is known
    and the degree is reported as that of the source, as an upper bound.
    """
    m = to_int(m)
    if isinstance(M.torsion, Torsion):
        return MultisectionDescriptor(M.degree, Torsion(transfer_order(M.torsion.order, m)), None, 1)
    return MultisectionDescriptor(M.degree, M.torsion, M.genus, 1, M.saliently_ramified)


@dataclass(frozen=True)
class Reduction:
    prime: int
    cofactor: int
    exponent: int
    multiplier: int | None  # alpha with alpha * t = 1 (mod p) when exponent == 1
    eta: int  # the map eta^eta applied
    target: str  # "E" or "J"
    descriptor: MultisectionDescriptor

    def to_json(self):
        return {
            "p": self.prime,
            "t": self.cofactor,
            "k": self.exponent,
            "alpha": self.multiplier,
            "eta": self.eta,
            "target": self.target,
            "descriptor": self.descriptor.to_json(),
        }


def reduce_to_p_torsion(p: int, t: int, k: int, F: FibrationDescriptor | None = None) -> Reduction:
    """Send a torsion multisection of order p^k t (p not dividing t) in a degree-p
    fibration onto a p-torsion multisection: in E itself when k = 1 (via
    eta^{alpha t}, alpha t = 1 mod p), in the Jacobian when k > 1 (via eta^{p^{k-1} t}).
    """
    p, t, k = to_int(p), to_int(t), to_int(k)
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")
    if t < 1 or k < 1:
        raise InvalidInput("need t >= 1 and k >= 1")
    if t % p == 0:
        raise InvalidInput(f"p = {p} divides t = {t}")
    if F is not None and F.degree != p:
        raise InvalidInput(f"fibration degree {F.degree} is not p = {p}")
    if k == 1:
        alpha = pow(t, -1, p)
        eta, target = alpha * t, "E"
    else:
        alpha = None
        eta, target = p ** (k - 1) * t, "J"
    order = transfer_order(p**k * t, eta)
    if order != p:  # pragma: no cover - arithmetic identity
        raise AssertionError("reduction did not land on p-torsion")
    # degree p is a placeholder divisible by the ambient degree; only the order is asserted
    image = MultisectionDescriptor(p, Torsion(p), ambient_degree=p if target == "E" else 1)
    return Reduction(p, t, k, alpha, eta, target, image)


def classify_nt(M: MultisectionDescriptor, excluded) -> MultisectionDescriptor:
    """Record that M is not torsion of any order in ``excluded`` (``ALL`` for every order)."""
    tor = M.torsion
    if isinstance(tor, Torsion):
        if tor.order in excluded:
            raise InvalidInput(f"multisection is torsion of order {tor.order}, which was excluded")
        return M
    if isinstance(tor, NonTorsion):
        return M
    if excluded is ALL:
        new = NonTorsion()
    else:
        new = UndeterminedWithOrderNotIn(tor.excluded | frozenset(to_int(x) for x in excluded))
    return MultisectionDescriptor(M.degree, new, M.genus, M.ambient_degree, M.saliently_ramified)


@dataclass(frozen=True)
class TauImage:
    source: MultisectionDescriptor
    cycle_degree: int
    torsion: object
    is_zero_section: bool
    note: str

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "cycle_degree": self.cycle_degree,
            "torsion": self.torsion.to_json(),
            "zero_section": self.is_zero_section,
            "note": self.note,
        }


def tau_class(M: MultisectionDescriptor, cycle_degree: int) -> TauImage:
    """Image of M in the Jacobian under p -> [deg(Z) p - Tr_Z(phi(p))]."""
    zd = to_int(cycle_degree)
    if zd < 1:
        raise InvalidInput("cycle degree must be >= 1")
    tor = M.torsion
    if isinstance(tor, NonTorsion):
        return TauImage(M, zd, NonTorsion(), False, "birational onto its image; non-torsion preserved")
    if isinstance(tor, Torsion) and tor.order == 1 and M.degree == 1 and M.ambient_degree == 1:
        return TauImage(M, zd, Torsion(1), True, "a section maps to the zero-section class")
    return TauImage(M, zd, tor, False, "degree bookkeeping only")


@dataclass
class Verdict:
    applicable: bool
    conclusion: str
    divided_degree: int | None = None
    min_genus: int | None = None
    assumptions: list = field(default_factory=list)
    audit: list = field(default_factory=list)

    def to_json(self):
        return {
            "applicable": self.applicable,
            "conclusion": self.conclusion,
            "divided_degree": self.divided_degree,
            "min_genus_at_p": self.min_genus,
            "assumptions": self.assumptions,
            "audit": [{"operation": op, "basis": basis, "result": res} for op, basis, res in self.audit],
        }


def no_rat_verdict(F: FibrationDescriptor, p: int, p0: int) -> Verdict:
    """Check that dividing the torsor class of F by p leaves no torsion
    multisection of genus 0 or 1.

    Chain: E' has degree p d; E'' = (E')^d has order p; torsion
    multisections of E' map onto torsion multisections of E'', and those
    map onto p-torsion multisections of E'' or of the Jacobian, whose
    genera come from the level-p monodromy action.
    """
    from .modular import genus_sweep

    p, p0 = to_int(p), to_int(p0)
    d = F.degree

    def refuse(reason):
        return Verdict(False, f"not applicable: {reason}")

    if not isprime(p):
        return refuse(f"{p} is not prime")
    if p <= p0:
        return refuse(f"p = {p} does not exceed p0 = {p0}")
    if d % p == 0:
        return refuse(f"p = {p} divides the degree {d}")
    if F.monodromy is None or F.fibers is None:
        return refuse("monodromy group and fiber configuration are required")
    if F.fibers.count < 4:
        return refuse(f"only {F.fibers.count} singular fibers (at least 4 needed)")
    if F.is_isotrivial:
        return refuse("isotrivial fibration")

    v = Verdict(True, "")
    divided = FibrationDescriptor(p * d, jacobian=False)
    v.divided_degree = class_order(divided)
    v.audit.append(("class_order", "order of the torsor class equals the fibration degree", v.divided_degree))
    order_of_power = divided.degree // gcd(jm_class(d, divided), divided.degree)
    v.audit.append(("jm_class", "E'' = (E')^d has class d in Z/pd", {"class": jm_class(d, divided),
                                                                     "order": order_of_power}))
    if order_of_power != p:  # pragma: no cover - arithmetic identity
        raise AssertionError("E'' should have order p")
    v.audit.append(("transfer_order", "eta^d sends order t to t / gcd(t, d)",
                    {"example_t": p * d, "image_order": transfer_order(p * d, d)}))
    red = reduce_to_p_torsion(p, 1, 1)
    v.audit.append(("reduce_to_p_torsion", "torsion multisections of a degree-p fibration dominate p-torsion ones",
                    red.to_json()))
    sweep = genus_sweep(F.monodromy, F.fibers.branch_data(), [p])
    g = sweep.rows[0].min_genus
    v.min_genus = g
    v.audit.append(("genus_sweep", "genus of p-torsion multisections from the level-p monodromy action",
                    sweep.rows[0].to_json()))
    v.assumptions = [
        "monodromy of E'' equals that of E (same Jacobian)",
        "every torsion multisection of E'' dominates a p-torsion multisection of E'' or of its Jacobian",
        "genus does not increase under dominant maps of curves",
        "existence of rational multisections on deformations is quoted, not computed",
    ]
    if g is not None and g >= 2:
        v.conclusion = f"every torsion multisection of E' (degree {p * d}) has genus >= 2 (min genus {g} at level {p})"
    else:
        v.conclusion = f"inconclusive: minimal genus at level {p} is {g}"
    return v
