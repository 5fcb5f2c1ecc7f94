"""Rule engine: Picard lattice of a K3 surface -> potential-density verdict.

Rules are tried in a fixed priority order; the first match wins. Each
verdict carries the lattice evidence (representation results, rank) that
triggered it and a short statement of the geometric fact the rule relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput
from .lattice import OBSTRUCTED, UNKNOWN, WITNESS, GramLattice, RepresentationResult, represents

DENSE = "PotentiallyDense"
UNKNOWN_STATUS = "Unknown"
EXCEPTIONAL = "UnknownExceptionalCandidate"

CITATIONS = {
    "R1": "Picard rank 1: no elliptic fibration and no infinite automorphism group is available",
    "R2": "a primitive square-zero class gives an elliptic fibration, and an elliptic K3 has potentially dense points",
    "R3": "no classes of square 0 or -2 with rank >= 2: the automorphism group is infinite, giving density",
    "R4": "rank 2 without (-2)-classes: the automorphism group is infinite, giving density",
    "R5": "rank >= 5: every indefinite form represents zero, so an elliptic fibration exists",
    "R6": "rank 20: the automorphism group is infinite",
    "R7": "rank 3 or 4 with (-2)-classes but no square-zero class: may be one of finitely many "
          "lattices with finite automorphism group; density undecided",
    "R0": "no rule applies within the search bound",
}


@dataclass(frozen=True)
class DensityVerdict:
    status: str
    rule_id: str
    evidence: dict = field(default_factory=dict)
    citation: str = ""

    def __post_init__(self):
        if self.status not in (DENSE, UNKNOWN_STATUS, EXCEPTIONAL):
            raise ValueError(f"bad status {self.status}")
        if self.status == DENSE and self.rule_id not in ("R2", "R3", "R4", "R5", "R6"):
            raise ValueError(f"rule {self.rule_id} cannot certify density")
        if not self.evidence:
            raise ValueError("verdict without evidence")

    def to_json(self):
        ev = {k: (v.to_json() if isinstance(v, RepresentationResult) else v) for k, v in self.evidence.items()}
        return {"status": self.status, "rule_id": self.rule_id, "citation": self.citation, "evidence": ev}


def _verdict(status, rule, evidence):
    return DensityVerdict(status, rule, evidence, CITATIONS[rule])


def classify(lat: GramLattice, search_bound: int, escalate: bool = False) -> DensityVerdict:
    """Classify an even hyperbolic lattice (signature (1, rank - 1)).

    The full K3 lattice, signature (3, 19), is also accepted: it contains
    H, so it is decided by the square-zero rule like any Picard lattice
    containing H.
    """
    if not isinstance(lat, GramLattice):
        lat = GramLattice(lat)
    if not (lat.is_hyperbolic or lat.signature == (3, 19)):
        raise InvalidInput(f"signature {lat.signature} is not (1, {lat.rank - 1}): not a K3 Picard lattice")
    rank = lat.rank
    ev = {"rank": rank, "signature": list(lat.signature), "determinant": lat.determinant,
          "search_bound": search_bound}
    if rank == 1:
        return _verdict(UNKNOWN_STATUS, "R1", ev)

    zero = represents(lat, 0, search_bound, escalate=escalate or rank >= 5)
    ev["square_0"] = zero
    if zero.status == WITNESS:
        return _verdict(DENSE, "R2", ev)

    minus2 = represents(lat, -2, search_bound)
    ev["square_-2"] = minus2
    if zero.negative and minus2.negative:
        return _verdict(DENSE, "R3", ev)
    if rank == 2 and minus2.negative:
        return _verdict(DENSE, "R4", ev)
    if rank >= 5:  # unreachable in practice: the escalated isotropic search succeeds
        return _verdict(DENSE, "R5", ev)
    if rank == 20:  # pragma: no cover - rank >= 5 already matched
        return _verdict(DENSE, "R6", ev)
    if rank in (3, 4) and minus2.status == WITNESS:
        return _verdict(EXCEPTIONAL, "R7", ev)
    return _verdict(UNKNOWN_STATUS, "R0", ev)


def _describe(res: RepresentationResult) -> str:
    n = res.square
    if res.status == WITNESS:
        how = " (escalated search)" if res.escalated else ""
        return f"square {n}: witness {list(res.witness.coords)}{how}"
    if res.status == OBSTRUCTED:
        place = "the reals" if res.obstruction_place == "real" else f"Q_{res.obstruction_place}"
        return f"square {n}: no solution over {place} (local obstruction)"
    scope = "exhaustive box" if res.exhaustive else "partial box"
    return f"square {n}: nothing found with coordinates up to {res.search_bound} ({scope})"


def explain(v: DensityVerdict) -> str:
    lines = [f"verdict: {v.status} (rule {v.rule_id})", f"reason: {v.citation}"]
    ev = v.evidence
    lines.append(f"rank {ev['rank']}, signature {tuple(ev['signature'])}, determinant {ev['determinant']}")
    for key in ("square_0", "square_-2"):
        if key in ev:
            lines.append("  " + _describe(ev[key]))
    if ev["rank"] == 2 and v.status == DENSE:
        lines.append("note: in rank 2 a K3 surface has an elliptic fibration or an infinite automorphism "
                     "group, not both")
    if v.status != DENSE:
        pending = [ev[k] for k in ("square_0", "square_-2") if k in ev and ev[k].status == UNKNOWN]
        if pending:
            lines.append(f"to decide: search bound {ev['search_bound']} was not enough; rerun with a larger "
                         "--search-bound or with --escalate (isotropic search past the box)")
        if v.status == EXCEPTIONAL:
            lines.append("a square-zero witness would upgrade this to PotentiallyDense; a proof that none "
                         "exists leaves it among the finite-automorphism candidates")
    return "\n".join(lines)
