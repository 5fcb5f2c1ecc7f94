"""Weierstrass models y^2 = x^3 + p(t) x + q(t) over P^1_Q.

The family parameter r bounds deg p <= 4r and deg q <= 6r; for r = 2 a
minimal model is an elliptic K3 surface. Fiber types are read off from the
valuations of (p, q, 4p^3 + 27q^2) at each irreducible factor of the
discriminant and at t = infinity, where the model is p*(s) = s^{4r} p(1/s),
q*(s) = s^{6r} q(1/s).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput
from .fibers import FiberDescriptor
from .jsonio import to_int
from .polynomial import Poly, irreducible_factors, poly_gcd, valuation

INF = 10**9  # valuation of the zero polynomial


@dataclass(frozen=True)
class WeierstrassModel:
    p: Poly
    q: Poly
    r: int

    def __post_init__(self):
        p = self.p if isinstance(self.p, Poly) else Poly(self.p)
        q = self.q if isinstance(self.q, Poly) else Poly(self.q)
        r = to_int(self.r)
        if r < 1:
            raise InvalidInput("family parameter r must be >= 1")
        if p.degree is not None and p.degree > 4 * r:
            raise InvalidInput(f"deg p = {p.degree} exceeds 4r = {4 * r}")
        if q.degree is not None and q.degree > 6 * r:
            raise InvalidInput(f"deg q = {q.degree} exceeds 6r = {6 * r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def to_json(self):
        return {"r": self.r, "p": self.p.to_json(), "q": self.q.to_json()}

    @classmethod
    def from_json(cls, data) -> WeierstrassModel:
        if not isinstance(data, dict) or not {"r", "p", "q"} <= data.keys():
            raise InvalidInput('model JSON needs "r", "p" and "q"')
        return cls(Poly(data["p"]), Poly(data["q"]), data["r"])


def discriminant(W: WeierstrassModel) -> Poly:
    delta = 4 * W.p**3 + 27 * W.q**2
    if delta.is_zero():
        raise InvalidInput("discriminant 4p^3 + 27q^2 vanishes identically")
    return delta


@dataclass(frozen=True)
class JMap:
    numerator: Poly
    denominator: Poly
    degree: int

    @property
    def isotrivial(self) -> bool:
        return self.degree == 0

    def to_json(self):
        return {"numerator": self.numerator.to_json(), "denominator": self.denominator.to_json(), "degree": self.degree}


def j_map(W: WeierstrassModel) -> JMap:
    """The map 4p^3 / (4p^3 + 27q^2) in lowest terms, denominator monic."""
    den = discriminant(W)
    num = 4 * W.p**3
    if num.is_zero():
        return JMap(Poly(), Poly([1]), 0)
    g = poly_gcd(num, den)
    num, den = num // g, den // g
    lead = den.lead
    num, den = Poly([c / lead for c in num.coeffs]), den.monic()
    degree = max(num.degree, den.degree)
    if degree > 12 * W.r:  # pragma: no cover - impossible for valid models
        raise AssertionError(f"deg j = {degree} exceeds 12r")
    return JMap(num, den, degree)


def kodaira_from_valuations(vp: int, vq: int, vd: int) -> FiberDescriptor | None:
    """Fiber type of a minimal model (not both vp >= 4, vq >= 6) in characteristic 0."""
    if vd == 0:
        return None
    if vp == 0:
        fib = FiberDescriptor("I", vd)
    elif vq == 1:
        fib = FiberDescriptor("II")
    elif vp == 1:
        fib = FiberDescriptor("III")
    elif vq == 2:
        fib = FiberDescriptor("IV")
    elif vp == 2 and vq == 3:
        fib = FiberDescriptor("I*", vd - 6)
    elif vq == 3 or vp == 2:
        fib = FiberDescriptor("I*", 0)
    elif vq == 4:
        fib = FiberDescriptor("IV*")
    elif vp == 3:
        fib = FiberDescriptor("III*")
    elif vq == 5:
        fib = FiberDescriptor("II*")
    else:
        raise InvalidInput(f"valuations ({vp}, {vq}, {vd}) are not minimal")
    # table rows must agree with chi = v(Delta) and chi - r in {1, 2}
    if fib.euler != vd or fib.euler - fib.rank != (1 if fib.multiplicative else 2):
        raise AssertionError(f"valuation table inconsistent at ({vp}, {vq}, {vd}) -> {fib.name}")
    return fib


def minimal_valuations(vp: int, vq: int, vd: int):
    """Strip (u^4, u^6) twists; returns the reduced triple and the number of steps."""
    steps = 0
    while vp >= 4 and vq >= 6:
        vp, vq, vd = vp - 4, vq - 6, vd - 12
        steps += 1
    return (vp, vq, vd), steps


@dataclass(frozen=True)
class PlaceAnalysis:
    place: Poly | str  # monic irreducible factor, or "inf"
    degree: int  # number of geometric fibers over this place
    valuations: tuple  # (v_p, v_q, v_Delta) of the given model
    reduced: tuple  # valuations after minimal reduction
    fiber: FiberDescriptor | None
    minimal: bool

    @property
    def euler(self) -> int:
        return self.degree * (self.fiber.euler if self.fiber else 0)

    def to_json(self):
        def v(x):
            return None if x >= INF // 2 else x

        return {
            "place": "inf" if self.place == "inf" else self.place.to_json(),
            "degree": self.degree,
            "v_p": v(self.valuations[0]),
            "v_q": v(self.valuations[1]),
            "v_delta": self.valuations[2],
            "type": self.fiber.name if self.fiber else None,
            "minimal": self.minimal,
        }


def _place(place, degree, vals):
    reduced, steps = minimal_valuations(*vals)
    fib = kodaira_from_valuations(*reduced)
    return PlaceAnalysis(place, degree, vals, reduced, fib, steps == 0)


def analyze_places(W: WeierstrassModel) -> list:
    """Singular fibers of W: one entry per irreducible factor of Delta, then t = infinity."""
    delta = discriminant(W)
    out = []
    for pi, mult in irreducible_factors(delta):
        vp = valuation(W.p, pi)
        vq = valuation(W.q, pi)
        vals = (INF if vp is None else vp, INF if vq is None else vq, mult)
        out.append(_place(pi, pi.degree, vals))
    r = W.r
    vd = 12 * r - delta.degree
    if vd > 0:
        vp = INF if W.p.is_zero() else 4 * r - W.p.degree
        vq = INF if W.q.is_zero() else 6 * r - W.q.degree
        out.append(_place("inf", 1, (vp, vq, vd)))
    return out


def is_minimal(W: WeierstrassModel) -> bool:
    return all(pl.minimal for pl in analyze_places(W))


@dataclass(frozen=True)
class ModelReport:
    model: WeierstrassModel
    places: tuple
    jmap: JMap

    @property
    def total_euler(self) -> int:
        return sum(pl.euler for pl in self.places)

    @property
    def minimal(self) -> bool:
        return all(pl.minimal for pl in self.places)

    def fiber_counts(self) -> dict:
        counts: dict = {}
        for pl in self.places:
            if pl.fiber:
                counts[pl.fiber.name] = counts.get(pl.fiber.name, 0) + pl.degree
        return counts

    def to_json(self):
        return {
            "model": self.model.to_json(),
            "places": [pl.to_json() for pl in self.places],
            "fiber_counts": self.fiber_counts(),
            "sum_chi": self.total_euler,
            "expected_sum_chi": 12 * self.model.r,
            "minimal": self.minimal,
            "deg_j": self.jmap.degree,
            "deg_j_bound": 12 * self.model.r,
            "isotrivial": self.jmap.isotrivial,
        }


def analyze(W: WeierstrassModel) -> ModelReport:
    return ModelReport(W, tuple(analyze_places(W)), j_map(W))


@dataclass(frozen=True)
class IndexBoundReport:
    applicable: bool
    deg_j: int
    claimed_index: int | None
    bound_from_j: int | None
    bound_from_r: int
    passes: bool | None
    note: str = ""

    def to_json(self):
        return {
            "applicable": self.applicable,
            "deg_j": self.deg_j,
            "claimed_index": self.claimed_index,
            "bound_2deg_j": self.bound_from_j,
            "bound_deg_j_if_no_center": self.deg_j if self.applicable else None,
            "bound_24r": self.bound_from_r,
            "passes": self.passes,
            "note": self.note,
        }


def index_bound(W: WeierstrassModel, claimed) -> IndexBoundReport:
    """Check a claimed monodromy index against 2 deg(j) and 24r.

    ``claimed`` is an integer index or a FiniteMatrixGroup (its mod-m index,
    which is a lower bound for the true index, is used).
    """
    if hasattr(claimed, "elements"):
        from .modular import index_in_full

        claimed = index_in_full(claimed)
    claimed = to_int(claimed)
    if claimed < 1:
        raise InvalidInput("claimed index must be >= 1")
    jm = j_map(W)
    if jm.isotrivial:
        return IndexBoundReport(False, 0, claimed, None, 24 * W.r, None,
                                "isotrivial model: the index bound needs a non-constant j-map")
    b = 2 * jm.degree
    return IndexBoundReport(True, jm.degree, claimed, b, 24 * W.r, claimed <= b and claimed <= 24 * W.r)


def random_model(r: int, rng, coeff_bound: int = 9, structured: bool = True) -> WeierstrassModel:
    """Seeded random model; with ``structured`` the polynomials get repeated
    linear factors and lowered degrees, so additive and I_n fibers (n > 1)
    and a singular fiber at infinity occur. May be non-minimal; callers filter.
    """

    def rand_poly(deg):
        c = [rng.randint(-coeff_bound, coeff_bound) for _ in range(deg + 1)]
        if deg >= 0 and c[-1] == 0:
            c[-1] = rng.choice((-1, 1)) * rng.randint(1, coeff_bound)
        return Poly(c)

    if not structured:
        return WeierstrassModel(rand_poly(4 * r), rand_poly(6 * r), r)
    p_deg = 4 * r - rng.choice((0, 0, 1, 2, 3))
    q_deg = 6 * r - rng.choice((0, 0, 1, 2, 3))
    shared = Poly([rng.randint(-3, 3), 1])
    ep, eq = rng.choice(((0, 0), (1, 1), (1, 2), (2, 2), (2, 3), (3, 4), (1, 3), (3, 5), (4, 5)))
    ep, eq = min(ep, p_deg), min(eq, q_deg)
    p = shared**ep * rand_poly(p_deg - ep)
    q = shared**eq * rand_poly(q_deg - eq)
    if rng.random() < 0.3:
        # p = -3u^2, q = 2u^3 + t^n b makes Delta = 27 t^n b (4u^3 + t^n b): an I_n fiber at t = 0
        n = rng.randint(2, 6)
        u = rand_poly(2 * r - rng.choice((0, 1)))
        u = u - u(0) + rng.choice((-1, 1)) * rng.randint(1, 3)
        b = rand_poly(6 * r - n - rng.choice((0, 1)))
        b = b - b(0) + rng.choice((-1, 1)) * rng.randint(1, 3)
        p = -3 * u**2
        q = 2 * u**3 + Poly.monomial(n) * b
    return WeierstrassModel(p, q, r)
