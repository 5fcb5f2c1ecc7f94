from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from k3kit import InvalidInput
from k3kit.fibers import FiberConfiguration, fiber
from k3kit.torsor import (
    ALL,
    FibrationDescriptor,
    MultisectionDescriptor,
    NonTorsion,
    Torsion,
    UndeterminedWithOrderNotIn,
    class_order,
    classify_nt,
    jm_class,
    no_rat_verdict,
    reduce_to_p_torsion,
    tau_class,
    transfer,
    transfer_order,
)

NODAL24 = FiberConfiguration(tuple(fiber("I_1") for _ in range(24)))


def test_class_order_examples():
    assert class_order(FibrationDescriptor(1)) == 1
    assert class_order(FibrationDescriptor(5)) == 5
    assert class_order(FibrationDescriptor(6)) == 6
    assert FibrationDescriptor(1).jacobian and not FibrationDescriptor(5).jacobian
    with pytest.raises(InvalidInput):
        FibrationDescriptor(3, jacobian=True)
    with pytest.raises(InvalidInput):
        FibrationDescriptor(0)


def test_jm_class_examples():
    F = FibrationDescriptor(4)
    assert jm_class(4, F) == 0 and jm_class(1, F) == 1 and jm_class(6, F) == 2


@pytest.mark.parametrize("d", range(1, 101))
def test_class_order_is_order_of_generator(d):
    F = FibrationDescriptor(d)
    first = next(m for m in range(1, d + 1) if jm_class(m, F) == 0)
    assert class_order(F) == first


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 100), st.integers(0, 500), st.integers(0, 500))
def test_jm_class_is_homomorphism(d, a, b):
    F = FibrationDescriptor(d)
    assert jm_class(a + b, F) == (jm_class(a, F) + jm_class(b, F)) % d


def test_transfer_order_examples():
    assert transfer_order(12, 8) == 3
    assert transfer_order(1, 17) == 1
    assert transfer_order(9, 4) == 9


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 400), st.integers(1, 400))
def test_transfer_order_properties(t, m):
    o = transfer_order(t, m)
    assert t % o == 0
    assert (o == t) == (gcd(t, m) == 1)


def test_transfer_keeps_degree_when_coprime():
    M = MultisectionDescriptor(6, Torsion(5), genus=3, ambient_degree=3)
    img = transfer(M, 4)
    assert img.torsion == Torsion(5) and img.degree == 6
    assert transfer(M, 10).torsion == Torsion(1)
    nt = MultisectionDescriptor(2, NonTorsion())
    assert transfer(nt, 7).torsion == NonTorsion()


def test_reduce_examples():
    r = reduce_to_p_torsion(5, 3, 1)
    assert r.multiplier == 2 and (2 * 3) % 5 == 1 and r.target == "E"
    assert r.descriptor.torsion == Torsion(5)
    assert reduce_to_p_torsion(5, 3, 2).target == "J"
    assert reduce_to_p_torsion(7, 1, 1).multiplier == 1


def test_reduce_errors():
    for args in ((5, 10, 1), (4, 3, 1), (5, 3, 0)):
        with pytest.raises(InvalidInput):
            reduce_to_p_torsion(*args)
    with pytest.raises(InvalidInput):
        reduce_to_p_torsion(5, 3, 1, FibrationDescriptor(3))
    assert reduce_to_p_torsion(5, 3, 1, FibrationDescriptor(5)).prime == 5


def test_reduce_inverse_exhaustive():
    for p in primerange(2, 51):
        for t in range(1, p):
            r = reduce_to_p_torsion(p, t, 1)
            assert r.multiplier * t % p == 1
            assert transfer_order(p * t, r.eta) == p


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(list(primerange(2, 60))), st.integers(1, 300), st.integers(1, 5))
def test_reduce_always_lands_on_p_torsion(p, t, k):
    if t % p == 0:
        with pytest.raises(InvalidInput):
            reduce_to_p_torsion(p, t, k)
        return
    r = reduce_to_p_torsion(p, t, k)
    assert r.descriptor.torsion == Torsion(p)
    assert transfer_order(p**k * t, r.eta) == p
    assert r.target == ("E" if k == 1 else "J")


def test_classify_nt_examples():
    M = MultisectionDescriptor(3)
    assert classify_nt(M, ALL).torsion == NonTorsion()
    upto = classify_nt(M, range(1, 101))
    assert upto.torsion == UndeterminedWithOrderNotIn(frozenset(range(1, 101)))
    with pytest.raises(InvalidInput):
        classify_nt(MultisectionDescriptor(3, Torsion(4)), {4})
    assert classify_nt(MultisectionDescriptor(3, Torsion(4)), {5}).torsion == Torsion(4)


torsion_status = st.one_of(
    st.builds(Torsion, st.integers(1, 30)),
    st.just(NonTorsion()),
    st.builds(UndeterminedWithOrderNotIn, st.frozensets(st.integers(1, 30), max_size=5)),
)


@settings(max_examples=200, deadline=None)
@given(torsion_status, st.one_of(st.just(ALL), st.frozensets(st.integers(1, 30), max_size=8)))
def test_classify_nt_never_downgrades(status, excluded):
    M = MultisectionDescriptor(2, status)
    try:
        out = classify_nt(M, excluded).torsion
    except InvalidInput:
        assert isinstance(status, Torsion) and status.order in excluded
        return
    kinds = [isinstance(out, k) for k in (Torsion, NonTorsion, UndeterminedWithOrderNotIn)]
    assert sum(kinds) == 1
    if isinstance(status, NonTorsion):
        assert out == NonTorsion()
    if isinstance(status, UndeterminedWithOrderNotIn):
        assert not isinstance(out, Torsion)
        if excluded is not ALL:
            assert status.excluded <= out.excluded


def test_multisection_degree_divisibility():
    MultisectionDescriptor(6, ambient_degree=3)
    with pytest.raises(InvalidInput):
        MultisectionDescriptor(5, ambient_degree=3)


def test_salient_is_non_torsion():
    assert MultisectionDescriptor(2, saliently_ramified=True).torsion == NonTorsion()
    with pytest.raises(InvalidInput):
        MultisectionDescriptor(2, Torsion(3), saliently_ramified=True)


def test_tau_class():
    assert tau_class(MultisectionDescriptor(4, NonTorsion()), 4).torsion == NonTorsion()
    section = tau_class(MultisectionDescriptor(1, Torsion(1)), 1)
    assert section.is_zero_section
    other = tau_class(MultisectionDescriptor(3, Torsion(2), ambient_degree=3), 3)
    assert not other.is_zero_section and other.cycle_degree == 3
    with pytest.raises(InvalidInput):
        tau_class(MultisectionDescriptor(1), 0)


def test_verdict_jacobian_p5():
    F = FibrationDescriptor(1, monodromy="full", fibers=NODAL24)
    v = no_rat_verdict(F, 5, 3)
    assert v.applicable and v.divided_degree == 5
    assert v.min_genus is not None and v.min_genus >= 2
    assert "genus >= 2" in v.conclusion
    assert any("quoted" in a for a in v.assumptions)
    ops = [a["operation"] for a in v.to_json()["audit"]]
    assert ops == ["class_order", "jm_class", "transfer_order", "reduce_to_p_torsion", "genus_sweep"]


def test_verdict_not_applicable():
    base = dict(monodromy="full", fibers=NODAL24)
    assert not no_rat_verdict(FibrationDescriptor(5, **base), 5, 2).applicable  # p | d
    assert not no_rat_verdict(FibrationDescriptor(1, **base), 5, 5).applicable  # p <= p0
    assert not no_rat_verdict(FibrationDescriptor(1, **base), 6, 2).applicable
    assert not no_rat_verdict(FibrationDescriptor(1), 5, 2).applicable
    cusps = FiberConfiguration(tuple(fiber("II") for _ in range(12)))
    v = no_rat_verdict(FibrationDescriptor(1, monodromy="full", fibers=cusps), 5, 2)
    assert not v.applicable and "isotrivial" in v.conclusion
    three = FiberConfiguration((fiber("II*"), fiber("II*"), fiber("IV")))
    assert not no_rat_verdict(FibrationDescriptor(1, monodromy="full", fibers=three), 5, 2).applicable
