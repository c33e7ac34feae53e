import dataclasses

import pytest
from hypothesis import given, strategies as st

from qbundle.examples import u1_classical_calculus, u1_hopf, u1_q_calculus, z2_hopf, z2_universal_calculus
from qbundle.fodc import Calculus, MissingDelta
from qbundle.scalars import ONE, Q
from strategies import elements

CALCS = [u1_classical_calculus(u1_hopf()), u1_q_calculus(u1_hopf()), z2_universal_calculus(z2_hopf())]


@pytest.mark.parametrize("calc", CALCS, ids=lambda c: c.name)
def test_all_checks_pass(calc):
    bad = [c for c in calc.all_checks() if c.status == "fail"]
    assert bad == []


@pytest.mark.parametrize("calc", CALCS, ids=lambda c: c.name)
def test_germ_identities(calc):
    checks = calc.germ_identity_checks()
    assert len(checks) == 6 * len(calc.G.gen_names)
    assert all(c.status == "pass" for c in checks)


@given(st.data())
@pytest.mark.parametrize("calc", CALCS, ids=lambda c: c.name)
def test_differential(calc, data):
    A = calc.A
    a, b = data.draw(elements(A, 3)), data.draw(elements(A, 3))
    assert calc.d(calc.d(a)).is_zero()
    assert calc.d(a).star() == calc.d(a.star())
    for k in a.degrees():
        pa = a.part(k)
        sign = -ONE if k % 2 else ONE
        assert calc.d(pa * b) == calc.d(pa) * b + pa * calc.d(b) * sign


@given(st.data())
@pytest.mark.parametrize("calc", CALCS, ids=lambda c: c.name)
def test_germs_of_products(calc, data):
    """π(ab) = ε(a)π(b) + π(a)∘b on degree-zero elements."""
    G, h = calc.G, calc.hopf
    a, b = data.draw(elements(G, 3)), data.draw(elements(G, 3))
    lhs = calc.germs(a * b)
    rhs = calc.germs(b) * h.counit(a) + calc.circ_action(calc.germs(a), b)
    assert lhs == rhs
    assert calc.germs(G.one).is_zero()


def test_q_deformed_tables():
    calc = CALCS[1]
    A, G = calc.A, calc.G
    s = A.gen("sigma")
    assert calc.germs(G.gen("z*")) == -(Q ** 2) * s
    # σ z = z (σ∘z) = q⁻² z σ
    assert s * A.gen("z") == A.gen("z") * s * Q ** -2
    assert calc.ad(s) == calc.AA.pure(s, A.one)


def test_z2_envelope_is_not_truncated():
    calc = CALCS[2]
    th = calc.A.gen("theta")
    assert not (th * th).is_zero()
    assert calc.d(th) == -(th * th)
    assert calc.delta_defect(th) == -(th * th) * 2


def test_missing_delta():
    h = u1_hopf()
    data = dataclasses.replace(u1_classical_calculus(h).data, delta=None)
    calc = Calculus(h, data)
    assert not calc.has_delta
    with pytest.raises(MissingDelta):
        calc.embedded_delta(calc.A.gen("sigma"))


def test_basis_vectors_only():
    calc = CALCS[0]
    with pytest.raises(ValueError):
        calc.ad(calc.A.gen("z"))
    assert calc.envelope_normal_form("z z* sigma") == calc.A.gen("sigma")
