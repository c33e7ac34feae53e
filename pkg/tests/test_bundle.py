import pytest
from hypothesis import given, settings, strategies as st

from qbundle.bundle import Displacement, NotAConnection, NotHorizontal, difference
from qbundle.examples import get_example
from qbundle.scalars import ONE
from strategies import elements

EXAMPLES = [("trivial-u1", None), ("trivial-u1", "circle"), ("trivial-u1", "free"), ("trivial-u1", "point"),
            ("hopf-fibration", None), ("dunkl-rank1", None)]


def ex_id(e):
    return e[0] + (f"[{e[1]}]" if e[1] else "")


@pytest.mark.parametrize("key", EXAMPLES, ids=ex_id)
def test_bundle_structure(key):
    b = get_example(*key).bundle
    bad = [c for c in b.check_qpb() if c.status == "fail"]
    assert bad == []
    assert all(c.status == "pass" for c in b.qtrs_witness_checks())


@settings(max_examples=20)
@given(st.data())
@pytest.mark.parametrize("key", [("hopf-fibration", None), ("dunkl-rank1", None)], ids=ex_id)
def test_d_and_coaction_on_random_elements(key, data):
    b = get_example(*key).bundle
    x, y = data.draw(elements(b.O)), data.draw(elements(b.O))
    assert b.d(b.d(x)).is_zero()
    assert b.coaction(x * y) == b.coaction(x) * b.coaction(y)
    assert b.coaction(b.d(x)) == b.tensor_d(b.coaction(x))
    assert b.coaction(x.star()) == b.coaction(x).star()


@pytest.mark.parametrize("key", EXAMPLES, ids=ex_id)
def test_registered_connections(key):
    ex = get_example(*key)
    for w in ex.connections.values():
        assert w.connection_failures() == [], w.name
        w.require()
        bad = [c for c in w.curvature_checks() + w.cov_deriv_checks(2) if c.status == "fail"]
        assert bad == [], (w.name, bad)


def test_zero_form_is_not_a_connection():
    ex = get_example("trivial-u1")
    b = ex.bundle
    w = next(iter(ex.connections.values()))
    bad = w.with_values([b.O.zero for _ in w.values], "zero")
    assert not bad.is_connection()
    with pytest.raises(NotAConnection, match="zero"):
        bad.require()


def test_dual_and_reality():
    ex = get_example("trivial-u1", "free")
    assert ex.connections["real"].is_real()
    assert not ex.connections["nonreal"].is_real()
    w = ex.connections["triv"]
    assert w.dual().dual().values == w.values


def test_regularity_and_multiplicativity():
    triv = get_example("trivial-u1").connections["triv"]
    assert triv.regularity(3).regular and triv.is_multiplicative()
    dunkl = get_example("dunkl-rank1").connections["dunkl"]
    rep = dunkl.regularity(3)
    assert not rep.regular and "ℓ(" in str(rep)
    assert dunkl.is_multiplicative()


def test_cov_deriv_on_base_is_d():
    ex = get_example("trivial-u1", "circle")
    b, w = ex.bundle, ex.connections["gauged"]
    for s in b.base_samples:
        assert w.cov_deriv(s) == b.d(s)


def test_cov_deriv_rejects_vertical_forms():
    ex = get_example("hopf-fibration")
    b, w = ex.bundle, ex.connections["c"]
    vert = b.word((b.vertical[0],))
    assert not b.is_horizontal(vert)
    with pytest.raises(NotHorizontal):
        w.cov_deriv(vert)
    with pytest.raises(NotHorizontal):
        w.ell({0: ONE}, vert)


def test_difference_of_connections_is_a_displacement():
    ex = get_example("trivial-u1", "free")
    w1, w2 = ex.connections["triv"], ex.connections["mu"]
    lam = difference(w2, w1)
    assert lam.failures() == []
    assert (w1 + lam).values == w2.values
    # shifting a connection by a connection doubles the inhomogeneous part
    assert not (w1 + w2).is_connection()


def test_displacement_from_table():
    ex = get_example("trivial-u1", "free")
    b = ex.bundle
    lam = Displacement(b, {"sigma": "mu"})
    assert lam.failures() == []
    vert = Displacement(b, {"sigma": "sigma"})
    assert vert.failures() != []


def test_connection_table_must_be_complete():
    ex = get_example("trivial-u1")
    from qbundle.bundle import Connection
    with pytest.raises(KeyError):
        Connection(ex.bundle, {})
