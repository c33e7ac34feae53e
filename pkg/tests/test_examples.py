import pytest
import sympy as sp

import oracles
from qbundle.examples import (REGISTRY, NotTrivialBundle, UnknownExample, field_strength, get_example,
                              hopf_qtrs_formula, potential_decompose)
from qbundle.suites import resolve


def test_registry():
    assert set(REGISTRY) == {"trivial-u1", "hopf-fibration", "dunkl-rank1"}
    with pytest.raises(UnknownExample):
        get_example("moebius")
    with pytest.raises(UnknownExample):
        get_example("trivial-u1", "torus")
    assert get_example("trivial-u1") is get_example("trivial-u1")     # cached


def test_resolve_names():
    assert resolve("trivial-u1[circle]").name == "trivial-u1[circle]"
    assert resolve("trivial-u1").name == "trivial-u1[matrix2]"
    ex = resolve("dunkl-rank1", "2")
    assert str(ex.info["kappa"]) == "2"


def test_potential_and_field_strength():
    ex = get_example("trivial-u1", "free")
    pot = potential_decompose(ex, ex.connections["mu"])
    assert pot == {"sigma": ex.bundle.O.gen("mu")}
    assert field_strength(ex, pot)["sigma"] == ex.bundle.O.parse("dmu - mu mu")
    zero = potential_decompose(ex, ex.connections["triv"])
    assert field_strength(ex, zero)["sigma"].is_zero()


def test_potential_needs_a_trivial_bundle():
    ex = get_example("hopf-fibration")
    with pytest.raises(NotTrivialBundle):
        potential_decompose(ex, ex.connections["c"])


@pytest.mark.parametrize("n", range(0, 5))
def test_hopf_qtrs_coefficients_are_gaussian_binomials(n):
    O = get_example("hopf-fibration").bundle.O
    terms = hopf_qtrs_formula(O, n)
    assert len(terms) == n + 1
    t = oracles.q ** -2
    for k, (c, _, _) in enumerate(terms):
        assert oracles.equal(oracles.scalar_to_sympy(c), oracles.gaussian_binomial(n, k, t))


def test_dunkl_displacement():
    ex = get_example("dunkl-rank1")
    lam = ex.info["lambda"]
    assert lam == ex.bundle.O.parse("xi dx") * (ex.info["kappa"] * -2)
    # θ* = −θ and λ* = λ, so the real connection takes θ + iλ
    assert lam.star() == lam
    assert ex.connections["dunkl-real"].is_real()
    assert not ex.connections["dunkl"].is_real()


def test_every_example_has_base_samples_and_reps():
    for name in REGISTRY:
        ex = get_example(name)
        assert ex.bundle.base_samples and ex.bundle.reps and ex.connections
        assert all(ex.bundle.is_base(s) for s in ex.bundle.base_samples)
    assert sp.Symbol("q") == oracles.q
