import pytest
from hypothesis import given, strategies as st

from qbundle.examples import get_example, suq2_fundamental, suq2_hopf, u1_hopf, z2_hopf
from qbundle.hopf import (Character, Corepresentation, DimensionMismatch, GradeOverflow, LinearMap, convolve,
                          unit_map)
from qbundle.ncalg import TensorAlgebra
from qbundle.scalars import ONE, ZERO, I, Q, parse_scalar
from strategies import elements

SU = suq2_hopf()
HOPFS = [u1_hopf(), z2_hopf(), SU, get_example("hopf-fibration").calc.hat, get_example("dunkl-rank1").calc.hat]


@pytest.mark.parametrize("h", HOPFS, ids=lambda h: h.G.name)
def test_axioms_on_generators(h):
    assert h.axiom_failures() == []


@given(st.data())
def test_suq2_coproduct_is_multiplicative(data):
    a, b = data.draw(elements(SU.G)), data.draw(elements(SU.G))
    assert SU.coproduct(a * b) == SU.coproduct(a) * SU.coproduct(b)
    assert SU.counit(a * b) == SU.counit(a) * SU.counit(b)
    assert SU.antipode(a * b) == SU.antipode(b) * SU.antipode(a)
    assert SU.axiom_failures([a]) == []


def test_suq2_explicit_values():
    G = SU.G
    assert SU.antipode(G.gen("gamma")) == -Q * G.gen("gamma")
    assert SU.counit(G.parse("alpha + gamma")) == ONE
    GG = TensorAlgebra([G, G])
    assert SU.coproduct(G.gen("alpha")) == GG.pure(G.gen("alpha"), G.gen("alpha")) - \
        GG.pure(G.gen("gamma*"), G.gen("gamma")) * Q


def test_graded_hopf_structure_on_envelope():
    hat = get_example("hopf-fibration").calc.hat
    A = hat.G
    s = A.gen("sigma")
    assert hat.counit(s) == ZERO
    # φ(ς) = 1⊗ς + ς⊗1 and κ(ς) = −ς since ad(ς) = ς⊗1
    assert hat.coproduct(s) == hat.GG.pure(A.one, s) + hat.GG.pure(s, A.one)
    assert hat.antipode(s) == -s


def test_fundamental_corepresentation():
    r = suq2_fundamental(SU).check()
    assert r.comatrix and r.counit and r.orthogonality_antipode and r.unitarity and r.inner_product_invariance
    # summing g*_ik g_jk over the second index is not unitarity once the algebra is noncommutative
    assert not r.literal_second_identity
    rb = suq2_fundamental(SU, balanced=True).check()
    assert rb.comatrix and rb.literal_second_identity and not rb.unitarity


def test_weight_coreps():
    h = u1_hopf()
    for n in range(-3, 4):
        g = h.G.gen("z" if n >= 0 else "z*") ** abs(n) if n else h.G.one
        assert Corepresentation(h, [[g]]).check().ok


def test_corep_apply_and_errors():
    u = suq2_fundamental(SU)
    v = u.apply([1, 0])
    assert v == [SU.G.gen("alpha"), SU.G.gen("gamma")]
    with pytest.raises(DimensionMismatch):
        u.apply([1])
    with pytest.raises(DimensionMismatch):
        Corepresentation(SU, [["alpha", "gamma"]])
    assert not u.is_block_diagonal()


def test_non_corep_reported():
    bad = Corepresentation(SU, [["alpha", "gamma"], ["gamma", "alpha*"]]).check()
    assert not bad.ok and bad.failures


def test_characters():
    h = u1_hopf()
    chi = Character(h, {"z": "i", "z*": "-i"}, "chi")
    assert chi.is_valid()
    assert chi(h.G.parse("z^3 + z*")) == -2 * I
    inv = chi.inverse()
    both = chi.convolve(inv)
    assert both(h.G.gen("z")) == ONE and both(h.G.gen("z*")) == ONE
    assert not Character(h, {"z": 2, "z*": 2}).is_valid()       # z z* = 1 forces χ(z*) = χ(z)⁻¹
    with pytest.raises(KeyError):
        Character(h, {"z": 1})
    s = Character(SU, {"alpha": "q", "alpha*": "q^-1", "gamma": 0, "gamma*": 0})
    assert s.is_valid()


def test_convolution_unit_and_grading():
    h = u1_hopf()
    chi = Character(h, {"z": "i", "z*": "-i"}).as_map()
    e = unit_map(h)
    for w in h.G.normal_words(3):
        assert convolve(chi, e, h).word(w) == chi.word(w) == convolve(e, chi, h).word(w)
    hat = get_example("hopf-fibration").calc.hat
    f = LinearMap(hat.G, lambda w: ONE, ZERO)
    with pytest.raises(GradeOverflow):
        convolve(f, f, hat, max_degree=0).word((hat.G.index["sigma"],))
    assert parse_scalar("q") == Q
