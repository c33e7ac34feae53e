import pytest
from hypothesis import given, strategies as st

from qbundle.examples import get_example, suq2_hopf
from qbundle.ncalg import (AlgebraElement, AlgebraPresentation, GeneratorSpec as Gs, NonTerminatingOrder,
                           PresentationError, RewriteBudgetExceeded, StarMismatch, TensorAlgebra, define_algebra,
                           embed, parse_tensor)
from qbundle.parsing import ParseError
from qbundle.scalars import ONE, Q
from strategies import elements

SU = suq2_hopf().G
HOPF_O = get_example("hopf-fibration").bundle.O
DUNKL_O = get_example("dunkl-rank1").bundle.O
ALGEBRAS = [SU, HOPF_O, DUNKL_O]


@given(st.data())
@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
def test_associativity_and_unit(alg, data):
    a, b, c = (data.draw(elements(alg)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * alg.one == a == alg.one * a
    assert a * (b + c) == a * b + a * c


@given(st.data())
@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: a.name)
def test_graded_star(alg, data):
    a, b = data.draw(elements(alg)), data.draw(elements(alg))
    assert a.star().star() == a
    assert (a + b).star() == a.star() + b.star()
    for da, pa in ((d, a.part(d)) for d in a.degrees()):
        for db, pb in ((d, b.part(d)) for d in b.degrees()):
            sign = -ONE if da * db % 2 else ONE
            assert (pa * pb).star() == pb.star() * pa.star() * sign


@given(st.data())
def test_normal_form_idempotent(data):
    a = data.draw(elements(HOPF_O, max_len=5))
    assert HOPF_O.normal_form(a.terms) == a
    assert all(HOPF_O.is_normal(w) for w in a.terms)


def test_suq2_relations():
    a, ast, g, gst = (SU.gen(x) for x in ("alpha", "alpha*", "gamma", "gamma*"))
    assert ast * a + g * gst == SU.one
    assert a * ast + g * gst * Q ** 2 == SU.one
    assert g * a == a * g * Q ** -1
    assert (a * g).star() == gst * ast


def test_graded_signs_in_total_algebra():
    O = HOPF_O
    ep, em, vs = O.gen("eta_p"), O.gen("eta_m"), O.gen("vs")
    assert ep * ep == O.zero and vs * vs == O.zero
    assert (ep * em).star() == -(em.star() * ep.star())
    assert ep.star() == em * Q


@pytest.mark.parametrize("alg", [SU, HOPF_O, DUNKL_O], ids=lambda a: a.name)
def test_local_confluence(alg):
    assert alg.check_local_confluence(6).ok
    assert alg.check_star_compatibility() == []


def test_nonterminating_rule_rejected():
    with pytest.raises(NonTerminatingOrder):
        define_algebra(AlgebraPresentation("bad", [Gs("a", 0), Gs("b", 0)], [("a", "a b")]))


def test_degree_changing_rule_rejected():
    with pytest.raises(PresentationError):
        define_algebra(AlgebraPresentation("bad", [Gs("a", 0), Gs("b", 1)], [("b a", "a")], graded=True))


def test_star_must_be_involutive():
    with pytest.raises(StarMismatch):
        define_algebra(AlgebraPresentation("bad", [Gs("a", 0, "2 b"), Gs("b", 0, "a")], []))
    with pytest.raises(StarMismatch):
        define_algebra(AlgebraPresentation("bad", [Gs("a", 0, "b"), Gs("b", 1, "a")], [], graded=True))


def test_duplicate_generators_rejected():
    with pytest.raises(PresentationError):
        define_algebra(AlgebraPresentation("bad", [Gs("a", 0), Gs("a", 0)], []))


def test_non_confluent_system_reported():
    alg = define_algebra(AlgebraPresentation("nc", [Gs("a", 0), Gs("b", 0)], [("a a", "b"), ("a b", "0")]))
    rep = alg.check_local_confluence(4)
    assert not rep.ok and "a" in str(rep)


def test_rewrite_budget():
    alg = define_algebra(AlgebraPresentation("tiny", [Gs("x", 0), Gs("y", 0)], [("y x", "x y + x")]))
    with pytest.raises(RewriteBudgetExceeded):
        alg.normal_form({(1,) * 6 + (0,) * 6: ONE}, budget=3)


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        SU.parse("alpha + * gamma")
    assert "column" in str(e.value)
    with pytest.raises(ParseError):
        SU.parse("delta")


def test_tensor_koszul_sign():
    O = HOPF_O
    OO = TensorAlgebra([O, O])
    ep, vs = O.gen("eta_p"), O.gen("vs")
    # (1⊗η)(ς⊗1) = −ς⊗η
    assert OO.pure(O.one, ep) * OO.pure(vs, O.one) == -OO.pure(vs, ep)
    t = parse_tensor(OO, "alpha⊗gamma - q gamma*⊗alpha*")
    assert t == OO.pure(O.gen("alpha"), O.gen("gamma")) - OO.pure(O.gen("gamma*"), O.gen("alpha*")) * Q


def test_embed_and_printing():
    x = SU.parse("alpha* alpha + gamma")
    assert embed(x, HOPF_O) == HOPF_O.parse("1 - gamma gamma* + gamma")
    assert str(SU.parse("alpha gamma - q gamma alpha")) == "0"
    assert isinstance(SU.gen("alpha"), AlgebraElement)


@given(st.data())
def test_tensor_star_is_graded_antimultiplicative(data):
    OO = TensorAlgebra([HOPF_O, HOPF_O])

    def homogeneous():
        a = data.draw(elements(HOPF_O, 2, 2))
        return [(d, a.part(d)) for d in a.degrees()]

    for da, a in homogeneous():
        for db, b in homogeneous():
            for dc, c in homogeneous():
                for dd, d in homogeneous():
                    x, y = OO.pure(a, b), OO.pure(c, d)
                    sign = -ONE if (da + db) * (dc + dd) % 2 else ONE
                    assert (x * y).star() == y.star() * x.star() * sign
    # odd legs on both sides: (1⊗ς)(ς⊗1) = −ς⊗ς
    vs = HOPF_O.gen("vs")
    x, y = OO.pure(HOPF_O.one, vs), OO.pure(vs, HOPF_O.one)
    assert (x * y).star() == -(y.star() * x.star())
