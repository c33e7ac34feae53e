import pytest
from hypothesis import given, settings, strategies as st

from qbundle.assoc import AssociatedBundle, NotIntertwiner, NotUnitary, RepresentationMismatch
from qbundle.examples import get_example
from qbundle.scalars import I
from strategies import laurent

CASES = [("trivial-u1", "free", "n=2"), ("trivial-u1", None, "n=-1"), ("hopf-fibration", None, "n=1"),
         ("dunkl-rank1", None, "sign")]


def case_id(c):
    return f"{c[0]}[{c[1] or ''}]/{c[2]}"


def setup(case):
    name, opt, key = case
    ex = get_example(name, opt)
    return ex, AssociatedBundle(ex.bundle, key)


def sections(ab, base):
    T = ab.generator(0)
    return [T, T.lmul(base[0]), T.rmul(base[-1])]


@pytest.mark.parametrize("case", CASES, ids=case_id)
def test_section_and_rho_checks(case):
    ex, ab = setup(case)
    base = [p for p in ex.bundle.base_samples if p.degrees() <= {0}] or [ex.bundle.O.one]
    checks = ab.section_checks(sections(ab, base), base, list(ex.connections.values())[:1])
    checks += ab.rho_checks(base)
    bad = [c for c in checks if c.status == "fail"]
    assert bad == []


@pytest.mark.parametrize("case", CASES, ids=case_id)
def test_decomposition_round_trip(case):
    ex, ab = setup(case)
    T = ab.generator(0)
    assert ab.left_reconstruct(ab.left_decompose(T)) == T
    assert ab.right_reconstruct(ab.right_decompose(T)) == T
    # Σ_k ⟨T^L_k, T^L_k⟩_R = Σ_k x*_k x_k = 1
    total = sum((ab.herm_R(ab.generator(k), ab.generator(k)) for k in range(ab.d)), ex.bundle.O.zero)
    assert total == ex.bundle.O.one


def test_non_intertwiner_rejected():
    ex, ab = setup(CASES[2])
    T = ab.section(["alpha + alpha*"])          # mixes two weights
    assert not ab.is_intertwiner(T)
    with pytest.raises(NotIntertwiner):
        ab.require(T)
    with pytest.raises(NotIntertwiner):
        ab.left_decompose(T)


def test_representation_mismatch():
    ex, ab = setup(CASES[0])
    with pytest.raises(RepresentationMismatch):
        ab.section(["z^2", "z^2"])
    with pytest.raises(RepresentationMismatch):
        AssociatedBundle(ex.bundle, "n=9")
    other = AssociatedBundle(ex.bundle, "n=1")
    with pytest.raises(RepresentationMismatch):
        ab.herm_L(other.generator(0), ab.generator(0))


def test_compat_defect_side_argument():
    ex, ab = setup(CASES[0])
    with pytest.raises(ValueError):
        ab.compat_defect(ex.connections["real"], ab.generator(0), ab.generator(0), side="X")


def test_unitary_pullback():
    ex, ab = setup(CASES[0])
    T = ab.generator(0)
    assert ab.unitary_pullback([[I]], T) == T.lmul(ex.bundle.O.scalar(I))
    with pytest.raises(NotUnitary):
        ab.unitary_pullback([[2]], T)
    with pytest.raises(RepresentationMismatch):
        ab.unitary_pullback([[1, 0]], T)
    other = AssociatedBundle(ex.bundle, "n=1")
    with pytest.raises(NotUnitary):
        ab.unitary_pullback([[1]], T, source=other)   # different weights, no intertwiner


@settings(max_examples=25)
@given(st.data())
def test_hermitian_structure_properties(data):
    ex, ab = setup(CASES[0])
    b = ex.bundle
    base = [b.O.one] + [p for p in b.base_samples if p.degrees() <= {0}]

    def base_elem():
        out = b.O.zero
        for _ in range(data.draw(st.integers(1, 3))):
            p = base[data.draw(st.integers(0, len(base) - 1))]
            out = out + p * data.draw(laurent(2))
        return out

    T = ab.generator(0)
    S, U, p = T.lmul(base_elem()), T.lmul(base_elem()), base_elem()
    assert ab.herm_L(S, U).star() == ab.herm_L(U, S)
    assert ab.herm_R(S, U).star() == ab.herm_R(U, S)
    assert ab.herm_L(S, U.lmul(p)) == ab.herm_L(S, U) * p.star()
    assert ab.herm_R(S.rmul(p), U) == p.star() * ab.herm_R(S, U)
    assert b.is_base(ab.herm_L(S, U)) and b.is_base(ab.herm_R(S, U))
