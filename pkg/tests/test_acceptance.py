"""Acceptance suite: one test (or a small group) per criterion, all comparisons exact."""
from __future__ import annotations

import random
import time

import pytest
import sympy as sp

import oracles
from qbundle.assoc import AssociatedBundle, Intertwiner
from qbundle.bundle import Connection
from qbundle.examples import get_example, potential_decompose, suq2_fundamental, suq2_hopf
from qbundle.gauge import TranslationMap, gauge_act, registered_gauges, section_transform, translation_map
from qbundle.hopf import Corepresentation
from qbundle.ncalg import AlgebraElement
from qbundle.scalars import ONE, parse_scalar
from qbundle.suites import SUITES, SuiteConfig, resolve, run

crit = pytest.mark.criterion

EXAMPLES = [("trivial-u1", None), ("trivial-u1", "circle"), ("trivial-u1", "free"), ("trivial-u1", "point"),
            ("hopf-fibration", None), ("dunkl-rank1", None)]


def ex_id(e):
    return e[0] + (f"[{e[1]}]" if e[1] else "")


def basis_vecs(calc):
    return [{k: ONE} for k in range(len(calc.theta))]


# ---------------------------------------------------------------------------
# 1. germs identities
# ---------------------------------------------------------------------------

STRUCTURE_GROUPS = [("trivial-u1", None), ("hopf-fibration", None), ("dunkl-rank1", None)]


@crit(1, "germs identities on the three structure groups, < 5 s")
def test_c1_germs_identities():
    t0 = time.perf_counter()
    for name, opt in STRUCTURE_GROUPS:
        calc = get_example(name, opt).calc
        A, G, h = calc.A, calc.G, calc.hopf
        for g in G.gen_names:
            x = G.gen(g)
            phi = h.coproduct(x)
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                rhs = rhs + AlgebraElement(A, {u: ONE}) * calc.germ_word(v) * c
            assert calc.d(A.gen(g)) == rhs, (calc.name, g, "dg")
            assert calc.germs(x).star() == -calc.germs(h.antipode(x).star()), (calc.name, g, "star")
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                rhs = rhs - calc.germ_word(u) * calc.germ_word(v) * c
            assert calc.d(calc.germs(x)) == rhs, (calc.name, g, "d pi")
    assert time.perf_counter() - t0 < 5


# ---------------------------------------------------------------------------
# 2. orthogonality of matrix coefficients
# ---------------------------------------------------------------------------

def _orthogonality(cor: Corepresentation) -> tuple[bool, bool]:
    h, G, n = cor.hopf, cor.hopf.G, cor.dim
    first = second = True
    for i in range(n):
        for j in range(n):
            delta = G.one if i == j else G.zero
            s1 = sum((cor.g(i, k).star() * h.antipode(cor.g(k, j).star()) for k in range(n)), G.zero)
            s2 = sum((cor.g(i, k).star() * cor.g(j, k) for k in range(n)), G.zero)
            first &= s1 == delta
            second &= s2 == delta
    return first, second


def _unitary(cor: Corepresentation) -> bool:
    G, n = cor.hopf.G, cor.dim
    for i in range(n):
        for j in range(n):
            delta = G.one if i == j else G.zero
            if sum((cor.g(i, k) * cor.g(j, k).star() for k in range(n)), G.zero) != delta:
                return False
            if sum((cor.g(k, i).star() * cor.g(k, j) for k in range(n)), G.zero) != delta:
                return False
    return True


@crit(2, "orthogonality identities: U(1) |n| <= 3, SU_q(2) fundamental, Z/2 sign")
def test_c2_orthogonality():
    h = get_example("trivial-u1").hopf
    for n in range(-3, 4):
        g = h.G.gen("z" if n >= 0 else "z*") ** abs(n) if n else h.G.one
        assert _orthogonality(Corepresentation(h, [[g]])) == (True, True), n
    z2 = get_example("dunkl-rank1").hopf
    assert _orthogonality(Corepresentation(z2, [[z2.G.gen("t")]])) == (True, True)
    su = suq2_hopf()
    # both identities hold verbatim in the balanced basis of the spin-1/2 comodule
    assert _orthogonality(suq2_fundamental(su, balanced=True)) == (True, True)
    # the orthonormal basis gives the unitary matrix; the first identity still holds there
    u = suq2_fundamental(su)
    assert _unitary(u)
    assert _orthogonality(u)[0]


# ---------------------------------------------------------------------------
# 3. connection layer
# ---------------------------------------------------------------------------

@crit(3, "connections: trivial certified real/regular/multiplicative/flat, Dunkl multiplicative, not regular")
def test_c3_connection_layer():
    triv = get_example("trivial-u1").connections["triv"]
    hopf_c = get_example("hopf-fibration").connections["c"]
    dunkl = get_example("dunkl-rank1").connections["dunkl"]
    for w in (triv, hopf_c, dunkl):
        assert w.connection_failures() == [], w.name
    assert triv.is_real()
    reg = triv.regularity(4)
    assert reg.regular and reg.budget == 4 and reg.checked > 0
    assert triv.multiplicative_failures() == []
    assert all(triv.curvature_vec(v).is_zero() for v in basis_vecs(triv.bundle.calc))
    assert dunkl.multiplicative_failures() == []
    reg = dunkl.regularity(4)
    assert not reg.regular
    assert reg.witness and "ℓ(" in reg.witness


# ---------------------------------------------------------------------------
# 4. Dunkl reproduction
# ---------------------------------------------------------------------------

DUNKL_INPUTS = [(f"x^{k}", oracles.x ** k) for k in range(1, 7)] + [("s", oracles.s), ("x s", oracles.x * oracles.s)]


@crit(4, "Dunkl covariant derivative matches the differential-difference oracle, symbolic kappa, < 10 s")
def test_c4_dunkl_reproduction():
    t0 = time.perf_counter()
    ex = get_example("dunkl-rank1")   # kappa = q, a free symbol
    b, w = ex.bundle, ex.connections["dunkl"]
    for text, f in DUNKL_INPUTS:
        got = oracles.dunkl_form_to_sympy(w.cov_deriv(b.elem(b.O.parse(text))))
        want = oracles.sign_simplify(oracles.dunkl(f, oracles.q))
        assert oracles.equal(oracles.sign_simplify(got), want), (text, got, want)
    assert time.perf_counter() - t0 < 10


# ---------------------------------------------------------------------------
# 5. metric compatibility of induced connections for real connections
# ---------------------------------------------------------------------------

@crit(5, "compat defect vanishes: line bundle with real potential, Hopf fibration, real Dunkl; < 60 s")
def test_c5_line_bundle_displays():
    t0 = time.perf_counter()
    ex = get_example("trivial-u1", "free")
    b, O = ex.bundle, ex.bundle.O
    w = ex.connections["real"]                       # σ ↦ σ + a with a* = −a
    assert w.is_real()
    a = O.gen("a")
    p1, p2 = O.gen("p"), O.parse("r + p r*")
    for n in range(-3, 4):
        ab = AssociatedBundle(b, f"n={n}")
        T1, T2 = ab.generator(0).lmul(p1), ab.generator(0).lmul(p2)
        nl1, nl2 = ab.nabla(w, T1), ab.nabla(w, T2)
        # left displays: dp1 p2* − n p1 μ p2* and p1 dp2* − n p1 μ* p2*, summing to d(p1 p2*)
        assert ab.herm_L(nl1, T2) == b.d(p1) * p2.star() - p1 * a * p2.star() * n
        assert ab.herm_L(T1, nl2) == p1 * b.d(p2.star()) - p1 * a.star() * p2.star() * n
        assert ab.compat_defect(w, T1, T2, "L").is_zero()
        # right displays: dp1* p2 + n p1* μ p2 and p1* dp2 + n p1* μ* p2
        nr1, nr2 = ab.hat_nabla(w, T1), ab.hat_nabla(w, T2)
        assert ab.herm_R(nr1, T2) == b.d(p1.star()) * p2 + p1.star() * a * p2 * n
        assert ab.herm_R(T1, nr2) == p1.star() * b.d(p2) + p1.star() * a.star() * p2 * n
        assert ab.compat_defect(w, T1, T2, "R").is_zero()
    assert time.perf_counter() - t0 < 60


@crit(5, "compat defect vanishes: line bundle with real potential, Hopf fibration, real Dunkl; < 60 s")
@pytest.mark.parametrize("n", [1, 2])
def test_c5_hopf_intermediate_values(n):
    ex = get_example("hopf-fibration")
    b, O, w = ex.bundle, ex.bundle.O, ex.connections["c"]
    a, ast, g, gst, ep, em = (O.gen(k) for k in ("alpha", "alpha*", "gamma", "gamma*", "eta_p", "eta_m"))
    c = {k: oracles.sympy_to_scalar(v) for k, v in oracles.hopf_pairing_coefficients(n).items()}
    ab = AssociatedBundle(b, f"n={n}")
    T = ab.section([a ** n])
    nl, nr = ab.nabla(w, T), ab.hat_nabla(w, T)
    assert ab.herm_L(nl, T) == a ** (n - 1) * ast ** n * gst * ep * c["<nabla T, T>_L"]
    assert ab.herm_L(T, nl) == a ** n * ast ** (n - 1) * g * em * c["<T, nabla T>_L"]
    assert ab.herm_R(nr, T) == ast ** (n - 1) * a ** n * g * em * c["<hat nabla T, T>_R"]
    assert ab.herm_R(T, nr) == ast ** n * a ** (n - 1) * gst * ep * c["<T, hat nabla T>_R"]
    assert ab.herm_L(nl, T) + ab.herm_L(T, nl) == b.d(a ** n * ast ** n)
    assert ab.herm_R(nr, T) + ab.herm_R(T, nr) == b.d(ast ** n * a ** n)
    for side in "LR":
        assert ab.compat_defect(w, T, T, side).is_zero()
        assert ab.compat_defect(w, T, ab.generator(1), side).is_zero()


@crit(5, "compat defect vanishes: line bundle with real potential, Hopf fibration, real Dunkl; < 60 s")
def test_c5_real_dunkl():
    ex = get_example("dunkl-rank1")
    b, w = ex.bundle, ex.connections["dunkl-real"]
    assert w.is_real()
    ab = AssociatedBundle(b, "sign")
    sections = [ab.section([v]) for v in ("s", "x", "x^2 s", "x^3", "xi")]
    for T1 in sections:
        for T2 in sections:
            for side in "LR":
                assert ab.compat_defect(w, T1, T2, side).is_zero(), (T1, T2, side)


# ---------------------------------------------------------------------------
# 6. induced connections on the trivial bundle
# ---------------------------------------------------------------------------

@crit(6, "induced connections on the trivial bundle and on the line bundle with potential")
@pytest.mark.parametrize("n", range(-3, 4))
def test_c6_trivial_bundle_formula(n):
    ex = get_example("trivial-u1")
    b, O, w = ex.bundle, ex.bundle.O, ex.connections["triv"]
    ab = AssociatedBundle(b, f"n={n}")
    zn = O.gen("z") ** n if n >= 0 else O.gen("z*") ** -n
    zbar = O.gen("z*") ** n if n >= 0 else O.gen("z") ** -n
    for text in ("e11", "e12 + 2 e11 - i e21", "e21 e12 + i e11"):
        T = ab.section([O.parse(text) * zn])
        p = T.values[0] * zbar                      # p^T = T(1)(1⊗z*ⁿ)
        assert b.is_base(p)
        assert ab.nabla(w, T).coeffs == (b.d(p),)
        assert ab.hat_nabla(w, T).coeffs == (b.d(p),)
        # the generator itself is parallel, and the induced connection is flat
        assert w.cov_deriv(zn).is_zero() and w.dual_cov_deriv(zn).is_zero()
        assert all(c.is_zero() for c in ab.curvature(w, T).coeffs)


@crit(6, "induced connections on the trivial bundle and on the line bundle with potential")
@pytest.mark.parametrize("n", range(-3, 4))
def test_c6_line_bundle_potential(n):
    ex = get_example("trivial-u1", "free")
    b, O, w = ex.bundle, ex.bundle.O, ex.connections["mu"]
    ab = AssociatedBundle(b, f"n={n}")
    p, mu = O.gen("p"), O.gen("mu")
    assert potential_decompose(ex, w) == {"sigma": mu}
    T = ab.generator(0).lmul(p)
    assert ab.nabla(w, T).coeffs == (b.d(p) - p * mu * n,)
    assert ab.hat_nabla(w, T).coeffs == (b.d(p) + mu.star() * p * n,)


# ---------------------------------------------------------------------------
# 7. translation map
# ---------------------------------------------------------------------------

@crit(7, "translation map: Hopf q-binomial formula, the six properties, independence of the connection")
@pytest.mark.parametrize("n", [1, 2, 3])
def test_c7_hopf_qbinomial(n):
    ex = get_example("hopf-fibration")
    O, q = ex.bundle.O, translation_map(ex)
    a, ast, g, gst = (O.gen(k) for k in ("alpha", "alpha*", "gamma", "gamma*"))
    want = q.OO.zero
    for k in range(n + 1):
        c = oracles.sympy_to_scalar(oracles.gaussian_binomial(n, k, oracles.q ** -2))
        want = want + q.OO.pure(gst ** k * ast ** (n - k), a ** (n - k) * g ** k) * c
    got = q(ex.calc.A.gen("z") ** n)
    assert q.same(got, want)


def _second_connection(ex) -> Connection:
    """ω + λ with λ a base 1-form (λ ⊗ id applied to ad is λ itself since ad(θ) = θ⊗1 here)."""
    b = ex.bundle
    w = next(iter(ex.connections.values()))
    for s in b.base_samples:
        lam = b.elem(s)
        if lam.degrees() == {1} and b.is_base(lam):
            w2 = w.with_values([v + lam for v in w.values], f"{w.name}+λ")
            assert w2.is_connection() and w2.values != w.values
            return w2
    raise AssertionError(f"{ex.name}: no base 1-form sample")


@crit(7, "translation map: Hopf q-binomial formula, the six properties, independence of the connection")
@pytest.mark.parametrize("e", EXAMPLES, ids=ex_id)
def test_c7_qtrs_properties(e):
    ex = get_example(*e)
    b = ex.bundle
    q = translation_map(ex)
    has_base_forms = e[1] != "point"
    others = list(ex.connections.values())[1:] or ([_second_connection(ex)] if has_base_forms else [])
    checks = q.property_checks(base=b.base_samples[:3], others=others)
    status = {c.id.rsplit("/", 1)[1]: c.status for c in checks}
    expected_skips = {"2", "6"} if not has_base_forms else set()
    for key in ("definition", "1", "2", "3", "4", "5", "6"):
        want = "skipped" if key in expected_skips else "pass"
        assert status[key] == want, (key, [c for c in checks if c.status == "fail"])
    if has_base_forms:
        # the translation map built from the second connection agrees on all sample words
        q2 = TranslationMap(b, others[0])
        for w in q.sample_words():
            assert q.same(q.word(w), q2.word(w))


# ---------------------------------------------------------------------------
# 8. gauge layer
# ---------------------------------------------------------------------------

GAUGE_EXAMPLES = [("trivial-u1", None), ("trivial-u1", "circle"), ("hopf-fibration", None), ("dunkl-rank1", None)]


@crit(8, "gauge layer: action formula, potential p*dp, curvature covariance, adjointness, intertwining")
@pytest.mark.parametrize("e", GAUGE_EXAMPLES, ids=ex_id)
def test_c8_action_formula(e):
    ex = get_example(*e)
    calc = ex.calc
    for f in registered_gauges(ex).values():
        for w in ex.connections.values():
            g = gauge_act(f, w)
            for v in basis_vecs(calc):
                th = calc._elem(v)
                rhs = f(th)
                for (u, x), c in calc.ad(th).terms.items():
                    rhs = rhs + w.on_word(u) * f.word(x) * c
                assert f.F(w.on_vec(v)) == rhs == g.on_vec(v), (f.name, w.name)
            assert g.is_connection()


@crit(8, "gauge layer: action formula, potential p*dp, curvature covariance, adjointness, intertwining")
def test_c8_circle_gauge_potential():
    ex = get_example("trivial-u1", "circle")
    b, O = ex.bundle, ex.bundle.O
    f = registered_gauges(ex)["p"]
    p = O.gen("p")
    assert f(ex.calc.A.gen("z")) == p
    moved = gauge_act(f, ex.connections["triv"])
    pot = potential_decompose(ex, moved)
    assert pot == {"sigma": p.star() * b.d(p)}
    assert moved.values == ex.connections["gauged"].values


@crit(8, "gauge layer: action formula, potential p*dp, curvature covariance, adjointness, intertwining")
@pytest.mark.parametrize("e", GAUGE_EXAMPLES, ids=ex_id)
def test_c8_character_curvature(e):
    ex = get_example(*e)
    calc = ex.calc
    chars = {k: f for k, f in registered_gauges(ex).items() if k.startswith("chi") or k == "id"}
    assert len(chars) >= 2
    for f in chars.values():
        for w in ex.connections.values():
            g = gauge_act(f, w)
            for v in basis_vecs(calc):
                th = calc._elem(v)
                rhs = ex.bundle.O.zero
                for (u, x), c in calc.ad(th).terms.items():
                    rhs = rhs + w.curvature_vec(calc._vec(AlgebraElement(calc.A, {u: ONE}))) * f.word(x) * c
                assert f.F(w.curvature_vec(v)) == g.curvature_vec(v) == rhs, (f.name, w.name)


def _rep_keys(ex):
    return [k for k in ex.bundle.reps if not k.startswith("n=") or abs(int(k[2:])) <= 2]


@crit(8, "gauge layer: action formula, potential p*dp, curvature covariance, adjointness, intertwining")
@pytest.mark.parametrize("e", GAUGE_EXAMPLES, ids=ex_id)
def test_c8_sections(e):
    ex = get_example(*e)
    b = ex.bundle
    for f in registered_gauges(ex).values():
        finv = f.inverse_map
        assert finv is not None
        for key in _rep_keys(ex):
            ab = AssociatedBundle(b, key)
            secs = [ab.generator(k) for k in range(min(ab.d, 2))]
            secs += [T.lmul(b.elem(p)) for T in secs[:1] for p in b.base_samples[:2] if b.elem(p).degrees() == {0}]
            for T in secs:
                AT = section_transform(f, ab, T)
                for U in secs:
                    assert ab.herm_L(AT, U) == ab.herm_L(T, section_transform(finv, ab, U)), (f.name, key)
                if not f.is_differential():
                    continue
                for w in ex.connections.values():
                    nb = ab.nabla(w, T)
                    lhs = [b.O.zero] * ab.n
                    for k, mu in enumerate(nb.coeffs):
                        for i in range(ab.n):
                            lhs[i] = lhs[i] + mu * f.F(ab.x[k][i])
                    rhs = ab.upsilon_inv(ab.nabla(gauge_act(f, w), AT))
                    assert Intertwiner(key, tuple(lhs)) == rhs, (f.name, key, w.name)


# ---------------------------------------------------------------------------
# 9. f <-> F correspondence
# ---------------------------------------------------------------------------

@crit(9, "f <-> F round trips on every registered qgt, group law on pairs")
@pytest.mark.parametrize("e", GAUGE_EXAMPLES, ids=ex_id)
def test_c9_correspondence(e):
    from qbundle.gauge import f_from_map

    ex = get_example(*e)
    b, q = ex.bundle, translation_map(ex)
    gs = registered_gauges(ex)
    xs = [b.O.gen(g) for g in b.O.gen_names] + [b.elem(s) for s in b.base_samples]
    for f in gs.values():
        back = f_from_map(b, f.F, "back", q)
        for w in f.sample_words(2, 2):
            assert back.word(w) == f.word(w), f.name
        for x in xs:
            assert back.F(x) == f.F(x), f.name
    w = next(iter(ex.connections.values()))
    for f1 in gs.values():
        for f2 in gs.values():
            f12 = f1.convolve(f2)
            for x in xs:
                assert f12.F(x) == f2.F(f1.F(x)), (f1.name, f2.name)
            assert gauge_act(f12, w).values == gauge_act(f2, gauge_act(f1, w)).values


# ---------------------------------------------------------------------------
# 10. engine health
# ---------------------------------------------------------------------------

def _algebras():
    seen = {}
    for e in STRUCTURE_GROUPS + [("trivial-u1", "free"), ("trivial-u1", "circle")]:
        ex = get_example(*e)
        for alg in (ex.hopf.G, ex.calc.A, ex.bundle.O):
            seen.setdefault(alg.name, alg)
    su = suq2_hopf().G
    seen.setdefault(su.name, su)
    return list(seen.values())


@crit(10, "engine health: confluence to degree 6, normal-form idempotence and congruence, runtime")
@pytest.mark.parametrize("alg", _algebras(), ids=lambda a: a.name)
def test_c10_confluence_and_normal_forms(alg):
    rep = alg.check_local_confluence(6)
    assert rep.ok, str(rep)
    rng = random.Random(alg.name)
    ngen = len(alg.gen_names)
    scalars = [parse_scalar(t) for t in ("1", "-2", "q", "i", "q^-1 + 3", "1/(1 + q)")]

    def raw():
        terms = {}
        for _ in range(rng.randint(1, 3)):
            w = tuple(rng.randrange(ngen) for _ in range(rng.randint(0, 4)))
            terms[w] = terms.get(w, parse_scalar("0")) + rng.choice(scalars)
        return terms

    for _ in range(1000):
        r1, r2 = raw(), raw()
        n1, n2 = alg.normal_form(r1), alg.normal_form(r2)
        assert alg.normal_form(n1.terms) == n1
        assert all(alg.is_normal(w) for w in n1.terms)
        prod = {}
        for u, a in r1.items():
            for v, c in r2.items():
                prod[u + v] = prod.get(u + v, parse_scalar("0")) + a * c
        assert alg.normal_form(prod) == n1 * n2


@crit(10, "engine health: confluence to degree 6, normal-form idempotence and congruence, runtime")
def test_c10_full_suite_runtime():
    t0 = time.perf_counter()
    names = ["trivial-u1", "trivial-u1[circle]", "trivial-u1[free]", "trivial-u1[point]",
             "hopf-fibration", "dunkl-rank1"]
    for name in names:
        checks = run(resolve(name), list(SUITES), SuiteConfig())
        assert not [c for c in checks if c.status == "fail"], name
    assert time.perf_counter() - t0 < 300
