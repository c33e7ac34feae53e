"""Quantum translation map, quantum gauge transformations and their action on connections
and on sections of associated bundles.

Balanced tensors Ω•(GM)⊗_{Ω•(M)}Ω•(GM) are stored by representatives in Ω•(GM)⊗Ω•(GM)
and compared through the injective map β̃(w⊗z) = (w⊗1)Ψ(z).
"""
from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .assoc import AssociatedBundle, Intertwiner, LeftForm
from .bundle import Bundle, Connection, _as
from .hopf import Character, LinearMap
from .linalg import solve_combination
from .ncalg import AlgebraElement, GeneratorMap, TensorAlgebra, TensorElement, Word, map_leg
from .report import Check, check, skipped
from .scalars import ONE, ZERO, ScalarValue


class NotCovariant(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class CentralityViolated(ValueError):
    pass


class NotDifferentialMorphism(ValueError):
    pass


class OutsideRepresentations(ValueError):
    pass


# ---------------------------------------------------------------------------
# quantum translation map
# ---------------------------------------------------------------------------

class TranslationMap:
    """qtrs: Γ^∧ → Ω•(GM)⊗_{Ω•(M)}Ω•(GM), built from the representation data of the bundle and a connection."""

    def __init__(self, bundle: Bundle, omega: Connection):
        self.bundle, self.omega = bundle, omega
        self.calc = bundle.calc
        self.O, self.A = bundle.O, bundle.calc.A
        self.OO = TensorAlgebra([self.O, self.O])
        self.OOA = TensorAlgebra([self.O, self.O, self.A])
        self.OAO = TensorAlgebra([self.O, self.A, self.O])
        self.OAA = bundle.OAA
        self._memo: dict[Word, TensorElement] = {}
        self._coeff_rows, self._coeff_tags = self._coefficient_basis()

    # -- degree zero ------------------------------------------------------------------
    def _coefficient_basis(self):
        G = self.calc.G
        rows, tags = [], []
        for key, rep in self.bundle.reps.items():
            for i in range(rep.n):
                for j in range(rep.n):
                    g = G.normal_form(_as(G, rep.corep.g(i, j)))
                    rows.append(dict(g.terms))
                    tags.append((key, i, j))
        return rows, tags

    def qtrs0(self, g) -> TensorElement:
        """qtrs(g^α_ij) = Σ_k x*_ki ⊗ x_kj, extended linearly over the registered coefficients."""
        G = self.calc.G
        g = _as(G, g) if not isinstance(g, str) else G.parse(g)
        out = self.OO.zero
        c0 = g.coefficient(())
        if c0:
            out = self.OO.one * c0
            g = g - G.scalar(c0)
        if g.is_zero():
            return out
        sol = solve_combination(self._coeff_rows, g.terms)
        if sol is None:
            raise OutsideRepresentations(f"{g} is not in the span of the registered coefficients")
        for idx, c in sol.items():
            key, i, j = self._coeff_tags[idx]
            rep = self.bundle.reps[key]
            for k in range(rep.d):
                out = out + self.OO.pure(rep.x[k][i].star(), rep.x[k][j]) * c
        return out

    # -- degree one -------------------------------------------------------------------
    def qtrs_theta(self, k: int, omega: Connection | None = None) -> TensorElement:
        """qtrs(θ) = 1⊗ω(θ) − Σ ω(θ⁽⁰⁾)[θ⁽¹⁾]₁ ⊗ [θ⁽¹⁾]₂."""
        w = omega or self.omega
        calc, O, OO = self.calc, self.O, self.OO
        out = OO.pure(O.one, w.on_vec({k: ONE}))
        G = calc.G
        for (u, v), c in calc.ad(calc._elem({k: ONE})).terms.items():
            left = w.on_word(u)
            inner = self.qtrs0(AlgebraElement(G, {v: ONE}))
            for (a, b), e in inner.terms.items():
                out = out - OO.pure(left * AlgebraElement(O, {a: ONE}), AlgebraElement(O, {b: ONE})) * (c * e)
        return out

    # -- all of Γ^∧ ------------------------------------------------------------------
    def word(self, w: Word) -> TensorElement:
        r = self._memo.get(w)
        if r is not None:
            return r
        A, O, OO = self.A, self.O, self.OO
        if not w:
            r = OO.pure(O.one, O.one)
        elif len(w) == 1:
            g = w[0]
            if A.deg[g] == 0:
                r = self.qtrs0(AlgebraElement(self.calc.G, {(g,): ONE}))
            else:
                r = self.qtrs_theta(self.calc._pos[g])
        else:
            r = self._product(self.word(w[:-1]), A.word_degree(w[:-1]), self.word(w[-1:]))
        self._memo[w] = r
        return r

    def _product(self, ta: TensorElement, deg_a: int, tb: TensorElement) -> TensorElement:
        """qtrs(ab) = (−1)^{|a||b₁|} b₁a₁ ⊗ a₂b₂."""
        O, OO = self.O, self.OO
        out = OO.zero
        for (a1, a2), c in ta.terms.items():
            for (b1, b2), e in tb.terms.items():
                s = c * e
                if deg_a & O.word_degree(b1) & 1:
                    s = -s
                left = AlgebraElement(O, {b1: ONE}) * AlgebraElement(O, {a1: ONE})
                right = AlgebraElement(O, {a2: ONE}) * AlgebraElement(O, {b2: ONE})
                out = out + OO.pure(left, right) * s
        return out

    def __call__(self, x) -> TensorElement:
        x = x if isinstance(x, AlgebraElement) else self.calc.envelope_normal_form(x)
        out = self.OO.zero
        for w, c in x.terms.items():
            out = out + self.word(w) * c
        return out

    # -- balanced tensor comparison ------------------------------------------------------
    def beta(self, t: TensorElement) -> TensorElement:
        """β̃(w⊗z) = (w⊗1)Ψ(z)."""
        b, OA = self.bundle, self.bundle.OA
        out = OA.zero
        for (u, v), c in t.terms.items():
            out = out + OA.pure(b.word(u), self.A.one) * b.psi.word(v) * c
        return out

    def same(self, t1: TensorElement, t2: TensorElement) -> bool:
        return self.beta(t1) == self.beta(t2)

    def d_tensor(self, t: TensorElement) -> TensorElement:
        """d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy."""
        b = self.bundle
        dw = lambda w: AlgebraElement(self.O, b.d.word_terms(w))
        return map_leg(t, 0, dw, self.OO) + map_leg(t, 1, dw, self.OO, 1)

    def multiply(self, t: TensorElement) -> AlgebraElement:
        out = self.O.zero
        for (u, v), c in t.terms.items():
            out = out + self.bundle.word(u) * self.bundle.word(v) * c
        return out

    # -- the six properties ------------------------------------------------------------
    def sample_words(self, max_len: int = 2, max_degree: int = 2) -> list[Word]:
        A = self.A
        return [w for w in A.normal_words(max_len) if A.word_degree(w) <= max_degree]

    def property_checks(self, samples: Sequence[Word] | None = None, base: Sequence[object] = (),
                        others: Sequence[Connection] = ()) -> list[Check]:
        name = f"{self.bundle.name}/qtrs"
        A, O = self.A, self.O
        calc, hat = self.calc, self.calc.hat
        words = list(samples) if samples is not None else self.sample_words()
        mus = [self.bundle.elem(m) for m in base]
        bad = {k: [] for k in ("definition", "1", "2", "3", "4", "5", "6")}
        for w in words:
            t = self.word(w)
            if self.beta(t) != self.bundle.OA.pure(O.one, AlgebraElement(A, {w: ONE})):
                bad["definition"].append(A.word_str(w))
            # 1: qtrs∘d = d⊗∘qtrs
            dv = AlgebraElement(A, calc.d.word_terms(w))
            if not self.same(self(dv), self.d_tensor(t)):
                bad["1"].append(A.word_str(w))
            # 3: [ϑ]₁[ϑ]₂ = ε(ϑ)
            if self.multiply(t) != O.scalar(hat.eps_word(w)):
                bad["3"].append(A.word_str(w))
            # 4: (id⊗Ψ)qtrs = (qtrs⊗id)φ
            lhs = map_leg(t, 1, self.bundle.psi.word, self.OOA)
            rhs = self.OOA.zero
            for (a, b), c in hat.phi_word(w).terms.items():
                for (x, y), e in self.word(a).terms.items():
                    rhs = rhs + self.OOA.pure(self.bundle.word(x), self.bundle.word(y),
                                              AlgebraElement(A, {b: ONE})) * (c * e)
            if self._beta12(lhs) != self._beta12(rhs):
                bad["4"].append(A.word_str(w))
            # 5: (Ψ⊗id)qtrs = (σ⊗id)(κ⊗qtrs)φ
            lhs = map_leg(t, 0, self.bundle.psi.word, self.OAO)
            rhs = self.OAO.zero
            for (a, b), c in hat.phi_word(w).terms.items():
                ka = hat.kappa_word(a)
                for (x, y), e in self.word(b).terms.items():
                    for kw, kc in ka.terms.items():
                        s = c * e * kc
                        if A.word_degree(kw) & O.word_degree(x) & 1:
                            s = -s
                        rhs = rhs + self.OAO.pure(self.bundle.word(x), AlgebraElement(A, {kw: ONE}),
                                                  self.bundle.word(y)) * s
            if self._beta13(lhs) != self._beta13(rhs):
                bad["5"].append(A.word_str(w))
            # 6: μ qtrs(ϑ) = (−1)^{lk} qtrs(ϑ) μ
            l = A.word_degree(w)
            for mu in mus:
                for k, part in self.bundle._split(mu).items():
                    left = map_leg(t, 0, lambda u: part * self.bundle.word(u), self.OO)
                    right = map_leg(t, 1, lambda u: self.bundle.word(u) * part, self.OO)
                    if (k * l) % 2:
                        right = -right
                    if not self.same(left, right):
                        bad["6"].append(f"{part}, {A.word_str(w)}")
        # 2: the degree-one formula does not depend on the connection
        for k in range(len(calc.theta)):
            for other in others:
                if not self.same(self.qtrs_theta(k), self.qtrs_theta(k, other)):
                    bad["2"].append(f"{A.gen_names[calc.theta[k]]} with {other.name}")
        labels = {"definition": "beta~(qtrs(v)) = 1 x v",
                  "1": "qtrs d = d qtrs",
                  "2": "qtrs(theta) independent of the connection",
                  "3": "[v]1[v]2 = eps(v)",
                  "4": "(id x Psi)qtrs = (qtrs x id)phi",
                  "5": "(Psi x id)qtrs = (sigma x id)(kappa x qtrs)phi",
                  "6": "mu qtrs(v) = (-1)^{lk} qtrs(v) mu"}
        out = []
        for key, v in bad.items():
            if key == "2" and not others:
                out.append(skipped(f"{name}/{key}", labels[key], "no second connection supplied"))
            elif key == "6" and not mus:
                out.append(skipped(f"{name}/{key}", labels[key], "no base samples supplied"))
            else:
                out.append(check(f"{name}/{key}", labels[key], not v, f"fails on {v[:3]}", len(words)))
        return out

    def _beta12(self, t: TensorElement) -> TensorElement:
        """β̃ on the first two legs of Ω⊗Ω⊗Γ^∧."""
        b, OAA = self.bundle, self.OAA
        out = OAA.zero
        for (u, v, a), c in t.terms.items():
            bt = OAA.pure(b.word(u), self.A.one, self.A.one)
            pv = map_leg(b.psi.word(v), 1, lambda g: _pair(self.A, g, a), OAA)
            out = out + bt * pv * c
        return out

    def _beta13(self, t: TensorElement) -> TensorElement:
        """(a⊗g⊗y) ↦ (a⊗g⊗1)(y⁽⁰⁾⊗1⊗y⁽¹⁾), injective on the balanced tensor Ω⊗Γ^∧⊗_{Ω(M)}Ω."""
        b, OAA = self.bundle, self.OAA
        out = OAA.zero
        for (u, g, v), c in t.terms.items():
            left = OAA.pure(b.word(u), AlgebraElement(self.A, {g: ONE}), self.A.one)
            py = TensorElement(OAA, {(y0, (), y1): e for (y0, y1), e in b.psi.word(v).terms.items()})
            out = out + left * py * c
        return out


def _pair(A, g: Word, a: Word) -> TensorElement:
    return TensorAlgebra([A, A]).pure(AlgebraElement(A, {g: ONE}), AlgebraElement(A, {a: ONE}))


# ---------------------------------------------------------------------------
# gauge transformations
# ---------------------------------------------------------------------------

class GaugeTransformation:
    """A graded map f: Γ^∧ → Ω•(GM) with f(1) = 1, given by a word-level rule."""

    def __init__(self, bundle: Bundle, on_word: Callable[[Word], AlgebraElement], name: str = "f",
                 F_images: Mapping[str, AlgebraElement] | None = None):
        self.bundle, self.name = bundle, name
        self.calc = bundle.calc
        self.map = LinearMap(self.calc.A, on_word, bundle.O.zero, name)
        self._F_images = F_images
        self.inverse_map: GaugeTransformation | None = None

    def __call__(self, x) -> AlgebraElement:
        x = x if isinstance(x, AlgebraElement) else self.calc.envelope_normal_form(x)
        return self.map(x)

    def word(self, w: Word) -> AlgebraElement:
        return self.map.word(w)

    # -- the correspondence with left module maps ----------------------------------
    def F(self, x) -> AlgebraElement:
        """F_f = m(id⊗f)Ψ."""
        b = self.bundle
        out = b.O.zero
        for (u, v), c in b.coaction(x).terms.items():
            fv = self.word(v)
            if not fv.is_zero():
                out = out + b.word(u) * fv * c
        return out

    def F_hat(self, x) -> AlgebraElement:
        """F̂_f = *∘F_f∘*."""
        return self.F(self.bundle.elem(x).star()).star()

    def convolve(self, other: "GaugeTransformation") -> "GaugeTransformation":
        """(f∗g)(ϑ) = m(f⊗g)φ(ϑ)."""
        hat, O = self.calc.hat, self.bundle.O

        def on_word(w):
            out = O.zero
            for (a, b), c in hat.phi_word(w).terms.items():
                fa = self.word(a)
                if fa.is_zero():
                    continue
                out = out + fa * other.word(b) * c
            return out
        return GaugeTransformation(self.bundle, on_word, f"{self.name}*{other.name}")

    def with_inverse(self, inv: "GaugeTransformation") -> "GaugeTransformation":
        self.inverse_map = inv
        return self

    # -- certificates ---------------------------------------------------------------------
    def sample_words(self, max_len: int = 3, max_degree: int = 1) -> list[Word]:
        A = self.calc.A
        return [w for w in A.normal_words(max_len) if A.word_degree(w) <= max_degree]

    def checks(self, samples: Sequence[Word] | None = None, base: Sequence[object] = ()) -> list[Check]:
        b, A, O = self.bundle, self.calc.A, self.bundle.O
        hat = self.calc.hat
        name = f"{b.name}/{self.name}"
        words = list(samples) if samples is not None else self.sample_words()
        bad_unit = [] if self.word(()) == O.one else ["f(1) != 1"]
        bad_ad, bad_inv, bad_grade = [], [], []
        for w in words:
            fw = self.word(w)
            if not fw.is_zero() and fw.degrees() != {A.word_degree(w)}:
                bad_grade.append(A.word_str(w))
            lhs = map_leg(hat.big_ad(AlgebraElement(A, {w: ONE})), 0, self.word, b.OA)
            if lhs != b.coaction(fw):
                bad_ad.append(A.word_str(w))
        if self.inverse_map is not None:
            one = O.scalar
            fg, gf = self.convolve(self.inverse_map), self.inverse_map.convolve(self)
            for w in words:
                e = one(hat.eps_word(w))
                if fg.word(w) != e or gf.word(w) != e:
                    bad_inv.append(A.word_str(w))
        out = [check(f"{name}/unit", "f(1) = 1", not bad_unit, "f(1) != 1"),
               check(f"{name}/grade", "f preserves degree", not bad_grade, f"fails on {bad_grade[:3]}"),
               check(f"{name}/Ad covariance", "(f x id)Ad = Psi f", not bad_ad, f"fails on {bad_ad[:3]}",
                     len(words))]
        if self.inverse_map is None:
            out.append(skipped(f"{name}/inverse", "f*f^-1 = f^-1*f = 1 eps", "no inverse supplied"))
        else:
            out.append(check(f"{name}/inverse", "f*f^-1 = f^-1*f = 1 eps", not bad_inv,
                             f"fails on {bad_inv[:3]}", len(words)))
        mus = [b.elem(m) for m in base]
        bad_lin = [str(m) for m in mus if self.F(m) != m]
        out.append(check(f"{name}/F on base", "F_f restricted to Omega(M) is the identity", not bad_lin,
                         f"fails on {bad_lin[:3]}"))
        return out

    def differential_failures(self) -> list[str]:
        """F_f is certified as a graded differential *-algebra morphism on generators and their products."""
        b, O = self.bundle, self.bundle.O
        gens = [O.gen(g) for g in O.gen_names]
        bad = []
        for g, x in zip(O.gen_names, gens):
            if self.F(b.d(x)) != b.d(self.F(x)):
                bad.append(f"d on {g}")
            if self.F(x.star()) != self.F(x).star():
                bad.append(f"* on {g}")
        for x in gens:
            for y in gens:
                if self.F(x * y) != self.F(x) * self.F(y):
                    bad.append(f"product {x} {y}")
        return bad

    def star_failures(self) -> list[str]:
        O = self.bundle.O
        return [g for g in O.gen_names if self.F(O.gen(g).star()) != self.F(O.gen(g)).star()]

    def is_differential(self) -> bool:
        return not self.differential_failures()


def gauge_from_generators(bundle: Bundle, table: Mapping[str, object], name: str = "f",
                          qtrs: TranslationMap | None = None) -> GaugeTransformation:
    """The qgt whose F_f is the graded algebra morphism fixed by f on the generators of Γ^∧.

    F is first defined on generators of Ω•(GM) by F(x) = x⁽⁰⁾f(x⁽¹⁾), then f is recovered on all
    of Γ^∧ as f = m(id⊗F)qtrs."""
    A, O = bundle.calc.A, bundle.O
    f_gen = {A.index[k] if k in A.index else A.aliases[k]: bundle.elem(v) for k, v in table.items()}

    def f_letter(w: Word):
        if not w:
            return O.one
        if len(w) == 1:
            if w[0] not in f_gen:
                raise KeyError(f"{name}: no value on {A.gen_names[w[0]]}")
            return f_gen[w[0]]
        raise KeyError("word")

    images = {}
    for g in O.gen_names:
        s = O.zero
        for (u, v), c in bundle.coaction(O.gen(g)).terms.items():
            s = s + bundle.word(u) * _word_value(v, f_letter, O) * c
        images[g] = s
    F = GeneratorMap(O, images, O.one, "hom", f"F_{name}")
    bad = F.relation_failures()
    if bad:
        raise NotCovariant(f"{name}: F is not well defined on the relations: {bad[:2]}")
    return gauge_from_F(bundle, F, name, qtrs)


def _word_value(v: Word, f_letter, O) -> AlgebraElement:
    if len(v) <= 1:
        return f_letter(v)
    raise KeyError("coaction second legs must be single letters or empty for generator tables")


def gauge_from_F(bundle: Bundle, F: GeneratorMap | Mapping[str, object], name: str = "f",
                 qtrs: TranslationMap | None = None) -> GaugeTransformation:
    """f_F = m(id⊗F)qtrs for a graded algebra morphism F given on generators of Ω•(GM)."""
    O = bundle.O
    if not isinstance(F, GeneratorMap):
        F = GeneratorMap(O, {g: bundle.elem(v) for g, v in F.items()}, O.one, "hom", f"F_{name}")
    bad = [g for g in O.gen_names if bundle.coaction(F(O.gen(g))) != map_leg(bundle.coaction(O.gen(g)), 0, F.word, bundle.OA)]
    if bad:
        raise NotCovariant(f"{name}: (F x id)Psi != Psi F on {bad}")
    g = f_from_map(bundle, F, name, qtrs)
    g._F_images = {n: F(O.gen(n)) for n in O.gen_names}
    return g


def f_from_map(bundle: Bundle, F: Callable[[AlgebraElement], AlgebraElement], name: str = "f",
               qtrs: TranslationMap | None = None) -> GaugeTransformation:
    """f = m(id⊗F)qtrs for any left Ω•(M)-linear F, evaluated word by word on Γ^∧."""
    O = bundle.O
    q = qtrs or TranslationMap(bundle, _any_connection(bundle))
    Fw = F.word if isinstance(F, GeneratorMap) else (lambda w: F(bundle.word(w)))

    def on_word(w: Word):
        out = O.zero
        for (a, b), c in q.word(w).terms.items():
            out = out + bundle.word(a) * Fw(b) * c
        return out
    return GaugeTransformation(bundle, on_word, name)


def _any_connection(bundle: Bundle) -> Connection:
    calc = bundle.calc
    vals = {}
    for k, t in enumerate(calc.theta):
        vals[calc.A.gen_names[t]] = _omega_triv_value(bundle, k)
    return Connection(bundle, vals, "ω0")


def _omega_triv_value(bundle: Bundle, k: int) -> AlgebraElement:
    """A vertical 1-form lifting θ_k, read off from the registered vertical generators."""
    b = bundle
    for g in b.vertical:
        x = AlgebraElement(b.O, {(g,): ONE})
        t = b.coaction(x)
        want = b.OA.pure(b.O.one, b.calc._elem({k: ONE}))
        if t - want == b.OA.pure(x, b.A.one):
            return x
    raise NotCovariant("no vertical generator lifts the basis of inv Γ; pass a TranslationMap explicitly")


def F_from_f(f: GaugeTransformation) -> Callable[[object], AlgebraElement]:
    return f.F


def f_from_F(bundle: Bundle, F: GeneratorMap | Mapping[str, object], name: str = "f",
             qtrs: TranslationMap | None = None) -> GaugeTransformation:
    return gauge_from_F(bundle, F, name, qtrs)


def identity_gauge(bundle: Bundle) -> GaugeTransformation:
    hat, O = bundle.calc.hat, bundle.O
    return GaugeTransformation(bundle, lambda w: O.scalar(hat.eps_word(w)), "1ε")


def char_to_gauge(bundle: Bundle, chi: Character) -> GaugeTransformation:
    """Δ(χ) = f_χ with f_χ(ϑ) = χ(ϑ)1; requires (id⊗χ)φ = (χ⊗id)φ on generators."""
    hat, O, A = bundle.calc.hat, bundle.O, bundle.calc.A
    if chi.hopf is not hat:
        G = bundle.calc.G
        chi = Character(hat, {g: chi.values[g] for g in G.gen_names}, chi.name)
    bad = []
    for g in A.gen_names:
        x = A.gen(g)
        left, right = A.zero, A.zero
        for (u, v), c in hat.coproduct(x).terms.items():
            left = left + AlgebraElement(A, {u: ONE}) * (c * chi.word(v))
            right = right + AlgebraElement(A, {v: ONE}) * (c * chi.word(u))
        if left != right:
            bad.append(g)
    if bad:
        raise CentralityViolated(f"{chi.name}: (id x chi)phi != (chi x id)phi on {bad}")
    f = GaugeTransformation(bundle, lambda w: O.scalar(chi.word(w)), f"f_{chi.name}")
    inv = chi.inverse()
    f.inverse_map = GaugeTransformation(bundle, lambda w: O.scalar(inv.word(w)), f"f_{inv.name}")
    return f


def gauge_act(f: GaugeTransformation, w: Connection) -> Connection:
    """(f⊛ω)(θ) = F_f(ω(θ))."""
    calc = w.bundle.calc
    vals = [f.F(w.on_vec({k: ONE})) for k in range(len(calc.theta))]
    return w.with_values(vals, f"{f.name}⊛{w.name}")


def gauge_formula_checks(f: GaugeTransformation, w: Connection) -> list[Check]:
    """F_f(ω(θ)) = m(ω⊗f)ad(θ) + f(θ) on every basis θ, and f⊛ω is a connection."""
    b, calc = w.bundle, w.bundle.calc
    name = f"{b.name}/{f.name}⊛{w.name}"
    g = gauge_act(f, w)
    bad = []
    for k in range(len(calc.theta)):
        th = calc._elem({k: ONE})
        rhs = f(th)
        for (u, v), c in calc.ad(th).terms.items():
            rhs = rhs + w.on_word(u) * f.word(v) * c
        if g.on_vec({k: ONE}) != rhs:
            bad.append(calc.A.gen_names[calc.theta[k]])
    out = [check(f"{name}/explicit", "F_f(omega(theta)) = m(omega x f)ad(theta) + f(theta)", not bad,
                 f"fails on {bad}"),
           check(f"{name}/connection", "the transformed map is a connection", g.is_connection(),
                 "; ".join(g.connection_failures()[:2]))]
    if w.is_real() and not f.star_failures():
        out.append(check(f"{name}/real", "F_f *-preserving keeps omega real", g.is_real(), "f(omega) not real"))
    return out


def action_law_checks(f1: GaugeTransformation, f2: GaugeTransformation, w: Connection,
                      samples: Sequence[object] = ()) -> list[Check]:
    """(f₁∗f₂)⊛ω = f₂⊛(f₁⊛ω) and F_{f₁∗f₂} = F_{f₂}∘F_{f₁} on samples."""
    b = w.bundle
    name = f"{b.name}/{f1.name},{f2.name}"
    f12 = f1.convolve(f2)
    ok_action = gauge_act(f12, w).values == gauge_act(f2, gauge_act(f1, w)).values
    xs = [b.elem(s) for s in samples]
    bad = [str(x) for x in xs if f12.F(x) != f2.F(f1.F(x))]
    return [check(f"{name}/right action", "(f1*f2)(omega) = f2(f1(omega))", ok_action, "action law fails"),
            check(f"{name}/group law", "F_{f1*f2} = F_{f2} after F_{f1}", not bad, f"fails on {bad[:3]}")]


def gauge_curvature_check(f: GaugeTransformation, w: Connection,
                          horizontal: Sequence[object] = ()) -> list[Check]:
    """F_f(R^ω(θ)) = R^{f⊛ω}(θ) = m(R^ω⊗f)ad(θ), and D^{f⊛ω}(φ) = dφ − (−1)^k φ⁽⁰⁾F_f(ω(π(φ⁽¹⁾)))."""
    bad = f.differential_failures()
    if bad:
        raise NotDifferentialMorphism(f"{f.name}: {bad[:3]}")
    b, calc = w.bundle, w.bundle.calc
    name = f"{b.name}/{f.name}⊛{w.name}"
    g = gauge_act(f, w)
    bad1, bad2 = [], []
    for k in range(len(calc.theta)):
        th = calc._elem({k: ONE})
        R = w.curvature_vec({k: ONE})
        Rg = g.curvature_vec({k: ONE})
        if f.F(R) != Rg:
            bad1.append(calc.A.gen_names[calc.theta[k]])
        rhs = b.O.zero
        for (u, v), c in calc.ad(th).terms.items():
            rhs = rhs + w.curvature_vec(calc._vec(AlgebraElement(calc.A, {u: ONE}))) * f.word(v) * c
        if Rg != rhs:
            bad2.append(calc.A.gen_names[calc.theta[k]])
    bad3, bad4 = [], []
    for phi in horizontal:
        phi = b.elem(phi)
        lhs = g.cov_deriv(phi)
        rhs = b.d(phi)
        for deg, part in b._split(phi).items():
            for (u, v), c in b.coaction(part).terms.items():
                gv = calc._germ_word(v)
                if not gv:
                    continue
                t = b.word(u) * f.F(w.on_vec(gv)) * c
                rhs = rhs - t if deg % 2 == 0 else rhs + t
        if lhs != rhs:
            bad3.append(str(phi))
        if g.cov_deriv(f.F(phi)) != f.F(w.cov_deriv(phi)):
            bad4.append(str(phi))
    return [check(f"{name}/F(R)", "F_f(R^omega) = R^(f omega)", not bad1, f"fails on {bad1}"),
            check(f"{name}/R ad", "R^(f omega)(theta) = m(R^omega x f)ad(theta)", not bad2, f"fails on {bad2}"),
            check(f"{name}/D formula", "D^(f omega) uses F_f(omega)", not bad3, f"fails on {bad3[:3]}"),
            check(f"{name}/D F", "D^(f omega) F_f = F_f D^omega", not bad4, f"fails on {bad4[:3]}")]


# ---------------------------------------------------------------------------
# action on sections
# ---------------------------------------------------------------------------

def section_transform(f: GaugeTransformation, assoc: AssociatedBundle, T: Intertwiner,
                      side: str = "L") -> Intertwiner:
    """A_f(T) = F_f∘T (left) or Â_f(T) = F̂_f∘T (right)."""
    F = f.F if side == "L" else f.F_hat
    out = Intertwiner(T.rep, tuple(F(v) for v in T.values))
    assoc.require(out)
    return out


def section_checks(f: GaugeTransformation, assoc: AssociatedBundle, w: Connection,
                   sections: Sequence[Intertwiner]) -> list[Check]:
    """Identities for A_f: ∇-intertwining, adjointness, σ interchange and curvature."""
    name = f"{assoc.bundle.name}/{assoc.key}/{f.name}"
    if f.inverse_map is None:
        raise NotInvertible(f"{f.name}: an inverse is required")
    g = gauge_act(f, w)
    finv = f.inverse_map
    bad = {k: [] for k in ("valid", "nabla", "adjoint", "sigma", "curvature", "inverse")}
    for T in sections:
        try:
            AT = section_transform(f, assoc, T)
        except Exception as e:  # noqa: BLE001 - reported as a failed check
            bad["valid"].append(f"{T}: {e}")
            continue
        if section_transform(finv, assoc, AT) != T:
            bad["inverse"].append(str(T))
        # (id⊗A_f)∇^ω(T) = ∇^{f⊛ω}(A_f T), compared after Υ⁻¹
        nb = assoc.nabla(w, T)
        lhs = _apply_A(assoc, f, nb)
        rhs = assoc.upsilon_inv(assoc.nabla(g, AT))
        if lhs != rhs:
            bad["nabla"].append(str(T))
        for U in sections:
            AinvU = section_transform(finv, assoc, U)
            if assoc.herm_L(AT, U) != assoc.herm_L(T, AinvU):
                bad["adjoint"].append(f"{T}, {U}")
        # (A_f⊗id)σ(ψ) = σ(id⊗A_f)ψ on ψ = ∇T, compared after Ũ⁻¹
        sig = assoc.sigma_map(nb)
        gens = [assoc.right_generator(k) for k in range(assoc.d)]
        vals_l = [assoc.O.zero] * assoc.n
        for k, mu in enumerate(sig.coeffs):
            for i in range(assoc.n):
                vals_l[i] = vals_l[i] + f.F(gens[k].values[i]) * mu
        rhs_vals = _apply_A(assoc, f, nb).values
        if tuple(vals_l) != rhs_vals:
            bad["sigma"].append(str(T))
        # curvature conjugation: R^{∇^{f⊛ω}}(A_f T) = (id⊗A_f)R^{∇^ω}(T)
        if assoc.upsilon_inv(assoc.curvature(g, AT)) != _apply_A(assoc, f, assoc.curvature(w, T)):
            bad["curvature"].append(str(T))
    labels = {"valid": "A_f(T) is a section", "inverse": "A_{f^-1} inverts A_f",
              "nabla": "(id x A_f) nabla^omega = nabla^(f omega) A_f",
              "adjoint": "<A_f T1, T2>_L = <T1, A_f^-1 T2>_L",
              "sigma": "(A_f x id) sigma = sigma (id x A_f)",
              "curvature": "R^(nabla^(f omega)) A_f = (id x A_f) R^(nabla^omega)"}
    return [check(f"{name}/{k}", labels[k], not v, f"fails on {v[:3]}") for k, v in bad.items()]


def _apply_A(assoc: AssociatedBundle, f: GaugeTransformation, form: LeftForm) -> Intertwiner:
    """Υ⁻¹((id⊗A_f)Σμ_k⊗T_k) = Σ μ_k F_f(T_k)."""
    vals = [assoc.O.zero] * assoc.n
    for k, mu in enumerate(form.coeffs):
        if mu.is_zero():
            continue
        for i in range(assoc.n):
            vals[i] = vals[i] + mu * f.F(assoc.x[k][i])
    return Intertwiner(assoc.key, tuple(vals))


# ---------------------------------------------------------------------------
# correspondence, characters and the registry
# ---------------------------------------------------------------------------

def correspondence_checks(f: GaugeTransformation, qtrs: TranslationMap,
                          words: Sequence[Word] | None = None, samples: Sequence[object] = ()) -> list[Check]:
    """f ↦ F_f ↦ m(id⊗F_f)qtrs returns f, and F ↦ f_F ↦ F_{f_F} returns F."""
    b, A = f.bundle, f.calc.A
    name = f"{b.name}/{f.name}"
    words = list(words) if words is not None else f.sample_words(2, 2)
    back = f_from_map(b, f.F, f"{f.name}'", qtrs)
    bad1 = [A.word_str(w) for w in words if back.word(w) != f.word(w)]
    xs = [b.elem(x) for x in samples] or [b.O.gen(g) for g in b.O.gen_names]
    bad2 = [str(x) for x in xs if back.F(x) != f.F(x)]
    return [check(f"{name}/f from F_f", "m(id x F_f)qtrs = f", not bad1, f"fails on {bad1[:3]}", len(words)),
            check(f"{name}/F from f_F", "F_(f_F) = F", not bad2, f"fails on {bad2[:3]}", len(xs))]


def delta_monoid_check(bundle: Bundle, chi1: Character, chi2: Character,
                       words: Sequence[Word] | None = None) -> Check:
    """Δ(χ₁∗χ₂) = Δ(χ₁)∗Δ(χ₂) on sample words of Γ^∧."""
    f12 = char_to_gauge(bundle, chi1.convolve(chi2))
    g12 = char_to_gauge(bundle, chi1).convolve(char_to_gauge(bundle, chi2))
    words = list(words) if words is not None else f12.sample_words(3, 2)
    bad = [bundle.calc.A.word_str(w) for w in words if f12.word(w) != g12.word(w)]
    return check(f"{bundle.name}/Delta({chi1.name}*{chi2.name})", "Delta(chi1*chi2) = Delta(chi1)*Delta(chi2)",
                 not bad, f"fails on {bad[:3]}", len(words))


_GAUGE_TABLES = {
    "trivial-u1": {"chi-i": ("character", {"z": "i", "z*": "-i"})},
    "trivial-u1[circle]": {"p": ("generators", {"z": "p", "z*": "p*", "sigma": "e"},
                                 {"z": "p*", "z*": "p", "sigma": "-e"}),
                           "shift": ("generators", {"z": "1", "z*": "1", "sigma": "e"},
                                     {"z": "1", "z*": "1", "sigma": "-e"})},
    "hopf-fibration": {"chi-i": ("character", {"z": "i", "z*": "-i"})},
    "dunkl-rank1": {"chi-sign": ("character", {"t": "-1"})},
}


def registered_gauges(ex) -> dict[str, GaugeTransformation]:
    """Named qgts of an example, each with its validated inverse; ``id`` is always present."""
    cache = ex.info.setdefault("_gauges", {})
    if cache:
        return cache
    b = ex.bundle
    q = translation_map(ex)
    idg = identity_gauge(b)
    idg.inverse_map = idg
    cache["id"] = idg
    tables = dict(_GAUGE_TABLES.get(ex.name.split("[")[0], {}))
    tables.update(_GAUGE_TABLES.get(ex.name, {}) if "[" in ex.name else {})
    for key, spec in tables.items():
        if spec[0] == "character":
            f = char_to_gauge(b, Character(b.calc.hopf, spec[1], key))
            f.name = key
        else:
            f = gauge_from_generators(b, spec[1], key, q)
            f.inverse_map = gauge_from_generators(b, spec[2], f"{key}⁻¹", q)
        cache[key] = f
    return cache


def translation_map(ex, connection: str | None = None) -> TranslationMap:
    name = connection or next(iter(ex.connections))
    cache = ex.info.setdefault("_qtrs", {})
    if name not in cache:
        cache[name] = TranslationMap(ex.bundle, ex.connections[name])
    return cache[name]
