"""Bicovariant first-order calculi on a Hopf algebra and their universal envelope.

The envelope Γ^∧ is presented as one graded algebra whose generators are the
generators of G (degree 0, same order) followed by a basis of inv Γ (degree 1).
Words of G are therefore words of Γ^∧ without translation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .hopf import HopfStructure
from .linalg import Echelon
from .ncalg import (AlgebraElement, AlgebraPresentation, Derivation, GeneratorSpec,
                    PresentedAlgebra, TensorAlgebra, TensorElement, Terms, Word, _add_into,
                    define_algebra, map_leg, multiply_legs)
from .report import Check, check
from .scalars import ONE, ZERO, ScalarValue


class MissingDelta(LookupError):
    pass


@dataclass
class CalculusData:
    """Tables of a calculus; every expression is read in the envelope Γ^∧."""

    name: str
    basis: list[GeneratorSpec]
    germs: dict[str, str]                      # π(g) for generators g of G
    circ: dict[tuple[str, str], str]           # θ∘g for basis θ, generator g
    ad: dict[str, str]                         # θ -> θ⁽⁰⁾⊗θ⁽¹⁾ (tensor expression)
    d: dict[str, str]                          # d on every generator of Γ^∧
    ideal: list[str] = field(default_factory=list)          # right-ideal generators of ℛ
    wedge: list[tuple[str, str]] = field(default_factory=list)  # degree-2 rules
    delta: dict[str, str] | None = None
    extra_rules: list[tuple[str, str]] = field(default_factory=list)


class Calculus:
    def __init__(self, hopf: HopfStructure, data: CalculusData):
        self.hopf = hopf
        self.data = data
        self.name = data.name
        G = hopf.G
        self.G = G
        gp = G.presentation
        gens = [GeneratorSpec(g.name, 0, g.star, g.weight, g.display) for g in gp.generators]
        gens += list(data.basis)
        order = list(gp.order or G.gen_names) + [b.name for b in data.basis]
        A = define_algebra(AlgebraPresentation(
            f"Γ^∧({data.name})", gens, list(gp.rules) + list(data.wedge) + list(data.extra_rules),
            order, graded=True))
        self.A = A
        self.AA = TensorAlgebra([A, A])
        self.theta = [A.index[b.name] for b in data.basis]
        self._pos = {t: k for k, t in enumerate(self.theta)}
        # ∘-action on basis × generators, as dicts basis position -> scalar
        self._circ: list[list[dict]] = []
        for b in data.basis:
            row = []
            for g in G.gen_names:
                row.append(self._vec(A.parse(data.circ[(b.name, g)])))
            self._circ.append(row)
        self._germ_gen = [self._vec(A.parse(data.germs[g])) for g in G.gen_names]
        self._germ_memo: dict[Word, dict] = {(): {}}
        self._circ_memo: dict[tuple[int, Word], dict] = {}
        # commutation θ g = g⁽¹⁾ (θ∘g⁽²⁾)
        for k, t in enumerate(self.theta):
            for gi in range(len(G.gen_names)):
                rhs: Terms = {}
                for (u, v), c in hopf.phi_word((gi,)).items():
                    for j, e in self._circ_word(k, v).items():
                        _add_into(rhs, u + (self.theta[j],), c * e)
                A.add_rule((t, gi), rhs)
        self._ad = {A.index[b]: self.AA.parse(expr) for b, expr in data.ad.items()}
        self.d = Derivation(A, {g: A.parse(data.d[g]) for g in A.gen_names})
        self._delta = None
        if data.delta is not None:
            self._delta = {A.index[b]: self.AA.parse(expr) for b, expr in data.delta.items()}
        self.ideal = [G.parse(r) for r in data.ideal]
        self.hat = self._build_hat()

    # -- inv Γ vectors -------------------------------------------------------
    def _vec(self, x: AlgebraElement) -> dict:
        out = {}
        for w, c in x.terms.items():
            if len(w) != 1 or w[0] not in self._pos:
                raise ValueError(f"{self.name}: {x} is not in the span of the basis")
            out[self._pos[w[0]]] = c
        return out

    def _elem(self, v: Mapping[int, ScalarValue]) -> AlgebraElement:
        return AlgebraElement(self.A, {(self.theta[k],): c for k, c in v.items() if c})

    def basis_elements(self) -> list[AlgebraElement]:
        return [self._elem({k: ONE}) for k in range(len(self.theta))]

    def _circ_word(self, k: int, w: Word) -> dict:
        key = (k, w)
        r = self._circ_memo.get(key)
        if r is not None:
            return r
        if not w:
            r = {k: ONE}
        else:
            r = {}
            for j, c in self._circ_word(k, w[:-1]).items():
                for i, e in self._circ[j][w[-1]].items():
                    _add_vec(r, i, c * e)
        self._circ_memo[key] = r
        return r

    def _germ_word(self, w: Word) -> dict:
        r = self._germ_memo.get(w)
        if r is not None:
            return r
        head, g = w[:-1], w[-1]
        r = {}
        for k, c in self._germ_word(head).items():
            for j, e in self._circ[k][g].items():
                _add_vec(r, j, c * e)
        eh = self.hopf.eps_word(head)
        if eh:
            for j, e in self._germ_gen[g].items():
                _add_vec(r, j, eh * e)
        self._germ_memo[w] = r
        return r

    # -- public maps ----------------------------------------------------------
    def _terms_of(self, x) -> Terms:
        if isinstance(x, AlgebraElement):
            if x.algebra is self.G or x.algebra is self.A:
                return x.terms
            raise TypeError(f"element of {x.algebra.name} given to {self.name}")
        return dict(x)

    def germs(self, x) -> AlgebraElement:
        """Quantum germs map π: G → inv Γ."""
        out: dict = {}
        for w, c in self._terms_of(x).items():
            if any(g >= len(self.G.gen_names) for g in w):
                raise ValueError("germs map takes degree-zero elements of G")
            for k, e in self._germ_word(w).items():
                _add_vec(out, k, c * e)
        return self._elem(out)

    def germ_word(self, w: Word) -> AlgebraElement:
        return self._elem(self._germ_word(w))

    def circ_action(self, theta: AlgebraElement, g) -> AlgebraElement:
        v = self._vec(theta)
        out: dict = {}
        for w, c in self._terms_of(g).items():
            for k, a in v.items():
                for j, e in self._circ_word(k, w).items():
                    _add_vec(out, j, a * c * e)
        return self._elem(out)

    def ad(self, theta: AlgebraElement) -> TensorElement:
        out = self.AA.zero
        for k, c in self._vec(theta).items():
            out = out + self._ad[self.theta[k]] * c
        return out

    def big_ad(self, v: AlgebraElement) -> TensorElement:
        return self.hat.big_ad(v)

    def embedded_delta(self, theta: AlgebraElement) -> TensorElement:
        if self._delta is None:
            raise MissingDelta(f"{self.name}: no embedded differential registered")
        out = self.AA.zero
        for k, c in self._vec(theta).items():
            out = out + self._delta[self.theta[k]] * c
        return out

    def delta_defect(self, theta: AlgebraElement) -> AlgebraElement:
        """dθ − m∘δ(θ) in Γ^∧; zero exactly when curvature lands in Mor(ad, HΦ)."""
        out = self.d(theta)
        for (u, v), c in self.embedded_delta(theta).terms.items():
            out = out - self.A.normal_form({u + v: c})
        return out

    @property
    def has_delta(self) -> bool:
        return self._delta is not None

    def envelope_normal_form(self, expr) -> AlgebraElement:
        if isinstance(expr, str):
            return self.A.parse(expr) if expr.strip() else self.A.zero
        return self.A.normal_form(expr)

    def star_theta(self, theta: AlgebraElement) -> AlgebraElement:
        return theta.star()

    # -- graded Hopf structure on Γ^∧ ----------------------------------------
    def _build_hat(self) -> HopfStructure:
        A, AA, h = self.A, self.AA, self.hopf
        phi, eps, kap = {}, {}, {}
        for gi, g in enumerate(self.G.gen_names):
            phi[g] = TensorElement(AA, dict(h.phi_word((gi,)).terms))
            eps[g] = h.eps_word((gi,))
            kap[g] = AlgebraElement(A, dict(h.kappa_word((gi,)).terms))
        for t in self.theta:
            name = A.gen_names[t]
            th = A.gen(name)
            ad = self._ad[t]
            phi[name] = AA.pure(A.one, th) + ad
            eps[name] = ZERO
            k_img: Terms = {}
            for (u, v), c in ad.terms.items():
                kv = h.kappa_word(v).terms
                for w, e in A.mul_terms({u: ONE}, kv).items():
                    _add_into(k_img, w, -c * e)
            kap[name] = AlgebraElement(A, k_img)
        return HopfStructure(A, phi, eps, kap)

    # -- checks ----------------------------------------------------------------
    def _coproduct_G(self, g: AlgebraElement) -> TensorElement:
        return self.hopf.coproduct(g)

    def germ_identity_checks(self) -> list[Check]:
        """The germs identities on every generator of G, computed in Γ^∧."""
        A, G = self.A, self.G
        out = []
        for gname in G.gen_names:
            g = G.gen(gname)
            ga = A.gen(gname)
            phi = self._coproduct_G(g)
            pg = self.germs(g)
            # dg = g⁽¹⁾ π(g⁽²⁾)
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                rhs = rhs + AlgebraElement(A, {u: ONE}) * self.germ_word(v) * c
            lhs = self.d(ga)
            out.append(check(f"{self.name}/d({gname})", "germs: dg = g(1) pi(g(2))", lhs == rhs,
                             f"{lhs} != {rhs}"))
            # π(g)* = −π(κ(g)*)
            lhs = pg.star()
            rhs = -self.germs(self.hopf.antipode(g).star())
            out.append(check(f"{self.name}/pi({gname})*", "germs: pi(g)* = -pi(kappa(g)*)",
                             lhs == rhs, f"{lhs} != {rhs}"))
            # dπ(g) = −π(g⁽¹⁾)π(g⁽²⁾)
            lhs = self.d(pg)
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                rhs = rhs - self.germ_word(u) * self.germ_word(v) * c
            out.append(check(f"{self.name}/d pi({gname})", "germs: d pi(g) = -pi(g(1)) pi(g(2))",
                             lhs == rhs, f"{lhs} != {rhs}"))
            # π(g) = κ(g⁽¹⁾) dg⁽²⁾
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                k = AlgebraElement(A, dict(self.hopf.kappa_word(u).terms))
                rhs = rhs + k * self.d(AlgebraElement(A, {v: ONE})) * c
            out.append(check(f"{self.name}/pi({gname}) def", "germs: pi(g) = kappa(g(1)) dg(2)",
                             pg == rhs, f"{pg} != {rhs}"))
            # π(g) = −(dκ(g⁽¹⁾)) g⁽²⁾
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                k = AlgebraElement(A, dict(self.hopf.kappa_word(u).terms))
                rhs = rhs - self.d(k) * AlgebraElement(A, {v: ONE}) * c
            out.append(check(f"{self.name}/pi({gname}) alt", "germs: pi(g) = -d(kappa(g(1))) g(2)",
                             pg == rhs, f"{pg} != {rhs}"))
            # dκ(g) = −π(g⁽¹⁾) κ(g⁽²⁾)
            lhs = self.d(AlgebraElement(A, dict(self.hopf.antipode(g).terms)))
            rhs = A.zero
            for (u, v), c in phi.terms.items():
                k = AlgebraElement(A, dict(self.hopf.kappa_word(v).terms))
                rhs = rhs - self.germ_word(u) * k * c
            out.append(check(f"{self.name}/d kappa({gname})", "germs: d kappa(g) = -pi(g(1)) kappa(g(2))",
                             lhs == rhs, f"{lhs} != {rhs}"))
        return out

    def kernel_dimension_check(self, max_len: int = 4) -> Check:
        """Ker π ∩ Ker ε = ℛ, compared by dimension on words of length ≤ max_len."""
        G = self.G
        words = [w for w in G.normal_words(max_len) if w]
        allowed = set(words) | {()}
        img = Echelon()
        for w in words:
            img.add(self._germ_word(w))
        ker_dim = len(words) - img.rank
        ideal = Echelon()
        bad = []
        for r in self.ideal:
            for w in [()] + words:
                x = G.mul_terms(r.terms, {w: ONE})
                if not x or not set(x) <= allowed:
                    continue
                if self.germs(x) != self.A.zero:
                    bad.append(str(AlgebraElement(G, x)))
                ideal.add(x)
        ok = not bad and ideal.rank == ker_dim
        return check(f"{self.name}/ker pi", "germs: ker pi = R + C1 (dimension count)", ok,
                     f"dim ker = {ker_dim}, dim R-part = {ideal.rank}, nonzero on {bad[:3]}", max_len)

    def ad_compatibility_check(self, max_len: int = 3) -> Check:
        """ad∘π = (π⊗id)∘Ad on words spanning Ker ε."""
        G, A, AA = self.G, self.A, self.AA
        bad = []
        for w in G.normal_words(max_len):
            if not w:
                continue
            lhs = self.ad(self.germ_word(w))
            big = self.hopf.big_ad(AlgebraElement(G, {w: ONE}))
            rhs: Terms = {}
            for (u, v), c in big.terms.items():
                for k, e in self._germ_word(u).items():
                    _add_into(rhs, ((self.theta[k],), v), c * e)
            if lhs != TensorElement(AA, rhs):
                bad.append(G.word_str(w))
        return check(f"{self.name}/ad pi", "ad pi = (pi x id) Ad", not bad, f"fails on {bad[:3]}", max_len)

    def star_checks(self) -> list[Check]:
        A, G = self.A, self.G
        out = []
        bad = []
        for k, t in enumerate(self.theta):
            th = self._elem({k: ONE})
            for g in G.gen_names:
                lhs = self.circ_action(th, G.gen(g)).star()
                rhs = self.circ_action(th.star(), self.hopf.antipode(G.gen(g)).star())
                if lhs != rhs:
                    bad.append(f"{A.gen_names[t]}∘{g}")
        out.append(check(f"{self.name}/circ star", "(theta o g)* = theta* o kappa(g)*", not bad,
                         f"fails on {bad}"))
        bad = [r for r in A.check_star_compatibility()]
        out.append(check(f"{self.name}/envelope star", "star respects the envelope relations", not bad,
                         f"fails on {bad}"))
        bad = []
        for g in A.gen_names:
            x = A.gen(g)
            if self.d(x.star()) != self.d(x).star():
                bad.append(g)
        out.append(check(f"{self.name}/d star", "d commutes with *", not bad, f"fails on {bad}"))
        return out

    def structure_checks(self) -> list[Check]:
        A, G = self.A, self.G
        out = []
        bad = []
        for lhs, rhs in G.rules:
            for k in range(len(self.theta)):
                a = self._circ_word(k, lhs)
                b: dict = {}
                for w, c in rhs.items():
                    for j, e in self._circ_word(k, w).items():
                        _add_vec(b, j, c * e)
                if _clean(a) != _clean(b):
                    bad.append(G.word_str(lhs))
            a = self._germ_word(lhs)
            b = {}
            for w, c in rhs.items():
                for j, e in self._germ_word(w).items():
                    _add_vec(b, j, c * e)
            if _clean(a) != _clean(b):
                bad.append(f"π on {G.word_str(lhs)}")
        out.append(check(f"{self.name}/tables", "germs and circ respect the relations of G", not bad,
                         f"fails on {bad}"))
        rep = A.check_local_confluence(6)
        out.append(check(f"{self.name}/confluence", "envelope rewriting is confluent", rep.ok, str(rep), 6))
        bad = self.d.relation_failures()
        out.append(check(f"{self.name}/d relations", "d respects the envelope relations", not bad,
                         f"fails on {bad}"))
        bad = [g for g in A.gen_names if self.d(self.d(A.gen(g))) != A.zero]
        out.append(check(f"{self.name}/d^2", "d^2 = 0", not bad, f"fails on {bad}"))
        bad = []
        for r in self.ideal:
            for w in G.normal_words(2):
                x = r * AlgebraElement(G, {w: ONE}) if w else r
                s = A.zero
                for (u, v), c in self.hopf.coproduct(x).terms.items():
                    s = s + self.germ_word(u) * self.germ_word(v) * c
                if s != A.zero:
                    bad.append(str(x))
        out.append(check(f"{self.name}/wedge", "pi(r(1)) pi(r(2)) = 0 for r in R", not bad,
                         f"fails on {bad[:3]}"))
        bad = self.hat.axiom_failures()
        out.append(check(f"{self.name}/hat hopf", "graded Hopf axioms on the envelope", not bad,
                         "; ".join(bad[:3])))
        return out

    def wedge_span(self, max_len: int = 2) -> Echelon:
        """Span of π(r⁽¹⁾)⊗π(r⁽²⁾) for r in ℛ·(words of length ≤ max_len), as pairs of basis positions."""
        G = self.G
        span = Echelon()
        for r in self.ideal:
            for w in G.normal_words(max_len):
                x = r * AlgebraElement(G, {w: ONE}) if w else r
                span.add(self._pair_vec(self.hopf.coproduct(x)))
        return span

    def _pair_vec(self, t: TensorElement) -> dict:
        out: dict = {}
        for (u, v), c in t.terms.items():
            for i, a in self._germ_word(u).items():
                for j, b in self._germ_word(v).items():
                    _add_vec(out, (i, j), c * a * b)
        return out

    def delta_checks(self) -> list[Check]:
        """δ(π(g)) = π(g⁽¹⁾)⊗π(g⁽²⁾) modulo the degree-two envelope relations, and m∘δ = −d."""
        if self._delta is None:
            return []
        A, G = self.A, self.G
        span = self.wedge_span()
        bad = []
        for w in G.normal_words(3):
            if not w:
                continue
            lhs: dict = {}
            for (u, v), c in self.embedded_delta(self.germ_word(w)).terms.items():
                _add_vec(lhs, (self._pos[u[0]], self._pos[v[0]]), -c)
            for k, c in self._pair_vec(self.hopf.coproduct(AlgebraElement(G, {w: ONE}))).items():
                _add_vec(lhs, k, c)
            rem, _ = span.reduce(lhs)
            if rem:
                bad.append(G.word_str(w))
        for k, t in enumerate(self.theta):
            th = self._elem({k: ONE})
            if multiply_legs(self.embedded_delta(th), A) != -self.d(th):
                bad.append(f"m delta {A.gen_names[t]}")
        return [check(f"{self.name}/delta", "delta(pi(g)) = pi(g(1)) x pi(g(2)) mod S, m delta = -d",
                      not bad, f"fails on {bad}", 3)]

    def all_checks(self) -> list[Check]:
        return (self.structure_checks() + [self.kernel_dimension_check(), self.ad_compatibility_check()]
                + self.star_checks() + self.delta_checks() + self.germ_identity_checks())


def _add_vec(v: dict, k, c) -> None:
    s = v.get(k)
    s = c if s is None else s + c
    if s.is_zero():
        v.pop(k, None)
    else:
        v[k] = s


def _clean(v: dict) -> dict:
    return {k: c for k, c in v.items() if not c.is_zero()}
