"""Hopf *-algebra structure on a presented algebra, corepresentations, convolution."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .ncalg import (AlgebraElement, GeneratorMap, PresentedAlgebra, TensorAlgebra,
                    TensorElement, Terms, Word, _add_into, map_leg, multiply_legs)
from .scalars import ONE, ZERO, ScalarValue


class NoHopfStructure(LookupError):
    pass


class DimensionMismatch(ValueError):
    pass


class GradeOverflow(RuntimeError):
    pass


class HopfStructure:
    """Coproduct, counit and antipode given on generators of a (graded) algebra.

    The coproduct is extended multiplicatively into the graded tensor square,
    the counit multiplicatively, the antipode graded anti-multiplicatively.
    """

    def __init__(self, alg: PresentedAlgebra, phi: Mapping[str, object],
                 eps: Mapping[str, object], kappa: Mapping[str, object]):
        self.G = alg
        self.GG = TensorAlgebra([alg, alg])
        self.GGG = TensorAlgebra([alg, alg, alg])
        phi_img = {g: (v if isinstance(v, TensorElement) else self.GG.parse(v)) for g, v in phi.items()}
        eps_img = {g: ScalarValue.coerce(v) if not isinstance(v, str) else _scalar(v) for g, v in eps.items()}
        kap_img = {g: (v if isinstance(v, AlgebraElement) else alg.parse(v)) for g, v in kappa.items()}
        self._phi = GeneratorMap(alg, phi_img, self.GG.one, "hom", "coproduct")
        self._eps = GeneratorMap(alg, eps_img, ONE, "hom", "counit")
        self._kappa = GeneratorMap(alg, kap_img, alg.one, "anti", "antipode")
        self._eps_word: dict[Word, ScalarValue] = {}

    # -- structure maps ------------------------------------------------------
    def coproduct(self, x: AlgebraElement) -> TensorElement:
        return self._phi(x)

    def counit(self, x: AlgebraElement) -> ScalarValue:
        return ScalarValue.coerce(self._eps(x))

    def antipode(self, x: AlgebraElement) -> AlgebraElement:
        return self._kappa(x)

    def phi_word(self, w: Word) -> TensorElement:
        return self._phi.word(w)

    def eps_word(self, w: Word) -> ScalarValue:
        r = self._eps_word.get(w)
        if r is None:
            r = ScalarValue.coerce(self._eps.word(w))
            self._eps_word[w] = r
        return r

    def kappa_word(self, w: Word) -> AlgebraElement:
        return self._kappa.word(w)

    def word_elem(self, w: Word) -> AlgebraElement:
        return AlgebraElement(self.G, {w: ONE})

    def coproduct2(self, x: AlgebraElement) -> TensorElement:
        """(φ⊗id)φ(x) in G⊗G⊗G."""
        return map_leg(self.coproduct(x), 0, self.phi_word, self.GGG)

    def big_ad(self, x: AlgebraElement) -> TensorElement:
        """Ad(x) = (-1)^{|x1||x2|} x2 ⊗ κ(x1) x3."""
        G = self.G
        out: Terms = {}
        for (a, b, c), s in self.coproduct2(x).terms.items():
            if (G.word_degree(a) & G.word_degree(b)) & 1:
                s = -s
            for w, d in G.mul_terms(self.kappa_word(a).terms, {c: ONE}).items():
                _add_into(out, (b, w), s * d)
        return TensorElement(self.GG, out)

    # -- axioms ----------------------------------------------------------------
    def axiom_failures(self, samples: Sequence[AlgebraElement] | None = None) -> list[str]:
        G = self.G
        bad: list[str] = []
        for name, m in (("coproduct", self._phi), ("counit", self._eps), ("antipode", self._kappa)):
            for r in m.relation_failures():
                bad.append(f"{name} does not respect the relation at {r}")
        elems = [G.gen(n) for n in G.gen_names] + list(samples or [])
        for x in elems:
            bad.extend(self._element_failures(x))
        return bad

    def _element_failures(self, x: AlgebraElement) -> list[str]:
        G = self.G
        out = []
        d = self.coproduct(x)
        left = _collapse(d, lambda u, v: (self.eps_word(u), v), G)
        right = _collapse(d, lambda u, v: (self.eps_word(v), u), G)
        if left != x or right != x:
            out.append(f"counit law fails on {x}")
        a = map_leg(d, 0, self.phi_word, self.GGG)
        b = map_leg(d, 1, self.phi_word, self.GGG)
        if a != b:
            out.append(f"coassociativity fails on {x}")
        unit = G.scalar(self.counit(x))
        k1 = multiply_legs(map_leg(d, 0, self.kappa_word, self.GG), G)
        k2 = multiply_legs(map_leg(d, 1, self.kappa_word, self.GG), G)
        if k1 != unit or k2 != unit:
            out.append(f"antipode law fails on {x}")
        if self.coproduct(x.star()) != d.star():
            out.append(f"coproduct is not *-preserving on {x}")
        if self.antipode(self.antipode(x.star()).star()) != x:
            out.append(f"κ∘*∘κ∘* is not the identity on {x}")
        return out


def _collapse(t: TensorElement, f: Callable, alg: PresentedAlgebra) -> AlgebraElement:
    out: Terms = {}
    for (u, v), c in t.terms.items():
        s, w = f(u, v)
        if s:
            _add_into(out, w, c * s)
    return AlgebraElement(alg, out)


def _scalar(text: str) -> ScalarValue:
    from .scalars import parse_scalar
    return parse_scalar(text)


# ---------------------------------------------------------------------------
# linear maps and convolution
# ---------------------------------------------------------------------------

class LinearMap:
    """Linear map given on words of its source algebra."""

    def __init__(self, source: PresentedAlgebra, on_word: Callable[[Word], object], zero,
                 name: str = "f"):
        self.source = source
        self.on_word = on_word
        self.zero = zero
        self.name = name
        self._memo: dict[Word, object] = {}

    def word(self, w: Word):
        r = self._memo.get(w)
        if r is None:
            r = self.on_word(w)
            self._memo[w] = r
        return r

    def __call__(self, x):
        terms = x.terms if isinstance(x, AlgebraElement) else x
        out = self.zero
        for w, c in terms.items():
            out = out + self.word(w) * c
        return out

    def table(self, words: Sequence[Word]) -> dict[Word, object]:
        return {w: self.word(w) for w in words}


def convolve(f: LinearMap, g: LinearMap, hopf: HopfStructure, max_degree: int | None = None,
             name: str | None = None) -> LinearMap:
    """(f∗g)(v) = m(f⊗g)φ(v)."""

    def on_word(w: Word):
        d = hopf.phi_word(w)
        out = f.zero
        for (a, b), c in d.terms.items():
            if max_degree is not None and hopf.G.word_degree(a) + hopf.G.word_degree(b) > max_degree:
                raise GradeOverflow(f"coproduct leg exceeds degree {max_degree}")
            fa = f.word(a)
            if _is_zero(fa):
                continue
            gb = g.word(b)
            if _is_zero(gb):
                continue
            out = out + (fa * gb) * c
        return out

    return LinearMap(hopf.G, on_word, f.zero, name or f"({f.name}*{g.name})")


def _is_zero(x) -> bool:
    if isinstance(x, ScalarValue):
        return x.is_zero()
    return x.is_zero()


def unit_map(hopf: HopfStructure, target: PresentedAlgebra | None = None) -> LinearMap:
    """The convolution unit 1ε."""
    if target is None:
        return LinearMap(hopf.G, hopf.eps_word, ZERO, "ε")
    return LinearMap(hopf.G, lambda w: target.scalar(hopf.eps_word(w)), target.zero, "1ε")


# ---------------------------------------------------------------------------
# corepresentations
# ---------------------------------------------------------------------------

@dataclass
class CorepReport:
    name: str
    comatrix: bool
    counit: bool
    orthogonality_antipode: bool
    unitarity: bool
    inner_product_invariance: bool
    literal_second_identity: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.comatrix and self.counit and self.orthogonality_antipode
                and self.unitarity and self.inner_product_invariance)


class Corepresentation:
    """Finite-dimensional corepresentation α(e_i) = Σ_j e_j ⊗ g_ji."""

    def __init__(self, hopf: HopfStructure, matrix: Sequence[Sequence[object]], name: str = "α"):
        G = hopf.G
        self.hopf = hopf
        self.name = name
        self.matrix = [[x if isinstance(x, AlgebraElement) else G.coerce(G.parse(x) if isinstance(x, str) else x)
                        for x in row] for row in matrix]
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise DimensionMismatch(f"{name}: coefficient matrix is not square")
        self.dim = n

    def g(self, i: int, j: int) -> AlgebraElement:
        return self.matrix[i][j]

    def apply(self, v: Sequence[object]) -> list[AlgebraElement]:
        """α(v) as the list of G-coefficients of e_1..e_n."""
        if len(v) != self.dim:
            raise DimensionMismatch(f"{self.name}: vector of length {len(v)}, expected {self.dim}")
        G = self.hopf.G
        out = []
        for j in range(self.dim):
            acc = G.zero
            for i, vi in enumerate(v):
                acc = acc + self.g(j, i) * ScalarValue.coerce(vi)
            out.append(acc)
        return out

    def check(self) -> CorepReport:
        h, n, G = self.hopf, self.dim, self.hopf.G
        fails: list[str] = []
        comatrix = counit = orth = unit = inv = lit = True
        for i in range(n):
            for j in range(n):
                lhs = h.coproduct(self.g(i, j))
                rhs = h.GG.zero
                for k in range(n):
                    rhs = rhs + h.GG.pure(self.g(i, k), self.g(k, j))
                if lhs != rhs:
                    comatrix = False
                    fails.append(f"comatrix identity at ({i + 1},{j + 1})")
                if h.counit(self.g(i, j)) != (ONE if i == j else ZERO):
                    counit = False
                    fails.append(f"counit at ({i + 1},{j + 1})")
                delta = G.one if i == j else G.zero
                s = G.zero
                for k in range(n):
                    s = s + self.g(i, k).star() * h.antipode(self.g(k, j).star())
                if s != delta:
                    orth = False
                    fails.append(f"antipode orthogonality at ({i + 1},{j + 1})")
                rows = G.zero
                cols = G.zero
                literal = G.zero
                for k in range(n):
                    rows = rows + self.g(i, k) * self.g(j, k).star()
                    cols = cols + self.g(k, i).star() * self.g(k, j)
                    literal = literal + self.g(i, k).star() * self.g(j, k)
                if rows != delta:
                    unit = False
                    fails.append(f"row unitarity at ({i + 1},{j + 1})")
                if cols != delta:
                    inv = False
                    fails.append(f"inner product invariance at ({i + 1},{j + 1})")
                if literal != delta:
                    lit = False
        return CorepReport(self.name, comatrix, counit, orth, unit, inv, lit, fails)

    def is_block_diagonal(self) -> bool:
        """Witness of reducibility: some off-diagonal block of zeros splits the matrix."""
        n = self.dim
        for cut in range(1, n):
            if all(self.g(i, j).is_zero() and self.g(j, i).is_zero()
                   for i in range(cut) for j in range(cut, n)):
                return True
        return False

    def intertwines(self, values: Sequence[object], target_coaction: Callable[[object], object],
                    tensor_space: TensorAlgebra) -> bool:
        """(T⊗id)α(e_i) = β(T(e_i)) for every basis vector, with β given as a callable."""
        G = self.hopf.G
        for i in range(self.dim):
            lhs = tensor_space.zero
            for j in range(self.dim):
                lhs = lhs + tensor_space.pure(values[j], _embed_leg(self.g(j, i), tensor_space.factors[1]))
            if lhs != target_coaction(values[i]):
                return False
        del G
        return True


def _embed_leg(x: AlgebraElement, alg: PresentedAlgebra) -> AlgebraElement:
    from .ncalg import embed
    return embed(x, alg)


def intertwiner_check(values: Sequence[object], corep: Corepresentation,
                      target_coaction: Callable[[object], object], tensor_space: TensorAlgebra) -> bool:
    return corep.intertwines(values, target_coaction, tensor_space)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

class Character:
    """Multiplicative scalar functional on G given on generators."""

    def __init__(self, hopf: HopfStructure, values: Mapping[str, object], name: str = "χ"):
        self.hopf = hopf
        self.name = name
        G = hopf.G
        imgs = {}
        for g in G.gen_names:
            if G.deg[G.index[g]] > 0:
                imgs[g] = ZERO
            else:
                v = values.get(g)
                if v is None:
                    raise KeyError(f"{name}: no value on generator {g}")
                imgs[g] = _scalar(v) if isinstance(v, str) else ScalarValue.coerce(v)
        self.values = imgs
        self._map = GeneratorMap(G, imgs, ONE, "hom", name)

    def word(self, w: Word) -> ScalarValue:
        return ScalarValue.coerce(self._map.word(w))

    def __call__(self, x: AlgebraElement) -> ScalarValue:
        return ScalarValue.coerce(self._map(x))

    def is_valid(self) -> bool:
        return not self._map.relation_failures()

    def inverse(self) -> "Character":
        """χ⁻¹ = χ∘κ."""
        G = self.hopf.G
        vals = {}
        for g in G.gen_names:
            if G.deg[G.index[g]] == 0:
                vals[g] = self(self.hopf.antipode(G.gen(g)))
        return Character(self.hopf, vals, f"{self.name}⁻¹")

    def as_map(self) -> LinearMap:
        return LinearMap(self.hopf.G, self.word, ZERO, self.name)

    def convolve(self, other: "Character") -> "Character":
        G = self.hopf.G
        f = convolve(self.as_map(), other.as_map(), self.hopf)
        vals = {g: ScalarValue.coerce(f(G.gen(g))) for g in G.gen_names if G.deg[G.index[g]] == 0}
        return Character(self.hopf, vals, f"{self.name}*{other.name}")
