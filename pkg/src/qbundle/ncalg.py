"""Finitely presented (graded) *-algebras with rewriting to normal form.

Words are tuples of generator indices.  An element is a dict from normal words
to nonzero scalars.  Normal forms are computed incrementally: the normal form
of a prefix is extended one letter at a time, and after each letter the only
possible redex is a suffix, so it is found by looking at rules indexed by their
last letter.  Results are memoized per word; the memo never changes a result.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .parsing import EvalContext, ParseError, Token, parse_with
from .scalars import ONE, ZERO, ScalarValue, parse_scalar

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Word = tuple
Terms = dict

DEFAULT_BUDGET = 2_000_000


class PresentationError(ValueError):
    pass


class NonTerminatingOrder(PresentationError):
    pass


class StarMismatch(PresentationError):
    pass


class RewriteBudgetExceeded(RuntimeError):
    pass


class UnknownSubalgebra(KeyError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int = 0
    star: str | None = None  # expression such as "a*", "-mu", "q eta_m"; None = self-adjoint
    weight: int = 1
    display: str | None = None


@dataclass
class AlgebraPresentation:
    name: str
    generators: list[GeneratorSpec]
    rules: list[tuple[str, str]] = field(default_factory=list)
    order: list[str] | None = None  # precedence, lowest first; default = generator order
    graded: bool = False


def _add_into(out: dict, word: Word, c: ScalarValue) -> None:
    s = out.get(word)
    if s is None:
        out[word] = c
    else:
        s = s + c
        if s.is_zero():
            del out[word]
        else:
            out[word] = s


def add_terms(a: Mapping, b: Mapping, scale: ScalarValue = ONE) -> dict:
    out = dict(a)
    if scale == ONE:
        for w, c in b.items():
            _add_into(out, w, c)
    else:
        for w, c in b.items():
            _add_into(out, w, c * scale)
    return out


def scale_terms(a: Mapping, c: ScalarValue) -> dict:
    if c.is_zero():
        return {}
    if c == ONE:
        return dict(a)
    return {w: v * c for w, v in a.items()}


def odd_pairs(degrees: Iterable[int]) -> int:
    """Parity of sum over i<j of d_i d_j."""
    k = sum(1 for d in degrees if d & 1)
    return (k * (k - 1) // 2) & 1


class PresentedAlgebra:
    """A finitely presented algebra with a terminating rewriting system."""

    def __init__(self, p: AlgebraPresentation):
        self.name = p.name
        self.presentation = p
        self.graded = p.graded
        names = [g.name for g in p.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"{p.name}: duplicate generator names")
        self.gen_names: list[str] = names
        self.index: dict[str, int] = {n: i for i, n in enumerate(names)}
        self.display: list[str] = [g.display or g.name for g in p.generators]
        self.aliases: dict[str, int] = dict(self.index)
        for i, g in enumerate(p.generators):
            if g.display:
                self.aliases.setdefault(g.display, i)
        self.deg: list[int] = [g.degree for g in p.generators]
        self.weight: list[int] = [g.weight for g in p.generators]
        if any(w < 1 for w in self.weight):
            raise PresentationError(f"{p.name}: generator weights must be positive")
        order = p.order or names
        if sorted(order) != sorted(names):
            raise PresentationError(f"{p.name}: order must list every generator once")
        rank = {n: k for k, n in enumerate(order)}
        self.prec: list[int] = [rank[n] for n in names]
        self._nf: dict[Word, Terms] = {}
        self._star_memo: dict[Word, Terms] = {}
        self._steps = 0
        self._limit = DEFAULT_BUDGET
        self.rules: list[tuple[Word, Terms]] = []
        self._by_last: dict[int, list[tuple[Word, Terms]]] = {}
        for lhs_txt, rhs_txt in p.rules:
            self._add_rule_text(lhs_txt, rhs_txt)
        self.star_table: list[tuple[ScalarValue, int]] = []
        self._build_star(p)

    # -- construction helpers ---------------------------------------------
    def _parse_word(self, text: str) -> Word:
        el = parse_with(text, _FreeContext(self))
        if len(el) != 1:
            raise PresentationError(f"{self.name}: rule left side {text!r} is not a word")
        (w, c), = el.items()
        if c != ONE or not w:
            raise PresentationError(f"{self.name}: rule left side {text!r} is not a word")
        return w

    def _add_rule_text(self, lhs_txt: str, rhs_txt: str) -> None:
        lhs = self._parse_word(lhs_txt)
        rhs = parse_with(rhs_txt, _FreeContext(self)) if rhs_txt.strip() not in ("", "0") else {}
        self.add_rule(lhs, rhs)

    def add_rule(self, lhs: Word, rhs: Mapping[Word, ScalarValue]) -> None:
        lk = self.word_key(lhs)
        ld = self.word_degree(lhs)
        for w in rhs:
            if not self.word_key(w) < lk:
                raise NonTerminatingOrder(
                    f"{self.name}: rule {self.word_str(lhs)} -> {self.word_str(w)} does not decrease the term order")
            if self.graded and self.word_degree(w) != ld:
                raise PresentationError(
                    f"{self.name}: rule {self.word_str(lhs)} changes the degree")
        for old, _ in self.rules:
            if old == lhs:
                raise PresentationError(f"{self.name}: two rules for {self.word_str(lhs)}")
        rule = (tuple(lhs), {tuple(w): ScalarValue.coerce(c) for w, c in rhs.items() if c})
        self.rules.append(rule)
        self._by_last.setdefault(lhs[-1], []).append(rule)
        self._by_last[lhs[-1]].sort(key=lambda r: len(r[0]))
        self._nf.clear()
        self._star_memo.clear()

    def _build_star(self, p: AlgebraPresentation) -> None:
        table: list[tuple[ScalarValue, int]] = []
        for i, g in enumerate(p.generators):
            if g.star is None:
                table.append((ONE, i))
                continue
            el = parse_with(g.star, _FreeContext(self))
            if len(el) != 1:
                raise StarMismatch(f"{self.name}: star of {g.name} must be a multiple of a generator")
            (w, c), = el.items()
            if len(w) != 1:
                raise StarMismatch(f"{self.name}: star of {g.name} must be a multiple of a generator")
            table.append((c, w[0]))
        for i, (c, j) in enumerate(table):
            c2, k = table[j]
            if k != i or c.conj() * c2 != ONE:
                raise StarMismatch(f"{self.name}: star is not involutive on {self.gen_names[i]}")
            if self.deg[j] != self.deg[i]:
                raise StarMismatch(f"{self.name}: star changes the degree of {self.gen_names[i]}")
        self.star_table = table

    # -- words ------------------------------------------------------------
    def word_key(self, w: Word) -> tuple:
        weight = self.weight
        prec = self.prec
        return (sum(weight[g] for g in w), tuple(prec[g] for g in w))

    def word_degree(self, w: Word) -> int:
        deg = self.deg
        return sum(deg[g] for g in w)

    def word_str(self, w: Word) -> str:
        return _word_text(self, w)

    # -- normal form ------------------------------------------------------
    def _nf_append(self, v: Word, x: int) -> Terms:
        key = v + (x,)
        r = self._nf.get(key)
        if r is not None:
            return r
        match = None
        cand = self._by_last.get(x)
        if cand:
            n = len(key)
            for rule in cand:
                lhs = rule[0]
                L = len(lhs)
                if L <= n and key[n - L:] == lhs:
                    match = rule
                    break
        if match is None:
            r = {key: ONE}
        else:
            self._steps += 1
            if self._steps > self._limit:
                raise RewriteBudgetExceeded(
                    f"{self.name}: more than {self._limit} rewrite steps")
            lhs, rhs = match
            prefix = key[:len(key) - len(lhs)]
            r = {}
            for rw, c in rhs.items():
                for w, d in self._nf_concat(prefix, rw).items():
                    _add_into(r, w, c * d)
        self._nf[key] = r
        return r

    def _append(self, cur: Terms, x: int) -> Terms:
        if len(cur) == 1:
            (v, c), = cur.items()
            r = self._nf_append(v, x)
            return r if c == ONE else scale_terms(r, c)
        out: Terms = {}
        for v, c in cur.items():
            for w, d in self._nf_append(v, x).items():
                _add_into(out, w, c * d)
        return out

    def _nf_concat(self, w1: Word, w2: Word) -> Terms:
        """Normal form of w1+w2 where w1 is already normal."""
        if not w2:
            return {w1: ONE}
        key = w1 + w2
        r = self._nf.get(key)
        if r is not None:
            return r
        cur: Terms = {w1: ONE}
        for x in w2:
            cur = self._append(cur, x)
            if not cur:
                break
        self._nf[key] = cur
        return cur

    def nf_word(self, w: Word) -> Terms:
        return self._nf_concat((), tuple(w))

    def normalize_terms(self, raw: Mapping[Word, ScalarValue], budget: int | None = None) -> Terms:
        if budget is not None:
            self._steps, old = 0, self._limit
            self._limit = budget
        try:
            out: Terms = {}
            for w, c in raw.items():
                c = ScalarValue.coerce(c)
                if c.is_zero():
                    continue
                for v, d in self.nf_word(tuple(w)).items():
                    _add_into(out, v, c * d)
            return out
        finally:
            if budget is not None:
                self._limit = old
                self._steps = 0

    def normal_form(self, raw: "AlgebraElement | Mapping", budget: int | None = None) -> "AlgebraElement":
        terms = raw.terms if isinstance(raw, AlgebraElement) else raw
        return AlgebraElement(self, self.normalize_terms(terms, budget))

    def is_normal(self, w: Word) -> bool:
        return self.nf_word(w) == {tuple(w): ONE}

    def mul_terms(self, a: Terms, b: Terms) -> Terms:
        out: Terms = {}
        self._steps = 0
        for u, c in a.items():
            for v, d in b.items():
                cd = c * d
                for w, e in self._nf_concat(u, v).items():
                    _add_into(out, w, cd * e)
        return out

    # -- star -------------------------------------------------------------
    def star_word(self, w: Word) -> Terms:
        r = self._star_memo.get(w)
        if r is not None:
            return r
        coeff = ONE
        new = []
        for g in reversed(w):
            c, j = self.star_table[g]
            coeff = coeff * c
            new.append(j)
        if odd_pairs(self.deg[g] for g in w):
            coeff = -coeff
        r = scale_terms(self.nf_word(tuple(new)), coeff)
        self._star_memo[w] = r
        return r

    def star_terms(self, a: Terms) -> Terms:
        out: Terms = {}
        for w, c in a.items():
            cc = c.conj()
            for v, d in self.star_word(w).items():
                _add_into(out, v, cc * d)
        return out

    # -- elements ---------------------------------------------------------
    def element(self, terms: Mapping[Word, ScalarValue] | None = None) -> "AlgebraElement":
        return AlgebraElement(self, self.normalize_terms(terms or {}))

    @property
    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): ONE})

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def gen(self, name: str) -> "AlgebraElement":
        i = self.aliases.get(name)
        if i is None:
            raise KeyError(f"{self.name} has no generator {name!r}")
        return AlgebraElement(self, dict(self.nf_word((i,))))

    def gens(self) -> list["AlgebraElement"]:
        return [self.gen(n) for n in self.gen_names]

    def scalar(self, c) -> "AlgebraElement":
        c = ScalarValue.coerce(c)
        return AlgebraElement(self, {(): c} if c else {})

    def parse(self, text: str) -> "AlgebraElement":
        value = parse_with(text, AlgebraContext(self))
        return self.coerce(value)

    def coerce(self, value) -> "AlgebraElement":
        if isinstance(value, AlgebraElement):
            if value.algebra is not self:
                raise TypeError(f"element of {value.algebra.name} used in {self.name}")
            return value
        return self.scalar(value)

    def __repr__(self) -> str:
        return f"<algebra {self.name}>"

    # -- enumeration -------------------------------------------------------
    def normal_words(self, max_len: int, gens: Sequence[int] | None = None) -> list[Word]:
        """All distinct normal words reachable as normal forms of words up to max_len."""
        letters = list(range(len(self.gen_names))) if gens is None else list(gens)
        seen: dict[Word, None] = {(): None}
        frontier = [()]
        for _ in range(max_len):
            nxt = []
            for w in frontier:
                for x in letters:
                    v = w + (x,)
                    if self.is_normal(v) and v not in seen:
                        seen[v] = None
                        nxt.append(v)
            frontier = nxt
        return list(seen)

    # -- confluence --------------------------------------------------------
    def critical_pairs(self, degree_bound: int) -> Iterator[tuple[Word, Terms, Terms]]:
        """Overlap and inclusion ambiguities with both one-step reducts."""
        for (l1, r1), (l2, r2) in itertools.product(self.rules, repeat=2):
            # overlap: suffix of l1 equals prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] == l2[:k]:
                    w = l1 + l2[k:]
                    if self.word_key(w)[0] > degree_bound and len(w) > degree_bound:
                        continue
                    a = {rw + l2[k:]: c for rw, c in r1.items()}
                    b = {l1[:len(l1) - k] + rw: c for rw, c in r2.items()}
                    yield w, a, b
            # inclusion: l2 strictly inside l1
            if l1 != l2 and len(l2) < len(l1):
                for s in range(len(l1) - len(l2) + 1):
                    if l1[s:s + len(l2)] == l2:
                        a = dict(r1)
                        b = {l1[:s] + rw + l1[s + len(l2):]: c for rw, c in r2.items()}
                        yield l1, a, b

    def check_local_confluence(self, degree_bound: int = 6) -> "ConfluenceReport":
        checked = 0
        bad = []
        for w, a, b in self.critical_pairs(degree_bound):
            checked += 1
            na = self.normalize_terms(_merge_raw(a))
            nb = self.normalize_terms(_merge_raw(b))
            if na != nb:
                bad.append((w, AlgebraElement(self, na), AlgebraElement(self, nb)))
        return ConfluenceReport(self.name, checked, bad)

    def check_star_compatibility(self) -> list[str]:
        """Rules whose starred sides disagree (empty list = star is well defined)."""
        bad = []
        for lhs, rhs in self.rules:
            a = self.star_terms({lhs: ONE})
            b = self.star_terms(self.normalize_terms(rhs))
            if a != b:
                bad.append(self.word_str(lhs))
        return bad


def _merge_raw(t: Mapping) -> dict:
    out: dict = {}
    for w, c in t.items():
        _add_into(out, tuple(w), ScalarValue.coerce(c))
    return out


@dataclass
class ConfluenceReport:
    algebra: str
    pairs_checked: int
    unresolved: list

    @property
    def ok(self) -> bool:
        return not self.unresolved

    def __str__(self) -> str:
        if self.ok:
            return f"{self.algebra}: {self.pairs_checked} critical pairs, all resolve"
        lines = [f"{self.algebra}: {len(self.unresolved)} unresolved of {self.pairs_checked}"]
        for w, a, b in self.unresolved:
            lines.append(f"  {w}: {a}  vs  {b}")
        return "\n".join(lines)


def define_algebra(p: AlgebraPresentation) -> PresentedAlgebra:
    return PresentedAlgebra(p)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class AlgebraElement:
    """Normal-form linear combination of words; treat as immutable."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: PresentedAlgebra, terms: Terms):
        self.algebra = algebra
        self.terms = terms

    def _other(self, other) -> Terms | None:
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise TypeError(f"cannot combine {self.algebra.name} with {other.algebra.name}")
            return other.terms
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return None
        return {(): c} if c else {}

    def __add__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return AlgebraElement(self.algebra, add_terms(self.terms, t))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return AlgebraElement(self.algebra, add_terms(self.terms, t, -ONE))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                return NotImplemented
            return AlgebraElement(self.algebra, self.algebra.mul_terms(self.terms, other.terms))
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraElement(self.algebra, scale_terms(self.terms, c))

    def __rmul__(self, other):
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraElement(self.algebra, scale_terms(self.terms, c))

    def __truediv__(self, other):
        c = ScalarValue.coerce(other)
        return self * c.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers of algebra elements")
        out = self.algebra.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraElement):
            return other.algebra is self.algebra and self.terms == other.terms
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(): c} if c else {})

    def __hash__(self) -> int:
        return hash((self.algebra.name, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.star_terms(self.terms))

    def degrees(self) -> set[int]:
        return {self.algebra.word_degree(w) for w in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(ds)}")
        return ds.pop()

    def part(self, k: int) -> "AlgebraElement":
        a = self.algebra
        return AlgebraElement(a, {w: c for w, c in self.terms.items() if a.word_degree(w) == k})

    def coefficient(self, word: Word) -> ScalarValue:
        return self.terms.get(tuple(word), ZERO)

    def scalar_part(self) -> ScalarValue:
        return self.terms.get((), ZERO)

    def __str__(self) -> str:
        return format_terms(self.terms, lambda w: _word_text(self.algebra, w))

    def __repr__(self) -> str:
        return f"<{self.algebra.name}: {self}>"


def _short(name: str) -> bool:
    core = name.rstrip("*'₀₁₂₃₄₅₆₇₈₉₊₋")
    return len(core) == 1


def _word_text(alg: PresentedAlgebra, w: Word) -> str:
    if not w:
        return "1"
    runs: list[tuple[int, int]] = []
    for g in w:
        if runs and runs[-1][0] == g:
            runs[-1] = (g, runs[-1][1] + 1)
        else:
            runs.append((g, 1))
    pieces = []
    for g, k in runs:
        nm = alg.display[g]
        pieces.append(nm if k == 1 else f"{nm}^{k}")
    if all(_short(alg.display[g]) for g, _ in runs):
        return "".join(pieces)
    return " ".join(pieces)


def format_terms(terms: Mapping, word_text: Callable, sort_key: Callable | None = None) -> str:
    if not terms:
        return "0"
    items = sorted(terms.items(), key=lambda kv: sort_key(kv[0]) if sort_key else _default_key(kv[0]))
    out = []
    for k, (w, c) in enumerate(items):
        wt = word_text(w)
        unit = wt == "1"
        if c == ONE:
            body, neg = wt, False
        elif c == -ONE:
            body, neg = wt, True
        else:
            ct = str(c)
            neg = False
            if not c.needs_parens() and ct.startswith("-"):
                neg, ct = True, ct[1:]
            if c.needs_parens():
                ct = f"({ct})" if not ct.startswith("(") or ")/(" in ct else ct
            body = ct if unit else f"{ct} {wt}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _default_key(w):
    if w and isinstance(w[0], tuple):
        return (sum(len(x) for x in w), w)
    return (len(w), w)


# ---------------------------------------------------------------------------
# parsing contexts
# ---------------------------------------------------------------------------

class _FreeContext(EvalContext):
    """Evaluates to raw (un-normalized) term dicts over the generators."""

    def __init__(self, alg: PresentedAlgebra):
        self.alg = alg

    def known(self, name: str) -> bool:
        return name in self.alg.aliases or name in ("q", "i")

    def number(self, value: int):
        return _Raw({(): ScalarValue.coerce(value)} if value else {})

    def name(self, name: str, tok: Token):
        i = self.alg.aliases.get(name)
        if i is not None:
            return _Raw({(i,): ONE})
        if name in ("q", "i"):
            return _Raw({(): parse_scalar(name)})
        raise ParseError(f"unknown generator {name!r} in {self.alg.name}", tok.line, tok.col)

    def divide(self, a, b, tok):
        if len(b) != 1 or () not in b:
            raise ParseError("can only divide by scalars", tok.line, tok.col)
        return a * _Raw({(): b[()].inverse()})

    def power(self, a, k, tok):
        if k < 0:
            if len(a) == 1 and () in a:
                return _Raw({(): a[()] ** k})
            raise ParseError("negative powers only for scalars", tok.line, tok.col)
        out = _Raw({(): ONE})
        for _ in range(k):
            out = out * a
        return out


class _Raw(dict):
    def __add__(self, other):
        return _Raw(add_terms(self, other))

    def __neg__(self):
        return _Raw({w: -c for w, c in self.items()})

    def __mul__(self, other):
        out = _Raw()
        for u, c in self.items():
            for v, d in other.items():
                _add_into(out, u + v, c * d)
        return out


class AlgebraContext(EvalContext):
    def __init__(self, alg: PresentedAlgebra, extra: Mapping | None = None):
        self.alg = alg
        self.extra = dict(extra or {})

    def known(self, name: str) -> bool:
        return name in self.extra or name in self.alg.aliases or name in ("q", "i")

    def number(self, value: int):
        return ScalarValue.coerce(value)

    def name(self, name: str, tok: Token):
        if name in self.extra:
            return self.extra[name]
        if name in self.alg.aliases:
            return self.alg.gen(name)
        if name in ("q", "i"):
            return parse_scalar(name)
        raise ParseError(f"unknown generator {name!r} in {self.alg.name}", tok.line, tok.col)

    def divide(self, a, b, tok):
        if isinstance(b, AlgebraElement):
            if set(b.terms) <= {()} and b.terms:
                b = b.terms[()]
            else:
                raise ParseError("can only divide by scalars", tok.line, tok.col)
        return super().divide(a, b, tok)


# ---------------------------------------------------------------------------
# graded tensor products
# ---------------------------------------------------------------------------

class TensorAlgebra:
    """Graded tensor product A_1 ⊗ ... ⊗ A_k with the Koszul sign rule."""

    def __init__(self, factors: Sequence[PresentedAlgebra]):
        if len(factors) < 2:
            raise ValueError("a tensor product needs at least two factors")
        self.factors = tuple(factors)
        self.name = "⊗".join(f.name for f in factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorAlgebra) and all(
            a is b for a, b in zip(self.factors, other.factors)) and len(self.factors) == len(other.factors)

    def __hash__(self) -> int:
        return hash(tuple(id(f) for f in self.factors))

    @property
    def one(self) -> "TensorElement":
        return TensorElement(self, {tuple(() for _ in self.factors): ONE})

    @property
    def zero(self) -> "TensorElement":
        return TensorElement(self, {})

    def pure(self, *legs: AlgebraElement) -> "TensorElement":
        if len(legs) != len(self.factors):
            raise ValueError("wrong number of tensor legs")
        for a, f in zip(legs, self.factors):
            if a.algebra is not f:
                raise TypeError(f"leg in {a.algebra.name}, expected {f.name}")
        out: Terms = {}
        for combo in itertools.product(*(a.terms.items() for a in legs)):
            c = ONE
            for _, x in combo:
                c = c * x
            _add_into(out, tuple(w for w, _ in combo), c)
        return TensorElement(self, out)

    def scalar(self, c) -> "TensorElement":
        c = ScalarValue.coerce(c)
        return TensorElement(self, {tuple(() for _ in self.factors): c} if c else {})

    def coerce(self, value) -> "TensorElement":
        if isinstance(value, TensorElement):
            return value
        return self.scalar(value)

    def sign(self, u: Word, v: Word) -> bool:
        """Koszul parity for (u_1⊗..⊗u_k)(v_1⊗..⊗v_k)."""
        par = 0
        f = self.factors
        acc = 0  # running parity of degrees of v_j for j < i
        for i in range(len(f)):
            par ^= (f[i].word_degree(u[i]) & 1) & acc
            acc ^= f[i].word_degree(v[i]) & 1
        return bool(par)

    def mul_terms(self, a: Terms, b: Terms) -> Terms:
        out: Terms = {}
        fs = self.factors
        for u, c in a.items():
            for v, d in b.items():
                cd = -(c * d) if self.sign(u, v) else c * d
                parts = [f._nf_concat(x, y) for f, x, y in zip(fs, u, v)]
                if any(not p for p in parts):
                    continue
                for combo in itertools.product(*(p.items() for p in parts)):
                    e = cd
                    for _, x in combo:
                        e = e * x
                    _add_into(out, tuple(w for w, _ in combo), e)
        return out

    def word_degree(self, u: Word) -> int:
        return sum(f.word_degree(x) for f, x in zip(self.factors, u))

    def star_terms(self, a: Terms) -> Terms:
        # (a⊗b)* = a*⊗b* legwise: with the Koszul product this is the only choice that keeps
        # (xy)* = (−1)^{|x||y|} y*x*
        out: Terms = {}
        fs = self.factors
        for u, c in a.items():
            cc = c.conj()
            parts = [f.star_word(x) for f, x in zip(fs, u)]
            for combo in itertools.product(*(p.items() for p in parts)):
                e = cc
                for _, x in combo:
                    e = e * x
                _add_into(out, tuple(w for w, _ in combo), e)
        return out

    def normalize_terms(self, raw: Mapping) -> Terms:
        out: Terms = {}
        for u, c in raw.items():
            parts = [f.nf_word(tuple(x)) for f, x in zip(self.factors, u)]
            for combo in itertools.product(*(p.items() for p in parts)):
                e = ScalarValue.coerce(c)
                for _, x in combo:
                    e = e * x
                _add_into(out, tuple(w for w, _ in combo), e)
        return out

    def parse(self, text: str, extra: Mapping | None = None) -> "TensorElement":
        return parse_tensor(self, text, extra)


class TensorElement:
    """Canonical element of a graded tensor product of presented algebras."""

    __slots__ = ("space", "terms")

    def __init__(self, space: TensorAlgebra, terms: Terms):
        self.space = space
        self.terms = terms

    def _other(self, other) -> Terms | None:
        if isinstance(other, TensorElement):
            if other.space != self.space:
                raise TypeError(f"cannot combine {self.space.name} with {other.space.name}")
            return other.terms
        if isinstance(other, AlgebraElement):
            return None
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return None
        return self.space.scalar(c).terms

    def __add__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return TensorElement(self.space, add_terms(self.terms, t))

    __radd__ = __add__

    def __neg__(self):
        return TensorElement(self.space, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        t = self._other(other)
        if t is None:
            return NotImplemented
        return TensorElement(self.space, add_terms(self.terms, t, -ONE))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            if other.space != self.space:
                return NotImplemented
            return TensorElement(self.space, self.space.mul_terms(self.terms, other.terms))
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return TensorElement(self.space, scale_terms(self.terms, c))

    def __rmul__(self, other):
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return TensorElement(self.space, scale_terms(self.terms, c))

    def __pow__(self, k: int):
        out = self.space.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorElement):
            return other.space == self.space and self.terms == other.terms
        if isinstance(other, AlgebraElement):
            return NotImplemented
        try:
            c = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == self.space.scalar(c).terms

    def __hash__(self) -> int:
        return hash((self.space.name, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def star(self) -> "TensorElement":
        return TensorElement(self.space, self.space.star_terms(self.terms))

    def leg(self, i: int, word: Word) -> AlgebraElement:
        return AlgebraElement(self.space.factors[i], {word: ONE})

    def __str__(self) -> str:
        fs = self.space.factors

        def text(u):
            return "⊗".join(_word_text(f, x) for f, x in zip(fs, u))
        return format_terms(self.terms, text)

    def __repr__(self) -> str:
        return f"<{self.space.name}: {self}>"


def tensor(*legs: AlgebraElement) -> TensorElement:
    return TensorAlgebra([a.algebra for a in legs]).pure(*legs)


def tensor_canonical(t: TensorElement) -> TensorElement:
    return TensorElement(t.space, t.space.normalize_terms(t.terms))


class _TensorTop(EvalContext):
    """Outside tensor legs only scalars, extras and tensors may appear."""

    def __init__(self, space: TensorAlgebra, extra: Mapping | None = None):
        self.space = space
        self.extra = dict(extra or {})

    def known(self, name: str) -> bool:
        return name in self.extra or name in ("q", "i") or any(
            name in f.aliases for f in self.space.factors)

    def number(self, value: int):
        return ScalarValue.coerce(value)

    def name(self, name: str, tok: Token):
        if name in self.extra:
            return self.extra[name]
        if name in ("q", "i"):
            return parse_scalar(name)
        raise ParseError(f"{name!r} must appear inside a tensor leg", tok.line, tok.col)


def _eval_tensor(node, ctx: _TensorTop):
    from .parsing import evaluate
    if node.kind == "tensor":
        fs = ctx.space.factors
        if len(node.args) != len(fs):
            raise ParseError(f"expected {len(fs)} tensor legs", node.tok.line, node.tok.col)
        legs = [f.coerce(evaluate(a, AlgebraContext(f))) for a, f in zip(node.args, fs)]
        return ctx.space.pure(*legs)
    k = node.kind
    if k == "num":
        return ctx.number(node.args[0])
    if k == "name":
        return ctx.name(node.args[0], node.tok)
    if k == "neg":
        return -_eval_tensor(node.args[0], ctx)
    if k in ("add", "sub", "mul"):
        a = _eval_tensor(node.args[0], ctx)
        b = _eval_tensor(node.args[1], ctx)
        if k == "add":
            return ctx.add(a, b, node.tok)
        if k == "sub":
            return ctx.add(a, -b, node.tok)
        return ctx.multiply(a, b, node.tok)
    if k == "div":
        return ctx.divide(_eval_tensor(node.args[0], ctx), _eval_tensor(node.args[1], ctx), node.tok)
    if k == "pow":
        return ctx.power(_eval_tensor(node.args[0], ctx), node.args[1], node.tok)
    raise AssertionError(k)


def parse_tensor(space: TensorAlgebra, text: str, extra: Mapping | None = None,
                 line: int = 1, col: int = 1) -> TensorElement:
    from .parsing import parse_tree
    ctx = _TensorTop(space, extra)
    return space.coerce(_eval_tensor(parse_tree(text, ctx.known, line, col), ctx))


# ---------------------------------------------------------------------------
# maps determined by generator images
# ---------------------------------------------------------------------------

class GeneratorMap:
    """Multiplicative (kind="hom") or graded anti-multiplicative (kind="anti")
    extension of generator images.  Images may be algebra elements, tensors
    or scalars; the target only needs + and *."""

    def __init__(self, source: PresentedAlgebra, images: Mapping[str, object],
                 target_one, kind: str = "hom", name: str = "map"):
        if kind not in ("hom", "anti"):
            raise ValueError(kind)
        self.source = source
        self.kind = kind
        self.name = name
        self.one = target_one
        self.images = []
        for g in source.gen_names:
            if g not in images:
                raise KeyError(f"{name}: no image for generator {g}")
            self.images.append(images[g])
        self._memo: dict[Word, object] = {(): target_one}

    def word(self, w: Word):
        r = self._memo.get(w)
        if r is not None:
            return r
        if self.kind == "hom":
            r = self.word(w[:-1]) * self.images[w[-1]]
        else:
            # anti: f(u g) = (-1)^{|u||g|} f(g) f(u)
            head = self.images[w[-1]]
            r = head * self.word(w[:-1])
            if (self.source.word_degree(w[:-1]) & self.source.deg[w[-1]]) & 1:
                r = -r
        self._memo[w] = r
        return r

    def __call__(self, x):
        terms = x.terms if isinstance(x, AlgebraElement) else x
        out = self.one * 0
        for w, c in terms.items():
            out = out + self.word(w) * c
        return out

    def relation_failures(self) -> list[str]:
        """Rules whose two sides have different images."""
        bad = []
        for lhs, rhs in self.source.rules:
            a = self.word(lhs)
            b = self.one * 0
            for w, c in rhs.items():
                b = b + self._raw_word(w) * c
            if not _same(a, b):
                bad.append(self.source.word_str(lhs))
        return bad

    def _raw_word(self, w: Word):
        out = self.one
        if self.kind == "hom":
            for g in w:
                out = out * self.images[g]
        else:
            for k, g in enumerate(w):
                out = self.images[g] * out
                if (self.source.word_degree(w[:k]) & self.source.deg[g]) & 1:
                    out = -out
        return out


def _same(a, b) -> bool:
    if isinstance(a, ScalarValue) or isinstance(b, ScalarValue):
        return ScalarValue.coerce(a) == ScalarValue.coerce(b)
    return a == b


class Derivation:
    """Graded derivation of degree ``step`` on a presented algebra, given on generators."""

    def __init__(self, alg: PresentedAlgebra, images: Mapping[str, AlgebraElement], step: int = 1):
        self.alg = alg
        self.step = step
        self.images: list[Terms] = []
        for g in alg.gen_names:
            img = images[g]
            self.images.append(img.terms if isinstance(img, AlgebraElement) else dict(img))
        self._memo: dict[Word, Terms] = {}

    def word_terms(self, w: Word) -> Terms:
        r = self._memo.get(w)
        if r is not None:
            return r
        alg = self.alg
        out: Terms = {}
        par = 0
        for i, g in enumerate(w):
            img = self.images[g]
            sgn = -ONE if (par & self.step & 1) else ONE
            left, right = w[:i], w[i + 1:]
            for v, c in img.items():
                for u, d in alg._nf_concat(left, v).items():
                    for t, e in alg._nf_concat(u, right).items():
                        _add_into(out, t, sgn * c * d * e)
            par ^= alg.deg[g] & 1
        self._memo[w] = out
        return out

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        out: Terms = {}
        for w, c in x.terms.items():
            for v, d in self.word_terms(w).items():
                _add_into(out, v, c * d)
        return AlgebraElement(self.alg, out)

    def relation_failures(self) -> list[str]:
        bad = []
        for lhs, rhs in self.alg.rules:
            a = self._expand(lhs)
            b: Terms = {}
            for w, c in rhs.items():
                for v, d in self._expand(tuple(w)).items():
                    _add_into(b, v, c * d)
            if a != b:
                bad.append(self.alg.word_str(lhs))
        return bad

    def _expand(self, w: Word) -> Terms:
        alg = self.alg
        out: Terms = {}
        par = 0
        for i, g in enumerate(w):
            sgn = -ONE if (par & self.step & 1) else ONE
            for v, c in self.images[g].items():
                for t, e in alg.nf_word(w[:i] + v + w[i + 1:]).items():
                    _add_into(out, t, sgn * c * e)
            par ^= alg.deg[g] & 1
        return out


def map_leg(t: TensorElement, i: int, f: Callable[[Word], object], out_space: TensorAlgebra,
            f_degree: int = 0) -> TensorElement:
    """Apply a linear map to tensor leg ``i``; the result of f on a word is an
    algebra element (one slot) or a tensor (several slots) spliced in place.
    Odd maps pick up the Koszul sign of the legs they pass."""
    fs = t.space.factors
    out: Terms = {}
    for u, c in t.terms.items():
        img = f(u[i])
        if isinstance(img, ScalarValue) or isinstance(img, int):
            img_items = [((), ScalarValue.coerce(img))] if img else []
            splice = lambda v: ()
        elif isinstance(img, TensorElement):
            img_items = list(img.terms.items())
            splice = lambda v: v
        else:
            img_items = [((v,), d) for v, d in img.terms.items()]
            splice = lambda v: v
        sgn = c
        if f_degree & 1:
            par = sum(fs[j].word_degree(u[j]) for j in range(i)) & 1
            if par:
                sgn = -c
        for v, d in img_items:
            key = u[:i] + splice(v) + u[i + 1:]
            _add_into(out, key, sgn * d)
    return TensorElement(out_space, out)


def multiply_legs(t: TensorElement, target: PresentedAlgebra, i: int = 0, j: int = 1,
                  out_space: TensorAlgebra | None = None):
    """Multiply adjacent legs i and i+1 (both in ``target``) into one slot."""
    assert j == i + 1
    out: Terms = {}
    for u, c in t.terms.items():
        for w, d in target._nf_concat(u[i], u[j]).items():
            _add_into(out, u[:i] + (w,) + u[j + 1:], c * d)
    if out_space is None:
        return AlgebraElement(target, {k[0]: v for k, v in out.items()})
    return TensorElement(out_space, out)


def embed_terms(src: PresentedAlgebra, dst: PresentedAlgebra, terms: Terms) -> Terms:
    """Reinterpret words of ``src`` in ``dst`` through generator names."""
    idx = [dst.index[n] for n in src.gen_names]
    out: Terms = {}
    for w, c in terms.items():
        for v, d in dst.nf_word(tuple(idx[g] for g in w)).items():
            _add_into(out, v, c * d)
    return out


def embed(x: AlgebraElement, dst: PresentedAlgebra) -> AlgebraElement:
    if x.algebra is dst:
        return x
    return AlgebraElement(dst, embed_terms(x.algebra, dst, x.terms))


def rules_text(alg: PresentedAlgebra) -> list[tuple[str, str]]:
    """The current rewrite rules as (lhs, rhs) strings over generator names."""
    def word(w: Word) -> str:
        return " ".join(alg.gen_names[g] for g in w) if w else "1"

    out = []
    for lhs, rhs in alg.rules:
        parts = []
        for w, c in sorted(rhs.items(), key=lambda kv: alg.word_key(kv[0])):
            parts.append(f"({c}) {word(w)}")
        out.append((word(lhs), " + ".join(parts) if parts else "0"))
    return out
