"""The three registered example bundles: trivial U(1), the quantum Hopf fibration, rank-one Dunkl."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .bundle import (Bundle, Connection, RepData, identity_matrix, scalar_matrix)
from .fodc import Calculus, CalculusData
from .hopf import Corepresentation, HopfStructure
from .ncalg import (AlgebraElement, AlgebraPresentation, GeneratorSpec, PresentedAlgebra,
                    define_algebra, embed, rules_text)
from .scalars import ONE, ScalarValue, parse_scalar, qbinomial

Gs = GeneratorSpec


class UnknownExample(KeyError):
    pass


class NotTrivialBundle(ValueError):
    pass


# ---------------------------------------------------------------------------
# structure groups
# ---------------------------------------------------------------------------

def u1_hopf() -> HopfStructure:
    alg = define_algebra(AlgebraPresentation(
        "U(1)", [Gs("z", 0, "z*"), Gs("z*", 0, "z")], [("z z*", "1"), ("z* z", "1")]))
    return HopfStructure(alg, {"z": "z⊗z", "z*": "z*⊗z*"}, {"z": 1, "z*": 1}, {"z": "z*", "z*": "z"})


def z2_hopf() -> HopfStructure:
    alg = define_algebra(AlgebraPresentation("Z/2", [Gs("t", 0)], [("t t", "1")]))
    return HopfStructure(alg, {"t": "t⊗t"}, {"t": 1}, {"t": "t"})


def suq2_hopf() -> HopfStructure:
    alg = define_algebra(AlgebraPresentation("SU_q(2)", _SU_GENS, list(_SU_RULES)))
    return HopfStructure(
        alg,
        {"alpha": "alpha⊗alpha - q gamma*⊗gamma", "gamma": "gamma⊗alpha + alpha*⊗gamma",
         "alpha*": "alpha*⊗alpha* - q gamma⊗gamma*", "gamma*": "gamma*⊗alpha* + alpha⊗gamma*"},
        {"alpha": 1, "alpha*": 1, "gamma": 0, "gamma*": 0},
        {"alpha": "alpha*", "alpha*": "alpha", "gamma": "-q gamma", "gamma*": "-q^-1 gamma*"})


def suq2_fundamental(h: HopfStructure | None = None, balanced: bool = False) -> Corepresentation:
    """Spin-1/2 corepresentation.  The default matrix ((α, −qγ*), (γ, α*)) is unitary; the balanced
    basis diag(1, q)·u·diag(1, q)⁻¹ = ((α, −γ*), (qγ, α*)) instead satisfies Σ_k g*_ik g_jk = δ_ij."""
    h = h or suq2_hopf()
    if balanced:
        return Corepresentation(h, [["alpha", "-gamma*"], ["q gamma", "alpha*"]], "u(balanced)")
    return Corepresentation(h, [["alpha", "-q gamma*"], ["gamma", "alpha*"]], "u")


_SU_GENS = [Gs("alpha", 0, "alpha*", 2, "α"), Gs("alpha*", 0, "alpha", 2, "α*"),
            Gs("gamma", 0, "gamma*", 1, "γ"), Gs("gamma*", 0, "gamma", 1, "γ*")]
_SU_RULES = [("gamma alpha", "q^-1 alpha gamma"), ("gamma* alpha", "q^-1 alpha gamma*"),
             ("gamma* gamma", "gamma gamma*"), ("gamma alpha*", "q alpha* gamma"),
             ("gamma* alpha*", "q alpha* gamma*"), ("alpha* alpha", "1 - gamma gamma*"),
             ("alpha alpha*", "1 - q^2 gamma gamma*")]

_SIGMA = Gs("sigma", 1, "-sigma", 1, "ς")


def u1_classical_calculus(h: HopfStructure) -> Calculus:
    return Calculus(h, CalculusData(
        "U(1) classical", [_SIGMA],
        germs={"z": "sigma", "z*": "-sigma"},
        circ={("sigma", "z"): "sigma", ("sigma", "z*"): "sigma"},
        ad={"sigma": "sigma⊗1"},
        d={"z": "z sigma", "z*": "-z* sigma", "sigma": "0"},
        ideal=["z^2 - 2 z + 1"], wedge=[("sigma sigma", "0")], delta={"sigma": "sigma⊗sigma"}))


def u1_q_calculus(h: HopfStructure) -> Calculus:
    return Calculus(h, CalculusData(
        "U(1) q-deformed", [_SIGMA],
        germs={"z": "sigma", "z*": "-q^2 sigma"},
        circ={("sigma", "z"): "q^-2 sigma", ("sigma", "z*"): "q^2 sigma"},
        ad={"sigma": "sigma⊗1"},
        d={"z": "z sigma", "z*": "-q^2 z* sigma", "sigma": "0"},
        ideal=["z^2 - (1 + q^-2) z + q^-2"], wedge=[("sigma sigma", "0")],
        delta={"sigma": "sigma⊗sigma"}))


def z2_universal_calculus(h: HopfStructure) -> Calculus:
    return Calculus(h, CalculusData(
        "Z/2 universal", [Gs("theta", 1, "-theta", 1, "θ")],
        germs={"t": "theta"},
        circ={("theta", "t"): "-theta"},
        ad={"theta": "theta⊗1"},
        d={"t": "t theta", "theta": "-theta theta"},
        ideal=[], wedge=[], delta={"theta": "theta⊗theta"}))


# ---------------------------------------------------------------------------
# bases for the trivial bundle
# ---------------------------------------------------------------------------

@dataclass
class BaseCalculus:
    """A graded differential *-algebra presented by generators, rules and d on generators."""

    name: str
    generators: list[GeneratorSpec]
    rules: list[tuple[str, str]]
    d: Callable[[PresentedAlgebra], dict[str, AlgebraElement]] | dict[str, str]
    samples: list[str] = field(default_factory=list)


def point_base() -> BaseCalculus:
    return BaseCalculus("point", [], [], {}, [])


def circle_base() -> BaseCalculus:
    """Laurent polynomials in a unitary p with e = p*dp, e* = −e, e central, e² = 0."""
    return BaseCalculus(
        "circle",
        [Gs("p", 0, "p*"), Gs("p*", 0, "p"), Gs("e", 1, "-e")],
        [("p p*", "1"), ("p* p", "1"), ("e p", "p e"), ("e p*", "p* e"), ("e e", "0")],
        {"p": "p e", "p*": "-p* e", "e": "0"},
        ["p", "p* e", "p^2"])


def free_base() -> BaseCalculus:
    """Free graded algebra on p, r (degree 0), μ (degree 1), a (degree 1, a* = −a) and their differentials."""
    gens = [Gs("p", 0, "p*"), Gs("p*", 0, "p"), Gs("r", 0, "r*"), Gs("r*", 0, "r"),
            Gs("mu", 1, "mu*", 1, "μ"), Gs("mu*", 1, "mu", 1, "μ*"), Gs("a", 1, "-a"),
            Gs("dp", 1, "dp*"), Gs("dp*", 1, "dp"), Gs("dr", 1, "dr*"), Gs("dr*", 1, "dr"),
            Gs("dmu", 2, "dmu*", 1, "dμ"), Gs("dmu*", 2, "dmu", 1, "dμ*"), Gs("da", 2, "-da")]
    d = {"p": "dp", "p*": "dp*", "r": "dr", "r*": "dr*", "mu": "dmu", "mu*": "dmu*", "a": "da",
         "dp": "0", "dp*": "0", "dr": "0", "dr*": "0", "dmu": "0", "dmu*": "0", "da": "0"}
    return BaseCalculus("free", gens, [], d, ["p", "mu", "p a"])


def matrix2_base() -> BaseCalculus:
    """2×2 matrices with the Chevalley–Eilenberg calculus of three real central anticommuting forms."""
    gens = [Gs("e11", 0), Gs("e12", 0, "e21"), Gs("e21", 0, "e12"),
            Gs("th1", 1, None, 1, "θ1"), Gs("th2", 1, None, 1, "θ2"), Gs("th3", 1, None, 1, "θ3")]
    rules = [("e11 e11", "e11"), ("e11 e12", "e12"), ("e12 e11", "0"), ("e11 e21", "0"),
             ("e21 e11", "e21"), ("e12 e12", "0"), ("e21 e21", "0"), ("e12 e21", "e11"),
             ("e21 e12", "1 - e11")]
    for t in ("th1", "th2", "th3"):
        for m in ("e11", "e12", "e21"):
            rules.append((f"{t} {m}", f"{m} {t}"))
        rules.append((f"{t} {t}", "0"))
    rules += [("th2 th1", "-th1 th2"), ("th3 th1", "-th1 th3"), ("th3 th2", "-th2 th3")]

    def d(alg: PresentedAlgebra) -> dict[str, AlgebraElement]:
        sig = [alg.parse("e12 + e21"), alg.parse("-i e12 + i e21"), alg.parse("2 e11 - 1")]
        lam = [s * parse_scalar("-i/2") for s in sig]
        th = [alg.gen("th1"), alg.gen("th2"), alg.gen("th3")]
        out = {}
        for m in ("e11", "e12", "e21"):
            x = alg.gen(m)
            out[m] = sum(((l * x - x * l) * t for l, t in zip(lam, th)), alg.zero)
        out["th1"] = -(th[1] * th[2])
        out["th2"] = th[0] * th[2]
        out["th3"] = -(th[0] * th[1])
        return out

    return BaseCalculus("matrix2", gens, rules, d, ["e11", "e12 th1", "e21 th2 th3"])


BASES = {"point": point_base, "circle": circle_base, "free": free_base, "matrix2": matrix2_base}


# ---------------------------------------------------------------------------
# example bundle container
# ---------------------------------------------------------------------------

@dataclass
class Example:
    name: str
    bundle: Bundle
    connections: dict[str, Connection]
    reps: dict[str, str] = field(default_factory=dict)   # key -> description
    info: dict = field(default_factory=dict)

    @property
    def calc(self) -> Calculus:
        return self.bundle.calc

    @property
    def hopf(self) -> HopfStructure:
        return self.bundle.calc.hopf


def _weight_corep(h: HopfStructure, n: int) -> Corepresentation:
    g = "z" if n >= 0 else "z*"
    entry = h.G.gen(g) ** abs(n) if n else h.G.one
    return Corepresentation(h, [[entry]], f"z^{n}")


def _trivial_total(base: BaseCalculus, calc: Calculus) -> tuple[PresentedAlgebra, dict]:
    A = calc.A
    gens = list(base.generators) + [Gs(A.gen_names[i], A.deg[i], _star_text(A, i), A.weight[i],
                                       A.display[i] if A.display[i] != A.gen_names[i] else None)
                                    for i in range(len(A.gen_names))]
    rules = list(base.rules) + rules_text(A)
    for i, x in enumerate(A.gen_names):
        for b in base.generators:
            sign = "-" if (A.deg[i] * b.degree) % 2 else ""
            rules.append((f"{x} {b.name}", f"{sign}{b.name} {x}"))
    alg = define_algebra(AlgebraPresentation(f"Ω(M⊗U(1))[{base.name}]", gens, rules, graded=True))
    if callable(base.d):
        from .ncalg import Derivation  # noqa: F401
        dtab: dict = dict(base.d(alg))
    else:
        dtab = {k: alg.parse(v) for k, v in base.d.items()}
    for i, x in enumerate(A.gen_names):
        dtab[x] = embed(AlgebraElement(A, calc.d.word_terms((i,))), alg)
    return alg, dtab


def _star_text(alg: PresentedAlgebra, i: int) -> str | None:
    c, j = alg.star_table[i]
    if c == ONE and j == i:
        return None
    name = alg.gen_names[j]
    return name if c == ONE else f"({c}) {name}"


def build_trivial_u1(base: str | BaseCalculus = "matrix2") -> Example:
    """M⊗U(1) with Ω•(GM) = Ω•(M)⊗Γ^∧ for the classical calculus on U(1)."""
    if isinstance(base, str):
        if base not in BASES:
            raise UnknownExample(f"unknown base {base!r}")
        base = BASES[base]()
    h = u1_hopf()
    calc = u1_classical_calculus(h)
    O, dtab = _trivial_total(base, calc)
    psi = {b.name: f"{b.name}⊗1" for b in base.generators}
    psi.update({"z": "z⊗z", "z*": "z*⊗z*", "sigma": "sigma⊗1 + 1⊗sigma"})
    bundle = Bundle(f"trivial-u1[{base.name}]", calc, O, dtab, psi, ["sigma"], base.samples)
    reps = {}
    for n in range(-3, 4):
        cor = _weight_corep(h, n)
        x = embed(cor.g(0, 0), O)
        bundle.add_rep(f"n={n}", RepData(cor, [[x]], identity_matrix(1), identity_matrix(1)))
        reps[f"n={n}"] = f"weight {n}"
    conns = {"triv": Connection(bundle, {"sigma": "sigma"}, "ω^triv")}
    if base.name == "free":
        conns["mu"] = Connection(bundle, {"sigma": "sigma + mu"}, "ω^μ")
        conns["real"] = Connection(bundle, {"sigma": "sigma + a"}, "ω^a")
        conns["nonreal"] = Connection(bundle, {"sigma": "sigma + i a"}, "ω^ia")
    if base.name == "circle":
        conns["gauged"] = Connection(bundle, {"sigma": "sigma + e"}, "ω^e")
    return Example(bundle.name, bundle, conns, reps, {"base": base.name})


def potential_decompose(ex: Example, omega: Connection) -> dict[str, AlgebraElement]:
    """A^ω with ω = (A^ω⊗id)∘ad + ω^triv; requires ad(θ) = θ⊗1 for every basis θ."""
    b, calc = ex.bundle, ex.calc
    if "triv" not in ex.connections or not ex.name.startswith("trivial-u1"):
        raise NotTrivialBundle(ex.name)
    out = {}
    for k, t in enumerate(calc.theta):
        name = calc.A.gen_names[t]
        th = calc.A.gen(name)
        if calc.ad(th) != calc.AA.pure(th, calc.A.one):
            raise NotTrivialBundle(f"ad({name}) is not {name}⊗1")
        a = omega.values[k] - ex.connections["triv"].values[k]
        if not b.is_base(a):
            raise NotTrivialBundle(f"{a} is not a base form")
        out[name] = a
    return out


def field_strength(ex: Example, A: dict[str, AlgebraElement]) -> dict[str, AlgebraElement]:
    """F = dA − ⟨A, A⟩ with ⟨A, A⟩ = m(A⊗A)δ."""
    b, calc = ex.bundle, ex.calc
    out = {}
    for k, t in enumerate(calc.theta):
        name = calc.A.gen_names[t]
        delta = calc.embedded_delta(calc.A.gen(name))
        br = b.O.zero
        for (u, v), c in delta.terms.items():
            br = br + A[calc.A.gen_names[u[0]]] * A[calc.A.gen_names[v[0]]] * c
        out[name] = b.d(A[name]) - br
    return out


# ---------------------------------------------------------------------------
# quantum Hopf fibration
# ---------------------------------------------------------------------------

HOPF_GENS = _SU_GENS + [Gs("eta_p", 1, "q eta_m", 1, "η₊"), Gs("eta_m", 1, "q^-1 eta_p", 1, "η₋"),
                        Gs("vs", 1, "-vs", 1, "ς")]

HOPF_RULES = list(_SU_RULES) + [
    ("eta_p alpha", "q^-1 alpha eta_p"), ("eta_p gamma", "q^-1 gamma eta_p"),
    ("eta_p alpha*", "q alpha* eta_p"), ("eta_p gamma*", "q gamma* eta_p"),
    ("eta_m alpha", "q^-1 alpha eta_m"), ("eta_m gamma", "q^-1 gamma eta_m"),
    ("eta_m alpha*", "q alpha* eta_m"), ("eta_m gamma*", "q gamma* eta_m"),
    ("vs alpha", "q^-2 alpha vs"), ("vs gamma", "q^-2 gamma vs"),
    ("vs alpha*", "q^2 alpha* vs"), ("vs gamma*", "q^2 gamma* vs"),
    ("eta_p eta_p", "0"), ("eta_m eta_m", "0"), ("eta_m eta_p", "-q^-2 eta_p eta_m"),
    ("vs vs", "0"), ("vs eta_p", "-q^-4 eta_p vs"), ("vs eta_m", "-q^4 eta_m vs"),
]

HOPF_D = {
    "alpha": "-q gamma* eta_p + alpha vs", "gamma": "alpha* eta_p + gamma vs",
    "alpha*": "-q gamma eta_m - q^2 alpha* vs", "gamma*": "alpha eta_m - q^2 gamma* vs",
    "eta_p": "-(1 + q^-2) eta_p vs", "eta_m": "(q^4 + q^2) eta_m vs", "vs": "-q^-1 eta_p eta_m",
}

HOPF_PSI = {
    "alpha": "alpha⊗z", "gamma": "gamma⊗z", "alpha*": "alpha*⊗z*", "gamma*": "gamma*⊗z*",
    "eta_p": "eta_p⊗z^2", "eta_m": "eta_m⊗z*^2", "vs": "vs⊗1 + 1⊗sigma",
}


def hopf_column(O: PresentedAlgebra, n: int) -> tuple[list[AlgebraElement], list[ScalarValue]]:
    """Tensor-power generators for weight n: all words in (α, γ) (or (α*, qγ*) for n < 0) and Z entries."""
    if n == 0:
        return [O.one], [ONE]
    if n > 0:
        letters = [(O.gen("alpha"), 0), (O.gen("gamma"), 1)]
        zf = parse_scalar("q^2")
    else:
        letters = [(O.gen("alpha*"), 0), (O.gen("gamma*") * parse_scalar("q"), 1)]
        zf = parse_scalar("q^-2")
    xs, zs = [O.one], [ONE]
    for _ in range(abs(n)):
        xs2, zs2 = [], []
        for x, z in zip(xs, zs):
            for y, g in letters:
                xs2.append(x * y)
                zs2.append(z * zf ** g)
        xs, zs = xs2, zs2
    return xs, zs


def hopf_qtrs_formula(O: PresentedAlgebra, n: int) -> list[tuple[ScalarValue, AlgebraElement, AlgebraElement]]:
    """Terms [n k]_{q^-2} γ*^k α*^{n−k} ⊗ α^{n−k}γ^k of the closed form for qtrs(z^n), n ≥ 0."""
    a, ast, g, gst = (O.gen(x) for x in ("alpha", "alpha*", "gamma", "gamma*"))
    base = parse_scalar("q^-2")
    return [(qbinomial(n, k, base), gst ** k * ast ** (n - k), a ** (n - k) * g ** k) for k in range(n + 1)]


def build_hopf_fibration(max_weight: int = 3) -> Example:
    h = u1_hopf()
    calc = u1_q_calculus(h)
    O = define_algebra(AlgebraPresentation("Ω(SU_q(2))", HOPF_GENS, HOPF_RULES, graded=True))
    bundle = Bundle("hopf-fibration", calc, O, HOPF_D, HOPF_PSI, ["vs"],
                    ["gamma gamma*", "alpha gamma*", "gamma alpha*", "alpha alpha*", "alpha* gamma* eta_p"])
    reps = {}
    for n in range(-max_weight, max_weight + 1):
        xs, zs = hopf_column(O, n)
        Z = [[zs[k] if k == l else ScalarValue.coerce(0) for l in range(len(zs))] for k in range(len(zs))]
        bundle.add_rep(f"n={n}", RepData(_weight_corep(h, n), [[x] for x in xs], Z, identity_matrix(1)))
        reps[f"n={n}"] = f"weight {n}"
    conns = {"c": Connection(bundle, {"sigma": "vs"}, "ω^c")}
    return Example("hopf-fibration", bundle, conns, reps, {})


# ---------------------------------------------------------------------------
# rank-one Dunkl model
# ---------------------------------------------------------------------------

DUNKL_GENS = [Gs("x", 0), Gs("xi", 0, None, 1, "x⁻¹"), Gs("s", 0), Gs("dx", 1), Gs("theta", 1, "-theta", 1, "θ")]
DUNKL_RULES = [("x xi", "1"), ("xi x", "1"), ("s x", "x s"), ("s xi", "xi s"), ("s s", "1"),
               ("dx x", "x dx"), ("dx xi", "xi dx"), ("dx s", "s dx"), ("dx dx", "0"),
               ("theta x", "-x theta"), ("theta xi", "-xi theta"), ("theta s", "-s theta"),
               ("theta dx", "dx theta")]
DUNKL_D = {"x": "dx + x theta", "xi": "-xi^2 dx + xi theta", "s": "s theta", "dx": "-dx theta",
           "theta": "-theta theta"}
DUNKL_PSI = {"x": "x⊗t", "xi": "xi⊗t", "s": "s⊗t", "dx": "dx⊗t", "theta": "theta⊗1 + 1⊗theta"}


def build_dunkl_rank1(kappa: str | ScalarValue = "q") -> Example:
    """ℂ[x, x⁻¹, sign] with the ℤ/2 reflection; λ(θ) = −2κ x⁻¹dx gives the Dunkl covariant derivative."""
    k = parse_scalar(kappa) if isinstance(kappa, str) else ScalarValue.coerce(kappa)
    h = z2_hopf()
    calc = z2_universal_calculus(h)
    O = define_algebra(AlgebraPresentation("Ω(ℝ∖0)", DUNKL_GENS, DUNKL_RULES, graded=True))
    bundle = Bundle("dunkl-rank1", calc, O, DUNKL_D, DUNKL_PSI, ["theta"],
                    ["x^2", "x s", "xi dx", "s dx", "x xi"])
    sign = Corepresentation(h, [[h.G.gen("t")]], "sign")
    bundle.add_rep("sign", RepData(sign, [[O.gen("s")]], identity_matrix(1), identity_matrix(1)))
    lam = O.parse("xi dx") * (k * -2)
    theta = O.gen("theta")
    conns = {
        "c": Connection(bundle, {"theta": theta}, "ω^c"),
        "dunkl": Connection(bundle, {"theta": theta + lam}, "ω^D"),
        "dunkl-real": Connection(bundle, {"theta": theta + lam * parse_scalar("i")}, "ω^iD"),
    }
    return Example("dunkl-rank1", bundle, conns, {"sign": "sign representation"},
                   {"kappa": k, "lambda": lam})


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

REGISTRY: dict[str, Callable[..., Example]] = {
    "trivial-u1": build_trivial_u1,
    "hopf-fibration": build_hopf_fibration,
    "dunkl-rank1": build_dunkl_rank1,
}


@lru_cache(maxsize=None)
def get_example(name: str, option: str | None = None) -> Example:
    """Cached construction; ``option`` is the base for trivial-u1 and κ for dunkl-rank1."""
    if name not in REGISTRY:
        raise UnknownExample(name)
    if option is None:
        return REGISTRY[name]()
    return REGISTRY[name](option)
