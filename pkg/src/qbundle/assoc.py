"""Associated quantum vector bundles: sections as intertwiners, the Υ/Ũ maps, induced linear
connections with their exterior derivatives and curvatures, and the canonical hermitian structures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bundle import Bundle, Connection, Matrix, RepData, matrix_inverse, scalar_matrix
from .ncalg import AlgebraElement
from .report import Check, check
from .scalars import ONE, ZERO, ScalarValue


class NotIntertwiner(ValueError):
    pass


class RepresentationMismatch(ValueError):
    pass


class NotUnitary(ValueError):
    pass


@dataclass(frozen=True)
class Intertwiner:
    """T ∈ Mor(α, Φ) (or Mor(α, HΦ) for form values) stored by its values T(e_1), ..., T(e_n)."""

    rep: str
    values: tuple[AlgebraElement, ...]

    def __add__(self, other: "Intertwiner") -> "Intertwiner":
        _same(self.rep, other.rep)
        return Intertwiner(self.rep, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Intertwiner") -> "Intertwiner":
        _same(self.rep, other.rep)
        return Intertwiner(self.rep, tuple(a - b for a, b in zip(self.values, other.values)))

    def lmul(self, p: AlgebraElement) -> "Intertwiner":
        return Intertwiner(self.rep, tuple(p * v for v in self.values))

    def rmul(self, p: AlgebraElement) -> "Intertwiner":
        return Intertwiner(self.rep, tuple(v * p for v in self.values))

    def __str__(self) -> str:
        return f"T[{self.rep}](" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class LeftForm:
    """Σ_k μ_k ⊗_M T^L_k, coefficients in Ω•(M)."""

    rep: str
    coeffs: tuple[AlgebraElement, ...]

    def __str__(self) -> str:
        return " + ".join(f"({c}) ⊗ T{k + 1}" for k, c in enumerate(self.coeffs) if not c.is_zero()) or "0"


@dataclass(frozen=True)
class RightForm:
    """Σ_k T^R_k ⊗_M μ̃_k, coefficients in Ω•(M)."""

    rep: str
    coeffs: tuple[AlgebraElement, ...]

    def __str__(self) -> str:
        return " + ".join(f"T{k + 1} ⊗ ({c})" for k, c in enumerate(self.coeffs) if not c.is_zero()) or "0"


def _same(a: str, b: str) -> None:
    if a != b:
        raise RepresentationMismatch(f"{a} vs {b}")


class AssociatedBundle:
    """The left and right associated bundles of a registered representation α."""

    def __init__(self, bundle: Bundle, key: str):
        if key not in bundle.reps:
            raise RepresentationMismatch(f"no representation {key!r} registered on {bundle.name}")
        self.bundle, self.key = bundle, key
        self.rep: RepData = bundle.reps[key]
        self.O = bundle.O
        self.n, self.d = self.rep.n, self.rep.d
        self.x = self.rep.x
        self.Z: Matrix = self.rep.Z
        self.Y: Matrix = matrix_inverse(self.rep.Z)
        self.W = self.rep.W()
        self.Wstar = [[w.star() for w in row] for row in self.W]
        self.xstar = [[v.star() for v in row] for row in self.x]

    # -- sections ------------------------------------------------------------------
    def section(self, values: Sequence[object]) -> Intertwiner:
        vals = tuple(self.bundle.elem(v) for v in values)
        if len(vals) != self.n:
            raise RepresentationMismatch(f"{self.key} has dimension {self.n}, got {len(vals)} values")
        return Intertwiner(self.key, vals)

    def is_intertwiner(self, T: Intertwiner) -> bool:
        b = self.bundle
        return self.rep.corep.intertwines(list(T.values), b.coaction, b.OA)

    def require(self, T: Intertwiner) -> None:
        _same(T.rep, self.key)
        if not self.is_intertwiner(T):
            raise NotIntertwiner(str(T))

    def generator(self, k: int) -> Intertwiner:
        return Intertwiner(self.key, tuple(self.x[k]))

    def right_generator(self, k: int) -> Intertwiner:
        """T^R_k = Σ_i z_ki T^L_i."""
        vals = [sum((self.x[i][j] * self.Z[k][i] for i in range(self.d)), self.O.zero) for j in range(self.n)]
        return Intertwiner(self.key, tuple(vals))

    # -- ϱ^α -------------------------------------------------------------------------
    def rho(self, p) -> list[list[AlgebraElement]]:
        """ϱ_kl(p) = Σ_i x_ki p x*_li."""
        p = self.bundle.elem(p)
        return [[sum((self.x[k][i] * p * self.xstar[l][i] for i in range(self.n)), self.O.zero)
                 for l in range(self.d)] for k in range(self.d)]

    def rho_checks(self, samples: Sequence[object]) -> list[Check]:
        name = f"{self.bundle.name}/{self.key}"
        r1 = self.rho(self.O.one)
        sq = _matmul(r1, r1, self.O)
        dag = [[r1[l][k].star() for l in range(self.d)] for k in range(self.d)]
        out = [check(f"{name}/rho(1) idempotent", "rho(1)^2 = rho(1)", sq == r1, "rho(1)^2 != rho(1)"),
               check(f"{name}/rho(1) selfadjoint", "rho(1) = rho(1)^dagger", dag == r1, "rho(1) not selfadjoint")]
        bad_m, bad_s = [], []
        ps = [self.bundle.elem(s) for s in samples]
        for p in ps:
            rp = self.rho(p)
            rps = self.rho(p.star())
            if any(rp[k][l].star() != rps[l][k] for k in range(self.d) for l in range(self.d)):
                bad_s.append(str(p))
            for q in ps:
                if _matmul(rp, self.rho(q), self.O) != self.rho(p * q):
                    bad_m.append(f"{p}, {q}")
        out.append(check(f"{name}/rho multiplicative", "rho(p)rho(q) = rho(pq)", not bad_m, f"fails on {bad_m[:3]}"))
        out.append(check(f"{name}/rho star", "rho_kl(p)* = rho_lk(p*)", not bad_s, f"fails on {bad_s[:3]}"))
        return out

    # -- decompositions ---------------------------------------------------------------
    def left_decompose(self, T: Intertwiner) -> list[AlgebraElement]:
        """p_k = Σ_i T(e_i) x*_ki."""
        self.require(T)
        return self._left_coeffs(T.values)

    def _left_coeffs(self, values: Sequence[AlgebraElement]) -> list[AlgebraElement]:
        return [sum((values[i] * self.xstar[k][i] for i in range(self.n)), self.O.zero) for k in range(self.d)]

    def left_reconstruct(self, coeffs: Sequence[AlgebraElement]) -> Intertwiner:
        vals = [sum((coeffs[k] * self.x[k][i] for k in range(self.d)), self.O.zero) for i in range(self.n)]
        return Intertwiner(self.key, tuple(vals))

    def right_decompose(self, T: Intertwiner) -> list[AlgebraElement]:
        """p̃_k = Σ_ij y_ik w*_ij T(e_j)."""
        self.require(T)
        return self._right_coeffs(T.values)

    def _right_coeffs(self, values: Sequence[AlgebraElement]) -> list[AlgebraElement]:
        out = []
        for k in range(self.d):
            s = self.O.zero
            for i in range(self.d):
                y = self.Y[i][k]
                if y.is_zero():
                    continue
                for j in range(self.n):
                    s = s + self.Wstar[i][j] * values[j] * y
            out.append(s)
        return out

    def right_reconstruct(self, coeffs: Sequence[AlgebraElement]) -> Intertwiner:
        gens = [self.right_generator(k) for k in range(self.d)]
        vals = [sum((gens[k].values[i] * coeffs[k] for k in range(self.d)), self.O.zero) for i in range(self.n)]
        return Intertwiner(self.key, tuple(vals))

    # -- Υ and Ũ ---------------------------------------------------------------------
    def upsilon(self, tau: Intertwiner) -> LeftForm:
        self.require(tau)
        return LeftForm(self.key, tuple(self._left_coeffs(tau.values)))

    def upsilon_inv(self, form: LeftForm) -> Intertwiner:
        _same(form.rep, self.key)
        return self.left_reconstruct(form.coeffs)

    def tilde_upsilon(self, tau: Intertwiner) -> RightForm:
        self.require(tau)
        return RightForm(self.key, tuple(self._right_coeffs(tau.values)))

    def tilde_upsilon_inv(self, form: RightForm) -> Intertwiner:
        _same(form.rep, self.key)
        return self.right_reconstruct(form.coeffs)

    def left_canonical(self, form: LeftForm) -> LeftForm:
        """Coefficients projected by ϱ(1); two left forms are equal iff their canonical forms are."""
        return LeftForm(self.key, tuple(self._left_coeffs(self.upsilon_inv(form).values)))

    def right_canonical(self, form: RightForm) -> RightForm:
        return RightForm(self.key, tuple(self._right_coeffs(self.tilde_upsilon_inv(form).values)))

    def form_lmul(self, p, form: LeftForm) -> LeftForm:
        p = self.bundle.elem(p)
        return LeftForm(self.key, tuple(p * c for c in form.coeffs))

    def form_rmul(self, form: LeftForm, p) -> LeftForm:
        """(Σ μ_k⊗T_k)p = Σ μ_k ϱ_kl(p)⊗T_l."""
        r = self.rho(p)
        return LeftForm(self.key, tuple(sum((form.coeffs[k] * r[k][l] for k in range(self.d)), self.O.zero)
                                        for l in range(self.d)))

    def sigma_map(self, form: LeftForm) -> RightForm:
        """σ_α = Ũ∘Υ⁻¹."""
        return self.tilde_upsilon(self.upsilon_inv(form))

    def left_form(self, pairs: Sequence[tuple[object, int]]) -> LeftForm:
        """Σ μ ⊗_M T^L_k from (μ, k) pairs."""
        coeffs = [self.O.zero] * self.d
        for mu, k in pairs:
            coeffs[k] = coeffs[k] + self.bundle.elem(mu)
        return LeftForm(self.key, tuple(coeffs))

    # -- induced connections -----------------------------------------------------------
    def _apply(self, f, T: Intertwiner) -> Intertwiner:
        return Intertwiner(T.rep, tuple(f(v) for v in T.values))

    def nabla(self, w: Connection, T: Intertwiner) -> LeftForm:
        """∇T = Υ(D^ω∘T)."""
        self.require(T)
        return self.upsilon(self._apply(w.cov_deriv, T))

    def hat_nabla(self, w: Connection, T: Intertwiner) -> RightForm:
        """∇̂T = Ũ(D̂^ω∘T)."""
        self.require(T)
        return self.tilde_upsilon(self._apply(w.dual_cov_deriv, T))

    def ext_cov_deriv(self, w: Connection, form: LeftForm) -> LeftForm:
        """d^∇(μ⊗T) = dμ⊗T + (−1)^k μ∇T, extended linearly over the generators T^L_k."""
        _same(form.rep, self.key)
        b = self.bundle
        coeffs = [self.O.zero] * self.d
        for k, mu in enumerate(form.coeffs):
            if mu.is_zero():
                continue
            nk = self.nabla(w, self.generator(k)).coeffs
            for deg, part in b._split(mu).items():
                coeffs[k] = coeffs[k] + b.d(part)
                sign = ONE if deg % 2 == 0 else -ONE
                for l in range(self.d):
                    coeffs[l] = coeffs[l] + part * nk[l] * sign
        return self.left_canonical(LeftForm(self.key, tuple(coeffs)))

    def hat_ext_cov_deriv(self, w: Connection, form: RightForm) -> RightForm:
        """d^∇̂(T⊗μ) = ∇̂(T)μ + T⊗dμ."""
        _same(form.rep, self.key)
        b = self.bundle
        coeffs = [self.O.zero] * self.d
        for k, mu in enumerate(form.coeffs):
            if mu.is_zero():
                continue
            nk = self.hat_nabla(w, self.right_generator(k)).coeffs
            coeffs[k] = coeffs[k] + b.d(mu)
            for l in range(self.d):
                coeffs[l] = coeffs[l] + nk[l] * mu
        return self.right_canonical(RightForm(self.key, tuple(coeffs)))

    def curvature(self, w: Connection, T: Intertwiner) -> LeftForm:
        """R^∇ = d^∇∘∇."""
        return self.ext_cov_deriv(w, self.nabla(w, T))

    def hat_curvature(self, w: Connection, T: Intertwiner) -> RightForm:
        return self.hat_ext_cov_deriv(w, self.hat_nabla(w, T))

    # -- hermitian structures -------------------------------------------------------------
    def _values(self, x) -> tuple[AlgebraElement, ...]:
        if isinstance(x, Intertwiner):
            _same(x.rep, self.key)
            return x.values
        if isinstance(x, LeftForm):
            return self.upsilon_inv(x).values
        if isinstance(x, RightForm):
            return self.tilde_upsilon_inv(x).values
        raise TypeError(f"cannot pair {type(x).__name__}")

    def herm_L(self, a, b) -> AlgebraElement:
        """⟨a, b⟩_L = Σ_k a(e_k) b(e_k)*, with μ⊗T read as μT."""
        va, vb = self._values(a), self._values(b)
        return sum((u * v.star() for u, v in zip(va, vb)), self.O.zero)

    def herm_R(self, a, b) -> AlgebraElement:
        """⟨a, b⟩_R = Σ_k a(e_k)* b(e_k), with T⊗μ read as Tμ."""
        va, vb = self._values(a), self._values(b)
        return sum((u.star() * v for u, v in zip(va, vb)), self.O.zero)

    def compat_defect(self, w: Connection, T1: Intertwiner, T2: Intertwiner, side: str = "L") -> AlgebraElement:
        """⟨∇T₁,T₂⟩ + ⟨T₁,∇T₂⟩ − d⟨T₁,T₂⟩; zero for real ω."""
        if side == "L":
            n1, n2 = self.nabla(w, T1), self.nabla(w, T2)
            return self.herm_L(n1, T2) + self.herm_L(T1, n2) - self.bundle.d(self.herm_L(T1, T2))
        if side == "R":
            n1, n2 = self.hat_nabla(w, T1), self.hat_nabla(w, T2)
            return self.herm_R(n1, T2) + self.herm_R(T1, n2) - self.bundle.d(self.herm_R(T1, T2))
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")

    # -- checks -----------------------------------------------------------------------
    def section_checks(self, sections: Sequence[Intertwiner], base: Sequence[object],
                       connections: Sequence[Connection] = ()) -> list[Check]:
        """Decomposition, Υ inverse pairs, Leibniz, d^∇ identity and hermitian properties on samples."""
        b, name = self.bundle, f"{self.bundle.name}/{self.key}"
        ps = [b.elem(p) for p in base]
        bad = {k: [] for k in ("base", "recon", "upsilon", "herm", "bimodule")}
        for T in sections:
            pl, pr = self.left_decompose(T), self.right_decompose(T)
            if not all(b.is_base(c) for c in pl + pr):
                bad["base"].append(str(T))
            if self.left_reconstruct(pl) != T or self.right_reconstruct(pr) != T:
                bad["recon"].append(str(T))
            if self.upsilon_inv(self.upsilon(T)) != T or self.tilde_upsilon_inv(self.tilde_upsilon(T)) != T:
                bad["upsilon"].append(str(T))
            for U in sections:
                h, hr = self.herm_L(T, U), self.herm_R(T, U)
                ok = (h.star() == self.herm_L(U, T) and hr.star() == self.herm_R(U, T)
                      and b.is_base(h) and b.is_base(hr))
                for p in ps:
                    ok = ok and self.herm_L(T.rmul(p), U) == self.herm_L(T, U.rmul(p.star()))
                    ok = ok and self.herm_L(T, U.lmul(p)) == h * p.star()
                    ok = ok and self.herm_R(T.rmul(p), U) == p.star() * hr
                if not ok:
                    bad["herm"].append(f"{T}, {U}")
            for p in ps:
                for p2 in ps:
                    tau = T.lmul(p).rmul(p2)
                    lhs = self.upsilon_inv(self.form_rmul(self.form_lmul(p, self.upsilon(T)), p2))
                    if lhs != tau:
                        bad["bimodule"].append(f"{p}, {T}, {p2}")
        labels = {"base": "decomposition coefficients lie in M",
                  "recon": "T = sum p_k T^L_k = sum T^R_k p~_k",
                  "upsilon": "Upsilon and Upsilon~ are inverse to their inverses",
                  "herm": "hermitian structure: symmetry, sidedness, values in M",
                  "bimodule": "Upsilon^-1 is an M-bimodule map"}
        out = [check(f"{name}/{k}", labels[k], not v, f"fails on {v[:3]}") for k, v in bad.items()]
        for w in connections:
            out.extend(self.connection_checks(w, sections, ps))
        return out

    def connection_checks(self, w: Connection, sections: Sequence[Intertwiner],
                          ps: Sequence[AlgebraElement]) -> list[Check]:
        b, name = self.bundle, f"{self.bundle.name}/{self.key}/{w.name}"
        bad = {k: [] for k in ("leibniz", "hat leibniz", "dnabla", "hat dnabla")}
        for T in sections:
            # left Leibniz ∇(pT) = dp⊗T + p∇T, right Leibniz ∇̂(Tp) = ∇̂(T)p + T⊗dp
            for p in (p for p in ps if p.degrees() <= {0}):
                lhs = self.left_canonical(self.nabla(w, T.lmul(p)))
                nt = self.nabla(w, T).coeffs
                rhs = self.left_canonical(LeftForm(self.key, tuple(
                    b.d(p) * c + p * n for c, n in zip(self.upsilon(T).coeffs, nt))))
                if lhs != rhs:
                    bad["leibniz"].append(f"{p}, {T}")
                lhs = self.right_canonical(self.hat_nabla(w, T.rmul(p)))
                nt = self.hat_nabla(w, T).coeffs
                rhs = self.right_canonical(RightForm(self.key, tuple(
                    n * p + c * b.d(p) for c, n in zip(self.tilde_upsilon(T).coeffs, nt))))
                if lhs != rhs:
                    bad["hat leibniz"].append(f"{p}, {T}")
            # d^∇ = Υ∘D∘Υ⁻¹ on ∇T and on μ⊗T
            forms = [self.nabla(w, T)] + [LeftForm(self.key, tuple(b.d(p) * c for c in self.upsilon(T).coeffs))
                                          for p in ps[:2]]
            for f in forms:
                via = self.upsilon(self._apply(w.cov_deriv, self.upsilon_inv(f)))
                if self.ext_cov_deriv(w, f) != self.left_canonical(via):
                    bad["dnabla"].append(str(f))
            hforms = [self.hat_nabla(w, T)] + [RightForm(self.key, tuple(c * b.d(p) for c in self.tilde_upsilon(T).coeffs))
                                               for p in ps[:2]]
            for f in hforms:
                via = self.tilde_upsilon(self._apply(w.dual_cov_deriv, self.tilde_upsilon_inv(f)))
                if self.hat_ext_cov_deriv(w, f) != self.right_canonical(via):
                    bad["hat dnabla"].append(str(f))
        labels = {"leibniz": "nabla(pT) = dp x T + p nabla T",
                  "hat leibniz": "nabla^(Tp) = nabla^(T)p + T x dp",
                  "dnabla": "d^nabla = Upsilon D Upsilon^-1",
                  "hat dnabla": "d^nabla^ = Upsilon~ D^ Upsilon~^-1"}
        return [check(f"{name}/{k}", labels[k], not v, f"fails on {v[:3]}") for k, v in bad.items()]

    # -- unitary change of representation ------------------------------------------------
    def unitary_pullback(self, f: Sequence[Sequence[object]], T: Intertwiner,
                         source: "AssociatedBundle | None" = None) -> Intertwiner:
        """A_f(T) = T∘f for a unitary morphism f: V^source → V^self (default source = self)."""
        src = source or self
        fm = scalar_matrix(f)
        if len(fm) != self.n or any(len(r) != src.n for r in fm):
            raise RepresentationMismatch("matrix shape does not match the representations")
        for i in range(src.n):
            for j in range(src.n):
                s = sum((fm[k][i].conj() * fm[k][j] for k in range(self.n)), ZERO)
                if s != (ONE if i == j else ZERO):
                    raise NotUnitary(f"f^dagger f != 1 at ({i + 1},{j + 1})")
        G = self.rep.corep.hopf.G
        for i in range(self.n):
            for j in range(src.n):
                a = sum((self.rep.corep.g(i, k) * fm[k][j] for k in range(self.n)), G.zero)
                c = sum((src.rep.corep.g(k, j) * fm[i][k] for k in range(src.n)), G.zero)
                if a != c:
                    raise NotUnitary(f"f does not intertwine the representations at ({i + 1},{j + 1})")
        self.require(T)
        vals = [sum((T.values[k] * fm[k][i] for k in range(self.n)), self.O.zero) for i in range(src.n)]
        return Intertwiner(src.key, tuple(vals))


def _matmul(a, b, alg) -> list[list[AlgebraElement]]:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m)), alg.zero) for j in range(p)] for i in range(n)]
