"""Independent reference computations, written in sympy without touching the rewriting engine."""
from __future__ import annotations

import sympy as sp

q, x, s, kappa = sp.symbols("q x s kappa")


def scalar_to_sympy(c) -> sp.Expr:
    """ScalarValue -> sympy rational function in q."""
    return sp.together(c.numerator.as_expr() / c.denominator.as_expr()).subs(sp.Symbol("q"), q)


def sympy_to_scalar(e: sp.Expr):
    """Back to the engine's scalars through its text parser."""
    from qbundle.scalars import parse_scalar

    text = sp.sstr(sp.factor(sp.together(e))).replace("**", "^").replace("I", "i")
    return parse_scalar(text)


def equal(a: sp.Expr, b: sp.Expr) -> bool:
    return sp.simplify(sp.together(a - b)) == 0


# -- Dunkl operator -------------------------------------------------------------

def reflect(f: sp.Expr) -> sp.Expr:
    """(σf)(x) = f(−x); the sign function s changes sign under the reflection."""
    return f.subs({x: -x, s: -s}, simultaneous=True)


def dunkl(f: sp.Expr, k: sp.Expr = kappa) -> sp.Expr:
    """dx-coefficient of f'dx + k (f(x) − f(−x)) x⁻¹ dx; s is locally constant."""
    return sp.expand(sp.diff(f, x) + k * (f - reflect(f)) / x)


def dunkl_form_to_sympy(elem) -> sp.Expr:
    """A degree-one form Σ c·(word in x, x⁻¹, s)·dx as its dx-coefficient; scalars stay in q."""
    A = elem.algebra
    letters = {"x": x, "xi": 1 / x, "s": s}
    out = sp.Integer(0)
    for w, c in elem.terms.items():
        names = [A.gen_names[g] for g in w]
        if names.count("dx") != 1 or "theta" in names:
            raise ValueError(f"not a multiple of dx: {elem}")
        term = scalar_to_sympy(c)
        for n in names:
            if n != "dx":
                term = term * letters[n]
        out += term
    return sp.expand(out)


def sign_simplify(e: sp.Expr) -> sp.Expr:
    """Use s² = 1."""
    return sp.expand(sp.expand(e).subs(s ** 2, 1).subs(s ** 3, s).subs(s ** 4, 1))


# -- q-combinatorics ---------------------------------------------------------------

def gaussian_binomial(n: int, k: int, t: sp.Expr) -> sp.Expr:
    """Pascal recurrence [n k] = [n-1 k-1] + t^k [n-1 k]."""
    if k < 0 or k > n:
        return sp.Integer(0)
    if k in (0, n):
        return sp.Integer(1)
    return sp.expand(gaussian_binomial(n - 1, k - 1, t) + t ** k * gaussian_binomial(n - 1, k, t))


def hopf_pairing_coefficients(n: int) -> dict[str, sp.Expr]:
    """Scalars of the four pairings for T(1) = αⁿ and the canonical connection on the Hopf fibration."""
    base = -(1 - q ** (2 * n)) / (1 - q ** 2)
    return {"<nabla T, T>_L": base * q ** 3, "<T, nabla T>_L": base * q,
            "<hat nabla T, T>_R": base * q ** (1 - 2 * n), "<T, hat nabla T>_R": base * q ** (3 - 2 * n)}

