"""Print the closed-form tables computed by the engine: Hopf-fibration translation map on z^n,
Hermitian pairings of the induced connection on T(1) = α^n, and the Dunkl covariant derivative on x^k."""
from __future__ import annotations

import argparse

from qbundle.assoc import AssociatedBundle
from qbundle.examples import get_example, hopf_qtrs_formula
from qbundle.gauge import translation_map


def qtrs_table(nmax: int) -> None:
    ex = get_example("hopf-fibration")
    q = translation_map(ex)
    calc = ex.calc
    print("translation map on z^n (Hopf fibration)")
    for n in range(1, nmax + 1):
        z = calc.envelope_normal_form(f"z^{n}")
        print(f"  qtrs(z^{n}) = {q(z)}")
        coeffs = ", ".join(str(c) for c, _, _ in hopf_qtrs_formula(ex.bundle.O, n))
        print(f"    q^-2 binomial coefficients: {coeffs}")


def pairing_table(nmax: int) -> None:
    ex = get_example("hopf-fibration")
    w = ex.connections["c"]
    print("pairings for T(1) = alpha^n (Hopf fibration, canonical connection)")
    for n in range(1, nmax + 1):
        ab = AssociatedBundle(ex.bundle, f"n={n}")
        T = ab.section([f"alpha^{n}"])
        rows = [("<nabla T, T>_L", ab.herm_L(ab.nabla(w, T), T)),
                ("<T, nabla T>_L", ab.herm_L(T, ab.nabla(w, T))),
                ("<hat nabla T, T>_R", ab.herm_R(ab.hat_nabla(w, T), T)),
                ("<T, hat nabla T>_R", ab.herm_R(T, ab.hat_nabla(w, T))),
                ("compat defect L", ab.compat_defect(w, T, T, "L")),
                ("compat defect R", ab.compat_defect(w, T, T, "R"))]
        print(f"  n = {n}")
        for label, v in rows:
            print(f"    {label:<20} {v}")


def dunkl_table(kmax: int) -> None:
    ex = get_example("dunkl-rank1")
    w, O = ex.connections["dunkl"], ex.bundle.O
    print("Dunkl covariant derivative D(x^k), kappa = q")
    for k in range(1, kmax + 1):
        print(f"  D(x^{k}) = {w.cov_deriv(O.parse(f'x^{k}'))}")
    for text in ("s", "x s"):
        print(f"  D({text}) = {w.cov_deriv(O.parse(text))}")


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=3)
    args = ap.parse_args(argv)
    qtrs_table(args.nmax)
    print()
    pairing_table(min(args.nmax, 3))
    print()
    dunkl_table(2 * args.nmax)


if __name__ == "__main__":
    main()
