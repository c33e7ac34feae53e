"""Exact scalars: rational functions in a real formal parameter q over Q(i).

Values whose denominator is a monomial (Laurent polynomials) are kept in a
compact exponent table, which covers nearly every coefficient that appears in
the bundle computations.  Anything else goes through sympy's polynomial
arithmetic over ``QQ_I`` and is stored as a reduced fraction with a monic
denominator.  Both paths produce one canonical representation per value.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational
from typing import Iterable, Union

from gmpy2 import mpq
from sympy import QQ_I
from sympy.polys.rings import ring

from .parsing import EvalContext, ParseError, Token, parse_with

_RING, _QPOLY = ring("q", QQ_I)

_ZERO = mpq(0)
_ONE = mpq(1)

# a Gaussian rational is a pair (re, im) of mpq
Gauss = tuple


class DivisionByZero(ZeroDivisionError):
    pass


def _gmul(a: Gauss, b: Gauss) -> Gauss:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _ginv(a: Gauss) -> Gauss:
    n = a[0] * a[0] + a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def _lp_from_dict(d: dict) -> tuple:
    return tuple(sorted((e, re, im) for e, (re, im) in d.items() if re or im))


class ScalarValue:
    """Immutable element of Q(i)(q)."""

    __slots__ = ("_lp", "_rf", "_h")

    def __init__(self, lp: tuple = (), rf: tuple | None = None):
        # lp: sorted tuple of (exponent, re, im); rf: (numer, denom) PolyElements
        self._lp = lp
        self._rf = rf
        self._h = None

    # -- construction -----------------------------------------------------
    @staticmethod
    def coerce(x) -> "ScalarValue":
        if isinstance(x, ScalarValue):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Integral):
            return _int_scalar(int(x))
        if isinstance(x, (Fraction, Rational)) or type(x).__name__ == "mpq":
            v = mpq(x.numerator, x.denominator)
            return ScalarValue(((0, v, _ZERO),)) if v else ZERO
        if isinstance(x, complex):
            re, im = Fraction(x.real), Fraction(x.imag)
            return gaussian(re, im)
        raise TypeError(f"cannot convert {type(x).__name__} to a scalar")

    # -- structure ----------------------------------------------------------
    @property
    def is_laurent(self) -> bool:
        return self._rf is None

    def is_zero(self) -> bool:
        return self._rf is None and not self._lp

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_constant(self) -> bool:
        return self._rf is None and (not self._lp or (len(self._lp) == 1 and self._lp[0][0] == 0))

    def constant_value(self) -> Gauss:
        if not self.is_constant():
            raise ValueError("scalar depends on q")
        return (self._lp[0][1], self._lp[0][2]) if self._lp else (_ZERO, _ZERO)

    def is_real_rational(self) -> bool:
        return self.is_constant() and self.constant_value()[1] == 0

    def _as_frac(self) -> tuple:
        if self._rf is not None:
            return self._rf
        if not self._lp:
            return (_RING.zero, _RING.one)
        emin = min(0, self._lp[0][0])
        num = _RING.zero
        for e, re, im in self._lp:
            num += _RING({(e - emin,): QQ_I(re, im)})
        den = _RING({(-emin,): QQ_I(1, 0)})
        return (num, den)

    @property
    def numerator(self):
        return self._as_frac()[0]

    @property
    def denominator(self):
        return self._as_frac()[1]

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "ScalarValue":
        try:
            other = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        if self._rf is None and other._rf is None:
            if not self._lp:
                return other
            if not other._lp:
                return self
            d = {e: (re, im) for e, re, im in self._lp}
            for e, re, im in other._lp:
                if e in d:
                    a = d[e]
                    d[e] = (a[0] + re, a[1] + im)
                else:
                    d[e] = (re, im)
            return _from_lp(_lp_from_dict(d))
        n1, d1 = self._as_frac()
        n2, d2 = other._as_frac()
        return _from_frac(n1 * d2 + n2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> "ScalarValue":
        if self._rf is None:
            return ScalarValue(tuple((e, -re, -im) for e, re, im in self._lp))
        return ScalarValue(rf=(-self._rf[0], self._rf[1]))

    def __sub__(self, other) -> "ScalarValue":
        try:
            other = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ScalarValue":
        return ScalarValue.coerce(other) - self

    def __mul__(self, other) -> "ScalarValue":
        try:
            other = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        if self._rf is None and other._rf is None:
            a, b = self._lp, other._lp
            if not a or not b:
                return ZERO
            if len(a) == 1 and len(b) == 1:
                (e1, r1, i1), (e2, r2, i2) = a[0], b[0]
                if not i1 and not i2:
                    return ScalarValue(((e1 + e2, r1 * r2, _ZERO),))
                re, im = _gmul((r1, i1), (r2, i2))
                return ScalarValue(((e1 + e2, re, im),))
            d: dict = {}
            for e1, r1, i1 in a:
                for e2, r2, i2 in b:
                    re, im = _gmul((r1, i1), (r2, i2))
                    e = e1 + e2
                    if e in d:
                        x = d[e]
                        d[e] = (x[0] + re, x[1] + im)
                    else:
                        d[e] = (re, im)
            return _from_lp(_lp_from_dict(d))
        n1, d1 = self._as_frac()
        n2, d2 = other._as_frac()
        return _from_frac(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarValue":
        if self.is_zero():
            raise DivisionByZero("division by the zero scalar")
        if self._rf is None and len(self._lp) == 1:
            e, re, im = self._lp[0]
            ire, iim = _ginv((re, im))
            return ScalarValue(((-e, ire, iim),))
        n, d = self._as_frac()
        return _from_frac(d, n)

    def __truediv__(self, other) -> "ScalarValue":
        try:
            other = ScalarValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ScalarValue":
        return ScalarValue.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "ScalarValue":
        if not isinstance(k, Integral):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "ScalarValue":
        """Complex conjugation; q is real and therefore fixed."""
        if self._rf is None:
            if all(not im for _, _, im in self._lp):
                return self
            return ScalarValue(tuple((e, re, -im) for e, re, im in self._lp))
        n, d = self._rf
        return _from_frac(_conj_poly(n), _conj_poly(d))

    # -- comparison -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarValue):
            try:
                other = ScalarValue.coerce(other)
            except TypeError:
                return NotImplemented
        if self._rf is None:
            return other._rf is None and self._lp == other._lp
        return other._rf is not None and self._rf == other._rf

    def __hash__(self) -> int:
        if self._h is None:
            if self._rf is None:
                self._h = hash(self._lp)
            else:
                self._h = hash((tuple(sorted(self._rf[0].items())),
                                tuple(sorted(self._rf[1].items()))))
        return self._h

    # -- evaluation ---------------------------------------------------------------
    def subs(self, value) -> "ScalarValue":
        """Substitute a scalar for q."""
        value = ScalarValue.coerce(value)
        n, d = self._as_frac()
        return _eval_poly(n, value) / _eval_poly(d, value)

    # -- text -------------------------------------------------------------------------
    def __str__(self) -> str:
        if self._rf is None:
            return _fmt_lp(self._lp)
        n, d = self._rf
        return f"({_fmt_poly(n)})/({_fmt_poly(d)})"

    def __repr__(self) -> str:
        return f"ScalarValue({str(self)!r})"

    def needs_parens(self) -> bool:
        """True when the printed form is a sum and must be bracketed in a product."""
        if self._rf is not None:
            return True
        if len(self._lp) > 1:
            return True
        if self._lp:
            _, re, im = self._lp[0]
            return bool(re) and bool(im)
        return False

    @property
    def sign_negative(self) -> bool:
        """Whether the printed form starts with a minus sign (display helper)."""
        return str(self).startswith("-")


def _from_lp(lp: tuple) -> ScalarValue:
    return ScalarValue(lp) if lp else ZERO


def _conj_poly(p):
    return _RING({k: QQ_I(c.x, -c.y) for k, c in p.items()})


def _eval_poly(p, value: ScalarValue) -> ScalarValue:
    out = ZERO
    for (e,), c in p.items():
        out = out + gaussian(c.x, c.y) * value ** e
    return out


def _from_frac(num, den) -> ScalarValue:
    if not den:
        raise DivisionByZero("division by the zero scalar")
    if not num:
        return ZERO
    g = num.gcd(den)
    if g != 1 and g.degree() > 0:
        num = num.exquo(g)
        den = den.exquo(g)
    if len(den) == 1:
        ((k,), c), = den.items()
        inv = _ginv((c.x, c.y))
        d = {}
        for (e,), a in num.items():
            re, im = _gmul((a.x, a.y), inv)
            d[e - k] = (mpq(re), mpq(im))
        return _from_lp(_lp_from_dict(d))
    lc = den.LC
    if lc != QQ_I(1, 0):
        inv = QQ_I(1, 0) / lc
        num = num * inv
        den = den * inv
    return ScalarValue(rf=(num, den))


@lru_cache(maxsize=512)
def _int_scalar(n: int) -> ScalarValue:
    return ScalarValue(((0, mpq(n), _ZERO),)) if n else ScalarValue(())


def gaussian(re, im=0) -> ScalarValue:
    re, im = mpq(re), mpq(im)
    if not re and not im:
        return ZERO
    return ScalarValue(((0, re, im),))


def q_power(k: int, coeff=1) -> ScalarValue:
    c = ScalarValue.coerce(coeff)
    return c * ScalarValue(((k, _ONE, _ZERO),))


ZERO = ScalarValue(())
ONE = _int_scalar(1)
I = gaussian(0, 1)
Q = q_power(1)


# -- formatting ------------------------------------------------------------------

def _fmt_rat(x) -> str:
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_gauss(re, im) -> tuple[str, bool]:
    """Returns (text without leading sign, negative?) for a coefficient."""
    if not im:
        return _fmt_rat(abs(re)), re < 0
    if not re:
        mag = abs(im)
        txt = "i" if mag == 1 else f"{_fmt_rat(mag)}*i"
        return txt, im < 0
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    itxt = "i" if mag == 1 else f"{_fmt_rat(mag)}*i"
    return f"({_fmt_rat(re)}{sign}{itxt})", False


def _fmt_terms(terms: Iterable[tuple]) -> str:
    parts: list[str] = []
    for e, re, im in terms:
        ctext, neg = _fmt_gauss(re, im)
        if e == 0:
            body = ctext
        else:
            qtxt = "q" if e == 1 else f"q^{e}"
            body = qtxt if ctext == "1" else f"{ctext}*{qtxt}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) if parts else "0"


def _fmt_lp(lp: tuple) -> str:
    return _fmt_terms(lp)


def _fmt_poly(p) -> str:
    terms = sorted(((e, mpq(c.x), mpq(c.y)) for (e,), c in p.items()))
    return _fmt_terms(terms)


# -- parsing ---------------------------------------------------------------------

class _ScalarContext(EvalContext):
    def known(self, name: str) -> bool:
        return name in ("q", "i")

    def number(self, value: int) -> ScalarValue:
        return _int_scalar(value)

    def name(self, name: str, tok: Token) -> ScalarValue:
        if name == "q":
            return Q
        if name == "i":
            return I
        raise ParseError(f"unknown symbol {name!r} in scalar", tok.line, tok.col)


def parse_scalar(text: str) -> ScalarValue:
    """Parse integers, ``i``, ``q`` combined with ``+ - * / ^ ( )``."""
    value = parse_with(text, _ScalarContext())
    return ScalarValue.coerce(value)


ScalarLike = Union[ScalarValue, int, Fraction]


def scalar_arith(op: str, a: ScalarLike, b: ScalarLike) -> ScalarValue:
    a, b = ScalarValue.coerce(a), ScalarValue.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_conj(a: ScalarLike) -> ScalarValue:
    return ScalarValue.coerce(a).conj()


def qint(n: int, base: ScalarValue | None = None) -> ScalarValue:
    """The q-integer 1 + t + ... + t^(n-1) with t = base (default q)."""
    t = Q if base is None else base
    out, p = ZERO, ONE
    for _ in range(n):
        out = out + p
        p = p * t
    return out


def qbinomial(n: int, k: int, base: ScalarValue | None = None) -> ScalarValue:
    """Gaussian binomial coefficient in the variable ``base`` by the product formula."""
    if k < 0 or k > n:
        return ZERO
    t = Q if base is None else base
    num, den = ONE, ONE
    for j in range(k):
        num = num * (ONE - t ** (n - j))
        den = den * (ONE - t ** (j + 1))
    return num / den
