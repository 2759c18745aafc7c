"""Exact formal calculus: Laurent polynomials, delta-function series, windows.

All coefficients are ``fractions.Fraction``; there is no floating point
anywhere.  The central objects are finite sums

    sum_i  g_i(y) * Delta^(i)(x, y)

where ``Delta^(k)(x, y)`` is the k-th x-derivative of the two-variable
expansion ``sum_n x^n y^{-n-1}``.  A ``BiSeriesWindow`` holds the exact
coefficients of such a bivariate series on a finite exponent rectangle and
acts as the oracle that arbitrates every identity in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping


Rational = Fraction


def rat(value) -> Fraction:
    """Coerce ints, strings like '-1/12', or Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(q: Fraction) -> str:
    """Serialize a Fraction as 'p' or 'p/q' (never a float)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def gen_binomial(m: int, i: int) -> Fraction:
    """Generalized binomial coefficient m(m-1)...(m+1-i) / i! for integer m."""
    if i < 0:
        raise ValueError("lower index must be nonnegative")
    num = 1
    for t in range(i):
        num *= m - t
    den = 1
    for t in range(1, i + 1):
        den *= t
    return Fraction(num, den)


def falling(n: int, k: int) -> int:
    """Falling factorial n(n-1)...(n-k+1); the Delta^(k) diagonal weight."""
    out = 1
    for t in range(k):
        out *= n - t
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """Multivariate Laurent polynomial with Fraction coefficients.

    Stored as a map from integer exponent vectors (tuples, one slot per
    variable) to nonzero coefficients.  Instances are immutable by
    convention; all arithmetic returns new objects.
    """

    __slots__ = ("vars", "coeffs")

    def __init__(self, variables: Iterable[str], coeffs: Mapping[tuple, object] | None = None):
        self.vars = tuple(variables)
        clean: dict[tuple, Fraction] = {}
        if coeffs:
            for exps, c in coeffs.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(self.vars):
                    raise ValueError("exponent arity does not match variable set")
                c = rat(c)
                if c:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if not clean[exps]:
                        del clean[exps]
        self.coeffs = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, variables: Iterable[str], c) -> "LaurentPoly":
        variables = tuple(variables)
        zero = (0,) * len(variables)
        return cls(variables, {zero: rat(c)})

    @classmethod
    def monomial(cls, variables: Iterable[str], exps: tuple, c=1) -> "LaurentPoly":
        return cls(variables, {tuple(exps): rat(c)})

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exps: tuple) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    def terms(self):
        """Terms sorted by exponent vector (deterministic canonical order)."""
        return sorted(self.coeffs.items())

    def degree_span(self, var_index: int = 0) -> tuple[int, int]:
        """(min, max) exponent in the given variable; (0, 0) for zero."""
        if not self.coeffs:
            return (0, 0)
        exps = [e[var_index] for e in self.coeffs]
        return (min(exps), max(exps))

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.vars != other.vars:
            raise ValueError("variable sets differ")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(self.vars, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.coeffs.items()})

    def scale(self, c) -> "LaurentPoly":
        c = rat(c)
        return LaurentPoly(self.vars, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.vars, out)

    def derivative(self, var_index: int = 0, order: int = 1) -> "LaurentPoly":
        """Laurent derivative d/dv, iterated ``order`` times."""
        cur = self
        for _ in range(order):
            out: dict[tuple, Fraction] = {}
            for e, c in cur.coeffs.items():
                k = e[var_index]
                if k == 0:
                    continue
                ne = list(e)
                ne[var_index] = k - 1
                out[tuple(ne)] = out.get(tuple(ne), Fraction(0)) + c * k
            cur = LaurentPoly(self.vars, out)
        return cur

    def rename(self, variables: Iterable[str]) -> "LaurentPoly":
        return LaurentPoly(variables, self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly)
                and self.vars == other.vars and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.vars, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for exps, c in self.terms():
            mono = "*".join(
                f"{v}^{e}" if e != 1 else v
                for v, e in zip(self.vars, exps) if e != 0
            )
            if not mono:
                bits.append(rat_str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{rat_str(c)}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------

class BiSeriesWindow:
    """Dense exact coefficient table of a bivariate series on a rectangle.

    Entry (a, b) is the coefficient of x^a y^b.  Used as the truncated
    rendering oracle for all delta-series identities.
    """

    __slots__ = ("x_lo", "x_hi", "y_lo", "y_hi", "table")

    def __init__(self, x_lo: int, x_hi: int, y_lo: int, y_hi: int):
        if x_lo > x_hi or y_lo > y_hi:
            raise ValueError("empty window")
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi
        self.table = [
            [Fraction(0)] * (y_hi - y_lo + 1) for _ in range(x_hi - x_lo + 1)
        ]

    @classmethod
    def square(cls, radius: int) -> "BiSeriesWindow":
        return cls(-radius, radius, -radius, radius)

    def contains(self, a: int, b: int) -> bool:
        return self.x_lo <= a <= self.x_hi and self.y_lo <= b <= self.y_hi

    def get(self, a: int, b: int) -> Fraction:
        if not self.contains(a, b):
            raise IndexError(f"({a},{b}) outside window")
        return self.table[a - self.x_lo][b - self.y_lo]

    def add(self, a: int, b: int, c: Fraction):
        self.table[a - self.x_lo][b - self.y_lo] += c

    def entries(self):
        for a in range(self.x_lo, self.x_hi + 1):
            row = self.table[a - self.x_lo]
            for b in range(self.y_lo, self.y_hi + 1):
                yield a, b, row[b - self.y_lo]

    def is_zero(self) -> bool:
        return all(c == 0 for _, _, c in self.entries())

    def equal_on_overlap(self, other: "BiSeriesWindow") -> bool:
        x_lo, x_hi = max(self.x_lo, other.x_lo), min(self.x_hi, other.x_hi)
        y_lo, y_hi = max(self.y_lo, other.y_lo), min(self.y_hi, other.y_hi)
        for a in range(x_lo, x_hi + 1):
            for b in range(y_lo, y_hi + 1):
                if self.get(a, b) != other.get(a, b):
                    return False
        return True

    def mul_power_diff(self, m: int) -> "BiSeriesWindow":
        """Multiply by (x - y)^m; the result window shrinks at the low edges.

        Entry (a, b) of the product needs the factors at (a-m+t, b-t) for
        t in 0..m, so it is only computable where all of those lie inside.
        """
        if m < 0:
            raise ValueError("power must be nonnegative")
        out = BiSeriesWindow(self.x_lo + m, self.x_hi, self.y_lo + m, self.y_hi)
        for a in range(out.x_lo, out.x_hi + 1):
            for b in range(out.y_lo, out.y_hi + 1):
                acc = Fraction(0)
                for t in range(m + 1):
                    sign = -1 if t % 2 else 1
                    acc += sign * gen_binomial(m, t) * self.get(a - m + t, b - t)
                out.table[a - out.x_lo][b - out.y_lo] = acc
        return out


def delta_window(k: int, window: BiSeriesWindow) -> BiSeriesWindow:
    """Exact window expansion of Delta^(k): weight n(n-1)..(n-k+1) on the
    antidiagonal x^{n-k} y^{-n-1}."""
    if k < 0:
        raise ValueError("delta order must be nonnegative")
    out = BiSeriesWindow(window.x_lo, window.x_hi, window.y_lo, window.y_hi)
    for a in range(out.x_lo, out.x_hi + 1):
        b = -a - k - 1
        if out.y_lo <= b <= out.y_hi:
            out.add(a, b, Fraction(falling(a + k, k)))
    return out


# ---------------------------------------------------------------------------
# Delta series
# ---------------------------------------------------------------------------

COEFF_IN_Y = "y"
COEFF_IN_X = "x"


class DeltaSeries:
    """Finite sum  sum_i g_i(side) * Delta^(i)(x, y)  with Laurent g_i.

    ``side`` records whether the coefficients are written in y (canonical)
    or in x.  Canonical form sorts terms by order and drops zero
    coefficients.
    """

    __slots__ = ("side", "terms")

    def __init__(self, terms: Iterable[tuple[int, LaurentPoly]] = (), side: str = COEFF_IN_Y):
        if side not in (COEFF_IN_X, COEFF_IN_Y):
            raise ValueError("side must be 'x' or 'y'")
        merged: dict[int, LaurentPoly] = {}
        for order, poly in terms:
            order = int(order)
            if order < 0:
                raise ValueError("delta orders are nonnegative")
            if order in merged:
                merged[order] = merged[order] + poly
            else:
                merged[order] = poly
        self.side = side
        self.terms = tuple(
            (o, p) for o, p in sorted(merged.items()) if not p.is_zero()
        )

    @classmethod
    def single(cls, order: int, poly: LaurentPoly, side: str = COEFF_IN_Y) -> "DeltaSeries":
        return cls([(order, poly)], side)

    @classmethod
    def zero(cls, side: str = COEFF_IN_Y) -> "DeltaSeries":
        return cls([], side)

    def is_zero(self) -> bool:
        return not self.terms

    def max_order(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def __add__(self, other: "DeltaSeries") -> "DeltaSeries":
        if self.side != other.side:
            raise ValueError("cannot add series on different sides")
        return DeltaSeries(list(self.terms) + list(other.terms), self.side)

    def __neg__(self) -> "DeltaSeries":
        return DeltaSeries([(o, -p) for o, p in self.terms], self.side)

    def __sub__(self, other: "DeltaSeries") -> "DeltaSeries":
        return self + (-other)

    def scale(self, c) -> "DeltaSeries":
        return DeltaSeries([(o, p.scale(c)) for o, p in self.terms], self.side)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DeltaSeries)
                and self.side == other.side and self.terms == other.terms)

    def __hash__(self):
        return hash((self.side, self.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for o, p in self.terms:
            d = "Delta" if o == 0 else f"Delta^({o})"
            bits.append(f"({p!r})*{d}")
        return " + ".join(bits)


def render(series: DeltaSeries, window: BiSeriesWindow) -> BiSeriesWindow:
    """Exact windowed expansion of a DeltaSeries.

    For a coefficient monomial c*v^d in the order-i term, the bivariate
    entry at (a, b) receives a contribution whenever d = a + b + i + 1,
    weighted by the Delta^(i) diagonal factor (in the side variable).
    """
    out = BiSeriesWindow(window.x_lo, window.x_hi, window.y_lo, window.y_hi)
    in_y = series.side == COEFF_IN_Y
    for i, poly in series.terms:
        for a in range(out.x_lo, out.x_hi + 1):
            for b in range(out.y_lo, out.y_hi + 1):
                c = poly.coefficient((a + b + i + 1,))
                if not c:
                    continue
                w = falling(a + i, i) if in_y else falling(-b - 1, i)
                if w:
                    out.add(a, b, c * w)
    return out


def mul_power_diff(m: int, series: DeltaSeries) -> DeltaSeries:
    """(x - y)^m * series, canonicalized term by term.

    Iterating (x-y) Delta^(n) = -n Delta^(n-1), each Delta^(n) term with
    m <= n maps to (-1)^m n(n-1)..(n-m+1) Delta^(n-m) and terms with m > n
    vanish.  Coefficients pass through unchanged since they depend on a
    single variable.  The window oracle arbitrates this constant.
    """
    if m < 0:
        raise ValueError("power must be nonnegative")
    out = []
    for n, poly in series.terms:
        if m > n:
            continue
        c = Fraction(falling(n, m))
        if m % 2:
            c = -c
        out.append((n - m, poly.scale(c)))
    return DeltaSeries(out, series.side)


def swap_side(series: DeltaSeries) -> DeltaSeries:
    """Rewrite the series with coefficients in the other variable.

    x -> y uses f(x)Delta^(k) = sum_j (-1)^{k+j} binom(k,j) f^{(k-j)}(y) Delta^(j);
    y -> x uses f(y)Delta^(k) = sum_j binom(k,j) f^{(k-j)}(x) Delta^(j).
    Both follow from moving the variable through the Delta derivatives and
    must render identically on any window.
    """
    to_y = series.side == COEFF_IN_X
    new_side = COEFF_IN_Y if to_y else COEFF_IN_X
    new_var = ("y",) if to_y else ("x",)
    out: list[tuple[int, LaurentPoly]] = []
    for k, poly in series.terms:
        for j in range(k + 1):
            c = gen_binomial(k, j)
            if to_y and (k + j) % 2:
                c = -c
            g = poly.derivative(0, k - j).rename(new_var).scale(c)
            out.append((j, g))
    return DeltaSeries(out, new_side)


def mul_coeff_var(series: DeltaSeries, poly: LaurentPoly) -> DeltaSeries:
    """Multiply by a Laurent polynomial in the series' own side variable."""
    return DeltaSeries([(o, p * poly) for o, p in series.terms], series.side)


def mul_other_var(series: DeltaSeries, poly: LaurentPoly) -> DeltaSeries:
    """Multiply by a Laurent polynomial in the opposite variable.

    The factor is first transported through each Delta term (the same
    identity as swap_side applied to poly * Delta^(k)), so the result stays
    on the original side.
    """
    out: list[tuple[int, LaurentPoly]] = []
    to_y = series.side == COEFF_IN_Y
    var = ("y",) if to_y else ("x",)
    for k, g in series.terms:
        for j in range(k + 1):
            c = gen_binomial(k, j)
            if to_y and (k + j) % 2:
                c = -c
            moved = poly.derivative(0, k - j).rename(var).scale(c)
            out.append((j, g * moved))
    return DeltaSeries(out, series.side)


class DecompositionError(ValueError):
    """The annihilation promise behind a decomposition was false."""


def decompose(window: BiSeriesWindow, k: int) -> DeltaSeries:
    """Recover the unique f_0..f_k with  window = sum f_i(y) Delta^(i).

    Extraction: f_i(y) = Res_x[(x-y)^i f] / ((-1)^i i!), using that
    (x-y)^i Delta^(i) = (-1)^i i! Delta and that Res_x Delta^(j) is 1 for
    j = 0 and 0 otherwise.  The result is re-rendered and compared against
    the input window; a mismatch means the caller's
    (x-y)^{k+1}-annihilation promise was false and raises
    DecompositionError.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not (window.x_lo <= -1 - k and window.x_hi >= -1):
        raise ValueError("window must contain the x-exponent range [-1-k, -1]")
    terms = []
    for i in range(k + 1):
        fact_i = 1
        for t in range(1, i + 1):
            fact_i *= t
        norm = Fraction(-fact_i if i % 2 else fact_i)
        coeffs: dict[tuple, Fraction] = {}
        for s in range(window.y_lo + i, window.y_hi + 1):
            acc = Fraction(0)
            for t in range(i + 1):
                sign = -1 if t % 2 else 1
                acc += sign * gen_binomial(i, t) * window.get(-1 - i + t, s - t)
            if acc:
                coeffs[(s,)] = acc / norm
        terms.append((i, LaurentPoly(("y",), coeffs)))
    result = DeltaSeries(terms, COEFF_IN_Y)
    back = render(result, window)
    for a, b, c in window.entries():
        if back.get(a, b) != c:
            raise DecompositionError(
                f"window is not a delta series of order <= {k}: "
                f"entry ({a},{b}) is {c}, reconstruction gives {back.get(a, b)}"
            )
    return result


def oracle_radius(series: DeltaSeries) -> int:
    """Window radius large enough that no truncation can mask a discrepancy:
    max Delta order + max coefficient degree spread + 2."""
    if series.is_zero():
        return 2
    spread = 0
    for _, p in series.terms:
        lo, hi = p.degree_span()
        spread = max(spread, hi - lo, abs(hi), abs(lo))
    return series.max_order() + spread + 2
