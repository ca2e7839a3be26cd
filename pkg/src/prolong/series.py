"""Truncated power series in t and the recursive flow solver for section maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ArityMismatch,
    DenominatorVanishesAtInitialPoint,
    NonUnitConstantTerm,
    PointNotOnVariety,
)
from .field import FieldElement
from .poly import MultiPoly, PolyMap, RationalMap
from .prolongation import AffineVariety
from .reporting import CheckReport


def _coerce_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, FieldElement):
        # only constant elements embed into the coefficient field
        if len(value.den) == 1 and value.den[0] == 1 and len(value.num) <= 1:
            return value.num[0] if value.num else Fraction(0)
        raise ValueError("initial data must be rational constants")
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class TruncSeries:
    """Element of Q[[t]] / t^(order+1), held as exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(Fraction(c) for c in coeffs)
        if not cs:
            raise ValueError("a series stores at least its constant term")
        self.coeffs = cs

    @classmethod
    def const(cls, value, order):
        c = _coerce_fraction(value)
        return cls((c,) + (Fraction(0),) * order)

    @classmethod
    def zero(cls, order):
        return cls.const(0, order)

    @classmethod
    def t(cls, order):
        if order < 1:
            raise ValueError("the series t needs order at least 1")
        return cls((Fraction(0), Fraction(1)) + (Fraction(0),) * (order - 1))

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def coefficient(self, k):
        return self.coeffs[k]

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.coeffs[: order + 1])

    def _pair(self, other):
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return self.truncate(n), other.truncate(n)
        return self, TruncSeries.const(other, self.order)

    def __add__(self, other):
        a, b = self._pair(other)
        return TruncSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        return TruncSeries(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        n = a.order
        out = [Fraction(0)] * (n + 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j in range(n + 1 - i):
                y = b.coeffs[j]
                if y != 0:
                    out[i + j] += x * y
        return TruncSeries(out)

    __rmul__ = __mul__

    def inverse(self):
        a0 = self.coeffs[0]
        if a0 == 0:
            raise NonUnitConstantTerm("series has zero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / a0
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out[k] = -acc / a0
        return TruncSeries(out)

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other, self.order)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = TruncSeries.const(1, self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derive(self):
        if self.order == 0:
            raise ValueError("an order-0 series has no usable derivative")
        return TruncSeries(
            tuple((k + 1) * c for k, c in enumerate(self.coeffs[1:]))
        )

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                body = str(c)
            else:
                tk = "t" if k == 1 else f"t^{k}"
                body = tk if abs(c) == 1 else f"{abs(c)}*{tk}"
                if not parts:
                    body = body if c > 0 else "-" + body
                else:
                    body = ("+ " if c > 0 else "- ") + body
                parts.append(body)
                continue
            parts.append(body)
        head = " ".join(parts) if parts else "0"
        return f"{head} + O(t^{self.order + 1})"

    def __repr__(self):
        return f"TruncSeries({self.coeffs!r})"


@dataclass(frozen=True)
class SeriesPoint:
    """Tuple of series of one uniform order, one per ambient coordinate."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a series point needs at least one component")
        orders = {c.order for c in comps}
        if len(orders) != 1:
            raise ValueError("series point components must share one order")
        object.__setattr__(self, "components", comps)

    @classmethod
    def constant(cls, values, order):
        return cls(tuple(TruncSeries.const(v, order) for v in values))

    @property
    def order(self):
        return self.components[0].order

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def truncate(self, order):
        return SeriesPoint(tuple(c.truncate(order) for c in self.components))

    def derive(self):
        return SeriesPoint(tuple(c.derive() for c in self.components))

    def at_zero(self):
        return tuple(c.coefficient(0) for c in self.components)


def element_to_series(elem, order):
    """Expand a base-field element in Q[[t]]; the denominator must be a unit."""
    num = list(elem.num) + [Fraction(0)] * (order + 1 - len(elem.num))
    den = list(elem.den) + [Fraction(0)] * (order + 1 - len(elem.den))
    n = TruncSeries(num[: order + 1])
    d = TruncSeries(den[: order + 1])
    if d.coefficient(0) == 0:
        raise DenominatorVanishesAtInitialPoint(
            "coefficient denominator vanishes at t = 0"
        )
    return n * d.inverse()


def poly_on_series(p, point):
    """Evaluate a polynomial at a series point, coefficients expanded at t = 0."""
    if p.nvars != len(point):
        raise ArityMismatch(f"expected {p.nvars} components, got {len(point)}")
    order = point.order
    acc = TruncSeries.zero(order)
    powers = [{0: TruncSeries.const(1, order)} for _ in range(len(point))]
    for mono, coeff in p.terms.items():
        term = element_to_series(coeff, order)
        for i, e in enumerate(mono):
            if e == 0:
                continue
            cache = powers[i]
            if e not in cache:
                cache[e] = point[i] ** e
            term = term * cache[e]
        acc = acc + term
    return acc


def map_on_series(f, point):
    """Evaluate a polynomial or rational map at a series point."""
    if isinstance(f, PolyMap):
        f = f.as_rational()
    if not isinstance(f, RationalMap):
        raise TypeError("expected a polynomial or rational map")
    if f.in_arity != len(point):
        raise ArityMismatch(f"expected {f.in_arity} components, got {len(point)}")
    out = []
    for num, den in f.components:
        n = poly_on_series(num, point)
        d = poly_on_series(den, point)
        if d.coefficient(0) == 0:
            raise DenominatorVanishesAtInitialPoint(
                "map denominator vanishes at the series base point"
            )
        out.append(n * d.inverse())
    return SeriesPoint(tuple(out))


def variety_residuals(variety, point):
    """Per-generator residual series of a series point against a variety."""
    if len(variety.var_names) != len(point):
        raise ArityMismatch(
            f"expected {len(variety.var_names)} components, got {len(point)}"
        )
    return tuple(poly_on_series(g, point) for g in variety.gens)


def verify_on_variety(variety, point):
    """Report whether every generator vanishes on the point through its order."""
    report = CheckReport()
    for k, residual in enumerate(variety_residuals(variety, point)):
        report.add(
            f"generator {k}",
            residual.is_zero,
            None if residual.is_zero else str(residual),
        )
    return report


def solve_dpoint(variety, sigma, initial, order):
    """Integrate the flow da/dt = sigma(a) from a rational point of the variety.

    Coefficients obey coeff_{k+1}(a_i) = coeff_k(sigma_i(a)) / (k+1), so the
    result is the unique series point with a(0) = initial solving the system
    through the requested order.
    """
    if isinstance(sigma, PolyMap):
        sigma = sigma.as_rational()
    if not isinstance(sigma, RationalMap):
        raise TypeError("expected a polynomial or rational section map")
    n = len(variety.var_names)
    if sigma.in_arity != n or len(sigma.components) != n:
        raise ArityMismatch(
            f"section must map {n} coordinates to {n}, "
            f"got {sigma.in_arity} -> {len(sigma.components)}"
        )
    a0 = tuple(_coerce_fraction(v) for v in initial)
    if len(a0) != n:
        raise ArityMismatch(f"expected {n} initial values, got {len(a0)}")
    if order < 0:
        raise ValueError("order must be nonnegative")

    start = SeriesPoint.constant(a0, order)
    for gen in variety.gens:
        if poly_on_series(gen, start).coefficient(0) != 0:
            raise PointNotOnVariety(
                f"initial point {a0} does not lie on {variety.name} at t = 0"
            )
    for num, den in sigma.components:
        if poly_on_series(den, start).coefficient(0) == 0:
            raise DenominatorVanishesAtInitialPoint(
                "section denominator vanishes at the initial point"
            )

    coeffs = [[Fraction(0)] * (order + 1) for _ in range(n)]
    for i, v in enumerate(a0):
        coeffs[i][0] = v
    for k in range(order):
        current = SeriesPoint(tuple(TruncSeries(c) for c in coeffs))
        velocity = map_on_series(sigma, current)
        for i in range(n):
            coeffs[i][k + 1] = velocity[i].coefficient(k) / (k + 1)
    return SeriesPoint(tuple(TruncSeries(c) for c in coeffs))
