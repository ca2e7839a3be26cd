"""Exact arithmetic in the differential base fields Q and Q(t).

Elements are rational functions of t with Fraction coefficients, stored
in canonical form: numerator and denominator coprime, denominator monic.
Over Q both parts are constant and the derivation is zero; over Q(t) the
derivation is d/dt extended to quotients by the quotient rule.

Univariate polynomials in t are plain tuples of Fractions, lowest degree
first, with no trailing zeros; the empty tuple is the zero polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _norm(coeffs) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _udeg(a: tuple[Fraction, ...]) -> int:
    return len(a) - 1


def _uadd(a, b):
    n = max(len(a), len(b))
    return _norm((a[i] if i < len(a) else _ZERO) + (b[i] if i < len(b) else _ZERO) for i in range(n))


def _uneg(a):
    return tuple(-c for c in a)


def _usub(a, b):
    return _uadd(a, _uneg(b))


def _umul(a, b):
    if not a or not b:
        return ()
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _norm(out)


def _udivmod(a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for j, cb in enumerate(b):
            r[k + j] -= c * cb
    return _norm(q), _norm(r)


def _umonic(a):
    if not a:
        return a
    lc = a[-1]
    if lc == 1:
        return a
    return tuple(c / lc for c in a)


def _ugcd(a, b):
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    return _umonic(a)


def _uderiv(a):
    return _norm(k * a[k] for k in range(1, len(a)))


def _term_count(a) -> int:
    return sum(1 for c in a if c != 0)


def _fmt_upoly(a) -> str:
    if not a:
        return "0"
    parts: list[str] = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        neg = c < 0
        mag = -c if neg else c
        if k == 0:
            body = str(mag)
        else:
            var = "t" if k == 1 else f"t^{k}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


@dataclass(frozen=True)
class BaseField:
    """Tag object naming the base field: Q or Q(t)."""

    tag: str

    @property
    def has_t(self) -> bool:
        return self.tag == "Qt"

    def elem(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError(f"element of {value.field} used over {self}")
            return value
        return FieldElement._make(self, (Fraction(value),), (_ONE,))

    @property
    def zero(self) -> "FieldElement":
        return self.elem(0)

    @property
    def one(self) -> "FieldElement":
        return self.elem(1)

    @property
    def t(self) -> "FieldElement":
        if not self.has_t:
            raise ValueError("Q has no element t")
        return FieldElement._make(self, (_ZERO, _ONE), (_ONE,))

    def __str__(self) -> str:
        return "Q(t)" if self.has_t else "Q"


Q = BaseField("Q")
QT = BaseField("Qt")


class FieldElement:
    """Canonical rational function of t (constant over Q)."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: BaseField, num, den):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @classmethod
    def _make(cls, field: BaseField, num, den) -> "FieldElement":
        num = _norm(num)
        den = _norm(den)
        if not den:
            raise DivisionByZero("zero denominator in field element")
        if not num:
            return cls(field, (), (_ONE,))
        g = _ugcd(num, den)
        if _udeg(g) > 0:
            num, _ = _udivmod(num, g)
            den, _ = _udivmod(den, g)
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        if not field.has_t and (_udeg(num) > 0 or _udeg(den) > 0):
            raise ValueError("nonconstant element over Q")
        return cls(field, num, den)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixed fields {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement._make(self.field, (Fraction(other),), (_ONE,))
        return None

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_one(self) -> bool:
        return self.num == (_ONE,) and self.den == (_ONE,)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        num = _uadd(_umul(self.num, o.den), _umul(o.num, self.den))
        return FieldElement._make(self.field, num, _umul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, _uneg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._make(self.field, _umul(self.num, o.num), _umul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        return FieldElement._make(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZero("division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derive(self) -> "FieldElement":
        """Apply the field derivation: zero on Q, d/dt on Q(t)."""
        if not self.field.has_t:
            return self.field.zero
        dn = _usub(_umul(_uderiv(self.num), self.den), _umul(self.num, _uderiv(self.den)))
        return FieldElement._make(self.field, dn, _umul(self.den, self.den))

    @property
    def is_negative_leading(self) -> bool:
        """Sign of the highest-degree numerator coefficient; display only."""
        return bool(self.num) and self.num[-1] < 0

    def as_fraction(self) -> Fraction:
        if _udeg(self.num) > 0 or _udeg(self.den) > 0:
            raise ValueError("element is not a rational constant")
        return (self.num[0] if self.num else _ZERO) / self.den[0]

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FieldElement) else other
        if o is None or not isinstance(o, FieldElement):
            return NotImplemented
        return self.field == o.field and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.field.tag, self.num, self.den))

    def __str__(self) -> str:
        return self.format()

    def format(self, as_factor: bool = False) -> str:
        """Render in expression syntax.

        as_factor guards the string for use inside a product: multi-term
        numerators get parentheses so operator precedence is preserved.
        """
        num_s = _fmt_upoly(self.num)
        if self.den == (_ONE,):
            if as_factor and _term_count(self.num) > 1:
                return f"({num_s})"
            return num_s
        if _term_count(self.num) > 1 or "/" in num_s:
            num_s = f"({num_s})"
        den_s = _fmt_upoly(self.den)
        if _term_count(self.den) > 1:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self) -> str:
        return f"FieldElement({self.field}, {self})"
