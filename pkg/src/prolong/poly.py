"""Sparse multivariate polynomials and polynomial/rational maps.

Monomials are exponent tuples of fixed length nvars.  Coefficients are
FieldElement values over Q or Q(t).  Rational map components are kept in
canonical form: numerator and denominator with gcd removed and monic
denominator (leading coefficient 1 in graded reverse lexicographic order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ArityMismatch,
    DenominatorVanishes,
    DivisionByZero,
    IdenticallyZeroDenominator,
    IndexOutOfRange,
)
from .field import BaseField, FieldElement

Monomial = tuple[int, ...]


def grevlex_key(mono: Monomial):
    """Ascending sort key for graded reverse lexicographic order."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


class MultiPoly:
    """Immutable sparse polynomial in nvars variables."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: BaseField, nvars: int, terms=None):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nvars", nvars)
        clean: dict[Monomial, FieldElement] = {}
        if terms:
            for mono, coeff in terms.items() if isinstance(terms, dict) else terms:
                c = field.elem(coeff)
                if c.is_zero:
                    continue
                mono = tuple(mono)
                if len(mono) != nvars or any(e < 0 for e in mono):
                    raise ValueError(f"bad monomial {mono} for {nvars} variables")
                prev = clean.get(mono)
                c = c if prev is None else prev + c
                if c.is_zero:
                    clean.pop(mono, None)
                else:
                    clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def zero(cls, field: BaseField, nvars: int) -> "MultiPoly":
        return cls(field, nvars)

    @classmethod
    def const(cls, field: BaseField, nvars: int, value) -> "MultiPoly":
        return cls(field, nvars, {(0,) * nvars: field.elem(value)})

    @classmethod
    def var(cls, field: BaseField, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable index {i} out of range for {nvars} variables")
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(field, nvars, {mono: field.one})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> FieldElement:
        if self.is_zero:
            return self.field.zero
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    def _check(self, other: "MultiPoly"):
        if self.field != other.field:
            raise ValueError(f"mixed fields {self.field} and {other.field}")
        if self.nvars != other.nvars:
            raise ArityMismatch(f"{self.nvars} variables vs {other.nvars}")

    def _coerce_scalar(self, value):
        if isinstance(value, MultiPoly):
            return None
        if isinstance(value, (int, Fraction, FieldElement)):
            return self.field.elem(value)
        return None

    def __add__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            out = dict(self.terms)
            for mono, c in other.terms.items():
                s = out.get(mono)
                s = c if s is None else s + c
                if s.is_zero:
                    out.pop(mono, None)
                else:
                    out[mono] = s
            return MultiPoly(self.field, self.nvars, out)
        scal = self._coerce_scalar(other)
        if scal is None:
            return NotImplemented
        return self + MultiPoly.const(self.field, self.nvars, scal)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.field, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, MultiPoly):
            return self + (-other)
        scal = self._coerce_scalar(other)
        if scal is None:
            return NotImplemented
        return self + (-scal)

    def __rsub__(self, other):
        scal = self._coerce_scalar(other)
        if scal is None:
            return NotImplemented
        return (-self) + scal

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            out: dict[Monomial, FieldElement] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    c = c1 * c2
                    s = out.get(mono)
                    s = c if s is None else s + c
                    if s.is_zero:
                        out.pop(mono, None)
                    else:
                        out[mono] = s
            return MultiPoly(self.field, self.nvars, out)
        scal = self._coerce_scalar(other)
        if scal is None:
            return NotImplemented
        if scal.is_zero:
            return MultiPoly.zero(self.field, self.nvars)
        return MultiPoly(self.field, self.nvars, {m: c * scal for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = MultiPoly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial(self, i: int) -> "MultiPoly":
        """Partial derivative with respect to variable i."""
        if not 0 <= i < self.nvars:
            raise IndexOutOfRange(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            m2 = mono[:i] + (e - 1,) + mono[i + 1 :]
            out[m2] = c * e if m2 not in out else out[m2] + c * e
        return MultiPoly(self.field, self.nvars, out)

    def coeff_derive(self) -> "MultiPoly":
        """Apply the field derivation to every coefficient."""
        return MultiPoly(self.field, self.nvars, {m: c.derive() for m, c in self.terms.items()})

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not 0 <= i < self.nvars:
            raise IndexOutOfRange(f"variable index {i} out of range for {self.nvars} variables")
        if self.is_zero:
            return -1
        return max(m[i] for m in self.terms)

    def evaluate(self, point: Sequence) -> FieldElement:
        if len(point) != self.nvars:
            raise ArityMismatch(f"point of length {len(point)} for {self.nvars} variables")
        vals = [self.field.elem(v) for v in point]
        total = self.field.zero
        for mono, c in self.terms.items():
            term = c
            for v, e in zip(vals, mono):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def substitute(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute args[i] for variable i; args share a common ring."""
        if len(args) != self.nvars:
            raise ArityMismatch(f"{len(args)} substitutions for {self.nvars} variables")
        if not args:
            return MultiPoly.const(self.field, 0, self.constant_value())
        target = args[0]
        for a in args:
            target._check(a)
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            got = powers.get((i, e))
            if got is None:
                got = args[i] ** e
                powers[(i, e)] = got
            return got

        total = MultiPoly.zero(target.field, target.nvars)
        for mono, c in self.terms.items():
            term = MultiPoly.const(target.field, target.nvars, c)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def embed(self, new_nvars: int, index_map: Sequence[int]) -> "MultiPoly":
        """Rename variable i to index_map[i] inside a ring of new_nvars variables."""
        if len(index_map) != self.nvars:
            raise ArityMismatch("index map length differs from variable count")
        if any(not 0 <= j < new_nvars for j in index_map) or len(set(index_map)) != len(index_map):
            raise IndexOutOfRange("index map is not injective into the new ring")
        out = {}
        for mono, c in self.terms.items():
            m2 = [0] * new_nvars
            for i, e in enumerate(mono):
                m2[index_map[i]] = e
            out[tuple(m2)] = c
        return MultiPoly(self.field, new_nvars, out)

    def lead(self, key=grevlex_key) -> tuple[Monomial, FieldElement]:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=key)
        return mono, self.terms[mono]

    def monic(self, key=grevlex_key) -> "MultiPoly":
        if self.is_zero:
            return self
        _, lc = self.lead(key)
        if lc.is_one:
            return self
        return self * lc.inverse()

    def sorted_terms(self, key=grevlex_key, reverse=True):
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=reverse)

    def _key(self):
        return (self.field.tag, self.nvars, frozenset(self.terms.items()))

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        from .expr import format_poly

        names = tuple(f"x{i}" for i in range(self.nvars))
        return f"MultiPoly({self.field}, {format_poly(self, names)!r})"


def exact_div(p: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Quotient p/d when d divides p exactly."""
    if d.is_zero:
        raise DivisionByZero("polynomial division by zero")
    p._check(d)
    q = MultiPoly.zero(p.field, p.nvars)
    r = p
    dm, dc = d.lead()
    while not r.is_zero:
        rm, rc = r.lead()
        if any(er < ed for er, ed in zip(rm, dm)):
            raise ValueError("polynomial division is not exact")
        mono = tuple(er - ed for er, ed in zip(rm, dm))
        term = MultiPoly(p.field, p.nvars, {mono: rc / dc})
        q = q + term
        r = r - term * d
    return q


def _rec_split(p: MultiPoly) -> dict[int, MultiPoly]:
    """View p as a univariate polynomial in variable 0 over the remaining ring."""
    out: dict[int, dict[Monomial, FieldElement]] = {}
    for mono, c in p.terms.items():
        out.setdefault(mono[0], {})[mono[1:]] = c
    return {d: MultiPoly(p.field, p.nvars - 1, t) for d, t in out.items()}


def _rec_join(field: BaseField, nvars: int, rec: dict[int, MultiPoly]) -> MultiPoly:
    terms = {}
    for d, coeff in rec.items():
        for mono, c in coeff.terms.items():
            terms[(d,) + mono] = c
    return MultiPoly(field, nvars, terms)


def _rec_content(rec: dict[int, MultiPoly]) -> MultiPoly:
    g = None
    for coeff in rec.values():
        g = coeff if g is None else poly_gcd(g, coeff)
    return g


def _rec_primitive(rec: dict[int, MultiPoly], content: MultiPoly) -> dict[int, MultiPoly]:
    return {d: exact_div(c, content) for d, c in rec.items()}


def _rec_prem(A: dict[int, MultiPoly], B: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
    """Pseudo-remainder of A by B in the main variable, up to content."""
    degB = max(B)
    lb = B[degB]
    R = dict(A)
    while R:
        degR = max(R)
        if degR < degB:
            break
        lr = R[degR]
        shifted: dict[int, MultiPoly] = {}
        for d, c in R.items():
            shifted[d] = c * lb
        for d, c in B.items():
            nd = d + degR - degB
            prev = shifted.get(nd)
            val = lr * c
            shifted[nd] = (prev - val) if prev is not None else -val
        R = {d: c for d, c in shifted.items() if not c.is_zero}
    return R


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Gcd normalized to leading coefficient 1 in grevlex order."""
    p._check(q)
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    if p.nvars == 0 or p.is_constant or q.is_constant:
        return MultiPoly.const(p.field, p.nvars, 1)
    A = _rec_split(p)
    B = _rec_split(q)
    ca = _rec_content(A)
    cb = _rec_content(B)
    A = _rec_primitive(A, ca)
    B = _rec_primitive(B, cb)
    while B:
        R = _rec_prem(A, B)
        A = B
        if R:
            content = _rec_content(R)
            B = _rec_primitive(R, content)
        else:
            B = {}
    cont = poly_gcd(ca, cb)
    main = _rec_join(p.field, p.nvars, A)
    result = main * cont.embed(p.nvars, list(range(1, p.nvars)))
    return result.monic()


def reduce_fraction(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Canonical form of num/den: coprime parts, monic denominator."""
    num._check(den)
    if den.is_zero:
        raise IdenticallyZeroDenominator("denominator is the zero polynomial")
    if num.is_zero:
        return num, MultiPoly.const(num.field, num.nvars, 1)
    g = poly_gcd(num, den)
    if not (g.is_constant and g.constant_value().is_one):
        num = exact_div(num, g)
        den = exact_div(den, g)
    _, lc = den.lead()
    if not lc.is_one:
        inv = lc.inverse()
        num = num * inv
        den = den * inv
    return num, den


def _subst_rational(
    p: MultiPoly, nums: Sequence[MultiPoly], dens: Sequence[MultiPoly]
) -> tuple[MultiPoly, MultiPoly]:
    """Evaluate p at the rational tuple nums/dens by clearing denominators.

    Returns (N, D) with p(nums/dens) = N/D and D a product of the dens.
    """
    if len(nums) != p.nvars:
        raise ArityMismatch(f"{len(nums)} arguments for {p.nvars} variables")
    if p.nvars == 0:
        raise ArityMismatch("substitution into a ring with no variables")
    target = nums[0]
    field, tn = target.field, target.nvars
    degs = [p.degree_in(i) for i in range(p.nvars)]
    degs = [max(d, 0) for d in degs]
    one = MultiPoly.const(field, tn, 1)
    D = one
    for d, dpoly in zip(degs, dens):
        if d:
            D = D * dpoly**d
    powers: dict[tuple[str, int, int], MultiPoly] = {}

    def power(tag: str, polys, i: int, e: int) -> MultiPoly:
        got = powers.get((tag, i, e))
        if got is None:
            got = polys[i] ** e
            powers[(tag, i, e)] = got
        return got

    N = MultiPoly.zero(field, tn)
    for mono, c in p.terms.items():
        term = MultiPoly.const(field, tn, c)
        for i, e in enumerate(mono):
            if e:
                term = term * power("n", nums, i, e)
            rest = degs[i] - e
            if rest:
                term = term * power("d", dens, i, rest)
        N = N + term
    return N, D


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map K^in_arity -> K^out_arity, one MultiPoly per output."""

    field: BaseField
    in_arity: int
    components: tuple[MultiPoly, ...]

    def __post_init__(self):
        for c in self.components:
            if c.field != self.field:
                raise ValueError("component field differs from map field")
            if c.nvars != self.in_arity:
                raise ArityMismatch(f"component in {c.nvars} variables, expected {self.in_arity}")

    @property
    def out_arity(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, field: BaseField, n: int) -> "PolyMap":
        return cls(field, n, tuple(MultiPoly.var(field, n, i) for i in range(n)))

    def evaluate(self, point: Sequence) -> tuple[FieldElement, ...]:
        return tuple(c.evaluate(point) for c in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self after inner."""
        if inner.out_arity != self.in_arity:
            raise ArityMismatch(
                f"inner map produces {inner.out_arity} values, outer expects {self.in_arity}"
            )
        comps = tuple(c.substitute(inner.components) for c in self.components)
        return PolyMap(self.field, inner.in_arity, comps)

    def jacobian(self) -> tuple[tuple[MultiPoly, ...], ...]:
        """Row i holds the partials of component i."""
        return tuple(
            tuple(c.partial(j) for j in range(self.in_arity)) for c in self.components
        )

    def coeff_derive(self) -> "PolyMap":
        return PolyMap(self.field, self.in_arity, tuple(c.coeff_derive() for c in self.components))

    def permute_inputs(self, new_index_of_old: Sequence[int]) -> "PolyMap":
        comps = tuple(c.embed(self.in_arity, new_index_of_old) for c in self.components)
        return PolyMap(self.field, self.in_arity, comps)

    def embed_inputs(self, new_arity: int, index_map: Sequence[int]) -> "PolyMap":
        """View the map as a function of a larger variable tuple."""
        comps = tuple(c.embed(new_arity, index_map) for c in self.components)
        return PolyMap(self.field, new_arity, comps)

    def as_rational(self) -> "RationalMap":
        one = MultiPoly.const(self.field, self.in_arity, 1)
        return RationalMap(self.field, self.in_arity, tuple((c, one) for c in self.components))


@dataclass(frozen=True)
class RationalMap:
    """Rational map with canonical (numerator, denominator) components."""

    field: BaseField
    in_arity: int
    components: tuple[tuple[MultiPoly, MultiPoly], ...]

    def __post_init__(self):
        canon = []
        for num, den in self.components:
            if num.field != self.field or den.field != self.field:
                raise ValueError("component field differs from map field")
            if num.nvars != self.in_arity or den.nvars != self.in_arity:
                raise ArityMismatch("component arity differs from map arity")
            canon.append(reduce_fraction(num, den))
        object.__setattr__(self, "components", tuple(canon))

    @property
    def out_arity(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, field: BaseField, n: int) -> "RationalMap":
        return PolyMap.identity(field, n).as_rational()

    @classmethod
    def coerce(cls, m) -> "RationalMap":
        return m.as_rational() if isinstance(m, PolyMap) else m

    def as_rational(self) -> "RationalMap":
        return self

    def is_polynomial(self) -> bool:
        return all(den.is_constant for _, den in self.components)

    def as_polymap(self) -> PolyMap:
        if not self.is_polynomial():
            raise ValueError("map has nonconstant denominators")
        comps = []
        for num, den in self.components:
            c = den.constant_value()
            comps.append(num if c.is_one else num * c.inverse())
        return PolyMap(self.field, self.in_arity, tuple(comps))

    def evaluate(self, point: Sequence) -> tuple[FieldElement, ...]:
        out = []
        for num, den in self.components:
            dv = den.evaluate(point)
            if dv.is_zero:
                raise DenominatorVanishes("denominator vanishes at the point")
            out.append(num.evaluate(point) / dv)
        return tuple(out)

    def compose(self, inner) -> "RationalMap":
        """self after inner."""
        inner = RationalMap.coerce(inner)
        if inner.out_arity != self.in_arity:
            raise ArityMismatch(
                f"inner map produces {inner.out_arity} values, outer expects {self.in_arity}"
            )
        nums = [n for n, _ in inner.components]
        dens = [d for _, d in inner.components]
        comps = []
        for pnum, pden in self.components:
            n1, d1 = _subst_rational(pnum, nums, dens)
            n2, d2 = _subst_rational(pden, nums, dens)
            num, den = n1 * d2, d1 * n2
            if den.is_zero:
                raise IdenticallyZeroDenominator(
                    "denominator vanishes identically after composition"
                )
            comps.append((num, den))
        return RationalMap(self.field, inner.in_arity, tuple(comps))

    def permute_inputs(self, new_index_of_old: Sequence[int]) -> "RationalMap":
        comps = tuple(
            (n.embed(self.in_arity, new_index_of_old), d.embed(self.in_arity, new_index_of_old))
            for n, d in self.components
        )
        return RationalMap(self.field, self.in_arity, comps)

    def embed_inputs(self, new_arity: int, index_map: Sequence[int]) -> "RationalMap":
        """View the map as a function of a larger variable tuple."""
        comps = tuple(
            (n.embed(new_arity, index_map), d.embed(new_arity, index_map))
            for n, d in self.components
        )
        return RationalMap(self.field, new_arity, comps)

    def equiv(self, other: "RationalMap") -> bool:
        """Componentwise equality by cross multiplication."""
        other = RationalMap.coerce(other)
        if self.out_arity != other.out_arity or self.in_arity != other.in_arity:
            return False
        for (n1, d1), (n2, d2) in zip(self.components, other.components):
            if not (n1 * d2 - n2 * d1).is_zero:
                return False
        return True


def map_product(f, g):
    """Block product: (f x g)(x, y) = (f(x), g(y))."""
    fr = RationalMap.coerce(f)
    gr = RationalMap.coerce(g)
    if fr.field != gr.field:
        raise ValueError("mixed fields in product")
    n = fr.in_arity + gr.in_arity
    left = list(range(fr.in_arity))
    right = list(range(fr.in_arity, n))
    comps = [(num.embed(n, left), den.embed(n, left)) for num, den in fr.components]
    comps += [(num.embed(n, right), den.embed(n, right)) for num, den in gr.components]
    out = RationalMap(fr.field, n, tuple(comps))
    if isinstance(f, PolyMap) and isinstance(g, PolyMap):
        return out.as_polymap()
    return out
