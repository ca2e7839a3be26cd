"""Groebner bases over the exact base fields.

Buchberger's algorithm with the coprime-leading-term skip, a selectable
pair strategy, and a hard total-degree cap that aborts runaway
computations.  Resulting bases are reduced, monic, and sorted by leading
monomial, so equal ideals yield identical bases for a fixed term order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ArityMismatch, DegreeCapExceeded
from .poly import Monomial, MultiPoly, grevlex_key


@dataclass(frozen=True)
class TermOrder:
    """Monomial order: grevlex or lex, after an optional variable priority.

    priority lists variable indices from most to least significant; when
    given, exponents are permuted into that significance order before the
    base comparison applies.
    """

    kind: str = "grevlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.priority is not None:
            object.__setattr__(self, "priority", tuple(self.priority))
            if sorted(self.priority) != list(range(len(self.priority))):
                raise ValueError("priority must be a permutation of the variable indices")

    def key(self, mono: Monomial):
        if self.priority is not None:
            if len(self.priority) != len(mono):
                raise ArityMismatch("priority permutation length differs from variable count")
            mono = tuple(mono[i] for i in self.priority)
        if self.kind == "lex":
            return mono
        return grevlex_key(mono)


DEFAULT_ORDER = TermOrder()


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(ea <= eb for ea, eb in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(ea, eb) for ea, eb in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(min(ea, eb) == 0 for ea, eb in zip(a, b))


@dataclass(frozen=True)
class IdealBasis:
    """A finite generating set inside a fixed polynomial ring."""

    nvars: int
    gens: tuple[MultiPoly, ...]

    @classmethod
    def make(cls, gens: Sequence[MultiPoly], nvars: int | None = None) -> "IdealBasis":
        gens = tuple(g for g in gens if not g.is_zero)
        if nvars is None:
            if not gens:
                raise ValueError("cannot infer the ambient ring from an empty basis")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise ArityMismatch("generators live in different rings")
        return cls(nvars, gens)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic basis for a fixed term order."""

    order: TermOrder
    nvars: int
    gens: tuple[MultiPoly, ...]


def reduce_full(
    p: MultiPoly,
    gens: Sequence[MultiPoly],
    order: TermOrder = DEFAULT_ORDER,
    degree_cap: int | None = None,
) -> MultiPoly:
    """Full remainder of p under multivariate division by gens."""
    key = order.key
    remainder = MultiPoly.zero(p.field, p.nvars)
    h = p
    leads = [(g.lead(key), g) for g in gens if not g.is_zero]
    while not h.is_zero:
        if degree_cap is not None and h.total_degree() > degree_cap:
            raise DegreeCapExceeded(
                f"intermediate degree {h.total_degree()} exceeds cap {degree_cap}"
            )
        hm, hc = h.lead(key)
        for (gm, gc), g in leads:
            if _divides(gm, hm):
                mono = tuple(eh - eg for eh, eg in zip(hm, gm))
                h = h - MultiPoly(h.field, h.nvars, {mono: hc / gc}) * g
                break
        else:
            term = MultiPoly(h.field, h.nvars, {hm: hc})
            remainder = remainder + term
            h = h - term
    return remainder


def _s_polynomial(f: MultiPoly, g: MultiPoly, order: TermOrder) -> MultiPoly:
    fm, fc = f.lead(order.key)
    gm, gc = g.lead(order.key)
    lcm = _lcm(fm, gm)
    mf = tuple(l - e for l, e in zip(lcm, fm))
    mg = tuple(l - e for l, e in zip(lcm, gm))
    tf = MultiPoly(f.field, f.nvars, {mf: fc.inverse()})
    tg = MultiPoly(g.field, g.nvars, {mg: gc.inverse()})
    return tf * f - tg * g


def buchberger(
    gens,
    order: TermOrder = DEFAULT_ORDER,
    degree_cap: int = 40,
    strategy: str = "normal",
) -> GroebnerBasis:
    """Compute the reduced Groebner basis of the ideal generated by gens.

    strategy 'normal' picks the pair with the lowest lcm total degree
    (ties by age); 'fifo' processes pairs in creation order.
    """
    if strategy not in ("normal", "fifo"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if isinstance(gens, IdealBasis):
        nvars = gens.nvars
        polys = list(gens.gens)
    else:
        polys = [g for g in gens if not g.is_zero]
        if not polys:
            raise ValueError("cannot infer the ambient ring from an empty basis")
        nvars = polys[0].nvars
        for g in polys:
            if g.nvars != nvars:
                raise ArityMismatch("generators live in different rings")
    if not polys:
        return GroebnerBasis(order, nvars, ())
    for g in polys:
        if g.total_degree() > degree_cap:
            raise DegreeCapExceeded(
                f"generator degree {g.total_degree()} exceeds cap {degree_cap}"
            )
    key = order.key
    basis = [g.monic(key) for g in polys]
    pairs: list[tuple[int, int]] = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            pairs.append((i, j))

    def pick() -> tuple[int, int]:
        if strategy == "fifo":
            return pairs.pop(0)
        best = min(
            range(len(pairs)),
            key=lambda k: (
                sum(_lcm(basis[pairs[k][0]].lead(key)[0], basis[pairs[k][1]].lead(key)[0])),
                pairs[k],
            ),
        )
        return pairs.pop(best)

    while pairs:
        i, j = pick()
        fm = basis[i].lead(key)[0]
        gm = basis[j].lead(key)[0]
        if _coprime(fm, gm):
            continue
        s = _s_polynomial(basis[i], basis[j], order)
        h = reduce_full(s, basis, order, degree_cap)
        if h.is_zero:
            continue
        if h.total_degree() > degree_cap:
            raise DegreeCapExceeded(
                f"basis element degree {h.total_degree()} exceeds cap {degree_cap}"
            )
        h = h.monic(key)
        basis.append(h)
        new_index = len(basis) - 1
        for k in range(new_index):
            pairs.append((k, new_index))

    # Minimal basis: drop elements whose lead is divisible by another lead.
    keep: list[MultiPoly] = []
    for i, g in enumerate(basis):
        gm = g.lead(key)[0]
        redundant = False
        for j, other in enumerate(basis):
            if i == j:
                continue
            om = other.lead(key)[0]
            if _divides(om, gm) and (om != gm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    # Reduced basis: each element fully reduced against the others.
    reduced: list[MultiPoly] = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        r = reduce_full(g, others, order, degree_cap) if others else g
        if not r.is_zero:
            reduced.append(r.monic(key))
    reduced.sort(key=lambda g: key(g.lead(key)[0]))
    return GroebnerBasis(order, nvars, tuple(reduced))


def normal_form(p: MultiPoly, gb: GroebnerBasis, degree_cap: int | None = None) -> MultiPoly:
    if p.nvars != gb.nvars:
        raise ArityMismatch(f"polynomial in {p.nvars} variables, basis in {gb.nvars}")
    if not gb.gens:
        return p
    return reduce_full(p, gb.gens, gb.order, degree_cap)


def equal_mod_ideal(p: MultiPoly, q: MultiPoly, gb: GroebnerBasis) -> bool:
    return normal_form(p - q, gb).is_zero


def is_groebner(gens: Sequence[MultiPoly], order: TermOrder = DEFAULT_ORDER) -> bool:
    """Check Buchberger's criterion: every S-polynomial reduces to zero."""
    polys = [g for g in gens if not g.is_zero]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = _s_polynomial(polys[i], polys[j], order)
            if not reduce_full(s, polys, order).is_zero:
                return False
    return True
