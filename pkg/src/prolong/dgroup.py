"""Affine algebraic groups, their tau prolongations, and D-group checks.

Groups are presented as affine varieties with rational multiplication
and inverse; all identities are certified modulo Groebner bases of the
(stacked) defining ideals.  Identities between rational expressions are
compared after cross multiplication, and a cleared denominator that
vanishes identically on the variety raises IndeterminateOnVariety.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Sequence

from .errors import (
    ArityMismatch,
    DenominatorVanishes,
    IndeterminateOnVariety,
    ProlongError,
)
from .field import FieldElement
from .groebner import DEFAULT_ORDER, GroebnerBasis, TermOrder, buchberger, normal_form
from .poly import MultiPoly, RationalMap, _subst_rational, map_product
from .prolongation import (
    AffineVariety,
    derive_point,
    tau_map,
    tau_variety,
)
from .reporting import CheckReport


def stacked_names(names: Sequence[str], copies: int) -> tuple[str, ...]:
    """x, y -> x1, y1, x2, y2, ... for identity witnesses in product rings."""
    out = []
    for k in range(1, copies + 1):
        out.extend(f"{n}{k}" for n in names)
    return tuple(out)


def _stacked_gb(
    v: AffineVariety, copies: int, order: TermOrder, degree_cap: int
) -> GroebnerBasis:
    n = v.nvars
    total = copies * n
    gens = []
    for k in range(copies):
        offset = k * n
        gens.extend(g.embed(total, list(range(offset, offset + n))) for g in v.gens)
    if not gens:
        return GroebnerBasis(order, total, ())
    return buchberger(gens, order, degree_cap)


@dataclass(eq=False)
class AffineAlgGroup:
    """Group law on an affine variety: mult is 2n -> n, inv is n -> n."""

    name: str
    variety: AffineVariety
    mult: RationalMap
    inv: RationalMap
    identity: tuple[FieldElement, ...]
    _axiom_report: CheckReport | None = dataclass_field(default=None, repr=False)

    def __post_init__(self):
        self.mult = RationalMap.coerce(self.mult)
        self.inv = RationalMap.coerce(self.inv)
        n = self.variety.nvars
        if self.mult.in_arity != 2 * n or self.mult.out_arity != n:
            raise ArityMismatch(f"mult must map 2*{n} variables to {n}")
        if self.inv.in_arity != n or self.inv.out_arity != n:
            raise ArityMismatch(f"inv must map {n} variables to {n}")
        self.identity = self.variety.coerce_point(self.identity)

    @property
    def nvars(self) -> int:
        return self.variety.nvars


def _const_map(v: AffineVariety, values: Sequence[FieldElement]) -> RationalMap:
    n = v.nvars
    one = MultiPoly.const(v.field, n, 1)
    return RationalMap(
        v.field, n, tuple((MultiPoly.const(v.field, n, c), one) for c in values)
    )


def _graph_map(v: AffineVariety, second: RationalMap) -> RationalMap:
    """x -> (x, second(x)) as a rational map n -> 2n."""
    n = v.nvars
    one = MultiPoly.const(v.field, n, 1)
    comps = [(MultiPoly.var(v.field, n, i), one) for i in range(n)]
    comps += list(second.components)
    return RationalMap(v.field, n, tuple(comps))


def _compare_components(
    report: CheckReport,
    label: str,
    lhs: RationalMap,
    rhs: RationalMap,
    gb: GroebnerBasis,
    names: Sequence[str],
    degree_cap: int,
) -> None:
    from .expr import format_poly

    for k, ((ln, ld), (rn, rd)) in enumerate(zip(lhs.components, rhs.components)):
        for den in (ld, rd):
            if not den.is_constant and normal_form(den, gb, degree_cap).is_zero:
                raise IndeterminateOnVariety(
                    f"{label}: a cleared denominator vanishes identically on the variety"
                )
        witness = normal_form(rn * ld - ln * rd, gb, degree_cap)
        ok = witness.is_zero
        report.add(
            f"{label}: component {k}",
            ok,
            None if ok else format_poly(witness, names),
        )


def check_group_axioms(
    g: AffineAlgGroup, degree_cap: int = 40, order: TermOrder = DEFAULT_ORDER
) -> CheckReport:
    """Identity, inverse, and associativity modulo the stacked variety ideals."""
    if g._axiom_report is not None:
        return g._axiom_report
    v = g.variety
    n = v.nvars
    report = CheckReport()
    report.add("identity point on variety", v.contains(g.identity))
    gb1 = _stacked_gb(v, 1, order, degree_cap)
    ident = RationalMap.identity(v.field, n)
    e_map = _const_map(v, g.identity)
    left = g.mult.compose(_graph_map_swap(v, e_map))
    _compare_components(report, "left identity", left, ident, gb1, v.var_names, degree_cap)
    right = g.mult.compose(_graph_map(v, e_map))
    _compare_components(report, "right identity", right, ident, gb1, v.var_names, degree_cap)
    inverse = g.mult.compose(_graph_map(v, g.inv))
    _compare_components(report, "inverse", inverse, e_map, gb1, v.var_names, degree_cap)
    gb3 = _stacked_gb(v, 3, order, degree_cap)
    names3 = stacked_names(v.var_names, 3)
    idn = RationalMap.identity(v.field, n)
    left_assoc = g.mult.compose(map_product(g.mult, idn))
    right_assoc = g.mult.compose(map_product(idn, g.mult))
    _compare_components(
        report, "associativity", left_assoc, right_assoc, gb3, names3, degree_cap
    )
    g._axiom_report = report
    return report


def _graph_map_swap(v: AffineVariety, first: RationalMap) -> RationalMap:
    """x -> (first(x), x) as a rational map n -> 2n."""
    n = v.nvars
    one = MultiPoly.const(v.field, n, 1)
    comps = list(first.components)
    comps += [(MultiPoly.var(v.field, n, i), one) for i in range(n)]
    return RationalMap(v.field, n, tuple(comps))


@dataclass(eq=False)
class TauGroup:
    """The prolonged group on tau(V) with multiplication tau(m)."""

    base: AffineAlgGroup
    group: AffineAlgGroup

    @property
    def variety(self) -> AffineVariety:
        return self.group.variety

    @property
    def mult(self) -> RationalMap:
        return self.group.mult

    @property
    def identity(self) -> tuple[FieldElement, ...]:
        return self.group.identity


def _interleave_permutation(n: int) -> list[int]:
    """Input reorder of tau(m): (x, y, u, v) blocks to ((x, u), (y, v))."""
    perm = [0] * (4 * n)
    for k in range(n):
        perm[k] = k
        perm[n + k] = 2 * n + k
        perm[2 * n + k] = n + k
        perm[3 * n + k] = 3 * n + k
    return perm


def tau_group(
    g: AffineAlgGroup, degree_cap: int = 40, order: TermOrder = DEFAULT_ORDER
) -> TauGroup:
    """Prolong the group law; re-verifies the axioms on the output."""
    axioms = check_group_axioms(g, degree_cap, order)
    if not axioms.ok:
        bad = [e.name for e in axioms.entries if not e.ok]
        raise ValueError(f"group axioms fail for {g.name}: {', '.join(bad)}")
    n = g.nvars
    total = tau_variety(g.variety).total
    tmult = tau_map(g.mult).permute_inputs(_interleave_permutation(n))
    tinv = tau_map(g.inv)
    tidentity = g.identity + derive_point(g.identity)
    out = AffineAlgGroup(f"tau({g.name})", total, tmult, tinv, tidentity)
    head = RationalMap(g.variety.field, 4 * n, tuple(tmult.components[:n]))
    base_on_xy = g.mult.embed_inputs(4 * n, list(range(n)) + list(range(2 * n, 3 * n)))
    if not head.equiv(base_on_xy):
        raise ProlongError("projection of the prolonged multiplication differs from the base law")
    re_report = check_group_axioms(out, degree_cap, order)
    if not re_report.ok:
        bad = [e.name for e in re_report.entries if not e.ok]
        raise ProlongError(f"prolonged group fails re-verification: {', '.join(bad)}")
    return TauGroup(g, out)


@dataclass(frozen=True)
class DGroupSection:
    """Fibre half of a candidate section s(g) = (g, sigma(g))."""

    sigma: RationalMap


@dataclass
class DGroup:
    """A group with a candidate D-group section and its verification report."""

    group: AffineAlgGroup
    section: DGroupSection
    verified: CheckReport | None = None


def zero_section_T(g: AffineAlgGroup) -> DGroupSection:
    """sigma = 0: the canonical section of T(G) over a constant field."""
    n = g.nvars
    zero = MultiPoly.zero(g.variety.field, n)
    one = MultiPoly.const(g.variety.field, n, 1)
    return DGroupSection(RationalMap(g.variety.field, n, ((zero, one),) * n))


def check_dgroup(
    g: AffineAlgGroup,
    s: DGroupSection,
    degree_cap: int = 40,
    order: TermOrder = DEFAULT_ORDER,
) -> CheckReport:
    """Section condition into tau(V) and the homomorphism condition for sigma.

    Requires the group axioms to hold; verify those first with
    check_group_axioms.
    """
    from .expr import format_poly

    axioms = check_group_axioms(g, degree_cap, order)
    if not axioms.ok:
        bad = [e.name for e in axioms.entries if not e.ok]
        raise ValueError(f"group axioms fail for {g.name}: {', '.join(bad)}")
    v = g.variety
    n = v.nvars
    sigma = RationalMap.coerce(s.sigma)
    if sigma.in_arity != n or sigma.out_arity != n:
        raise ArityMismatch(f"sigma must map {n} variables to {n}")
    report = CheckReport()
    try:
        sigma.evaluate(g.identity)
        report.add("sigma defined at identity", True)
    except DenominatorVanishes:
        report.add("sigma defined at identity", False, "denominator vanishes at e")
    gb1 = _stacked_gb(v, 1, order, degree_cap)
    one = MultiPoly.const(v.field, n, 1)
    nums = [MultiPoly.var(v.field, n, i) for i in range(n)] + [p for p, _ in sigma.components]
    dens = [one] * n + [q for _, q in sigma.components]
    tau_total = tau_variety(v).total
    for idx, gen in enumerate(tau_total.gens):
        num, den = _subst_rational(gen, nums, dens)
        if not den.is_constant and normal_form(den, gb1, degree_cap).is_zero:
            raise IndeterminateOnVariety(
                "section check: a cleared denominator vanishes identically on the variety"
            )
        witness = normal_form(num, gb1, degree_cap)
        ok = witness.is_zero
        report.add(
            f"section: generator {idx}",
            ok,
            None if ok else format_poly(witness, v.var_names),
        )
    gb2 = _stacked_gb(v, 2, order, degree_cap)
    names2 = stacked_names(v.var_names, 2)
    lhs = sigma.compose(g.mult)
    send = _sections_map(v, sigma)
    full = tau_map(g.mult).compose(send)
    rhs = RationalMap(v.field, 2 * n, tuple(full.components[n:]))
    _compare_components(report, "homomorphism", lhs, rhs, gb2, names2, degree_cap)
    return report


def _sections_map(v: AffineVariety, sigma: RationalMap) -> RationalMap:
    """(x, y) -> (x, y, sigma(x), sigma(y)) into the tau(m) input layout."""
    n = v.nvars
    one = MultiPoly.const(v.field, 2 * n, 1)
    comps = [(MultiPoly.var(v.field, 2 * n, i), one) for i in range(2 * n)]
    x_block = list(range(n))
    y_block = list(range(n, 2 * n))
    comps += [(p.embed(2 * n, x_block), q.embed(2 * n, x_block)) for p, q in sigma.components]
    comps += [(p.embed(2 * n, y_block), q.embed(2 * n, y_block)) for p, q in sigma.components]
    return RationalMap(v.field, 2 * n, tuple(comps))


def nabla_hom_check(g: AffineAlgGroup, a: Sequence, b: Sequence) -> bool:
    """nabla(m(a,b)) = tau(m)(nabla a, nabla b) at the given points."""
    pa = g.variety.require_point(a)
    pb = g.variety.require_point(b)
    c = g.mult.evaluate(pa + pb)
    expected = c + derive_point(c)
    got = tau_map(g.mult).evaluate(pa + pb + derive_point(pa) + derive_point(pb))
    return got == expected


def dpoint_check(d: DGroup, point: Sequence) -> bool:
    """Whether sigma(g) = dg, the sharp-point condition."""
    pg = d.group.variety.require_point(point)
    sigma = RationalMap.coerce(d.section.sigma)
    return sigma.evaluate(pg) == derive_point(pg)
