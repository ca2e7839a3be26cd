"""Exact-arithmetic prolongation calculus for affine varieties and groups.

The package computes with polynomials and rational maps over Q or Q(t),
builds tangent and twisted prolongations of varieties, maps, atlases, and
algebraic groups, verifies D-group sections with Groebner certificates,
transfers prolongation fibres along correspondences, and integrates section
flows in truncated power series.
"""

from .errors import (
    ArityMismatch,
    ChartIncompatibility,
    CocycleViolation,
    DegreeCapExceeded,
    DenominatorVanishes,
    DenominatorVanishesAtInitialPoint,
    DivisionByZero,
    ExprSyntaxError,
    IdenticallyZeroDenominator,
    IndeterminateOnVariety,
    IndexOutOfRange,
    ModelError,
    NonUnitConstantTerm,
    NoSolution,
    PointNotOnVariety,
    ProlongError,
    TInQField,
    TransferNotFunctional,
    UnknownVariable,
)
from .field import Q, QT, BaseField, FieldElement
from .poly import MultiPoly, PolyMap, RationalMap, grevlex_key, map_product, poly_gcd
from .expr import (
    format_element,
    format_poly,
    format_rational,
    parse_element,
    parse_point,
    parse_poly,
    parse_rational,
)
from .groebner import (
    DEFAULT_ORDER,
    GroebnerBasis,
    IdealBasis,
    TermOrder,
    buchberger,
    equal_mod_ideal,
    is_groebner,
    normal_form,
)
from .linalg import AffineMap, affine_subspace_equal, in_span, rank, rref, solve_affine
from .reporting import CheckEntry, CheckReport
from .prolongation import (
    AffineFiberDescription,
    AffineVariety,
    Correspondence,
    FiberPoint,
    FiberTransfer,
    ProlongedVariety,
    check_nabla_in_tau,
    correspondence_transfer,
    derive_point,
    f_del,
    fiber_names,
    fiber_solve,
    nabla,
    product_variety,
    tangent_map,
    tangent_variety,
    tau_map,
    tau_variety,
)
from .atlas import (
    AtlasManifold,
    ChartwiseMap,
    ProlongedAtlas,
    check_cocycle,
    check_sigma_compatibility,
    prolong_map_between_atlases,
    sample_point,
    sigma_pointwise,
    tangent_atlas,
    tau_atlas,
    verify_chartwise_map,
)
from .dgroup import (
    AffineAlgGroup,
    DGroup,
    DGroupSection,
    TauGroup,
    check_dgroup,
    check_group_axioms,
    dpoint_check,
    nabla_hom_check,
    stacked_names,
    tau_group,
    zero_section_T,
)
from .series import (
    SeriesPoint,
    TruncSeries,
    element_to_series,
    map_on_series,
    poly_on_series,
    solve_dpoint,
    variety_residuals,
    verify_on_variety,
)
from .model import Model, ModelMap, ModelSection, load_model, load_model_file

__version__ = "0.1.0"

__all__ = [
    "AffineAlgGroup",
    "AffineFiberDescription",
    "AffineMap",
    "AffineVariety",
    "ArityMismatch",
    "AtlasManifold",
    "BaseField",
    "ChartIncompatibility",
    "ChartwiseMap",
    "CheckEntry",
    "CheckReport",
    "CocycleViolation",
    "Correspondence",
    "DEFAULT_ORDER",
    "DGroup",
    "DGroupSection",
    "DegreeCapExceeded",
    "DenominatorVanishes",
    "DenominatorVanishesAtInitialPoint",
    "DivisionByZero",
    "ExprSyntaxError",
    "FieldElement",
    "FiberPoint",
    "FiberTransfer",
    "GroebnerBasis",
    "IdealBasis",
    "IdenticallyZeroDenominator",
    "IndeterminateOnVariety",
    "IndexOutOfRange",
    "Model",
    "ModelError",
    "ModelMap",
    "ModelSection",
    "MultiPoly",
    "NoSolution",
    "NonUnitConstantTerm",
    "PointNotOnVariety",
    "PolyMap",
    "ProlongError",
    "ProlongedAtlas",
    "ProlongedVariety",
    "Q",
    "QT",
    "RationalMap",
    "SeriesPoint",
    "TInQField",
    "TauGroup",
    "TermOrder",
    "TransferNotFunctional",
    "TruncSeries",
    "UnknownVariable",
    "affine_subspace_equal",
    "buchberger",
    "check_cocycle",
    "check_dgroup",
    "check_group_axioms",
    "check_nabla_in_tau",
    "check_sigma_compatibility",
    "correspondence_transfer",
    "derive_point",
    "dpoint_check",
    "element_to_series",
    "equal_mod_ideal",
    "f_del",
    "fiber_names",
    "fiber_solve",
    "format_element",
    "format_poly",
    "format_rational",
    "grevlex_key",
    "in_span",
    "is_groebner",
    "load_model",
    "load_model_file",
    "map_on_series",
    "map_product",
    "nabla",
    "nabla_hom_check",
    "normal_form",
    "parse_element",
    "parse_point",
    "parse_poly",
    "parse_rational",
    "poly_gcd",
    "poly_on_series",
    "product_variety",
    "prolong_map_between_atlases",
    "rank",
    "rref",
    "sample_point",
    "sigma_pointwise",
    "solve_affine",
    "solve_dpoint",
    "stacked_names",
    "tangent_atlas",
    "tangent_map",
    "tangent_variety",
    "tau_atlas",
    "tau_group",
    "tau_map",
    "tau_variety",
    "variety_residuals",
    "verify_chartwise_map",
    "verify_on_variety",
    "zero_section_T",
]
