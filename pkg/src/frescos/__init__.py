"""Exact symbolic computation with frescos (monogenic geometric (a,b)-modules)."""

__version__ = "0.1.0"

from .series import SeriesB, rat, series_arith, solve_resonant_ode, DEFAULT_ORDER
from .algebra import (
    AbElement,
    check_exchange,
    check_middle_unit_exchange,
    check_unit_exchange,
    expand_factor_form,
    initial_form,
    left_divide,
    monicize,
    normal_form_mul,
)
from .fresco import (
    AdaptedModel,
    BernsteinData,
    ModuleElement,
    Presentation,
    bernstein,
    default_model_order,
    fundamental_invariants,
    regenerate_presentation,
    sub_quotient,
    trivial_units,
    twist,
    validate_presentation,
)
from .oracle import (
    TruncatedRep,
    minimal_annihilator,
    span_closure,
    submodule_analysis,
    truncate_rep,
)
from .alpha import (
    Rank2Class,
    ThemeClass,
    alpha_invariant,
    classify_rank2,
    is_semisimple,
    quotient_theme_class,
    rank3_alpha_formula,
    subtheme_class,
)
from .xi import (
    XiExpansion,
    XiSpan,
    model_from_xi,
    xi_exponent_split,
    xi_generate_module,
    xi_log_filtration,
)
from .dsl import from_json, parse_dsl, print_fresco, print_xi, to_json
from .errors import EngineError

__all__ = [
    "SeriesB",
    "rat",
    "series_arith",
    "solve_resonant_ode",
    "DEFAULT_ORDER",
    "AbElement",
    "check_exchange",
    "check_middle_unit_exchange",
    "check_unit_exchange",
    "expand_factor_form",
    "initial_form",
    "left_divide",
    "monicize",
    "normal_form_mul",
    "AdaptedModel",
    "BernsteinData",
    "ModuleElement",
    "Presentation",
    "bernstein",
    "default_model_order",
    "fundamental_invariants",
    "regenerate_presentation",
    "sub_quotient",
    "trivial_units",
    "twist",
    "validate_presentation",
    "TruncatedRep",
    "minimal_annihilator",
    "span_closure",
    "submodule_analysis",
    "truncate_rep",
    "Rank2Class",
    "ThemeClass",
    "alpha_invariant",
    "classify_rank2",
    "is_semisimple",
    "quotient_theme_class",
    "rank3_alpha_formula",
    "subtheme_class",
    "XiExpansion",
    "XiSpan",
    "model_from_xi",
    "xi_exponent_split",
    "xi_generate_module",
    "xi_log_filtration",
    "from_json",
    "parse_dsl",
    "print_fresco",
    "print_xi",
    "to_json",
    "EngineError",
    "__version__",
]
