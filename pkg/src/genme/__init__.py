"""Contrastive near-miss explanations for clausal theories."""

from .engine import (
    ArityError,
    SafetyError,
    StratificationError,
    Theory,
    TheoryError,
    constants_of,
    models_literal,
    models_literal_set,
    stratify,
)
from .explanation import (
    LocalExplanation,
    NotPositiveError,
    TemplateError,
    local_explanations,
    parse_templates,
    render_explanation,
)
from .parser import (
    ConfigError,
    ParseError,
    RunConfig,
    parse_atom,
    parse_config,
    parse_ground_atom,
    parse_theory,
    serialize_clause,
)
from .rewrite import (
    LiftedClause,
    RewritingFilter,
    lift_constants,
    minimally_changed_clause,
    rename,
    valid_literal_sets,
)
from .search import (
    DegreeMatch,
    NearMissExplanation,
    NearMissFamily,
    genme,
    minimal_degree_search,
    near_miss_candidates,
    substitution_distance,
)
from .terms import (
    Clause,
    Constant,
    GenmeError,
    GroundnessError,
    Literal,
    Substitution,
    Variable,
    apply_substitution,
    atom,
    match_atom,
)

__version__ = "0.1.0"
