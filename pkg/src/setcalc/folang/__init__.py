"""First-order formulas over ∈ and =: syntax, evaluation, code translation."""

from .library import BUILTIN_NAMES, builtin_arguments, builtin_formula, direct_relation
from .parser import parse_formula
from .semantics import (
    Structure,
    TruthTables,
    evaluate,
    h_structure,
    hf_structure,
    mk_structure,
    truth_table,
    v_structure,
)
from .syntax import (
    OMEGA,
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Mem,
    Not,
    Or,
    Plus,
    Suitable,
    free_vars,
    is_delta0,
    normalize,
    print_formula,
    quantifier_depth,
    size,
)
from .translate import translate, unbound

__all__ = [
    "BUILTIN_NAMES",
    "OMEGA",
    "And",
    "BoundedExists",
    "BoundedForall",
    "Eq",
    "Exists",
    "Forall",
    "Formula",
    "Implies",
    "Mem",
    "Not",
    "Or",
    "Plus",
    "Structure",
    "Suitable",
    "TruthTables",
    "builtin_arguments",
    "builtin_formula",
    "direct_relation",
    "evaluate",
    "free_vars",
    "h_structure",
    "hf_structure",
    "is_delta0",
    "mk_structure",
    "normalize",
    "parse_formula",
    "print_formula",
    "quantifier_depth",
    "size",
    "translate",
    "truth_table",
    "unbound",
    "v_structure",
]
