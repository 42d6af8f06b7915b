"""Exact computation in automaton (semi)groups."""

from .errors import AutomatonError, BudgetExceeded, NotInvertibleError, ParseError
from .mealy import (
    MealyMachine,
    ValidationReport,
    act,
    invert_machine,
    power_product,
    run,
    step,
    validate,
)
from .words import GeneratorWord, parse_tree_word, parse_word
from .element import (
    Element,
    canonicalize,
    commutator,
    conjugate,
    element_of,
    identity,
    inverse,
    is_identity,
    machine_element,
    multiply,
    power,
    root_action,
    state_at,
    wedge,
)
from .textio import parse_machine, serialize_machine
from .decision import (
    ball,
    complexity_size,
    contraction_estimate,
    is_bounded,
    nucleus,
    order,
    word_metric,
    word_problem_canonical,
    word_problem_contracting,
    word_problem_linear,
)
from .engel import (
    branched_witness_check,
    build_witness,
    difference_step,
    engel_commutator,
    engel_exponent_check,
    engel_pair_check,
    period_search,
    radius_bound,
    verify_certificate,
    witness_spec,
)
from . import zoo

__version__ = "0.1.0"
