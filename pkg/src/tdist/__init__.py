"""Edit distances between finite-valued word transducers."""

from .core import (
    MultiTapeTransducer,
    Nfa,
    Transition,
    complete,
    domain_equal,
    domain_included,
    domain_nfa,
    project,
    scc_paths,
    stack_product,
    sub_machine,
    trim,
)
from .metrics import Metric, conjugate, edit_distance, hausdorff, primitive_root

__all__ = [
    "Metric",
    "MultiTapeTransducer",
    "Nfa",
    "Transition",
    "complete",
    "conjugate",
    "domain_equal",
    "domain_included",
    "domain_nfa",
    "edit_distance",
    "hausdorff",
    "primitive_root",
    "project",
    "scc_paths",
    "stack_product",
    "sub_machine",
    "trim",
]
