"""Enumeration and classification of small set-theoretic solutions of the Yang-Baxter equation."""

__version__ = "0.1.0"

from .perm import Permutation, CycleType, compose, inverse, class_representatives, centralizer, support_filter
from .tables import (
    CycleSetTable,
    RackTable,
    SkewCycleSet,
    MalformedTableError,
    check_cycle_set,
    check_rack,
    check_skew_cycle_set,
    is_quandle,
)
from .yb import (
    SolutionMap,
    verify_ybe,
    is_involutive,
    cycle_set_to_solution,
    solution_to_cycle_set,
    solution_to_skew_cycle_set,
    skew_cycle_set_to_solution,
)
from .canon import act, is_lex_min, canonical_form, are_isomorphic, rack_automorphisms
from .enumeration import (
    SearchConfig,
    SearchStats,
    BudgetExceeded,
    enumerate_cycle_sets,
    enumerate_racks,
    enumerate_skew_cycle_sets,
    enumerate_noninvolutive,
    enumerate_solutions,
)
from .props import (
    ClassificationRecord,
    classify,
    is_square_free,
    is_indecomposable,
    is_irretractable,
    is_biquandle,
    multipermutation_level,
    permutation_group,
    retract,
    gi_counterexamples,
)
from .store import DatasetHeader, read_dataset, write_dataset, dataset_stats
