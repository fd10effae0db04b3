"""Level-k thinking and rationalizability for extensive-form games, in exact arithmetic."""
from .beliefs import (
    LOCAL,
    MODES,
    STRICT,
    Belief,
    BeliefError,
    BeliefSystem,
    conditional_expected_utility,
    dominance_test,
    exists_belief_system,
    exists_rationalizing_belief,
    is_rational_at,
    uniform_system,
)
from .build import build, chance, leaf, move, simultaneous
from .corpus import bos_outside_option, corpus_ids, corpus_list, corpus_load
from .experiments import ConsistencyTable, ObservationSet, classify, load_observations
from .game import (
    CapacityError,
    Game,
    GameFormatError,
    NormalForm,
    PreconditionError,
    Strategy,
    validate_game,
)
from .solvers import (
    CONCEPTS,
    LevelSolution,
    backward_induction_k,
    backward_level_k,
    backward_rationalizability,
    delta_rationalizability,
    detect_cycle,
    iterated_admissibility,
    iterated_strict_dominance,
    normal_form_level_k,
    prudent_rationalizability,
    rationalizability,
    solve,
    strong_level_k,
    strong_rationalizability,
)

__version__ = "0.1.0"
