"""Decision making over belief-function lotteries.

The core types build on each other: ``Frame`` fixes the possibility
space, ``Bpa`` distributes mass over its subsets, ``BfLottery`` ties a
mass assignment to a ranking of prizes, and ``UtilityAssessment`` turns
lotteries into utility intervals and preference verdicts.  The
``elicitation`` layer asks a decision maker the questions needed to pin
those assessments down.

``bflottery.wire`` (JSON shapes), ``bflottery.store`` and
``bflottery.service`` (persistence and HTTP), and ``bflottery.cli`` are
deliberately not re-exported; import them by module when you need the
plumbing.
"""

from .bpa import (
    Bpa,
    BpaKind,
    DempsterSum,
    combine_dempster,
    conditional_embedding,
    marginalize,
)
from .corpus import EXAMPLES, run_example
from .elicitation import (
    ConsistencyReport,
    DmResponse,
    ElicitationSession,
    Query,
    SyntheticDm,
    check_consistency,
    recover_table,
    run_synthetic,
    solve_indices,
)
from .errors import (
    BfError,
    FrameMismatchError,
    InconsistentResponsesError,
    StaleQueryError,
    TotalConflictError,
    ValidationError,
)
from .frames import Frame, ProductFrame, Subset, project, vacuous_extend
from .lottery import (
    Act,
    BfLottery,
    CompoundLottery,
    OutcomeOrder,
    ReferenceLottery,
    lottery_frame,
    pushforward,
    reduce_compound,
)
from .utility import (
    ConstantIndex,
    ExplicitTable,
    PairwiseIndex,
    PreferenceVerdict,
    UtilityAssessment,
    UtilityInterval,
    affine_transform,
    choquet_lower,
    choquet_upper,
    compare,
    interval_bound_dominance,
    interval_utility,
    jaffray_utility,
    pignistic_transform,
    pignistic_utility,
    reduce_to_reference,
    reduce_to_reference_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "Act",
    "BfError",
    "BfLottery",
    "Bpa",
    "BpaKind",
    "CompoundLottery",
    "ConsistencyReport",
    "ConstantIndex",
    "DempsterSum",
    "DmResponse",
    "EXAMPLES",
    "ElicitationSession",
    "ExplicitTable",
    "Frame",
    "FrameMismatchError",
    "InconsistentResponsesError",
    "OutcomeOrder",
    "PairwiseIndex",
    "PreferenceVerdict",
    "ProductFrame",
    "Query",
    "ReferenceLottery",
    "StaleQueryError",
    "Subset",
    "SyntheticDm",
    "TotalConflictError",
    "UtilityAssessment",
    "UtilityInterval",
    "ValidationError",
    "affine_transform",
    "check_consistency",
    "choquet_lower",
    "choquet_upper",
    "combine_dempster",
    "compare",
    "conditional_embedding",
    "interval_bound_dominance",
    "interval_utility",
    "jaffray_utility",
    "lottery_frame",
    "marginalize",
    "pignistic_transform",
    "pignistic_utility",
    "project",
    "pushforward",
    "recover_table",
    "reduce_compound",
    "reduce_to_reference",
    "reduce_to_reference_oracle",
    "run_example",
    "run_synthetic",
    "solve_indices",
    "vacuous_extend",
    "__version__",
]
