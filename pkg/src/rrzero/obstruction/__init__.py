"""Property tags, derivation rules and obstruction verdicts."""

from rrzero.obstruction.analyze import (
    LOCALLY_FINITE_AF,
    NO_OBSTRUCTION,
    NOT_RR0,
    STRONGLY_NOT_FS,
    AbelianizationWitness,
    AnalysisConfig,
    MaxLocallyFiniteNormal,
    Verdict,
    lambda_max_locally_finite,
    reduction_narrative,
    rr0_obstruction_analyze,
    strongly_not_fs_derive,
)
from rrzero.obstruction.tags import Fact, InconsistentTags, PropertyTagSet, Step, derive_all, derive_tags, replay
