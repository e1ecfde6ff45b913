"""Binary consensus by mobile writer/eraser agents on a shared tri-state
strand: trial simulator, closed-form bounds, a linear-solve oracle, and a
Monte-Carlo experiment harness."""

from .agents import (
    Agent,
    NaiveRace,
    Population,
    Variant,
    eraser_step,
    naive_step,
    spawn_agents,
    writer_step,
)
from .bounds import (
    ExpectedTimeComparison,
    GamblerParams,
    InitialWriteModel,
    UpdateStepProbs,
    chernoff_upper,
    decision_prob_closed_form,
    expected_steps_upper_bound,
    expected_time_views,
    gambler_expected_time,
    gambler_ruin_prob,
    majority_prob_lower_bound,
    strong_majority_lower_bound,
    update_step_probs,
    update_steps_upper_bound,
)
from .chain import (
    BirthDeathChain,
    absorption_prob,
    absorption_probs,
    absorption_time,
    absorption_times,
    exact_decision_prob,
    simulate_chain,
)
from .harness import (
    ComparisonResult,
    ExperimentReport,
    ExperimentSpec,
    SelfStabReport,
    TrajectoryAverages,
    compare_variants,
    high_competition_config,
    load_experiment_spec,
    low_competition_config,
    run_experiment,
    run_trials,
    self_stabilization_experiment,
    trajectory_experiment,
)
from .scheduler import (
    TrialConfig,
    TrialResult,
    TrialState,
    big_step,
    check_requirements,
    init_trial,
    run_trial,
)
from .strand import EMPTY, ONE, ZERO, Strand, complement, new_strand

__version__ = "0.1.0"
