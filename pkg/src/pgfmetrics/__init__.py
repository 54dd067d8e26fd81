"""Generating-function metrics and Wasserstein distances on the non-negative
integers, with a binomial-reshuffling mean-field model and a randomized
verification harness for the comparison inequalities between the two metric
families."""

from .config import SUP, TOL
from .dists import (
    CdfVector,
    DiscreteDist,
    cdf,
    digest,
    dirac,
    dump_dist,
    load_dist,
    make_dist,
    moment,
    pgf_eval,
    poisson_dist,
    random_dist,
    random_equal_mean_pair,
)
from .metrics import (
    ToscaniResult,
    ell_norm,
    estimate_norm_constant,
    toscani_distance,
    toscani_profile,
    total_variation,
)
from .reshuffle import (
    AgentState,
    DecayFit,
    MeanFieldState,
    Trajectory,
    TrajectoryPoint,
    agent_sim,
    collision_operator,
    fit_decay_rate,
    integrate_ode,
)
from .transport import (
    Coupling,
    coupling_cost,
    monotone_coupling,
    random_feasible_coupling,
    wasserstein1_cdf,
    wasserstein_p,
    write_coupling_csv,
)
from .verify import (
    InequalityReport,
    Part3Witness,
    SweepReport,
    check_part1,
    check_part2,
    check_part3,
    check_w1w2_interpolation,
    report_to_json,
    sweep,
)

__version__ = "0.1.0"
