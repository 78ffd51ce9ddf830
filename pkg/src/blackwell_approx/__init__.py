"""Blackwell approachability when action sets are reachable only through approximation oracles."""
from .approachability import (
    BlackwellInstance,
    ConfigurationError,
    GameConstants,
    ModifiedInstance,
    ProtocolError,
    Scenario,
    ScenarioConfig,
    Transcript,
    check_approachable,
    compute_constants,
    modified_support,
    oracle_budget,
    run_approachability,
    saddle_value,
    scaled_instance,
    shifted_instance,
    target_view,
)
from .bilinear import BilinearLoss, DimensionError, eval_loss, loss_norm_bound, weighted_matrix
from .instances import (
    AdversaryKind,
    BestResponseAdversary,
    FixedSequenceAdversary,
    RandomVertexAdversary,
    build_cyclic_game,
    build_negative_instance,
    build_vertex_cover_game,
    make_adversary,
)
from .oco import OcoState, OnlineGradientDescent, RegretLedger, ogd_regret_bound, ogd_step, run_ogd
from .oracles import (
    ApproxOracle,
    ConstantOracle,
    ExactOracle,
    ExtendedOutput,
    OracleContractError,
    SloppyOracle,
    VertexCoverOracle,
    extended_call,
    local_ratio_cover,
    vertex_cover_oracle,
)
from .saddle import (
    OGDWOF,
    FwProjectionOutput,
    SaddleOutput,
    aispox,
    aispoy,
    aispoyx,
    fw_infeasible_projection,
    fw_iteration_bound,
    ogdwof_run,
)
from .sets import (
    Ball,
    Box,
    ConvergenceError,
    ConvexSet,
    NonnegBall,
    ShiftedScaledView,
    Simplex,
    Singleton,
    UnsupportedOperation,
    VPolytope,
    distance_to_downward_closure,
    distance_to_set,
    euclidean_project,
    support_point,
    support_shifted_scaled,
)

__version__ = "0.1.0"
