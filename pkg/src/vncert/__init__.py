"""Discrimination and certification of von Neumann measurements.

Exact Choi-matrix constructions for Haar-averaged measurement channels,
diamond-norm bounds, optimal symmetric/asymmetric strategies, and a
Monte Carlo black-box protocol simulator.
"""

__version__ = "0.1.0"

from .discrim import (  # noqa: F401
    AnalyticRow,
    achieved_distance,
    analytic_table,
    antisymmetric_state,
    diamond_bounds,
    error_mean_inequality,
    helstrom_success,
    max_entangled_input,
    omega_both_unknown,
    omega_one_fixed,
    type_errors,
    wj_square_residual,
)
from .haar import (  # noqa: F401
    RngStream,
    avg_choi_meas_uu,
    avg_choi_meas_uv,
    avg_choi_unitary_uu,
    avg_choi_unitary_uv,
    choi_difference,
    mc_average_choi,
    sample_haar_unitary,
)
from .protocol import (  # noqa: F401
    ScenarioConfig,
    SimResult,
    sample_outcome,
    simulate,
)
from .qcore import (  # noqa: F401
    ChoiMatrix,
    abs_hermitian,
    apply_from_choi,
    choi_of_map,
    dephase,
    depolarize,
    kron,
    operator_norm,
    partial_trace,
    swap_operator,
    trace_norm,
    vec,
    vn_measure_channel,
)
