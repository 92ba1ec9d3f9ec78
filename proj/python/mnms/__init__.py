"""Optimal mixed states for the CHSH and Svetlichny games.

Thin wrapper over the compiled core: state factories, exact and optimized
game maxima, classical strategy enumeration, Monte Carlo play and frontier
scans in the (linear entropy, game value) plane.
"""

from ._core import (
    DensityMatrix,
    Settings,
    __version__,
    bloch_decompose,
    chsh_max_horodecki,
    classical_bound,
    critical_visibility,
    curve_domain,
    curve_value,
    enumerate_classical,
    expectation,
    family_point,
    game_operator,
    linear_entropy,
    make_state,
    maximize,
    mix_white_noise,
    mnms3_optimal_settings,
    purity,
    quantum_win_exact,
    run_acceptance,
    sample_state,
    scan,
    simulate_rounds,
    state_from_json,
    state_from_matrix,
    validate,
    win_predicate,
)

__all__ = [
    "DensityMatrix",
    "Settings",
    "__version__",
    "bloch_decompose",
    "chsh_max_horodecki",
    "classical_bound",
    "critical_visibility",
    "curve_domain",
    "curve_value",
    "enumerate_classical",
    "expectation",
    "family_point",
    "game_operator",
    "linear_entropy",
    "make_state",
    "maximize",
    "mix_white_noise",
    "mnms3_optimal_settings",
    "purity",
    "quantum_win_exact",
    "run_acceptance",
    "sample_state",
    "scan",
    "simulate_rounds",
    "state_from_json",
    "state_from_matrix",
    "validate",
    "win_predicate",
]
