"""Directivity modeling and position optimization for coupled linear arrays."""

from .closed_forms import (
    DegenerateSpacingError,
    FirstOrderResult,
    LegendreTable,
    adjacent_only_broadside,
    broadside_optimal_spacing,
    first_order_directivity,
    legendre_directivity,
    legendre_p,
    two_antenna_broadside,
    two_antenna_directivity,
)
from .model import (
    ArrayGeometry,
    CouplingMatrix,
    DegenerateBasisError,
    DirectionCosine,
    EffectiveSteering,
    ExcitationVector,
    SingularCouplingError,
    average_directivity,
    coupling_matrix,
    directivity,
    effective_steering,
    gram_schmidt_patterns,
    optimal_excitation,
    sinc_coupling,
    steering_vector,
)
from .optimize import (
    BudgetExceededError,
    GridExhaustedError,
    GridSpec,
    InfeasibleStartError,
    InvalidGridError,
    OptimizerConfig,
    OptResult,
    Termination,
    TraceStep,
    build_grid,
    directivity_gradient,
    exhaustive_search,
    gradient_descent,
    greedy_search,
    gs_gd,
    ulah_positions,
)
from .quadrature import gauss_legendre
from .sweep import (
    Algorithm,
    MissingApertureError,
    SweepRecord,
    SweepSpec,
    aperture_saturation,
    gain_over_ulah,
    reproduce_fig2,
    reproduce_table1,
    run_sweep,
)

__version__ = "0.1.0"
