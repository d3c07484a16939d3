"""Scattering quantum walk simulation and hybrid search analysis on grids."""

from sqrw.geometry import (
    EdgeNotFoundError,
    Geometry,
    GeometryError,
    InvalidSizeError,
    SymmetryClass,
    TooManyWallsError,
    WouldDisconnectError,
    bfs_distances,
    build_grid,
    build_lattice,
    generate_perfect_maze,
    load_geometry,
    max_wall_count,
    place_random_walls,
    remove_edge,
    save_geometry,
    unique_octant_nodes,
)
from sqrw.search import (
    DivergentSeriesError,
    HybridParams,
    SpeedReport,
    StepModel,
    UndefinedSpeedError,
    expected_bfs_steps,
    geometric_closed_form,
    optimal_hybrid_speed,
    quantum_speed,
    stable_hybrid_speed,
)
from sqrw.sweep import (
    BlindEvaluation,
    BlindPlan,
    EnsembleStats,
    MazeStudyResult,
    SweepResult,
    blind_class_bests,
    blind_evaluate,
    blind_plan,
    grid_size_trend,
    lattice_vs_grid,
    maze_study,
    sweep_single_F,
    walls_ensemble,
)
from sqrw.walk import (
    IsolatedNodeError,
    ProbabilityField,
    RadialProfile,
    ScatterCoefficients,
    WalkState,
    coefficients,
    evolve,
    initial_state,
    load_field_csv,
    node_probabilities,
    radial_profile,
    save_field_csv,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "EdgeNotFoundError",
    "Geometry",
    "GeometryError",
    "InvalidSizeError",
    "SymmetryClass",
    "TooManyWallsError",
    "WouldDisconnectError",
    "bfs_distances",
    "build_grid",
    "build_lattice",
    "generate_perfect_maze",
    "load_geometry",
    "max_wall_count",
    "place_random_walls",
    "remove_edge",
    "save_geometry",
    "unique_octant_nodes",
    "DivergentSeriesError",
    "HybridParams",
    "SpeedReport",
    "StepModel",
    "UndefinedSpeedError",
    "expected_bfs_steps",
    "geometric_closed_form",
    "optimal_hybrid_speed",
    "quantum_speed",
    "stable_hybrid_speed",
    "BlindEvaluation",
    "BlindPlan",
    "EnsembleStats",
    "MazeStudyResult",
    "SweepResult",
    "blind_class_bests",
    "blind_evaluate",
    "blind_plan",
    "grid_size_trend",
    "lattice_vs_grid",
    "maze_study",
    "sweep_single_F",
    "walls_ensemble",
    "IsolatedNodeError",
    "ProbabilityField",
    "RadialProfile",
    "ScatterCoefficients",
    "WalkState",
    "coefficients",
    "evolve",
    "initial_state",
    "load_field_csv",
    "node_probabilities",
    "radial_profile",
    "save_field_csv",
    "step",
    "__version__",
]
