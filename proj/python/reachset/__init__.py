"""Reachable-area motion models for football tracking data.

Thin wrapper around the C++ core: kinematic motion models producing
reachable-area polygons, a hit-ratio/precision validation score over
observed trails, synthetic benchmark generators, and seeded Bayesian
parameter optimisation.
"""

from ._core import (  # noqa: F401
    DEFAULT_HIT_RATIO_MIN,
    DEFAULT_POLYGON_VERTICES,
    DEFAULT_TIME_HORIZON_S,
    DEFAULT_TRAIL_SAMPLE_SIZE,
    ConstantSpeedOptimum,
    KinematicState,
    MotionModel,
    OptimizationResult,
    Polygon,
    SyntheticSpec,
    Trail,
    TrailSet,
    ValidationConfig,
    ValidationResult,
    Vec2,
    analytic_optimum_constant_speed,
    capped_acceleration,
    check_threshold_condition,
    constant_acceleration,
    constant_speed,
    generate_trails,
    hit_ratio,
    load_trail_set,
    model_from_json,
    optimize_model_family,
    point_in_polygon,
    polygon_area,
    precision,
    save_trail_set,
    two_segment,
    validate,
    validate_reference,
)

__version__ = "0.1.0"
