"""FMCW radar micro-motion pipeline.

Thin package wrapper over the compiled extension: radar simulator, range
processing, phase recovery, EMG alignment and deformation-model fitting.
"""

from ._rmg import (  # noqa: F401
    AliasError,
    AlignedPair,
    BiosignalTrace,
    CycleFit,
    DataError,
    DeformationModel,
    ExperimentFitReport,
    ProcessResult,
    RadarConfig,
    TargetTrajectory,
    ValidationError,
    VelocityBudgetReport,
    align_to_slow_time,
    envelope,
    fit_experiment,
    fit_exponential,
    load_config,
    make_radar_config,
    motion_constant,
    motion_piecewise_linear,
    motion_sinusoid,
    normalize,
    predict_deformation,
    process_cube,
    r_squared,
    read_capture,
    sample_trajectory,
    save_config,
    synthesize_cube,
    unwrap,
    write_capture,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
