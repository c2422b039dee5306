"""ctcbeam: self-consistent field histories with a feedback loop from t=T to t=0."""

from .core import (
    Field,
    GridSpec,
    EvolutionRecord,
    ParaxialParams,
    PhysicsParams,
    integrated_density,
    l2_norm,
    make_background_with_dip,
    make_gaussian_packet,
    map_paraxial_to_schrodinger,
    normalized,
)
from .ctc import (
    CTCConfig,
    ConvergenceReport,
    WindowSignal,
    extract_window,
    inject,
    loop_gain_estimate,
    solve_fixed_point,
)
from .diagnostics import (
    MetricField,
    SolitonTrack,
    acoustic_metric,
    count_separated_maxima,
    density_map,
    detect_soliton_tracks,
    difference_map,
)
from .errors import (
    ConfigParseError,
    ConfigurationError,
    InvalidParameterError,
    NumericBlowupError,
    PresetLookupError,
)
from .scenarios import Scenario, preset, preset_names, scenario_from_config, validate
from .solver import build_barrier_potential, evolve, step

__version__ = "0.1.0"

__all__ = [
    "CTCConfig",
    "ConfigParseError",
    "ConfigurationError",
    "ConvergenceReport",
    "EvolutionRecord",
    "Field",
    "GridSpec",
    "InvalidParameterError",
    "MetricField",
    "NumericBlowupError",
    "ParaxialParams",
    "PhysicsParams",
    "PresetLookupError",
    "Scenario",
    "SolitonTrack",
    "WindowSignal",
    "acoustic_metric",
    "build_barrier_potential",
    "count_separated_maxima",
    "density_map",
    "detect_soliton_tracks",
    "difference_map",
    "evolve",
    "extract_window",
    "inject",
    "integrated_density",
    "l2_norm",
    "loop_gain_estimate",
    "make_background_with_dip",
    "make_gaussian_packet",
    "map_paraxial_to_schrodinger",
    "normalized",
    "preset",
    "preset_names",
    "scenario_from_config",
    "solve_fixed_point",
    "step",
    "validate",
]
