"""Named presets reproducing the reference experiments.

Every default number lives here, in flat dotted-key config form; the CLI
manifests, config files and overrides all speak the same keys.  Preset
values are engineering choices tuned so the acceptance bands are met.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Field,
    GridSpec,
    PhysicsParams,
    integrated_density,
    l2_norm,
    make_background_with_dip,
    make_gaussian_packet,
    normalized,
)
from .ctc import MODE_MEAN_SUBTRACTED, MODE_TOTAL_FIELD, CTCConfig
from .errors import ConfigParseError, PresetLookupError
from .solver import build_barrier_potential

# key -> (type, default).  Booleans are written as true/false in config files.
CONFIG_SCHEMA: dict[str, tuple[type, object]] = {
    "name": (str, "custom"),
    "description": (str, ""),
    "grid.ny": (int, 1024),
    "grid.dy": (float, 0.15625),
    "grid.nt": (int, 8192),
    "grid.dt": (float, 30.0 / 8192.0),
    "grid.snapshot_stride": (int, 64),
    "physics.mass": (float, 1.0),
    "physics.g": (float, 0.0),
    "potential.kind": (str, "none"),
    "potential.height": (float, 30.0),
    "potential.edge_offset": (float, 16.0),
    "potential.steepness": (float, 2.0),
    "initial.kind": (str, "gaussian"),
    "initial.y0": (float, 0.0),
    "initial.sigma": (float, 2.0),
    "initial.ky": (float, 0.0),
    "initial.normalize": (bool, True),
    "initial.n0": (float, 1.0),
    "initial.depth": (float, 0.3),
    "initial.width": (float, 2.5),
    "ctc.y_out": (float, -20.0),
    "ctc.y_in": (float, None),  # defaults to ctc.y_out
    "ctc.w": (float, 8.0),
    "ctc.alpha_mod": (float, 1.0),
    "ctc.alpha_phase": (float, 0.0),
    "ctc.mode": (str, MODE_TOTAL_FIELD),
    "background.kind": (str, "none"),
    "background.n0": (float, 1.0),
    "run.tol": (float, 1e-12),
    "run.max_iter": (int, 200),
    "output.plot_scale_hint": (str, "linear"),
}

_POTENTIAL_KINDS = ("none", "uniform", "barrier")
_INITIAL_KINDS = ("gaussian", "background_dip")
_BACKGROUND_KINDS = ("none", "uniform")


@dataclass(frozen=True)
class Scenario:
    """Everything needed for one fixed-point run, cross-checked on one grid."""

    name: str
    grid: GridSpec
    params: PhysicsParams
    base_initial: Field
    ctc: CTCConfig
    T: float
    background_reference: Field | None = None
    description: str = ""
    config: dict = field(default_factory=dict, repr=False)


def coerce_value(key: str, raw: object) -> object:
    """Coerce a raw (possibly string) config value to its schema type."""
    if key not in CONFIG_SCHEMA:
        raise ConfigParseError("unknown configuration key", key=key)
    typ, _ = CONFIG_SCHEMA[key]
    if isinstance(raw, str):
        text = raw.strip()
        try:
            if typ is bool:
                if text.lower() not in ("true", "false"):
                    raise ValueError(text)
                return text.lower() == "true"
            if typ is int:
                return int(text)
            if typ is float:
                return float(text)
            return text
        except ValueError as exc:
            raise ConfigParseError(
                f"cannot parse '{text}' as {typ.__name__}", key=key
            ) from exc
    if typ is float and isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    if not isinstance(raw, typ):
        raise ConfigParseError(
            f"expected {typ.__name__}, got {type(raw).__name__}", key=key
        )
    return raw


def resolve_config(overrides: dict[str, object]) -> dict[str, object]:
    """Fill defaults, coerce types and resolve derived keys."""
    cfg: dict[str, object] = {}
    for key, (_, default) in CONFIG_SCHEMA.items():
        cfg[key] = default
    for key, raw in overrides.items():
        cfg[key] = coerce_value(key, raw)
    if cfg["ctc.y_in"] is None:
        cfg["ctc.y_in"] = cfg["ctc.y_out"]
    return cfg


def scenario_from_config(overrides: dict[str, object]) -> Scenario:
    """Build a fully cross-referenced Scenario from flat config keys."""
    cfg = resolve_config(overrides)

    grid = GridSpec(
        ny=cfg["grid.ny"],
        dy=cfg["grid.dy"],
        nt=cfg["grid.nt"],
        dt=cfg["grid.dt"],
        snapshot_stride=cfg["grid.snapshot_stride"],
    )

    kind = cfg["potential.kind"]
    if kind == "none":
        potential = np.zeros(grid.ny)
    elif kind == "uniform":
        potential = np.full(grid.ny, cfg["potential.height"])
    elif kind == "barrier":
        potential = build_barrier_potential(
            grid,
            edge_offset=cfg["potential.edge_offset"],
            height=cfg["potential.height"],
            steepness=cfg["potential.steepness"],
        )
    else:
        raise ConfigParseError(
            f"must be one of {_POTENTIAL_KINDS}", key="potential.kind"
        )
    params = PhysicsParams(mass=cfg["physics.mass"], potential=potential, g=cfg["physics.g"])

    ikind = cfg["initial.kind"]
    if ikind == "gaussian":
        base = make_gaussian_packet(
            grid, y0=cfg["initial.y0"], sigma=cfg["initial.sigma"], ky=cfg["initial.ky"]
        )
        if cfg["initial.normalize"]:
            base = normalized(base)
    elif ikind == "background_dip":
        base = make_background_with_dip(
            grid,
            n0=cfg["initial.n0"],
            depth=cfg["initial.depth"],
            width=cfg["initial.width"],
            y0=cfg["initial.y0"],
        )
    else:
        raise ConfigParseError(f"must be one of {_INITIAL_KINDS}", key="initial.kind")

    ctc = CTCConfig(
        y_out=cfg["ctc.y_out"],
        w=cfg["ctc.w"],
        alpha_mod=cfg["ctc.alpha_mod"],
        alpha_phase=cfg["ctc.alpha_phase"],
        y_in=cfg["ctc.y_in"],
        mode=cfg["ctc.mode"],
    )

    bkind = cfg["background.kind"]
    if bkind == "none":
        background = None
    elif bkind == "uniform":
        background = make_background_with_dip(
            grid, n0=cfg["background.n0"], depth=0.0, width=1.0
        )
    else:
        raise ConfigParseError(f"must be one of {_BACKGROUND_KINDS}", key="background.kind")

    return Scenario(
        name=cfg["name"],
        grid=grid,
        params=params,
        base_initial=base,
        ctc=ctc,
        T=grid.duration,
        background_reference=background,
        description=cfg["description"],
        config=cfg,
    )


# ---------------------------------------------------------------------------
# Preset registry.  grid.dt choices keep the kinetic phase at the Nyquist
# wavenumber below pi/4 per step (see validate); packet and window numbers
# are tuned against the acceptance bands.
# ---------------------------------------------------------------------------

PRESET_OVERRIDES: dict[str, dict[str, object]] = {
    "fig2_diffraction": {
        "name": "fig2_diffraction",
        "description": "diffracting Gaussian beam feeding a window at y=-20 um",
        "grid.ny": 1024,
        "grid.dy": 0.15625,
        "grid.nt": 8192,
        "grid.dt": 30.0 / 8192.0,
        "grid.snapshot_stride": 64,
        "initial.kind": "gaussian",
        "initial.y0": 0.0,
        "initial.sigma": 8.0,
        "initial.ky": 0.0,
        "ctc.y_out": -20.0,
        "ctc.w": 4.0,
        # weak coupling, phase-trimmed so the one-pass feedback onto the
        # extracted signal is net constructive (11%-style window gain)
        "ctc.alpha_mod": 0.079,
        "ctc.alpha_phase": 0.61,
        "output.plot_scale_hint": "log",
    },
    "fig3_bouncing": {
        "name": "fig3_bouncing",
        "description": "moving packet bouncing off an edge barrier; three copies coexist",
        "grid.ny": 512,
        "grid.dy": 0.3125,
        "grid.nt": 2048,
        "grid.dt": 30.0 / 2048.0,
        "grid.snapshot_stride": 16,
        "potential.kind": "barrier",
        "potential.height": 30.0,
        "potential.edge_offset": 16.0,
        "potential.steepness": 2.0,
        "initial.kind": "gaussian",
        "initial.y0": 40.0,
        "initial.sigma": 4.0,
        "initial.ky": -2.0,
        "ctc.y_out": -20.0,
        # injection sits below extraction so the upward-moving copy is
        # spatially distinct from the original at t=T/2
        "ctc.y_in": -52.0,
        "ctc.w": 6.0,
        "ctc.alpha_mod": 1.0,
        "ctc.alpha_phase": 0.0,
    },
    # The fig4 pair shares one geometry.  The uniform potential is a loop
    # phase trim: it cancels the one-pass propagation phase of the
    # window-trapped mode, so alpha_phase = 0 / pi are exactly the
    # constructive / destructive extremes.
    "fig4_constructive": {
        "name": "fig4_constructive",
        "description": "wide beam sitting on the window, coupling phase 0 (self-amplification)",
        "grid.ny": 512,
        "grid.dy": 0.3125,
        "grid.nt": 4096,
        "grid.dt": 60.0 / 4096.0,
        "grid.snapshot_stride": 32,
        "potential.kind": "uniform",
        "potential.height": 0.097206,
        "initial.kind": "gaussian",
        "initial.y0": -20.0,
        "initial.sigma": 5.0,
        "initial.ky": 0.0,
        "ctc.y_out": -20.0,
        "ctc.w": 5.5,
        "ctc.alpha_mod": 1.0,
        "ctc.alpha_phase": 0.0,
        "output.plot_scale_hint": "log",
    },
    "fig4_destructive": {
        "name": "fig4_destructive",
        "description": "wide beam sitting on the window, coupling phase pi (self-suppression)",
        "grid.ny": 512,
        "grid.dy": 0.3125,
        "grid.nt": 4096,
        "grid.dt": 60.0 / 4096.0,
        "grid.snapshot_stride": 32,
        "potential.kind": "uniform",
        "potential.height": 0.097206,
        "initial.kind": "gaussian",
        "initial.y0": -20.0,
        "initial.sigma": 5.0,
        "initial.ky": 0.0,
        "ctc.y_out": -20.0,
        "ctc.w": 5.5,
        "ctc.alpha_mod": 1.0,
        "ctc.alpha_phase": math.pi,
        "output.plot_scale_hint": "log",
    },
    "fig5_solitons": {
        "name": "fig5_solitons",
        "description": "gray soliton pair in a repulsive medium; mean-subtracted coupling",
        "grid.ny": 1024,
        "grid.dy": 0.15625,
        "grid.nt": 12288,
        "grid.dt": 44.0 / 12288.0,
        "grid.snapshot_stride": 96,
        "physics.g": 1.0,
        "initial.kind": "background_dip",
        "initial.n0": 1.0,
        "initial.depth": 0.3,
        "initial.width": 2.5,
        "initial.y0": 20.0,
        "ctc.y_out": -20.0,
        "ctc.w": 6.0,
        # soliton deviations are phase-dominated; stronger couplings feed
        # the phase wake back with loop gain >= 1 and never settle
        "ctc.alpha_mod": 0.05,
        "ctc.alpha_phase": 0.0,
        "ctc.mode": MODE_MEAN_SUBTRACTED,
        "background.kind": "uniform",
        "background.n0": 1.0,
        "run.max_iter": 100,
    },
    "toy_single_mode": {
        "name": "toy_single_mode",
        "description": "uniform field, whole-domain window: exactly the scalar geometric series",
        "grid.ny": 64,
        "grid.dy": 2.5,
        "grid.nt": 16,
        "grid.dt": 0.5,
        "grid.snapshot_stride": 4,
        "initial.kind": "background_dip",
        "initial.n0": 1.0 / 160.0,  # unit integrated density over the 160 um domain
        "initial.depth": 0.0,
        "initial.width": 1.0,
        "initial.y0": 0.0,
        "ctc.y_out": 0.0,
        "ctc.w": 1e10,  # flat to double precision across the domain
        "ctc.alpha_mod": 0.5,
        "ctc.alpha_phase": 0.0,
        "run.max_iter": 400,
    },
}


def preset_names() -> list[str]:
    return list(PRESET_OVERRIDES)


def preset(name: str) -> Scenario:
    """Look up a registered scenario by name."""
    if name not in PRESET_OVERRIDES:
        raise PresetLookupError(name, preset_names())
    return scenario_from_config(PRESET_OVERRIDES[name])


def validate(s: Scenario) -> list[str]:
    """Consistency checks; returns human-readable violations (empty = valid).

    Checks grid cross-references, window containment, the edge-density
    margin for localized packets (barrier scenarios and delocalized
    backgrounds are exempt: the wall confines the former and wraparound
    is meaningless for the latter), and a kinetic-phase step heuristic
    hbar k_max^2 dt / 2m < pi/4.
    """
    violations: list[str] = []
    grid = s.grid

    if s.base_initial.grid != grid:
        violations.append("base initial condition was built on a different grid")
    if s.background_reference is not None and s.background_reference.grid != grid:
        violations.append("background reference was built on a different grid")
    if abs(s.T - grid.duration) > 1e-9 * max(grid.duration, grid.dt):
        violations.append(f"T={s.T} does not match grid nt*dt={grid.duration}")

    y = grid.y()
    for label, center in (("extraction window y_out", s.ctc.y_out), ("injection window y_in", s.ctc.y_in)):
        if not (y[0] <= center <= y[-1]):
            violations.append(f"{label}={center} lies outside the domain [{y[0]}, {y[-1]}]")

    if s.ctc.mode == MODE_MEAN_SUBTRACTED and s.background_reference is None:
        violations.append("mean-subtracted mode configured without a background reference")

    n = np.abs(s.base_initial.values) ** 2
    peak = float(np.max(n))
    edge = float(max(n[0], n[-1]))
    pot = s.params.potential
    has_barrier = float(max(pot[0], pot[-1])) > float(np.min(pot)) + 1e-12
    delocalized = peak > 0 and edge >= 0.5 * peak
    if peak > 0 and not has_barrier and not delocalized and edge > 1e-8 * peak:
        violations.append(
            f"edge density {edge:.3e} exceeds 1e-8 of peak {peak:.3e}; "
            "packet too close to the periodic boundary"
        )

    k_max = math.pi / grid.dy
    phase = s.params.hbar * k_max**2 * grid.dt / (2.0 * s.params.mass)
    if phase >= math.pi / 4.0:
        violations.append(
            f"dt={grid.dt} too large: kinetic phase per step at k_max is "
            f"{phase:.3f} rad (must stay below pi/4)"
        )
    return violations
