import numpy as np
import pytest

from ctcbeam import Field, GridSpec, PhysicsParams, l2_norm, normalized, make_gaussian_packet
from ctcbeam.scenarios import scenario_from_config


def small_grid(ny=256, length=160.0, nt=512, T=30.0, stride=None) -> GridSpec:
    if stride is None:
        stride = nt if nt > 0 else 1
    return GridSpec(ny=ny, dy=length / ny, nt=nt, dt=T / nt if nt else 1.0, snapshot_stride=stride)


def free_params(grid: GridSpec, g: float = 0.0, mass: float = 1.0) -> PhysicsParams:
    return PhysicsParams(mass=mass, potential=np.zeros(grid.ny), g=g)


def l2_distance(a: Field, b: Field) -> float:
    d = a.values - b.values
    return float(np.sqrt(np.sum(d.real**2 + d.imag**2) * a.grid.dy))


def random_linear_scenario(rng: np.random.Generator, alpha_mod=None):
    """Small diffracting packet with a randomly placed window and coupling.

    Resamples until the iteration-0 window norm is macroscopic, so the
    no-suppression property is actually exercised.
    """
    from ctcbeam import evolve, extract_window

    for _ in range(50):
        cfg = {
            "grid.ny": 256,
            "grid.dy": 0.625,
            "grid.nt": 512,
            "grid.dt": 30.0 / 512.0,
            "grid.snapshot_stride": 512,
            "initial.kind": "gaussian",
            "initial.y0": float(rng.uniform(-30.0, 30.0)),
            "initial.sigma": float(rng.uniform(2.0, 6.0)),
            "initial.ky": float(rng.uniform(-1.5, 1.5)),
            "ctc.y_out": float(rng.uniform(-30.0, -10.0)),
            "ctc.w": float(rng.uniform(4.0, 10.0)),
            "ctc.alpha_mod": float(alpha_mod if alpha_mod is not None else rng.uniform(0.2, 1.0)),
            "ctc.alpha_phase": float(rng.uniform(0.0, 2.0 * np.pi)),
        }
        sc = scenario_from_config(cfg)
        rec0 = evolve(sc.base_initial, sc.params, sc.grid, sc.T)
        if extract_window(rec0, sc.ctc).norm() > 1e-3:
            return sc
    raise AssertionError("could not draw a scenario with a macroscopic window signal")
