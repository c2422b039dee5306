"""The time machine: windowed extraction at t=T, coupled injection at t=0.

The feedback loop adds an alpha-scaled, window-weighted copy of the final
field to the original initial condition,

    psi_{n+1}(y, 0) = psi_0(y, 0) + alpha * s_n(y shifted to y_in),
    s_n(y) = W(y) * psi_n(y, T),      W(y) = exp(-(y - y_out)^2 / (2 w^2)),

and iterates until the history is self-consistent.  Each new iterate is
built from the *original* psi_0, never from the previous injected field;
that distinction is what makes the iteration a fixed-point map rather
than an accumulator, and it is what the convergence analysis relies on.

In mean-subtracted mode (nonlinear pump-probe runs) psi(y, T) is replaced
by psi(y, T) - psi_bar(y, T), where psi_bar is a separately evolved,
unperturbed background.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .core import Field, GridSpec, EvolutionRecord, integrated_density, l2_norm
from .errors import ConfigurationError, InvalidParameterError
from .solver import evolve

if TYPE_CHECKING:  # pragma: no cover
    from .scenarios import Scenario

MODE_TOTAL_FIELD = "total-field"
MODE_MEAN_SUBTRACTED = "mean-subtracted"

STATUS_CONVERGED = "converged"
STATUS_DIVERGED = "diverged"
STATUS_MAX_ITERATIONS = "max-iterations"

DIVERGENCE_THRESHOLD = 1e6
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class CTCConfig:
    """Window geometry and complex coupling of the feedback loop.

    y_out is the extraction window center, y_in the injection center
    (defaults to y_out), w the Gaussian window width, and the coupling is
    alpha = alpha_mod * exp(i * alpha_phase).
    """

    y_out: float
    w: float
    alpha_mod: float = 1.0
    alpha_phase: float = 0.0
    y_in: float | None = None
    mode: str = MODE_TOTAL_FIELD

    def __post_init__(self):
        if self.w <= 0:
            raise InvalidParameterError(f"window width w must be positive, got {self.w}")
        if self.alpha_mod < 0:
            raise InvalidParameterError(f"alpha_mod must be >= 0, got {self.alpha_mod}")
        if self.mode not in (MODE_TOTAL_FIELD, MODE_MEAN_SUBTRACTED):
            raise InvalidParameterError(
                f"mode must be '{MODE_TOTAL_FIELD}' or '{MODE_MEAN_SUBTRACTED}', got '{self.mode}'"
            )
        if self.y_in is None:
            object.__setattr__(self, "y_in", self.y_out)

    @property
    def alpha(self) -> complex:
        return self.alpha_mod * np.exp(1j * self.alpha_phase)

    def window_weights(self, grid: GridSpec) -> np.ndarray:
        """Extraction weights W(y) centered on y_out, peak value 1."""
        y = grid.y()
        return np.exp(-((y - self.y_out) ** 2) / (2.0 * self.w**2))


@dataclass(frozen=True)
class WindowSignal:
    """Window-weighted field extracted at t=T (the time-traveler signal)."""

    values: np.ndarray
    grid: GridSpec

    def norm(self) -> float:
        v = self.values
        return float(np.sqrt(np.sum(v.real**2 + v.imag**2) * self.grid.dy))


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-iteration trace of the fixed-point search."""

    residuals: np.ndarray
    window_norms: np.ndarray
    total_densities: np.ndarray
    status: str
    iterations: int

    def __post_init__(self):
        for name in ("residuals", "window_norms", "total_densities"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        n = self.iterations
        if not (len(self.residuals) == len(self.window_norms) == len(self.total_densities) == n):
            raise InvalidParameterError("report sequences must all have length == iterations")

    @property
    def converged(self) -> bool:
        return self.status == STATUS_CONVERGED


def extract_window(
    rec: EvolutionRecord, c: CTCConfig, background: Field | None = None
) -> WindowSignal:
    """Window-weighted signal s(y) = W(y) * psi(y, T).

    In mean-subtracted mode, psi(., T) is replaced by the deviation from
    `background`, which must be the unperturbed reference field already
    evolved to t=T.
    """
    final = rec.final.values
    if c.mode == MODE_MEAN_SUBTRACTED:
        if background is None:
            raise ConfigurationError(
                "mean-subtracted extraction needs the background reference at t=T"
            )
        final = final - background.values
    return WindowSignal(c.window_weights(rec.grid) * final, rec.grid)


def _translate(values: np.ndarray, grid: GridSpec, shift: float) -> np.ndarray:
    """Periodic translation by an arbitrary (not necessarily grid-aligned) shift."""
    if shift == 0.0:
        return values
    return np.fft.ifft(np.fft.fft(values) * np.exp(-1j * grid.k() * shift))


def inject(base: Field, s: WindowSignal, c: CTCConfig) -> Field:
    """psi_{n+1}(y, 0) = psi_0(y, 0) + alpha * s(y translated onto y_in).

    `base` must be the original iteration-0 initial condition, never a
    previously injected field.  The signal is translated so its window
    center lands on y_in, then scaled by alpha; it is not re-windowed.
    """
    if c.alpha_mod == 0.0:
        return base.copy()
    shifted = _translate(s.values, base.grid, c.y_in - c.y_out)
    return Field(base.values + c.alpha * shifted, base.grid)


def _background_at_T(scenario: "Scenario") -> Field | None:
    if scenario.ctc.mode != MODE_MEAN_SUBTRACTED:
        return None
    if scenario.background_reference is None:
        raise ConfigurationError(
            f"scenario '{scenario.name}' uses mean-subtracted mode but has no "
            "background reference"
        )
    ref = evolve(scenario.background_reference, scenario.params, scenario.grid, scenario.T)
    return ref.final


def solve_fixed_point(
    scenario: "Scenario",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[EvolutionRecord, ConvergenceReport]:
    """Iterate evolve -> extract -> inject until the history is stationary.

    The residual of iteration n is r_n = ||psi_{n+1}(.,0) - psi_n(.,0)||_2
    / ||psi_0(.,0)||_2.  Stops with status 'converged' when r_n < tol,
    'diverged' when r_n exceeds 1e6 or goes non-finite (a normal return,
    not an exception), or 'max-iterations'.  Returns the last evolved
    record; on convergence that record is the self-consistent history.
    """
    if tol <= 0:
        raise InvalidParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise InvalidParameterError(f"max_iter must be >= 1, got {max_iter}")

    base = scenario.base_initial
    base_norm = l2_norm(base)
    if base_norm == 0.0:
        raise InvalidParameterError("base initial condition must be nonzero")
    background = _background_at_T(scenario)

    residuals: list[float] = []
    window_norms: list[float] = []
    total_densities: list[float] = []
    status = STATUS_MAX_ITERATIONS

    current = base
    rec = None
    for _ in range(max_iter):
        rec = evolve(current, scenario.params, scenario.grid, scenario.T)
        signal = extract_window(rec, scenario.ctc, background=background)
        nxt = inject(base, signal, scenario.ctc)
        diff = nxt.values - current.values
        r = float(np.sqrt(np.sum(diff.real**2 + diff.imag**2) * scenario.grid.dy)) / base_norm

        residuals.append(r)
        window_norms.append(signal.norm())
        total_densities.append(integrated_density(rec.initial))

        if not np.isfinite(r) or r > DIVERGENCE_THRESHOLD:
            status = STATUS_DIVERGED
            break
        if r < tol:
            status = STATUS_CONVERGED
            break
        current = nxt

    report = ConvergenceReport(
        residuals=np.array(residuals),
        window_norms=np.array(window_norms),
        total_densities=np.array(total_densities),
        status=status,
        iterations=len(residuals),
    )
    return rec, report


def loop_gain_estimate(scenario: "Scenario", probe_scale: float = 1e-6) -> float:
    """Empirical one-pass contraction factor of a window-localized probe.

    Evolves the base initial condition and a perturbed copy (perturbation:
    a window-shaped probe at y_in with L2 norm probe_scale * ||base||) and
    returns ||delta psi(., T)||_W / ||delta psi(., 0)||_W, both weighted by
    the extraction window.  Values below 1/alpha_mod predict convergence
    of the fixed-point iteration.
    """
    if probe_scale <= 0:
        raise InvalidParameterError(f"probe_scale must be positive, got {probe_scale}")

    grid = scenario.grid
    c = scenario.ctc
    y = grid.y()
    profile = np.exp(-((y - c.y_in) ** 2) / (2.0 * c.w**2)).astype(np.complex128)
    profile_norm = float(np.sqrt(np.sum(np.abs(profile) ** 2) * grid.dy))
    probe = profile * (probe_scale * l2_norm(scenario.base_initial) / profile_norm)

    if scenario.params.g == 0.0:
        # linear medium: evolving the probe alone is identical by linearity
        # and avoids the subtractive cancellation of two nearby evolutions
        delta_T = evolve(Field(probe, grid), scenario.params, grid, scenario.T).final.values
    else:
        base_rec = evolve(scenario.base_initial, scenario.params, grid, scenario.T)
        perturbed = Field(scenario.base_initial.values + probe, grid)
        pert_rec = evolve(perturbed, scenario.params, grid, scenario.T)
        delta_T = pert_rec.final.values - base_rec.final.values

    weights = c.window_weights(grid)
    d0 = weights * probe
    dT = weights * delta_T
    norm0 = float(np.sqrt(np.sum(np.abs(d0) ** 2) * grid.dy))
    normT = float(np.sqrt(np.sum(np.abs(dT) ** 2) * grid.dy))
    if norm0 == 0.0:
        raise InvalidParameterError("probe has no weight inside the extraction window")
    return normT / norm0
