"""Domain types, unit conventions and initial-condition builders.

Code units: hbar = 1, lengths in micrometers, mass in code units
(default 1), so the time unit is m*um^2/hbar.  The beam-optics and
quantum descriptions are the same equation under the parameter map
implemented by :func:`map_paraxial_to_schrodinger`:

    i dE/dz = -(1/2k0) d^2E/dy^2 - (k0*chi/2) E
    i hbar dpsi/dt = -(hbar^2/2m) d^2psi/dy^2 + U psi        (m = k0, U = -k0*chi/2)

with z playing the role of time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError

HBAR = 1.0


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1D spatial grid plus the time discretization of one pass.

    ny spatial samples spaced dy (um) centered on y=0, periodic; nt time
    steps of dt with a snapshot stored every snapshot_stride steps.
    nt = 0 describes a zero-length pass (initial condition only).
    """

    ny: int
    dy: float
    nt: int
    dt: float
    snapshot_stride: int = 1

    def __post_init__(self):
        if self.ny < 8 or (self.ny & (self.ny - 1)) != 0:
            raise InvalidParameterError(f"ny must be a power of two >= 8, got {self.ny}")
        if self.dy <= 0:
            raise InvalidParameterError(f"dy must be positive, got {self.dy}")
        if self.dt <= 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}")
        if self.nt < 0:
            raise InvalidParameterError(f"nt must be >= 0, got {self.nt}")
        if self.snapshot_stride < 1:
            raise InvalidParameterError(
                f"snapshot_stride must be >= 1, got {self.snapshot_stride}"
            )
        if self.nt % self.snapshot_stride != 0:
            raise InvalidParameterError(
                f"snapshot_stride {self.snapshot_stride} does not divide nt {self.nt}"
            )

    @property
    def length(self) -> float:
        """Domain length L = ny*dy."""
        return self.ny * self.dy

    @property
    def duration(self) -> float:
        """Pass duration T = nt*dt."""
        return self.nt * self.dt

    def y(self) -> np.ndarray:
        """Sample positions, y in [-L/2, L/2)."""
        return (np.arange(self.ny) - self.ny // 2) * self.dy

    def k(self) -> np.ndarray:
        """Angular wavenumbers matching numpy's FFT layout."""
        return 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.dy)

    def contains(self, y0: float) -> bool:
        y = self.y()
        return y[0] <= y0 <= y[-1]


@dataclass(frozen=True)
class PhysicsParams:
    """Coefficients of the (non)linear Schrodinger equation.

    hbar is pinned to 1 by convention; g = 0 selects the linear equation,
    g != 0 adds the g*|psi|^2 term.  potential holds U(y) sampled on the grid.
    """

    mass: float
    potential: np.ndarray
    g: float = 0.0
    hbar: float = HBAR

    def __post_init__(self):
        if self.hbar != HBAR:
            raise InvalidParameterError(f"hbar is fixed to 1 in code units, got {self.hbar}")
        if self.mass <= 0:
            raise InvalidParameterError(f"mass must be positive, got {self.mass}")
        object.__setattr__(
            self, "potential", np.ascontiguousarray(self.potential, dtype=np.float64)
        )
        if not np.all(np.isfinite(self.potential)):
            raise InvalidParameterError("potential must be finite everywhere")


@dataclass(frozen=True)
class ParaxialParams:
    """Beam-optics description: carrier wavenumber k0 and susceptibility chi(y)."""

    k0: float
    chi: np.ndarray

    def __post_init__(self):
        if self.k0 <= 0:
            raise InvalidParameterError(f"k0 must be positive, got {self.k0}")
        object.__setattr__(self, "chi", np.ascontiguousarray(self.chi, dtype=np.float64))


@dataclass(frozen=True)
class Field:
    """Complex field psi(y) at one time slice."""

    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        object.__setattr__(
            self, "values", np.ascontiguousarray(self.values, dtype=np.complex128)
        )
        if self.values.shape != (self.grid.ny,):
            raise InvalidParameterError(
                f"field has {self.values.shape} values, grid expects ({self.grid.ny},)"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidParameterError("field values must be finite")

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.grid)


@dataclass(frozen=True)
class EvolutionRecord:
    """Stored snapshots psi(y, t_k) of one pass from t=0 to t=T."""

    snapshots: tuple[Field, ...]
    params: PhysicsParams
    grid: GridSpec
    T: float

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        expected = self.grid.nt // self.grid.snapshot_stride + 1
        if len(self.snapshots) != expected:
            raise InvalidParameterError(
                f"record has {len(self.snapshots)} snapshots, grid expects {expected}"
            )

    @property
    def initial(self) -> Field:
        return self.snapshots[0]

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

    def times(self) -> np.ndarray:
        """Snapshot times t_k = k * dt * snapshot_stride."""
        step = self.grid.dt * self.grid.snapshot_stride
        return np.arange(len(self.snapshots)) * step


def map_paraxial_to_schrodinger(p: ParaxialParams) -> PhysicsParams:
    """Translate beam parameters into Schrodinger coefficients.

    With hbar = 1 the mass is k0 and the potential is -k0*chi/2; the
    interaction strength starts at 0 (nonlinearity is configured
    separately when needed).
    """
    return PhysicsParams(mass=p.k0, potential=-p.k0 * p.chi / 2.0, g=0.0)


def make_gaussian_packet(
    grid: GridSpec,
    y0: float,
    sigma: float,
    ky: float = 0.0,
    amplitude: complex = 1.0 + 0.0j,
) -> Field:
    """Gaussian packet A * exp(-(y-y0)^2/(2 sigma^2)) * exp(i ky y).

    sigma is the amplitude-profile width; the density profile is then a
    Gaussian of standard deviation sigma/sqrt(2).
    """
    if sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    if not grid.contains(y0):
        raise InvalidParameterError(f"packet center y0={y0} lies outside the domain")
    y = grid.y()
    envelope = np.exp(-((y - y0) ** 2) / (2.0 * sigma**2))
    return Field(amplitude * envelope * np.exp(1j * ky * y), grid)


def make_background_with_dip(
    grid: GridSpec,
    n0: float,
    depth: float,
    width: float,
    y0: float = 0.0,
) -> Field:
    """Uniform background sqrt(n0) with a Gaussian density dip at y0.

    psi(y) = sqrt(n0) * sqrt(1 - depth*exp(-(y-y0)^2/(2 width^2))), real
    and positive; depth = 0 gives the plain uniform background, depth = 1
    zeroes the density at y0.
    """
    if not 0.0 <= depth <= 1.0:
        raise InvalidParameterError(f"depth must lie in [0, 1], got {depth}")
    if width <= 0:
        raise InvalidParameterError(f"width must be positive, got {width}")
    if n0 < 0:
        raise InvalidParameterError(f"n0 must be non-negative, got {n0}")
    y = grid.y()
    density = n0 * (1.0 - depth * np.exp(-((y - y0) ** 2) / (2.0 * width**2)))
    return Field(np.sqrt(density).astype(np.complex128), grid)


def integrated_density(f: Field) -> float:
    """Total density sum |psi_j|^2 * dy (rectangle rule on the periodic grid)."""
    v = f.values
    return float(np.sum(v.real**2 + v.imag**2) * f.grid.dy)


def l2_norm(f: Field) -> float:
    """L2 norm sqrt(integral |psi|^2 dy)."""
    return float(np.sqrt(integrated_density(f)))


def normalized(f: Field) -> Field:
    """Rescale so the integrated density is exactly 1."""
    norm = l2_norm(f)
    if norm == 0.0:
        raise InvalidParameterError("cannot normalize a zero field")
    return Field(f.values / norm, f.grid)
