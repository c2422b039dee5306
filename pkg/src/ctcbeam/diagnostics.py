"""Derived observables: density maps, acoustic metric, soliton tracking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EvolutionRecord, Field, PhysicsParams
from .errors import InvalidParameterError

# Velocity is undefined at zeros of psi; below this density fraction the
# phase gradient is masked out and reported as 0.
CORE_DENSITY_FRACTION = 1e-6

# Minima deeper than this fraction of the background count as solitons.
SOLITON_DENSITY_FRACTION = 0.9


def density_map(rec: EvolutionRecord) -> np.ndarray:
    """|psi(y, t_k)|^2 arranged as (time, space), linear values."""
    return np.array([np.abs(f.values) ** 2 for f in rec.snapshots])


def difference_map(a: EvolutionRecord, b: EvolutionRecord) -> np.ndarray:
    """Signed density difference |psi_a|^2 - |psi_b|^2 per snapshot."""
    if a.grid != b.grid or len(a.snapshots) != len(b.snapshots) or a.T != b.T:
        raise InvalidParameterError("records live on different grids or snapshot times")
    return density_map(a) - density_map(b)


@dataclass(frozen=True)
class MetricField:
    """Acoustic metric of a repulsive nonlinear background.

    Built from the density n = |psi|^2, flow velocity v = (hbar/m) d(arg
    psi)/dy and sound speed c_s = sqrt(g n / m); the overall prefactor is
    m n / c with the analogue light speed identified with the local c_s,
    so only ratios of components are physically meaningful.  core_mask
    flags points where the density is too small for the phase gradient to
    mean anything (v is reported as 0 there).
    """

    density: np.ndarray
    velocity: np.ndarray
    sound_speed: np.ndarray
    g00: np.ndarray
    g0y: np.ndarray
    gyy: np.ndarray
    core_mask: np.ndarray


def acoustic_metric(f: Field, p: PhysicsParams) -> MetricField:
    """Assemble the effective metric seen by long-wavelength excitations.

    Requires g > 0 (no sonic metric for attractive or linear media).  The
    phase gradient is computed from nearest-neighbor phase differences,
    which is wrap-safe and exact for plane waves.
    """
    if p.g <= 0:
        raise InvalidParameterError(f"acoustic metric needs repulsive g > 0, got {p.g}")
    v = f.values
    n = v.real**2 + v.imag**2

    # Central difference of the phase via local pairwise differences:
    # angle(psi_{j+1} conj(psi_{j-1})) / (2 dy), periodic in j.
    fwd = np.roll(v, -1)
    bwd = np.roll(v, 1)
    dphase = np.angle(fwd * np.conj(bwd)) / (2.0 * f.grid.dy)
    core = n < CORE_DENSITY_FRACTION * np.max(n)
    velocity = np.where(core, 0.0, (p.hbar / p.mass) * dphase)

    sound_speed = np.sqrt(p.g * n / p.mass)
    with np.errstate(divide="ignore", invalid="ignore"):
        prefactor = np.where(n > 0, p.mass * n / sound_speed, 0.0)
    g00 = -prefactor * (sound_speed**2 - velocity**2)
    g0y = -prefactor * velocity
    gyy = prefactor.copy()
    return MetricField(
        density=n,
        velocity=velocity,
        sound_speed=sound_speed,
        g00=g00,
        g0y=g0y,
        gyy=gyy,
        core_mask=core,
    )


@dataclass
class SolitonTrack:
    """One linked density minimum followed through the snapshots."""

    times: np.ndarray
    positions: np.ndarray
    min_densities: np.ndarray

    @property
    def speed(self) -> float:
        """Least-squares slope of position vs time."""
        if len(self.times) < 2:
            return 0.0
        return float(np.polyfit(self.times, self.positions, 1)[0])

    @property
    def depth(self) -> float:
        """Representative minimum density (median over the track)."""
        return float(np.median(self.min_densities))


def _find_minima(
    n: np.ndarray, y: np.ndarray, dy: float, threshold: float, margin: float, L: float
) -> list[tuple[float, float]]:
    """Sub-grid refined (position, min_density) pairs below threshold."""
    prev = np.roll(n, 1)
    nxt = np.roll(n, -1)
    is_min = (n < prev) & (n <= nxt) & (n < threshold)
    is_min &= np.abs(y) < (L / 2.0 - margin)
    out = []
    for j in np.nonzero(is_min)[0]:
        a, b, c = prev[j], n[j], nxt[j]
        curv = a - 2.0 * b + c
        if curv > 0:
            # parabolic vertex through the three samples
            offset = 0.5 * (a - c) / curv
            pos = y[j] + offset * dy
            val = b - 0.125 * (a - c) ** 2 / curv
        else:
            pos, val = y[j], b
        out.append((float(pos), float(val)))
    return out


class _OpenTrack:
    __slots__ = ("times", "positions", "depths", "misses")

    def __init__(self, t: float, pos: float, depth: float):
        self.times = [t]
        self.positions = [pos]
        self.depths = [depth]
        self.misses = 0

    def velocity(self) -> float:
        if len(self.times) < 2:
            return 0.0
        k = min(len(self.times), 5)
        return float(np.polyfit(self.times[-k:], self.positions[-k:], 1)[0])

    def predict(self, t: float) -> float:
        return self.positions[-1] + self.velocity() * (t - self.times[-1])


def detect_soliton_tracks(
    rec: EvolutionRecord,
    background_n0: float,
    link_radius: float | None = None,
    max_gap: int = 3,
) -> list[SolitonTrack]:
    """Follow density minima below 0.9*n0 through the snapshots.

    Minima are refined to sub-grid accuracy, then linked across snapshots
    by nearest-neighbor continuation against a linearly extrapolated
    position (which keeps identities through soliton crossings, where the
    raw minima can briefly merge).  Positions are unwrapped across the
    periodic boundary so the least-squares speed is meaningful.
    """
    grid = rec.grid
    if link_radius is None:
        link_radius = 4.0 * grid.dy
    L = grid.length
    margin = max(6.0 * grid.dy, 0.03 * L)
    threshold = SOLITON_DENSITY_FRACTION * background_n0
    y = grid.y()
    times = rec.times()

    open_tracks: list[_OpenTrack] = []
    closed: list[_OpenTrack] = []
    for idx, f in enumerate(rec.snapshots):
        n = np.abs(f.values) ** 2
        minima = _find_minima(n, y, grid.dy, threshold, margin, L)
        t = float(times[idx])

        # greedy nearest match between predicted track positions and minima
        pairs = []
        for ti, tr in enumerate(open_tracks):
            pred = tr.predict(t)
            for mi, (pos, _) in enumerate(minima):
                d = abs((pred - pos + L / 2.0) % L - L / 2.0)
                if d <= link_radius:
                    pairs.append((d, ti, mi))
        pairs.sort()
        used_tracks: set[int] = set()
        used_minima: set[int] = set()
        for d, ti, mi in pairs:
            if ti in used_tracks or mi in used_minima:
                continue
            used_tracks.add(ti)
            used_minima.add(mi)
            tr = open_tracks[ti]
            pos, depth = minima[mi]
            # unwrap: keep the recorded position continuous with the track
            pred = tr.predict(t)
            pos += round((pred - pos) / L) * L
            tr.times.append(t)
            tr.positions.append(pos)
            tr.depths.append(depth)
            tr.misses = 0

        survivors = []
        for ti, tr in enumerate(open_tracks):
            if ti in used_tracks:
                survivors.append(tr)
                continue
            tr.misses += 1
            if tr.misses > max_gap:
                closed.append(tr)
            else:
                survivors.append(tr)
        open_tracks = survivors
        for mi, (pos, depth) in enumerate(minima):
            if mi not in used_minima:
                open_tracks.append(_OpenTrack(t, pos, depth))

    closed.extend(open_tracks)
    tracks = [
        SolitonTrack(
            times=np.array(tr.times),
            positions=np.array(tr.positions),
            min_densities=np.array(tr.depths),
        )
        for tr in closed
    ]
    tracks.sort(key=lambda tr: tr.times[0])
    return tracks


def count_separated_maxima(
    values: np.ndarray, dy: float, threshold_frac: float = 0.1, min_separation: float = 8.0
) -> int:
    """Count groups of local maxima above threshold_frac * max(values).

    Maxima closer than min_separation to each other are merged into one
    group (interference fringes inside one packet count once).
    """
    v = np.asarray(values, dtype=np.float64)
    if np.max(v) <= 0:
        return 0
    thresh = threshold_frac * np.max(v)
    prev = np.roll(v, 1)
    nxt = np.roll(v, -1)
    idx = np.nonzero((v > prev) & (v >= nxt) & (v > thresh))[0]
    if len(idx) == 0:
        return 0
    groups = 1
    for a, b in zip(idx[:-1], idx[1:]):
        if (b - a) * dy > min_separation:
            groups += 1
    return groups
