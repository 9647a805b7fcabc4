"""History events, Gaussian slit/measurement gains, and probability integrals.

A history is a time-ordered list of per-plane events acting on the source
state: project onto one slit, project onto a superposition of slits, or
measure at the plane. Probabilities are quadrature integrals of gain-weighted
superposed path intensities on a uniform grid (composite trapezoid rule).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import InvalidSetupError, PathIndex, PhysicalSetup, PlaneSpec, SlitOverlapWarning
from .propagation import coeffs_for_plane, superposed_wavefunction

DEFAULT_STEP = 1.0  # um, sampling period of all probability integrals
DOMAIN_WIDTHS = 8.0  # grid half-extent in local beam widths


class EventKind(Enum):
    SLIT_PROJECTION = "slit-projection"
    SLIT_SUPERPOSITION = "slit-set-superposition"
    MEASUREMENT = "measurement"


@dataclass(frozen=True)
class EventSpec:
    """One event of a history: plane is 1-based; slits holds the projected
    slit index (singleton) or slit-index set, empty for a measurement."""

    kind: EventKind
    plane: int
    slits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "slits", tuple(sorted(int(s) for s in self.slits)))
        if self.plane < 1:
            raise InvalidSetupError(f"plane index must be >= 1, got {self.plane}")
        if self.kind is EventKind.MEASUREMENT:
            if self.slits:
                raise InvalidSetupError("measurement events carry no slit indices")
        elif not self.slits:
            raise InvalidSetupError(f"{self.kind.value} event needs at least one slit")
        elif self.kind is EventKind.SLIT_PROJECTION and len(self.slits) != 1:
            raise InvalidSetupError("slit projection takes exactly one slit index")


def slit_projection(plane: int, slit: int) -> EventSpec:
    return EventSpec(EventKind.SLIT_PROJECTION, plane, (slit,))


def slit_superposition(plane: int, slits) -> EventSpec:
    return EventSpec(EventKind.SLIT_SUPERPOSITION, plane, tuple(slits))


def measurement(plane: int) -> EventSpec:
    return EventSpec(EventKind.MEASUREMENT, plane)


@dataclass(frozen=True)
class HistorySpec:
    """Events in increasing time order, implicitly preceded by the source
    state. Sequences that are dynamically impossible (events after a
    measurement, repeated or skipped planes) carry zero probability."""

    events: tuple[EventSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise InvalidSetupError("history needs at least one event")

    def impossibility(self) -> str | None:
        """None if dynamically possible, else a human-readable reason."""
        for k, ev in enumerate(self.events):
            if k and self.events[k - 1].kind is EventKind.MEASUREMENT:
                return f"event after a measurement at plane {self.events[k - 1].plane}"
            if ev.plane != k + 1:
                prev = self.events[k - 1].plane if k else 0
                if ev.plane <= prev:
                    return f"non-increasing plane order at event {k + 1}"
                return f"plane {prev + 1} skipped before event {k + 1}"
        return None


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform sampling grid for the probability integrals."""

    x_min: float
    x_max: float
    step: float = DEFAULT_STEP

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise InvalidSetupError(f"grid step must be positive, got {self.step}")
        if self.x_min >= self.x_max:
            raise InvalidSetupError(f"empty grid domain [{self.x_min}, {self.x_max}]")

    def points(self) -> np.ndarray:
        n = int(np.ceil((self.x_max - self.x_min) / self.step)) + 1
        return self.x_min + self.step * np.arange(n)

    def refined(self, factor: int = 2) -> "QuadratureGrid":
        return QuadratureGrid(self.x_min, self.x_max, self.step / factor)


def auto_grid(setup: PhysicalSetup, plane: int, step: float = DEFAULT_STEP) -> QuadratureGrid:
    """Grid at a plane covering every slit center and every path-envelope
    mean, extended by eight local beam widths on each side.

    The envelope of a path amplitude is exp(2*Re(quad)*x^2 + 2*Re(lin.xv)*x),
    a Gaussian with mean -Re(lin.xv)/(2*Re(quad)) and std 1/sqrt(-2*Re(quad));
    the beam width is 2*sqrt(2) standard deviations.
    """
    coeffs = coeffs_for_plane(setup, plane)
    A = coeffs.quad.real
    width = 2.0 * np.sqrt(2.0) / np.sqrt(-2.0 * A)
    anchors = [0.0]
    if plane <= setup.n_planes:
        anchors.extend(setup.planes[plane - 1].slit_centers)
    lin_r = coeffs.lin.real
    for prior in _slit_choice_products(setup, plane - 1):
        xv = np.array([setup.planes[j].slit_centers[s] for j, s in enumerate(prior)])
        anchors.extend(np.atleast_1d(xv))  # slit centers feeding this plane
        anchors.append(-float(lin_r @ xv) / (2.0 * A))
    lo = min(anchors) - DOMAIN_WIDTHS * width
    hi = max(anchors) + DOMAIN_WIDTHS * width
    return QuadratureGrid(lo, hi, step)


def _slit_choice_products(setup: PhysicalSetup, n_planes: int):
    combos = [()]
    for plane in setup.planes[:n_planes]:
        combos = [c + (s,) for c in combos for s in range(plane.n_slits)]
    return combos


def slit_gain(plane: PlaneSpec, i: int, x):
    """Gaussian transmission exp(-(x - X_i)^2 / (2 beta^2)) of slit i."""
    if not 0 <= i < plane.n_slits:
        raise InvalidSetupError(f"slit index {i} out of range [0, {plane.n_slits})")
    x = np.asarray(x, dtype=float)
    return np.exp(-((x - plane.slit_centers[i]) ** 2) / (2.0 * plane.beta**2))


def measure_gain_sq(plane: PlaneSpec, x):
    """Detection weight 1 - (sum of slit gains)^2, clamped at 0 (with a
    warning) where overlapping slit gains push the expression negative."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for i in range(plane.n_slits):
        total += slit_gain(plane, i, x)
    out = 1.0 - total**2
    if np.any(out < 0):
        warnings.warn(
            "slit gains overlap enough to exceed unit transmission; "
            "clamping the measurement weight at 0",
            SlitOverlapWarning,
            stacklevel=2,
        )
        out = np.maximum(out, 0.0)
    return out


def _superposed_intensity(setup: PhysicalSetup, plane: int, incoming_paths, x) -> np.ndarray:
    if not incoming_paths:
        raise InvalidSetupError("empty incoming path set")
    for p in incoming_paths:
        if len(p.slit_choices) != plane - 1:
            raise InvalidSetupError(
                f"incoming path {p.slit_choices} does not terminate just "
                f"before plane {plane}"
            )
        p.validate(setup)
    coeffs = coeffs_for_plane(setup, plane)
    psi = superposed_wavefunction(coeffs, incoming_paths, x)
    return np.abs(psi) ** 2


def prob_slit_set(setup: PhysicalSetup, grid: QuadratureGrid, incoming_paths,
                  plane: int, slit_set) -> float:
    """Probability that the superposed incoming wave diffracts through the
    given slit set (coherent gain sum) at the plane."""
    slit_set = tuple(slit_set)
    if not slit_set:
        raise InvalidSetupError("empty slit set")
    x = grid.points()
    spec = setup.planes[plane - 1]
    gain = np.zeros_like(x)
    for i in slit_set:
        gain += slit_gain(spec, i, x)
    dens = _superposed_intensity(setup, plane, incoming_paths, x)
    return float(np.trapezoid(gain**2 * dens, x))


def prob_measure(setup: PhysicalSetup, grid: QuadratureGrid, incoming_paths,
                 plane: int) -> float:
    """Probability that the wave is detected (not transmitted) at the plane."""
    x = grid.points()
    dens = _superposed_intensity(setup, plane, incoming_paths, x)
    if plane > setup.n_planes or setup.planes[plane - 1].n_slits == 0:
        weight = np.ones_like(x)
    else:
        weight = measure_gain_sq(setup.planes[plane - 1], x)
    return float(np.trapezoid(weight * dens, x))


@dataclass(frozen=True)
class HistoryWeight:
    """Probability of one history; possible=False flags a zero-probability
    (dynamically impossible) sequence."""

    weight: float
    possible: bool
    reason: str | None = None


def history_weight(setup: PhysicalSetup, grid: QuadratureGrid | None,
                   history: HistorySpec) -> HistoryWeight:
    """Weight of a history: chained slit events branch the path set, and the
    final event's gain-weighted intensity integral gives the probability.

    grid=None auto-sizes the grid at the final event's plane with the
    default step.
    """
    reason = history.impossibility()
    if reason is not None:
        return HistoryWeight(0.0, False, reason)
    last = history.events[-1]
    branches = [()]
    for ev in history.events[:-1]:
        branches = [b + (s,) for b in branches for s in ev.slits]
    paths = [PathIndex(b) for b in branches]
    if grid is None:
        grid = auto_grid(setup, last.plane)
    if last.kind is EventKind.MEASUREMENT:
        w = prob_measure(setup, grid, paths, last.plane)
    else:
        w = prob_slit_set(setup, grid, paths, last.plane, last.slits)
    return HistoryWeight(w, True)
