"""Source-coherence feasibility of the diffraction scenarios.

The spatial coherence diameter of the propagated Gaussian beam must cover
the transverse extent of each diffraction stage; the per-stage inequalities
D_c >= D_j gate whether an experiment with a realistic source can realize
the simulated interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import InvalidSetupError, PhysicalSetup
from .units import Constants, DEFAULT_CONSTANTS

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CoherenceReport:
    """Per-stage coherence diameters, the setup diameters they must cover,
    and the per-inequality verdicts."""

    dc_values: tuple[float, ...]
    d_setup: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.dc_values) != len(self.d_setup):
            raise InvalidSetupError("one coherence diameter is needed per stage")
        if any(d <= 0 for d in self.d_setup):
            raise InvalidSetupError(f"setup diameters must be positive: {self.d_setup}")

    @property
    def feasible(self) -> tuple[bool, ...]:
        return tuple(dc >= d for dc, d in zip(self.dc_values, self.d_setup))

    @property
    def all_feasible(self) -> bool:
        return all(self.feasible)


def coherence_diameter(t: float, sigma: float, k: Constants = DEFAULT_CONSTANTS) -> float:
    """Beam width 2*sqrt(2)*sigma_D = 2/sqrt(-A0) of a Gaussian of initial
    std sigma propagated for time t; reduces to 2*sqrt(2)*sigma at t = 0."""
    if t < 0:
        raise InvalidSetupError(f"duration must be nonnegative, got {t}")
    if sigma <= 0:
        raise InvalidSetupError(f"source std must be positive, got {sigma}")
    m, hbar = k.m, k.hbar
    a0 = -(m**2) * sigma**2 / (2.0 * hbar**2 * t**2 + 2.0 * m**2 * sigma**4)
    return 2.0 / math.sqrt(-a0)


def temporal_coherence_length(delta_lambda: float, wavelength: float,
                              n_r: float = 1.0) -> float:
    """Coherence length sqrt(2 ln2 / (pi n_r)) * wavelength^2 / delta_lambda
    of a source with Gaussian spectral FWHM delta_lambda."""
    if delta_lambda <= 0 or wavelength <= 0 or n_r <= 0:
        raise InvalidSetupError("spectral width, wavelength and index must be positive")
    return math.sqrt(2.0 * math.log(2.0) / (math.pi * n_r)) * wavelength**2 / delta_lambda


def _extent(centers, beta: float) -> float:
    """Transverse diameter 2*(max |X| + sqrt(2)*beta) spanned by a slit row."""
    return 2.0 * (max(abs(c) for c in centers) + SQRT2 * beta)


def check_lgi_coherence(setup: PhysicalSetup) -> CoherenceReport:
    """Two-stage feasibility for the triple-slit two-plane layout: the
    source beam must cover the first slit row, and a slit-resourced beam
    (std beta1) must cover the combined extent of both rows."""
    if setup.n_planes < 2:
        raise InvalidSetupError("need two planes for the two-stage check")
    p1, p2 = setup.planes[0], setup.planes[1]
    d1 = _extent(p1.slit_centers, p1.beta)
    d2 = d1 + _extent(p2.slit_centers, p2.beta)
    dc = (
        coherence_diameter(setup.times[0], setup.sigma0, setup.constants),
        coherence_diameter(setup.times[1], p1.beta, setup.constants),
    )
    return CoherenceReport(dc, (d1, d2))


def check_qpi_coherence(setup: PhysicalSetup, x21: float, x31: float) -> CoherenceReport:
    """Three-stage feasibility for the path-interference layout with the
    second- and third-plane slits at x21 and x31."""
    if setup.n_planes < 3:
        raise InvalidSetupError("need three planes for the three-stage check")
    p1, p2, p3 = setup.planes[0], setup.planes[1], setup.planes[2]
    d1 = _extent(p1.slit_centers, p1.beta)
    d2 = 2.0 * max(abs(c) for c in p1.slit_centers) + 2.0 * x21 + 2.0 * SQRT2 * p2.beta
    d3 = 2.0 * (abs(x31 - x21) + SQRT2 * p3.beta)
    dc = (
        coherence_diameter(setup.times[0], setup.sigma0, setup.constants),
        coherence_diameter(setup.times[1], p1.beta, setup.constants),
        coherence_diameter(setup.times[2], p2.beta, setup.constants),
    )
    return CoherenceReport(dc, (d1, d2, d3))
