"""Experiment geometry: Gaussian source, slit planes, interplane timings."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .units import Constants, DEFAULT_CONSTANTS

# Mutual-exclusivity bound: neighbouring slit gains must overlap less than
# this for the squared-sum measurement weight to be trustworthy.
SLIT_OVERLAP_LIMIT = 1e-6


class InvalidSetupError(ValueError):
    """Raised when a geometry violates a hard constraint."""


class SlitOverlapWarning(UserWarning):
    """Slits on one plane are close enough for their gains to overlap."""


@dataclass(frozen=True)
class PlaneSpec:
    """One diffraction plane: slit centers (um) and the common Gaussian
    slit parameter beta (um). The effective slit width is W = 2*sqrt(2)*beta,
    the full width at the 1/e^2 intensity drop."""

    slit_centers: tuple[float, ...]
    beta: float

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise InvalidSetupError(f"beta must be positive, got {self.beta}")
        centers = tuple(float(x) for x in self.slit_centers)
        object.__setattr__(self, "slit_centers", centers)
        if any(b >= a for a, b in zip(centers[1:], centers)):
            raise InvalidSetupError(f"slit centers must be strictly increasing: {centers}")

    @property
    def n_slits(self) -> int:
        return len(self.slit_centers)

    @property
    def effective_width(self) -> float:
        return 2.0 * math.sqrt(2.0) * self.beta

    def overlap_factors(self) -> list[tuple[int, int, float]]:
        """Pairwise gain overlap exp(-(Xi-Xj)^2/(2 beta^2)) for all slit pairs."""
        out = []
        for i in range(self.n_slits):
            for j in range(i + 1, self.n_slits):
                d = self.slit_centers[j] - self.slit_centers[i]
                out.append((i, j, math.exp(-d * d / (2.0 * self.beta**2))))
        return out


@dataclass(frozen=True)
class PhysicalSetup:
    """Full experiment description.

    times[0] is the source-to-first-plane duration and times[j] the flight
    from plane j to plane j+1, so there is exactly one duration per plane.
    Wave functions are evaluated at a plane before its gains act, so the
    last plane may serve as the detection plane.
    """

    sigma0: float
    planes: tuple[PlaneSpec, ...]
    times: tuple[float, ...]
    constants: Constants = field(default=DEFAULT_CONSTANTS)

    def __post_init__(self) -> None:
        if self.sigma0 <= 0:
            raise InvalidSetupError(f"sigma0 must be positive, got {self.sigma0}")
        object.__setattr__(self, "planes", tuple(self.planes))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        if any(t <= 0 for t in self.times):
            raise InvalidSetupError(f"all durations must be positive: {self.times}")
        if len(self.times) != len(self.planes):
            raise InvalidSetupError(
                f"need exactly one duration per plane ({len(self.planes)}), "
                f"got {len(self.times)}"
            )
        for j, warning in self.overlap_violations():
            warnings.warn(
                f"plane {j + 1}: slit gain overlap {warning:.2e} exceeds "
                f"{SLIT_OVERLAP_LIMIT:.0e}; probabilities may double-count",
                SlitOverlapWarning,
                stacklevel=2,
            )

    def overlap_violations(self) -> list[tuple[int, float]]:
        """(plane index, overlap) pairs breaking the mutual-exclusivity bound."""
        bad = []
        for j, plane in enumerate(self.planes):
            for _, _, f in plane.overlap_factors():
                if f >= SLIT_OVERLAP_LIMIT:
                    bad.append((j, f))
        return bad

    @property
    def n_planes(self) -> int:
        return len(self.planes)


@dataclass(frozen=True)
class PathIndex:
    """Slit choices of one propagation path, zero-based, one per plane
    traversed before the evaluation plane."""

    slit_choices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slit_choices", tuple(int(s) for s in self.slit_choices))

    def validate(self, setup: PhysicalSetup) -> None:
        if len(self.slit_choices) > setup.n_planes:
            raise InvalidSetupError(
                f"path has {len(self.slit_choices)} slit choices but the setup "
                f"has only {setup.n_planes} planes"
            )
        for plane_j, s in enumerate(self.slit_choices):
            n = setup.planes[plane_j].n_slits
            if not 0 <= s < n:
                raise InvalidSetupError(
                    f"slit index {s} out of range [0, {n}) on plane {plane_j + 1}"
                )

    def centers(self, setup: PhysicalSetup) -> tuple[float, ...]:
        """Slit-center vector of the path, in plane order."""
        return tuple(setup.planes[j].slit_centers[s] for j, s in enumerate(self.slit_choices))


def all_paths(setup: PhysicalSetup, n_planes: int) -> list[PathIndex]:
    """Every slit-choice combination through the first n_planes planes,
    ordered lexicographically."""
    paths = [()]
    for plane in setup.planes[:n_planes]:
        paths = [p + (s,) for p in paths for s in range(plane.n_slits)]
    return [PathIndex(p) for p in paths]
