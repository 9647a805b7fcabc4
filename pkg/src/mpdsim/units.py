"""Physical constants and canonical units.

Lengths are micrometers, times are nanoseconds. The action scale is fixed
by hbar := 1 so the virtual photon mass becomes m = 2*pi/(lambda*c), which
keeps every closed-form coefficient ratio finite. All probabilities are
invariant under joint rescaling (m, hbar) -> (s*m, s*hbar), so the choice
of gauge is free; the test suite certifies this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 3.0e5  # um/ns
DEFAULT_WAVELENGTH = 0.65  # um


def virtual_mass(wavelength: float, c: float = SPEED_OF_LIGHT, hbar: float = 1.0) -> float:
    """Mass parameter m = hbar*(2*pi/wavelength)/c of the paraxial kernel.

    With this choice the optical Fresnel propagator is formally identical
    to the free-particle evolution kernel.
    """
    if wavelength <= 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if c <= 0:
        raise ValueError(f"speed must be positive, got {c}")
    return hbar * (2.0 * math.pi / wavelength) / c


@dataclass(frozen=True)
class Constants:
    """Unit system for one simulation run.

    The mass is derived, never stored, so m/hbar = 2*pi/(wavelength*c)
    holds exactly at any hbar scale.
    """

    wavelength: float = DEFAULT_WAVELENGTH  # um
    c: float = SPEED_OF_LIGHT  # um/ns
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.wavelength <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if self.c <= 0:
            raise ValueError(f"speed must be positive, got {self.c}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def m(self) -> float:
        return virtual_mass(self.wavelength, self.c, self.hbar)

    def scaled(self, s: float) -> "Constants":
        """Jointly rescaled copy (m, hbar) -> (s*m, s*hbar)."""
        if s <= 0:
            raise ValueError(f"scale must be positive, got {s}")
        return Constants(self.wavelength, self.c, self.hbar * s)


DEFAULT_CONSTANTS = Constants()
