"""Temporal path interference in a three-plane cascade.

Two slits on the first plane create two path histories that interfere at a
single movable slit on the second plane and again at one on the third. The
search places the second-plane slit where the paths add constructively and
then finds the third-plane position where they interfere destructively,
producing the counterintuitive ordering of the chained probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geometry import InvalidSetupError, PathIndex, PhysicalSetup, PlaneSpec
from .histories import DEFAULT_STEP, auto_grid, prob_slit_set
from .propagation import three_plane_coeffs, two_plane_coeffs

X21_RANGE = (0.0, 500.0)
X31_RANGE = (-600.0, 800.0)


@dataclass(frozen=True)
class QpiReport:
    """One candidate slit placement: the second- and third-plane centers,
    the point interference margins there (positive destructive margin means
    the superposition is dimmer than the single path), the nine chained
    probabilities, and the three inequality verdicts."""

    x21: float
    x31: float
    constructive_margin: float
    destructive_margin: float
    probs: dict[str, float]
    verdicts: tuple[bool, bool, bool]


def _require_qpi_setup(setup: PhysicalSetup) -> None:
    if setup.n_planes != 3 or setup.planes[0].n_slits != 2 \
            or setup.planes[1].n_slits != 1 or setup.planes[2].n_slits != 1:
        raise InvalidSetupError(
            "path-interference search needs two first-plane slits and one "
            "slit on each of the second and third planes"
        )


def _with_slits(setup: PhysicalSetup, x21: float, x31: float) -> PhysicalSetup:
    planes = (
        setup.planes[0],
        PlaneSpec((float(x21),), setup.planes[1].beta),
        PlaneSpec((float(x31),), setup.planes[2].beta),
    )
    return replace(setup, planes=planes)


def _plane2_amps(setup: PhysicalSetup, x):
    """Per-path amplitudes (2, len(x)) at the second plane."""
    c = two_plane_coeffs(setup)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    X1 = np.asarray(setup.planes[0].slit_centers, dtype=float)
    H = c.H[0, 0]
    lin = c.lin[0]
    return c.upsilon * np.exp(c.quad * x[None, :] ** 2 + H * X1[:, None] ** 2
                              + lin * X1[:, None] * x[None, :])


def _plane3_amps(setup: PhysicalSetup, x21, x3):
    """Per-path amplitudes (2, n21, n3) at the third plane for second-plane
    slit centers x21 and evaluation points x3."""
    c = three_plane_coeffs(setup)
    x21 = np.atleast_1d(np.asarray(x21, dtype=float))[None, :, None]
    x3 = np.atleast_1d(np.asarray(x3, dtype=float))[None, None, :]
    X1 = np.asarray(setup.planes[0].slit_centers, dtype=float)[:, None, None]
    phase = (c.quad * x3**2
             + c.H[0, 0] * X1**2 + c.H[1, 0] * X1 * x21 + c.H[1, 1] * x21**2
             + (c.lin[0] * X1 + c.lin[1] * x21) * x3)
    return c.upsilon * np.exp(phase)


def _margins(setup: PhysicalSetup, x21, x31):
    """(constructive plane-2 margin at x21, destructive plane-3 margin at
    x31), broadcasting over arrays of positions."""
    psi2 = _plane2_amps(setup, x21)
    cons = np.abs(psi2.sum(axis=0)) ** 2 - np.abs(psi2[1]) ** 2
    psi3 = _plane3_amps(setup, x21, x31)
    dest = np.abs(psi3[1]) ** 2 - np.abs(psi3.sum(axis=0)) ** 2
    return cons, dest


def qpi_probabilities(setup: PhysicalSetup, x21: float, x31: float,
                      step: float = DEFAULT_STEP) -> QpiReport:
    """Chained event probabilities and inequality verdicts for one placement
    of the second- and third-plane slits. Probabilities are raw (the
    verdicts are invariant under any common positive normalization)."""
    _require_qpi_setup(setup)
    s = _with_slits(setup, x21, x31)
    source = [PathIndex(())]
    both = [PathIndex((0,)), PathIndex((1,))]
    grid1 = auto_grid(s, 1, step)
    grid2 = auto_grid(s, 2, step)
    grid3 = auto_grid(s, 3, step)
    probs = {
        "p1_12": prob_slit_set(s, grid1, source, 1, (0, 1)),
        "p1_1": prob_slit_set(s, grid1, source, 1, (0,)),
        "p1_2": prob_slit_set(s, grid1, source, 1, (1,)),
        "p12_121": prob_slit_set(s, grid2, both, 2, (0,)),
        "p12_11": prob_slit_set(s, grid2, [PathIndex((0,))], 2, (0,)),
        "p12_21": prob_slit_set(s, grid2, [PathIndex((1,))], 2, (0,)),
        "p123_1211": prob_slit_set(s, grid3, [PathIndex((0, 0)), PathIndex((1, 0))], 3, (0,)),
        "p123_111": prob_slit_set(s, grid3, [PathIndex((0, 0))], 3, (0,)),
        "p123_211": prob_slit_set(s, grid3, [PathIndex((1, 0))], 3, (0,)),
    }
    verdicts = (
        probs["p1_12"] > probs["p1_2"],
        probs["p12_121"] > probs["p12_21"],
        probs["p123_1211"] < probs["p123_211"],
    )
    cons, dest = _margins(setup, [x21], [x31])
    return QpiReport(float(x21), float(x31), float(cons[0]), float(dest[0, 0]),
                     probs, verdicts)


def find_destructive(setup: PhysicalSetup,
                     x21_values=None, x31_values=None,
                     step: float = DEFAULT_STEP,
                     with_probs: bool = True) -> list[QpiReport]:
    """For every second-plane center where the two paths interfere
    constructively, the third-plane center maximizing the destructive margin
    (first maximum wins ties). Returns one candidate per constructive
    position, ordered by x21; empty list if no position is constructive."""
    _require_qpi_setup(setup)
    if x21_values is None:
        x21_values = np.arange(X21_RANGE[0], X21_RANGE[1] + step, step)
    if x31_values is None:
        x31_values = np.arange(X31_RANGE[0], X31_RANGE[1] + step, step)
    x21_values = np.asarray(x21_values, dtype=float)
    x31_values = np.asarray(x31_values, dtype=float)
    if x21_values.size == 0 or x31_values.size == 0:
        raise InvalidSetupError("empty search range")

    cons, dest = _margins(setup, x21_values, x31_values)
    out: list[QpiReport] = []
    for n, x21 in enumerate(x21_values):
        if cons[n] <= 0:
            continue
        k = int(np.argmax(dest[n]))
        x31 = float(x31_values[k])
        if with_probs:
            out.append(qpi_probabilities(setup, float(x21), x31, step))
        else:
            out.append(QpiReport(float(x21), x31, float(cons[n]),
                                 float(dest[n, k]), {}, (False, False, False)))
    return out


def best_candidate(candidates: list[QpiReport]) -> QpiReport:
    """Candidate with the largest destructive margin; smallest x21 wins ties."""
    if not candidates:
        raise InvalidSetupError("no constructive candidates to choose from")
    return max(candidates, key=lambda r: (r.destructive_margin, -r.x21))
