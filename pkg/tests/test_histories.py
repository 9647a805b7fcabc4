import math

import numpy as np
import pytest

from mpdsim.geometry import InvalidSetupError, PathIndex, PlaneSpec, SlitOverlapWarning
from mpdsim.histories import (
    EventKind,
    EventSpec,
    HistorySpec,
    QuadratureGrid,
    auto_grid,
    history_weight,
    measure_gain_sq,
    measurement,
    prob_measure,
    prob_slit_set,
    slit_gain,
    slit_projection,
    slit_superposition,
)
from mpdsim.propagation import source_coeffs


def test_slit_gain_values(sim1_setup):
    plane = sim1_setup.planes[0]
    x0 = plane.slit_centers[1]
    assert slit_gain(plane, 1, x0) == pytest.approx(1.0)
    assert slit_gain(plane, 1, x0 + math.sqrt(2) * plane.beta) == pytest.approx(
        math.exp(-1.0)
    )
    # neighbouring-slit leakage at 7-width separation
    leak = slit_gain(PlaneSpec((0.0, 7 * 10.0), 10.0), 0, 70.0)
    assert leak == pytest.approx(math.exp(-24.5)) and leak < 1e-10


def test_measure_gain_sq_limits(sim1_setup):
    plane = sim1_setup.planes[1]
    assert measure_gain_sq(plane, 1e5) == pytest.approx(1.0)
    with pytest.warns(SlitOverlapWarning):
        # neighbouring-slit leakage pushes the summed gain just above 1
        blocked = measure_gain_sq(plane, plane.slit_centers[0])
    assert blocked == pytest.approx(0.0, abs=1e-10)


def test_measure_gain_clamped_with_warning():
    with pytest.warns(SlitOverlapWarning):
        overlapping = PlaneSpec((0.0, 15.0), 10.0)
        out = measure_gain_sq(overlapping, np.array([7.5]))
    assert np.all(out >= 0.0)


def test_trace_preserving_completeness(sim1_setup):
    grid = auto_grid(sim1_setup, 2, step=0.25)
    x = grid.points()
    paths = [PathIndex((i,)) for i in range(3)]
    total_in = prob_measure(sim1_setup, grid, paths, 2) + prob_slit_set(
        sim1_setup, grid, paths, 2, (0, 1, 2)
    )
    from mpdsim.propagation import superposed_wavefunction, two_plane_coeffs

    dens = np.abs(superposed_wavefunction(two_plane_coeffs(sim1_setup), paths, x)) ** 2
    assert total_in == pytest.approx(float(np.trapezoid(dens, x)), abs=1e-9)


def test_mirror_symmetric_first_plane(sim2_setup):
    grid = auto_grid(sim2_setup, 1, step=0.25)
    src = [PathIndex(())]
    p1 = prob_slit_set(sim2_setup, grid, src, 1, (0,))
    p2 = prob_slit_set(sim2_setup, grid, src, 1, (1,))
    assert p1 == pytest.approx(p2, abs=1e-10)


def test_pair_additivity(sim2_setup):
    grid = auto_grid(sim2_setup, 1, step=0.25)
    src = [PathIndex(())]
    p12 = prob_slit_set(sim2_setup, grid, src, 1, (0, 1))
    p1 = prob_slit_set(sim2_setup, grid, src, 1, (0,))
    p2 = prob_slit_set(sim2_setup, grid, src, 1, (1,))
    # residual cross terms are of order exp(-16) for slits 8 widths apart
    assert p12 == pytest.approx(p1 + p2, abs=1e-7)


def test_pair_conversion_identity(sim1_setup):
    grid = auto_grid(sim1_setup, 1, step=0.25)
    src = [PathIndex(())]
    singles = [prob_slit_set(sim1_setup, grid, src, 1, (i,)) for i in range(3)]
    pairs = {p: prob_slit_set(sim1_setup, grid, src, 1, p)
             for p in ((0, 1), (0, 2), (1, 2))}
    inferred = 0.5 * (pairs[(0, 1)] + pairs[(0, 2)] - pairs[(1, 2)])
    assert inferred == pytest.approx(singles[0], abs=1e-8)


def test_prob_input_validation(sim1_setup):
    grid = auto_grid(sim1_setup, 1)
    with pytest.raises(InvalidSetupError):
        prob_slit_set(sim1_setup, grid, [], 1, (0,))
    with pytest.raises(InvalidSetupError):
        prob_slit_set(sim1_setup, grid, [PathIndex(())], 1, ())
    with pytest.raises(InvalidSetupError):
        prob_slit_set(sim1_setup, grid, [PathIndex((0,))], 1, (0,))


def test_grid_validation():
    with pytest.raises(InvalidSetupError):
        QuadratureGrid(0.0, 10.0, step=0.0)
    with pytest.raises(InvalidSetupError):
        QuadratureGrid(10.0, 0.0)
    g = QuadratureGrid(-5.0, 5.0, 1.0)
    assert g.refined().step == pytest.approx(0.5)
    assert g.points()[0] == -5.0 and g.points()[-1] >= 5.0


def test_auto_grid_covers_slits_and_envelopes(sim1_setup):
    grid = auto_grid(sim1_setup, 2)
    centers = sim1_setup.planes[1].slit_centers
    assert grid.x_min < min(centers) and grid.x_max > max(centers)
    width = 2 * math.sqrt(2) / math.sqrt(
        -2 * source_coeffs(sim1_setup).quad.real
    )
    g1 = auto_grid(sim1_setup, 1)
    assert g1.x_max - g1.x_min > 2 * 8 * width


def test_impossible_histories_zero_flagged(sim1_setup):
    bad = [
        HistorySpec((measurement(1), measurement(2))),  # event after measurement
        HistorySpec((slit_projection(1, 0), slit_projection(1, 1))),  # repeated plane
        HistorySpec((slit_projection(2, 0),)),  # skipped plane
        HistorySpec((slit_projection(1, 0), measurement(2), measurement(2))),
    ]
    for h in bad:
        w = history_weight(sim1_setup, None, h)
        assert w.weight == 0.0 and not w.possible and w.reason


def test_event_validation():
    with pytest.raises(InvalidSetupError):
        EventSpec(EventKind.MEASUREMENT, 1, (0,))
    with pytest.raises(InvalidSetupError):
        EventSpec(EventKind.SLIT_PROJECTION, 1, (0, 1))
    with pytest.raises(InvalidSetupError):
        EventSpec(EventKind.SLIT_SUPERPOSITION, 1, ())
    with pytest.raises(InvalidSetupError):
        HistorySpec(())


def test_identity_family_sums_to_one(sim1_setup):
    grid1 = auto_grid(sim1_setup, 1, step=0.25)
    grid2 = auto_grid(sim1_setup, 2, step=0.25)
    total = history_weight(sim1_setup, grid1, HistorySpec((measurement(1),))).weight
    for i in range(3):
        for c in range(3):
            total += history_weight(
                sim1_setup, grid2,
                HistorySpec((slit_projection(1, i), slit_projection(2, c))),
            ).weight
        total += history_weight(
            sim1_setup, grid2,
            HistorySpec((slit_projection(1, i), measurement(2))),
        ).weight
    assert total == pytest.approx(1.0, abs=1e-6)


def test_history_weight_matches_direct_chain(sim1_setup):
    grid = auto_grid(sim1_setup, 2, step=0.25)
    h = HistorySpec((slit_projection(1, 0), slit_projection(2, 1)))
    w = history_weight(sim1_setup, grid, h).weight
    direct = prob_slit_set(sim1_setup, grid, [PathIndex((0,))], 2, (1,))
    assert w == pytest.approx(direct, rel=1e-10)
    hs = HistorySpec((slit_superposition(1, (0, 2)), measurement(2)))
    ws = history_weight(sim1_setup, grid, hs).weight
    assert ws == pytest.approx(
        prob_measure(sim1_setup, grid, [PathIndex((0,)), PathIndex((2,))], 2),
        rel=1e-10,
    )


@pytest.mark.parametrize("plane", [1, 2])
def test_grid_refinement_stability(sim1_setup, plane):
    coarse = auto_grid(sim1_setup, plane, step=1.0)
    fine = coarse.refined()
    paths = [PathIndex(())] if plane == 1 else [PathIndex((i,)) for i in range(3)]
    for slit_set in ((0,), (0, 1)):
        a = prob_slit_set(sim1_setup, coarse, paths, plane, slit_set)
        b = prob_slit_set(sim1_setup, fine, paths, plane, slit_set)
        assert abs(a - b) / b < 1e-6
