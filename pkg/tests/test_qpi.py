import numpy as np
import pytest

from mpdsim.geometry import InvalidSetupError, PathIndex
from mpdsim.histories import auto_grid, prob_slit_set
from mpdsim.qpi import best_candidate, find_destructive, qpi_probabilities


def test_requires_two_one_one_layout(sim1_setup):
    with pytest.raises(InvalidSetupError):
        find_destructive(sim1_setup)


def test_single_path_margin_is_zero(sim2_setup):
    from mpdsim.qpi import _plane3_amps

    psi = _plane3_amps(sim2_setup, [140.0], np.linspace(-200.0, 400.0, 61))
    single = np.abs(psi[1]) ** 2 - np.abs(0.0 + psi[1]) ** 2
    assert np.all(single == 0.0)


def test_superposed_equals_single_when_one_slit_used(sim2_setup):
    grid = auto_grid(sim2_setup, 2)
    one = prob_slit_set(sim2_setup, grid, [PathIndex((1,))], 2, (0,))
    rep = qpi_probabilities(sim2_setup, 140.0, 143.0)
    assert rep.probs["p12_21"] == pytest.approx(one, rel=1e-12)


def test_first_inequality_any_placement(sim2_setup, rng):
    for _ in range(5):
        x21 = float(rng.uniform(0.0, 400.0))
        x31 = float(rng.uniform(-500.0, 700.0))
        rep = qpi_probabilities(sim2_setup, x21, x31)
        assert rep.verdicts[0]
        # residual cross terms are of order exp(-16) for slits 8 widths apart
        assert rep.probs["p1_12"] == pytest.approx(
            rep.probs["p1_1"] + rep.probs["p1_2"], abs=1e-7
        )


def test_probabilities_in_unit_interval(sim2_setup):
    rep = qpi_probabilities(sim2_setup, 140.0, 143.0)
    for v in rep.probs.values():
        assert 0.0 <= v <= 1.0


def test_cross_term_sign_agreement_at_strongest_constructive(sim2_setup):
    cands = find_destructive(sim2_setup, with_probs=True)
    strongest = max(cands, key=lambda r: r.constructive_margin)
    cross = (strongest.probs["p12_121"] - strongest.probs["p12_11"]
             - strongest.probs["p12_21"])
    assert strongest.constructive_margin > 0 and cross > 0
    # agreement holds for the majority of constructive placements
    agree = sum(
        (r.probs["p12_121"] - r.probs["p12_11"] - r.probs["p12_21"]) > 0
        for r in cands
    )
    assert agree > len(cands) / 2


def test_empty_constructive_region(sim2_setup):
    # the 64..75 um band interferes destructively on the second plane
    cands = find_destructive(sim2_setup, x21_values=np.arange(64.0, 76.0, 1.0),
                             x31_values=np.arange(-50.0, 50.0, 1.0),
                             with_probs=False)
    assert cands == []


def test_empty_range_rejected(sim2_setup):
    with pytest.raises(InvalidSetupError):
        find_destructive(sim2_setup, x21_values=[], x31_values=[0.0])
    with pytest.raises(InvalidSetupError):
        best_candidate([])


def test_grid_refinement_moves_optimum_at_most_one_step(sim2_setup):
    full = find_destructive(sim2_setup, x21_values=np.arange(130.0, 151.0, 1.0),
                            x31_values=np.arange(133.0, 154.0, 1.0),
                            with_probs=False)
    half = find_destructive(sim2_setup, x21_values=np.arange(130.0, 150.6, 0.5),
                            x31_values=np.arange(133.0, 153.6, 0.5),
                            with_probs=False)
    b_full = best_candidate(full)
    b_half = best_candidate(half)
    assert abs(b_full.x21 - b_half.x21) <= 1.0
    assert abs(b_full.x31 - b_half.x31) <= 1.0
