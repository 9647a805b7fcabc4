import math

import pytest

from mpdsim.geometry import (
    InvalidSetupError,
    PathIndex,
    PhysicalSetup,
    PlaneSpec,
    SlitOverlapWarning,
    all_paths,
)


def test_plane_validation():
    with pytest.raises(InvalidSetupError):
        PlaneSpec((0.0, 10.0), beta=-1.0)
    with pytest.raises(InvalidSetupError):
        PlaneSpec((10.0, 0.0), beta=5.0)
    with pytest.raises(InvalidSetupError):
        PlaneSpec((0.0, 0.0), beta=5.0)


def test_effective_width():
    plane = PlaneSpec((0.0,), beta=15.0)
    assert plane.effective_width == pytest.approx(2 * math.sqrt(2) * 15.0)


def test_overlap_factors():
    plane = PlaneSpec((0.0, 70.0), beta=10.0)
    (i, j, f), = plane.overlap_factors()
    assert (i, j) == (0, 1)
    assert f == pytest.approx(math.exp(-(70.0**2) / 200.0))


def test_setup_time_count_must_match_planes():
    plane = PlaneSpec((0.0,), beta=10.0)
    with pytest.raises(InvalidSetupError):
        PhysicalSetup(100.0, (plane, plane), (0.1,))
    with pytest.raises(InvalidSetupError):
        PhysicalSetup(100.0, (plane,), (0.1, -0.2))
    with pytest.raises(InvalidSetupError):
        PhysicalSetup(-1.0, (plane,), (0.1,))


def test_overlap_warning_for_close_slits():
    close = PlaneSpec((0.0, 20.0), beta=10.0)  # 2 beta apart
    with pytest.warns(SlitOverlapWarning):
        setup = PhysicalSetup(100.0, (close,), (0.1,))
    assert setup.overlap_violations()


def test_no_warning_for_isolated_slits(sim1_setup, recwarn):
    assert sim1_setup.overlap_violations() == []
    assert not [w for w in recwarn.list if issubclass(w.category, SlitOverlapWarning)]


def test_path_index_validation(sim1_setup):
    PathIndex((2,)).validate(sim1_setup)
    with pytest.raises(InvalidSetupError):
        PathIndex((3,)).validate(sim1_setup)
    with pytest.raises(InvalidSetupError):
        PathIndex((0, 0, 0)).validate(sim1_setup)
    assert PathIndex((1, 2)).centers(sim1_setup) == (
        sim1_setup.planes[0].slit_centers[1],
        sim1_setup.planes[1].slit_centers[2],
    )


def test_all_paths_lexicographic(sim1_setup):
    paths = all_paths(sim1_setup, 2)
    choices = [p.slit_choices for p in paths]
    assert len(choices) == 9
    assert choices == sorted(choices)
    assert choices[0] == (0, 0) and choices[-1] == (2, 2)
