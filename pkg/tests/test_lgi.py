import dataclasses
import itertools

import numpy as np
import pytest

from mpdsim.geometry import InvalidSetupError
from mpdsim.lgi import (
    LgiScenario,
    SignAssignment,
    all_sign_assignments,
    ambiguous_joint_probs,
    conversion_matrix,
    cross_check,
    lgi_closed_form,
    lgi_quantities,
    optimize_signs,
    sweep,
)


def scenario(**kw) -> LgiScenario:
    base = dict(sigma0=130.0, beta1=15.0, beta2=30.0, dx=8.0, ds=50.0,
                t01=0.2, t12=0.1)
    base.update(kw)
    return LgiScenario(**base)


def test_conversion_matrix_entries():
    D = conversion_matrix().matrix
    assert D[0, 0] == 0.5 and D[0, 1] == 0.5 and D[0, 2] == -0.5
    assert np.all(np.isin(D, [0.5, -0.5]))
    assert D.sum(axis=0) == pytest.approx([0.5, 0.5, 0.5])


def test_sign_enumeration():
    signs = all_sign_assignments()
    assert len(signs) == 128
    assert len(set(signs)) == 128
    flat = [s.q1 + s.q2 for s in signs]
    assert flat == sorted(flat)
    assert flat[0] == (-1,) * 7 and flat[-1] == (1,) * 7
    with pytest.raises(InvalidSetupError):
        SignAssignment((1, 1), (1, 1, 1, 1))
    with pytest.raises(InvalidSetupError):
        SignAssignment((1, 1, 0), (1, 1, 1, 1))


def test_joint_table_completeness():
    setup = scenario().setup()
    pA = ambiguous_joint_probs(setup)
    # row sums equal the pair-opening first-plane probabilities
    from mpdsim.lgi import _quad_tables

    pA1, pA2, p2, gamma = _quad_tables(setup, None)
    assert pA.sum(axis=1) == pytest.approx(pA1, abs=1e-7)
    assert pA.sum() == pytest.approx(pA1.sum(), abs=1e-7)
    assert gamma > 0


def test_gamma_normalization_and_routes_agree():
    setup = scenario().setup()
    from mpdsim.lgi import _closed_tables_vec, _quad_tables

    _, _, _, gamma_quad = _quad_tables(setup, None)
    X1 = np.asarray(setup.planes[0].slit_centers)[None, :]
    _, _, _, gamma_closed = _closed_tables_vec(setup, X1)
    assert gamma_closed[0] == pytest.approx(gamma_quad, rel=1e-9)


def test_dual_route_equivalence_spot():
    setup = scenario().setup()
    signs = SignAssignment((1, 1, -1), (1, 1, 1, -1))
    quad = lgi_quantities(setup, None, signs)
    closed = lgi_closed_form(setup, signs)
    assert closed.ka == pytest.approx(quad.ka, rel=1e-6)
    assert closed.kv == pytest.approx(quad.kv, rel=1e-6)
    assert np.asarray(closed.signaling) == pytest.approx(
        np.asarray(quad.signaling), abs=1e-7
    )
    cross_check(setup, signs)  # must not raise


def test_kv_at_least_one_and_violation_field():
    setup = scenario().setup()
    for signs in all_sign_assignments()[::17]:
        rep = lgi_closed_form(setup, signs)
        assert rep.kv >= 1.0
        assert rep.violation == pytest.approx(rep.ka - rep.kv)


def test_optimizer_is_true_argmax():
    setup = scenario(ds=46.0, dx=7.0).setup()
    best = optimize_signs(setup)
    from mpdsim.lgi import _quad_tables

    pA1, pA, p2, _ = _quad_tables(setup, None)
    D = conversion_matrix().matrix
    # independent enumeration with explicit sums
    results = {}
    for q1 in itertools.product((-1, 1), repeat=3):
        for q2 in itertools.product((-1, 1), repeat=4):
            ka = 0.0
            for i in range(3):
                p1_i = sum(D[i, r] * pA1[r] for r in range(3))
                ka += q1[i] * p1_i
                for j in range(4):
                    p12_ij = sum(D[i, r] * pA[r, j] for r in range(3))
                    ka += q1[i] * q2[j] * p12_ij
            for j in range(4):
                ka -= q2[j] * p2[j]
            results[q1 + q2] = ka
    target = max(results.values())
    assert len(results) == 128
    assert best.ka == pytest.approx(target, rel=1e-12)
    # tie-break: the optimizer returns the lexicographically smallest argmax
    winners = [k for k, v in results.items() if abs(v - target) < 1e-14]
    assert best.signs.q1 + best.signs.q2 == min(winners)


def test_global_sign_flip_pairing():
    setup = scenario().setup()
    from mpdsim.lgi import _quad_tables, _report_from_tables

    tables = _quad_tables(setup, None)
    for signs in all_sign_assignments()[::13]:
        flipped = SignAssignment(tuple(-q for q in signs.q1),
                                 tuple(-q for q in signs.q2))
        ka = _report_from_tables(*tables, signs).ka
        ka_f = _report_from_tables(*tables, flipped).ka
        # the even (pair-correlation) part survives the flip; the odd part
        # negates, so the sum is twice the even part
        q1 = np.array(signs.q1, dtype=float)
        q2 = np.array(signs.q2, dtype=float)
        even = q1 @ (conversion_matrix().matrix @ tables[1]) @ q2
        assert ka + ka_f == pytest.approx(2.0 * even, rel=1e-12)


def test_widely_separated_planes_no_violation():
    rep2 = optimize_signs(scenario(t12=2.0).setup())
    rep10 = optimize_signs(scenario(t12=10.0).setup())
    for rep in (rep2, rep10):
        assert abs(rep.violation) < 1e-6
        assert rep.ka == pytest.approx(rep.kv, abs=1e-6)
    assert rep10.kv - 1.0 < rep2.kv - 1.0  # signaling decays with separation


def test_scaling_invariance_of_report():
    base = scenario().setup()
    scaled = dataclasses.replace(base, constants=base.constants.scaled(3.0))
    signs = SignAssignment((1, -1, 1), (-1, 1, 1, 1))
    a = lgi_closed_form(base, signs)
    b = lgi_closed_form(scaled, signs)
    assert b.ka == pytest.approx(a.ka, rel=1e-12)
    assert b.kv == pytest.approx(a.kv, rel=1e-12)
    assert b.gamma_c == pytest.approx(a.gamma_c, rel=1e-12)


def test_sweep_ds_axis_ordering_and_consistency():
    rows = sweep(scenario(dx=7.0, ds=1.0), "ds", [40.0, 46.0, 52.0])
    assert [r.axis["ds"] for r in rows] == [40.0, 46.0, 52.0]
    for r in rows:
        assert r.report.violation == pytest.approx(r.report.ka - r.report.kv)
        assert r.ds_opt == r.axis["ds"]
    assert max(r.report.violation for r in rows) == pytest.approx(0.2863, abs=2e-3)


def test_sweep_beta_axis():
    rows = sweep(scenario(), "beta", [(15.0, 30.0)],
                 ds_values=np.arange(40.0, 61.0, 1.0))
    assert rows[0].axis == {"beta1": 15.0, "beta2": 30.0}
    assert 40.0 <= rows[0].ds_opt <= 60.0


def test_sweep_empty_range_rejected():
    with pytest.raises(InvalidSetupError):
        sweep(scenario(), "ds", [])
    with pytest.raises(InvalidSetupError):
        sweep(scenario(), "sigma0", [100.0], ds_values=[])
    with pytest.raises(InvalidSetupError):
        sweep(scenario(), "nope", [1.0])


def test_lgi_requires_triple_slit_two_plane(sim2_setup):
    with pytest.raises(InvalidSetupError):
        lgi_quantities(sim2_setup, None, SignAssignment((1, 1, 1), (1, 1, 1, 1)))
