import numpy as np
import pytest

from cfsval.validation import ValidationConfig, estimate_cfs, validate_cfs

from conftest import SCENARIO_2

C2 = SCENARIO_2["c"]


@pytest.fixture(scope="module")
def scenario2():
    from cfsval.manipulator import REFERENCE_ARCH
    return validate_cfs(ValidationConfig(REFERENCE_ARCH, C2, 13.5, 1.0, 2500))


def test_unsafe_partition(scenario2):
    unsafe = {u.index for u in scenario2.unsafe}
    for k in range(scenario2.total_samples):
        assert (scenario2.min_clearance[k] < 0) == (k in unsafe)
    assert all(not u.safe for u in scenario2.unsafe)


def test_report_fields(scenario2):
    assert scenario2.total_samples == 7500
    assert scenario2.n_directions == 2500
    np.testing.assert_allclose(scenario2.radii, [12.15, 13.15, 14.15])
    assert scenario2.verdict == "validated"
    u = scenario2.unsafe[0]
    assert u.radius == pytest.approx(np.linalg.norm(u.position - [0, 0, 300]))


def test_thread_count_does_not_change_results(arch, scenario2):
    multi = validate_cfs(ValidationConfig(arch, C2, 13.5, 1.0, 2500), threads=4)
    assert multi.min_clearance.tobytes() == scenario2.min_clearance.tobytes()
    assert multi.worst_pair.tobytes() == scenario2.worst_pair.tobytes()


def test_fewer_pairs_fewer_unsafe(arch, scenario2):
    full = {u.index for u in scenario2.unsafe}
    for pairs in ([(2, 3)], [(1, 2), (4, 5)], [(1, 6)]):
        sub = validate_cfs(ValidationConfig(arch, C2, 13.5, 1.0, 2500, pair_filter=pairs))
        assert {u.index for u in sub.unsafe} <= full


def test_inflated_radius_is_violated(arch):
    rep = validate_cfs(ValidationConfig(arch, C2, 1.2 * 13.5, 1.0, 2500))
    assert rep.verdict == "violated"
    assert rep.unsafe_inside_cfs
    assert all(u.radius <= 1.2 * 13.5 for u in rep.unsafe_inside_cfs)


def test_explicit_shell_override(arch):
    cfg = ValidationConfig(arch, C2, 13.5, 1.0, 100, r_inner=12.2, r_outer=14.9)
    np.testing.assert_allclose(validate_cfs(cfg).radii, [12.2, 13.2, 14.2])


@pytest.mark.parametrize("kwargs", [
    dict(r3=0.0), dict(r3=-1.0), dict(delta=0.0), dict(delta=1.0), dict(delta_r=0.0),
    dict(n_s=0), dict(n_s=2.5), dict(pair_filter=[]),
])
def test_invalid_config(arch, kwargs):
    base = dict(arch=arch, orientation=C2, r3=13.5, delta_r=1.0, n_s=100)
    base.update(kwargs)
    with pytest.raises(ValueError):
        ValidationConfig(**base)


def test_estimate_censored_near_home(arch):
    res = estimate_cfs(arch, [0, 0, 0], 1, r_max=1.0, tol=0.01)
    assert res.censored
    assert res.r3_est == 1.0
    assert not res.hit.any()


def test_estimate_profile_agrees_with_pruned(arch):
    fast = estimate_cfs(arch, C2, 500, 50.0, 0.01)
    full = estimate_cfs(arch, C2, 500, 50.0, 0.01, profile=True)
    assert fast.r3_est == full.r3_est
    np.testing.assert_array_equal(fast.limiting_direction, full.limiting_direction)
    assert full.hit.sum() >= fast.hit.sum()


def test_estimate_threads_deterministic(arch):
    a = estimate_cfs(arch, C2, 5000, 50.0, 0.01, threads=1)
    b = estimate_cfs(arch, C2, 5000, 50.0, 0.01, threads=3)
    assert a.first_collision.tobytes() == b.first_collision.tobytes()


def test_estimate_radius_is_clear_and_collision_follows(arch):
    from cfsval.collision import ALL_PAIRS, min_clearance_batch
    res = estimate_cfs(arch, C2, 500, 50.0, 0.01)
    p0 = np.array([0, 0, 300.0])
    at = min_clearance_batch(arch, p0 + res.r3_est * res.limiting_direction[None], C2, ALL_PAIRS)[0]
    beyond = min_clearance_batch(arch, p0 + (res.r3_est + 0.01) * res.limiting_direction[None],
                                 C2, ALL_PAIRS)[0]
    assert at[0] >= 0 and beyond[0] < 0


def test_estimate_more_directions_not_larger(arch):
    values = [estimate_cfs(arch, C2, n, 50.0, 0.01).r3_est for n in (50, 200, 500, 1000, 2500)]
    for coarse, fine in zip(values, values[1:]):
        assert fine <= coarse + 0.01


@pytest.mark.parametrize("kwargs", [
    dict(n_directions=0), dict(tol=0.0), dict(tol=60.0), dict(r_max=float("inf")),
])
def test_estimate_invalid(arch, kwargs):
    base = dict(n_directions=10, r_max=50.0, tol=0.01)
    base.update(kwargs)
    with pytest.raises(ValueError):
        estimate_cfs(arch, C2, **base)
