import numpy as np
import pytest

from hadhaar.coherence import SystemKind
from hadhaar.indexing import build_levels
from hadhaar.sampling import (SamplingPlan, draw_sample, mds_allocate, measure,
                              measure_adjoint, rng_stream, uds_pmf, vds_pmf)
from hadhaar.transforms import fwht, vec


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

def test_uds_pmf_uniform():
    plan = uds_pmf("had_dhw_1d", r=4)
    assert plan.strategy == "uds"
    assert np.array_equal(plan.pmf, np.full(16, 1.0 / 16))


def test_vds_pmf_n8_exact():
    plan = vds_pmf("had_dhw_1d", r=3)
    assert np.array_equal(plan.pmf, [0.25, 0.25, 0.125, 0.125,
                                     0.0625, 0.0625, 0.0625, 0.0625])


def test_vds_pmf_properties():
    for tag, r in [("had_dhw_1d", 6), ("had2_idhw", 3), ("had2_adhw", 3)]:
        pmf = vds_pmf(tag, r=r).pmf
        assert abs(float(pmf.sum()) - 1.0) <= 1e-12
        assert np.all(pmf > 0)
    pmf = vds_pmf("had_dhw_1d", r=6).pmf
    assert np.all(np.diff(pmf) <= 0)


def test_plan_validation():
    with pytest.raises(ValueError):
        SamplingPlan("lds", 8, pmf=np.full(8, 0.125))
    with pytest.raises(ValueError):
        SamplingPlan("uds", 8, pmf=np.full(4, 0.25))
    with pytest.raises(ValueError):
        SamplingPlan("uds", 4, pmf=np.array([0.5, 0.5, 0.5, -0.5]))
    with pytest.raises(ValueError):
        SamplingPlan("mds", 8, m=np.array([1, 1]))


# ---------------------------------------------------------------------------
# mds allocation
# ---------------------------------------------------------------------------

def test_mds_allocate_proportional():
    part = build_levels("dyadic1d", 4)
    plan = mds_allocate([1, 1, 1, 2, 4], 9, part)
    assert np.array_equal(plan.m, [1, 1, 1, 2, 4])


def test_mds_allocate_capacity_redistribution():
    part = build_levels("dyadic1d", 4)
    plan = mds_allocate([1, 1, 1, 2, 4], 12, part)
    assert np.array_equal(plan.m, [1, 1, 1, 3, 6])


def test_mds_allocate_spillover_to_zero_levels():
    part = build_levels("dyadic1d", 4)
    plan = mds_allocate([1, 0, 0, 0, 0], 2, part)
    assert np.array_equal(plan.m, [1, 1, 0, 0, 0])


def test_mds_allocate_full_budget():
    part = build_levels("dyadic1d", 5)
    plan = mds_allocate(part.sizes, part.n_total, part)
    assert np.array_equal(plan.m, part.sizes)


def test_mds_allocate_validation():
    part = build_levels("dyadic1d", 3)
    with pytest.raises(ValueError):
        mds_allocate([1, 2, 2, 4], 4, part)  # level 1 holds one index
    with pytest.raises(ValueError):
        mds_allocate([0, 0, 0, 0], 2, part)
    with pytest.raises(ValueError):
        mds_allocate([1, 1, 2, 4], 9, part)  # budget exceeds n_total
    with pytest.raises(ValueError):
        mds_allocate([1, 1], 2, part)


# ---------------------------------------------------------------------------
# drawing
# ---------------------------------------------------------------------------

def test_draw_deterministic():
    plan = vds_pmf("had_dhw_1d", r=5)
    for replace in (True, False):
        a = draw_sample(plan, 12, 7, replace=replace)
        b = draw_sample(plan, 12, 7, replace=replace)
        assert np.array_equal(a.omega, b.omega)
        assert np.array_equal(a.weights, b.weights)
    a = draw_sample(plan, 12, 7)
    c = draw_sample(plan, 12, 8)
    assert not np.array_equal(a.omega, c.omega)


def test_draw_ranges_and_weights():
    plan = vds_pmf("had_dhw_1d", r=3)
    s = draw_sample(plan, 64, 21)
    assert s.omega.min() >= 1 and s.omega.max() <= 8
    assert np.array_equal(s.weights, 1.0 / np.sqrt(plan.pmf[s.omega - 1]))
    assert s.weights[s.omega <= 2][0] == 2.0
    assert s.strategy == "vds" and s.n_measurements == 64


def test_draw_without_replacement_distinct():
    plan = vds_pmf("had_dhw_1d", r=4)
    s = draw_sample(plan, 16, 5, replace=False)
    assert sorted(s.omega.tolist()) == list(range(1, 17))
    with pytest.raises(ValueError):
        draw_sample(plan, 17, 5, replace=False)


def test_draw_without_replacement_first_seen_order():
    plan = uds_pmf("had_dhw_1d", r=4)
    full = draw_sample(plan, 200, 13).omega
    expect = []
    for idx in full:
        if idx not in expect:
            expect.append(int(idx))
        if len(expect) == 10:
            break
    s = draw_sample(plan, 10, 13, replace=False)
    assert s.omega.tolist() == expect


def test_draw_degenerate_pmf_duplicates():
    pmf = np.zeros(8)
    pmf[0] = 1.0
    plan = SamplingPlan("vds", 8, pmf=pmf)
    s = draw_sample(plan, 3, 1)
    assert s.omega.tolist() == [1, 1, 1]
    assert np.array_equal(s.weights, np.ones(3))
    with pytest.raises(ValueError):
        draw_sample(plan, 2, 1, replace=False)


def test_draw_mds_covers_levels():
    part = build_levels("dyadic1d", 4)
    plan = mds_allocate([1, 1, 2, 3, 5], 12, part)
    s = draw_sample(plan, 12, 3)
    assert s.n_measurements == 12
    assert np.array_equal(s.weights, np.ones(12))
    pos = 0
    for lev, m_t in zip(part.levels, plan.m):
        chunk = s.omega[pos:pos + int(m_t)]
        pos += int(m_t)
        assert np.all(np.isin(chunk, lev))
        assert np.unique(chunk).size == chunk.size
    with pytest.raises(ValueError):
        draw_sample(plan, 11, 3)


def test_draw_mds_full_is_permutation():
    part = build_levels("dyadic1d", 4)
    plan = mds_allocate(part.sizes, 16, part)
    s = draw_sample(plan, 16, 0)
    assert sorted(s.omega.tolist()) == list(range(1, 17))


def test_draw_empirical_frequencies():
    plan = vds_pmf("had_dhw_1d", r=3)
    m = 8192
    s = draw_sample(plan, m, 17)
    counts = np.bincount(s.omega - 1, minlength=8)
    for j in range(8):
        p = plan.pmf[j]
        sigma = np.sqrt(m * p * (1.0 - p))
        assert abs(counts[j] - m * p) <= 3.0 * sigma


def test_draw_validation():
    plan = uds_pmf("had_dhw_1d", r=3)
    with pytest.raises(ValueError):
        draw_sample(plan, 0, 1)
    with pytest.raises(ValueError):
        draw_sample("plan", 4, 1)


def test_rng_stream_split():
    a = rng_stream(5, 0).random(4)
    b = rng_stream(5, 1).random(4)
    c = rng_stream(5, 0).random(4)
    assert np.array_equal(a, c)
    assert not np.array_equal(a, b)


# ---------------------------------------------------------------------------
# measurement operator
# ---------------------------------------------------------------------------

def test_measure_single_row():
    system = SystemKind("had_dhw_1d", 2)
    plan = uds_pmf(system)
    sample = draw_sample(plan, 1, 2)
    sample = type(sample)(np.array([1]), np.array([1.0]), "uds", "0")
    y = measure(system, sample, np.ones(4))
    assert np.array_equal(y, [2.0])


def test_measure_identity_enumeration():
    system = SystemKind("had_dhw_1d", 3)
    sample = _manual_sample(np.arange(1, 9))
    x = rng_stream(4, 0).standard_normal(8)
    assert np.array_equal(measure(system, sample, x), fwht(x))


def test_measure_2d_matches_vec():
    system = SystemKind("had2_idhw", 2)
    sample = _manual_sample(np.array([3, 1, 16, 7, 7]))
    img = rng_stream(6, 0).standard_normal((4, 4))
    y = measure(system, sample, img)
    assert np.array_equal(y, vec(fwht(img))[sample.omega - 1])
    assert np.array_equal(measure(system, sample, vec(img)), y)


def test_measure_adjoint_identity():
    system = SystemKind("had_dhw_1d", 4)
    sample = _manual_sample(np.array([2, 2, 5, 16, 9, 2]))
    rng = rng_stream(8, 0)
    x = rng.standard_normal(16)
    y = rng.standard_normal(6)
    lhs = float(measure(system, sample, x) @ y)
    rhs = float(x @ measure_adjoint(system, sample, y))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12)


def test_measure_of_adjoint_on_distinct_rows():
    system = SystemKind("had_dhw_1d", 4)
    sample = _manual_sample(np.array([1, 4, 9, 16]))
    y = rng_stream(9, 0).standard_normal(4)
    back = measure(system, sample, measure_adjoint(system, sample, y))
    np.testing.assert_allclose(back, y, rtol=1e-12, atol=1e-15)


def test_measure_validation():
    system = SystemKind("had_dhw_1d", 3)
    sample = _manual_sample(np.array([1, 2]))
    with pytest.raises(ValueError):
        measure(system, sample, np.ones(4))
    with pytest.raises(ValueError):
        measure_adjoint(system, sample, np.ones(3))
    with pytest.raises(ValueError):
        measure(SystemKind("had2_idhw", 2), sample, np.ones((2, 8)))


def _manual_sample(omega):
    from hadhaar.sampling import SampleSet
    return SampleSet(np.asarray(omega, dtype=np.int64),
                     np.ones(len(omega)), "uds", "0")
