import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sniep5 import eig, oracle
from sniep5 import region as R
from sniep5.errors import DomainError


def test_uniform_doubles_known_prefix():
    raw = np.random.PCG64(7).random_raw(3)
    np.testing.assert_array_equal(oracle.uniform_doubles(7, 3), (raw >> np.uint64(11)) * 2.0**-53)
    u = oracle.uniform_doubles(123, 1000)
    assert u.min() >= 0.0 and u.max() < 1.0


def test_random_matrix_deterministic():
    a = oracle.random_realizable_matrix(42)
    b = oracle.random_realizable_matrix(42)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, oracle.random_realizable_matrix(43))


@given(st.integers(0, 2**63 - 1))
def test_random_matrix_shape(seed):
    m = oracle.random_realizable_matrix(seed)
    assert np.array_equal(m, m.T)
    assert np.trace(m) == 0.0
    assert np.all(m >= 0) and np.all(m <= 1)
    vals = eig.eigenvalues(m)
    assert vals[4] / vals[0] <= -0.25 + 1e-12


def test_mc_trials_one_and_zero():
    rep = oracle.mc_necessity(1, 11)
    assert rep.samples == 1 and rep.passed
    with pytest.raises(ValueError):
        oracle.mc_necessity(0, 11)


def test_mc_deterministic_and_sharding_invariant():
    a = oracle.mc_necessity(3000, 99)
    b = oracle.mc_necessity(3000, 99, chunk=700)
    assert a.passed and b.passed
    assert a.max_violation == b.max_violation and a.samples == b.samples == 3000


def test_mc_workers():
    rep = oracle.mc_necessity(4000, 5, workers=2, chunk=1000)
    assert rep.passed and rep.samples == 4000


def test_extrema_single_point_at_minus_half():
    for k in range(2, 9):
        rep = oracle.grid_scan_lemma1(-0.5, k, 50)
        assert rep.passed
        assert oracle.extrema_table(-0.5, k)["min"][1] == pytest.approx(1 + 2 * (-0.5) ** k)


def test_extrema_examples():
    t = oracle.extrema_table(-0.3, 3)
    assert t["min"][0] == pytest.approx((0.2, 0.2))
    assert t["min"][1] == pytest.approx(-3 * 0.09 + 4.5 * 0.3 - 0.75, abs=1e-14)
    assert t["min"][1] == pytest.approx(0.33, abs=1e-14)
    t = oracle.extrema_table(-0.3, 2)
    assert t["max"][0] == pytest.approx((0.4, 0.0))
    assert t["max"][1] == pytest.approx(1 + 0.16 + 2 * 0.49)
    assert oracle.grid_scan_lemma1(-0.3, 3, 200).passed
    assert oracle.grid_scan_lemma1(-0.3, 2, 200).passed


def test_s3_sign_examples():
    rep = oracle.grid_scan_lemma2(-0.4, 200)
    assert rep.passed and rep.details["nonnegative"] == rep.samples
    rep = oracle.grid_scan_lemma2(0.0, 200)
    assert rep.passed
    # only the y = 0 edge (201 nodes) keeps s3 >= 0
    assert rep.details["nonnegative"] == 201
    assert oracle.grid_scan_lemma2(-0.1, 200).passed


def test_scan_domain_errors():
    with pytest.raises(DomainError):
        oracle.grid_scan_lemma1(-0.6, 2, 100)
    with pytest.raises(DomainError):
        oracle.grid_scan_lemma1(-0.3, 1, 100)
    with pytest.raises(DomainError):
        oracle.grid_scan_lemma2(0.1, 100)
    with pytest.raises(DomainError):
        oracle.grid_scan_lemma2(-0.3, 10)


def test_obj_grid_is_barycentric():
    x, y, _, _ = oracle.obj_grid(-0.2, 10)
    assert len(x) == 66
    assert np.all(y >= -1e-15) and np.all(y <= x + 1e-15) and np.all(y <= -x + 0.6 + 1e-15)


def test_report_json_and_merge():
    rep = oracle.mc_necessity(10, 1)
    doc = json.loads(json.dumps(rep.to_dict()))
    assert doc["passed"] is True and doc["violating_points"] == []
    merged = oracle.ScanReport.merge([rep, oracle.mc_necessity(5, 100)])
    assert merged.samples == 15


def test_equivalence_near_corner_o():
    # s3 vanishes to third order at O for d = 0; both criteria must still agree
    rng = np.random.default_rng(3)
    t = 10.0 ** rng.uniform(-9, -1, 2000)
    s = rng.uniform(0, 1, 2000)
    d = np.zeros_like(t)
    x, y = t, s * t
    slack = R.region_slack(d, x, y)
    t2 = slack >= -1e-9
    t3 = R.power_sum_mask(d, x, y)
    assert np.all((t2 == t3) | (np.abs(slack) <= 1e-6))


def test_equivalence_small_scans():
    assert oracle.scan_equivalence_grid(60, 12).passed
    assert oracle.scan_equivalence_random(5000, 1).passed


def test_corpus_methods_and_determinism():
    counts = {"Zero": 2, "Suleimanova": 5, "LoewySplit": 5, "ExplicitB": 5, "ExplicitA": 3}
    a = oracle.realizable_corpus(counts, seed=9)
    assert a == oracle.realizable_corpus(counts, seed=9)
    assert len(a) == 20
    assert sum(f == "ExplicitA" for _, f in a) == 3
