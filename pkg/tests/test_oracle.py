"""Brute-force oracle layer.

Everything here counts by enumeration and bitset filtering, so agreement
with the closed forms is a genuine cross-check, not a tautology.
"""
import numpy as np
import pytest

from flagkneser.counting import s_count
from flagkneser.oracle import (MAX_ENUMERATED, OracleResult, ThreePlanesConfig,
                               TwoSolidsConfig, canonical_three_planes_config,
                               canonical_two_solids_config,
                               complement_count_check, count_skew_constrained,
                               count_planes_meeting_two_solids,
                               count_solids_meeting_three_planes,
                               line_meeting_family_check, random_subspace,
                               sample_skew_pair, sample_three_planes_config,
                               sample_two_solids_config, skew_count_grid,
                               skew_count_tuples)
from flagkneser.projective import Subspace, intersect_trivially


def test_skew_count_canonical_cases():
    # planes skew to a plane in PG(5,q), counted two ways
    for q in (2, 3):
        r = count_skew_constrained(5, q, 2, skew_to=Subspace.from_vectors(
            5, q, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]))
        assert r.passed and r.count == s_count(2, -1, 2, 5, q=q)
    assert count_skew_constrained(5, 2, 2, skew_to=None).count == 1395


def test_skew_count_with_containment():
    q = 2
    l = Subspace.from_vectors(4, q, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
    m = Subspace.from_vectors(4, q, [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]])
    r = count_skew_constrained(4, q, 2, contains=l, skew_to=m)
    assert r.passed
    assert r.expected == s_count(1, 1, 2, 4, q=q)


def test_skew_count_grid_q2_small():
    results = skew_count_grid(2, n_max=3, samples=2, seed=7)
    assert results and all(r.passed for r in results)
    # canonical plus 2 sampled configurations per parameter tuple
    assert len(results) == 3 * len(skew_count_tuples(3))


@pytest.mark.parametrize("q", [2, 3])
def test_skew_count_grid_full(q):
    results = skew_count_grid(q, n_max=5, samples=10, seed=0)
    assert all(r.passed for r in results)
    assert len(results) == 11 * len(skew_count_tuples(5))


def test_skew_count_tuples_shape():
    tuples = skew_count_tuples(5)
    assert all(1 <= n <= 5 and -1 <= k <= d <= n - 1 and -1 <= l <= n - 1 - k
               for n, d, k, l in tuples)
    assert (5, 4, -1, -1) in tuples
    assert (1, 0, -1, -1) in tuples


def test_two_solids_exact_counts_q2():
    for u, expect, classes in [
        (1, 235, {"meet_v_in_point": 144, "meet_v_in_line": 90, "inside_v": 1}),
        (2, 267, {"meet_v_in_point": 64, "meet_v_in_line": 196, "inside_v": 7}),
    ]:
        r = count_planes_meeting_two_solids(2, u=u)
        assert r.passed and r.count == expect
        assert r.details["classes"] == classes
        assert r.details["class_terms"] == classes
        assert r.count <= r.details["bound"] == 267


def test_two_solids_exact_counts_q3():
    for u, expect in [(1, 1777), (2, 2263)]:
        r = count_planes_meeting_two_solids(3, u=u)
        assert r.passed and r.count == expect
        assert r.details["bound"] == 2263
    # bound 2q^6+2q^5+3q^4+2q^3+2q^2+q+1 is attained at u=2
    assert 2263 == 2 * 3**6 + 2 * 3**5 + 3 * 3**4 + 2 * 3**3 + 2 * 3**2 + 3 + 1


@pytest.mark.parametrize("q,u", [(2, 1), (2, 2), (3, 2)])
def test_two_solids_sampled_configs(q, u):
    for seed in range(4):
        rng = np.random.default_rng(seed)
        cfg = sample_two_solids_config(q, u, rng)
        r = count_planes_meeting_two_solids(q, config=cfg, u=u)
        assert r.passed, r.to_dict()


def test_two_solids_config_validation():
    q = 2
    cfg = canonical_two_solids_config(q, 2)
    # a supplied config is self-describing: the u argument is ignored
    r = count_planes_meeting_two_solids(q, config=cfg, u=1)
    assert r.passed and r.parameters["u"] == 2 and r.count == 267
    bad = TwoSolidsConfig(point=cfg.point, solid1=cfg.solid1,
                          solid2=cfg.solid1)
    with pytest.raises(ValueError, match="u=3"):
        count_planes_meeting_two_solids(q, config=bad)


def test_three_planes_canonical_count_q2():
    r = count_solids_meeting_three_planes(2)
    assert r.passed and r.relation == "<="
    assert r.count == 371
    assert r.expected == 539
    assert r.details["solids_through_point"] == 1395


def test_three_planes_bound_q3_structural():
    # at q=3 only the configuration is exercised; enumeration stays at q=2
    cfg = canonical_three_planes_config(3)
    cfg.validate()
    assert cfg.point.d == 0 and all(p.d == 2 for p in cfg.planes)


def test_three_planes_seeded_configs_respect_bound():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        cfg = sample_three_planes_config(2, rng)
        r = count_solids_meeting_three_planes(2, config=cfg)
        assert r.passed and r.count <= 539, r.to_dict()


def test_three_planes_config_validation():
    q = 2
    cfg = canonical_three_planes_config(q)
    e1, e2, e3 = cfg.planes
    with pytest.raises(ValueError, match="share more than the point"):
        count_solids_meeting_three_planes(q, config=ThreePlanesConfig(
            point=cfg.point, planes=(e1, e1, e3),
            outside_point=cfg.outside_point))


def test_line_meeting_families():
    for kind in ("line_star", "solid_full"):
        r = line_meeting_family_check(2, kind=kind)
        assert r.passed and r.count == 15 == r.expected
        assert r.details["pairwise_meet_in_lines"]
        assert r.details["maximal"] and r.details["extensions_found"] == 0
        assert r.details["planes_swept"] == 1395
        assert r.details["family_type"] == kind


def test_line_meeting_family_rejects_broken_input():
    q = 2
    a = Subspace.from_vectors(5, q, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0],
                                     [0, 0, 1, 0, 0, 0]])
    b = Subspace.from_vectors(5, q, [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0],
                                     [0, 0, 0, 0, 0, 1]])
    assert intersect_trivially(a, b)
    r = line_meeting_family_check(q, planes=[a, b])
    assert not r.passed
    assert not r.details["pairwise_meet_in_lines"]


def test_complement_counts():
    r = complement_count_check(6, 2, 3)
    assert r.passed and r.count == 4096
    r = complement_count_check(4, 3, 1)
    assert r.passed and r.count == 3 ** 6


def test_random_subspace_and_skew_pair_determinism():
    a = random_subspace(6, 2, 3, np.random.default_rng(42))
    b = random_subspace(6, 2, 3, np.random.default_rng(42))
    assert a.rows == b.rows and a.d == 3
    p1 = sample_skew_pair(5, 2, 1, 2, np.random.default_rng(9))
    p2 = sample_skew_pair(5, 2, 1, 2, np.random.default_rng(9))
    assert p1[0].rows == p2[0].rows and p1[1].rows == p2[1].rows
    assert intersect_trivially(p1[0], p1[1])


def test_enumeration_cutoff():
    # 24 208 613 planes in PG(6,4): refused before any enumeration starts
    with pytest.raises(ValueError, match="above the enumeration cutoff"):
        count_skew_constrained(6, 4, 2)
    assert MAX_ENUMERATED < 4_000_000


def test_oracle_result_to_dict_roundtrip():
    r = complement_count_check(4, 2, 1)
    d = r.to_dict()
    assert d["name"] == r.name and d["count"] == r.count
    assert set(d) == {"name", "q", "parameters", "count", "expected",
                      "relation", "passed", "details"}
