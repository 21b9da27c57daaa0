import itertools

import numpy as np
import pytest

from flagkneser.constructions import (LAMBDA_KINDS, LambdaSpec,
                                      build_coloring_scheme,
                                      build_ekr_plane_family,
                                      build_intersecting_solid_family,
                                      build_lambda,
                                      build_line_meeting_plane_family,
                                      canonical_frame, count_lambda,
                                      realize_coloring,
                                      trivial_coloring_scheme)
from flagkneser.counting import ekr_planes_max, lambda_family_size, s
from flagkneser.projective import (Subspace, enumerate_subspaces,
                                   intersect_trivially, meet, point_bitset,
                                   span)


def _spec(kind, frame, ekr=None, solid_kind=None):
    """Assemble a LambdaSpec over the canonical frame."""
    plane_family = None
    solid_family = None
    if kind == "H_E":
        plane_family = build_ekr_plane_family(
            ekr or "point_pencil", within=frame["hyperplane"],
            point=frame["point"], four_space=frame["four_space"])
    if kind == "P_S":
        solid_family = build_intersecting_solid_family(
            solid_kind or "hyperplane_full", point=frame["point"],
            hyperplane=frame["hyperplane"], line=frame["line"])
    return LambdaSpec(kind=kind, hyperplane=frame.get("hyperplane"),
                      point=frame.get("point"), line=frame.get("line"),
                      four_space=frame.get("four_space"),
                      plane_family=plane_family, solid_family=solid_family)


def test_canonical_frame_incidences(frame2):
    f = frame2
    assert f["point"].d == 0 and f["line"].d == 1 and f["plane"].d == 2
    assert f["four_space"].d == 4 and f["hyperplane"].d == 5
    assert f["line"].contains(f["point"])
    assert f["plane"].contains(f["line"])
    assert f["four_space"].contains(f["plane"])
    assert f["hyperplane"].contains(f["four_space"])
    assert f["four_space"].contains(f["second_point"])
    assert not f["plane"].contains(f["second_point"])


@pytest.mark.parametrize("kind", LAMBDA_KINDS)
def test_lambda_build_count_and_formula_agree(kind, uni2, frame2):
    """Three routes to every family size: vectorized build over the
    universe, direct constrained enumeration, closed form."""
    spec = _spec(kind, frame2)
    spec.validate(2)
    fset = build_lambda(spec, uni2)
    assert fset.cardinality == spec.expected_size(2)
    assert count_lambda(spec, 2) == fset.cardinality


@pytest.mark.parametrize("kind,size", [
    ("P_H", 11005), ("H_P", 11005), ("P_l", 11005), ("H_U", 11005),
    ("H_empty", 9765), ("P_empty", 9765),
])
def test_lambda_sizes_q2(kind, size, uni2, frame2):
    assert build_lambda(_spec(kind, frame2), uni2).cardinality == size


@pytest.mark.parametrize("ekr", ["point_pencil", "subspace_full"])
def test_lambda_he_reaches_independence_number(ekr, uni2, frame2):
    spec = _spec("H_E", frame2, ekr=ekr)
    assert len(spec.plane_family) == ekr_planes_max(2) == 155
    assert build_lambda(spec, uni2).cardinality == 11005


@pytest.mark.parametrize("solid_kind", ["hyperplane_full", "line_star"])
def test_lambda_ps_reaches_independence_number(solid_kind, uni2, frame2):
    spec = _spec("P_S", frame2, solid_kind=solid_kind)
    assert len(spec.solid_family) == 155
    assert build_lambda(spec, uni2).cardinality == 11005


def test_member_predicate_agrees_with_mask(uni2, frame2):
    rng = np.random.default_rng(17)
    for kind in ("P_H", "H_E", "P_l", "H_empty"):
        spec = _spec(kind, frame2)
        fset = build_lambda(spec, uni2)
        for t in map(int, rng.integers(0, uni2.flag_count, 60)):
            f = uni2.flag(t)
            assert spec.member(f.plane, f.solid) == (t in fset)


@pytest.mark.parametrize("kind,q,expected", [
    ("H_empty", 3, 440440),
    ("H_E", 3, 473110),
])
def test_count_lambda_q3(kind, q, expected):
    """Enumerated family sizes at q=3 without materializing the universe."""
    frame = canonical_frame(q)
    if kind == "H_E":
        fam = build_ekr_plane_family("point_pencil", within=frame["hyperplane"],
                                     point=frame["point"])
        assert len(fam) == ekr_planes_max(3) == 1210
        spec = LambdaSpec(kind="H_E", hyperplane=frame["hyperplane"],
                          plane_family=fam)
    else:
        spec = LambdaSpec(kind="H_empty", hyperplane=frame["hyperplane"])
    assert count_lambda(spec, q) == expected
    assert spec.expected_size(q) == expected


def test_count_lambda_q3_four_space_family():
    frame = canonical_frame(3)
    fam = build_ekr_plane_family("subspace_full", within=frame["hyperplane"],
                                 four_space=frame["four_space"])
    assert len(fam) == 1210
    spec = LambdaSpec(kind="H_E", hyperplane=frame["hyperplane"],
                      plane_family=fam)
    assert count_lambda(spec, 3) == 473110


def test_ekr_families_pairwise_intersect(frame2):
    for kind in ("point_pencil", "subspace_full"):
        fam = build_ekr_plane_family(kind, within=frame2["hyperplane"],
                                     point=frame2["point"],
                                     four_space=frame2["four_space"])
        assert len(fam) == 155
        bits = [point_bitset(e) for e in fam]
        for i in range(0, len(fam), 9):
            for j in range(i + 1, len(fam), 7):
                assert bits[i] & bits[j]


def test_intersecting_solid_families(frame2):
    for kind in ("hyperplane_full", "line_star"):
        fam = build_intersecting_solid_family(kind, point=frame2["point"],
                                              hyperplane=frame2["hyperplane"],
                                              line=frame2["line"])
        assert len(fam) == 155
        for t in fam:
            assert t.contains(frame2["point"])
        bits = [point_bitset(t) for t in fam]
        for i in range(0, len(fam), 11):
            for j in range(i + 1, len(fam), 13):
                # solids pairwise meet in at least a line (q+1 = 3 points)
                assert (bits[i] & bits[j]).bit_count() >= 3


def test_line_meeting_plane_families():
    for q, kind, size in ((2, "line_star", 15), (2, "solid_full", 15),
                          (3, "solid_full", 40)):
        fam = build_line_meeting_plane_family(kind, n=5, q=q)
        assert len(fam) == size
        for a, b in itertools.combinations(fam, 2):
            assert meet(a, b).d == 1
    with pytest.raises(ValueError):
        build_line_meeting_plane_family("line_star", n=4, q=2)


def test_lambda_spec_validation_errors(frame2):
    with pytest.raises(ValueError, match="unknown family kind"):
        LambdaSpec(kind="X_Y").validate(2)
    with pytest.raises(ValueError, match="requires anchor"):
        LambdaSpec(kind="P_H", point=frame2["point"]).validate(2)
    with pytest.raises(ValueError, match="dimension"):
        LambdaSpec(kind="H_empty", hyperplane=frame2["plane"]).validate(2)
    # point off the hyperplane
    off = Subspace.from_vectors(6, 2, [(0, 0, 0, 0, 0, 0, 1)])
    with pytest.raises(ValueError, match="lie in the hyperplane"):
        LambdaSpec(kind="P_H", point=off,
                   hyperplane=frame2["hyperplane"]).validate(2)
    # plane family member outside the hyperplane
    bad_plane = Subspace.from_vectors(6, 2, [(1, 0, 0, 0, 0, 0, 0),
                                             (0, 1, 0, 0, 0, 0, 0),
                                             (0, 0, 0, 0, 0, 0, 1)])
    with pytest.raises(ValueError, match="inside the hyperplane"):
        LambdaSpec(kind="H_E", hyperplane=frame2["hyperplane"],
                   plane_family=(bad_plane,)).validate(2)


def test_coloring_scheme_structure(frame2):
    scheme = build_coloring_scheme(frame2["point"], frame2["line"],
                                   frame2["plane"], frame2["four_space"],
                                   frame2["second_point"])
    q = 2
    assert len(scheme.classes) == q ** 4 + q ** 3 + q ** 2 + 1 == 29
    # the q cover sets have q^3+q^2+q+1 members each and pairwise share
    # exactly the base point
    assert len(scheme.cover_sets) == q
    from flagkneser.projective import point_indexer
    base_point_index = point_indexer(6, q).index_of(frame2["point"].rows[0])
    for m in scheme.cover_sets:
        assert len(m) == q ** 3 + q ** 2 + q + 1
        assert base_point_index in m
    for a, b in itertools.combinations(scheme.cover_sets, 2):
        assert set(a) & set(b) == {base_point_index}
    # every class is a P_l spec anchored at a cover-set point
    for spec in scheme.classes:
        assert spec.kind == "P_l"
        assert spec.line.contains(spec.point)


def test_coloring_scheme_class_count_q3(frame3):
    scheme = build_coloring_scheme(frame3["point"], frame3["line"],
                                   frame3["plane"], frame3["four_space"],
                                   frame3["second_point"])
    assert len(scheme.classes) == 3 ** 4 + 3 ** 3 + 3 ** 2 + 1 == 118
    for spec in scheme.classes:
        spec.validate(3)


def test_coloring_rejects_bad_chain(frame2):
    with pytest.raises(ValueError):
        build_coloring_scheme(frame2["second_point"], frame2["line"],
                              frame2["plane"], frame2["four_space"],
                              frame2["point"])


def test_trivial_scheme(frame2, uni2):
    specs = trivial_coloring_scheme(frame2["four_space"])
    assert len(specs) == 31
    for spec in specs:
        assert spec.kind == "P_empty"
        assert frame2["four_space"].contains(spec.point)
    classes = realize_coloring(specs[:2], uni2)
    assert all(c.cardinality == 9765 for c in classes)
