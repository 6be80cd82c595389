import pytest
from hypothesis import given, settings, strategies as st

from pclab.curves import random_curve
from pclab.errors import EqualCurves, PclabError
from pclab.kernel import are_isotopic, geometric_intersection
from pclab.predicates import (CG0, EdgeRule, PRINCIPAL4, adjacent, cg_distance_class, edge_verdict,
                              pc_distance_class, pc_upper_bound)
from pclab.traintracks import is_maximal, one_switch_track, vertex_cycles

from conftest import S12_OCTAGON, S2_I1, S2_PRINCIPAL, S3_DISJOINT_GENUS, S05_DISJOINT, pair

RULES = {k: EdgeRule.parse(k) for k in ("cg", "cg0", "principal", "principal6", "intermediate")}


def test_disjoint_positive_genus_component():
    a, b = pair(S3_DISJOINT_GENUS)
    v = edge_verdict(a, b, RULES["cg0"])
    assert v["adjacent"] and any(c["genus"] > 0 for c in v["witness_components"])
    assert adjacent(a, b, PRINCIPAL4)


def test_principal_pair_has_no_edge():
    a, b = pair(S2_PRINCIPAL)
    assert not adjacent(a, b, PRINCIPAL4)
    assert pc_distance_class(a, b) == ">=2"


def test_octagon_pair_is_adjacent_with_witness():
    a, b = pair(S12_OCTAGON)
    v = edge_verdict(a, b, PRINCIPAL4)
    assert v["adjacent"] and v["witness_faces"][0]["side_count"] == 8
    assert pc_distance_class(a, b) == 1
    assert pc_upper_bound(a, b)[0] == 1


def test_equal_curves():
    c = random_curve((1, 2), 3, 3)
    with pytest.raises(EqualCurves):
        adjacent(c, c)
    assert cg_distance_class(c, c) == (0, None)
    assert pc_distance_class(c, c) == 0
    assert pc_upper_bound(c, c)[0] == 0


def test_cg_classes():
    a, b = pair(S05_DISJOINT)
    assert cg_distance_class(a, b)[0] == 1
    a, b = pair(S2_I1)
    cls, wit = cg_distance_class(a, b)
    assert cls == 2
    assert geometric_intersection(wit, a) == 0 and geometric_intersection(wit, b) == 0
    assert not are_isotopic(wit, a) and not are_isotopic(wit, b)
    assert cg_distance_class(*pair(S12_OCTAGON))[0] == ">=3"


def test_rule_parsing():
    assert RULES["principal6"].punctured_threshold == 6
    assert RULES["cg0"].variant == CG0
    with pytest.raises(ValueError):
        EdgeRule.parse("nope")
    with pytest.raises(ValueError):
        EdgeRule("Principal", 5)


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 0), (0, 5), (1, 2), (1, 3)]), seeds, seeds)
def test_rule_inclusions(surf, s, t):
    a, b = random_curve(surf, s, 3), random_curve(surf, t, 3)
    if a == b:
        return
    v = {k: adjacent(a, b, r) for k, r in RULES.items()}
    assert not v["cg0"] or v["intermediate"]
    assert not v["intermediate"] or v["principal"]
    assert not v["principal6"] or v["principal"]
    assert not v["cg"] or v["principal"]
    assert v["cg"] == (geometric_intersection(a, b) == 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(0, 5), (1, 2), (2, 0)]), seeds, seeds)
def test_cg_witness_is_disjoint(surf, s, t):
    a, b = random_curve(surf, s, 3), random_curve(surf, t, 3)
    if a == b:
        return
    cls, wit = cg_distance_class(a, b)
    if cls == 2:
        assert geometric_intersection(wit, a) == 0 == geometric_intersection(wit, b)


def test_common_carrier_gives_short_chains():
    # Vertex cycles of one non-maximal one-switch track are pairwise equal
    # or adjacent.
    checked = 0
    for s in range(60):
        a, b = random_curve((1, 2), 2 * s, 3), random_curve((1, 2), 2 * s + 1, 3)
        try:
            t, cert, _ = one_switch_track(a, b)
        except PclabError:
            continue
        if is_maximal(t):
            continue
        vcs = vertex_cycles(t, limit=6)
        for i in range(len(vcs)):
            for j in range(i + 1, len(vcs)):
                if vcs[i] != vcs[j]:
                    assert adjacent(vcs[i], vcs[j])
                    checked += 1
    assert checked > 0


def test_upper_bound_paths_are_valid():
    for s in range(20):
        a, b = random_curve((1, 2), 2 * s, 3), random_curve((1, 2), 2 * s + 1, 3)
        if a == b:
            continue
        n, path = pc_upper_bound(a, b, budget=10)
        if n is None:
            continue
        assert path[0] == a and path[-1] == b and len(path) == n + 1
        for x, y in zip(path, path[1:]):
            assert adjacent(x, y)
