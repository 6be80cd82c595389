import pytest
from hypothesis import given, settings, strategies as st

from pclab.curves import random_curve
from pclab.errors import NotBinding, PclabError
from pclab.kernel import embed_pair
from pclab.predicates import PRINCIPAL4, adjacent
from pclab.regions import POLYGON, PUNCTURED, binds, large_face, stratum_signature, trace_regions

from conftest import S12_OCTAGON, S2_I1, S2_PRINCIPAL, S2_TWO_OCTAGONS, pair

SURFACES = [(2, 0), (3, 0), (0, 5), (1, 2), (1, 3)]


def profile(spec):
    return trace_regions(embed_pair(*pair(spec)))


def test_single_crossing_does_not_bind():
    p = profile(S2_I1)
    assert (p.n_vertices, p.n_edges) == (1, 2)
    assert sum(f.euler_char for f in p.faces) == -1
    assert not binds(p)


def test_two_octagons():
    p = profile(S2_TWO_OCTAGONS)
    assert p.n_vertices == 4
    assert [(f.kind, f.side_count) for f in p.faces] == [(POLYGON, 8), (POLYGON, 8)]
    assert sum(f.side_count for f in p.faces) == 2 * p.n_edges


def test_stratum_orders():
    sig, principal = stratum_signature(profile(S2_TWO_OCTAGONS))
    assert [s.order for s in sig] == [2, 2] and not principal
    sig, principal = stratum_signature(profile(S2_PRINCIPAL))
    assert sorted(s.order for s in sig) == [0] * 8 + [1] * 4 and principal
    sig, principal = stratum_signature(profile(S12_OCTAGON))
    assert sorted((s.location, s.order) for s in sig) == [("interior", 2), ("puncture", -1), ("puncture", -1)]


def test_stratum_needs_binding():
    with pytest.raises(NotBinding):
        stratum_signature(profile(S2_I1))


def test_face_order_is_canonical():
    p = profile(S12_OCTAGON)
    firsts = [min(f.darts) for f in p.faces]
    assert firsts == sorted(firsts)


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SURFACES), seeds, seeds)
def test_census_invariants(surf, s, t):
    a, b = random_curve(surf, s, 3), random_curve(surf, t, 3)
    try:
        g = embed_pair(a, b)
    except PclabError:
        return
    p = trace_regions(g)
    assert p.euler_ok and p.punctures_ok
    for f in p.faces:
        assert f.side_count % 2 == 0
        if f.kind == POLYGON:
            assert f.side_count >= 4
        if f.kind == PUNCTURED:
            assert f.side_count >= 2
    assert sorted(h for f in p.faces for h in f.darts) == list(range(4 * g.n_vertices))
    if p.binds:
        assert large_face(p)
        sig, principal = stratum_signature(p)
        g_, _ = surf
        assert sum(x.order for x in sig) == 4 * g_ - 4
        assert principal == (not adjacent(a, b, PRINCIPAL4))
