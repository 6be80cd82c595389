import pytest

from pclab.curves import NormalCurve


def curve(surface, weights):
    return NormalCurve(surface, tuple(weights))


# Frozen pairs, found by seeded search and checked against the oracles in
# the tests that use them.
S2_I1 = ((2, 0), (1, 1, 1, 0, 0, 1, 2, 1, 1), (1, 0, 0, 0, 1, 0, 0, 0, 0))
S2_DISJOINT = ((2, 0), (1, 0, 1, 1, 1, 2, 2, 1, 2), (1, 0, 0, 0, 1, 0, 0, 0, 0))
S2_TWO_OCTAGONS = ((2, 0), (2, 3, 3, 2, 1, 3, 2, 3, 1), (1, 0, 3, 1, 1, 2, 2, 3, 2))
S2_PRINCIPAL = ((2, 0), (4, 2, 2, 1, 2, 4, 4, 2, 3), (1, 2, 4, 1, 3, 4, 2, 4, 3))
S3_DISJOINT_GENUS = ((3, 0), (0, 1, 0, 1, 2, 1, 1, 1, 2, 2, 1, 1, 2, 2, 1),
                     (0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0))
S05_DISJOINT = ((0, 5), (1, 0, 1, 1, 1, 1, 0, 1, 2), (1, 1, 0, 1, 1, 0, 0, 2, 2))
# S_{1,2}: faces {octagon, punctured bigon, punctured bigon}, i = 3; the
# smoothing track is linear.
S12_OCTAGON = ((1, 2), (3, 2, 1, 1, 2, 2), (2, 1, 1, 2, 0, 1))
# Principal pairs on S_{1,2} with i = 4 and i = 5.
S12_PRINCIPAL_4 = ((1, 2), (0, 1, 1, 1, 1, 0), (4, 3, 1, 2, 2, 3))
S12_PRINCIPAL_5 = ((1, 2), (4, 1, 3, 4, 0, 1), (3, 1, 2, 0, 3, 2))


def pair(spec):
    surface, a, b = spec
    return curve(surface, a), curve(surface, b)


@pytest.fixture
def octagon_pair():
    return pair(S12_OCTAGON)


@pytest.fixture
def principal_pair():
    return pair(S12_PRINCIPAL_4)
