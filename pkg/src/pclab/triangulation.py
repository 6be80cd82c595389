"""Ideal triangulations, canonical layouts per surface type, edge flips and
the weight-level moves built from them.

Edges are numbered 0..n-1.  The two sides of edge i carry the labels i and
~i (= -i-1).  A triangle is a counter-clockwise triple of labels oriented
head to tail, so the head of t[k] is the tail of t[k+1].
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import ExceptionalSurface

TRIANGULATION_TAG = "canonical-v1"


def idx(label):
    return label if label >= 0 else ~label


@dataclass(frozen=True)
class SurfaceSpec:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ExceptionalSurface("genus and punctures must be nonnegative")
        if 3 * self.genus - 3 + self.punctures < 2:
            raise ExceptionalSurface(
                f"S_{{{self.genus},{self.punctures}}} is exceptional (3g-3+m < 2)")

    @property
    def closed(self):
        return self.punctures == 0

    @property
    def euler(self):
        return 2 - 2 * self.genus

    @property
    def complexity(self):
        return 3 * self.genus - 3 + self.punctures

    def label(self):
        return f"S_{self.genus},{self.punctures}"

    def to_json(self):
        return {"g": self.genus, "m": self.punctures}


class Triangulation:
    def __init__(self, triangles, punctured=None):
        self.triangles = tuple(tuple(t) for t in triangles)
        labels = sorted(l for t in self.triangles for l in t)
        self.zeta = len(labels) // 2
        if labels != list(range(-self.zeta, self.zeta)):
            raise ValueError("every edge needs exactly two sides")
        self.corner_lookup = {}
        self.triangle_of = {}
        for ti, t in enumerate(self.triangles):
            for k in range(3):
                self.corner_lookup[t[k]] = (t[k], t[(k + 1) % 3], t[(k + 2) % 3])
                self.triangle_of[t[k]] = (ti, k)
        # Labels sharing a tail, in counter-clockwise order around the vertex.
        unused = set(self.corner_lookup)
        self.vertices = []
        while unused:
            cycle = [min(unused)]
            unused.discard(cycle[0])
            while True:
                nxt = ~self.corner_lookup[cycle[-1]][2]
                if nxt not in unused:
                    break
                cycle.append(nxt)
                unused.discard(nxt)
            self.vertices.append(tuple(cycle))
        self.vertex_of = {l: vi for vi, cyc in enumerate(self.vertices) for l in cyc}
        if punctured is None:
            punctured = (True,) * len(self.vertices)
        self.punctured = tuple(punctured)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.triangles == other.triangles

    def __hash__(self):
        return hash(self.triangles)

    @property
    def labels(self):
        return list(range(-self.zeta, self.zeta))

    def to_json(self):
        return {"tag": TRIANGULATION_TAG, "edges": self.zeta,
                "triangles": [list(t) for t in self.triangles],
                "vertices": len(self.vertices), "euler": self.euler()}

    def tail(self, label):
        return self.vertex_of[label]

    def head(self, label):
        return self.vertex_of[~label]

    def euler(self):
        return len(self.vertices) - self.zeta + len(self.triangles)

    def is_loop(self, label):
        return self.tail(label) == self.head(label)

    def is_flippable(self, label):
        return self.triangle_of[label][0] != self.triangle_of[~label][0]

    def square(self, label):
        """(a, b, c, d, e): the quadrilateral around e with a, b following e
        and c, d following ~e in their triangles."""
        _, a, b = self.corner_lookup[label]
        _, c, d = self.corner_lookup[~label]
        return a, b, c, d, label

    def flip(self, label):
        a, b, c, d, e = self.square(label)
        ta, tb = self.triangle_of[e][0], self.triangle_of[~e][0]
        pos = e if e >= 0 else ~e
        new = [t for i, t in enumerate(self.triangles) if i not in (ta, tb)]
        new.append((pos, d, a))
        new.append((~pos, b, c))
        # Flipped triangulations only serve the weight-level moves, where
        # every vertex behaves as a puncture.
        return Triangulation(sorted(_triangle_key(t) for t in new))

    def vertex_slice(self, start, stop):
        """Labels out of the common tail vertex from start (inclusive) round to
        stop (exclusive), counter-clockwise."""
        cyc = self.vertices[self.vertex_of[start]]
        i = cyc.index(start)
        rot = cyc[i:] + cyc[:i]
        if stop in rot:
            return rot[:rot.index(stop)]
        return rot

    def find_isometry(self, other, partial):
        """Extend a partial label map self -> other to a combinatorial
        isometry, or return None."""
        mapping = dict(partial)
        stack = list(partial.items())
        while stack:
            s, t = stack.pop()
            if s not in self.corner_lookup or t not in other.corner_lookup:
                return None
            cs, ct = self.corner_lookup[s], other.corner_lookup[t]
            for x, y in ((~s, ~t), (cs[1], ct[1]), (cs[2], ct[2])):
                if x in mapping:
                    if mapping[x] != y:
                        return None
                else:
                    mapping[x] = y
                    stack.append((x, y))
        if len(mapping) != 2 * self.zeta or len(set(mapping.values())) != 2 * self.zeta:
            return None
        return mapping


def _triangle_key(t):
    m = min(t)
    k = t.index(m)
    return t[k:] + t[:k]


def _polygon_fan(genus):
    """Fan triangulation of the standard 4g-gon with word a1 b1 a1^-1 b1^-1 ..."""
    sides = []
    for i in range(genus):
        a, b = 2 * i, 2 * i + 1
        sides += [a, b, ~a, ~b]
    n = 4 * genus
    diag = {k: 2 * genus + (k - 2) for k in range(2, n - 1)}
    triangles = []
    for k in range(1, n - 1):
        first = sides[0] if k == 1 else diag[k]
        last = sides[n - 1] if k + 1 == n - 1 else ~diag[k + 1]
        triangles.append((first, sides[k], last))
    return triangles, 6 * genus - 3


def _stellar(triangles, ti, next_edge):
    x, y, z = triangles[ti]
    ea, eb, ec = next_edge, next_edge + 1, next_edge + 2
    new = [(x, ~eb, ea), (y, ~ec, eb), (z, ~ea, ec)]
    return triangles[:ti] + triangles[ti + 1:] + new, next_edge + 3


def _doubled_polygon(m):
    top, bottom = [], []
    up = {k: m + (k - 2) for k in range(2, m - 1)}
    low = {k: m + (m - 3) + (k - 2) for k in range(2, m - 1)}
    for k in range(1, m - 1):
        first = 0 if k == 1 else up[k]
        last = m - 1 if k + 1 == m - 1 else ~up[k + 1]
        top.append((first, k, last))
        first = ~(m - 1) if k + 1 == m - 1 else low[k + 1]
        last = ~0 if k == 1 else ~low[k]
        bottom.append((first, ~k, last))
    return top + bottom


@lru_cache(maxsize=None)
def _canonical(genus, punctures):
    if genus == 0:
        triangles = _doubled_polygon(punctures)
        tri = Triangulation(sorted(_triangle_key(t) for t in triangles))
        return tri
    triangles, n_edges = _polygon_fan(genus)
    for j in range(max(punctures - 1, 0)):
        # Spread the extra punctures over different fan triangles.
        ti = (j * 2) % len(triangles)
        triangles, n_edges = _stellar(triangles, ti, n_edges)
    tri = Triangulation(sorted(_triangle_key(t) for t in triangles))
    if punctures == 0:
        tri.punctured = (False,)
    return tri


def build_surface(genus, punctures):
    """Canonical triangulation for S_{g,m}.  Closed surfaces get a single
    marked vertex that is not a puncture."""
    spec = SurfaceSpec(genus, punctures)
    tri = _canonical(genus, punctures)
    assert tri.euler() == spec.euler, (tri.euler(), spec.euler)
    return spec, tri
