"""Essential simple closed curves in normal position with respect to the
canonical triangulation, stored by edge weights (corner counts derived)."""

import json
import random

from .errors import FormatError, InvalidCurve, SurfaceMismatch
from .triangulation import TRIANGULATION_TAG, SurfaceSpec, build_surface, idx


class NormalCurve:
    __slots__ = ("spec", "tri", "weights", "_hash")

    def __init__(self, spec, weights, tri=None, check=True):
        if not isinstance(spec, SurfaceSpec):
            spec = SurfaceSpec(*spec)
        self.spec = spec
        self.tri = tri if tri is not None else build_surface(spec.genus, spec.punctures)[1]
        self.weights = tuple(int(x) for x in weights)
        self._hash = None
        if len(self.weights) != self.tri.zeta:
            raise InvalidCurve(f"expected {self.tri.zeta} edge weights, got {len(self.weights)}")
        if check:
            problem = curve_problem(self.tri, self.weights)
            if problem:
                raise InvalidCurve(problem)

    def __eq__(self, other):
        return (isinstance(other, NormalCurve) and self.spec == other.spec
                and self.weights == other.weights)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self.weights))
        return self._hash

    def __repr__(self):
        return f"NormalCurve({self.spec.label()}, {list(self.weights)})"

    def weight(self):
        return sum(self.weights)

    def corner_counts(self):
        return corner_counts(self.tri, self.weights)

    def to_json(self):
        return {"surface": self.spec.to_json(), "triangulation": TRIANGULATION_TAG,
                "corner_counts": self.corner_counts()}

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data):
        try:
            tag = data["triangulation"]
            g, m = int(data["surface"]["g"]), int(data["surface"]["m"])
            corners = [int(x) for x in data["corner_counts"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed curve record: {exc}") from None
        if tag != TRIANGULATION_TAG:
            raise FormatError(f"unknown triangulation tag {tag!r}")
        spec, tri = build_surface(g, m)
        return cls(spec, weights_from_corners(tri, corners), tri)


def corner_counts(tri, w):
    """Corner k of triangle t (entry 3t+k) sits at the head of side k and
    counts arcs joining sides k and k+1."""
    out = []
    for t in tri.triangles:
        x = [w[idx(l)] for l in t]
        for k in range(3):
            out.append((x[k] + x[(k + 1) % 3] - x[(k + 2) % 3]) // 2)
    return out


def weights_from_corners(tri, corners):
    if len(corners) != 3 * len(tri.triangles):
        raise FormatError(f"expected {3 * len(tri.triangles)} corner counts")
    if any(c < 0 for c in corners):
        raise InvalidCurve("negative corner count")
    w = [None] * tri.zeta
    for ti, t in enumerate(tri.triangles):
        for k in range(3):
            side = corners[3 * ti + k] + corners[3 * ti + (k - 1) % 3]
            e = idx(t[k])
            if w[e] is None:
                w[e] = side
            elif w[e] != side:
                raise InvalidCurve(f"edge {e} sees {w[e]} and {side} arcs on its two sides")
    return tuple(w)


def admissible(tri, w):
    for t in tri.triangles:
        a, b, c = (w[idx(l)] for l in t)
        if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
            return False
    return all(x >= 0 for x in w)


def vertex_link(tri, v):
    w = [0] * tri.zeta
    for l in tri.vertices[v]:
        w[idx(l)] += 1
    return tuple(w)


def is_peripheral(tri, w):
    return any(tuple(w) == vertex_link(tri, v) for v in range(len(tri.vertices)))


def components(tri, w):
    """Split a normal multicurve into connected components, returned as a list
    of weight vectors in order of their smallest edge point."""
    offsets, total = [], 0
    for x in w:
        offsets.append(total)
        total += x
    parent = list(range(total))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def point(label, q):
        e = idx(label)
        return offsets[e] + (q if label >= 0 else w[e] - 1 - q)

    for t in tri.triangles:
        x = [w[idx(l)] for l in t]
        for k in range(3):
            cnt = (x[k] + x[(k + 1) % 3] - x[(k + 2) % 3]) // 2
            for j in range(cnt):
                p = find(point(t[k], x[k] - 1 - j))
                q = find(point(t[(k + 1) % 3], j))
                if p != q:
                    parent[max(p, q)] = min(p, q)
    comps = {}
    order = []
    for e in range(tri.zeta):
        for q in range(w[e]):
            r = find(offsets[e] + q)
            if r not in comps:
                comps[r] = [0] * tri.zeta
                order.append(r)
            comps[r][e] += 1
    return [tuple(comps[r]) for r in order]


def curve_problem(tri, w):
    if any(x < 0 for x in w):
        return "negative weight"
    if not admissible(tri, w):
        return "weights violate a triangle inequality or parity condition"
    if not any(w):
        return "empty curve"
    comps = components(tri, w)
    if len(comps) != 1:
        return f"multicurve with {len(comps)} components"
    if is_peripheral(tri, w):
        return "curve is peripheral or null-homotopic"
    return None


def _random_admissible(tri, rng, bound):
    """Backtracking draw of an admissible nonzero weight vector with entries
    at most bound.  Edges are filled so that triangles close up early."""
    n = tri.zeta
    tris_of_edge = [[] for _ in range(n)]
    for ti, t in enumerate(tri.triangles):
        for l in t:
            tris_of_edge[idx(l)].append(ti)
    order, placed = [], set()
    first = rng.randrange(n)
    while len(order) < n:
        best, score = None, None
        for e in range(n):
            if e in placed:
                continue
            sc = 0
            for ti in tris_of_edge[e]:
                known = sum(1 for l in tri.triangles[ti] if idx(l) in placed or idx(l) == e)
                sc += known * known
            key = (sc, e == first, rng.random())
            if score is None or key > score:
                best, score = e, key
        order.append(best)
        placed.add(best)
    w = [None] * n

    def allowed(e):
        vals = set(range(bound + 1))
        for ti in tris_of_edge[e]:
            others = [w[idx(l)] for l in tri.triangles[ti] if idx(l) != e]
            if len(others) != 2:
                continue  # folded triangle, checked later
            a, b = others
            if a is None or b is None:
                continue
            vals &= set(range(abs(a - b), a + b + 1, 2))
        vals = sorted(vals)
        rng.shuffle(vals)
        return vals

    def fill(i):
        if i == n:
            return any(w) and admissible(tri, w)
        e = order[i]
        for v in allowed(e):
            w[e] = v
            if fill(i + 1):
                return True
        w[e] = None
        return False

    fill(0)
    return tuple(w)


def random_curve(spec_or_surface, seed, complexity_bound):
    """Deterministic random essential curve with every edge weight at most
    complexity_bound."""
    if complexity_bound < 1:
        raise ValueError("complexity_bound must be at least 1")
    spec = spec_or_surface if isinstance(spec_or_surface, SurfaceSpec) else SurfaceSpec(*spec_or_surface)
    spec, tri = build_surface(spec.genus, spec.punctures)
    rng = random.Random(seed)
    while True:
        w = _random_admissible(tri, rng, complexity_bound)
        good = [c for c in components(tri, w) if not is_peripheral(tri, c)]
        if good:
            # Deduplicate parallel copies before choosing.
            uniq = sorted(set(good))
            return NormalCurve(spec, rng.choice(uniq), tri, check=False)


def same_surface(c, d):
    if c.spec != d.spec:
        raise SurfaceMismatch(f"{c.spec.label()} vs {d.spec.label()}")
