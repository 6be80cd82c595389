"""Finite orbit windows of the curve graph and the principal curve graph:
hyperbolicity and bottleneck statistics, and orbit growth experiments."""

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .curves import NormalCurve
from .errors import DisconnectedGraph, EqualCurves, PclabError
from .kernel import geometric_intersection
from .mcg import MappingClass, apply
from .predicates import PRINCIPAL4, adjacent, pc_upper_bound
from .traintracks import (CarryingCertificate, is_maximal, is_recurrent, smoothing_track,
                          smoothing_weights, verify_certificate)


@dataclass
class OrbitGraph:
    vertices: list
    words: list            # generator indices reaching each vertex (negative = inverse)
    adj: list              # sorted neighbour lists
    base: int = 0
    rule: object = None
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        return [(u, v) for u in range(len(self.adj)) for v in self.adj[u] if u < v]

    def to_json(self):
        return {"format": "pclab-orbit-graph-v1",
                "rule": self.rule.to_json() if self.rule is not None else None,
                "base": self.base,
                "vertices": [{"id": i, "word": list(w), "curve": c.to_json()}
                             for i, (c, w) in enumerate(zip(self.vertices, self.words))],
                "edges": [list(e) for e in self.edges()], "notes": list(self.notes)}

    def digest(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def graph_from_edges(n, edges):
    """An OrbitGraph on abstract vertices 0..n-1 (for oracle tests)."""
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return OrbitGraph(list(range(n)), [()] * n, [sorted(a) for a in adj])


def build_orbit_ball(base, generators, word_radius, rule=PRINCIPAL4):
    """All curves f(base) for words f of length <= word_radius in the
    generators and their inverses, with every rule-edge among them."""
    if word_radius < 0:
        raise ValueError("word_radius must be nonnegative")
    gens = []
    for k, f in enumerate(generators):
        gens.append((k + 1, f))
        gens.append((-(k + 1), f.inverse()))
    index = {base.weights: 0}
    verts, words = [base], [()]
    frontier = [0]
    for _ in range(word_radius):
        nxt = []
        for v in frontier:
            for tag, f in gens:
                c = apply(f, verts[v])
                if c.weights not in index:
                    index[c.weights] = len(verts)
                    verts.append(c)
                    words.append((tag,) + words[v])
                    nxt.append(index[c.weights])
        frontier = nxt
    n = len(verts)
    adj = [[] for _ in range(n)]
    notes = []
    for u, v in combinations(range(n), 2):
        try:
            ok = adjacent(verts[u], verts[v], rule)
        except EqualCurves:
            notes.append(f"vertices {u} and {v} are isotopic; no edge drawn")
            ok = False
        if ok:
            adj[u].append(v)
            adj[v].append(u)
    return OrbitGraph(verts, words, adj, 0, rule, notes)


def bfs(g, src, removed=frozenset()):
    dist = {src: 0}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        for v in g.adj[u]:
            if v not in dist and v not in removed:
                dist[v] = dist[u] + 1
                dq.append(v)
    return dist


def base_component(g):
    """The window restricted to the component of its base vertex."""
    keep = sorted(bfs(g, g.base))
    new = {v: i for i, v in enumerate(keep)}
    adj = [[new[u] for u in g.adj[v] if u in new] for v in keep]
    return OrbitGraph([g.vertices[v] for v in keep], [g.words[v] for v in keep], adj,
                      new[g.base], g.rule, list(g.notes))


def all_distances(g):
    D = [bfs(g, u) for u in range(len(g.adj))]
    if any(len(d) != len(g.adj) for d in D):
        raise DisconnectedGraph("the orbit window is not connected")
    return D


def geodesic(g, x, y, dist_from_y):
    """BFS geodesic x -> y, taking the smallest-index step at each vertex."""
    path = [x]
    while path[-1] != y:
        u = path[-1]
        path.append(min(v for v in g.adj[u] if dist_from_y[v] == dist_from_y[u] - 1))
    return path


def _four_point(D, a, b, c, d):
    s = sorted([D[a][b] + D[c][d], D[a][c] + D[b][d], D[a][d] + D[b][c]])
    return Fraction(s[2] - s[1], 2)


def estimate_delta(g, sample_count=2000, seed=0):
    """Largest four-point defect over sampled 4-tuples of window vertices,
    with exact window distances.  When there are at most sample_count
    tuples, all of them are checked and the value is exact for the window."""
    D = all_distances(g)
    n = len(g.adj)
    total = n * (n - 1) * (n - 2) * (n - 3) // 24
    if total <= sample_count:
        tuples = combinations(range(n), 4)
        exhaustive = True
    else:
        rng = random.Random(seed)
        tuples = (tuple(rng.sample(range(n), 4)) for _ in range(sample_count))
        exhaustive = False
    best, arg, hist = Fraction(0), None, {}
    for t in tuples:
        x = _four_point(D, *t)
        hist[str(x)] = hist.get(str(x), 0) + 1
        if x > best or arg is None:
            best, arg = max(best, x), t
    return {"delta_hat": str(best), "delta_float": float(best), "argmax": list(arg) if arg else None,
            "tuples": total if exhaustive else sample_count, "exhaustive": exhaustive,
            "vertices": n, "diameter": max(max(d.values()) for d in D),
            "histogram": hist, "note": "window statistic, not a bound on the true constant"}


def midpoint_deviation(g, x, y, D=None):
    """For the BFS geodesic from x to y with midpoint m: the largest r such
    that some x-y path stays at distance >= r from m.  Computed exactly by
    deleting balls around m."""
    D = D or all_distances(g)
    path = geodesic(g, x, y, D[y])
    m = path[len(path) // 2]
    dm = D[m]
    r = 0
    while True:
        ball = frozenset(v for v in range(len(g.adj)) if dm[v] <= r)
        if x in ball or y in ball or y not in bfs(g, x, ball):
            return r, path, m
        r += 1


def bottleneck_report(g, pair_samples=200, seed=0):
    D = all_distances(g)
    n = len(g.adj)
    pairs = [(x, y) for x, y in combinations(range(n), 2) if D[x][y] >= 2]
    exhaustive = len(pairs) <= pair_samples
    if not exhaustive:
        rng = random.Random(seed)
        pairs = sorted(rng.sample(pairs, pair_samples))
    rows, hist = [], {}
    for x, y in pairs:
        dev, path, m = midpoint_deviation(g, x, y, D)
        rows.append({"x": x, "y": y, "distance": D[x][y], "midpoint": m, "deviation": dev})
        hist[dev] = hist.get(dev, 0) + 1
    devs = [r["deviation"] for r in rows]
    return {"pairs": rows, "exhaustive": exhaustive, "histogram": {str(k): v for k, v in sorted(hist.items())},
            "max_deviation": max(devs) if devs else 0,
            "mean_deviation": sum(devs) / len(devs) if devs else 0.0,
            "vertices": n, "note": "geodesics are BFS geodesics inside the window"}


def _tv_letters(phi):
    if len(phi.word) == 2 and phi.word[0][1] == 1 and phi.word[1][1] == -1:
        return phi.word[0][0], phi.word[1][0]
    return None


def orbit_growth(phi, base, n, rule=PRINCIPAL4, budget=8, chain_weight_cap=60):
    """phi^k(base) for k <= n, with intersection numbers against base and
    distance evidence.  For a Thurston-Veech word T_a T_b^-1 with base a or
    b, every orbit point is certified as carried by the smoothing track of
    (a, b); when that track is non-maximal (bigons collapsed) the shared
    carrier witnesses PC-diameter at most one.  Otherwise small orbit points
    get explicit edge chains."""
    orbit = [base]
    for _ in range(n):
        orbit.append(apply(phi, orbit[-1]))
    inters = [geometric_intersection(c, base) if c.weights != base.weights else 0 for c in orbit]
    report = {"n": n, "rule": rule.to_json(), "intersections": [str(x) for x in inters],
              "certificates": [], "chains": [], "carrier": None}
    if all(c.weights == base.weights for c in orbit):
        report.update(verdict="bounded", diameter_bound=0)
        return report
    ab = _tv_letters(phi)
    if ab is not None and base.weights in (ab[0].weights, ab[1].weights):
        a, b = ab
        try:
            tr = smoothing_track(a, b)
        except PclabError:
            tr = None
        if tr is not None and tr.base.linear:
            t = geometric_intersection(a, b)
            x, y = (1, 0) if base.weights == a.weights else (0, 1)
            certs, ok = [], True
            for k, c in enumerate(orbit):
                if k:
                    y += t * x
                    x += t * y
                cert = CarryingCertificate(tr.key(), c, smoothing_weights(tr, x, y))
                good = verify_certificate(tr, cert)
                ok &= good
                certs.append({"k": k, "x": str(x), "y": str(y), "verified": good})
            maximal = is_maximal(tr, ignore_bigons=True)
            report["carrier"] = {"track": tr.to_json(), "maximal": maximal,
                                 "recurrent": is_recurrent(tr)}
            report["certificates"] = certs
            if ok and not maximal:
                report.update(verdict="bounded", diameter_bound=1)
                return report
    # Chains for orbit points still small enough to embed.
    for k, c in enumerate(orbit[1:], 1):
        if sum(c.weights) > chain_weight_cap:
            break
        length, path = pc_upper_bound(base, c, rule, budget)
        report["chains"].append({"k": k, "bound": length,
                                 "path": [p.to_json() for p in path] if path else None})
    report.update(verdict="growth-compatible", diameter_bound=None)
    return report


def svg_histogram(hist, title="", width=420, height=220):
    """A bar chart of {label: count} as a standalone SVG document."""
    items = list(hist.items())
    top = max([v for _, v in items] or [1]) or 1
    bw = (width - 40) / max(len(items), 1)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="10" y="16" font-size="12">{title}</text>']
    for i, (k, v) in enumerate(items):
        h = (height - 50) * v / top
        x = 30 + i * bw
        parts.append(f'<rect x="{x:.1f}" y="{height - 25 - h:.1f}" width="{bw * 0.8:.1f}" '
                     f'height="{h:.1f}" fill="#4a7"/>')
        parts.append(f'<text x="{x:.1f}" y="{height - 10}" font-size="10">{k}</text>')
        parts.append(f'<text x="{x:.1f}" y="{height - 28 - h:.1f}" font-size="10">{v}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
