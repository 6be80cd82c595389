"""Independent reference computations used only by the tests."""

from fractions import Fraction
from itertools import combinations
from math import gcd, log


def _prim(v):
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v)


def dd_extreme_rays(rows, n):
    """Extreme rays of {x >= 0, A x = 0} by the double description method,
    adding one equality at a time to the rays of the orthant."""
    rays = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    for row in rows:
        if not any(row):
            continue
        val = [sum(a * x for a, x in zip(row, r)) for r in rays]
        pos = [r for r, v in zip(rays, val) if v > 0]
        neg = [r for r, v in zip(rays, val) if v < 0]
        new = [r for r, v in zip(rays, val) if v == 0]
        zeros = [frozenset(i for i in range(n) if r[i] == 0) for r in rays]
        for p in pos:
            vp = sum(a * x for a, x in zip(row, p))
            zp = frozenset(i for i in range(n) if p[i] == 0)
            for q in neg:
                vq = sum(a * x for a, x in zip(row, q))
                zq = frozenset(i for i in range(n) if q[i] == 0)
                common = zp & zq
                # adjacency: no other ray vanishes on all of common
                if any(common <= z for r, z in zip(rays, zeros) if r != p and r != q):
                    continue
                comb = tuple(vp * b - vq * a for a, b in zip(p, q))
                new.append(_prim(comb))
        rays = sorted(set(_prim(r) for r in new if any(r)))
    return sorted(rays)


def four_point_defect_brute(dist, nodes):
    """Max over all 4-tuples of the four-point defect (largest pair sum minus
    the middle one, halved)."""
    best = Fraction(0)
    for a, b, c, d in combinations(nodes, 4):
        s = sorted([dist[a][b] + dist[c][d], dist[a][c] + dist[b][d], dist[a][d] + dist[b][c]])
        best = max(best, Fraction(s[2] - s[1], 2))
    return best


def entropy_direct(weights):
    return -sum(float(w) * log(float(w)) for w in weights if w)


def widest_path_value(adj, values, x, y):
    """max over x-y paths of the min vertex value along the path, by a
    max-bottleneck Dijkstra."""
    import heapq
    best = {x: values[x]}
    heap = [(-values[x], x)]
    while heap:
        b, u = heapq.heappop(heap)
        b = -b
        if u == y:
            return b
        if b < best.get(u, -1):
            continue
        for v in adj[u]:
            nb = min(b, values[v])
            if nb > best.get(v, -1):
                best[v] = nb
                heapq.heappush(heap, (-nb, v))
    return None
