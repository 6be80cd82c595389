"""Weight-level moves between triangulations: flips, relabellings and their
composites.  Also the shortening procedure that flips a curve until it runs
once around a loop edge, which is what twists and fast intersection numbers
are built on.
"""

import heapq

from .triangulation import idx


class Encoding:
    """A composite of flips and isometries acting on edge-weight vectors.

    Steps are stored in application order.  A flip step is
    ('f', e, a, b, c, d) on edge indices; an isometry step is ('i', perm)
    with new[perm[i]] = old[i].
    """

    __slots__ = ("steps", "source", "target")

    def __init__(self, steps, source, target):
        self.steps = tuple(steps)
        self.source = source
        self.target = target

    def __call__(self, weights):
        w = list(weights)
        for step in self.steps:
            if step[0] == "f":
                _, e, a, b, c, d = step
                w[e] = max(w[a] + w[c], w[b] + w[d]) - w[e]
            else:
                perm = step[1]
                new = [0] * len(w)
                for i, x in enumerate(w):
                    new[perm[i]] = x
                w = new
        return tuple(w)

    def __mul__(self, other):
        """self * other applies other first."""
        return Encoding(other.steps + self.steps, other.source, self.target)

    def inverse(self):
        steps = []
        for step in reversed(self.steps):
            if step[0] == "f":
                steps.append(step)  # the flip formula is symmetric in the square
            else:
                perm = step[1]
                inv = [0] * len(perm)
                for i, p in enumerate(perm):
                    inv[p] = i
                steps.append(("i", tuple(inv)))
        return Encoding(steps, self.target, self.source)

    def __len__(self):
        return len(self.steps)


def identity(tri):
    return Encoding((), tri, tri)


def flip_step(tri, label):
    a, b, c, d, e = tri.square(label)
    return ("f", idx(e), idx(a), idx(b), idx(c), idx(d))


def isometry_step(mapping, zeta):
    perm = [0] * zeta
    for s, t in mapping.items():
        if s >= 0:
            perm[s] = idx(t)
    return ("i", tuple(perm))


def dual_weight(tri, w, label):
    """Arcs in the triangle of label that do not meet label (the corner
    opposite it)."""
    _, j, k = tri.corner_lookup[label]
    return (w[idx(j)] + w[idx(k)] - w[idx(label)]) // 2


def left_weight(tri, w, label):
    """Arcs cutting off the corner at the tail of label, inside its triangle."""
    return dual_weight(tri, w, tri.corner_lookup[label][1])


def edge_curve(tri, label):
    """Weights of the curve running once around the loop edge label, on the
    side to its right."""
    assert tri.is_loop(label)
    w = [0] * tri.zeta
    for l in tri.vertex_slice(label, ~label)[1:]:
        w[idx(l)] += 1
    return tuple(w)


def is_bipod(tri, w, label):
    if not tri.is_flippable(label):
        return False
    _, a, b = tri.corner_lookup[label]
    return (dual_weight(tri, w, label) == 0 and dual_weight(tri, w, a) > 0
            and dual_weight(tri, w, b) > 0)


def parallel_loop(tri, w):
    """A loop label whose edge curve equals w, or None."""
    for label in tri.labels:
        if w[idx(label)] == 0 and tri.is_loop(label):
            if edge_curve(tri, label) == tuple(w):
                return label
    return None


class ShortForm:
    """A curve c together with an encoding F and loop label l so that F(c) is
    the edge curve of l on F.target."""

    __slots__ = ("conjugator", "label", "weights")

    def __init__(self, conjugator, label, weights):
        self.conjugator = conjugator
        self.label = label
        self.weights = weights

    @property
    def tri(self):
        return self.conjugator.target

    def intersection(self, x):
        """i(c, x) for a curve x given by weights on the source triangulation."""
        return short_intersection(self.tri, self.label, self.conjugator(x))


def shorten(tri, w, max_flips=100000, max_expansions=200000):
    """Flip bipods greedily; if that stalls short of an edge curve (which
    happens for curves cutting off a vertex-free subsurface) finish with a
    best-first search on total weight."""
    steps = []
    cur = tri
    w = tuple(w)
    extra = []
    seen = set()
    for _ in range(max_flips):
        label = parallel_loop(cur, w)
        if label is not None:
            return ShortForm(Encoding(steps, tri, cur), label, w)
        # Edges of the far triangle of the last flip go first, so the flips
        # keep turning around one vertex.
        for cand in extra + cur.labels:
            if is_bipod(cur, w, cand):
                break
        else:
            cand = None
        if cand is None or (cur.triangles, w) in seen:
            more, cur, w, label = _search_short(cur, w, max_expansions)
            steps.extend(more)
            return ShortForm(Encoding(steps, tri, cur), label, w)
        seen.add((cur.triangles, w))
        _, _, c, d, _ = cur.square(cand)
        extra = [c, d]
        step = flip_step(cur, cand)
        steps.append(step)
        w = _apply_step(step, w)
        cur = cur.flip(cand)
    raise RuntimeError("shortening did not terminate")


def _apply_step(step, w):
    _, e, a, b, c, d = step
    w = list(w)
    w[e] = max(w[a] + w[c], w[b] + w[d]) - w[e]
    return tuple(w)


def _search_short(tri, w, max_expansions):
    seen = {(tri.triangles, w)}
    heap = [(sum(w), 0, 0, tri, w)]
    parent = {0: None}
    counter = 0
    for _ in range(max_expansions):
        if not heap:
            break
        _, depth, node, cur, cw = heapq.heappop(heap)
        label = parallel_loop(cur, cw)
        if label is not None:
            path = []
            while parent[node] is not None:
                node, step = parent[node]
                path.append(step)
            return path[::-1], cur, cw, label
        for cand in cur.labels:
            if not cur.is_flippable(cand):
                continue
            step = flip_step(cur, cand)
            nw = _apply_step(step, cw)
            nt = cur.flip(cand)
            key = (nt.triangles, nw)
            if key in seen:
                continue
            seen.add(key)
            counter += 1
            parent[counter] = (node, step)
            heapq.heappush(heap, (sum(nw), depth + 1, counter, nt, nw))
    raise RuntimeError("could not shorten curve within the search budget")


def short_intersection(tri, label, x):
    """i(edge curve of label, x) for a curve x on tri."""
    around = min(left_weight(tri, x, l) for l in tri.vertex_slice(label, ~label))
    return x[idx(label)] - 2 * max(0, around)


def short_twist(tri, label, w):
    """Encoding tri -> tri of the twist about the edge curve w of label."""
    num_flips = sum(w) - dual_weight(tri, w, label)
    steps = []
    cur = tri
    for _ in range(num_flips):
        lab = cur.corner_lookup[label][2]
        steps.append(flip_step(cur, lab))
        cur = cur.flip(lab)
    mapping = cur.find_isometry(tri, {label: label})
    if mapping is None:
        raise RuntimeError("twist flip sequence did not close up")
    steps.append(isometry_step(mapping, tri.zeta))
    return Encoding(steps, tri, tri)


def twist_encoding(tri, w):
    """Encoding tri -> tri of a Dehn twist about the curve with weights w."""
    sf = shorten(tri, w)
    t = short_twist(sf.tri, sf.label, sf.weights)
    return sf.conjugator.inverse() * t * sf.conjugator
