"""Intersection numbers, isotopy tests and minimal-position embeddings."""

from dataclasses import dataclass, field
from functools import lru_cache

from .curves import NormalCurve, same_surface
from .errors import DisjointPair, EqualCurves
from .flipgraph import shorten
from .picture import minimal_picture

# Slots of the four darts at a crossing.
C_OUT, D_OUT, C_IN, D_IN = 0, 1, 2, 3
LABELS = ("c", "d", "c", "d")

# Above this total weight the shortening route is used on punctured surfaces.
PICTURE_LIMIT = 400


@lru_cache(maxsize=4096)
def _short_form(tri, weights):
    return shorten(tri, weights)


def _picture(c, d):
    return minimal_picture(c.tri, c.weights, d.weights, c.spec.closed)


_pic_cache = {}


def cached_picture(c, d):
    key = (c.spec, c.weights, d.weights)
    pic = _pic_cache.get(key)
    if pic is None:
        if len(_pic_cache) > 2048:
            _pic_cache.clear()
        pic = _pic_cache[key] = _picture(c, d)
    return pic


def geometric_intersection(c, d, method="auto"):
    """i(c, d).  The explicit picture is used on closed surfaces and for small
    curves; otherwise the lighter curve is shortened and the loop-edge formula
    applied."""
    same_surface(c, d)
    if c == d:
        return 0
    if method == "auto":
        small = c.weight() + d.weight() <= PICTURE_LIMIT
        method = "picture" if (c.spec.closed or small) else "shorten"
    if method == "picture":
        return cached_picture(c, d).n_crossings
    if c.spec.closed:
        raise ValueError("the shortening route needs a punctured surface")
    if c.weight() > d.weight():
        c, d = d, c
    return _short_form(c.tri, c.weights).intersection(d.weights)


def are_isotopic(c, d):
    same_surface(c, d)
    if c.weights == d.weights:
        return True
    if not c.spec.closed:
        return False
    pic = cached_picture(c, d)
    if pic.n_crossings:
        return False
    for R in pic.regions:
        if R.euler == 0 and not R.punctures and sorted(x for x, _ in R.boundary) == [0, 1]:
            return True
    return False


@dataclass
class EmbeddedGraph:
    """c union d as a 4-valent graph.  Dart 4v+s is slot s at vertex v, with
    slots c_out, d_out, c_in, d_in; rotation[v] lists the darts of v
    counter-clockwise and alpha pairs the two ends of each edge."""
    spec: object
    n_vertices: int
    rotation: list
    alpha: list
    labels: list
    signs: list
    dart_region: list
    region_euler: dict
    region_punctures: dict
    c: NormalCurve = None
    d: NormalCurve = None
    picture: object = field(default=None, repr=False)
    dart_side: list = field(default=None, repr=False)
    crossing_ids: list = field(default=None, repr=False)

    @property
    def n_darts(self):
        return 4 * self.n_vertices

    @property
    def n_edges(self):
        return 2 * self.n_vertices

    def sigma(self, h):
        rot = self.rotation[h // 4]
        return rot[(rot.index(h) + 1) % 4]

    def sigma_inv(self, h):
        rot = self.rotation[h // 4]
        return rot[(rot.index(h) - 1) % 4]

    def face_next(self, h):
        return self.sigma_inv(self.alpha[h])


def graph_from_picture(pic, spec, c=None, d=None):
    xs_c = [tk[1] for tk in pic.walk[0] if tk[0] == "x"]
    xs_d = [tk[1] for tk in pic.walk[1] if tk[0] == "x"]
    vid = {x: i for i, x in enumerate(xs_c)}
    V = len(xs_c)
    alpha = [None] * (4 * V)
    for seq, out, inn in ((xs_c, C_OUT, C_IN), (xs_d, D_OUT, D_IN)):
        for i, x in enumerate(seq):
            y = seq[(i + 1) % len(seq)]
            a, b = 4 * vid[x] + out, 4 * vid[y] + inn
            alpha[a], alpha[b] = b, a
    rotation, signs = [None] * V, [None] * V
    dart_region = [None] * (4 * V)
    dart_side = [None] * (4 * V)
    slot_of = {}
    for x, v in vid.items():
        slots = []
        for node in pic.xrot[x]:
            cid, toward = pic.xnbr[x][node]
            ch = pic.chords[cid]
            forward = toward == pic.chord_dir[cid]
            slot = (C_OUT if forward else C_IN) if ch[1] == 0 else (D_OUT if forward else D_IN)
            slots.append(slot)
            slot_of[(x, node)] = 4 * v + slot
            dart_side[4 * v + slot] = (ch[3] if toward == 1 else ch[2]) // pic.M
        rotation[v] = [4 * v + s for s in slots]
        k = slots.index(C_OUT)
        cyc = slots[k:] + slots[:k]
        signs[v] = 1 if cyc == [C_OUT, D_OUT, C_IN, D_IN] else -1
    for R in pic.regions:
        for x, node in R.angles:
            dart_region[slot_of[(x, node)]] = R.rid
    return EmbeddedGraph(
        spec=spec, n_vertices=V, rotation=rotation, alpha=alpha,
        labels=[LABELS[h % 4] for h in range(4 * V)], signs=signs,
        dart_region=dart_region,
        region_euler={R.rid: R.euler for R in pic.regions},
        region_punctures={R.rid: list(R.punctures) for R in pic.regions},
        c=c, d=d, picture=pic, dart_side=dart_side, crossing_ids=xs_c)


def edge_cuts(g):
    """For every dart, the triangulation edges crossed (as labels) when
    running along its edge of c union d away from the dart's vertex."""
    pic = g.picture
    vid = {x: i for i, x in enumerate(g.crossing_ids)}
    out = [None] * g.n_darts
    for X, (o, i) in enumerate(((C_OUT, C_IN), (D_OUT, D_IN))):
        tokens = pic.walk[X]
        xpos = [k for k, tk in enumerate(tokens) if tk[0] == "x"]
        for a_i, a in enumerate(xpos):
            b = xpos[(a_i + 1) % len(xpos)]
            run = tokens[a + 1:b] if b > a else tokens[a + 1:] + tokens[:b]
            cuts = [tk[1] for tk in run if tk[0] == "cut"]
            h = 4 * vid[tokens[a][1]] + o
            out[h] = tuple(cuts)
            out[g.alpha[h]] = tuple(~l for l in reversed(cuts))
    return out


def embed_pair(c, d):
    same_surface(c, d)
    if are_isotopic(c, d):
        raise EqualCurves("the curves are isotopic")
    pic = cached_picture(c, d)
    if pic.n_crossings == 0:
        raise DisjointPair("the curves can be realised disjointly")
    return graph_from_picture(pic, c.spec, c, d)
