"""Adjacency in the curve graph, CG0, the principal curve graph and the
intermediate graph, plus exact classifiers for small distances."""

from collections import deque
from dataclasses import dataclass

from .curves import NormalCurve, same_surface
from .errors import EqualCurves, PclabError
from .kernel import are_isotopic, cached_picture, edge_cuts, embed_pair, geometric_intersection, graph_from_picture
from .picture import reduce_cyclic, weights_from_cut_sequence
from .regions import ESSENTIAL, POLYGON, PUNCTURED, disjoint_components, trace_regions

CURVE_GRAPH = "CurveGraph"
CG0 = "CG0"
PRINCIPAL = "Principal"
INTERMEDIATE = "Intermediate"
VARIANTS = (CURVE_GRAPH, CG0, PRINCIPAL, INTERMEDIATE)


@dataclass(frozen=True)
class EdgeRule:
    variant: str = PRINCIPAL
    punctured_threshold: int = 4
    # Only count a complementary component of a disjoint pair if it holds a
    # third curve (i.e. it is not a pair of pants or an annulus).
    strict_disjoint: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown edge rule {self.variant!r}")
        if self.punctured_threshold not in (4, 6):
            raise ValueError("punctured_threshold must be 4 or 6")

    @classmethod
    def parse(cls, name):
        table = {"cg": cls(CURVE_GRAPH), "cg0": cls(CG0), "principal": cls(PRINCIPAL),
                 "principal6": cls(PRINCIPAL, 6), "intermediate": cls(INTERMEDIATE)}
        try:
            return table[name.lower()]
        except KeyError:
            raise ValueError(f"unknown rule {name!r}; expected one of {sorted(table)}") from None

    def to_json(self):
        return {"variant": self.variant, "punctured_threshold": self.punctured_threshold,
                "strict_disjoint": self.strict_disjoint}


PRINCIPAL4 = EdgeRule(PRINCIPAL, 4)


def _face_qualifies(f, rule):
    if f.kind == ESSENTIAL:
        return True
    if rule.variant == CG0:
        return False
    if rule.variant == PRINCIPAL:
        return ((f.kind == POLYGON and f.side_count >= 8)
                or (f.kind == PUNCTURED and f.side_count >= rule.punctured_threshold))
    return f.kind == POLYGON and f.side_count >= 10


def _irregular(f):
    """Faces counted by the two-face clause of the intermediate rule."""
    if f.kind == POLYGON:
        return f.side_count not in (4, 6)
    if f.kind == PUNCTURED:
        return f.side_count != 2
    return True


def edge_verdict(c, d, rule=PRINCIPAL4):
    """Adjacency together with the faces (or components) that witness it."""
    same_surface(c, d)
    if are_isotopic(c, d):
        raise EqualCurves("adjacency is undefined for isotopic curves")
    pic = cached_picture(c, d)
    if pic.n_crossings == 0:
        comps = disjoint_components(pic)
        if rule.variant == CURVE_GRAPH:
            wit = []
        elif rule.strict_disjoint:
            wit = [i for i, k in enumerate(comps) if k.holds_new_curve()]
        else:
            # No complementary component of two disjoint essential curves is a
            # disc or once-punctured disc, so every component counts.
            wit = [i for i, k in enumerate(comps) if not (k.euler_char == 1 and k.punctures <= 1)]
        adj = rule.variant == CURVE_GRAPH or bool(wit)
        return {"adjacent": adj, "rule": rule.to_json(), "intersection": 0,
                "witness_components": [
                    {"index": i, "euler_char": comps[i].euler_char, "punctures": comps[i].punctures,
                     "genus": comps[i].genus, "boundary": [list(b) for b in comps[i].boundary]}
                    for i in wit]}
    prof = trace_regions(graph_from_picture(pic, c.spec, c, d))
    if rule.variant == CURVE_GRAPH:
        wit = []
    else:
        wit = [i for i, f in enumerate(prof.faces) if _face_qualifies(f, rule)]
        if rule.variant == INTERMEDIATE and not wit:
            odd = [i for i, f in enumerate(prof.faces) if _irregular(f)]
            if len(odd) >= 2:
                wit = odd
    return {"adjacent": bool(wit), "rule": rule.to_json(), "intersection": pic.n_crossings,
            "witness_faces": [dict(prof.faces[i].to_json(), index=i) for i in wit]}


def adjacent(c, d, rule=PRINCIPAL4):
    return edge_verdict(c, d, rule)["adjacent"]


def face_pushoff(g, face):
    """A curve parallel to one boundary walk of a face of c union d."""
    cuts = edge_cuts(g)
    start = face.darts[0]
    walk, h = [], start
    while True:
        walk.append(h)
        h = g.face_next(h)
        if h == start:
            break
    seq = reduce_cyclic([l for h in walk for l in cuts[h]])
    if not seq:
        return None
    tri = g.c.tri
    w = weights_from_cut_sequence(tri, seq)
    try:
        return NormalCurve(g.spec, w, tri)
    except PclabError:
        return None


def disjoint_witness(c, d):
    """An essential curve disjoint from both c and d, read off an essential
    face of c union d, or None if the pair binds."""
    g = embed_pair(c, d)
    prof = trace_regions(g)
    for f in prof.faces:
        if f.kind != ESSENTIAL:
            continue
        # Try every boundary walk of the face.
        seen = set()
        for h0 in f.darts:
            if h0 in seen:
                continue
            walk, h = [], h0
            while h not in walk:
                walk.append(h)
                h = g.face_next(h)
            seen.update(walk)
            sub = type(f)(f.side_count, f.puncture_count, f.euler_char, f.kind,
                          f.boundary_components, (h0,), f.punctures)
            e = face_pushoff(g, sub)
            if e is None:
                continue
            if (geometric_intersection(e, c) == 0 and geometric_intersection(e, d) == 0
                    and not are_isotopic(e, c) and not are_isotopic(e, d)):
                return e
    return None


def cg_distance_class(c, d):
    """0, 1, 2 or ">=3" together with a witness curve for class 2."""
    same_surface(c, d)
    if are_isotopic(c, d):
        return 0, None
    if geometric_intersection(c, d) == 0:
        return 1, None
    prof = trace_regions(embed_pair(c, d))
    if prof.binds:
        return ">=3", None
    e = disjoint_witness(c, d)
    if e is None:
        raise RuntimeError("non-binding pair without an extractable disjoint curve")
    return 2, e


def pc_distance_class(c, d, rule=PRINCIPAL4):
    if rule.variant != PRINCIPAL:
        raise ValueError("pc_distance_class needs a Principal rule")
    same_surface(c, d)
    if are_isotopic(c, d):
        return 0
    return 1 if adjacent(c, d, rule) else ">=2"


def _bfs_chain(nodes, start, goal, rule):
    """Shortest path start -> goal in the graph on nodes whose edges are
    verified adjacencies; None if disconnected."""
    nodes = list(dict.fromkeys(nodes))
    cache = {}

    def edge(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            try:
                cache[key] = adjacent(nodes[i], nodes[j], rule)
            except EqualCurves:
                cache[key] = False
        return cache[key]

    s, t = nodes.index(start), nodes.index(goal)
    prev = {s: None}
    dq = deque([s])
    while dq:
        u = dq.popleft()
        if u == t:
            path = []
            while u is not None:
                path.append(nodes[u])
                u = prev[u]
            return path[::-1]
        for v in range(len(nodes)):
            if v not in prev and edge(u, v):
                prev[v] = u
                dq.append(v)
    return None


def pc_upper_bound(c, d, rule=PRINCIPAL4, budget=40):
    """Length of an explicit PC edge path from c to d, with the path; (None,
    None) when no chain is found within the candidate budget.  Every edge
    of the returned path has been checked with adjacent()."""
    from .traintracks import one_switch_track, splitting_sequence, vertex_cycles

    same_surface(c, d)
    if are_isotopic(c, d):
        return 0, [c]
    if adjacent(c, d, rule):
        return 1, [c, d]
    cands = [c, d]
    cls, wit = cg_distance_class(c, d)
    if wit is not None:
        cands.append(wit)
    else:
        track, cert, _ = one_switch_track(c, d)
        cands.extend(vertex_cycles(track, limit=budget))
        for _, vc in splitting_sequence(track, cert, max_stages=budget):
            cands.append(vc)
    cands = [x for x in cands if x.spec == c.spec][:budget + 2]
    path = _bfs_chain(cands, c, d, rule)
    if path is None:
        return None, None
    return len(path) - 1, path
