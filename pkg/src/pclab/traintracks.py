"""Train tracks built from pairs of curves, their measure cones, and guided
splitting.

Every track is stored combinatorially: each switch has two ordered sides of
half-branches (branch, end), and each branch has a region id on its left and
on its right.  Side lists are ordered left to right as seen by someone
standing on the switch and looking along the half-branches.

Tracks built directly from a picture of two curves are base tracks; their
branches carry cut sequences on the triangulation and every switch is an arc
with numbered attachment points.  Combed and split tracks keep, for each
branch, the train path it collapses onto in the base track.  A measure is
turned into curves by pushing it down to the base and tracing strands.
"""

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import networkx as nx

from .curves import NormalCurve
from .errors import NoEligibleSide, NotBinding, NotLargeBranch, NotRecurrent, PclabError
from .kernel import C_IN, C_OUT, D_IN, D_OUT, are_isotopic, edge_cuts, embed_pair
from .picture import reduce_cyclic, weights_from_cut_sequence
from .predicates import PRINCIPAL4
from .regions import POLYGON, PUNCTURED, trace_regions
from .triangulation import idx


@dataclass
class Embedding:
    """Placement of a base track on the triangulation."""
    spec: object
    tri: object
    switches: list          # base switch table
    cuts: list              # per base branch, labels crossed from end 0 to end 1
    pos: dict               # half-branch -> attachment point on its switch arc
    arcs: list              # per switch, labels crossed between consecutive points
    linear: bool = False    # strands never cancel, so coordinates add up

    def transit(self, s, p, q):
        gaps = self.arcs[s]
        if not gaps or p == q:
            return []
        if p < q:
            return [l for k in range(p, q) for l in gaps[k]]
        return [~l for k in range(p - 1, q - 1, -1) for l in reversed(gaps[k])]


@dataclass
class TrainTrack:
    switches: list          # [(side0, side1)], entries (branch, end)
    paths: list             # per branch: tuple of (base branch, +1/-1)
    sides: list             # per branch: (left region, right region)
    regions: dict           # region id -> (euler characteristic, punctures)
    base: Embedding = field(repr=False)
    kind: str = "derived"

    @property
    def n_branches(self):
        return len(self.paths)

    @property
    def spec(self):
        return self.base.spec

    def ends(self):
        out = [[None, None] for _ in self.paths]
        for s, sides in enumerate(self.switches):
            for side, lst in enumerate(sides):
                for i, (b, e) in enumerate(lst):
                    out[b][e] = (s, side, i)
        return out

    @property
    def generic(self):
        return all(sorted(map(len, sw)) == [1, 2] or _is_loop_switch(sw) for sw in self.switches)

    def is_closed_curve(self):
        return len(self.switches) == 1 and _is_loop_switch(self.switches[0]) and self.n_branches == 1

    def to_json(self):
        return {"kind": self.kind,
                "switches": [[[list(h) for h in side] for side in sw] for sw in self.switches],
                "branches": [{"path": [list(p) for p in self.paths[b]], "left": self.sides[b][0],
                              "right": self.sides[b][1]} for b in range(self.n_branches)],
                "regions": {str(k): list(v) for k, v in sorted(self.regions.items())},
                "surface": self.spec.to_json()}

    def key(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _is_loop_switch(sw):
    return len(sw[0]) == 1 and len(sw[1]) == 1


@dataclass
class CarryingCertificate:
    track_key: str
    curve: NormalCurve
    weights: tuple

    def to_json(self):
        return {"track": self.track_key, "curve": self.curve.to_json(),
                "weights": [str(w) for w in self.weights]}


# ---------------------------------------------------------------------------
# measures and carried curves

def switch_matrix(t):
    rows = []
    for side0, side1 in t.switches:
        row = [0] * t.n_branches
        for b, _ in side1:
            row[b] += 1
        for b, _ in side0:
            row[b] -= 1
        rows.append(row)
    return rows


def satisfies_switch_conditions(t, w):
    return len(w) == t.n_branches and all(x >= 0 for x in w) and all(
        sum(r * x for r, x in zip(row, w)) == 0 for row in switch_matrix(t))


def push_forward(t, w):
    out = [0] * len(t.base.cuts)
    for b, path in enumerate(t.paths):
        if w[b]:
            for b0, _ in path:
                out[b0] += w[b]
    return out


def realize(emb, w):
    """Components of the multicurve carried by a base track with integral
    weights w, as weight vectors on the triangulation."""
    if emb.linear:
        total = [0] * emb.tri.zeta
        for b, x in enumerate(w):
            if x:
                for l in emb.cuts[b]:
                    total[idx(l)] += x
        return [tuple(total)]
    slots, where = {}, {}
    for s, sides in enumerate(emb.switches):
        for side, lst in enumerate(sides):
            seq = []
            for b, e in lst:
                for r in range(w[b]):
                    where[(b, e, r)] = (s, side, len(seq))
                    seq.append((b, e, r))
            slots[(s, side)] = seq
        if len(slots[(s, 0)]) != len(slots[(s, 1)]):
            raise ValueError(f"switch condition fails at switch {s}")
    inv = [tuple(~l for l in reversed(c)) for c in emb.cuts]
    seen = set()
    comps = []
    for b0 in range(len(w)):
        for i0 in range(w[b0]):
            if (b0, i0) in seen:
                continue
            seq = []
            b, i, e = b0, i0, 0
            while (b, i) not in seen:
                seen.add((b, i))
                seq.extend(emb.cuts[b] if e == 0 else inv[b])
                ea = 1 - e
                r = i if ea == 0 else w[b] - 1 - i
                s, side, k = where[(b, ea, r)]
                other = slots[(s, 1 - side)]
                b2, e2, r2 = other[len(other) - 1 - k]
                seq.extend(emb.transit(s, emb.pos.get((b, ea), 0), emb.pos.get((b2, e2), 0)))
                b, i, e = b2, (r2 if e2 == 0 else w[b2] - 1 - r2), e2
            comps.append(weights_from_cut_sequence(emb.tri, reduce_cyclic(seq)))
    return comps


def _primitive(w):
    fr = [Fraction(x) for x in w]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def carried_curve(t, w):
    """The simple closed curve carried with measure w (scaled to be primitive)."""
    w = _primitive(w)
    comps = realize(t.base, push_forward(t, w))
    if len(comps) != 1:
        raise ValueError(f"measure carries {len(comps)} components")
    return NormalCurve(t.spec, comps[0], t.base.tri, check=not t.base.linear)


def verify_certificate(t, cert):
    """Switch conditions, and the reconstruction reproduces the curve."""
    w = cert.weights
    if not satisfies_switch_conditions(t, w):
        return False
    if any(x != int(x) for x in w):
        return False
    comps = realize(t.base, push_forward(t, [int(x) for x in w]))
    if len(comps) != 1:
        return False
    if t.base.linear:
        return comps[0] == cert.curve.weights
    try:
        got = NormalCurve(t.spec, comps[0], t.base.tri)
    except PclabError:
        return False
    return are_isotopic(got, cert.curve)


# ---------------------------------------------------------------------------
# complementary regions

def walks(t):
    """Boundary walks of the complementary regions.  Each walk is a list of
    (branch, direction) steps with the region on the left, plus its region id
    and cusp count."""
    ends = t.ends()
    seen = set()
    out = []
    for b0 in range(t.n_branches):
        for d0 in (1, -1):
            if (b0, d0) in seen:
                continue
            steps, cusps = [], 0
            rid = t.sides[b0][0 if d0 == 1 else 1]
            b, d = b0, d0
            while (b, d) not in seen:
                seen.add((b, d))
                steps.append((b, d))
                here = t.sides[b][0 if d == 1 else 1]
                if here != rid:
                    raise PclabError(f"region labels disagree along a boundary walk at branch {b}")
                s, side, i = ends[b][1 if d == 1 else 0]
                lst = t.switches[s][side]
                if i + 1 < len(lst):
                    cusps += 1
                    b, e = lst[i + 1]
                else:
                    b, e = t.switches[s][1 - side][0]
                d = 1 if e == 0 else -1
            out.append((steps, rid, cusps))
    return out


def census(t):
    """Per region: euler characteristic, punctures, cusps, boundary walks."""
    rows = {rid: {"euler": eu, "punctures": pu, "cusps": 0, "walks": 0}
            for rid, (eu, pu) in t.regions.items()}
    for _, rid, cusps in walks(t):
        rows[rid]["cusps"] += cusps
        rows[rid]["walks"] += 1
    return rows


def region_problems(t):
    bad = []
    for rid, r in census(t).items():
        if r["walks"] == 0:
            bad.append((rid, "region without boundary"))
        elif r["euler"] == 1 and r["punctures"] == 0 and r["cusps"] <= 2:
            bad.append((rid, f"disc with {r['cusps']} cusps"))
        elif r["euler"] == 1 and r["punctures"] == 1 and r["cusps"] == 0:
            bad.append((rid, "smooth once-punctured disc"))
        elif r["euler"] == 0 and r["punctures"] == 0 and r["cusps"] == 0:
            bad.append((rid, "smooth annulus"))
    return bad


def is_maximal(t, ignore_bigons=False):
    """Only trigons and once-punctured monogons.  With ignore_bigons, discs
    with two cusps are also allowed: they collapse to a single branch, so a
    smoothing track with bigon regions is maximal once they are collapsed."""
    for r in census(t).values():
        trigon = r["euler"] == 1 and r["punctures"] == 0 and r["cusps"] == 3
        monogon = r["euler"] == 1 and r["punctures"] == 1 and r["cusps"] == 1
        bigon = ignore_bigons and r["euler"] == 1 and r["punctures"] == 0 and r["cusps"] == 2
        if not (trigon or monogon or bigon):
            return False
    return True


# ---------------------------------------------------------------------------
# recurrence and vertex cycles

def train_digraph(t):
    """Oriented branches, with an arc whenever a train path may continue."""
    ends = t.ends()
    G = nx.DiGraph()
    for b in range(t.n_branches):
        for d in (1, -1):
            G.add_node((b, d))
            s, side, _ = ends[b][1 if d == 1 else 0]
            for b2, e2 in t.switches[s][1 - side]:
                G.add_edge((b, d), (b2, 1 if e2 == 0 else -1))
    return G


def is_recurrent(t):
    """A strictly positive measure exists iff every branch lies on a closed
    train path, i.e. in a strongly connected piece of the train digraph that
    carries a cycle."""
    G = train_digraph(t)
    on_cycle = set()
    for comp in nx.strongly_connected_components(G):
        if len(comp) > 1 or any(G.has_edge(v, v) for v in comp):
            on_cycle.update(b for b, _ in comp)
    return len(on_cycle) == t.n_branches


def exact_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def is_extreme(t, w, matrix=None):
    matrix = matrix or switch_matrix(t)
    supp = [b for b, x in enumerate(w) if x]
    sub = [[row[b] for b in supp] for row in matrix]
    return exact_rank(sub) == len(supp) - 1 if supp else False


def cycle_measures(t, max_cycles=200000):
    """Count vectors of simple closed train paths short enough to be extreme
    (an extreme ray has support at most rank + 1)."""
    matrix = switch_matrix(t)
    bound = 2 * (exact_rank(matrix) + 1)
    G = train_digraph(t)
    out = []
    for k, cyc in enumerate(nx.simple_cycles(G, length_bound=bound)):
        if k >= max_cycles:
            break
        w = [0] * t.n_branches
        for b, _ in cyc:
            w[b] += 1
        out.append(tuple(w))
    return out, matrix


def vertex_measures(t, max_cycles=200000):
    """Primitive integral generators of the extreme rays, in canonical order."""
    if not is_recurrent(t):
        raise NotRecurrent("the track admits no positive measure")
    cands, matrix = cycle_measures(t, max_cycles)
    found = set()
    for w in cands:
        if w in found:
            continue
        if is_extreme(t, w, matrix):
            found.add(_primitive(w))
    return sorted(found, key=lambda w: (sum(w), w))


def vertex_cycles(t, limit=None, max_cycles=200000):
    out = []
    for w in vertex_measures(t, max_cycles):
        out.append(carried_curve(t, w))
        if limit is not None and len(out) >= limit:
            break
    return out


def first_vertex_measure(t):
    """The vertex cycle chosen for a track: the shortest extreme closed train
    path through the lowest possible branch."""
    G = train_digraph(t)
    matrix = switch_matrix(t)
    for b in range(t.n_branches):
        for d in (1, -1):
            src = (b, d)
            prev = {src: None}
            dq = deque([src])
            hit = None
            while dq and hit is None:
                u = dq.popleft()
                for v in G.successors(u):
                    if v == src:
                        hit = u
                        break
                    if v not in prev:
                        prev[v] = u
                        dq.append(v)
            if hit is None:
                continue
            w = [0] * t.n_branches
            u = hit
            while u is not None:
                w[u[0]] += 1
                u = prev[u]
            if is_extreme(t, w, matrix):
                return _primitive(w)
    return vertex_measures(t)[0]


# ---------------------------------------------------------------------------
# construction from a binding pair

def _choose_side(g, prof, rule):
    faces = prof.faces
    face_of = {h: fi for fi, f in enumerate(faces) for h in f.darts}

    def eligible(f):
        return (f.kind == POLYGON and f.side_count >= 6) or (f.kind == PUNCTURED and f.side_count >= 4)

    def large(f):
        return ((f.kind == POLYGON and f.side_count >= 8)
                or (f.kind == PUNCTURED and f.side_count >= rule.punctured_threshold))

    pool = [i for i, f in enumerate(faces) if large(f)] or [i for i, f in enumerate(faces) if eligible(f)]
    if not pool:
        raise NoEligibleSide("no polygon with six sides or punctured polygon with four")
    C = min(pool, key=lambda i: (-faces[i].side_count, i))
    best = None
    for h in faces[C].darts:
        if g.labels[h] != "c":
            continue
        opp = face_of[g.alpha[h]]
        key = (faces[opp].side_count, h)
        if best is None or key < best[0]:
            best = (key, h, opp)
    _, h, Cp = best
    v, slot = divmod(h, 4)
    j = v if slot == C_OUT else (v - 1) % g.n_vertices
    return face_of, C, Cp, j


def one_switch_track(c, d, profile=None, rule=PRINCIPAL4):
    """Collapse c minus one side I of a large face of c union d to a point.
    The arcs of d become branches at a single switch, half-branches leaving
    c to its left on one side and to its right on the other; bigons left by
    quadrangles of c union d are collapsed.  Returns the track, the
    certificate for d, and a record of the arc I."""
    try:
        g = embed_pair(c, d)
    except PclabError as exc:
        raise NotBinding(f"pair does not bind: {exc}") from None
    prof = profile or trace_regions(g)
    if not prof.binds:
        raise NotBinding("the pair has an essential complementary region")
    V = g.n_vertices
    faces = prof.faces
    face_of, C, Cp, j = _choose_side(g, prof, rule)
    cuts = edge_cuts(g)
    pos = {v: (v - j - 1) % V for v in range(V)}
    gaps = [cuts[4 * ((j + 1 + k) % V) + C_OUT] for k in range(V - 1)]

    # d-arcs in the order d runs through them
    order, v = [], 0
    for _ in range(V):
        order.append(v)
        v = g.alpha[4 * v + D_OUT] // 4
    arc_of = {u: k for k, u in enumerate(order)}   # arc k starts at vertex order[k]
    head = [g.alpha[4 * u + D_OUT] // 4 for u in order]
    left = [face_of[4 * u + D_OUT] for u in order]
    right = [face_of[4 * w + D_IN] for w in head]

    bigon = {i for i, f in enumerate(faces)
             if f.kind == POLYGON and f.side_count == 4 and i not in (C, Cp)}
    arcs_of_face = {}
    for i in bigon:
        arcs = []
        for h in faces[i].darts:
            vv, slot = divmod(h, 4)
            if slot == D_OUT:
                arcs.append(arc_of[vv])
            elif slot == D_IN:
                arcs.append(arc_of[g.alpha[h] // 4])
        if len(arcs) != 2 or arcs[0] == arcs[1]:
            raise PclabError("quadrangle without two distinct d-sides")
        arcs_of_face[i] = arcs

    # bands of parallel arcs
    band = list(range(V))

    def find(a):
        while band[a] != a:
            band[a] = band[band[a]]
            a = band[a]
        return a

    for a1, a2 in arcs_of_face.values():
        r1, r2 = find(a1), find(a2)
        if r1 != r2:
            band[max(r1, r2)] = min(r1, r2)
    reps = sorted({find(a) for a in range(V)})
    bid = {r: i for i, r in enumerate(reps)}
    size = [0] * len(reps)
    for a in range(V):
        size[bid[find(a)]] += 1

    def outer(a, side):
        f = left[a] if side == 0 else right[a]
        steps = 0
        while f in bigon:
            a1, a2 = arcs_of_face[f]
            nxt = a2 if a1 == a else a1
            if left[nxt] == f and right[nxt] != f:
                f = right[nxt]
            elif right[nxt] == f and left[nxt] != f:
                f = left[nxt]
            else:
                raise PclabError("band of quadrangles closes up")
            a = nxt
            steps += 1
            if steps > V:
                raise PclabError("band of quadrangles closes up")
        return f

    merged = {Cp: C}
    rmap = lambda f: merged.get(f, f)
    base_cuts, sides, side_lists = [], [], ([], [])
    pos_hb = {}
    for i, a in enumerate(reps):
        u, w = order[a], head[a]
        base_cuts.append(cuts[4 * u + D_OUT])
        sides.append((rmap(outer(a, 0)), rmap(outer(a, 1))))
        s0 = 1 if g.signs[u] == 1 else 0
        s1 = 0 if g.signs[w] == 1 else 1
        side_lists[s0].append((pos[u], (i, 0)))
        side_lists[s1].append((pos[w], (i, 1)))
        pos_hb[(i, 0)], pos_hb[(i, 1)] = pos[u], pos[w]
    side0 = [hb for _, hb in sorted(side_lists[0], reverse=True)]
    side1 = [hb for _, hb in sorted(side_lists[1])]

    regions = {}
    for i, f in enumerate(faces):
        if i in bigon or i == Cp:
            continue
        regions[i] = (f.euler_char, f.puncture_count)
    fc, fp = faces[C], faces[Cp]
    if C != Cp:
        regions[C] = (fc.euler_char + fp.euler_char - 1, fc.puncture_count + fp.puncture_count)
    else:
        regions[C] = (fc.euler_char - 1, fc.puncture_count)

    emb = Embedding(c.spec, c.tri, [(side0, side1)], base_cuts, pos_hb, [gaps])
    track = TrainTrack([(side0, side1)], [((b, 1),) for b in range(len(reps))], sides,
                       regions, emb, kind="one-switch")
    # Cusp counts predicted by the construction: a face keeps one cusp per
    # c-side, and the two faces along I lose the sides at I.
    expected = {i: faces[i].side_count // 2 for i in regions if i != C}
    expected[C] = (fc.side_count // 2 - 1) + (fp.side_count // 2 - 1) if C != Cp else fc.side_count // 2 - 2
    got = census(track)
    for rid, r in got.items():
        if r["cusps"] != expected[rid]:
            raise PclabError(f"region {rid}: {r['cusps']} cusps, expected {expected[rid]}")
    cert = CarryingCertificate(track.key(), d, tuple(size))
    witness = {"face": C, "across": Cp, "arc_I": j, "points_on_c": 1,
               "face_sides": fc.side_count, "across_sides": fp.side_count}
    return track, cert, witness


# ---------------------------------------------------------------------------
# the smoothing track of a filling pair

def smoothing_track(a, b, cusp_first="c"):
    """Resolve every crossing of a and b into a switch.  The two corners whose
    counter-clockwise first side runs along the curve named by cusp_first
    become cusps; all other corners are smooth.  Branches are the edges of
    a union b: edges of a first, in the order a runs through them."""
    g = embed_pair(a, b)
    prof = trace_regions(g)
    V = g.n_vertices
    cuts = edge_cuts(g)
    face_of = {h: fi for fi, f in enumerate(prof.faces) for h in f.darts}

    def hb(h):
        v, slot = divmod(h, 4)
        if slot == C_OUT:
            return (v, 0)
        if slot == D_OUT:
            return (V + v, 0)
        u = g.alpha[h] // 4
        return (u, 1) if slot == C_IN else (V + u, 1)

    switches = []
    linear = True
    for v in range(V):
        rot = g.rotation[v]
        k = next(i for i in range(4) if g.labels[rot[i]] == cusp_first)
        r = [rot[(k + i) % 4] for i in range(4)]
        switches.append(([hb(r[1]), hb(r[0])], [hb(r[3]), hb(r[2])]))
        if g.dart_side[r[0]] == g.dart_side[r[3]] or g.dart_side[r[1]] == g.dart_side[r[2]]:
            linear = False
    bcuts = [cuts[4 * v + C_OUT] for v in range(V)] + [cuts[4 * v + D_OUT] for v in range(V)]
    sides = ([(face_of[4 * v + C_OUT], face_of[g.alpha[4 * v + C_OUT]]) for v in range(V)]
             + [(face_of[4 * v + D_OUT], face_of[g.alpha[4 * v + D_OUT]]) for v in range(V)])
    regions = {i: (f.euler_char, f.puncture_count) for i, f in enumerate(prof.faces)}
    emb = Embedding(a.spec, a.tri, switches, bcuts, {}, [None] * V, linear)
    track = TrainTrack(switches, [((i, 1),) for i in range(2 * V)], sides, regions, emb,
                       kind="smoothing")
    return track


def smoothing_weights(t, x, y):
    """Measure with weight x on every edge of the first curve and y on the
    second."""
    V = t.n_branches // 2
    return tuple([x] * V + [y] * V)


# ---------------------------------------------------------------------------
# combing and splitting

def _copy(t):
    return TrainTrack([(list(s0), list(s1)) for s0, s1 in t.switches], list(t.paths),
                      list(t.sides), dict(t.regions), t.base, t.kind)


def _reverse(path):
    return tuple((b, -d) for b, d in reversed(path))


def _right_facing_away(t, hbr):
    b, e = hbr
    return t.sides[b][1] if e == 0 else t.sides[b][0]


def _left_facing_away(t, hbr):
    b, e = hbr
    return t.sides[b][0] if e == 0 else t.sides[b][1]


def comb(t, w=None):
    """Make every switch trivalent by peeling off the two leftmost
    half-branches of an overfull side into a new switch.  New branches
    collapse into the old switch, so they have empty train paths."""
    t = _copy(t)
    w = list(w) if w is not None else None
    s = 0
    while s < len(t.switches):
        while True:
            sw = t.switches[s]
            n0, n1 = len(sw[0]), len(sw[1])
            if sorted((n0, n1)) in ([1, 2], [1, 1]):
                break
            side = 1 if n1 >= n0 else 0
            h0, h1 = sw[side][0], sw[side][1]
            nb = t.n_branches
            new = ([], [])
            new[side].extend([h0, h1])
            new[1 - side].append((nb, 1))
            t.switches.append(new)
            sw[side][0:2] = [(nb, 0)]
            t.paths.append(())
            t.sides.append((_left_facing_away(t, h0), _right_facing_away(t, h1)))
            if w is not None:
                w.append(w[h0[0]] + w[h1[0]])
        s += 1
    t.kind = "combed"
    return t, (tuple(w) if w is not None else None)


def large_branches(t):
    ends = t.ends()
    out = []
    for b in range(t.n_branches):
        ok = True
        for e in (0, 1):
            s, side, _ = ends[b][e]
            sw = t.switches[s]
            if not (len(sw[side]) == 1 and len(sw[1 - side]) == 2):
                ok = False
        if ok and ends[b][0][0] != ends[b][1][0]:
            out.append(b)
    return out


def _slid_paths(t, slides):
    """Train paths after half-branches slide along a split branch.  slides
    maps a half-branch to the path from its new attachment point to the old
    one."""
    out = {}
    for (x, e), through in slides.items():
        p = out.get(x, t.paths[x])
        out[x] = through + p if e == 0 else p + _reverse(through)
    return out


def split_measure(t, b, w):
    """Split the large branch b guided by the measure w.  Returns the new
    track, the new measure and the move made ('left', 'right', 'central')."""
    if b not in large_branches(t):
        raise NotLargeBranch(f"branch {b} is not large")
    ends = t.ends()
    s, ss, _ = ends[b][0]
    u, us, _ = ends[b][1]
    # Facing from s towards u: P1, P0 leave s backwards (left, right when
    # facing forwards) and Q0, Q1 leave u forwards.
    P0, P1 = t.switches[s][1 - ss]
    Q0, Q1 = t.switches[u][1 - us]
    wP1, wQ0 = w[P1[0]], w[Q0[0]]
    K = _right_facing_away(t, P0)
    F = _right_facing_away(t, Q0)
    pb = t.paths[b]
    n = _copy(t)
    w = list(w)
    if wP1 > wQ0:
        n.switches[s] = ([P1], [Q0, (b, 0)])
        n.switches[u] = ([P0, (b, 1)], [Q1])
        n.sides[b] = (F, K)
        w[b] = wP1 - wQ0
        moved, move = {Q0: pb, P0: _reverse(pb)}, "left"
    elif wP1 < wQ0:
        n.switches[s] = ([P0], [(b, 0), Q1])
        n.switches[u] = ([(b, 1), P1], [Q0])
        n.sides[b] = (K, F)
        w[b] = wQ0 - wP1
        moved, move = {Q1: pb, P1: _reverse(pb)}, "right"
    else:
        n.switches[s] = ([P1], [Q0])
        n.switches[u] = ([P0], [Q1])
        moved, move = {Q0: pb, P0: _reverse(pb)}, "central"
    for x, p in _slid_paths(t, moved).items():
        n.paths[x] = p
    n.kind = "derived"
    if move != "central":
        return n, tuple(w), move
    # b disappears and the gap it leaves joins the cusp regions at its ends.
    n.paths[b] = None
    n.sides[b] = None
    w[b] = None
    if F != K:
        (eF, pF), (eK, pK) = n.regions[F], n.regions[K]
        lo, hi = min(F, K), max(F, K)
        n.regions[lo] = (eF + eK - 1, pF + pK)
        del n.regions[hi]
        n.sides = [None if sd is None else tuple(lo if x == hi else x for x in sd) for sd in n.sides]
    else:
        eF, pF = n.regions[F]
        n.regions[F] = (eF - 1, pF)
    n, w = _smooth_bivalent(n, w)
    return n, tuple(w), move


def _smooth_bivalent(t, w):
    """Merge the two branches at each bivalent switch (unless it is the
    switch of a closed-curve component), then renumber."""
    changed = True
    while changed:
        changed = False
        for s, sw in enumerate(t.switches):
            if sw is None or not _is_loop_switch(sw):
                continue
            (x, ex), = sw[0]
            (y, ey), = sw[1]
            if x == y:
                continue
            px = t.paths[x] if ex == 1 else _reverse(t.paths[x])
            py = t.paths[y] if ey == 0 else _reverse(t.paths[y])
            sides = t.sides[x] if ex == 1 else t.sides[x][::-1]
            far_x, far_y = (x, 1 - ex), (y, 1 - ey)
            z = len(t.paths)
            t.paths.append(px + py)
            t.sides.append(tuple(sides))
            w.append(w[x])
            for v in t.switches:
                if v is None:
                    continue
                for side in (0, 1):
                    v[side][:] = [(z, 0) if h == far_x else (z, 1) if h == far_y else h for h in v[side]]
            t.switches[s] = None
            t.paths[x] = t.paths[y] = None
            t.sides[x] = t.sides[y] = None
            w[x] = w[y] = None
            changed = True
            break
    return _compact(t, w)


def _compact(t, w):
    live = [b for b in range(len(t.paths)) if t.paths[b] is not None]
    bmap = {b: i for i, b in enumerate(live)}
    t.switches = [([(bmap[b], e) for b, e in s0], [(bmap[b], e) for b, e in s1])
                  for s0, s1 in (v for v in t.switches if v is not None)]
    t.paths = [t.paths[b] for b in live]
    t.sides = [t.sides[b] for b in live]
    used = {r for sd in t.sides for r in sd}
    t.regions = {k: v for k, v in t.regions.items() if k in used}
    return t, [w[b] for b in live]


def split(t, branch, guide):
    """Guided split of a large branch, carrying the certificate along."""
    n, w, _ = split_measure(t, branch, guide.weights)
    return n, CarryingCertificate(n.key(), guide.curve, w)


def splitting_sequence(t, guide, max_stages=None):
    """Split large branches (lowest index first) as the guide measure
    dictates until the track is the guide curve.  Each stage is the track
    after one move with its chosen vertex cycle."""
    if not t.generic:
        t, w = comb(t, guide.weights)
    else:
        w = tuple(guide.weights)
    stages = []
    while not t.is_closed_curve():
        if max_stages is not None and len(stages) >= max_stages:
            break
        large = large_branches(t)
        if not large:
            raise NotLargeBranch("a generic track without large branches")
        t, w, _ = split_measure(t, large[0], w)
        stages.append((t, carried_curve(t, first_vertex_measure(t)), w))
    return [(tr, vc) for tr, vc, _ in stages]


def splitting_run(t, guide, max_stages=None):
    """Like splitting_sequence but keeps the measures and moves."""
    if not t.generic:
        t, w = comb(t, guide.weights)
    else:
        w = tuple(guide.weights)
    out = [(t, w, None)]
    while not t.is_closed_curve():
        if max_stages is not None and len(out) > max_stages:
            break
        large = large_branches(t)
        if not large:
            raise NotLargeBranch("a generic track without large branches")
        t, w, move = split_measure(t, large[0], w)
        out.append((t, w, move))
    return out
