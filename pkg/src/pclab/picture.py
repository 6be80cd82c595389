"""Explicit pictures of two normal curves c, d on the canonical triangulation.

Each edge carries the points of c and of d in some interleaving.  Inside a
triangle the normal arcs are chords of the boundary circle, and a c-chord
crosses a d-chord exactly when their endpoints interleave.  Cutting every
triangle along its chords gives pieces; gluing pieces across edge segments
gives the complementary regions of c and d.  Bigons are removed by swapping
adjacent c/d points along the corridor they cover, or, for a bigon that
swallows the marked point of a closed surface, by pushing d across it.
"""

from collections import defaultdict

from .triangulation import idx


class Region:
    __slots__ = ("rid", "pieces", "segments", "vertices", "angles",
                 "c_segs", "d_segs", "euler", "punctures", "sides", "boundary")

    def __init__(self, rid):
        self.rid = rid
        self.pieces = 0
        self.segments = []
        self.vertices = set()
        self.angles = []
        self.c_segs = set()
        self.d_segs = set()
        self.euler = 0
        self.punctures = []
        self.sides = 0
        self.boundary = []


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, a):
        p = self.p
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                a, b = b, a
            self.p[a] = b


def default_order(wc, wd):
    """Spread the c and d points evenly along every edge, c first on ties."""
    order = []
    for a, b in zip(wc, wd):
        keys = [((2 * i + 1) * max(b, 1), 0) for i in range(a)]
        keys += [((2 * j + 1) * max(a, 1), 1) for j in range(b)]
        if a == 0 or b == 0:
            keys = [(0, 0)] * a + [(0, 1)] * b
        keys.sort()
        order.append(tuple(k[1] for k in keys))
    return order


class Picture:
    def __init__(self, tri, wc, wd, order=None):
        self.tri = tri
        self.w = (tuple(wc), tuple(wd))
        self.order = [tuple(o) for o in (order or default_order(wc, wd))]
        self._build()

    # construction ------------------------------------------------------

    def _build(self):
        tri = self.tri
        order = self.order
        n = [len(o) for o in order]
        self.n = n
        pos = [[[], []] for _ in range(tri.zeta)]
        for e, o in enumerate(order):
            for p, x in enumerate(o):
                pos[e][x].append(p)
        M = max(n) + 2 if n else 2
        self.M = M
        seg_off, total = [], 0
        for e in range(tri.zeta):
            seg_off.append(total)
            total += n[e] + 1
        self.seg_off = seg_off
        self.n_segments = total

        chords = []          # (t, curve, keyA, keyB, [crossing ids])
        chord_at = {}        # (t, key) -> chord id
        crossings = []       # (t, c chord, d chord)
        for ti, t in enumerate(tri.triangles):
            local = ([], [])
            for X in (0, 1):
                wx = [self.w[X][idx(l)] for l in t]

                def mpos(k, q):
                    l = t[k]
                    e = idx(l)
                    if l >= 0:
                        return pos[e][X][q]
                    return n[e] - 1 - pos[e][X][wx[k] - 1 - q]

                for k in range(3):
                    k1 = (k + 1) % 3
                    cnt = (wx[k] + wx[k1] - wx[(k + 2) % 3]) // 2
                    for j in range(cnt):
                        ka = k * M + mpos(k, wx[k] - 1 - j) + 1
                        kb = k1 * M + mpos(k1, j) + 1
                        if ka > kb:
                            ka, kb = kb, ka
                        cid = len(chords)
                        chords.append([ti, X, ka, kb, []])
                        chord_at[(ti, ka)] = cid
                        chord_at[(ti, kb)] = cid
                        local[X].append(cid)
            for ci in local[0]:
                _, _, a1, b1, _ = chords[ci]
                for di in local[1]:
                    _, _, a2, b2, _ = chords[di]
                    if (a1 < a2 < b1) != (a1 < b2 < b1):
                        x = len(crossings)
                        crossings.append((ti, ci, di))
                        chords[ci][4].append(x)
                        chords[di][4].append(x)
        # Order crossings along each chord from its smaller key: by the key of
        # the crossing chord's endpoint inside (keyA, keyB).
        for ch in chords:
            if len(ch[4]) > 1:
                a, b = ch[2], ch[3]

                def inner(x, a=a, b=b, me=ch):
                    _, ci, di = crossings[x]
                    other = chords[di] if chords[ci] is me else chords[ci]
                    return other[2] if a < other[2] < b else other[3]

                ch[4].sort(key=inner)
        self.chords = chords
        self.chord_at = chord_at
        self.crossings = crossings
        self._trace_pieces()
        self._traverse()
        self._regions()

    def _trace_pieces(self):
        tri, M, n, chords, crossings = self.tri, self.M, self.n, self.chords, self.crossings
        by_tri = defaultdict(list)
        for cid, ch in enumerate(chords):
            by_tri[ch[0]].append(cid)
        pieces = []   # dicts: segs, verts, angles, chord darts
        self.chord_left = {}   # (chord, seg, +1/-1) -> piece
        self.xnbr = {}         # crossing -> {local node: (chord, +1 toward larger key)}
        self.xrot = {}         # crossing -> local neighbour nodes, counter-clockwise
        for ti, t in enumerate(tri.triangles):
            keys = [k * M for k in range(3)]
            for cid in by_tri[ti]:
                keys.append(chords[cid][2])
                keys.append(chords[cid][3])
            keys.sort()
            rot = {}
            nk = len(keys)
            nxt = {keys[i]: keys[(i + 1) % nk] for i in range(nk)}
            prv = {keys[i]: keys[i - 1] for i in range(nk)}
            # Crossing nodes are encoded as negative integers.
            chord_nodes = {}
            for cid in by_tri[ti]:
                ch = chords[cid]
                chord_nodes[cid] = [ch[2]] + [-(x + 1) for x in ch[4]] + [ch[3]]
            xrot = defaultdict(list)
            for cid, nodes in chord_nodes.items():
                ch = chords[cid]
                for j in range(1, len(nodes) - 1):
                    xrot[nodes[j]].append((ch[2], nodes[j - 1]))
                    xrot[nodes[j]].append((ch[3], nodes[j + 1]))
            for key in keys:
                if key % M == 0:
                    rot[key] = [nxt[key], prv[key]]
                else:
                    cid = self.chord_at[(ti, key)]
                    nodes = chord_nodes[cid]
                    inward = nodes[1] if nodes[0] == key else nodes[-2]
                    rot[key] = [nxt[key], inward, prv[key]]
            for cid, nodes in chord_nodes.items():
                for j in range(1, len(nodes) - 1):
                    x = -nodes[j] - 1
                    self.xnbr.setdefault(x, {})
                    self.xnbr[x][nodes[j - 1]] = (cid, -1)
                    self.xnbr[x][nodes[j + 1]] = (cid, 1)
            for node, lst in xrot.items():
                lst.sort()
                rot[node] = [v for _, v in lst]
                self.xrot[-node - 1] = rot[node]
            # Map chord darts to (chord, segment, direction).
            dart_info = {}
            for cid, nodes in chord_nodes.items():
                for j in range(len(nodes) - 1):
                    dart_info[(nodes[j], nodes[j + 1])] = (cid, j, 1)
                    dart_info[(nodes[j + 1], nodes[j])] = (cid, j, -1)
            visited = set()
            outer = set()
            # Mark the outer face: clockwise boundary darts.
            for key in keys:
                outer.add((nxt[key], key))
            darts = [(u, v) for u in rot for v in rot[u]]
            for start in darts:
                if start in visited or start in outer:
                    continue
                piece = {"segs": [], "verts": [], "angles": [], "darts": []}
                pid = len(pieces)
                u, v = start
                while (u, v) not in visited:
                    visited.add((u, v))
                    if u >= 0 and v == nxt[u]:
                        k, p = divmod(u, M)
                        s = 0 if p == 0 else p
                        l = t[k]
                        e = idx(l)
                        if l < 0:
                            s = n[e] - s
                        piece["segs"].append(self.seg_off[e] + s)
                        if p == 0:
                            piece["verts"].append(tri.vertex_of[l])
                    elif (u, v) in dart_info:
                        info = dart_info[(u, v)]
                        piece["darts"].append(info)
                        self.chord_left[info] = pid
                    lst = rot[v]
                    w = lst[lst.index(u) - 1]
                    if v < 0:
                        piece["angles"].append((-v - 1, w))
                    u, v = v, w
                pieces.append(piece)
        self.pieces = pieces

    def _traverse(self):
        """Walk c and d once each; records chord directions, crossings in
        order, and exit labels."""
        tri, n, M = self.tri, self.n, self.M
        self.walk = []
        self.chord_dir = {}
        for X in (0, 1):
            w = self.w[X]
            start_e = next(e for e in range(tri.zeta) if w[e])
            p = next(i for i, x in enumerate(self.order[start_e]) if x == X)
            t0, k0 = tri.triangle_of[start_e]
            t, key = t0, k0 * M + p + 1
            tokens = []
            while True:
                cid = self.chord_at[(t, key)]
                ch = self.chords[cid]
                fwd = key == ch[2]
                self.chord_dir[cid] = 1 if fwd else -1
                xs = ch[4] if fwd else ch[4][::-1]
                nseg = len(xs) + 1
                for j in range(nseg):
                    sj = j if fwd else nseg - 1 - j
                    tokens.append(("s", cid, sj))
                    if j < len(xs):
                        tokens.append(("x", xs[j]))
                other = ch[3] if fwd else ch[2]
                k2, q = divmod(other, M)
                q -= 1
                l2 = tri.triangles[t][k2]
                e2 = idx(l2)
                ep = q if l2 >= 0 else n[e2] - 1 - q
                tokens.append(("cut", l2, e2, ep))
                t, k = tri.triangle_of[~l2]
                key = k * M + (ep if ~l2 >= 0 else n[e2] - 1 - ep) + 1
                if t == t0 and key == k0 * M + p + 1:
                    break
            self.walk.append(tokens)

    def _regions(self):
        pieces = self.pieces
        uf = _UF(len(pieces))
        seg_pieces = defaultdict(list)
        for pid, pc in enumerate(pieces):
            for s in pc["segs"]:
                seg_pieces[s].append(pid)
        for s, lst in seg_pieces.items():
            assert len(lst) == 2, "edge segment not shared by two pieces"
            uf.union(lst[0], lst[1])
        roots = {}
        regions = []
        piece_region = []
        for pid in range(len(pieces)):
            r = uf.find(pid)
            if r not in roots:
                roots[r] = len(regions)
                regions.append(Region(len(regions)))
            piece_region.append(roots[r])
        for pid, pc in enumerate(pieces):
            R = regions[piece_region[pid]]
            R.pieces += 1
            R.segments.extend(pc["segs"])
            R.vertices.update(pc["verts"])
            R.angles.extend(pc["angles"])
            for cid, sj, _ in pc["darts"]:
                (R.c_segs if self.chords[cid][1] == 0 else R.d_segs).add((cid, sj))
        punct = self.tri.punctured
        for R in regions:
            R.euler = R.pieces - len(R.segments) // 2 + len(R.vertices)
            R.punctures = sorted(v for v in R.vertices if punct[v])
            R.sides = len(R.angles)
        self.regions = regions
        self.piece_region = piece_region
        # Sides of each curve: region on the left and right of the first chord.
        self.curve_sides = []
        for X in (0, 1):
            tok = self.walk[X][0]
            cid, sj = tok[1], tok[2]
            d = self.chord_dir[cid]
            left = piece_region[self.chord_left[(cid, sj, d)]]
            right = piece_region[self.chord_left[(cid, sj, -d)]]
            self.curve_sides.append((left, right))
        if not self.crossings:
            for X in (0, 1):
                for side, rid in enumerate(self.curve_sides[X]):
                    regions[rid].boundary.append((X, side))

    # queries -----------------------------------------------------------

    @property
    def n_crossings(self):
        return len(self.crossings)

    def bigons(self):
        return [R for R in self.regions if R.euler == 1 and R.sides == 2 and not R.punctures]

    def swap_bigons(self):
        """Swap the points along every vertex-free bigon corridor that does not
        conflict with an earlier one.  Returns the new order or None."""
        used_pts, used_x = set(), set()
        order = [list(o) for o in self.order]
        done = 0
        for R in self.bigons():
            if R.vertices:
                continue
            xs = {a for a, _ in R.angles}
            pts = set()
            for s in set(R.segments):
                e, sp = self._seg_decode(s)
                pts.add((e, sp - 1))
                pts.add((e, sp))
            if xs & used_x or pts & used_pts:
                continue
            ok = True
            for s in set(R.segments):
                e, sp = self._seg_decode(s)
                if not (0 < sp < self.n[e]) or order[e][sp - 1] == order[e][sp]:
                    ok = False
            if not ok:
                continue
            for s in set(R.segments):
                e, sp = self._seg_decode(s)
                order[e][sp - 1], order[e][sp] = order[e][sp], order[e][sp - 1]
            used_x |= xs
            used_pts |= pts
            done += 1
        return order if done else None

    def _seg_decode(self, s):
        # seg_off is increasing; small zeta so a scan is fine.
        e = 0
        while e + 1 < len(self.seg_off) and self.seg_off[e + 1] <= s:
            e += 1
        return e, s - self.seg_off[e]

    def reroute_d(self, R):
        """Cut sequence of d pushed across the bigon R onto the c side."""
        dtok = self.walk[1]
        ctok = self.walk[0]
        run = _find_run(dtok, R.d_segs)
        if run is None:
            return None
        xs, xe, inside, outside = run
        crun = _find_run(ctok, R.c_segs, ends=(xs, xe))
        if crun is None:
            return None
        cxs, cxe, cinside, _ = crun
        alpha = [tk[1] for tk in cinside if tk[0] == "cut"]
        if (cxs, cxe) != (xs, xe):
            alpha = [~l for l in reversed(alpha)]
        seq = [tk[1] for tk in outside if tk[0] == "cut"] + alpha
        return reduce_cyclic(seq)


def _find_run(tokens, segs, ends=None):
    """Locate a maximal crossing-free run whose segments all lie in segs.
    Returns (start crossing, end crossing, tokens inside, tokens outside)."""
    xpos = [i for i, tk in enumerate(tokens) if tk[0] == "x"]
    for a_i, a in enumerate(xpos):
        b = xpos[(a_i + 1) % len(xpos)]
        inside = tokens[a + 1:b] if b > a else tokens[a + 1:] + tokens[:b]
        sset = [(tk[1], tk[2]) for tk in inside if tk[0] == "s"]
        if not sset or not all(s in segs for s in sset):
            continue
        xs, xe = tokens[a][1], tokens[b][1]
        if ends is not None and {xs, xe} != set(ends):
            continue
        outside = tokens[b:] + tokens[:a + 1] if b > a else tokens[b:a + 1]
        return xs, xe, inside, outside
    return None


def reduce_cyclic(seq):
    stack = []
    for l in seq:
        if stack and stack[-1] == ~l:
            stack.pop()
        else:
            stack.append(l)
    while len(stack) >= 2 and stack[0] == ~stack[-1]:
        stack.pop()
        stack.pop(0)
    return stack


def weights_from_cut_sequence(tri, seq):
    w = [0] * tri.zeta
    for l in seq:
        w[idx(l)] += 1
    return tuple(w)


def minimal_picture(tri, wc, wd, closed, max_rounds=100000):
    """A picture of c and d without bigons.  On a closed surface d may be
    replaced by another lift of the same curve."""
    wd = tuple(wd)
    pic = Picture(tri, wc, wd)
    for _ in range(max_rounds):
        order = pic.swap_bigons()
        if order is not None:
            new = Picture(tri, wc, wd, order)
            assert new.n_crossings < pic.n_crossings
            pic = new
            continue
        if not closed:
            return pic
        target = None
        for R in pic.bigons():
            if R.vertices:
                target = R
                break
        if target is None:
            return pic
        seq = pic.reroute_d(target)
        if not seq:
            raise RuntimeError("rerouting across a bigon failed")
        wd = weights_from_cut_sequence(tri, seq)
        pic = Picture(tri, wc, wd)
    raise RuntimeError("bigon removal did not terminate")
