"""Census of the complementary regions of c union d."""

from dataclasses import dataclass, field

from .errors import MalformedGraph, NotBinding

POLYGON = "polygon"
PUNCTURED = "punctured_polygon"
ESSENTIAL = "essential"


@dataclass(frozen=True)
class FaceRecord:
    side_count: int
    puncture_count: int
    euler_char: int
    kind: str
    boundary_components: int
    darts: tuple = field(default=(), repr=False)
    punctures: tuple = ()

    @property
    def genus(self):
        return (2 - self.euler_char - self.boundary_components) // 2

    def to_json(self):
        return {"side_count": self.side_count, "puncture_count": self.puncture_count,
                "euler_char": self.euler_char, "kind": self.kind,
                "boundary_components": self.boundary_components,
                "punctures": list(self.punctures), "smallest_dart": min(self.darts) if self.darts else None}


@dataclass(frozen=True)
class RegionProfile:
    faces: tuple
    n_vertices: int
    n_edges: int
    genus: int
    punctures: int

    @property
    def euler_checksum(self):
        return self.n_vertices - self.n_edges + sum(f.euler_char for f in self.faces)

    @property
    def euler_ok(self):
        return self.euler_checksum == 2 - 2 * self.genus

    @property
    def punctures_ok(self):
        return sum(f.puncture_count for f in self.faces) == self.punctures

    @property
    def binds(self):
        return binds(self)

    def to_json(self):
        return {"faces": [f.to_json() for f in self.faces], "V": self.n_vertices,
                "E": self.n_edges, "euler_checksum": self.euler_checksum,
                "expected_euler": 2 - 2 * self.genus, "binds": self.binds,
                "puncture_total": sum(f.puncture_count for f in self.faces)}


def classify(euler, punctures):
    if euler == 1 and punctures == 0:
        return POLYGON
    if euler == 1 and punctures == 1:
        return PUNCTURED
    return ESSENTIAL


def trace_regions(g):
    """Face census of an embedded graph, faces ordered by smallest dart."""
    V = g.n_vertices
    if len(g.rotation) != V or len(g.alpha) != 4 * V:
        raise MalformedGraph("dart count does not match 4 per vertex")
    for v, rot in enumerate(g.rotation):
        if sorted(rot) != [4 * v + s for s in range(4)]:
            raise MalformedGraph(f"vertex {v} does not carry exactly its four darts")
        labs = [g.labels[h] for h in rot]
        if labs[0] == labs[1] or labs[1] == labs[2] or labs[2] == labs[3] or labs[3] == labs[0]:
            raise MalformedGraph(f"labels at vertex {v} do not alternate")
    for h, a in enumerate(g.alpha):
        if a is None or g.alpha[a] != h or a == h or g.labels[a] != g.labels[h]:
            raise MalformedGraph(f"dart {h} has an inconsistent partner")
    seen = [False] * (4 * V)
    walks = []
    for h in range(4 * V):
        if seen[h]:
            continue
        walk = []
        x = h
        while not seen[x]:
            seen[x] = True
            walk.append(x)
            x = g.face_next(x)
        if x != h:
            raise MalformedGraph("face permutation is not a permutation")
        walks.append(walk)
    by_region = {}
    for walk in walks:
        rids = {g.dart_region[x] for x in walk}
        if len(rids) != 1:
            raise MalformedGraph("a boundary walk meets two regions")
        by_region.setdefault(rids.pop(), []).append(walk)
    faces = []
    for rid, ws in by_region.items():
        darts = tuple(sorted(x for w in ws for x in w))
        eu = g.region_euler[rid]
        pu = tuple(g.region_punctures[rid])
        faces.append(FaceRecord(len(darts), len(pu), eu, classify(eu, len(pu)), len(ws), darts, pu))
    if set(by_region) != set(g.region_euler):
        raise MalformedGraph("a region carries no boundary darts")
    faces.sort(key=lambda f: f.darts[0])
    for f in faces:
        if f.side_count % 2:
            raise MalformedGraph("face with an odd number of sides")
    return RegionProfile(tuple(faces), V, 2 * V, g.spec.genus, g.spec.punctures)


def binds(p):
    return all(f.kind != ESSENTIAL for f in p.faces)


@dataclass(frozen=True)
class Singularity:
    location: str      # "interior" or "puncture"
    order: int
    face: int

    def to_json(self):
        return {"location": self.location, "order": self.order, "face": self.face}


def stratum_signature(p):
    """Singularities of the flat structure glued from the faces of a binding
    pair: a 2k-gon gives a cone point of angle k*pi, i.e. order k-2."""
    if not binds(p):
        raise NotBinding("stratum signature needs a binding pair")
    sings = []
    for i, f in enumerate(p.faces):
        k = f.side_count // 2
        loc = "puncture" if f.kind == PUNCTURED else "interior"
        sings.append(Singularity(loc, k - 2, i))
    principal = all(
        (f.kind == POLYGON and f.side_count in (4, 6)) or (f.kind == PUNCTURED and f.side_count == 2)
        for f in p.faces)
    return sings, principal


def large_face(p):
    """Some polygon with at least 6 sides or punctured polygon with at least 4."""
    return any((f.kind == POLYGON and f.side_count >= 6) or (f.kind == PUNCTURED and f.side_count >= 4)
               for f in p.faces)


@dataclass(frozen=True)
class Component:
    """A component of the complement of two disjoint curves."""
    euler_char: int
    punctures: int
    boundary: tuple    # (curve 0/1, side 0 left / 1 right)

    @property
    def genus(self):
        return (2 - self.euler_char - len(self.boundary)) // 2

    def holds_new_curve(self):
        """Contains an essential curve of S other than copies of c and d:
        anything but a pair of pants or an annulus (punctures count as
        boundary)."""
        return not (self.genus == 0 and len(self.boundary) + self.punctures <= 3)


def disjoint_components(pic):
    return [Component(R.euler, len(R.punctures), tuple(sorted(R.boundary))) for R in pic.regions]
