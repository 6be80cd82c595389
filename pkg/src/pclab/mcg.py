"""Mapping classes given as words in Dehn twists, acting on curves."""

from dataclasses import dataclass
from math import log

import numpy as np

from .curves import NormalCurve, same_surface
from .errors import FormatError, NotBinding, PclabError, SurfaceMismatch
from .flipgraph import twist_encoding
from .kernel import embed_pair, geometric_intersection
from .predicates import PRINCIPAL4, pc_distance_class
from .regions import trace_regions, stratum_signature

_twists = {}


def twist(curve, power=1):
    """Encoding of T_curve ** power (right-handed for positive powers)."""
    key = (curve.spec, curve.weights)
    enc = _twists.get(key)
    if enc is None:
        enc = _twists[key] = (twist_encoding(curve.tri, curve.weights), None)
    fwd, inv = enc
    if power < 0 and inv is None:
        inv = fwd.inverse()
        _twists[key] = (fwd, inv)
    return fwd if power > 0 else inv


class MappingClass:
    """A word of twist letters (curve, power), read as a composition of
    functions: the rightmost letter acts first."""

    def __init__(self, word=()):
        word = tuple((c, int(p)) for c, p in word)
        for c, p in word:
            if p == 0:
                raise ValueError("twist powers must be nonzero")
            if not isinstance(c, NormalCurve):
                raise TypeError("letters must reference NormalCurve objects")
        specs = {c.spec for c, _ in word}
        if len(specs) > 1:
            raise SurfaceMismatch("letters live on different surfaces")
        self.word = word

    @property
    def spec(self):
        return self.word[0][0].spec if self.word else None

    def __call__(self, c):
        return apply(self, c)

    def __mul__(self, other):
        return MappingClass(self.word + other.word)

    def __eq__(self, other):
        return isinstance(other, MappingClass) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def inverse(self):
        return MappingClass(tuple((c, -p) for c, p in reversed(self.word)))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return MappingClass(self.word * n)

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return "MappingClass(" + " ".join(f"T[{c.weights}]^{p}" for c, p in self.word) + ")"

    def to_json(self):
        return [{"curve": c.to_json(), "power": p} for c, p in self.word]

    @classmethod
    def from_json(cls, data, resolve=None):
        """resolve maps a string reference to a curve (for file refs)."""
        if not isinstance(data, list):
            raise FormatError("a mapping class is a list of letters")
        word = []
        for item in data:
            try:
                cur, p = item["curve"], int(item["power"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"malformed twist letter: {exc}") from None
            if isinstance(cur, str):
                if resolve is None:
                    raise FormatError("curve reference without a resolver")
                cur = resolve(cur)
            else:
                cur = NormalCurve.from_json(cur)
            word.append((cur, p))
        return cls(word)


def apply(f, c):
    if f.word:
        same_surface(f.word[0][0], c)
    w = c.weights
    for a, p in reversed(f.word):
        enc = twist(a, p)
        for _ in range(abs(p)):
            w = enc(w)
    return NormalCurve(c.spec, w, c.tri, check=False)


def orbit(f, c, n):
    """c, f(c), ..., f^n(c)."""
    out = [c]
    for _ in range(n):
        out.append(apply(f, out[-1]))
    return out


@dataclass(frozen=True)
class PseudoAnosovSpec:
    a: NormalCurve
    b: NormalCurve
    phi: MappingClass
    singularities: tuple
    principal: bool
    trace_parameter: int
    pc_class: object

    @property
    def dilatation(self):
        """Largest root of x + 1/x = t^2 + 2 for the two-twist word."""
        s = self.trace_parameter ** 2 + 2
        return (s + (s * s - 4) ** 0.5) / 2

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json(), "word": self.phi.to_json(),
                "singularities": [s.to_json() for s in self.singularities],
                "principal": self.principal, "trace_parameter": self.trace_parameter,
                "pc_class": self.pc_class, "dilatation": self.dilatation}


def thurston_veech(a, b):
    same_surface(a, b)
    try:
        g = embed_pair(a, b)
    except PclabError as exc:
        raise NotBinding(f"the pair does not bind: {exc}") from None
    prof = trace_regions(g)
    if not prof.binds:
        raise NotBinding("the pair has an essential complementary region")
    sings, principal = stratum_signature(prof)
    phi = MappingClass([(a, 1), (b, -1)])
    return PseudoAnosovSpec(a, b, phi, tuple(sings), principal, g.n_vertices,
                            pc_distance_class(a, b, PRINCIPAL4))


def dilatation_estimate(phi, probe, n):
    """Least-squares slope of log i(phi^k probe, probe) against k, k = 1..n,
    and of log i against log k.  Intersection numbers are exact."""
    if n < 3:
        raise ValueError("n must be at least 3")
    xs = []
    cur = probe
    for _ in range(n):
        cur = apply(phi, cur)
        xs.append(geometric_intersection(cur, probe))
    ks = [k + 1 for k, x in enumerate(xs) if x > 0]
    logs = [log(x) for x in xs if x > 0]
    if len(ks) >= 2:
        fit = np.polyfit(ks, logs, 1)
        slope, icpt = float(fit[0]), float(fit[1])
        resid = [float(y - (slope * k + icpt)) for k, y in zip(ks, logs)]
        ll = float(np.polyfit([log(k) for k in ks], logs, 1)[0])
    else:
        slope, icpt, resid, ll = 0.0, 0.0, [], 0.0
    tail = logs[-1] - logs[-2] if len(logs) >= 2 else 0.0
    return {"intersections": [str(x) for x in xs], "slope": slope, "intercept": icpt,
            "residuals": resid, "tail_slope": tail, "loglog_slope": ll, "n": n,
            "approximate_fields": ["slope", "intercept", "residuals", "tail_slope", "loglog_slope"]}
