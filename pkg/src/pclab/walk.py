"""Random walks on the mapping class group driven by a finitely supported
step measure, with entropy, logarithmic moments and convergence
diagnostics.  Natural logarithms throughout."""

import csv
import hashlib
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log, log2
from statistics import median

from .curves import NormalCurve
from .errors import EqualCurves, FormatError, PclabError, TooShort
from .kernel import geometric_intersection
from .mcg import MappingClass, apply
from .predicates import PRINCIPAL4, adjacent, cg_distance_class

CSV_VERSION = "pclab-walk-v1"


@dataclass
class StepMeasure:
    support: list
    weights: list

    def __post_init__(self):
        self.weights = [Fraction(w) for w in self.weights]
        if len(self.support) != len(self.weights) or not self.support:
            raise ValueError("support and weights must be nonempty and of equal length")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if sum(self.weights) != 1:
            raise ValueError(f"weights sum to {sum(self.weights)}, not 1")

    @classmethod
    def uniform(cls, support):
        return cls(list(support), [Fraction(1, len(support))] * len(support))

    def cumulative(self):
        """Integer thresholds over a common denominator, for inverse-CDF draws."""
        L = 1
        for w in self.weights:
            L = L * w.denominator // gcd(L, w.denominator)
        acc, out = 0, []
        for w in self.weights:
            acc += int(w * L)
            out.append(acc)
        return L, out

    def draw(self, rng):
        L, cum = self.cumulative()
        r = rng.randrange(L)
        return next(i for i, c in enumerate(cum) if r < c)

    def to_json(self):
        return [{"mapping_class": f.to_json(), "weight_numerator": w.numerator,
                 "weight_denominator": w.denominator} for f, w in zip(self.support, self.weights)]

    @classmethod
    def from_json(cls, data, resolve=None):
        if not isinstance(data, list):
            raise FormatError("a step measure is a list of entries")
        try:
            sup = [MappingClass.from_json(e["mapping_class"], resolve) for e in data]
            ws = [Fraction(int(e["weight_numerator"]), int(e["weight_denominator"])) for e in data]
            return cls(sup, ws)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"malformed step measure: {exc}") from None


def entropy(mu):
    return -sum(float(w) * log(w.numerator / w.denominator) for w in mu.weights)


def cg_proxy(c, d, exact_cap=200):
    """A labelled upper-bound proxy for curve graph distance: the exact class
    0, 1 or 2 when computable, else max(3, 2 log2 i + 2)."""
    if c.weights == d.weights:
        return 0
    i = geometric_intersection(c, d)
    if i == 0:
        return 1
    bound = max(3.0, 2 * log2(i) + 2)
    if i <= exact_cap:
        cls, _ = cg_distance_class(c, d)
        if cls != ">=3":
            return cls
    return bound


def log_moment(mu, base):
    """Sum of mu(g) max(0, D(base, g base)) with D the proxy, and with
    D = log(1 + proxy)."""
    terms = []
    for f, w in zip(mu.support, mu.weights):
        D = cg_proxy(base, apply(f, base))
        terms.append({"weight": str(w), "proxy": D})
    lin = sum(float(w) * max(0.0, float(t["proxy"])) for w, t in zip(mu.weights, terms))
    lg = sum(float(w) * log(1 + max(0.0, float(t["proxy"]))) for w, t in zip(mu.weights, terms))
    return {"moment": lin, "log_moment": lg, "terms": terms,
            "note": "distances are proxies (exact class up to 2, logarithmic bound beyond)"}


def path_seed(seed, p):
    return int.from_bytes(hashlib.sha256(f"{seed}:{p}".encode()).digest()[:8], "big")


def projective(w):
    s = sum(w)
    return tuple(Fraction(x, s) for x in w) if s else tuple(Fraction(0) for _ in w)


def sup_distance(p, q):
    return max(abs(x - y) for x, y in zip(p, q))


@dataclass
class WalkStats:
    steps: int
    seed: int
    base: NormalCurve
    letters: list = field(default_factory=list)      # per path: drawn support indices
    inters: list = field(default_factory=list)       # per path, per step: i(c0, w_n c0)
    cg: list = field(default_factory=list)
    pc: list = field(default_factory=list)           # 0 / 1 when witnessed, else None
    proj: list = field(default_factory=list)         # exact unit-sum coordinates

    @property
    def path_count(self):
        return len(self.inters)

    def drift(self, p):
        """log i(c0, w_N c0) / N for path p (approximate)."""
        x = self.inters[p][-1]
        return log(x) / self.steps if x > 0 else 0.0

    def to_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        k = len(self.base.weights)
        wr.writerow(["version", "path", "step", "letter", "intersection", "log_intersection",
                     "cg_proxy", "pc_upper"] + [f"proj_{j}" for j in range(k)])
        for p in range(self.path_count):
            for n in range(self.steps + 1):
                x = self.inters[p][n]
                wr.writerow([CSV_VERSION, p, n, self.letters[p][n - 1] if n else "", x,
                             f"{log(x):.12g}" if x > 0 else "",
                             f"{float(self.cg[p][n]):.12g}",
                             "" if self.pc[p][n] is None else self.pc[p][n]]
                            + [f"{float(v):.12g}" for v in self.proj[p][n]])
        return buf.getvalue()


def _one_path(mu, steps, seed, p, base, witness_cap):
    rng = random.Random(path_seed(seed, p))
    letters = [mu.draw(rng) for _ in range(steps)]
    word = MappingClass()
    row_i, row_cg, row_pc, row_pr = [0], [0], [0], [projective(base.weights)]
    for n, k in enumerate(letters, 1):
        word = word * mu.support[k]
        c = apply(word, base)
        i = 0 if c.weights == base.weights else geometric_intersection(base, c)
        row_i.append(i)
        row_cg.append(cg_proxy(base, c) if i <= witness_cap else max(3.0, 2 * log2(i) + 2))
        if c.weights == base.weights:
            row_pc.append(0)
        elif i <= witness_cap:
            try:
                row_pc.append(1 if adjacent(base, c, PRINCIPAL4) else None)
            except EqualCurves:
                row_pc.append(0)
        else:
            row_pc.append(None)
        row_pr.append(projective(c.weights))
    return letters, row_i, row_cg, row_pc, row_pr


def sample_paths(mu, steps, path_count, seed, base, jobs=1, witness_cap=200):
    """Paths w_n = g_1 ... g_n with g_i drawn from mu, recording the orbit
    of base.  Each path has its own seed derived from (seed, index), so the
    result does not depend on jobs."""
    if steps < 1 or path_count < 1:
        raise ValueError("steps and path_count must be positive")
    args = [(mu, steps, seed, p, base, witness_cap) for p in range(path_count)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_one_path, *zip(*args)))
    else:
        rows = [_one_path(*a) for a in args]
    ws = WalkStats(steps, seed, base)
    for letters, i, cg, pc, pr in rows:
        ws.letters.append(letters)
        ws.inters.append(i)
        ws.cg.append(cg)
        ws.pc.append(pc)
        ws.proj.append(pr)
    return ws


def bootstrap_median_ci(values, seed=0, reps=2000, level=0.95):
    rng = random.Random(seed)
    n = len(values)
    meds = sorted(median(rng.choices(values, k=n)) for _ in range(reps))
    lo = meds[int((1 - level) / 2 * reps)]
    hi = meds[min(reps - 1, int((1 + level) / 2 * reps))]
    return lo, hi


def window_diameter(points):
    """Exact sup-norm diameter of a set of projective points."""
    k = len(points[0])
    return max(max(p[j] for p in points) - min(p[j] for p in points) for j in range(k))


def convergence_report(ws, eps=1e-3, cauchy_target=0.95, seed=0):
    """Projective eps-Cauchy test over the last quarter of each path, spread
    of the limit directions across paths, and a bootstrap interval for the
    median drift."""
    if ws.steps < 50:
        raise TooShort(f"paths have {ws.steps} steps; at least 50 are needed")
    start = ws.steps - ws.steps // 4
    eps_q = Fraction(eps)
    per_path = []
    for p in range(ws.path_count):
        diam = window_diameter(ws.proj[p][start:])
        per_path.append({"path": p, "tail_diameter": float(diam), "cauchy": diam <= eps_q,
                         "drift": ws.drift(p)})
    frac = sum(r["cauchy"] for r in per_path) / len(per_path)
    drifts = [r["drift"] for r in per_path]
    lo, hi = bootstrap_median_ci(drifts, seed)
    limits = [ws.proj[p][-1] for p in range(ws.path_count)]
    # Group limit directions that are eps-close to a cluster leader.
    leaders, sizes = [], []
    for q in limits:
        for j, l in enumerate(leaders):
            if sup_distance(q, l) <= eps_q:
                sizes[j] += 1
                break
        else:
            leaders.append(q)
            sizes.append(1)
    return {"steps": ws.steps, "paths": ws.path_count, "eps": eps, "window_start": start,
            "cauchy_fraction": frac, "cauchy_target": cauchy_target,
            "cauchy_ok": frac >= cauchy_target,
            "median_drift": median(drifts), "drift_ci95": [lo, hi],
            "drift_positive": lo > 0,
            "limit_clusters": len(leaders), "largest_cluster_fraction": max(sizes) / len(limits),
            "per_path": per_path,
            "approximate_fields": ["median_drift", "drift_ci95", "tail_diameter", "drift"]}


def svg_drift_plot(ws, width=480, height=260):
    """Median of log(1 + i(c0, w_n c0)) against n."""
    pts = []
    for n in range(ws.steps + 1):
        pts.append(median(log(1 + ws.inters[p][n]) for p in range(ws.path_count)))
    top = max(pts) or 1.0
    coords = " ".join(f"{30 + (width - 40) * n / ws.steps:.1f},{height - 20 - (height - 40) * y / top:.1f}"
                      for n, y in enumerate(pts))
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        '<text x="10" y="14" font-size="12">median log(1 + i(c0, w_n c0)) vs n</text>',
        f'<line x1="30" y1="{height - 20}" x2="{width - 10}" y2="{height - 20}" stroke="#888"/>',
        f'<line x1="30" y1="20" x2="30" y2="{height - 20}" stroke="#888"/>',
        f'<polyline fill="none" stroke="#24a" points="{coords}"/>',
        f'<text x="{width - 60}" y="{height - 5}" font-size="10">n={ws.steps}</text>',
        f'<text x="2" y="24" font-size="10">{top:.0f}</text>',
        "</svg>"])
