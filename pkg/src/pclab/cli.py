"""Command line interface.  Exit status 0 on success, 2 on domain errors
(with an error JSON on stderr), 64 on usage errors."""

import argparse
import json
import os
import sys

from .config import RunConfig
from .curves import NormalCurve, random_curve
from .errors import FormatError, PclabError
from .predicates import EdgeRule, cg_distance_class, edge_verdict, pc_distance_class, pc_upper_bound

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None


def load_curve(path):
    return NormalCurve.from_json(_load_json(path))


def _resolver(path):
    root = os.path.dirname(os.path.abspath(path))
    return lambda ref: load_curve(os.path.join(root, ref))


def load_word(path):
    from .mcg import MappingClass
    return MappingClass.from_json(_load_json(path), _resolver(path))


def _rule(args):
    rule = EdgeRule.parse(args.rule)
    if getattr(args, "threshold", None) is not None:
        rule = EdgeRule(rule.variant, args.threshold)
    return rule


def _emit(obj, out=None):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_surface(args, cfg):
    from .triangulation import build_surface
    spec, tri = build_surface(args.genus, args.punctures)
    out = {"surface": spec.to_json(), "triangulation": tri.to_json()}
    if args.random is not None:
        out["random_curve"] = random_curve((args.genus, args.punctures), args.random, args.bound).to_json()
    _emit(out, cfg.out)


def cmd_intersect(args, cfg):
    from .kernel import geometric_intersection
    a, b = load_curve(args.a), load_curve(args.b)
    _emit({"intersection": geometric_intersection(a, b)}, cfg.out)


def cmd_regions(args, cfg):
    from .kernel import embed_pair
    from .regions import trace_regions
    g = embed_pair(load_curve(args.a), load_curve(args.b))
    prof = trace_regions(g)
    out = prof.to_json()
    out.update(vertices=g.n_vertices, edges=g.n_edges, euler_checksum=prof.euler_checksum,
               euler_ok=prof.euler_ok, punctures_ok=prof.punctures_ok)
    _emit(out, cfg.out)


def cmd_edge(args, cfg):
    _emit(edge_verdict(load_curve(args.a), load_curve(args.b), _rule(args)), cfg.out)


def cmd_distclass(args, cfg):
    a, b = load_curve(args.a), load_curve(args.b)
    cls, wit = cg_distance_class(a, b)
    out = {"cg": cls, "cg_witness": wit.to_json() if wit else None,
           "pc": pc_distance_class(a, b, _rule(args))}
    if args.upper_bound:
        n, path = pc_upper_bound(a, b, _rule(args), args.budget)
        out["pc_upper_bound"] = n
        out["pc_path"] = [c.to_json() for c in path] if path else None
    _emit(out, cfg.out)


def cmd_track(args, cfg):
    from . import traintracks as tt
    c, d = load_curve(args.a), load_curve(args.b)
    track, cert, wit = tt.one_switch_track(c, d)
    if args.action == "build":
        out = {"track": track.to_json(), "certificate": cert.to_json(), "witness": wit,
               "certificate_ok": tt.verify_certificate(track, cert),
               "recurrent": tt.is_recurrent(track), "maximal": tt.is_maximal(track)}
    elif args.action == "split":
        stages = tt.splitting_sequence(track, cert, max_stages=args.stages)
        out = {"stages": [{"track": t.to_json(), "vertex_cycle": vc.to_json(),
                           "maximal": tt.is_maximal(t)} for t, vc in stages]}
    elif args.action == "vc":
        out = {"vertex_measures": [list(map(str, w)) for w in tt.vertex_measures(track)],
               "vertex_cycles": [v.to_json() for v in tt.vertex_cycles(track, args.limit)]}
    else:
        out = {"maximal": tt.is_maximal(track), "census": {str(k): v for k, v in tt.census(track).items()}}
    _emit(out, cfg.out)


def cmd_apply(args, cfg):
    from .mcg import apply
    _emit(apply(load_word(args.word), load_curve(args.curve)).to_json(), cfg.out)


def cmd_tv_build(args, cfg):
    from .mcg import thurston_veech
    _emit(thurston_veech(load_curve(args.a), load_curve(args.b)).to_json(), cfg.out)


def cmd_dilatation(args, cfg):
    from .mcg import dilatation_estimate
    _emit(dilatation_estimate(load_word(args.word), load_curve(args.probe), args.n), cfg.out)


def _load_graph(path):
    from .explorer import graph_from_edges
    data = _load_json(path)
    try:
        g = graph_from_edges(len(data["vertices"]), [tuple(e) for e in data["edges"]])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed graph file: {exc}") from None
    return g


def cmd_explore(args, cfg):
    from . import explorer as ex
    if args.action == "ball":
        gens = [load_word(p) for p in args.gens]
        g = ex.build_orbit_ball(load_curve(args.base), gens, args.radius, _rule(args))
        out = g.to_json()
        out["digest"] = g.digest()
    elif args.action == "delta":
        out = ex.estimate_delta(_load_graph(args.graph), args.samples, cfg.seed)
    elif args.action == "bottleneck":
        out = ex.bottleneck_report(_load_graph(args.graph), args.pairs, cfg.seed)
        if args.svg:
            with open(args.svg, "w") as fh:
                fh.write(ex.svg_histogram(out["histogram"], "midpoint deviation"))
    else:
        out = ex.orbit_growth(load_word(args.word), load_curve(args.base), args.n, _rule(args), args.budget)
    _emit(out, cfg.out)


def cmd_walk(args, cfg):
    from . import walk as wk
    mu = wk.StepMeasure.from_json(_load_json(args.measure), _resolver(args.measure))
    ws = wk.sample_paths(mu, args.steps, args.paths, cfg.seed, load_curve(args.base), cfg.jobs)
    if args.action == "run":
        _emit(ws.to_csv(), cfg.out)
        return
    rep = wk.convergence_report(ws, args.eps, args.target, cfg.seed)
    rep["entropy"] = wk.entropy(mu)
    rep["log_moment"] = wk.log_moment(mu, ws.base)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(wk.svg_drift_plot(ws))
    _emit(rep, cfg.out)


def build_parser():
    def common(parser, default):
        parser.add_argument("--out", default=default, help="write the result here instead of stdout")
        parser.add_argument("--seed", type=int, default=default,
                            help="master seed (falls back to PCLAB_SEED)")
        parser.add_argument("--jobs", type=int, default=1 if default is None else default,
                            help="worker processes for sampling")
        parser.add_argument("--config", default=default,
                            help="RunConfig JSON; command line flags take precedence")

    p = _Parser(prog="pclab", description="Principal curve graph laboratory.")
    common(p, None)
    # The same flags are accepted after the subcommand too.
    shared = _Parser(add_help=False)
    common(shared, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[shared], **k)

    def pair(name, fn, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("a")
        s.add_argument("b")
        s.set_defaults(fn=fn)
        return s

    def rule_opts(s):
        s.add_argument("--rule", default="principal", help="cg, cg0, principal, principal6, intermediate")
        s.add_argument("--threshold", type=int, choices=(4, 6), help="punctured-face threshold")

    s = sub.add_parser("surface", help="canonical triangulation of S_{g,m}")
    s.add_argument("genus", type=int)
    s.add_argument("punctures", type=int)
    s.add_argument("--random", type=int, metavar="SEED", help="also emit a random curve")
    s.add_argument("--bound", type=int, default=3)
    s.set_defaults(fn=cmd_surface)

    pair("intersect", cmd_intersect, "geometric intersection number")
    pair("regions", cmd_regions, "complementary region census")
    rule_opts(pair("edge", cmd_edge, "adjacency verdict with witnesses"))
    s = pair("distclass", cmd_distclass, "small distance classes")
    rule_opts(s)
    s.add_argument("--upper-bound", action="store_true")
    s.add_argument("--budget", type=int, default=40)

    s = sub.add_parser("track", help="one-switch train track of a binding pair")
    s.add_argument("action", choices=("build", "split", "vc", "maximal"))
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--stages", type=int, default=None)
    s.add_argument("--limit", type=int, default=None)
    s.set_defaults(fn=cmd_track)

    s = sub.add_parser("apply", help="apply a twist word to a curve")
    s.add_argument("word")
    s.add_argument("curve")
    s.set_defaults(fn=cmd_apply)

    pair("tv-build", cmd_tv_build, "Thurston-Veech word and stratum of a binding pair")

    s = sub.add_parser("dilatation", help="growth of i(phi^k probe, probe)")
    s.add_argument("word")
    s.add_argument("probe")
    s.add_argument("-n", type=int, default=10)
    s.set_defaults(fn=cmd_dilatation)

    s = sub.add_parser("explore", help="orbit windows and their statistics")
    s.add_argument("action", choices=("ball", "delta", "bottleneck", "orbit"))
    s.add_argument("--base")
    s.add_argument("--gens", nargs="*", default=[])
    s.add_argument("--radius", type=int, default=1)
    s.add_argument("--graph")
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--pairs", type=int, default=200)
    s.add_argument("--word")
    s.add_argument("-n", type=int, default=10)
    s.add_argument("--budget", type=int, default=8)
    s.add_argument("--svg")
    rule_opts(s)
    s.set_defaults(fn=cmd_explore)

    s = sub.add_parser("walk", help="random walks driven by a step measure")
    s.add_argument("action", choices=("run", "report"))
    s.add_argument("--measure", required=True)
    s.add_argument("--base", required=True)
    s.add_argument("--steps", type=int, default=200)
    s.add_argument("--paths", type=int, default=100)
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--target", type=float, default=0.95)
    s.add_argument("--svg")
    s.set_defaults(fn=cmd_walk)
    return p


_NEEDS = {("explore", "ball"): ("base",), ("explore", "delta"): ("graph",),
          ("explore", "bottleneck"): ("graph",), ("explore", "orbit"): ("word", "base")}


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        cfg.subcommand = args.cmd + (f" {args.action}" if hasattr(args, "action") else "")
        for key in ("seed", "out"):
            if getattr(args, key) is not None:
                setattr(cfg, key, getattr(args, key))
        if args.jobs != 1:
            cfg.jobs = args.jobs
        for need in _NEEDS.get((args.cmd, getattr(args, "action", None)), ()):
            if getattr(args, need) is None:
                raise UsageError(f"{cfg.subcommand} needs --{need}")
        try:
            cfg.resolve_seed()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        args.fn(args, cfg)
        return EXIT_OK
    except UsageError as exc:
        sys.stderr.write(json.dumps({"error": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except PclabError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return EXIT_DOMAIN
    except (ValueError, OverflowError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
