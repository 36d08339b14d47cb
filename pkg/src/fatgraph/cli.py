"""
Command-line front end.

    fatgraph genus -i map.rot
    fatgraph reembed -i map.rot -v v2 --mode dist --format json
    fatgraph count -k 1 -lambda "5" -n 5
    fatgraph experiment K4 --exhaustive

Exit codes: 0 ok, 1 usage, 2 malformed input, 3 budget exceeded,
4 internal consistency failure. With ``--format json`` errors are printed to
stdout as ``{"error": {...}}``; otherwise to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import counting
from .errors import BudgetExceeded, DisconnectedError, InvariantError, ParseError
from .maps import (
    DEFAULT_EMBEDDING_BUDGET,
    Embedding,
    all_embeddings,
    dual,
    embedding_report,
    emit_rot,
    graph_from_spec,
    load_embedding,
    num_embeddings,
    random_embedding,
    underlying_graph,
)
from .perm import CycleType
from . import reembed

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_INVARIANT = range(5)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _read_input(args) -> Embedding:
    if not args.input:
        raise UsageError("--input is required")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    return load_embedding(text)


def _budget(args, default):
    return None if args.unsafe_budget else default


def _fmt_hist(hist) -> str:
    return ", ".join(f"{k:+d}: {v}" if k else f"0: {v}" for k, v in sorted(hist.items()))


# -- commands -----------------------------------------------------------------------


def cmd_faces(args):
    E = _read_input(args)
    rep = embedding_report(E)
    lines = [f"V={rep['num_vertices']} E={rep['num_edges']} F={rep['num_faces']} genus={rep['genus']}"]
    lines += ["face " + " ".join(map(str, f)) for f in rep["faces"]]
    _emit(args, rep, "\n".join(lines))


def cmd_genus(args):
    E = _read_input(args)
    rep = {"genus": E.genus, "num_edges": E.num_edges, "num_faces": E.num_faces, "num_vertices": E.num_vertices}
    _emit(args, rep, str(E.genus))


def cmd_dual(args):
    E = _read_input(args)
    D = dual(E)
    _emit(args, embedding_report(D), emit_rot(D))


def _vertex(args, E):
    if args.vertex is None:
        raise UsageError("--vertex is required for this mode")
    v = args.vertex
    if v not in E.vertices:
        try:
            v = int(v)
        except ValueError:
            raise UsageError(f"unknown vertex {args.vertex!r}") from None
    try:
        return E.vertex_name(v)
    except KeyError:
        raise UsageError(f"unknown vertex {args.vertex!r}") from None


def cmd_reembed(args):
    E = _read_input(args)
    E.genus
    mode = args.mode
    if mode == "range" and args.vertex is None:
        est = reembed.estimate_range_covers(E)
        lo, hi = est.interval
        _emit(args, est.to_json(), f"genus {est.genus}, estimated range [{lo}, {hi}] ({est.mode})")
        return
    v = _vertex(args, E)
    budget = _budget(args, reembed.DEFAULT_ROTATION_BUDGET)

    if mode == "dist":
        dist = reembed.genus_distribution_bruteforce(E, v, jobs=args.jobs, budget=budget)
        out = dist.to_json()
        if args.oracle_check:
            expected = reembed.count_distribution(E, v).histogram
            if expected != dist.histogram:
                raise InvariantError(f"counting formula {expected} disagrees with enumeration {dist.histogram}")
            out["oracle_check"] = "agrees"
        _emit(args, out, f"{v}: total {dist.total}; " + _fmt_hist(dist.histogram))
    elif mode == "count":
        if args.eta is not None:
            eta = CycleType(args.eta)
            c = reembed.count_eta(E, v, eta)
            _emit(args, {"count": str(c), "eta": str(eta), "vertex": v}, str(c))
        elif args.delta_g is not None:
            c = reembed.count_delta(E, v, args.delta_g)
            _emit(args, {"count": str(c), "delta_g": args.delta_g, "vertex": v}, str(c))
        else:
            dist = reembed.count_distribution(E, v)
            _emit(args, dist.to_json(), f"{v}: total {dist.total}; " + _fmt_hist(dist.histogram))
    elif mode == "prob":
        p = reembed.prob_preserve(E, v)
        lo, hi = reembed.prob_bounds(E, v)
        out = {"lower_bound": str(lo), "probability": str(p), "upper_bound": str(hi), "vertex": v}
        _emit(args, out, f"{p}  (bounds {lo} .. {hi})")
    elif mode == "range":
        lo, hi = reembed.delta_range(E, v)
        _emit(args, {"range": [lo, hi], "vertex": v}, f"[{lo}, {hi}]")
    elif mode == "enum":
        fmt = args.format
        for theta, dg in reembed.enumerate_reembeddings(E, v, jobs=args.jobs, budget=budget):
            if fmt == "json":
                sys.stdout.write(json.dumps({"delta_g": dg, "theta": list(theta)}, sort_keys=True) + "\n")
            else:
                sys.stdout.write("(" + " ".join(map(str, theta)) + f") {dg}\n")


def cmd_count(args):
    if args.lam is None:
        raise UsageError("--lambda is required")
    lam = CycleType(args.lam)
    n = args.n if args.n is not None else lam.n
    if n != lam.n:
        raise UsageError(f"lambda has size {lam.n}, not n = {n}")
    if (args.k is None) == (args.eta is None):
        raise UsageError("give exactly one of -k and --eta")
    out = {"lambda": str(lam), "n": n}
    if args.k is not None:
        value = counting.p_count(args.k, lam, n)
        out["k"] = args.k
    else:
        eta = CycleType(args.eta)
        value = counting.f_count(eta, lam, n)
        out["eta"] = str(eta)
    out["count"] = str(value)
    if args.closed_form:
        if args.k != 1:
            raise UsageError("--closed-form applies to -k 1 only")
        cf = counting.p1_closed_form(lam)
        out["closed_form"] = str(cf)
        if cf != value:
            raise InvariantError(f"closed form {cf} disagrees with the recurrence {value}")
    if args.oracle_check:
        limit = None if args.unsafe_budget else counting.ORACLE_LIMIT
        if args.k is not None:
            oracle = counting.brute_force_p(args.k, lam, n, limit=limit)
        else:
            oracle = counting.brute_force_f(CycleType(args.eta), lam, n, limit=limit)
        out["oracle"] = str(oracle)
        if oracle != value:
            raise InvariantError(f"enumeration gives {oracle}, recurrence gives {value}")
    _emit(args, out, str(value))


def cmd_certify(args):
    E = _read_input(args)
    rep = reembed.check_min_genus_condition(E) if args.which == "min" else reembed.check_locally_maximal(E)
    lines = [f"{rep.kind} certificate ({rep.condition}); necessary, not sufficient"]
    for c in rep.entries:
        lines.append(f"  {c.vertex}: deg={c.degree} faces={c.q} diag_cycles={c.diagonal_cycles} "
                     + ("ok" if c.holds else "VIOLATED"))
    lines.append("PASS" if rep.passed else "FAIL: " + " ".join(rep.violations))
    _emit(args, rep.to_json(), "\n".join(lines))


def _experiment_sample(args):
    graph, seed = args
    E = random_embedding(graph, seed)
    est = reembed.estimate_range_covers(E)
    return E.genus, est.interval


def _experiment_embedding(E):
    est = reembed.estimate_range_covers(E)
    return E.genus, est.interval


def cmd_experiment(args):
    spec = args.graph
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            graph = underlying_graph(load_embedding(fh.read()))
    else:
        try:
            graph = graph_from_spec(spec)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.exhaustive == args.random:
        raise UsageError("choose exactly one of --random and --exhaustive")
    if args.exhaustive:
        budget = _budget(args, DEFAULT_EMBEDDING_BUDGET)
        embeddings = list(all_embeddings(graph, budget=budget))
        results = _map(args.jobs, _experiment_embedding, embeddings)
    else:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        rng = random.Random(args.seed)
        seeds = [rng.getrandbits(64) for _ in range(args.samples)]
        results = _map(args.jobs, _experiment_sample, [(graph, s) for s in seeds])
    hist = Counter(g for g, _ in results)
    lo = min(iv[0] for _, iv in results)
    hi = max(iv[1] for _, iv in results)
    out = {
        "betti_number": graph.betti_number,
        "embeddings": len(results),
        "estimated_range": [lo, hi],
        "genus_histogram": {str(g): c for g, c in sorted(hist.items())},
        "mode": "exhaustive" if args.exhaustive else "random",
        "total_rotation_systems": str(num_embeddings(graph)),
    }
    if args.exhaustive:
        out["genus_range"] = [min(hist), max(hist)]
    else:
        out["seed"] = args.seed
    text = [f"{out['mode']}: {len(results)} embeddings, genus histogram "
            + ", ".join(f"{g}: {c}" for g, c in sorted(hist.items())),
            f"estimated range [{lo}, {hi}]"]
    if args.exhaustive:
        text.append(f"true range [{min(hist)}, {max(hist)}]")
    _emit(args, out, "\n".join(text))


def _map(jobs, fn, items):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (output does not depend on it)")
    common.add_argument("--unsafe-budget", action="store_true", help="lift enumeration budgets")

    inp = _Parser(add_help=False)
    inp.add_argument("--input", "-i", help=".rot or two-line file, '-' for stdin")

    p = _Parser(prog="fatgraph", description="Embeddings of graphs as permutation pairs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("faces", parents=[common, inp], help="list faces, V/E/F and genus")
    s.set_defaults(func=cmd_faces)
    s = sub.add_parser("genus", parents=[common, inp], help="print the genus")
    s.set_defaults(func=cmd_genus)
    s = sub.add_parser("dual", parents=[common, inp], help="print the dual embedding")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("reembed", parents=[common, inp], help="genus changes from re-embedding one vertex")
    s.add_argument("--vertex", "-v", help="vertex name or any of its half edges")
    s.add_argument("--mode", choices=("dist", "count", "prob", "range", "enum"), default="dist")
    s.add_argument("--delta-g", type=int)
    s.add_argument("--eta", help="face-incidence partition, e.g. '2 1 1'")
    s.add_argument("--oracle-check", action="store_true")
    s.set_defaults(func=cmd_reembed)

    s = sub.add_parser("count", parents=[common], help="factorization counts")
    s.add_argument("-k", type=int, help="number of pi-cycles")
    s.add_argument("--eta", help="cycle type of pi")
    s.add_argument("--lambda", "-lambda", dest="lam", help="cycle type of the diagonal, e.g. '3 1' or '1^3'")
    s.add_argument("-n", type=int)
    s.add_argument("--closed-form", action="store_true")
    s.add_argument("--oracle-check", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("certify", parents=[common, inp], help="per-vertex necessary conditions")
    s.add_argument("which", choices=("min", "max"))
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("experiment", parents=[common], help="range estimates over many embeddings of a graph")
    s.add_argument("graph", help="K4, K3,3, B2, 'u-v,v-w,...' or a .rot file")
    s.add_argument("--random", action="store_true")
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_experiment)
    return p


def _error(fmt: str, code: int, kind: str, message: str, exc=None) -> int:
    if fmt == "json":
        err = {"code": code, "kind": kind, "message": message}
        if isinstance(exc, ParseError):
            err["line"], err["column"] = exc.line, exc.column
        sys.stdout.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"fatgraph: {kind}: {message}\n")
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if any(a in ("--format=json",) for a in argv) or any(
        a == "--format" and b == "json" for a, b in zip(argv, argv[1:])) else "text"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        args.func(args)
    except UsageError as exc:
        return _error(fmt, EXIT_USAGE, "usage", str(exc))
    except (ParseError, DisconnectedError) as exc:
        return _error(fmt, EXIT_PARSE, "input", str(exc), exc)
    except BudgetExceeded as exc:
        return _error(fmt, EXIT_BUDGET, "budget", str(exc))
    except InvariantError as exc:
        return _error(fmt, EXIT_INVARIANT, "invariant", str(exc))
    except (ValueError, KeyError) as exc:
        return _error(fmt, EXIT_USAGE, "usage", str(exc).strip("'\""))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
