"""Command-line interface: ``signalprice {solve,baseline,gen,eval}``."""
import argparse
import csv
import io
import logging
import sys
import time

import numpy as np

from .core import scheme_value
from .errors import (InconsistentDistribution, InconsistentSolution, InfeasiblePrior,
                     InvalidInstance, InvalidScheme, NumericalFailure, TooLarge,
                     ZeroProbabilitySignal)
from .io import dumps, instance_to_dict, load_instance, load_scheme, scheme_to_dict
from .oracles import (Graph, brute_force_public, full_revelation_value, gen_hardness_instance,
                      gen_random_instance, no_signaling_value)
from .private import solve_private
from .public import public_params, recover_scheme_public, solve_public

CSV_COLUMNS = ["instance", "mode", "q", "b", "K", "seed", "value", "no_signaling",
               "full_revelation", "runtime_ms"]

_INPUT_ERRORS = (InvalidInstance, InvalidScheme, ZeroProbabilitySignal, InconsistentDistribution)
_SOLVER_ERRORS = (TooLarge, NumericalFailure, InconsistentSolution, InfeasiblePrior)

# used when neither --lambda nor explicit parameters are given
DEFAULT_Q = 2
DEFAULT_PRIVATE_B = 4
DEFAULT_PRIVATE_DELTA = 0.1


class UsageError(Exception):
    pass


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows, columns):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(x):
    return "" if x is None else repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _solve_public(inst, args):
    if args.lam is not None:
        pp = public_params(args.lam, inst.n_states, inst.n_buyers)
        q, b, K = pp.q, pp.b, (None if args.exact_coefficients else pp.K)
    else:
        q = DEFAULT_Q if args.q is None else args.q
        b, K = args.b, args.K
        if K is not None and b is None:
            raise UsageError("--K needs --b")
    exact = args.exact_coefficients or K is None
    sol = solve_public(inst, q, K=K, b=b, seed=args.seed, exact_coefficients=exact)
    scheme = recover_scheme_public(inst, sol)
    body = {
        "gamma": [{"posterior": xi, "weight": float(w)}
                  for xi, w in zip(sol.gamma.atoms, sol.gamma.weights)],
        "prices": sol.prices,
        "estimate": sol.estimate,
    }
    return sol.value, scheme, body, dict(q=q, b=b, K=K)


def _solve_private(inst, args):
    if args.lam is not None:
        kw = dict(lam=args.lam)
        exact = args.exact_coefficients
    else:
        kw = dict(q=DEFAULT_Q if args.q is None else args.q,
                  b=DEFAULT_PRIVATE_B if args.b is None else args.b,
                  delta=DEFAULT_PRIVATE_DELTA if args.delta is None else args.delta,
                  beta=DEFAULT_PRIVATE_DELTA if args.beta is None else args.beta,
                  K=args.K)
        exact = args.exact_coefficients or args.K is None
    sol = solve_private(inst, seed=args.seed, exact_coefficients=exact, **kw)
    pr = sol.program
    body = {
        "gamma": sol.gamma,
        "t": sol.t,
        "y": [{"state": inst.states[c.theta], "posteriors": [pr.posteriors[k] for k in c.xi],
               "prices": [float(pr.grid[p]) for p in c.p], "mass": v}
              for c, v in sol.ybar.items()],
        "bracket": list(sol.bracket),
        "estimate": sol.estimate,
    }
    K = None if exact else (args.K if args.lam is None else None)
    return sol.value, sol.scheme, body, dict(q=pr.q, b=pr.b, K=K)


def cmd_solve(args):
    explicit = [args.q, args.b, args.K, args.delta, args.beta]
    if args.lam is not None and any(v is not None for v in explicit):
        raise UsageError("give either --lambda or explicit --q/--b/--K/--delta/--beta, not both")
    inst = load_instance(args.instance)
    start = time.perf_counter()
    solver = _solve_public if args.mode == "public" else _solve_private
    value, scheme, body, params = solver(inst, args)
    runtime_ms = (time.perf_counter() - start) * 1000.0
    ns, fr = no_signaling_value(inst), full_revelation_value(inst)
    if args.format == "json":
        doc = {"mode": args.mode, **params, "seed": args.seed, "value": value,
               "no_signaling": ns, "full_revelation": fr, **body,
               "scheme": scheme_to_dict(inst, scheme)}
        _emit(dumps(doc), args.out)
    else:
        row = {"instance": args.instance, "mode": args.mode, "q": params["q"],
               "b": params["b"], "K": params["K"], "seed": args.seed, "value": value,
               "no_signaling": ns, "full_revelation": fr,
               "runtime_ms": None if args.no_timing else round(runtime_ms, 3)}
        _emit(_csv_text([{k: _fmt(v) for k, v in row.items()}], CSV_COLUMNS), args.out)
    return 0


def cmd_baseline(args):
    inst = load_instance(args.instance)
    bf = brute_force_public(inst, args.q, args.b)
    doc = {"no_signaling": no_signaling_value(inst),
           "full_revelation": full_revelation_value(inst),
           "q": args.q, "b": args.b, "public": bf.value,
           "public_grid": None if args.b is None else bf.grid_value}
    if args.format == "json":
        _emit(dumps(doc), args.out)
    else:
        _emit(_csv_text([{k: _fmt(v) for k, v in doc.items()}], list(doc)), args.out)
    return 0


def cmd_gen(args):
    if args.kind == "random":
        inst = gen_random_instance(args.seed, args.n, args.d, args.support)
    else:
        inst = gen_hardness_instance(Graph.load(args.graph), k=args.k, l=args.l, eps=args.eps,
                                     clamp=not args.no_clamp)
    _emit(dumps(instance_to_dict(inst)), args.out)
    return 0


def cmd_eval(args):
    inst = load_instance(args.instance)
    scheme = load_scheme(inst, args.scheme)
    _emit(f"{scheme_value(inst, scheme)!r}\n", args.out)
    return 0


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="signalprice",
                                     description="Signaling schemes for posted-price auctions.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver traces to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize a signaling scheme")
    p.add_argument("instance")
    p.add_argument("--mode", choices=["public", "private"], default="public")
    p.add_argument("--lambda", dest="lam", type=float, help="target additive error")
    p.add_argument("--q", type=_positive_int)
    p.add_argument("--b", type=_positive_int)
    p.add_argument("--K", type=_positive_int)
    p.add_argument("--delta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact-coefficients", action="store_true",
                   help="use exact distributions instead of samples")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--no-timing", action="store_true", help="leave runtime_ms empty in CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("baseline", help="no-signaling, full-revelation and exact public values")
    p.add_argument("instance")
    p.add_argument("--q", type=_positive_int, default=DEFAULT_Q)
    p.add_argument("--b", type=_positive_int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("gen", help="generate an instance")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=_positive_int, default=2)
    g.add_argument("--d", type=_positive_int, default=2)
    g.add_argument("--support", type=_positive_int, default=3)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    g = gsub.add_parser("hardness")
    g.add_argument("--graph", required=True, help='edge-list JSON {"m": int, "edges": [[u, v], ...]}')
    g.add_argument("--k", type=_positive_int, default=2)
    g.add_argument("--l", type=float, default=5.0)
    g.add_argument("--eps", type=float, default=0.5)
    g.add_argument("--no-clamp", action="store_true",
                   help="reject graphs whose extra type would value states above 1")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="expected revenue of a scheme")
    p.add_argument("instance")
    p.add_argument("scheme")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
