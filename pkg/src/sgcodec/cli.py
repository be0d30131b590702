"""Command-line surface.

stdout carries machine-readable JSON only; human diagnostics go to stderr.
Exit codes: 0 success, 2 usage or configuration problems, 3 corrupt data.
"""

import argparse
import json
import sys

from . import analysis
from .codec import decode, encode, parse_policy
from .errors import ConfigError, MalformedStreamError, SgcError
from .graph import read_edgelist, write_edgelist
from .graphon import (
    LatentStream,
    PowerLawGraphon,
    ent,
    graphon_norm,
    load_graphon,
    nominal_edges,
    sample_w_random,
)
from .lsfit import ls_heuristic

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def _note(msg):
    print(msg, file=sys.stderr)


def cmd_generate(args) -> int:
    w = load_graphon(args.graphon)
    xs = LatentStream(args.seed)
    g = sample_w_random(w, args.n, args.rho, xs)
    write_edgelist(g, args.out)
    mbar = nominal_edges(args.n, args.rho)
    print(
        json.dumps(
            {"m": g.m, "m_bar": mbar, "ratio": g.m / mbar if mbar > 0 else None}
        ),
        file=sys.stderr,
    )
    _emit({"out": args.out, "n": g.n, "m": g.m})
    return EXIT_OK


def cmd_encode(args) -> int:
    g = read_edgelist(args.infile)
    policy = parse_policy(args.policy)
    data, report = encode(g, policy, lwc_mode=args.mode)
    with open(args.out, "wb") as f:
        f.write(data)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_decode(args) -> int:
    with open(args.infile, "rb") as f:
        data = f.read()
    g = decode(data)
    write_edgelist(g, args.out)
    _emit({"out": args.out, "n": g.n, "m": g.m})
    return EXIT_OK


def cmd_roundtrip_check(args) -> int:
    g = read_edgelist(args.infile)
    policy = parse_policy(args.policy)
    data, report = encode(g, policy, lwc_mode=args.mode)
    back = decode(data)
    identical = back == g
    budget_ok = (
        report.r_size == 0
        or report.nats_heavy <= report.budget_ell1 + report.budget_ell2 + 1e-9
    )
    _emit(
        {
            "identical": identical,
            "bytes": len(data),
            "budget_ok": budget_ok,
            "report": report.to_dict(),
        }
    )
    return EXIT_OK if identical else EXIT_DATA


def cmd_estimate(args) -> int:
    g = read_edgelist(args.infile)
    fit = ls_heuristic(g, args.beta, seed=args.seed)
    _emit(
        {
            "beta": fit.beta,
            "class_sizes": list(fit.class_sizes),
            "B": [[float(x) for x in row] for row in fit.B],
            "objective": fit.objective,
        }
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    w = load_graphon(args.graphon)
    view = w.to_grid(args.resolution) if isinstance(w, PowerLawGraphon) else w
    out = {
        "ent": ent(view),
        "one_minus_ent": 1.0 - ent(view),
        "norm_l1": graphon_norm(view, 1),
        "norm_l2": graphon_norm(view, 2),
    }
    if args.rho is not None:
        out["er_entropy_gap"] = analysis.er_entropy_gap(args.rho)
    _emit(out)
    return EXIT_OK


def cmd_trend(args) -> int:
    with open(args.config, "r", encoding="utf-8") as f:
        config = json.load(f)
    series = analysis.run_trend(args.experiment, config)
    sidecar = series.to_csv(args.out)
    _emit(
        {
            "csv": args.out,
            "sidecar": sidecar,
            "points": len(series.values),
            "final": series.values[-1] if series.values else None,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sgcodec",
        description="Lossless universal codec for sparse graphs, "
        "with generation / estimation / entropy tooling.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample an edge-probability random graph")
    p.add_argument("--graphon", required=True, help="graphon spec JSON path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("encode", help="compress an edge-list file")
    p.add_argument("infile")
    p.add_argument("--out", required=True)
    p.add_argument("--policy", default="an:log", help="fixed:<D> | an:log | an:pow:<g>")
    p.add_argument("--mode", default="auto", choices=["auto", "exact", "surrogate"])
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decompress a container")
    p.add_argument("infile")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip-check", help="encode+decode and compare")
    p.add_argument("infile")
    p.add_argument("--policy", default="an:log")
    p.add_argument("--mode", default="auto", choices=["auto", "exact", "surrogate"])
    p.set_defaults(func=cmd_roundtrip_check)

    p = sub.add_parser("estimate", help="least-squares block fit of an edge list")
    p.add_argument("infile")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("analyze", help="entropy/norm report for a graphon spec")
    p.add_argument("--graphon", required=True)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--resolution", type=int, default=512)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trend", help="run a trend experiment to CSV")
    p.add_argument("experiment", choices=list(analysis.EXPERIMENTS))
    p.add_argument("--config", required=True, help="JSON config path")
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_trend)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except MalformedStreamError as e:
        _note(f"data error: {e}")
        return EXIT_DATA
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as e:
        _note(f"config error: {e}")
        return EXIT_CONFIG
    except SgcError as e:
        _note(f"error: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
