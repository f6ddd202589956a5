"""Command-line interface.

Exit codes: 0 = success / verified / none-found-as-expected;
2 = a mathematically meaningful find (rainbow witness, threshold violation,
or a certificate that failed to verify), so scripts can branch on it;
1 = usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import audit, model, optimize, realize

FOUND_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):          # usage errors are exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(self._fail(message))

    def _fail(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _fmt(value) -> str:
    """Dual numeric print: exact rational when available, decimal always."""
    if isinstance(value, Fraction):
        return f"{value} = {float(value):.15g}"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.15g}"


def _load_graph(path: str) -> model.ClusteredGraph:
    g = model.load_graph(path)
    violation = model.validate(g)
    if violation is not None:
        raise ValueError(f"{path}: invalid clustered graph: {violation}")
    return g


def _parse_t(text: str) -> Fraction:
    return Fraction(text)


# --- subcommand handlers -----------------------------------------------------


def _cmd_construct(args) -> int:
    t = _parse_t(args.t) if args.t is not None else None
    g = model.extremal(args.k, args.family, t)
    model.save_graph(g, args.output)
    dmin = min(model.densities(g).d)
    print(f"wrote {args.output}: k={args.k} family={args.family}"
          + (f" t={t}" if t is not None else "")
          + f", min density {_fmt(dmin)} (f({args.k}) = {_fmt(model.f(args.k))})")
    return 0


def _cmd_density(args) -> int:
    g = _load_graph(args.input)
    if args.exact:
        g = g.as_fraction()
    der = model.densities(g)
    for i, d in enumerate(der.d, start=1):
        print(f"d_{i} = {_fmt(d)}")
    print(f"min = {_fmt(min(der.d))}")
    print(f"c = {_fmt(der.c_min)}")
    print(f"b = {_fmt(der.b_min_pos) if der.b_min_pos is not None else 'undefined (all b_ij = 0)'}")
    return 0


def _cmd_f(args) -> int:
    print(_fmt(model.f(args.k)))
    return 0


def _cmd_audit(args) -> int:
    g = _load_graph(args.input)
    claim_ids = list(audit.CLAIM_IDS) if args.claims == "all" \
        else [c.strip() for c in args.claims.split(",") if c.strip()]
    reports = []
    for cid in claim_ids:
        reports.extend(audit.evaluate_claim(g, cid))
    if args.identities:
        if not g.is_rational:
            raise ValueError("--identities needs a rational-mode graph "
                             "(exact 'p/q' weights); identities are exact checks")
        reports.extend(audit.check_all_identities(g))
    for rep in reports:
        print(json.dumps(rep.as_dict()))
    violation = audit.is_theorem_violation(g)
    print(json.dumps({"type": "threshold", "min_density": float(model.min_density(g)),
                      "f_k": float(model.f(g.k)), "violation": violation}))
    return FOUND_EXIT if violation else 0


def _cmd_certificates(args) -> int:
    ids = audit.CERTIFICATE_IDS if args.all or args.id is None else (args.id,)
    reports = [audit.check_certificate(cid, args.grid) for cid in ids]
    for rep in reports:
        print(json.dumps(rep.as_dict()))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "kind", "domain", "verified", "extremal_value",
                             "claimed", "margin", "grid"])
            for rep in reports:
                writer.writerow([rep.certificate_id, rep.kind, rep.domain, rep.verified,
                                 rep.extremal_value, rep.claimed, rep.margin, rep.grid])
        print(f"wrote {args.csv}", file=sys.stderr)
    return 0 if all(r.verified for r in reports) else FOUND_EXIT


def _cmd_optimize(args) -> int:
    cfg = optimize.OptimizerConfig(restarts=args.restarts, seed=args.seed,
                                   value_tol=args.tol, workers=args.workers)
    result = optimize.maximize_min_density(args.k, cfg)
    fk = float(model.f(args.k))
    print(f"best min density {result.best_value:.12g} (f({args.k}) = {_fmt(model.f(args.k))}, "
          f"gap {fk - result.best_value:.3g}) from restart {result.best_restart} "
          f"in {result.wall_time:.2f}s")
    payload = model.to_json_dict(result.best_graph)
    if args.output:
        model.save_graph(result.best_graph, args.output)
        print(f"wrote {args.output}")
    else:
        print(json.dumps(payload))
    if args.trace:
        optimize.write_trace_csv(result, args.trace)
        print(f"wrote {args.trace}", file=sys.stderr)
    return 0


def _cmd_sample(args) -> int:
    res = audit.falsify_theorem(args.k, args.samples, args.seed)
    print(f"k={args.k}: {res.samples_run} samples, max min-density "
          f"{res.max_min_density:.12g} vs f(k) = {_fmt(model.f(args.k))}")
    if res.violation is not None:
        print("THRESHOLD VIOLATION (this contradicts the proven bound):")
        print(json.dumps(model.to_json_dict(res.violation)))
        return FOUND_EXIT
    return 0


def _cmd_realize(args) -> int:
    g = _load_graph(args.input)
    system = realize.blow_up(g, args.n)
    realize.write_system(system, args.output)
    counts = realize.edge_counts(system)
    print(f"wrote {args.output}: n={args.n} k={system.k} edge counts {counts}")
    return 0


def _cmd_detect(args) -> int:
    system = realize.read_system(args.input)
    kind = "walk" if args.walk else "path"
    witness = realize.find_rainbow(system, args.length, kind,
                                   nonbacktracking=args.nonbacktracking,
                                   strategy=args.strategy, workers=args.workers)
    if witness is None:
        print("none")
        return 0
    print(witness.format())
    return FOUND_EXIT


def _cmd_experiment(args) -> int:
    rep = realize.saturation_experiment(args.k, args.n, args.seed, args.kind)
    print(json.dumps({
        "k": rep.k, "n": rep.n, "seed": rep.seed, "kind": rep.kind,
        "start_family": rep.family, "edges_added": rep.edges_added,
        "witness": rep.witness.format(), "edge_counts": list(rep.edge_counts),
        "densities": [round(d, 9) for d in rep.densities],
    }))
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rainbowpath",
                     description="Clustered-graph toolkit for the rainbow "
                                 "3-edge-path density threshold")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write an extremal construction as JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", choices=model.FAMILIES, default="pairs")
    p.add_argument("--t", help="mixed-family parameter (rational like 1/4)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("density", help="per-color densities of a graph file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--exact", action="store_true",
                   help="rationalize decimal weights and compute exactly")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("f", help="print the density threshold f(k)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_f)

    p = sub.add_parser("audit", help="evaluate claims (and identities) at a graph")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--claims", default="all", help="comma-separated claim ids or 'all'")
    p.add_argument("--identities", action="store_true")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("certificates", help="verify the scalar-inequality catalog")
    p.add_argument("--id", choices=audit.CERTIFICATE_IDS)
    p.add_argument("--all", action="store_true")
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--csv", help="also write an extremal-value table")
    p.set_defaults(func=_cmd_certificates)

    p = sub.add_parser("optimize", help="search max of min_i d_i for k colors")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace", help="write per-iteration CSV trace")
    p.add_argument("-o", "--output", help="write the best graph as JSON")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sample", help="random-sampling falsification run")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("realize", help="blow a graph file up to n vertices")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("detect", help="search a system file for a rainbow witness")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--len", dest="length", type=int, default=3)
    p.add_argument("--walk", action="store_true")
    p.add_argument("--nonbacktracking", action="store_true")
    p.add_argument("--strategy", choices=("auto", "direct", "cluster"), default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("experiment", help="edge-addition saturation experiment")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kind", choices=("path", "walk"), default="path")
    p.set_defaults(func=_cmd_experiment)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"rainbowpath: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
