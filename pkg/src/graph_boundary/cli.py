"""Command line interface.

Exit codes: 0 success, 1 input error, 2 internal invariant violation
(including any violation of a proven inequality found by ``scan``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import abp, boundary, hardy, spectral, walks
from .energy import Kernel, maximize_energy
from .errors import GraphBoundaryError, InputError
from .graph import all_pairs_distances, degree_extremes
from .io import read_graph, write_dot
from .scan import records_to_csv, records_to_json, scan_corpus

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dot", metavar="PATH", help="write the graph as DOT, boundary in red")
    p.add_argument("--workers", type=int, default=1)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="graph-boundary", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("boundary", "boundary vertices, witnesses, isoperimetric report"),
        ("walk", "hitting-time potential and exit-time bound"),
        ("spectrum", "Dirichlet ground state, Faber-Krahn, hot spots"),
        ("hardy", "Hardy certificate"),
        ("abp", "sharp and universal ABP constants"),
        ("energy", "maximal distance-energy measure"),
    ]:
        sp_ = sub.add_parser(name, parents=[common], help=help_)
        sp_.add_argument("input", nargs="?", default="-", help="graph file, '-' for stdin")
        if name == "walk":
            sp_.add_argument("--start", type=int, help="start vertex for Monte Carlo")
            sp_.add_argument("--trials", type=int, default=0)
        if name == "energy":
            sp_.add_argument("--alpha", type=float, default=2.0)
            sp_.add_argument("--restarts", type=int, default=16)
    scan = sub.add_parser("scan", parents=[common], help="analyse a graph6 corpus")
    scan.add_argument("inputs", nargs="+", help="graph6 files or directories")
    scan.add_argument("--mc-trials", type=int, default=0)
    scan.add_argument("--csv", metavar="PATH", help="also write records as CSV")
    return parser


def _read(args):
    text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    g = read_graph(text, args.format)
    dist = all_pairs_distances(g)
    bd = boundary.boundary_set(g, dist)
    if args.dot:
        write_dot(g, bd, args.dot)
    return g, dist, bd


def _label(g, v):
    return g.labels[v] if g.labels is not None else v


def _emit(args, report: dict) -> None:
    if args.json:
        print(json.dumps(report, indent=2, default=_jsonable))
    else:
        for k, v in report.items():
            print(f"{k}: {_jsonable(v) if isinstance(v, np.ndarray) else v}")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(type(x))


def cmd_boundary(args) -> int:
    g, dist, bd = _read(args)
    iso = boundary.isoperimetric_report(g, dist, bd)
    _emit(args, {
        "n": g.n,
        "diameter": dist.diameter,
        "boundary": [_label(g, v) for v in bd.sorted()],
        "witness": {str(_label(g, v)): _label(g, w) for v, w in sorted(bd.witness.items())},
        "iso_lhs": iso.lhs,
        "iso_rhs": str(iso.rhs),
        "iso_holds": iso.holds,
    })
    return EXIT_OK


def cmd_walk(args) -> int:
    g, dist, bd = _read(args)
    pot = walks.hitting_potential(g, bd.members)
    _, maxdeg = degree_extremes(g)
    report = {
        "phi": pot.phi,
        "max_phi": float(pot.phi.max()),
        "hitting_time_bound": maxdeg * dist.diameter**2,
        "residual": pot.residual,
    }
    if args.trials:
        v0 = args.start if args.start is not None else int(np.argmax(pot.phi))
        est = walks.estimate_exit_time(g, bd.members, v0, args.trials, args.seed)
        report.update(start=v0, exact=float(pot.phi[v0]), mc_mean=est.mean, mc_stderr=est.stderr)
    _emit(args, report)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g, dist, bd = _read(args)
    fk = spectral.faber_krahn_report(g, dist, bd)
    hs = spectral.hotspots_report(g, bd)
    ratio = spectral.hotspots_ratio_check(g, dist, bd)
    _emit(args, {
        "lambda1": fk.lambda1,
        "faber_krahn_bound": fk.bound,
        "q": fk.q,
        "faber_krahn_holds": fk.holds,
        "interior_empty": fk.interior_empty,
        "lambda2": hs.lambda2,
        "multiplicity": hs.multiplicity,
        "hotspots": hs.overall.value,
        "ratio_applicable": ratio.applicable,
        "ratio": ratio.ratio,
        "ratio_bound": ratio.bound,
    })
    return EXIT_OK


def cmd_hardy(args) -> int:
    g, dist, bd = _read(args)
    pot = walks.hitting_potential(g, bd.members)
    cert = hardy.hardy_certificate(g, bd, pot.phi)
    _emit(args, {"hardy_certificate": cert, "holds": cert >= -1e-8, "phi": pot.phi})
    return EXIT_OK


def cmd_abp(args) -> int:
    g, dist, bd = _read(args)
    tor = abp.torsion_function(g, bd.members)
    _emit(args, {
        "abp_sharp_constant": float(tor.u.max()),
        "abp_bound": abp.abp_universal_bound(g, dist),
        "torsion": tor.u,
    })
    return EXIT_OK


def cmd_energy(args) -> int:
    g, dist, bd = _read(args)
    kernel = Kernel.power(args.alpha, dist.diameter)
    res = maximize_energy(g, dist, bd, kernel, restarts=args.restarts, seed=args.seed)
    _emit(args, {"energy": res.energy, "interior_mass": res.interior_mass, "mu_star": res.mu_star})
    return EXIT_OK


def cmd_scan(args) -> int:
    records, summary = scan_corpus(args.inputs, workers=args.workers, seed=args.seed, mc_trials=args.mc_trials)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(records_to_csv(records))
    if args.json:
        sys.stdout.write(records_to_json(records, summary))
    else:
        sys.stdout.write(records_to_csv(records))
        print(json.dumps(summary.as_dict(), indent=2), file=sys.stderr)
    return EXIT_INVARIANT if summary.bound_violations else EXIT_OK


COMMANDS = {
    "boundary": cmd_boundary,
    "walk": cmd_walk,
    "spectrum": cmd_spectrum,
    "hardy": cmd_hardy,
    "abp": cmd_abp,
    "energy": cmd_energy,
    "scan": cmd_scan,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphBoundaryError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
