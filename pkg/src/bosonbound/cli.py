"""Command-line driver.

Exit status: 0 on success, 1 when an invariant check fails, 2 on usage or
input errors.
"""

import argparse
import json
import sys

from . import _backend
from .errors import BosonBoundError
from .experiment import (
    SweepConfig,
    rows_to_csv,
    rows_to_json,
    run_bound_sweep,
    run_component_sweep,
    tightness_probe,
    violations,
)
from .fock import distinguishable_distribution, enumerate_outcomes, output_distribution, sample_outcome
from .interferometer import compose, decompose
from .io import dumps_distribution, dumps_lifted, dumps_network, format_outcome, load_matrix
from .lift import lift
from .linalg import haar_random_unitary, operator_distance
from .noise import gaussian_opnorm_stat

ROUND_TRIP_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _add_matrix_source(p):
    p.add_argument("--matrix", help="matrix JSON file; a Haar unitary is drawn when omitted")
    p.add_argument("--modes", type=int, help="dimension of the Haar draw")
    p.add_argument("--seed", type=int, default=0)


def _add_output(p, formats=("csv", "json")):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_sweep_args(p, with_model):
    p.add_argument("--photons", type=int, nargs="+", required=True)
    p.add_argument("--modes", type=int, nargs="+", required=True)
    p.add_argument("--epsilon-list", "--epsilon", dest="epsilon", type=float, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    if with_model:
        p.add_argument("--noise-model", choices=("rotation", "gaussian", "component"), default="rotation")
        p.add_argument("--project-unitary", action="store_true",
                       help="replace Gaussian-noised matrices by their nearest unitary")
    _add_output(p)


def build_parser():
    parser = _Parser(prog="bosonbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dist", help="print the output distribution of a matrix")
    _add_matrix_source(p)
    p.add_argument("--photons", type=int, required=True)
    p.add_argument("--distinguishable", action="store_true")
    _add_output(p)

    p = sub.add_parser("sample", help="draw outcomes from the exact distribution")
    _add_matrix_source(p)
    p.add_argument("--photons", type=int, required=True)
    p.add_argument("--count", type=int, default=1000)
    _add_output(p)

    p = sub.add_parser("lift", help="dump the n-photon lifted matrix as JSON")
    _add_matrix_source(p)
    p.add_argument("--photons", type=int, required=True)
    _add_output(p, formats=("json",))

    p = sub.add_parser("decompose", help="decompose a unitary into a beamsplitter mesh")
    _add_matrix_source(p)
    _add_output(p, formats=("json",))

    p = sub.add_parser("sweep", help="randomized check of the distribution-error bound")
    _add_sweep_args(p, with_model=True)

    p = sub.add_parser("component-sweep", help="sweep with per-component network noise")
    _add_sweep_args(p, with_model=False)

    p = sub.add_parser("tightness", help="largest observed l1 / (n ||Ut - U||_op)")
    p.add_argument("--photons", type=int, required=True)
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gauss-norm", help="median ||G||_op / sqrt(m) for complex Ginibre G")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({_backend.BACKEND})")
    return parser


def _matrix(args):
    if args.matrix:
        return load_matrix(args.matrix)
    if args.modes is None:
        raise BosonBoundError("give --matrix FILE or --modes M")
    return haar_random_unitary(args.modes, args.seed)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_dist(args):
    U = _matrix(args)
    fn = distinguishable_distribution if args.distinguishable else output_distribution
    dist = fn(U, args.photons)
    if args.format == "csv":
        _emit(dumps_distribution(dist), args.out)
    else:
        rows = [{"outcome": format_outcome(s), "probability": float(p)}
                for s, p in zip(enumerate_outcomes(dist.m, dist.n), dist.probs)]
        _emit(json.dumps(rows, indent=1) + "\n", args.out)
    return 0


def _cmd_sample(args):
    U = _matrix(args)
    draws = sample_outcome(output_distribution(U, args.photons), args.seed, args.count)
    if args.format == "csv":
        _emit("outcome\n" + "".join(format_outcome(s) + "\n" for s in draws), args.out)
    else:
        _emit(json.dumps([format_outcome(s) for s in draws]) + "\n", args.out)
    return 0


def _cmd_lift(args):
    U = _matrix(args)
    _emit(dumps_lifted(lift(U, args.photons), U.shape[0], args.photons) + "\n", args.out)
    return 0


def _cmd_decompose(args):
    U = _matrix(args)
    net = decompose(U)
    _emit(dumps_network(net) + "\n", args.out)
    err = operator_distance(compose(net), U)
    if err > ROUND_TRIP_TOL:
        print(f"round-trip error {err:.3e} exceeds {ROUND_TRIP_TOL:.0e}", file=sys.stderr)
        return 1
    return 0


def _run_sweep(args, model):
    cfg = SweepConfig(
        n_values=args.photons,
        m_values=args.modes,
        eps_values=args.epsilon,
        trials_per_cell=args.trials,
        noise_model=model,
        master_seed=args.seed,
        output_path=args.out,
        project_unitary=getattr(args, "project_unitary", False),
    )
    rows = run_component_sweep(cfg) if model == "component" else run_bound_sweep(cfg)
    _emit(rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows) + "\n", args.out)
    bad = violations(rows)
    unhalved = sum(1 for r in rows if not r.l1_paper_ok)
    print(f"{len(rows)} trials, {bad} chain violations, {unhalved} unhalved-l1 exceedances",
          file=sys.stderr)
    return 1 if bad else 0


def _cmd_tightness(args):
    res = tightness_probe(args.photons, args.modes, args.epsilon, args.trials, args.seed)
    seed = "" if res.seed is None else res.seed
    print(f"ratio,seed,trials_used\n{format(res.ratio, '.17g')},{seed},{res.trials_used}")
    return 0


def _cmd_gauss_norm(args):
    print(format(gaussian_opnorm_stat(args.modes, args.trials, args.seed), ".17g"))
    return 0


_COMMANDS = {
    "dist": _cmd_dist,
    "sample": _cmd_sample,
    "lift": _cmd_lift,
    "decompose": _cmd_decompose,
    "sweep": lambda a: _run_sweep(a, a.noise_model),
    "component-sweep": lambda a: _run_sweep(a, "component"),
    "tightness": _cmd_tightness,
    "gauss-norm": _cmd_gauss_norm,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return _COMMANDS[args.command](args)
    except (BosonBoundError, OSError, ValueError, KeyError) as exc:
        print(f"bosonbound {args.command}: error: {exc}", file=sys.stderr)
        return 2
