"""Command-line entry point: ``interp``, ``game`` and ``selftest``."""

import argparse
import random
import sys
import time

from .blackbox import SLPBlackbox, SLPFormatError, parse_slp
from .heuristics import format_phase_csv, phase_experiment
from .interpolator import derive_params, interpolate, verify
from .sparse import serialize

DEFAULT_SEED = 20240601

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="sparseinterp", description="Sparse interpolation of modular blackboxes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ip = sub.add_parser("interp", help="interpolate a straight-line program")
    ip.add_argument("--slp", required=True, help="straight-line program file")
    ip.add_argument("--terms", type=int, required=True, help="bound T on the number of terms")
    ip.add_argument("--size", type=int, required=True, help="bound S on the total bit-size")
    ip.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ip.add_argument("--mode", choices=("practical", "provable-params"), default="practical")
    ip.add_argument("--verify", type=int, default=0, metavar="K", help="random identity checks")
    ip.add_argument("--out", help="output file (default: standard output)")
    ip.add_argument("--jobs", type=int, default=1, help="evaluation worker threads")

    gp = sub.add_parser("game", help="phase experiment of the peeling decoder")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--gamma-min", type=float, required=True)
    gp.add_argument("--gamma-max", type=float, required=True)
    gp.add_argument("--steps", type=int, required=True, help="number of grid points")
    gp.add_argument("--trials", type=int, required=True)
    gp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gp.add_argument("--density", type=float, default=1.0)
    gp.add_argument("--eta", type=float, default=2.0)

    sp = sub.add_parser("selftest", help="fast oracle-equivalence checks")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    return p


def _print_params(params, out):
    for name, value in params.describe():
        out.write(f"{name} {value}\n")
    if params.schedule is not None:
        out.write("level nu m lambda\n")
        for row in params.schedule.table():
            out.write(" ".join(str(x) for x in row) + "\n")


def cmd_interp(args):
    try:
        with open(args.slp) as fh:
            slp = parse_slp(fh.read())
    except OSError as exc:
        sys.stderr.write(f"cannot read {args.slp}: {exc}\n")
        return EXIT_USAGE
    except SLPFormatError as exc:
        sys.stderr.write(f"{args.slp}: {exc}\n")
        return EXIT_USAGE
    n = slp.nvars
    rng = random.Random(args.seed)
    if args.terms < 1 or args.size < max(args.terms, n, 1) or args.verify < 0 or args.jobs < 1:
        sys.stderr.write("need 1 <= terms <= size, size >= nvars, verify >= 0, jobs >= 1\n")
        return EXIT_USAGE
    if args.mode == "provable-params":
        if args.size < 1 << 16:
            sys.stderr.write("provable parameters need --size >= 65536\n")
            return EXIT_USAGE
        _print_params(derive_params(args.terms, args.size, n, "provable", rng), sys.stdout)
        return EXIT_OK
    bb = SLPBlackbox(slp, jobs=args.jobs)
    t0 = time.perf_counter()
    f = interpolate(bb, n, args.terms, args.size, rng)
    elapsed = time.perf_counter() - t0
    text = serialize(f)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    count, bits = bb.stats.snapshot()
    sys.stderr.write(f"eval_count {count}\ntotal_modulus_bits {bits}\nseconds {elapsed:.3f}\n")
    if args.verify:
        ok = verify(f, SLPBlackbox(slp), args.verify, random.Random(args.seed + 1))
        sys.stderr.write(f"verified {'yes' if ok else 'no'}\n")
        if not ok:
            return EXIT_FAIL
    return EXIT_OK


def cmd_game(args):
    if args.n < 1 or args.steps < 1 or args.trials < 1:
        sys.stderr.write("n, steps and trials must be positive\n")
        return EXIT_USAGE
    if args.gamma_min > args.gamma_max or args.gamma_min <= 0:
        sys.stderr.write("need 0 < gamma-min <= gamma-max\n")
        return EXIT_USAGE
    if not 0 < args.density <= 1 or args.eta < 1:
        sys.stderr.write("need 0 < density <= 1 and eta >= 1\n")
        return EXIT_USAGE
    if args.steps == 1:
        grid = [args.gamma_min]
    else:
        h = (args.gamma_max - args.gamma_min) / (args.steps - 1)
        grid = [round(args.gamma_min + h * k, 10) for k in range(args.steps)]
    rows = phase_experiment(args.n, grid, args.trials, random.Random(args.seed),
                            density=args.density, eta=args.eta)
    sys.stdout.write(format_phase_csv(rows))
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_checks

    failures = run_checks(seed=args.seed, inject=args.inject_fault, log=sys.stdout)
    if failures:
        sys.stderr.write("failed: " + ", ".join(failures) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"interp": cmd_interp, "game": cmd_game, "selftest": cmd_selftest}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
