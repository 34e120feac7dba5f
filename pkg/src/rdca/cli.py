"""Command-line interface.

Exit codes: 0 success, 1 negative result, 2 I/O or parse error,
3 nonexistence, 4 search or window limits exceeded.

Every option can also be given in a flat ``key=value`` file passed with
``--config`` (keys are the long option names without dashes, with ``-``
or ``_``).  A flag on the command line beats the config file, which beats
the built-in default.  ``RDCA_SEED`` replaces the built-in master seed.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import higher_order, pinned, simulate, waves
from .errors import (
    InvalidParams,
    NotBistable,
    SearchLimitExceeded,
    WindowTooSmall,
)
from .kernel import LatticeWindow
from .reactions import ReactionFunction, dumps_reaction, loads_reaction, maximal, truncated_polynomial

EXIT_OK, EXIT_NEGATIVE, EXIT_IO, EXIT_NONEXISTENT, EXIT_LIMIT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _int_range(text: str) -> list[int]:
    """``"3"``, ``"2:10"`` (inclusive) or ``"1,4,7"``."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return _int_list(text)


def _add_reaction_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("reaction")
    g.add_argument("--reaction", metavar="FILE", help="reaction table file ('K a' then K+1 values)")
    g.add_argument("--maximal", action="store_true", help="use the maximal reaction for --K, --a")
    g.add_argument("--truncated", action="store_true", help="use the truncated polynomial for --K, --a, --lambda")
    g.add_argument("--K", type=int)
    g.add_argument("--a", type=int)
    g.add_argument("--lambda", dest="lam", type=str)


def _reaction(args) -> ReactionFunction:
    if args.reaction:
        with open(args.reaction) as fh:
            return loads_reaction(fh.read())
    if args.K is None or args.a is None:
        raise UsageError("give --reaction FILE, or --maximal/--truncated with --K and --a")
    if args.maximal:
        return maximal(args.a, args.K)
    if args.truncated:
        if args.lam is None:
            raise UsageError("--truncated needs --lambda")
        return truncated_polynomial(args.K, args.a, args.lam)
    raise UsageError("choose --reaction, --maximal or --truncated")


def _window(args, K: int) -> LatticeWindow:
    if args.window:
        with open(args.window) as fh:
            line = next(ln for ln in fh if ln.strip())
        return LatticeWindow.from_line(line, K)
    if args.core is None:
        raise UsageError("give --core or --window")
    return waves.WaveProfile(tuple(_int_list(args.core)), K).window(pad=args.pad)


def _add_window_options(p: argparse.ArgumentParser, pad: int) -> None:
    p.add_argument("--core", help="wave core values, e.g. '3,4'")
    p.add_argument("--window", metavar="FILE", help="window line: left right cells...")
    p.add_argument("--pad", type=int, default=pad, help="tail cells added around --core")


# -- subcommands -----------------------------------------------------------

def cmd_validate(args, out) -> int:
    if args.file:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        try:
            loads_reaction(text)
        except (NotBistable, InvalidParams) as exc:
            out.write(f"FAIL {exc}\n")
            return EXIT_NEGATIVE
    else:
        try:
            f = _reaction(args)
        except (NotBistable, InvalidParams) as exc:
            out.write(f"FAIL {exc}\n")
            return EXIT_NEGATIVE
        if args.print:
            out.write(dumps_reaction(f))
    out.write("PASS\n")
    return EXIT_OK


def cmd_construct(args, out) -> int:
    f = _reaction(args)
    build = waves.construct_left_tws if args.side == "left" else waves.construct_right_tws
    profiles = build(f, args.delta, branch_limit=args.branch_limit, length_limit=args.length_limit)
    if not profiles:
        return EXIT_NONEXISTENT
    out.write(waves.dumps_profiles(profiles if args.all else profiles[:1]))
    return EXIT_OK


def cmd_pinned(args, out) -> int:
    profiles = pinned.search_pinned(_reaction(args), args.delta)
    if not profiles:
        return EXIT_NONEXISTENT
    out.write(waves.dumps_profiles(profiles if args.all else profiles[:1]))
    return EXIT_OK


def cmd_detect(args, out) -> int:
    f = _reaction(args)
    hit = higher_order.detect(_window(args, f.capacity), f, args.delta, m_max=args.m_max, t_max=args.t_max)
    if hit is None:
        return EXIT_NEGATIVE
    out.write(higher_order.dumps_wave(hit))
    return EXIT_OK


_ATLAS_SYMBOL = {
    higher_order.MaximalClass.PINNED: "P",
    higher_order.MaximalClass.HIGHER_ORDER_12: "Z",
    higher_order.MaximalClass.UNKNOWN: "U",
}


def _atlas_symbol(cls, a: int, K: int) -> str:
    if cls is higher_order.MaximalClass.MOVING:
        return "L" if 2 * a < K else "R"
    return _ATLAS_SYMBOL[cls]


def cmd_atlas(args, out) -> int:
    if not args.maximal:
        raise UsageError("atlas currently supports --maximal only")
    K = args.K
    if K is None:
        raise UsageError("atlas needs --K")
    a_values = list(range(2, K - 1))
    classify = higher_order.characterize_generic if args.generic else higher_order.characterize_maximal
    grid = {(a, d): classify(a, K, d) for a in a_values for d in range(1, args.delta_max + 1)}
    width = max(2, len(str(args.delta_max)))
    out.write(f"K={K} ({'search' if args.generic else 'case table'})\n")
    out.write(" " * (width + 3) + " ".join(f"{a:>2}" for a in a_values) + "\n")
    for d in range(args.delta_max, 0, -1):
        cells = " ".join(f"{_atlas_symbol(grid[a, d], a, K):>2}" for a in a_values)
        out.write(f"d={d:<{width}} {cells}\n")
    if args.check:
        other = higher_order.characterize_maximal if args.generic else higher_order.characterize_generic
        bad = [(a, d) for (a, d), cls in grid.items() if other(a, K, d) is not cls]
        for a, d in bad:
            out.write(f"disagreement at a={a} delta={d}\n")
        return EXIT_NEGATIVE if bad else EXIT_OK
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.K is None or args.a is None or args.delta is None or not args.lam:
        raise UsageError("sweep needs --K, --a, --delta and --lambda")
    cfg = simulate.SimConfig(
        length=args.length, steps=args.steps, transient=args.transient,
        seed=args.seed, m_max=args.m_max, replicates=args.replicates,
    )
    a_range, d_range = _int_range(args.a), _int_range(args.delta)
    lambdas = [float(x) for x in args.lam]
    records = simulate.sweep(args.K, a_range, d_range, lambdas, cfg, jobs=args.jobs)
    meta = {"K": args.K, "a": args.a, "delta": args.delta, "lambda": " ".join(args.lam)}
    meta.update(cfg.metadata())
    if args.out:
        simulate.write_sweep(args.out, records, meta)
    else:
        out.write(simulate.records_to_csv(records))
    if args.summary:
        for (a, d, lam), cell in sorted(simulate.aggregate(records).items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1])):
            g = "" if cell.mean_gamma is None else f" gamma={float(cell.mean_gamma):.3f}"
            (sys.stderr if not args.out else out).write(
                f"lambda={lam} a={a} delta={d} {cell.modal.value}{g} unclassified={cell.unclassified_fraction:.2f}\n"
            )
    return EXIT_OK


def cmd_render(args, out) -> int:
    f = _reaction(args)
    grid = simulate.spacetime(_window(args, f.capacity), f, args.delta, args.steps)
    out.write(simulate.render_text(grid, f.capacity))
    if args.pgm:
        with open(args.pgm, "w") as fh:
            fh.write(simulate.render_pgm(grid, f.capacity))
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rdca", description="Bistable reaction-diffusion cellular automata.")
    parser.add_argument("--config", metavar="FILE", help="flat key=value option file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a reaction table for bistability")
    p.add_argument("file", nargs="?")
    _add_reaction_options(p)
    p.add_argument("--print", action="store_true", help="also print the generated table")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("construct", help="build moving fronts")
    _add_reaction_options(p)
    p.add_argument("--delta", type=int, required=False)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--all", action="store_true")
    p.add_argument("--branch-limit", type=int, default=10000)
    p.add_argument("--length-limit", type=int, default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pinned", help="enumerate pinned fronts")
    _add_reaction_options(p)
    p.add_argument("--delta", type=int)
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_pinned)

    p = sub.add_parser("detect", help="find (c, m) shift-periodicity of an orbit")
    _add_reaction_options(p)
    p.add_argument("--delta", type=int)
    _add_window_options(p, pad=250)
    p.add_argument("--m-max", type=int, default=60)
    p.add_argument("--t-max", type=int, default=400)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("atlas", help="(a, delta) grid for the maximal reaction")
    p.add_argument("--maximal", action="store_true")
    p.add_argument("--K", type=int)
    p.add_argument("--delta-max", type=int, default=10)
    p.add_argument("--generic", action="store_true", help="use the searchers instead of the case table")
    p.add_argument("--check", action="store_true", help="compare case table and searchers")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("sweep", help="Monte-Carlo classification sweep (CSV)")
    p.add_argument("--K", type=int)
    p.add_argument("--a", help="range, e.g. 2:10")
    p.add_argument("--delta", help="range, e.g. 1:10")
    p.add_argument("--lambda", dest="lam", nargs="+")
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--transient", type=int, default=40)
    p.add_argument("--length", type=int, default=200)
    p.add_argument("--m-max", type=int, default=20)
    p.add_argument("--seed", type=int, default=int(os.environ.get("RDCA_SEED", simulate.DEFAULT_SEED)))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="spacetime diagram as text (and PGM)")
    _add_reaction_options(p)
    p.add_argument("--delta", type=int)
    _add_window_options(p, pad=20)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--pgm", metavar="FILE")
    p.set_defaults(func=cmd_render)
    return parser


def read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(parser: argparse.ArgumentParser, command: str, config: dict[str, str]) -> None:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices[command]
    defaults = {}
    for action in sub._actions:
        keys = {action.dest} | {opt.lstrip("-").replace("-", "_") for opt in action.option_strings}
        key = next((k for k in keys if k in config), None)
        if key is None:
            continue
        raw = config[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            defaults[action.dest] = raw.split()
        else:
            defaults[action.dest] = action.type(raw) if action.type else raw
    sub.set_defaults(**defaults)


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        pre, _ = parser.parse_known_args(argv)
        if pre.config:
            _apply_config(parser, pre.command, read_config(pre.config))
        args = parser.parse_args(argv)
        if getattr(args, "delta", 0) is None and args.command in ("construct", "pinned", "detect", "render"):
            raise UsageError(f"{args.command} needs --delta")
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"rdca: {exc}\n")
        return EXIT_IO
    except WindowTooSmall as exc:
        sys.stderr.write(f"rdca: {exc}\n")
        return EXIT_LIMIT
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"rdca: {exc}\n")
        return EXIT_IO
    except SearchLimitExceeded as exc:
        sys.stderr.write(f"rdca: {exc}\n")
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
