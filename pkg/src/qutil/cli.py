"""Command-line entry point: ``qutil sweep | heatmap | verify | arch``.

Exit status: 0 success, 1 usage or validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError, QutilError
from .generator import parse_ratio
from .sweep import REFERENCE_DEPTHS, REFERENCE_LAYOUTS, REFERENCE_LEVELS, REFERENCE_QUBITS, REFERENCE_RATIOS

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _ratio_list(text: str) -> tuple[tuple[int, int], ...]:
    try:
        return tuple(parse_ratio(x.strip()) for x in text.split(",") if x.strip())
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qutil", description="Per-qubit utilization of transpiled synthetic circuits.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress logging")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="expand a parameter grid, transpile every run, write results",
                       description="Grid flags default to the 108-group reference grid.")
    s.add_argument("--arch", type=_str_list, default=("falcon-r4",),
                   help="architecture refs, comma separated (falcon-r4, line:N, ring:N, grid:WxH, heavy-hex:D, file.json)")
    s.add_argument("--qubits", type=_int_list, default=REFERENCE_QUBITS)
    s.add_argument("--depths", type=_int_list, default=REFERENCE_DEPTHS)
    s.add_argument("--ratios", type=_ratio_list, default=REFERENCE_RATIOS, help="e.g. 4:1,1:1,1:4")
    s.add_argument("--opt-levels", type=_int_list, default=REFERENCE_LEVELS)
    s.add_argument("--layouts", type=_str_list, default=REFERENCE_LAYOUTS, help="subset of trivial,dense,sabre")
    s.add_argument("--samples", type=int, help="runs per group (mg*mt); alone it means mg=samples, mt=1")
    s.add_argument("--mg", type=int, help="generation-seed multiplicity")
    s.add_argument("--mt", type=int, help="transpilation-seed multiplicity")
    s.add_argument("--seed", type=int, default=0, help="global seed")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", type=Path, required=True, help="output directory")
    s.add_argument("--no-trivial-first", action="store_true", help="skip the trivial-layout attempt at O<=1")
    s.add_argument("--no-vf2", action="store_true", help="skip the perfect-layout (VF2) search")
    s.add_argument("--no-trivial-seed", action="store_true",
                   help="at O<=1 do not seed a SABRE layout trial with the trivial layout")
    s.add_argument("--layout-trials", type=int, default=None)
    s.add_argument("--layout-iterations", type=int, default=None)
    s.add_argument("--extended-set-size", type=int, default=None)
    s.add_argument("--extended-set-weight", type=float, default=None)
    s.add_argument("--decay-delta", type=float, default=None)
    s.add_argument("--decay-reset", type=int, default=None)

    h = sub.add_parser("heatmap", help="render one group of a utilization CSV as SVG")
    h.add_argument("--input", type=Path, default=Path("results"), help="results directory or utilization.csv")
    h.add_argument("--filter", required=True, help="q=..,d=..,r=..,O=..,L=.. (optionally arch=..)")
    h.add_argument("--arch", default=None, help="architecture ref (defaults to the group's arch)")
    h.add_argument("--out", type=Path, default=None, help="SVG path (default: derived from the filter)")
    h.add_argument("--force-layout", action="store_true", help="spring layout for maps without coordinates")

    v = sub.add_parser("verify", help="unitary-equivalence suite over random small circuits")
    v.add_argument("--width", type=int, default=5, help="maximum circuit width (<= 8)")
    v.add_argument("--circuits", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)

    a = sub.add_parser("arch", help="describe an architecture, optionally draw it")
    a.add_argument("ref", nargs="?", default="falcon-r4")
    a.add_argument("--json", action="store_true", help="print the preset JSON document")
    a.add_argument("--svg", type=Path, default=None, help="draw the coupling map to this path")
    a.add_argument("--force-layout", action="store_true")
    return p


def _sabre_options(args):
    from dataclasses import replace

    from .transpiler import DEFAULT_SABRE

    changes = {
        name: getattr(args, name)
        for name in ("layout_trials", "layout_iterations", "extended_set_size",
                     "extended_set_weight", "decay_delta", "decay_reset")
        if getattr(args, name) is not None
    }
    return replace(DEFAULT_SABRE, **changes)


def _cmd_sweep(args) -> int:
    from .report import write_outputs
    from .sweep import SweepConfig, run_sweep

    mg, mt = args.mg, args.mt
    if mg is None and mt is None:
        if args.samples is None:
            raise UsageError("sweep needs --samples or --mg/--mt")
        mg, mt = args.samples, 1
    else:
        mg = mg if mg is not None else 1
        mt = mt if mt is not None else 1
        if args.samples is not None and args.samples != mg * mt:
            raise UsageError(f"--samples {args.samples} disagrees with --mg*--mt = {mg * mt}")
    cfg = SweepConfig(
        archs=args.arch,
        qubits=args.qubits,
        depths=args.depths,
        ratios=args.ratios,
        levels=args.opt_levels,
        layouts=args.layouts,
        mg=mg,
        mt=mt,
        global_seed=args.seed,
        trivial_first=not args.no_trivial_first,
        vf2=not args.no_vf2,
        seed_trivial_trial=not args.no_trivial_seed,
        sabre=_sabre_options(args),
    )
    cfg.validate()
    outcome = run_sweep(cfg, workers=args.workers)
    paths = write_outputs(outcome, args.out)
    n = outcome.manifest["evaluations"]
    print(f"{n} evaluations, {len(outcome.failures)} failed, "
          f"{outcome.manifest['elapsed_seconds']:.1f}s -> {paths['utilization']}")
    return EXIT_RUNTIME if outcome.failures else EXIT_OK


def _cmd_heatmap(args) -> int:
    from .architecture import load_architecture
    from .report import HeatmapSpec, parse_filter, read_csv, render_heatmap

    src = args.input / "utilization.csv" if args.input.is_dir() else args.input
    table = read_csv(src)
    spec = HeatmapSpec(parse_filter(args.filter))
    key = spec.resolve(table)
    arch = load_architecture(args.arch or key.arch)
    out = args.out or Path(
        f"heatmap_{key.arch}_q{key.q}_d{key.d}_r{key.r[0]}-{key.r[1]}_O{key.O}_{key.L}.svg".replace(":", "-")
    )
    render_heatmap(table, spec, arch, out, force=args.force_layout)
    print(out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verifier import MAX_UNITARY_WIDTH, run_suite

    if not 1 <= args.width <= MAX_UNITARY_WIDTH:
        raise UsageError(f"--width must be between 1 and {MAX_UNITARY_WIDTH}")
    cases = run_suite(circuits=args.circuits, max_width=args.width, seed=args.seed, tol=args.tol)
    bad = [c for c in cases if not c.ok]
    worst = max((c.deviation for c in cases), default=0.0)
    print(f"{len(cases) - len(bad)}/{len(cases)} transpilations equivalent (worst deviation {worst:.3e})")
    for c in bad[:20]:
        print(f"  FAIL {c.arch} q={c.q} d={c.d} r={c.r[0]}:{c.r[1]} O={c.O} L={c.L} dev={c.deviation:.3e}")
    return EXIT_RUNTIME if bad else EXIT_OK


def _cmd_arch(args) -> int:
    from .architecture import load_architecture
    from .report import render_architecture

    arch = load_architecture(args.ref)
    cm = arch.coupling
    if args.json:
        print(json.dumps(arch.to_json(), indent=2))
    else:
        print(f"name:   {arch.name}")
        print(f"qubits: {arch.n}")
        print(f"edges:  {len(cm.edges)}  {' '.join(f'{a}-{b}' for a, b in cm.edges)}")
        print(f"basis:  {', '.join(arch.basis.kinds)}")
        print(f"leaves: {cm.leaves()}")
        print(f"center: {cm.center()}")
    if args.svg:
        render_architecture(arch, args.svg, force=args.force_layout)
        print(args.svg)
    return EXIT_OK


COMMANDS = {"sweep": _cmd_sweep, "heatmap": _cmd_heatmap, "verify": _cmd_verify, "arch": _cmd_arch}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as exc:
        print(f"qutil {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QutilError, OSError) as exc:
        print(f"qutil {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
