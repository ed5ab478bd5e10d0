#!/usr/bin/env python3
"""
boolsynth command line: decide, synthesize, classify and reduce.

Exit codes: 0 solvable/confirmed, 1 unsolvable/refuted, 2 usage or I/O
error, 3 inconclusive (search budget exhausted).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ValidationError, field_validator

from .config import Settings, load_settings
from .core import NetType, classify_complexity, complexity_row, compute_bound
from .errors import BoolSynthError, UnsupportedInputError
from .formats import emit_net, emit_ts, marking_labels, parse_instance, parse_net, parse_ts, to_dot
from .polytime import decide_one_bounded, decide_small_g
from .reductions import GadgetVerdict, build_gadget, verify_gadget
from .regions import Verdict, decide_solvable, synthesize
from .semantics import reachability_graph
from .utils import get_logger, set_log_level

logger = get_logger(__name__)

COMMANDS = ("check", "synth", "classify", "gadget", "verify-gadget", "bounds", "reach")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_STYLES = {"ok": "\033[32m", "warning": "\033[33m", "error": "\033[31m", "note": "\033[36m"}


def note(msg: str, level: str = "note") -> None:
    """Write ``boolsynth: <level>: <msg>`` to stderr, colored only on a terminal."""
    line = f"boolsynth: {level}: {msg}"
    if sys.stderr.isatty():
        line = f"{_STYLES[level]}{line}\033[0m"
    print(line, file=sys.stderr)


# ============================================================================
# Run configuration
# ============================================================================

class RunConfig(BaseModel):
    command: str
    type_spec: Optional[str] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    dot: Optional[Path] = None
    g: Optional[int] = None
    family: Optional[str] = None
    variant: Optional[str] = None
    settings: Settings

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command '{value}'")
        return value

    @field_validator("type_spec")
    @classmethod
    def _valid_type(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            NetType.parse(value)
        return value

    @field_validator("g")
    @classmethod
    def _natural(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 0:
            raise ValueError("g must be a natural number")
        return value

    @property
    def net_type(self) -> Optional[NetType]:
        return NetType.parse(self.type_spec) if self.type_spec else None

    def require(self, *fields: str) -> None:
        missing = [f for f in fields if getattr(self, f) is None]
        if missing:
            flags = ", ".join("--type" if f == "type_spec" else f"--{f}" for f in missing)
            raise BoolSynthError(f"'{self.command}' needs {flags}")


def _bound(text: str) -> Optional[int]:
    if text.lower() in ("unbounded", "inf", "none"):
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"g must be a natural number or 'unbounded', got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="type_spec", help="Boolean type of nets, e.g. nop,inp,free")
    common.add_argument("--input", type=Path, help="Input file (TS, net or instance by command)")
    common.add_argument("--output", type=Path,
                        help="Output file (default: stdout); check writes the net only when this is given")
    common.add_argument("--dot", type=Path, help="Also write a DOT rendering here")
    common.add_argument("--g", type=_bound, help="Bound g (natural number or 'unbounded')")
    common.add_argument("--family", help="Reduction family T1..T7")
    common.add_argument("--variant", choices=("set", "res"), help="T4 variant without an explicit --type")
    common.add_argument("--budget", type=int, default=None, help="Search nodes per atom (default: 10^7)")
    common.add_argument("--cap", type=int, default=None, help="Reachability cap (default: 2^20)")
    common.add_argument("--config", help="YAML settings file (default: $BOOLSYNTH_CONFIG)")
    common.add_argument("--verbose", action="store_true", default=None, help="Debug logging")
    common.add_argument("--progress", action="store_true", default=None, help="Progress bar over atoms")

    parser = argparse.ArgumentParser(prog="boolsynth", description="Boolean Petri net synthesis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "decide τ-solvability; writes the net only with --output",
        "synth": "synthesize a τ-net whose reachability graph is the input, always emitting it",
        "classify": "complexity of τ-synthesis for g-bounded inputs",
        "gadget": "emit the reduction gadget A^τ_φ of an instance",
        "verify-gadget": "cross-check gadget solvability against the 3SAT oracle",
        "bounds": "bound of a transition system and the matching classification",
        "reach": "reachability graph of a net",
    }
    for command in COMMANDS:
        sub.add_parser(command, parents=[common], help=helps[command], description=helps[command],
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    settings = load_settings(args.config, {"budget": args.budget, "cap": args.cap,
                                           "debug": args.verbose, "progress": args.progress})
    return RunConfig(command=args.command, type_spec=args.type_spec, input=args.input, output=args.output,
                     dot=args.dot, g=args.g, family=args.family, variant=args.variant, settings=settings)


# ============================================================================
# Helper Functions
# ============================================================================

def _read(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: Optional[Path], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    note(f"Wrote {path}", "ok")


def _verdict_code(verdict: Verdict) -> int:
    return {Verdict.SOLVABLE: EXIT_OK, Verdict.UNSOLVABLE: EXIT_NEGATIVE,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


# ============================================================================
# Commands
# ============================================================================

def cmd_check(config: RunConfig, always_emit: bool = False) -> int:
    config.require("type_spec", "input")
    ts = parse_ts(_read(config.input))
    tau = config.net_type
    if config.dot:
        _write(config.dot, to_dot(ts))
    decision = decide_solvable(ts, tau, budget=config.settings.budget, progress=config.settings.progress)
    if decision.verdict == Verdict.SOLVABLE:
        note(f"{ts.name} is {tau}-solvable ({len(decision.admissible.regions)} regions)", "ok")
        if config.output or always_emit:
            _write(config.output, emit_net(synthesize(ts, tau, decision.admissible)))
    elif decision.verdict == Verdict.UNSOLVABLE:
        note(f"{ts.name} is not {tau}-solvable: atom {decision.atom} has no solving region", "error")
    else:
        note(f"Inconclusive: budget of {config.settings.budget} nodes exhausted on atom {decision.atom}", "warning")
    print(decision.verdict)
    return _verdict_code(decision.verdict)


def cmd_classify(config: RunConfig) -> int:
    config.require("type_spec")
    tau = config.net_type
    result = classify_complexity(tau, config.g)
    row = complexity_row(tau)
    if row is not None:
        logger.debug(f"{tau} falls in row {row.row} (NP from g={row.threshold})")
    print(result)
    return EXIT_OK


def cmd_bounds(config: RunConfig) -> int:
    config.require("input")
    ts = parse_ts(_read(config.input))
    g = compute_bound(ts)
    print(f"bound {g}")
    tau = config.net_type
    if tau is None:
        return EXIT_OK
    print(f"class {classify_complexity(tau, g)}")
    try:
        decision = decide_small_g(ts, tau, g)
    except UnsupportedInputError as e:
        if g > 1:
            logger.debug(f"No small-bound decider applies: {e}")
            return EXIT_OK
        try:
            decision = decide_one_bounded(ts, tau)
        except UnsupportedInputError as e2:
            logger.debug(f"No polynomial decider applies: {e2}")
            return EXIT_OK
    print(decision.verdict)
    if decision.atom is not None:
        note(f"atom {decision.atom} has no solving region", "error")
    return _verdict_code(decision.verdict)


def _instance(config: RunConfig):
    config.require("family", "input")
    return parse_instance(_read(config.input))


def cmd_gadget(config: RunConfig) -> int:
    phi = _instance(config)
    gadget = build_gadget(config.family, phi, config.net_type, config.variant)
    note(f"{gadget.family} for {gadget.net_type}: {len(gadget.ts.states)} states, "
         f"{len(gadget.ts.events)} events, designated atom {gadget.designated_atom}", "ok")
    _write(config.output, emit_ts(gadget.ts))
    if config.dot:
        _write(config.dot, to_dot(gadget.ts))
    return EXIT_OK


def cmd_verify_gadget(config: RunConfig) -> int:
    phi = _instance(config)
    note(f"Verifying {config.family} on {len(phi.clauses)} clauses")
    result = verify_gadget(config.family, phi, budget=config.settings.budget, tau=config.net_type,
                           variant=config.variant, progress=config.settings.progress)
    print(result.verdict)
    return {GadgetVerdict.CONFIRMED_POSITIVE: EXIT_OK, GadgetVerdict.CONFIRMED_NEGATIVE: EXIT_OK,
            GadgetVerdict.REFUTED: EXIT_NEGATIVE, GadgetVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[result.verdict]


def cmd_reach(config: RunConfig) -> int:
    config.require("input")
    net = parse_net(_read(config.input))
    graph = reachability_graph(net, cap=config.settings.cap)
    note(f"{len(graph.ts.states)} reachable markings, {len(graph.ts.arcs)} arcs", "ok")
    _write(config.output, emit_ts(graph.ts))
    if config.dot:
        _write(config.dot, to_dot(graph.ts, marking_labels(graph.markings)))
    return EXIT_OK


HANDLERS = {
    "check": cmd_check,
    "synth": lambda config: cmd_check(config, always_emit=True),
    "classify": cmd_classify,
    "gadget": cmd_gadget,
    "verify-gadget": cmd_verify_gadget,
    "bounds": cmd_bounds,
    "reach": cmd_reach,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        if config.settings.debug:
            set_log_level(logging.DEBUG)
        return HANDLERS[config.command](config)
    except (BoolSynthError, ValidationError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        note(str(e), "error")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
