"""Command-line front end.

Exit codes: 0 success/accepted, 2 ran but not accepted (or machine invalid),
1 runtime or I/O error, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Sequence

from .channel import simulate_end_to_end
from .config import load_config
from .errors import SimError, UndefinedTransition
from .moore import build_mlp_machine, is_accepting, load_machine, run, validate
from .receptors import catalog
from .trace import write_trace

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_ACCEPTED = 2
EXIT_USAGE = 64

log = logging.getLogger("mlpsim")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlpsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    machine = sub.add_parser("machine", help="drive the Moore machine directly")
    msub = machine.add_subparsers(dest="machine_command", parser_class=_Parser)
    msub.required = True
    mrun = msub.add_parser("run", help="run a comma-separated symbol sequence from q0")
    mrun.add_argument("symbols", help="e.g. d2,d4,d6,d8")
    mrun.add_argument("--machine", metavar="PATH", help="machine file (default: built-in)")

    sim = sub.add_parser("simulate", help="run an end-to-end session from a config file")
    sim.add_argument("--config", required=True, metavar="PATH")
    sim.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sim.add_argument("--out", metavar="PATH", help="trace file (default: stdout)")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--max-ticks", type=int)

    cat = sub.add_parser("catalog", help="list the receptor catalog")
    cat.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    val = sub.add_parser("validate", help="check a machine file")
    val.add_argument("machine", nargs="?", metavar="PATH", help="default: built-in machine")
    return parser


def cmd_machine_run(args, out) -> int:
    machine = load_machine(args.machine) if args.machine else build_mlp_machine()
    names = [tok.strip() for tok in args.symbols.split(",") if tok.strip()]
    bad = [n for n in names if n not in machine.input_alphabet]
    if bad:
        raise UsageError(f"unknown symbol(s): {', '.join(bad)}")

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "state_before", "symbol", "state_after", "output"])
    state = machine.initial
    try:
        results = run(machine, names)
    except UndefinedTransition as exc:
        results, failure = exc.partial, exc
    else:
        failure = None
    for i, res in enumerate(results):
        writer.writerow([i, state, names[i], res.next_state, res.emitted])
        state = res.next_state
    if failure is not None:
        print(f"error: {failure}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if is_accepting(machine, state) else EXIT_NOT_ACCEPTED


def cmd_simulate(args, out) -> int:
    cfg = load_config(args.config).with_overrides(seed=args.seed, max_ticks=args.max_ticks)
    trace = simulate_end_to_end(
        cfg.stimulus_series(), cfg.thresholds, cfg.channel, cfg.max_ticks, cfg.stages,
        header_extra={"stimulus": cfg.to_dict()["stimulus"]},
    )
    data = write_trace(trace, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        summary_stream = out
    else:
        buffer = getattr(out, "buffer", None)
        if buffer is not None:
            out.flush()
            buffer.write(data)
            buffer.flush()
        else:
            out.write(data.decode("utf-8"))
        summary_stream = sys.stderr
    print(f"ticks={len(trace.rows)} final_state={trace.final_state} "
          f"accepted={'true' if trace.accepted else 'false'}", file=summary_stream)
    return EXIT_OK if trace.accepted else EXIT_NOT_ACCEPTED


def catalog_text(fmt: str = "csv") -> str:
    rows = []
    for spec in catalog():
        rows.append({
            "name": spec.name, "receptor": spec.label, "structure": spec.structure,
            "sensation": spec.sensation, "signals": spec.signals,
            "adaptation": spec.adaptation, "band": spec.band_text(),
        })
    if fmt == "jsonl":
        return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def cmd_catalog(args, out) -> int:
    out.write(catalog_text(args.format))
    return EXIT_OK


def cmd_validate(args, out) -> int:
    machine = load_machine(args.machine) if args.machine else build_mlp_machine()
    diags = validate(machine)
    for d in diags:
        print(d, file=out)
    if not diags:
        print("ok", file=out)
    return EXIT_OK if not diags else EXIT_NOT_ACCEPTED


_COMMANDS = {"simulate": cmd_simulate, "catalog": cmd_catalog, "validate": cmd_validate}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    handler = cmd_machine_run if args.command == "machine" else _COMMANDS[args.command]
    try:
        return handler(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, SimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # keep the exit-code contract total
        log.debug("unexpected failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
