"""Command-line runner for the named scenarios.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .demon import write_csv
from .report import ScenarioReport, dumps
from .scenarios import SCENARIOS, run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qmeasure",
        description="Run a reproducible measurement/trace/erasure/entropy scenario.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("name", nargs="?", choices=SCENARIOS, metavar="SCENARIO",
                   help=f"scenario name, one of: {', '.join(SCENARIOS)}")
    p.add_argument("--scenario", choices=SCENARIOS, help="scenario name (alternative to the positional)")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (default 0)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")

    g = p.add_argument_group("erasure / sweeps")
    g.add_argument("--dim", type=int, help="erasure: qudit dimension (default 3)")
    g.add_argument("--trials", type=int, help="erasure: seeded sampling trials (default 10000)")
    g.add_argument("--samples", type=int, help="random sweep size")

    g = p.add_argument_group("conservation-demo")
    g.add_argument("--e0", help="ground level energy, exact rational (default 0)")
    g.add_argument("--e1", help="excited level energy, exact rational (default 1)")

    g = p.add_argument_group("demon")
    g.add_argument("--config", help="JSON document of demon config fields; other flags override it")
    g.add_argument("--molecules", type=int, help="number of molecules (default 2000)")
    g.add_argument("--steps", type=int, help="time steps (default 10000)")
    g.add_argument("--temperature", type=float, help="initial temperature, K (default 300)")
    g.add_argument("--box-length", type=float, help="chamber length L, m (default 1e-6)")
    g.add_argument("--memory-bits", type=int, help="demon memory capacity, bits (default 1024)")
    g.add_argument("--threshold", type=float,
                   help="fast/slow speed threshold, m/s; 'inf' disables the demon "
                        "(default: thermal speed sqrt(k_B T / m))")
    g.add_argument("--no-kicks", action="store_true", help="demon: disable hbar/L measurement kicks")
    g.add_argument("--csv", help="demon: also write temperature/entropy columns to this CSV file")
    return p


_PARAM_FLAGS = ("dim", "trials", "samples", "e0", "e1", "molecules", "steps", "temperature",
                "box_length", "memory_bits", "threshold")


def render_text(report: ScenarioReport) -> str:
    rows = [(c.name, "PASS" if c.passed else "FAIL", _fmt(c.value), _fmt(c.tolerance)) for c in report.checks]
    head = ("check", "status", "value", "tolerance")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
    line = "  ".join("{:<%d}" % w for w in widths)
    out = [f"scenario: {report.scenario}   seed: {report.seed}   "
           f"result: {'PASS' if report.passed else 'FAIL'}", "", line.format(*head),
           line.format(*("-" * w for w in widths))]
    out += [line.format(*r) for r in rows]
    return "\n".join(out) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.name and args.scenario and args.name != args.scenario:
        parser.error("conflicting scenario names")
    name = args.scenario or args.name
    if name is None:
        parser.error("a scenario name is required")
    params = {k: getattr(args, k) for k in _PARAM_FLAGS if getattr(args, k) is not None}
    if args.no_kicks:
        params["kicks"] = False
    seed = args.seed
    if args.config:
        if name != "demon":
            parser.error("--config applies to the demon scenario only")
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config: {exc}")
        if not isinstance(doc, dict):
            parser.error("config document must be a JSON object")
        doc_seed = doc.pop("seed", None)
        if seed is None and doc_seed is not None:
            seed = doc_seed
        params["config"] = doc
    seed = 0 if seed is None else seed
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        parser.error("seed must be an unsigned 64-bit integer")
    try:
        report = run_scenario(name, params, seed)
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))
    if name == "demon" and args.csv:
        write_csv(report.results["series"], args.csv)
    text = dumps(report.to_dict()) if args.format == "json" else render_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
