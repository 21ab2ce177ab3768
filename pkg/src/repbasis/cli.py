"""Command-line front end: build traces, verify them, inspect Sidon sets,
and tabulate checkpoint densities as CSV."""

from __future__ import annotations

import argparse
import json
import math
import sys

from .construct import build, trace_dumps, trace_loads
from .errors import RepbasisError
from .repcore import PhiSpec, RepTarget, counting, density_demand
from .sidon import erdos_turan_sidon, greedy_sidon, sidon_for_density
from .verify import verify_trace

STATS_HEADER = "x,count,demand,ratio,ceiling"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repbasis",
        description="Staged additive-basis construction with verified density checkpoints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a trace for a prescribed function")
    p_build.add_argument("--f", required=True, metavar="PATH", help="JSON file with the prescribed function")
    p_build.add_argument("--phi", required=True, help='growth spec: "log2", "ln", "pow:<eps>", "clog:<c>"')
    p_build.add_argument("--stages", required=True, type=int, metavar="L", help="number of extension/densification rounds")
    p_build.add_argument("--out", metavar="PATH", help="write the trace here (default: stdout)")
    p_build.add_argument("--search-cap", type=int, metavar="N", help="abort scans whose x would exceed N")

    p_verify = sub.add_parser("verify", help="run every oracle against a trace file")
    p_verify.add_argument("--trace", required=True, metavar="PATH")
    p_verify.add_argument("--report", metavar="PATH", help="write the full JSON report here")

    p_sidon = sub.add_parser("sidon", help="construct a Sidon set in [1, n]")
    p_sidon.add_argument("--method", choices=("greedy", "erdos-turan", "auto"), default="auto")
    p_sidon.add_argument("--n", required=True, type=int)

    p_stats = sub.add_parser("stats", help="tabulate checkpoint densities as CSV")
    p_stats.add_argument("--trace", required=True, metavar="PATH")
    p_stats.add_argument("--out", metavar="PATH", help="write the CSV here (default: stdout)")

    return parser


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_build(args) -> int:
    with open(args.f, encoding="utf-8") as handle:
        f = RepTarget.from_dict(json.load(handle))
    phi = PhiSpec.parse(args.phi)
    trace = build(f, phi, args.stages, search_cap=args.search_cap)
    _write_text(args.out, trace_dumps(trace))
    return 0


def _cmd_verify(args) -> int:
    with open(args.trace, encoding="utf-8") as handle:
        trace = trace_loads(handle.read())
    report = verify_trace(trace)
    if args.report:
        _write_text(args.report, json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    for line in report.failures():
        print(f"FAIL {line}")
    print("PASS" if report.passed else "FAIL")
    return 0 if report.passed else 1


def _cmd_sidon(args) -> int:
    if args.method == "greedy":
        result = greedy_sidon(args.n)
    elif args.method == "erdos-turan":
        result = erdos_turan_sidon(args.n)
    else:
        result = sidon_for_density(args.n)
    payload = {
        "method": args.method,
        "n": args.n,
        "elements": list(result.elements),
        "size": len(result),
        "threshold": round(math.sqrt(args.n) / 2, 6),
        "density_ok": result.density_ok(),
    }
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def _format_value(value: float) -> str:
    return format(value, ".6f")


def _cmd_stats(args) -> int:
    with open(args.trace, encoding="utf-8") as handle:
        trace = trace_loads(handle.read())
    lines = [STATS_HEADER]
    for _, x, stage_set in trace.checkpoints():
        count = counting(stage_set, -x, x)
        demand = density_demand(x, trace.phi)
        ratio = count / demand
        r = trace.f.max_finite(2 * x)
        ceiling = math.inf if r is None else math.sqrt(2 * r * (4 * x + 1))
        lines.append(
            f"{x},{count},{_format_value(demand)},{_format_value(ratio)},{_format_value(ceiling)}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


_DISPATCH = {
    "build": _cmd_build,
    "verify": _cmd_verify,
    "sidon": _cmd_sidon,
    "stats": _cmd_stats,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except RepbasisError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
