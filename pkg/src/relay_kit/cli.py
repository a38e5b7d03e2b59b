# relay-kit/src/relay_kit/cli.py

"""
The `relay-kit` command line.

Every command is a pure function of the network file's bytes, the flags and
the seed: stdout is byte-identical across runs, logs go to stderr, and wall
time only appears in the optional `--report` file.

Exit codes: 0 success, 1 usage, 2 validation or precondition failure,
3 certificate failure.
"""

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from .contracts.config import RelayKitSettings, load_settings
from .contracts.errors import CertificateError, PreconditionError, RelayKitError
from .schemas.context import AnalysisContext
from .schemas.network import Network
from .schemas.results import RunReport
from .toolkit.af import default_config
from .toolkit.capacity import (
    activation_probability,
    activation_probability_exact,
    ergodic_capacity,
    mux_gain_estimate,
)
from .toolkit.certify import rank_gain_link, verify_certificate
from .toolkit.mincut import (
    min_vertex_cut,
    multiaccess_region,
    multicast_gains,
    region_contains,
)
from .toolkit.network import is_layered, load_network, longest_simple_path
from .toolkit.observability import configure_logging, get_logger
from .utils.fingerprint import network_hash
from .utils.serialization import safe_serialize
from .utils.templating import render_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CERTIFICATE = 3

SIMULATE_CSV_HEADER = ["p_db", "mean_bits", "stderr", "samples", "mode", "time_slots", "slope"]
ACTIVATION_CSV_HEADER = ["p_db", "empirical", "exact"]
CSV_COMMANDS = {"simulate", "activation"}


class UsageError(Exception):
    """A flag combination the command does not accept."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def db_to_linear(p_db: float) -> float:
    return 10.0 ** (p_db / 10.0)


# ==============================================================================
# SECTION 1: COMMANDS
# Each returns (inputs, outputs) for the RunReport.
# ==============================================================================


def cmd_mux(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    # Max-flow min-cut: the cut capacity is the flow value nu.
    cut = min_vertex_cut(net)
    outputs = {
        "m": cut.capacity,
        "cut": list(cut.members),
        "capacity": cut.capacity,
        "nu": cut.capacity,
        "layered": is_layered(net),
    }
    return {}, outputs


def cmd_simulate(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    if args.samples < 1:
        raise PreconditionError("--samples must be at least 1.")
    p_dbs = list(args.snr_db)
    powers = [db_to_linear(p) for p in p_dbs]
    if any(p <= 2 for p in powers):
        raise PreconditionError("Every --snr-db value must exceed 10*log10(2) dB.")
    cfg = default_config(
        net, powers[0], time_slots=args.time_slots, max_path_nodes=settings.max_path_nodes
    )

    slope = endpoint_slope = None
    if len(powers) >= 2:
        estimate = mux_gain_estimate(
            net, powers, args.samples, mode=args.mode, seed=args.seed, cfg=cfg,
            max_path_nodes=settings.max_path_nodes,
        )
        capacities = estimate.capacities
        slope, endpoint_slope = estimate.slope, estimate.endpoint_slope
    else:
        capacities = [
            ergodic_capacity(
                net, cfg.at_power(powers[0]), args.samples, mode=args.mode, seed=args.seed,
                max_path_nodes=settings.max_path_nodes,
            )
        ]

    rows = [
        {
            "p_db": p_db,
            "mean_bits": c.mean_bits,
            "stderr": c.stderr,
            "samples": c.samples,
            "mode": c.mode,
            "time_slots": c.time_slots,
            "slope": slope,
        }
        for p_db, c in zip(p_dbs, capacities)
    ]
    inputs = {
        "snr_db": p_dbs,
        "samples": args.samples,
        "seed": args.seed,
        "mode": args.mode,
        "time_slots": cfg.time_slots,
        "single_block": cfg.single_block,
    }
    outputs = {
        "rows": rows,
        "slope": slope,
        "endpoint_slope": endpoint_slope,
        "mode": args.mode,
        "samples": args.samples,
        "time_slots": cfg.time_slots,
        "single_block": cfg.single_block,
    }
    return inputs, outputs


def cmd_certify(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    time_slots = args.time_slots
    if time_slots is None and not is_layered(net):
        time_slots = 4 * longest_simple_path(net, max_nodes=settings.max_path_nodes)
    certificate = verify_certificate(
        net, time_slots=time_slots, strict=False, max_path_nodes=settings.max_path_nodes
    )
    outputs: Dict[str, Any] = certificate.to_report()
    if args.rank_gain:
        link = rank_gain_link(
            net, time_slots=args.time_slots, max_path_nodes=settings.max_path_nodes
        )
        outputs["rank_gain"] = link.model_dump()
    inputs = {"time_slots": time_slots, "realization": certificate.realization.reference()}
    return inputs, outputs


def cmd_region(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    if not net.senders:
        raise PreconditionError("The network file has no 'senders' list.")
    region = multiaccess_region(
        net, net.senders, net.destination, max_senders=settings.max_senders
    )
    outputs: Dict[str, Any] = {
        "senders": list(region.senders),
        "destination": region.destination,
        "constraints": [
            {"members": list(c.members), "bound": c.bound} for c in region.constraints
        ],
        "sum_rate_bound": region.sum_rate_bound,
    }
    inputs: Dict[str, Any] = {}
    if args.rates is not None:
        outputs["rates"] = list(args.rates)
        outputs["contains"] = region_contains(region, args.rates)
        inputs["rates"] = list(args.rates)
    return inputs, outputs


def cmd_multicast(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    if not net.destinations:
        raise PreconditionError("The network file has no 'destinations' list.")
    pairwise = multicast_gains(net, net.destinations)
    outputs = {
        "destinations": list(net.destinations),
        "gain": min(pairwise.values()),
        "pairwise": pairwise,
    }
    return {}, outputs


def cmd_activation(net: Network, args: argparse.Namespace, settings: RelayKitSettings):
    if args.samples < 1:
        raise PreconditionError("--samples must be at least 1.")
    rows = []
    for p_db in args.snr_db:
        power = db_to_linear(p_db)
        if power <= 1:
            raise PreconditionError(f"SNR {p_db} dB is not above 0 dB.")
        rows.append(
            {
                "p_db": p_db,
                "empirical": activation_probability(net, power, args.samples, seed=args.seed),
                "exact": activation_probability_exact(net, power),
            }
        )
    inputs = {"snr_db": list(args.snr_db), "samples": args.samples, "seed": args.seed}
    return inputs, {"rows": rows}


COMMANDS: Dict[str, Callable] = {
    "mux": cmd_mux,
    "simulate": cmd_simulate,
    "certify": cmd_certify,
    "region": cmd_region,
    "multicast": cmd_multicast,
    "activation": cmd_activation,
}


# ==============================================================================
# SECTION 2: OUTPUT
# ==============================================================================


def _format_csv(command: str, outputs: Dict[str, Any]) -> str:
    header = SIMULATE_CSV_HEADER if command == "simulate" else ACTIVATION_CSV_HEADER
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in outputs["rows"]:
        writer.writerow(["" if row[key] is None else row[key] for key in header])
    return buffer.getvalue()


def format_output(report: RunReport, fmt: str) -> str:
    if fmt == "csv":
        return _format_csv(report.command, report.outputs)
    if fmt == "text":
        return render_report(report.command, safe_serialize(report.outputs))
    return json.dumps(safe_serialize(report.payload()), sort_keys=True, indent=2) + "\n"


# ==============================================================================
# SECTION 3: PARSER AND ENTRY POINT
# ==============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("network", type=Path, help="Network document (YAML or JSON).")
    common.add_argument("--config", type=Path, default=None, help="Settings YAML file.")
    common.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None
    )
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument(
        "--report", type=Path, default=None, help="Also write the full run report here."
    )

    parser = _ArgumentParser(
        prog="relay-kit",
        description="Multiplexing gain of multi-antenna amplify-and-forward relay networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("mux", parents=[common], help="Minimum vertex cut and multiplexing gain.")

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo ergodic capacity sweep and slope."
    )
    simulate.add_argument("--snr-db", type=float, nargs="+", default=[30.0, 45.0, 60.0])
    simulate.add_argument("--samples", type=int, default=1000)
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--time-slots", type=int, default=None)
    simulate.add_argument("--mode", choices=["white", "colored"], default="white")

    certify = sub.add_parser("certify", parents=[common], help="Exact rank certificate.")
    certify.add_argument("--time-slots", type=int, default=None)
    certify.add_argument(
        "--rank-gain", action="store_true", help="Also fit the certificate's capacity slope."
    )

    region = sub.add_parser(
        "region", parents=[common], help="Multi-access multiplexing gain region."
    )
    region.add_argument("--rates", type=float, nargs="+", default=None)

    sub.add_parser("multicast", parents=[common], help="Multicast multiplexing gain.")

    activation = sub.add_parser(
        "activation", parents=[common], help="Probability that every relay is active."
    )
    activation.add_argument("--snr-db", type=float, nargs="+", default=[20.0, 40.0, 60.0])
    activation.add_argument("--samples", type=int, default=10_000)
    activation.add_argument("--seed", type=int, default=None)
    return parser


def run(args: argparse.Namespace, settings: RelayKitSettings) -> RunReport:
    if args.format == "csv" and args.command not in CSV_COMMANDS:
        raise UsageError(f"--format csv is only available for {sorted(CSV_COMMANDS)}.")
    if getattr(args, "time_slots", None) is not None and args.time_slots < 1:
        raise PreconditionError("--time-slots must be at least 1.")
    if hasattr(args, "seed") and args.seed is None:
        args.seed = settings.default_seed

    net = load_network(args.network)
    context = AnalysisContext(
        command=args.command, network_hash=network_hash(net), seed=getattr(args, "seed", None)
    )
    log = get_logger(context)
    log.info("run.start")

    started = time.perf_counter()
    inputs, outputs = COMMANDS[args.command](net, args, settings)
    wall_time = time.perf_counter() - started

    log.info("run.finish", wall_time=round(wall_time, 6))
    return RunReport(
        command=args.command,
        inputs={"network_hash": context.network_hash, **inputs},
        outputs=outputs,
        wall_time=wall_time,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.config)
    except RelayKitError as e:
        print(f"relay-kit: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    configure_logging(args.log_level or settings.log_level, settings.log_format)

    try:
        report = run(args, settings)
    except UsageError as e:
        print(f"relay-kit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateError as e:
        print(f"relay-kit: certificate failed: {e}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except RelayKitError as e:
        print(f"relay-kit: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    sys.stdout.write(format_output(report, args.format))
    if args.report is not None:
        args.report.write_text(
            json.dumps(safe_serialize(report), sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    if report.command == "certify" and not report.outputs["pass"]:
        return EXIT_CERTIFICATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
