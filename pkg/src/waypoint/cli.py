"""Command-line entry point.

Subcommands: train, locate, route, simulate, evaluate, compare, serve.
Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error.
Identical argv plus identical input files produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import WaypointError
from .localization import MatcherConfig, locate
from .navgraph import load_graph, shortest_path
from .payloads import estimate_payload, route_payload
from .propagation import PropagationParams
from .radiomap import (
    DEFAULT_FLOOR_DBM,
    ApRegistry,
    build_radio_map,
    load_radio_map,
    radio_map_document,
    read_scan_log,
    read_single_scan,
    save_radio_map,
)
from .simulator import (
    EvalSeeds,
    compare_methods,
    default_scenario,
    evaluate_localization,
    load_scenario,
    random_test_points,
    train_scenario_map,
)

log = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_BIND = "127.0.0.1:8000"


def _dump(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True)


def _matcher_from_args(args: argparse.Namespace) -> MatcherConfig:
    return MatcherConfig(
        k=args.k,
        missing_dbm=args.missing_dbm,
        weighting=args.weighting,
        floor_dbm=args.floor_dbm,
    )


def _add_matcher_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, default=3, help="neighbor count (default 3)")
    parser.add_argument("--floor-dbm", type=float, default=DEFAULT_FLOOR_DBM,
                        help="reliability floor in dBm (default %(default)s)")
    parser.add_argument("--missing-dbm", type=float, default=-100.0,
                        help="substitute level for absent access points (default %(default)s)")
    parser.add_argument("--weighting", choices=("uniform", "inverse-distance"),
                        default="inverse-distance", help="neighbor weighting (default %(default)s)")


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default text)")


def _load_scenario_arg(args: argparse.Namespace):
    if args.scenario:
        with open(args.scenario, encoding="utf-8") as fh:
            return load_scenario(fh)
    return default_scenario(seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waypoint",
        description="Indoor positioning: fingerprint training and matching, "
                    "building-graph routing, propagation simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="build a radio map from a scan-log CSV")
    p.add_argument("--scans", required=True, help="scan-log CSV path")
    p.add_argument("--out", help="radio-map JSON output path (stdout if omitted)")
    p.add_argument("--floor-dbm", type=float, default=DEFAULT_FLOOR_DBM)
    _add_format_flag(p)

    p = sub.add_parser("locate", help="match one scan against a radio map")
    p.add_argument("--map", required=True, help="radio-map JSON path")
    p.add_argument("--scans", required=True, help="scan CSV path (one online scan)")
    _add_matcher_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("route", help="shortest path between two graph nodes")
    p.add_argument("--graph", required=True, help="graph JSON path")
    p.add_argument("--from", dest="from_id", required=True, help="source node id")
    p.add_argument("--to", dest="to_id", required=True, help="destination node id")
    _add_format_flag(p)

    p = sub.add_parser("simulate", help="build a radio map from a simulated scenario")
    p.add_argument("--scenario", help="scenario JSON path (default: built-in scenario)")
    p.add_argument("--out", help="radio-map JSON output path (stdout if omitted)")
    p.add_argument("--floor-dbm", type=float, default=DEFAULT_FLOOR_DBM)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_format_flag(p)

    p = sub.add_parser("evaluate", help="measure fingerprint-localization error on a scenario")
    p.add_argument("--scenario", help="scenario JSON path (default: built-in scenario)")
    p.add_argument("--out", help="write the JSON report here as well")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--points", type=int, default=100, help="number of random test points")
    _add_matcher_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("compare", help="fingerprinting vs propagation-based multilateration")
    p.add_argument("--scenario", help="scenario JSON path (default: built-in scenario)")
    p.add_argument("--out", help="write the JSON report here as well")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--assumed-n", type=float, default=2.0,
                   help="path-loss coefficient assumed by multilateration (default 2.0)")
    _add_matcher_flags(p)
    _add_format_flag(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--map", required=True, help="radio-map JSON path")
    p.add_argument("--graph", required=True, help="graph JSON path")
    p.add_argument("--scenario", help="scenario JSON path (enables simulated mode)")
    p.add_argument("--bind", default=DEFAULT_BIND, help="host:port (default %(default)s)")
    _add_matcher_flags(p)
    _add_format_flag(p)

    return parser


def cmd_train(args: argparse.Namespace) -> int:
    result = read_scan_log(args.scans)
    registry = ApRegistry.from_training(result.training)
    radio_map = build_radio_map(result.training, registry, args.floor_dbm)
    summary = {
        "fingerprints": len(radio_map.fingerprints),
        "access_points": len(radio_map.ssids),
        "rejected_rows": len(result.rejected),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            save_radio_map(radio_map, fh)
        summary["out"] = args.out
        if args.format == "json":
            print(_dump(summary))
        else:
            print(f"wrote {summary['fingerprints']} fingerprints "
                  f"({summary['access_points']} access points) to {args.out}")
            if result.rejected:
                print(f"rejected {len(result.rejected)} row(s); see log for details")
    else:
        print(_dump(radio_map_document(radio_map)))
    return 0


def cmd_locate(args: argparse.Namespace) -> int:
    with open(args.map, encoding="utf-8") as fh:
        radio_map = load_radio_map(fh)
    scan = read_single_scan(args.scans)
    estimate = locate(radio_map, scan, _matcher_from_args(args))
    payload = estimate_payload(estimate)
    if args.format == "json":
        print(_dump(payload))
    else:
        point = estimate.point
        print(f"{point.lat} {point.lon} {point.floor}")
        for neighbor in estimate.neighbors:
            print(f"{neighbor.location_id} {neighbor.signal_distance_db}")
    return 0


def cmd_route(args: argparse.Namespace) -> int:
    with open(args.graph, encoding="utf-8") as fh:
        graph = load_graph(fh)
    route = shortest_path(graph, args.from_id, args.to_id)
    if args.format == "json":
        print(_dump(route_payload(route, graph)))
    else:
        print(f"{' '.join(route.nodes)} {route.total_m}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    radio_map = train_scenario_map(scenario, args.floor_dbm)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            save_radio_map(radio_map, fh)
        if args.format == "json":
            print(_dump({"fingerprints": len(radio_map.fingerprints),
                         "access_points": len(radio_map.ssids), "out": args.out}))
        else:
            print(f"wrote {len(radio_map.fingerprints)} fingerprints "
                  f"({len(radio_map.ssids)} access points) to {args.out}")
    else:
        print(_dump(radio_map_document(radio_map)))
    return 0


def _print_report_text(report_dict: dict) -> None:
    print(f"method    {report_dict['method']}")
    print(f"points    {report_dict['count']}")
    print(f"misses    {report_dict['misses']}")
    for key in ("mean_m", "median_m", "p95_m"):
        value = report_dict[key]
        print(f"{key:<9} {'-' if value is None else f'{value:.3f}'}")


def cmd_evaluate(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    radio_map = train_scenario_map(scenario, args.floor_dbm)
    test_points = random_test_points(scenario, args.seed, args.points)
    report = evaluate_localization(
        radio_map, scenario, test_points, _matcher_from_args(args), args.seed
    )
    document = report.to_dict()
    if args.out:
        Path(args.out).write_text(_dump(document) + "\n", encoding="utf-8")
    if args.format == "json":
        print(_dump(document))
    else:
        _print_report_text(document)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = _load_scenario_arg(args)
    assumed = PropagationParams(
        pt_dbm=scenario.transmitters[0].params.pt_dbm,
        gt_db=scenario.transmitters[0].params.gt_db,
        gr_db=scenario.transmitters[0].params.gr_db,
        wavelength_m=scenario.transmitters[0].params.wavelength_m,
        n=args.assumed_n,
    )
    report = compare_methods(
        scenario,
        _matcher_from_args(args),
        assumed,
        EvalSeeds.from_int(args.seed),
        n_points=args.points,
    )
    document = report.to_dict()
    if args.out:
        Path(args.out).write_text(_dump(document) + "\n", encoding="utf-8")
    if args.format == "json":
        print(_dump(document))
    else:
        _print_report_text(document["fingerprint"])
        print()
        _print_report_text(document["multilateration"])
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceState, SnapshotSources, create_app, load_snapshot

    sources = SnapshotSources(
        map_path=Path(args.map),
        graph_path=Path(args.graph),
        scenario_path=Path(args.scenario) if args.scenario else None,
    )
    snapshot = load_snapshot(
        sources.map_path, sources.graph_path, sources.scenario_path,
        _matcher_from_args(args),
    )
    state = ServiceState(snapshot, sources)
    app = create_app(state)

    console_dir = Path(os.environ.get("WAYPOINT_CONSOLE", "frontend/dist"))
    if console_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")
        log.info("serving console from %s", console_dir)

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise WaypointError(f"invalid --bind address {args.bind!r}, expected host:port")
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


_COMMANDS = {
    "train": cmd_train,
    "locate": cmd_locate,
    "route": cmd_route,
    "simulate": cmd_simulate,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "serve": cmd_serve,
}


def run(argv: list[str] | None = None) -> int:
    """Parse argv and dispatch; returns the process exit status."""
    logging.basicConfig(
        level=os.environ.get("WAYPOINT_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except WaypointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
