"""Command-line surface: batch routing, sweeps and data-driven snapshots.

Exit codes:
    0  success
    2  configuration error (bad file, bad keys, bad values)
    3  no route exists for the requested query
    4  data error (trajectory file missing/malformed, unknown flight)
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import analysis, graph, routing, scenario
from .config import ConfigError, RunConfig, load_config
from .geo import SPEED_OF_LIGHT
from .link import NodeKind

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NO_ROUTE = 3
EXIT_DATA_ERROR = 4


def _print_route_report(route: routing.Route, g: graph.WeightedDigraph, destination: str) -> None:
    print("route: " + " -> ".join(route.hops))
    print(f"hops: {route.hop_count}   total_delay_s: {route.total_delay:.6f}")
    print(f"{'hop':>3}  {'from':>10}  {'to':>10}  {'dist_km':>10}  "
          f"{'transfer_s':>11}  {'propagation_s':>13}  {'relay_s':>9}")
    for i, (u, v) in enumerate(zip(route.hops[:-1], route.hops[1:]), start=1):
        e = g.find_edge(u, v)
        d_pr = e.distance_m / SPEED_OF_LIGHT
        d_tr = e.base_delay_s - d_pr
        relay = 0.0 if v == destination else e.df_delay_s
        print(f"{i:>3}  {u:>10}  {v:>10}  {e.distance_m / 1000.0:>10.1f}  "
              f"{d_tr:>11.6f}  {d_pr:>13.6f}  {relay:>9.6f}")


def _load_config_or_fail(path: str) -> RunConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG_ERROR) from exc


def _synthetic_scenario(cfg: RunConfig, seed: int | None) -> scenario.Scenario:
    syn = cfg.synthetic if seed is None else replace(cfg.synthetic, seed=seed)
    return scenario.generate_synthetic(syn)


def _snapshot_nodes(cfg: RunConfig, csv_path: str, at: float, tolerance: float):
    try:
        trajectories = scenario.load_flight_csv(csv_path)
    except (OSError, scenario.FlightDataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DATA_ERROR) from exc
    bs = scenario.ground_station("bs", cfg.bs_site, cfg.profiles[NodeKind.GROUND_BS])
    aircraft = scenario.snapshot(trajectories, at, tolerance, cfg.profiles[NodeKind.AIRCRAFT])
    return trajectories, bs, aircraft


def cmd_route(args) -> int:
    cfg = _load_config_or_fail(args.config)
    if args.scenario:
        try:
            scen = scenario.load_scenario(args.scenario)
        except (OSError, scenario.ScenarioFormatError) as exc:
            print(f"data error: {exc}", file=sys.stderr)
            return EXIT_DATA_ERROR
    else:
        scen = _synthetic_scenario(cfg, args.seed)
    source = args.source or scen.source_id
    target = args.target or scen.target_id
    g = graph.build_digraph(scen.nodes, scen.params)
    if source not in g or target not in g:
        print(f"config error: unknown node id {source!r} or {target!r}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if source == target:
        print("config error: source and target must differ", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    route = routing.shortest_path(g, source, target)
    if route is None:
        print(f"no route from {source} to {target}")
        return EXIT_NO_ROUTE
    _print_route_report(route, g, target)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config_or_fail(args.config)
    seed = cfg.seed if args.seed is None else args.seed
    realizations = args.realizations or cfg.realizations
    n_list = [int(x) for x in args.n.split(",")] if args.n else [cfg.synthetic.n_intermediate]
    file_sizes = (
        [float(x) for x in args.file_sizes.split(",")]
        if args.file_sizes
        else [cfg.link.file_size_bits]
    )
    base = replace(cfg.synthetic, seed=seed)
    records = analysis.run_sweep(base, n_list, file_sizes, realizations)

    out_dir = args.out_dir or cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, "sweep.csv")
    analysis.emit_csv(records, out_path)
    print(f"wrote {len(records)} records to {out_path}")

    print(f"{'n':>5}  {'file_bits':>12}  {'scheme':>18}  {'mean_delay_s':>13}  {'routed':>6}")
    for n in n_list:
        for fs in file_sizes:
            for scheme in (routing.SCHEME_SHORTEST_PATH, routing.SCHEME_RELAY_CHAIN,
                           routing.SCHEME_SATELLITE):
                cell = [
                    r.delay_s for r in records
                    if r.n_intermediate == n and r.file_size_bits == fs
                    and r.scheme == scheme and r.delay_s is not None
                ]
                mean = sum(cell) / len(cell) if cell else float("nan")
                print(f"{n:>5}  {fs:>12.0f}  {scheme:>18}  {mean:>13.6f}  {len(cell):>6}")
    return EXIT_OK


def cmd_snapshot_route(args) -> int:
    cfg = _load_config_or_fail(args.config)
    trajectories, bs, aircraft = _snapshot_nodes(cfg, args.csv, args.at, args.tolerance)
    if args.flight not in trajectories:
        print(f"data error: unknown flight {args.flight!r}", file=sys.stderr)
        return EXIT_DATA_ERROR
    if not any(n.id == args.flight for n in aircraft):
        print(f"no route: flight {args.flight} has no sample within "
              f"{args.tolerance} s of t={args.at}")
        return EXIT_NO_ROUTE
    g = graph.build_digraph([bs, *aircraft], cfg.link)
    route = routing.shortest_path(g, bs.id, args.flight)
    if route is None:
        print(f"no route from {bs.id} to {args.flight} at t={args.at}")
        return EXIT_NO_ROUTE
    _print_route_report(route, g, args.flight)
    return EXIT_OK


def _graph_for_export(cfg: RunConfig, args) -> graph.WeightedDigraph:
    if args.csv:
        _, bs, aircraft = _snapshot_nodes(cfg, args.csv, args.at, args.tolerance)
        return graph.build_digraph([bs, *aircraft], cfg.link)
    scen = _synthetic_scenario(cfg, args.seed)
    return graph.build_digraph(scen.nodes, scen.params)


def cmd_graph_export(args) -> int:
    cfg = _load_config_or_fail(args.config)
    g = _graph_for_export(cfg, args)
    if args.out:
        graph.export_edge_list(g, args.out)
        print(f"wrote {g.edge_count()} edges to {args.out}")
    else:
        graph.write_edge_list(g, sys.stdout)
    return EXIT_OK


def cmd_degree(args) -> int:
    cfg = _load_config_or_fail(args.config)
    g = _graph_for_export(cfg, args)
    pairs = graph.degree_distribution(g)
    if args.out:
        analysis.emit_degree_csv(pairs, args.out)
        print(f"wrote degree distribution to {args.out}")
    else:
        print("k,fraction_below")
        for k, frac in pairs:
            print(f"{k},{frac!r}")
    return EXIT_OK


def cmd_scenario_export(args) -> int:
    cfg = _load_config_or_fail(args.config)
    scen = _synthetic_scenario(cfg, args.seed)
    scenario.save_scenario(scen, args.out)
    print(f"wrote {len(scen.nodes)}-node scenario to {args.out}")
    return EXIT_OK


def cmd_travel(args) -> int:
    cfg = _load_config_or_fail(args.config)
    try:
        trajectories = scenario.load_flight_csv(args.csv)
    except (OSError, scenario.FlightDataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    if args.flight not in trajectories:
        print(f"data error: unknown flight {args.flight!r}", file=sys.stderr)
        return EXIT_DATA_ERROR
    bs = scenario.ground_station("bs", cfg.bs_site, cfg.profiles[NodeKind.GROUND_BS])
    report = analysis.travel_analysis(
        trajectories, args.flight, bs, cfg.link, args.step,
        cfg.profiles[NodeKind.AIRCRAFT], tolerance_s=args.tolerance,
    )
    out_dir = args.out_dir or cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    analysis.emit_csv(report.records, os.path.join(out_dir, "travel.csv"))
    if report.hops_cdf is not None:
        analysis.emit_cdf_csv(report.hops_cdf, os.path.join(out_dir, "cdf_hops.csv"))
        analysis.emit_cdf_csv(report.delay_cdf, os.path.join(out_dir, "cdf_delay.csv"))
    print(f"epochs: {len(report.records)}   "
          f"connectivity_fraction: {report.connectivity_fraction:.4f}")
    print(f"wrote travel.csv"
          + (", cdf_hops.csv, cdf_delay.csv" if report.hops_cdf is not None else "")
          + f" to {out_dir}")
    return EXIT_OK


def cmd_corridor(args) -> int:
    corridor = scenario.generate_corridor(
        scenario.CorridorConfig(
            n_flights=args.flights,
            seed=args.seed if args.seed is not None else 0,
            window_s=args.window,
        )
    )
    scenario.write_flight_csv(corridor, args.out)
    n_points = sum(len(v) for v in corridor.values())
    print(f"wrote {len(corridor)} flights / {n_points} samples to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aanetsim",
        description="Minimum-delay routing over integrated ground/air/space networks.",
        epilog="exit codes: 0 success, 2 config error, 3 no route, 4 data error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="TOML run configuration")
        p.add_argument("--seed", type=int, default=None, help="override the configured seed")

    p_route = sub.add_parser("route", help="route source -> target on the synthetic scenario")
    add_common(p_route)
    p_route.add_argument("--source", default=None)
    p_route.add_argument("--target", default=None)
    p_route.add_argument("--scenario", default=None,
                         help="route on a saved scenario JSON instead of generating one")
    p_route.set_defaults(func=cmd_route)

    p_sweep = sub.add_parser("sweep", help="run the scheme-comparison sweep, write sweep.csv")
    add_common(p_sweep)
    p_sweep.add_argument("--n", default=None, help="comma-separated intermediate aircraft counts")
    p_sweep.add_argument("--file-sizes", default=None, help="comma-separated file sizes in bits")
    p_sweep.add_argument("--realizations", type=int, default=None)
    p_sweep.add_argument("--out-dir", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_snap = sub.add_parser("snapshot-route", help="route to a flight at a trajectory timestamp")
    add_common(p_snap)
    p_snap.add_argument("--csv", required=True, help="trajectory CSV path")
    p_snap.add_argument("--flight", required=True, help="target flight id")
    p_snap.add_argument("--at", type=float, required=True, help="epoch timestamp")
    p_snap.add_argument("--tolerance", type=float, default=5.0, help="snapshot window seconds")
    p_snap.set_defaults(func=cmd_snapshot_route)

    p_export = sub.add_parser("graph-export", help="dump the feasibility digraph edge list")
    add_common(p_export)
    p_export.add_argument("--csv", default=None, help="trajectory CSV (snapshot graph)")
    p_export.add_argument("--at", type=float, default=None, help="snapshot timestamp")
    p_export.add_argument("--tolerance", type=float, default=5.0)
    p_export.add_argument("--out", default=None, help="output path (default: stdout)")
    p_export.set_defaults(func=cmd_graph_export)

    p_degree = sub.add_parser("degree", help="cumulative out-degree distribution of the graph")
    add_common(p_degree)
    p_degree.add_argument("--csv", default=None, help="trajectory CSV (snapshot graph)")
    p_degree.add_argument("--at", type=float, default=None)
    p_degree.add_argument("--tolerance", type=float, default=5.0)
    p_degree.add_argument("--out", default=None, help="output path (default: stdout)")
    p_degree.set_defaults(func=cmd_degree)

    p_scen = sub.add_parser("scenario-export", help="write the generated scenario as JSON")
    add_common(p_scen)
    p_scen.add_argument("--out", required=True)
    p_scen.set_defaults(func=cmd_scenario_export)

    p_travel = sub.add_parser("travel", help="route to a flight across its whole travel, write CDFs")
    add_common(p_travel)
    p_travel.add_argument("--csv", required=True, help="trajectory CSV path")
    p_travel.add_argument("--flight", required=True, help="target flight id")
    p_travel.add_argument("--step", type=float, default=60.0, help="epoch step seconds")
    p_travel.add_argument("--tolerance", type=float, default=5.0)
    p_travel.add_argument("--out-dir", default=None)
    p_travel.set_defaults(func=cmd_travel)

    p_corr = sub.add_parser("corridor", help="generate a synthetic trans-Atlantic trajectory CSV")
    p_corr.add_argument("--flights", type=int, default=40)
    p_corr.add_argument("--window", type=float, default=43_200.0, help="departure window seconds")
    p_corr.add_argument("--seed", type=int, default=None)
    p_corr.add_argument("--out", required=True)
    p_corr.set_defaults(func=cmd_corridor)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "csv", None) is not None and getattr(args, "at", None) is None \
            and args.command in ("graph-export", "degree"):
        print("config error: --csv requires --at", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
