"""Experiment sweeps and statistics over scenarios.

Sweeps run the graph-search route and the two analytic baselines across
(node count, file size, realization) combinations. Per-realization seeds are
``base seed + realization index``, so records are independent of execution
order and identical node draws are shared across node counts and file sizes
(common random numbers).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

from .graph import build_digraph
from .link import LinkParams, Node, RadioProfile
from .routing import (
    SCHEME_RELAY_CHAIN,
    SCHEME_SATELLITE,
    SCHEME_SHORTEST_PATH,
    Route,
    SchemeResult,
    scheme_ideal_relay_chain,
    scheme_satellite_only,
    shortest_path,
)
from .scenario import SyntheticConfig, TrajectoryPoint, generate_synthetic, snapshot

SWEEP_CSV_HEADER = (
    "realization",
    "n_intermediate",
    "file_size_bits",
    "scheme",
    "delay_s",
    "hop_count",
    "route",
)


@dataclass(frozen=True)
class SweepRecord:
    """One scheme outcome for one (realization, node count, file size) cell.

    delay_s and hop_count are both None exactly when no route existed.
    """

    realization: int
    n_intermediate: int
    file_size_bits: float
    scheme: str
    delay_s: float | None
    hop_count: int | None
    route: tuple[str, ...] | None = None

    def __post_init__(self):
        if (self.delay_s is None) != (self.hop_count is None):
            raise ValueError("delay_s and hop_count must be absent together")


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF with tied values merged."""

    values: tuple[float, ...]
    fractions: tuple[float, ...]


@dataclass(frozen=True)
class TravelReport:
    """Per-epoch routing outcomes over one flight's travel."""

    records: tuple[SweepRecord, ...]
    connectivity_fraction: float
    hops_cdf: CdfSeries | None
    delay_cdf: CdfSeries | None


def cdf(samples) -> CdfSeries:
    """Empirical cumulative distribution of a non-empty sample list."""
    data = sorted(samples)
    if not data:
        raise ValueError("cdf of an empty sample list")
    n = len(data)
    values: list[float] = []
    fractions: list[float] = []
    for i, v in enumerate(data):
        if i + 1 < n and data[i + 1] == v:
            continue
        values.append(v)
        fractions.append((i + 1) / n)
    return CdfSeries(tuple(values), tuple(fractions))


def _scheme_record(
    realization: int, n: int, file_size: float, result: SchemeResult | None, scheme: str
) -> SweepRecord:
    if result is None:
        return SweepRecord(realization, n, file_size, scheme, None, None)
    return SweepRecord(realization, n, file_size, scheme, result.delay_s, result.hop_count)


def _route_record(
    realization: int, n: int, file_size: float, route: Route | None
) -> SweepRecord:
    if route is None:
        return SweepRecord(realization, n, file_size, SCHEME_SHORTEST_PATH, None, None)
    return SweepRecord(
        realization, n, file_size, SCHEME_SHORTEST_PATH,
        route.total_delay, route.hop_count, route.hops,
    )


def run_sweep(
    base: SyntheticConfig,
    n_list,
    file_sizes,
    realizations: int,
) -> list[SweepRecord]:
    """Route every (node count, file size, realization) cell with all schemes.

    Unreachable targets are recorded with absent delay, not raised. Records
    come back sorted by (n, file size, realization, scheme).
    """
    if realizations < 1:
        raise ValueError("realizations must be at least 1")
    records: list[SweepRecord] = []
    for r in range(realizations):
        seed_r = base.seed + r
        for n in n_list:
            scen = generate_synthetic(replace(base, n_intermediate=n, seed=seed_r))
            src = scen.node_by_id(scen.source_id)
            dst = scen.node_by_id(scen.target_id)
            sat = scen.node_by_id(scen.satellite_ids[0])
            for file_size in file_sizes:
                params = replace(base.link, file_size_bits=file_size)
                g = build_digraph(scen.nodes, params)
                route = shortest_path(g, scen.source_id, scen.target_id)
                records.append(_route_record(r, n, file_size, route))
                chain = scheme_ideal_relay_chain(src, dst, params, base.aircraft_profile)
                records.append(_scheme_record(r, n, file_size, chain, SCHEME_RELAY_CHAIN))
                sat_only = scheme_satellite_only(src, sat, dst, params)
                records.append(_scheme_record(r, n, file_size, sat_only, SCHEME_SATELLITE))
    records.sort(key=lambda rec: (rec.n_intermediate, rec.file_size_bits, rec.realization, rec.scheme))
    return records


def travel_analysis(
    trajectories: dict[str, list[TrajectoryPoint]],
    flight_id: str,
    bs: Node,
    params: LinkParams,
    step_s: float,
    aircraft_profile: RadioProfile,
    tolerance_s: float = 5.0,
    satellites: tuple[Node, ...] = (),
) -> TravelReport:
    """Route from the ground station to one flight across its whole travel.

    Snapshots are taken every step_s seconds over the flight's active
    interval; epochs without a route count against the connectivity fraction
    and stay out of the hop/delay CDFs (reported separately rather than
    distorting the distributions).
    """
    if flight_id not in trajectories:
        raise KeyError(f"unknown flight id {flight_id!r}")
    points = trajectories[flight_id]
    if not points:
        raise KeyError(f"flight {flight_id!r} has no samples")
    t0 = points[0].timestamp
    t1 = points[-1].timestamp

    records: list[SweepRecord] = []
    hops: list[float] = []
    delays: list[float] = []
    routed = 0
    epoch = 0
    t = t0
    while t <= t1:
        aircraft = snapshot(trajectories, t, tolerance_s, aircraft_profile)
        nodes = [bs, *satellites, *aircraft]
        route = None
        if any(n.id == flight_id for n in aircraft):
            g = build_digraph(nodes, params)
            route = shortest_path(g, bs.id, flight_id)
        records.append(_route_record(epoch, max(len(aircraft) - 1, 0), params.file_size_bits, route))
        if route is not None:
            routed += 1
            hops.append(route.hop_count)
            delays.append(route.total_delay)
        epoch += 1
        t = t0 + epoch * step_s
    total = epoch
    return TravelReport(
        records=tuple(records),
        connectivity_fraction=routed / total if total else 0.0,
        hops_cdf=cdf(hops) if hops else None,
        delay_cdf=cdf(delays) if delays else None,
    )


def emit_csv(records, path: str) -> None:
    """Write sweep records; deterministic column order, one record per line."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_CSV_HEADER)
            for rec in records:
                writer.writerow(
                    [
                        rec.realization,
                        rec.n_intermediate,
                        repr(rec.file_size_bits),
                        rec.scheme,
                        "" if rec.delay_s is None else repr(rec.delay_s),
                        "" if rec.hop_count is None else rec.hop_count,
                        "" if rec.route is None else ",".join(rec.route),
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def read_sweep_csv(path: str) -> list[SweepRecord]:
    """Inverse of emit_csv."""
    records: list[SweepRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != SWEEP_CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for row in reader:
            records.append(
                SweepRecord(
                    realization=int(row[0]),
                    n_intermediate=int(row[1]),
                    file_size_bits=float(row[2]),
                    scheme=row[3],
                    delay_s=None if row[4] == "" else float(row[4]),
                    hop_count=None if row[5] == "" else int(row[5]),
                    route=None if row[6] == "" else tuple(row[6].split(",")),
                )
            )
    return records


def emit_cdf_csv(series: CdfSeries, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "cumulative_fraction"])
        for v, f in zip(series.values, series.fractions):
            writer.writerow([repr(v), repr(f)])


def emit_degree_csv(pairs, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "fraction_below"])
        for k, frac in pairs:
            writer.writerow([k, repr(frac)])
