"""Node-set construction: seeded synthetic layouts and flight-trajectory data.

Synthetic scenarios place one ground station, one target aircraft and one
satellite at configured spherical angles, plus a configurable number of
intermediate aircraft drawn uniformly from the angle box between the station
and the target. Data-driven scenarios ingest trajectory CSV files and extract
per-timestamp snapshots.

Reproducibility: every random draw comes from ``random.Random(seed)``
(Mersenne Twister). For each intermediate aircraft the polar angle is drawn
first, then the azimuth, in node-index order, so streams are bit-identical
across platforms and runs.
"""

from __future__ import annotations

import bisect
import csv
import json
import math
import random
from dataclasses import asdict, dataclass

from .geo import (
    EARTH_RADIUS_M,
    EcefPoint,
    GeodeticCoord,
    SphericalCoord,
    ecef_to_geodetic,
    geodetic_to_ecef,
    spherical_to_ecef,
)
from .link import LinkParams, Node, NodeKind, RadioProfile

FLIGHT_CSV_COLUMNS = ("timestamp", "flight_id", "longitude", "latitude", "altitude", "speed")

# Ground-site presets for data-driven runs (heights configured separately).
AIRPORTS = {
    "LHR": GeodeticCoord(51.4700, -0.4543, 0.0),
    "JFK": GeodeticCoord(40.6413, -73.7781, 0.0),
}


class FlightDataError(Exception):
    """Trajectory file could not be parsed; message lists offending lines."""


class ScenarioFormatError(Exception):
    """Scenario file does not match the documented JSON schema."""


@dataclass(frozen=True)
class SyntheticConfig:
    """Everything needed to generate one synthetic scenario deterministically."""

    n_intermediate: int
    link: LinkParams
    bs_profile: RadioProfile
    aircraft_profile: RadioProfile
    satellite_profile: RadioProfile
    bs_angles: tuple[float, float] = (0.0, 0.0)
    target_angles: tuple[float, float] = (math.pi / 6, math.pi / 4)
    sat_angles: tuple[float, float] = (math.pi / 12, math.pi / 8)
    seed: int = 0

    def __post_init__(self):
        if self.n_intermediate < 0:
            raise ValueError("n_intermediate must be non-negative")
        for label, (theta, phi) in (
            ("bs_angles", self.bs_angles),
            ("target_angles", self.target_angles),
            ("sat_angles", self.sat_angles),
        ):
            if not 0.0 <= theta <= math.pi:
                raise ValueError(f"{label}: polar angle {theta} outside [0, pi]")
            if not 0.0 <= phi < 2.0 * math.pi:
                raise ValueError(f"{label}: azimuth {phi} outside [0, 2*pi)")


@dataclass(frozen=True)
class Scenario:
    """A concrete node set bound to its radio constants."""

    nodes: tuple[Node, ...]
    params: LinkParams
    source_id: str
    target_id: str
    satellite_ids: tuple[str, ...]

    def node_by_id(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(f"unknown node id {node_id!r}")


@dataclass(frozen=True)
class TrajectoryPoint:
    timestamp: float
    flight_id: str
    longitude: float
    latitude: float
    altitude: float
    speed: float


def _node_at(node_id: str, kind: NodeKind, theta: float, phi: float, profile: RadioProfile) -> Node:
    pos = spherical_to_ecef(SphericalCoord(EARTH_RADIUS_M + profile.height_m, theta, phi))
    return Node(
        id=node_id,
        kind=kind,
        position=pos,
        height=profile.height_m,
        tx_power=profile.tx_power_w,
        tx_gain=profile.tx_gain,
        rx_gain=profile.rx_gain,
    )


def generate_synthetic(cfg: SyntheticConfig) -> Scenario:
    """Generate a scenario from the config; a pure function of the seed."""
    rng = random.Random(cfg.seed)
    theta_max, phi_max = cfg.target_angles

    nodes = [
        _node_at("bs", NodeKind.GROUND_BS, cfg.bs_angles[0], cfg.bs_angles[1], cfg.bs_profile),
        _node_at("target", NodeKind.AIRCRAFT, theta_max, phi_max, cfg.aircraft_profile),
        _node_at("sat0", NodeKind.SATELLITE, cfg.sat_angles[0], cfg.sat_angles[1], cfg.satellite_profile),
    ]
    for i in range(cfg.n_intermediate):
        theta = rng.uniform(0.0, theta_max)
        phi = rng.uniform(0.0, phi_max)
        nodes.append(_node_at(f"ac{i:04d}", NodeKind.AIRCRAFT, theta, phi, cfg.aircraft_profile))

    return Scenario(
        nodes=tuple(nodes),
        params=cfg.link,
        source_id="bs",
        target_id="target",
        satellite_ids=("sat0",),
    )


def save_scenario(scenario: Scenario, path: str) -> None:
    """Write a scenario to its JSON interchange form.

    All quantities are SI linear: positions in ECEF meters, powers in watts,
    gains linear; see the README for the field list. Floats round-trip
    exactly.
    """
    doc = {
        "params": asdict(scenario.params),
        "source_id": scenario.source_id,
        "target_id": scenario.target_id,
        "satellite_ids": list(scenario.satellite_ids),
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind.value,
                "position_m": [n.position.x, n.position.y, n.position.z],
                "height_m": n.height,
                "tx_power_w": n.tx_power,
                "tx_gain": n.tx_gain,
                "rx_gain": n.rx_gain,
            }
            for n in scenario.nodes
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_scenario(path: str) -> Scenario:
    """Inverse of save_scenario; raises ScenarioFormatError on schema problems."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: invalid JSON: {exc}") from exc
    try:
        params = LinkParams(**doc["params"])
        nodes = tuple(
            Node(
                id=entry["id"],
                kind=NodeKind(entry["kind"]),
                position=EcefPoint(*entry["position_m"]),
                height=entry["height_m"],
                tx_power=entry["tx_power_w"],
                tx_gain=entry["tx_gain"],
                rx_gain=entry["rx_gain"],
            )
            for entry in doc["nodes"]
        )
        return Scenario(
            nodes=nodes,
            params=params,
            source_id=doc["source_id"],
            target_id=doc["target_id"],
            satellite_ids=tuple(doc["satellite_ids"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc


def load_flight_csv(path: str) -> dict[str, list[TrajectoryPoint]]:
    """Parse a trajectory CSV into per-flight, timestamp-sorted point lists.

    The header must be exactly ``timestamp,flight_id,longitude,latitude,
    altitude,speed``. Malformed rows abort the load with a diagnostic listing
    their line numbers.
    """
    flights: dict[str, list[TrajectoryPoint]] = {}
    bad: list[str] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FlightDataError(f"{path}: empty file, expected header "
                                  f"{','.join(FLIGHT_CSV_COLUMNS)}") from None
        if tuple(h.strip() for h in header) != FLIGHT_CSV_COLUMNS:
            raise FlightDataError(
                f"{path}: bad header {header!r}, expected {','.join(FLIGHT_CSV_COLUMNS)}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(FLIGHT_CSV_COLUMNS):
                bad.append(f"line {line_no}: expected {len(FLIGHT_CSV_COLUMNS)} fields, got {len(row)}")
                continue
            try:
                ts = float(row[0])
                flight_id = row[1].strip()
                lon = float(row[2])
                lat = float(row[3])
                alt = float(row[4])
                speed = float(row[5])
                if not flight_id:
                    raise ValueError("empty flight_id")
                GeodeticCoord(lat, lon, alt)  # range check
            except ValueError as exc:
                bad.append(f"line {line_no}: {exc}")
                continue
            flights.setdefault(flight_id, []).append(
                TrajectoryPoint(ts, flight_id, lon, lat, alt, speed)
            )
    if bad:
        shown = "; ".join(bad[:20])
        more = f" (+{len(bad) - 20} more)" if len(bad) > 20 else ""
        raise FlightDataError(f"{path}: {len(bad)} malformed row(s): {shown}{more}")
    for points in flights.values():
        points.sort(key=lambda tp: tp.timestamp)
    return flights


def write_flight_csv(trajectories: dict[str, list[TrajectoryPoint]], path: str) -> None:
    """Inverse of load_flight_csv; rows ordered by (flight_id, timestamp)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FLIGHT_CSV_COLUMNS)
        for flight_id in sorted(trajectories):
            for tp in sorted(trajectories[flight_id], key=lambda t: t.timestamp):
                writer.writerow(
                    [repr(tp.timestamp), tp.flight_id, repr(tp.longitude),
                     repr(tp.latitude), repr(tp.altitude), repr(tp.speed)]
                )


def snapshot(
    trajectories: dict[str, list[TrajectoryPoint]],
    t: float,
    tolerance: float,
    profile: RadioProfile,
) -> list[Node]:
    """Extract aircraft nodes at time t.

    Picks, per flight, the recorded sample nearest to t when within the
    tolerance window; flights with no sample in the window are omitted.
    Positions are never interpolated, so every node position equals a
    converted input sample.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    nodes: list[Node] = []
    for flight_id in sorted(trajectories):
        points = trajectories[flight_id]
        if not points:
            continue
        stamps = [tp.timestamp for tp in points]
        i = bisect.bisect_left(stamps, t)
        candidates = [j for j in (i - 1, i) if 0 <= j < len(points)]
        best = min(candidates, key=lambda j: (abs(stamps[j] - t), j))
        tp = points[best]
        if abs(tp.timestamp - t) > tolerance:
            continue
        pos = geodetic_to_ecef(GeodeticCoord(tp.latitude, tp.longitude, tp.altitude))
        nodes.append(
            Node(
                id=flight_id,
                kind=NodeKind.AIRCRAFT,
                position=pos,
                height=tp.altitude,
                tx_power=profile.tx_power_w,
                tx_gain=profile.tx_gain,
                rx_gain=profile.rx_gain,
            )
        )
    return nodes


def ground_station(
    node_id: str,
    site: GeodeticCoord,
    profile: RadioProfile,
) -> Node:
    """Build a ground-station node at a geodetic site, raised to its antenna height."""
    coord = GeodeticCoord(site.latitude, site.longitude, site.altitude + profile.height_m)
    return Node(
        id=node_id,
        kind=NodeKind.GROUND_BS,
        position=geodetic_to_ecef(coord),
        height=profile.height_m,
        tx_power=profile.tx_power_w,
        tx_gain=profile.tx_gain,
        rx_gain=profile.rx_gain,
    )


@dataclass(frozen=True)
class CorridorConfig:
    """Synthetic trans-Atlantic corridor: great-circle flights, jittered departures."""

    n_flights: int
    seed: int = 0
    origin: str = "LHR"
    destination: str = "JFK"
    window_s: float = 43_200.0
    speed_mps: float = 240.0
    altitude_m: float = 10_700.0
    sample_interval_s: float = 10.0
    jitter_fraction: float = 0.4
    start_timestamp: float = 1_700_000_000.0

    def __post_init__(self):
        if self.n_flights < 1:
            raise ValueError("n_flights must be at least 1")
        if self.origin not in AIRPORTS or self.destination not in AIRPORTS:
            raise ValueError(f"origin/destination must be one of {sorted(AIRPORTS)}")
        if not 0.0 <= self.jitter_fraction < 0.5:
            raise ValueError("jitter_fraction must be in [0, 0.5)")


def _unit(x: float, y: float, z: float) -> tuple[float, float, float]:
    n = math.sqrt(x * x + y * y + z * z)
    return (x / n, y / n, z / n)


def generate_corridor(cfg: CorridorConfig) -> dict[str, list[TrajectoryPoint]]:
    """Generate great-circle flight trajectories between two airports.

    Departures sit on a jittered regular grid across the window so corridor
    density scales predictably with the flight count. Output is sampled on the
    fixed interval and round-trips through the flight CSV format.
    """
    rng = random.Random(cfg.seed)
    a = geodetic_to_ecef(AIRPORTS[cfg.origin])
    b = geodetic_to_ecef(AIRPORTS[cfg.destination])
    ua = _unit(a.x, a.y, a.z)
    ub = _unit(b.x, b.y, b.z)
    omega = math.acos(max(-1.0, min(1.0, ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2])))
    radius = EARTH_RADIUS_M + cfg.altitude_m
    arc_len = omega * radius
    duration = arc_len / cfg.speed_mps
    spacing = cfg.window_s / cfg.n_flights

    flights: dict[str, list[TrajectoryPoint]] = {}
    sin_omega = math.sin(omega)
    for i in range(cfg.n_flights):
        depart = cfg.start_timestamp + (i + rng.uniform(-cfg.jitter_fraction, cfg.jitter_fraction)) * spacing
        flight_id = f"FL{i:03d}"
        points: list[TrajectoryPoint] = []
        # Samples on the global interval grid so snapshots line up across flights.
        first_tick = math.ceil(depart / cfg.sample_interval_s) * cfg.sample_interval_s
        t = first_tick
        while t <= depart + duration:
            f = (t - depart) / duration
            w1 = math.sin((1.0 - f) * omega) / sin_omega
            w2 = math.sin(f * omega) / sin_omega
            px = w1 * ua[0] + w2 * ub[0]
            py = w1 * ua[1] + w2 * ub[1]
            pz = w1 * ua[2] + w2 * ub[2]
            geo = ecef_to_geodetic(EcefPoint(px * radius, py * radius, pz * radius))
            points.append(
                TrajectoryPoint(
                    timestamp=t,
                    flight_id=flight_id,
                    longitude=geo.longitude,
                    latitude=geo.latitude,
                    altitude=cfg.altitude_m,
                    speed=cfg.speed_mps,
                )
            )
            t += cfg.sample_interval_s
        flights[flight_id] = points
    return flights
