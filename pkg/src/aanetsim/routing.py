"""Minimum-delay route search, route validation and analytic baseline schemes.

The search is a best-first label-setting algorithm over the feasibility
digraph, with a priority queue keyed by (accumulated delay, node id) and an
optional upper-bound prune fed by the best destination label seen so far.
Edge weights depend on the query: the relay-processing delay is charged on
every hop except the one entering the destination.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .geo import chord_distance, is_visible, visibility_range
from .graph import Edge, WeightedDigraph
from .link import (
    LinkParams,
    Node,
    RadioProfile,
    capacity,
    link_delay,
    propagation_delay,
    snr,
    snr_at_distance,
    transmission_delay,
)

SCHEME_SHORTEST_PATH = "shortest_path"
SCHEME_RELAY_CHAIN = "ideal_relay_chain"
SCHEME_SATELLITE = "satellite_only"

# Violation classes reported by validate_route.
VIOLATION_LINK = "link-feasibility"
VIOLATION_FLOW = "flow-conservation"
VIOLATION_DEGREE = "degree-limit"
VIOLATION_DELAY = "delay-accounting"

MAX_BRUTE_FORCE_NODES = 12


@dataclass(frozen=True)
class Route:
    """Simple path from source to destination with its delay breakdown."""

    hops: tuple[str, ...]
    per_hop_delay: tuple[float, ...]
    total_delay: float

    @property
    def hop_count(self) -> int:
        """Number of edges in the path."""
        return len(self.hops) - 1


@dataclass(frozen=True)
class SchemeResult:
    """Outcome of one routing scheme, with its affine delay-vs-file-size law."""

    scheme: str
    delay_s: float
    hop_count: int
    fixed_delay_s: float    # delay at zero file size
    delay_per_bit_s: float  # slope: seconds added per file bit


@dataclass(frozen=True)
class RouteValidation:
    ok: bool
    violations: tuple[str, ...]


def edge_weight(edge: Edge, destination: str) -> float:
    """Query-specific hop delay: relay processing is waived into the target."""
    if edge.to_id == destination:
        return edge.base_delay_s
    return edge.base_delay_s + edge.df_delay_s


def shortest_path(
    g: WeightedDigraph,
    s: str,
    d: str,
    prune: bool = True,
    stats: dict | None = None,
) -> Route | None:
    """Find the minimum-total-delay simple path from s to d.

    Labels never increase, the frontier is ordered by (delay, node id), and a
    candidate label is discarded when it already exceeds the best complete
    route found so far (`prune`; with non-negative weights this never changes
    the optimum). Returns None when d is unreachable.
    """
    if s == d:
        raise ValueError("source and destination must differ")
    if s not in g:
        raise KeyError(f"unknown source id {s!r}")
    if d not in g:
        raise KeyError(f"unknown destination id {d!r}")

    dist: dict[str, float] = {s: 0.0}
    prev: dict[str, str] = {}
    settled: set[str] = set()
    bound = math.inf
    frontier: list[tuple[float, str]] = [(0.0, s)]
    counters = {"pushes": 1, "pops": 0, "relaxations": 0}

    while frontier:
        label_u, u = heapq.heappop(frontier)
        counters["pops"] += 1
        if u in settled:
            continue
        settled.add(u)
        if u == d:
            break
        for e in g.neighbors(u):
            v = e.to_id
            if v in settled:
                continue
            counters["relaxations"] += 1
            candidate = label_u + edge_weight(e, d)
            if prune and candidate > bound:
                continue
            if candidate < dist.get(v, math.inf):
                dist[v] = candidate
                prev[v] = u
                if v == d:
                    bound = candidate
                heapq.heappush(frontier, (candidate, v))
                counters["pushes"] += 1

    if stats is not None:
        stats.update(counters)
    if d not in dist:
        return None

    hops = [d]
    while hops[-1] != s:
        hops.append(prev[hops[-1]])
    hops.reverse()
    return route_from_hops(g, hops, d)


def route_from_hops(g: WeightedDigraph, hops: list[str] | tuple[str, ...], destination: str) -> Route:
    """Assemble a Route for an existing hop sequence, applying per-query weights."""
    per_hop = []
    total = 0.0
    for u, v in zip(hops[:-1], hops[1:]):
        e = g.find_edge(u, v)
        if e is None:
            raise ValueError(f"no edge {u!r} -> {v!r} in graph")
        w = edge_weight(e, destination)
        per_hop.append(w)
        total += w
    return Route(hops=tuple(hops), per_hop_delay=tuple(per_hop), total_delay=total)


def brute_force_shortest(g: WeightedDigraph, s: str, d: str) -> Route | None:
    """Exhaustive simple-path enumeration; correctness oracle for small graphs.

    Ties break toward the lexicographically smallest hop sequence. Refuses to
    run above MAX_BRUTE_FORCE_NODES nodes.
    """
    if len(g.nodes) > MAX_BRUTE_FORCE_NODES:
        raise ValueError(
            f"brute force limited to {MAX_BRUTE_FORCE_NODES} nodes, got {len(g.nodes)}"
        )
    if s == d:
        raise ValueError("source and destination must differ")
    if s not in g:
        raise KeyError(f"unknown source id {s!r}")
    if d not in g:
        raise KeyError(f"unknown destination id {d!r}")

    best: tuple[float, tuple[str, ...]] | None = None

    def visit(u: str, path: list[str], on_path: set[str], delay: float) -> None:
        nonlocal best
        if u == d:
            key = (delay, tuple(path))
            if best is None or key < best:
                best = key
            return
        for e in g.neighbors(u):
            v = e.to_id
            if v in on_path:
                continue
            path.append(v)
            on_path.add(v)
            visit(v, path, on_path, delay + edge_weight(e, d))
            on_path.remove(v)
            path.pop()

    visit(s, [s], {s}, 0.0)
    if best is None:
        return None
    return route_from_hops(g, list(best[1]), d)


def validate_route(route: Route, g: WeightedDigraph, s: str, d: str) -> RouteValidation:
    """Check a route against the link, flow-conservation and degree constraints.

    Never raises; returns the list of violations (empty when legitimate).
    """
    violations: list[str] = []
    hops = route.hops

    if len(hops) < 2:
        violations.append(f"{VIOLATION_FLOW}: route has no edges")
        return RouteValidation(False, tuple(violations))

    if hops[0] != s:
        violations.append(f"{VIOLATION_FLOW}: route starts at {hops[0]!r}, not source {s!r}")
    if hops[-1] != d:
        violations.append(f"{VIOLATION_FLOW}: route ends at {hops[-1]!r}, not destination {d!r}")
    seen: set[str] = set()
    for h in hops:
        if h in seen:
            violations.append(f"{VIOLATION_FLOW}: node {h!r} visited more than once")
        seen.add(h)
    for h in hops[:-1]:
        if h == d:
            violations.append(f"{VIOLATION_DEGREE}: out-edge taken from destination {d!r}")

    edges_ok = True
    for u, v in zip(hops[:-1], hops[1:]):
        if u not in g or v not in g or g.find_edge(u, v) is None:
            violations.append(f"{VIOLATION_LINK}: no feasible edge {u!r} -> {v!r}")
            edges_ok = False

    if edges_ok:
        if len(route.per_hop_delay) != len(hops) - 1:
            violations.append(f"{VIOLATION_DELAY}: per-hop delay count mismatch")
        else:
            for i, (u, v) in enumerate(zip(hops[:-1], hops[1:])):
                expected = edge_weight(g.find_edge(u, v), d)
                if not math.isclose(route.per_hop_delay[i], expected, rel_tol=1e-12, abs_tol=1e-15):
                    violations.append(
                        f"{VIOLATION_DELAY}: hop {u!r}->{v!r} delay "
                        f"{route.per_hop_delay[i]} != edge weight {expected}"
                    )
            if not math.isclose(
                route.total_delay, math.fsum(route.per_hop_delay), rel_tol=1e-12, abs_tol=1e-15
            ):
                violations.append(f"{VIOLATION_DELAY}: total delay is not the per-hop sum")

    return RouteValidation(not violations, tuple(violations))


def scheme_ideal_relay_chain(
    src: Node,
    dst: Node,
    p: LinkParams,
    relay_profile: RadioProfile,
    forced_hops: int | None = None,
) -> SchemeResult:
    """Baseline: perfectly placed relay aircraft along the source-target line.

    The minimum hop count comes from greedy maximal advance along the chord,
    with each hop capped by the pairwise visibility range; it lower-bounds any
    achievable multi-hop delay. `forced_hops` overrides the hop count with
    equally spaced relays (visibility caps are then not enforced), which pins
    down fixed-rate worked examples where spacing does not affect the total.
    """
    total = chord_distance(src.position, dst.position)
    if total <= 0.0:
        return SchemeResult(SCHEME_RELAY_CHAIN, 0.0, 0, 0.0, 0.0)

    cap_direct = visibility_range(src.height, dst.height)
    cap_first = visibility_range(src.height, relay_profile.height_m)
    cap_mid = visibility_range(relay_profile.height_m, relay_profile.height_m)
    cap_last = visibility_range(relay_profile.height_m, dst.height)

    if forced_hops is not None:
        if forced_hops < 1:
            raise ValueError("forced_hops must be at least 1")
        k = forced_hops
        seg_lengths = [total / k] * k
        cuts = [total * i / k for i in range(1, k)]
    elif total <= cap_direct:
        k = 1
        seg_lengths = [total]
        cuts = []
    else:
        cuts = []
        pos = 0.0
        while total - pos > (cap_last if cuts else cap_direct):
            advance = cap_first if not cuts else cap_mid
            nxt = min(pos + advance, total - 1.0)
            if nxt <= pos:
                raise ValueError(f"relay chain cannot advance toward a target {total} m away")
            pos = nxt
            cuts.append(pos)
        k = len(cuts) + 1
        seg_lengths = [cuts[0]] + [
            cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1)
        ] + [total - cuts[-1]]

    # The chain is a 1-D idealization: only hop lengths and the endpoint radio
    # terms matter. The source transmits first, relays fill the middle, the
    # target receives last.
    delay = 0.0
    fixed = 0.0
    per_bit = 0.0
    last = len(seg_lengths) - 1
    for i, seg in enumerate(seg_lengths):
        if i == 0:
            tx_power, tx_gain = src.tx_power, src.tx_gain
        else:
            tx_power, tx_gain = relay_profile.tx_power_w, relay_profile.tx_gain
        rx_gain = dst.rx_gain if i == last else relay_profile.rx_gain
        rate = capacity(snr_at_distance(seg, tx_power, tx_gain, rx_gain, p), p)
        d_pr = propagation_delay(seg)
        hop = transmission_delay(p.file_size_bits, rate) + d_pr
        fixed += d_pr
        per_bit += 1.0 / rate
        if i != last:
            hop += p.df_delay_s
            fixed += p.df_delay_s
        delay += hop

    return SchemeResult(SCHEME_RELAY_CHAIN, delay, k, fixed, per_bit)


def scheme_satellite_only(src: Node, sat: Node, dst: Node, p: LinkParams) -> SchemeResult | None:
    """Baseline: the two-hop route through one satellite; None when infeasible."""
    for tx, rx in ((src, sat), (sat, dst)):
        if chord_distance(tx.position, rx.position) <= 0.0:
            return None
        if snr(tx, rx, p) < p.snr_threshold or not is_visible(tx, rx):
            return None

    up = link_delay(src, sat, p, rx_is_target=False)
    down = link_delay(sat, dst, p, rx_is_target=True)
    rate_up = capacity(snr(src, sat, p), p)
    rate_down = capacity(snr(sat, dst, p), p)
    fixed = (
        propagation_delay(chord_distance(src.position, sat.position))
        + propagation_delay(chord_distance(sat.position, dst.position))
        + p.df_delay_s
    )
    return SchemeResult(
        SCHEME_SATELLITE,
        up + down,
        2,
        fixed,
        1.0 / rate_up + 1.0 / rate_down,
    )


def crossover_file_size(chain: SchemeResult, sat: SchemeResult) -> float | None:
    """File size at which the two schemes' delays break even.

    Both delay laws are affine in the file size; the root of their difference
    is located by bisection on an expanding bracket. Returns None when the
    slopes are equal (parallel laws) or the laws never cross for a
    non-negative file size.
    """

    def diff(bits: float) -> float:
        return (sat.fixed_delay_s + sat.delay_per_bit_s * bits) - (
            chain.fixed_delay_s + chain.delay_per_bit_s * bits
        )

    slope = sat.delay_per_bit_s - chain.delay_per_bit_s
    if slope == 0.0:
        return None
    at_zero = diff(0.0)
    if at_zero == 0.0:
        return 0.0
    # A sign change for positive sizes requires the slope to oppose the offset.
    if (at_zero > 0) == (slope > 0):
        return None

    lo, hi = 0.0, 1.0
    while (diff(hi) > 0) == (at_zero > 0):
        lo, hi = hi, hi * 2.0
        if hi > 1e18:  # pragma: no cover - unreachable for sane inputs
            return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if (diff(mid) > 0) == (at_zero > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
