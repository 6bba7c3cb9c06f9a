import random

import pytest

from aanetsim.geo import EARTH_RADIUS_M
from aanetsim.graph import Edge, WeightedDigraph
from aanetsim.link import NodeKind
from aanetsim.routing import (
    MAX_BRUTE_FORCE_NODES,
    SCHEME_RELAY_CHAIN,
    SCHEME_SATELLITE,
    VIOLATION_DEGREE,
    VIOLATION_DELAY,
    VIOLATION_FLOW,
    VIOLATION_LINK,
    Route,
    brute_force_shortest,
    crossover_file_size,
    route_from_hops,
    scheme_ideal_relay_chain,
    scheme_satellite_only,
    shortest_path,
    validate_route,
)

from conftest import (
    AIRCRAFT_PROFILE,
    BS_PROFILE,
    SATELLITE_PROFILE,
    dummy_node,
    node_at,
    random_digraph,
    ref_params,
)

R = EARTH_RADIUS_M

# Frozen two-hop satellite numbers: 35,768 km legs, 10 Mbit/s fixed rate.
SAT_200KBIT = 0.29845333333333335
SAT_1MBIT = 0.4584533333333334
SAT_0BIT = 0.25845333333333333
CHAIN_200KBIT_6HOPS = 0.231
CHAIN_1MBIT_6HOPS = 0.711
CROSSOVER_BITS = 368633.33333333326


def chain_graph(df=0.020):
    """s -> a -> b -> d plus shortcuts/decoys for validation tests."""
    ids = ["a", "b", "d", "s", "x"]
    nodes = [dummy_node(i, k) for k, i in enumerate(ids)]
    edges = [
        Edge("s", "a", 3e6, 10.0, 0.010, df),
        Edge("a", "b", 3e6, 10.0, 0.010, df),
        Edge("b", "d", 3e6, 10.0, 0.010, df),
        Edge("a", "d", 3e6, 10.0, 0.050, df),
        Edge("d", "b", 3e6, 10.0, 0.010, df),
    ]
    return WeightedDigraph.from_edges(nodes, edges)


def fixed_rate_params(file_size_bits):
    return ref_params(rate_mode="fixed", fixed_rate_bps=10e6, file_size_bits=file_size_bits)


def satellite_triplet():
    src = node_at("src", R + 50.0, 0.0, 0.0, kind=NodeKind.GROUND_BS, profile=BS_PROFILE)
    sat = node_at(
        "sat", R + 50.0 + 35_768e3, 0.0, 0.0, kind=NodeKind.SATELLITE, profile=SATELLITE_PROFILE
    )
    dst = node_at("dst", R + 50.0, 0.0, 0.0)
    return src, sat, dst


def span_pair(distance_m):
    src = node_at("src", R + 50.0, 0.0, 0.0, kind=NodeKind.GROUND_BS, profile=BS_PROFILE)
    dst = node_at("dst", R + 50.0, distance_m, 0.0)
    return src, dst


class TestShortestPath:
    def test_minimal_chain_charges_processing_once(self):
        nodes = [dummy_node(i, k) for k, i in enumerate(["a", "d", "s"])]
        edges = [
            Edge("s", "a", 3e6, 10.0, 0.010, 0.020),
            Edge("a", "d", 3e6, 10.0, 0.010, 0.020),
        ]
        g = WeightedDigraph.from_edges(nodes, edges)
        route = shortest_path(g, "s", "d")
        assert route.hops == ("s", "a", "d")
        assert route.per_hop_delay == (0.010 + 0.020, 0.010)
        assert route.total_delay == pytest.approx(0.040, rel=1e-12)

    def test_final_hop_skips_relay_processing(self):
        g = chain_graph()
        route = shortest_path(g, "s", "d")
        # Processing is charged on s->a and a->b but not on the delivery hop.
        assert route.hops == ("s", "a", "b", "d")
        assert route.total_delay == pytest.approx(
            (0.010 + 0.020) + (0.010 + 0.020) + 0.010, rel=1e-12
        )

    def test_heavy_processing_prefers_fewer_hops(self):
        g = chain_graph(df=0.060)
        route = shortest_path(g, "s", "d")
        # (0.01+0.06) + 0.05 beats (0.01+0.06)*2 + 0.01.
        assert route.hops == ("s", "a", "d")
        assert route.total_delay == pytest.approx((0.010 + 0.060) + 0.050, rel=1e-12)

    def test_unreachable_returns_none(self):
        g = chain_graph()
        assert shortest_path(g, "s", "x") is None

    def test_same_endpoints_rejected(self):
        g = chain_graph()
        with pytest.raises(ValueError):
            shortest_path(g, "s", "s")

    def test_unknown_ids_rejected(self):
        g = chain_graph()
        with pytest.raises(KeyError):
            shortest_path(g, "nope", "d")
        with pytest.raises(KeyError):
            shortest_path(g, "s", "nope")

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(12345)
        checked = 0
        for _ in range(60):
            g = random_digraph(rng, rng.randint(4, 10))
            fast = shortest_path(g, "n0", f"n{len(g.nodes) - 1}")
            slow = brute_force_shortest(g, "n0", f"n{len(g.nodes) - 1}")
            if fast is None:
                assert slow is None
                continue
            assert slow is not None
            assert fast.total_delay == slow.total_delay
            checked += 1
        assert checked >= 20

    def test_prune_toggle_is_pure_optimization(self):
        rng = random.Random(777)
        for _ in range(40):
            g = random_digraph(rng, rng.randint(4, 10))
            on = shortest_path(g, "n0", f"n{len(g.nodes) - 1}", prune=True)
            off = shortest_path(g, "n0", f"n{len(g.nodes) - 1}", prune=False)
            assert (on is None) == (off is None)
            if on is not None:
                assert on.hops == off.hops
                assert on.total_delay == off.total_delay

    def test_deterministic_hop_sequence(self):
        rng = random.Random(4242)
        for _ in range(10):
            n = rng.randint(5, 10)
            seed = rng.randint(0, 10**6)
            g1 = random_digraph(random.Random(seed), n, edge_prob=0.7)
            g2 = random_digraph(random.Random(seed), n, edge_prob=0.7)
            r1 = shortest_path(g1, "n0", f"n{n - 1}")
            r2 = shortest_path(g2, "n0", f"n{n - 1}")
            assert (r1 is None) == (r2 is None)
            if r1 is not None:
                assert r1.hops == r2.hops

    def test_prefix_delay_strictly_increasing(self):
        rng = random.Random(99)
        for _ in range(25):
            g = random_digraph(rng, 9, edge_prob=0.6)
            route = shortest_path(g, "n0", "n8")
            if route is None:
                continue
            cumulative = 0.0
            for hop_delay in route.per_hop_delay:
                assert hop_delay > 0.0
                cumulative += hop_delay
            assert cumulative == route.total_delay

    def test_operation_count_linear_in_edges(self):
        rng = random.Random(5)
        g = random_digraph(rng, 40, edge_prob=0.9)
        stats = {}
        shortest_path(g, "n0", "n39", stats=stats)
        assert stats["pushes"] <= g.edge_count() + 1
        assert stats["relaxations"] <= g.edge_count()
        assert stats["pops"] <= stats["pushes"]

    def test_route_validates(self, params):
        rng = random.Random(31337)
        g = random_digraph(rng, 10, edge_prob=0.5)
        route = shortest_path(g, "n0", "n9")
        if route is not None:
            assert validate_route(route, g, "n0", "n9").ok


class TestBruteForce:
    def test_single_edge(self):
        nodes = [dummy_node("s", 0), dummy_node("d", 1)]
        g = WeightedDigraph.from_edges(nodes, [Edge("s", "d", 3e6, 5.0, 0.01, 0.02)])
        route = brute_force_shortest(g, "s", "d")
        assert route.hops == ("s", "d")
        assert route.total_delay == 0.01

    def test_diamond_picks_cheap_branch(self):
        ids = ["s", "p", "q", "d"]
        nodes = [dummy_node(i, k) for k, i in enumerate(ids)]
        edges = [
            Edge("s", "p", 3e6, 5.0, 0.001, 0.02),
            Edge("p", "d", 3e6, 5.0, 0.001, 0.02),
            Edge("s", "q", 3e6, 5.0, 0.040, 0.02),
            Edge("q", "d", 3e6, 5.0, 0.040, 0.02),
        ]
        g = WeightedDigraph.from_edges(nodes, edges)
        route = brute_force_shortest(g, "s", "d")
        assert route.hops == ("s", "p", "d")

    def test_node_guard(self):
        g = random_digraph(random.Random(0), MAX_BRUTE_FORCE_NODES + 1)
        with pytest.raises(ValueError, match="brute force"):
            brute_force_shortest(g, "n0", "n1")

    def test_lexicographic_tie_break(self):
        ids = ["a", "b", "d", "s"]
        nodes = [dummy_node(i, k) for k, i in enumerate(ids)]
        edges = [
            Edge("s", "a", 3e6, 5.0, 0.010, 0.02),
            Edge("a", "d", 3e6, 5.0, 0.010, 0.02),
            Edge("s", "b", 3e6, 5.0, 0.010, 0.02),
            Edge("b", "d", 3e6, 5.0, 0.010, 0.02),
        ]
        g = WeightedDigraph.from_edges(nodes, edges)
        route = brute_force_shortest(g, "s", "d")
        assert route.hops == ("s", "a", "d")


class TestValidateRoute:
    def test_router_output_is_valid(self):
        g = chain_graph()
        route = shortest_path(g, "s", "d")
        result = validate_route(route, g, "s", "d")
        assert result.ok
        assert result.violations == ()

    def test_repeated_node_flags_flow_conservation(self):
        g = chain_graph()
        bad = Route(hops=("s", "a", "b", "a", "d"), per_hop_delay=(0.03, 0.03, 0.03, 0.01),
                    total_delay=0.1)
        result = validate_route(bad, g, "s", "d")
        assert not result.ok
        assert any(v.startswith(VIOLATION_FLOW) for v in result.violations)

    def test_off_graph_edge_flags_link(self):
        g = chain_graph()
        bad = Route(hops=("s", "x", "d"), per_hop_delay=(0.03, 0.01), total_delay=0.04)
        result = validate_route(bad, g, "s", "d")
        assert not result.ok
        assert any(v.startswith(VIOLATION_LINK) for v in result.violations)

    def test_out_edge_from_destination_flags_degree(self):
        g = chain_graph()
        bad = Route(hops=("s", "a", "d", "b"), per_hop_delay=(0.03, 0.03, 0.01),
                    total_delay=0.07)
        result = validate_route(bad, g, "s", "d")
        assert not result.ok
        assert any(v.startswith(VIOLATION_DEGREE) for v in result.violations)

    def test_wrong_endpoints_flag_flow(self):
        g = chain_graph()
        bad = Route(hops=("a", "b", "d"), per_hop_delay=(0.03, 0.01), total_delay=0.04)
        result = validate_route(bad, g, "s", "d")
        assert any(v.startswith(VIOLATION_FLOW) for v in result.violations)

    def test_tampered_delay_flags_accounting(self):
        g = chain_graph()
        good = shortest_path(g, "s", "d")
        bad = Route(hops=good.hops, per_hop_delay=tuple(d * 2 for d in good.per_hop_delay),
                    total_delay=good.total_delay)
        result = validate_route(bad, g, "s", "d")
        assert any(v.startswith(VIOLATION_DELAY) for v in result.violations)


class TestSatelliteScheme:
    def test_golden_200kbit(self):
        src, sat, dst = satellite_triplet()
        result = scheme_satellite_only(src, sat, dst, fixed_rate_params(200e3))
        assert result.scheme == SCHEME_SATELLITE
        assert result.hop_count == 2
        assert result.delay_s == pytest.approx(SAT_200KBIT, rel=1e-12)

    def test_golden_1mbit(self):
        src, sat, dst = satellite_triplet()
        result = scheme_satellite_only(src, sat, dst, fixed_rate_params(1e6))
        assert result.delay_s == pytest.approx(SAT_1MBIT, rel=1e-12)

    def test_zero_file_is_propagation_plus_processing(self):
        src, sat, dst = satellite_triplet()
        result = scheme_satellite_only(src, sat, dst, fixed_rate_params(0.0))
        assert result.delay_s == pytest.approx(SAT_0BIT, rel=1e-12)

    def test_infeasible_link_returns_none(self):
        src, sat, dst = satellite_triplet()
        weak = ref_params(snr_threshold=1e12)
        assert scheme_satellite_only(src, sat, dst, weak) is None

    def test_affine_decomposition_consistent(self):
        src, sat, dst = satellite_triplet()
        p = fixed_rate_params(200e3)
        result = scheme_satellite_only(src, sat, dst, p)
        assert result.fixed_delay_s + result.delay_per_bit_s * 200e3 == pytest.approx(
            result.delay_s, rel=1e-12
        )


class TestRelayChainScheme:
    def test_direct_when_within_reach(self):
        src, dst = span_pair(300e3)
        result = scheme_ideal_relay_chain(src, dst, fixed_rate_params(200e3), AIRCRAFT_PROFILE)
        assert result.hop_count == 1
        assert result.delay_s == pytest.approx(0.020 + 300e3 / 3.0e8, rel=1e-12)

    def test_forced_six_hops_golden(self):
        src, dst = span_pair(3.3e6)
        result = scheme_ideal_relay_chain(
            src, dst, fixed_rate_params(200e3), AIRCRAFT_PROFILE, forced_hops=6
        )
        assert result.hop_count == 6
        assert result.delay_s == pytest.approx(CHAIN_200KBIT_6HOPS, rel=1e-12)

    def test_forced_six_hops_1mbit(self):
        src, dst = span_pair(3.3e6)
        result = scheme_ideal_relay_chain(
            src, dst, fixed_rate_params(1e6), AIRCRAFT_PROFILE, forced_hops=6
        )
        assert result.delay_s == pytest.approx(CHAIN_1MBIT_6HOPS, rel=1e-12)

    def test_greedy_minimum_matches_covering_oracle(self):
        from aanetsim.geo import visibility_range

        def covering_min_edges(total, direct, first, mid, last):
            if total <= direct:
                return 1
            k = 2
            while first + (k - 2) * mid + last < total:
                k += 1
            return k

        for height, total in ((10_700.0, 3_300_670.0), (10_000.0, 3_300_487.0),
                              (10_700.0, 5_000_000.0), (10_000.0, 1_000_000.0)):
            profile = type(AIRCRAFT_PROFILE)(
                AIRCRAFT_PROFILE.tx_power_w, AIRCRAFT_PROFILE.tx_gain,
                AIRCRAFT_PROFILE.rx_gain, height,
            )
            src = node_at("src", R + 50.0, 0.0, 0.0, kind=NodeKind.GROUND_BS, profile=BS_PROFILE)
            dst = node_at("dst", R + 50.0, total, 0.0, height=height)
            result = scheme_ideal_relay_chain(src, dst, fixed_rate_params(200e3), profile)
            expected = covering_min_edges(
                total,
                visibility_range(50.0, height),
                visibility_range(50.0, height),
                visibility_range(height, height),
                visibility_range(height, height),
            )
            assert result.hop_count == expected

    def test_zero_distance_degenerate(self):
        src, _ = span_pair(100.0)
        result = scheme_ideal_relay_chain(src, src, fixed_rate_params(200e3), AIRCRAFT_PROFILE)
        assert result.hop_count == 0
        assert result.delay_s == 0.0

    def test_hop_delays_dominated_by_processing(self):
        # Shannon rates at reference powers make transfer time negligible for
        # small files; the chain delay is propagation plus relay processing.
        src, dst = span_pair(3_300_670.0)
        result = scheme_ideal_relay_chain(src, dst, ref_params(), AIRCRAFT_PROFILE)
        n_relays = result.hop_count - 1
        floor = 3_300_670.0 / 3.0e8 + n_relays * 0.020
        assert result.delay_s == pytest.approx(floor, rel=1e-3)


class TestCrossover:
    def test_matches_analytic_solution(self):
        src, sat, dst = satellite_triplet()
        chain_src, chain_dst = span_pair(3.3e6)
        p = fixed_rate_params(200e3)
        chain = scheme_ideal_relay_chain(chain_src, chain_dst, p, AIRCRAFT_PROFILE, forced_hops=6)
        sat_result = scheme_satellite_only(src, sat, dst, p)
        got = crossover_file_size(chain, sat_result)
        assert got == pytest.approx(CROSSOVER_BITS, rel=1e-9)

    def test_matches_grid_scan_oracle(self):
        src, sat, dst = satellite_triplet()
        chain_src, chain_dst = span_pair(3.3e6)
        p = fixed_rate_params(200e3)
        chain = scheme_ideal_relay_chain(chain_src, chain_dst, p, AIRCRAFT_PROFILE, forced_hops=6)
        sat_result = scheme_satellite_only(src, sat, dst, p)

        def delay_at(result, bits):
            return result.fixed_delay_s + result.delay_per_bit_s * bits

        resolution = 2e6 / 10_000
        bracket = None
        prev = delay_at(sat_result, 0.0) - delay_at(chain, 0.0)
        for i in range(1, 10_001):
            bits = i * resolution
            diff = delay_at(sat_result, bits) - delay_at(chain, bits)
            if prev * diff <= 0:
                bracket = (bits - resolution, bits)
                break
            prev = diff
        assert bracket is not None
        got = crossover_file_size(chain, sat_result)
        assert bracket[0] <= got <= bracket[1]

    def test_equal_slopes_no_crossover(self):
        from aanetsim.routing import SchemeResult

        a = SchemeResult(SCHEME_RELAY_CHAIN, 0.1, 3, 0.1, 1e-7)
        b = SchemeResult(SCHEME_SATELLITE, 0.2, 2, 0.2, 1e-7)
        assert crossover_file_size(a, b) is None

    def test_equal_at_zero_with_equal_slopes_no_crossover(self):
        from aanetsim.routing import SchemeResult

        a = SchemeResult(SCHEME_RELAY_CHAIN, 0.1, 3, 0.1, 1e-7)
        b = SchemeResult(SCHEME_SATELLITE, 0.1, 2, 0.1, 1e-7)
        assert crossover_file_size(a, b) is None

    def test_never_crossing_returns_none(self):
        from aanetsim.routing import SchemeResult

        cheap = SchemeResult(SCHEME_RELAY_CHAIN, 0.1, 3, 0.1, 1e-7)
        worse = SchemeResult(SCHEME_SATELLITE, 0.2, 2, 0.2, 2e-7)
        assert crossover_file_size(cheap, worse) is None


class TestRouteFromHops:
    def test_missing_edge_raises(self):
        g = chain_graph()
        with pytest.raises(ValueError):
            route_from_hops(g, ["s", "x"], "x")

    def test_hop_count_property(self):
        g = chain_graph()
        route = shortest_path(g, "s", "d")
        assert route.hop_count == len(route.hops) - 1
