import random

import pytest

from aanetsim.geo import EARTH_RADIUS_M, EcefPoint
from aanetsim.graph import Edge, WeightedDigraph
from aanetsim.link import LinkParams, Node, NodeKind, RadioProfile, dbm_to_watts, db_to_linear

# Reference radio constants used throughout the suite: 31 GHz carrier,
# 200 MHz bandwidth, -132 dBm noise, 0 dB SNR threshold, 20 ms relay delay.
REF_NOISE_W = dbm_to_watts(-132.0)
GAIN_25_DB = db_to_linear(25.0)
GAIN_45_DB = db_to_linear(45.0)

BS_PROFILE = RadioProfile(dbm_to_watts(45.0), GAIN_25_DB, GAIN_25_DB, 50.0)
AIRCRAFT_PROFILE = RadioProfile(dbm_to_watts(30.0), GAIN_25_DB, GAIN_25_DB, 10_700.0)
SATELLITE_PROFILE = RadioProfile(dbm_to_watts(50.0), GAIN_45_DB, GAIN_45_DB, 35_768_000.0)


def ref_params(**overrides) -> LinkParams:
    kwargs = dict(
        carrier_freq_hz=31.0e9,
        bandwidth_hz=200.0e6,
        noise_power_w=REF_NOISE_W,
        path_loss_exp=2.0,
        snr_threshold=1.0,
        df_delay_s=0.020,
        file_size_bits=9000.0,
    )
    kwargs.update(overrides)
    return LinkParams(**kwargs)


@pytest.fixture
def params() -> LinkParams:
    return ref_params()


def node_at(
    node_id: str,
    x: float,
    y: float,
    z: float,
    kind: NodeKind = NodeKind.AIRCRAFT,
    profile: RadioProfile = AIRCRAFT_PROFILE,
    height: float | None = None,
) -> Node:
    return Node(
        id=node_id,
        kind=kind,
        position=EcefPoint(x, y, z),
        height=profile.height_m if height is None else height,
        tx_power=profile.tx_power_w,
        tx_gain=profile.tx_gain,
        rx_gain=profile.rx_gain,
    )


def aircraft_pair(separation_m: float) -> tuple[Node, Node]:
    """Two cruise-height aircraft separated by an exact straight-line distance."""
    r = EARTH_RADIUS_M + AIRCRAFT_PROFILE.height_m
    a = node_at("a", r, 0.0, 0.0)
    b = node_at("b", r, separation_m, 0.0)
    return a, b


def dummy_node(node_id: str, index: int) -> Node:
    """Positioned node for graph-shape tests where radio values are irrelevant."""
    r = EARTH_RADIUS_M + 10_000.0
    return node_at(node_id, r, 1000.0 * index, 0.0, height=10_000.0)


def random_digraph(rng: random.Random, n_nodes: int, edge_prob: float = 0.4,
                   df_delay_s: float = 0.020) -> WeightedDigraph:
    """Random weighted digraph with synthetic feasible edges for oracle tests."""
    ids = [f"n{i}" for i in range(n_nodes)]
    nodes = [dummy_node(i, k) for k, i in enumerate(ids)]
    edges = []
    for u in ids:
        for v in ids:
            if u == v or rng.random() >= edge_prob:
                continue
            base = rng.uniform(0.001, 0.050)
            edges.append(Edge(u, v, distance_m=base * 3.0e8, snr=10.0,
                              base_delay_s=base, df_delay_s=df_delay_s))
    return WeightedDigraph.from_edges(nodes, edges)
