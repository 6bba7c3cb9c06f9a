"""Feasibility-pruned weighted digraph over radio nodes.

A directed edge (i, j) exists exactly when the receive SNR at j clears the
configured threshold and the two nodes are mutually visible over the curved
Earth. Edge weights are stored decomposed (transfer+propagation vs. relay
processing) because the processing share of a hop depends on whether the hop
delivers to the route target, which is only known per query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

from .geo import chord_distance, is_visible
from .link import LinkParams, Node, capacity, propagation_delay, snr, transmission_delay

EDGE_LIST_HEADER = "from_id,to_id,distance_m,snr_linear,base_delay_s"


@dataclass(frozen=True)
class Edge:
    """Directed feasible link with its delay decomposition."""

    from_id: str
    to_id: str
    distance_m: float
    snr: float
    base_delay_s: float  # transfer + propagation
    df_delay_s: float    # relay processing, charged unless the head is the target


class WeightedDigraph:
    """Adjacency-list digraph; immutable after construction, safe to share."""

    def __init__(self, nodes: dict[str, Node], adjacency: dict[str, list[Edge]]):
        self._nodes = nodes
        self._adj = adjacency
        self._edge_index = {
            (e.from_id, e.to_id): e for edges in adjacency.values() for e in edges
        }

    @classmethod
    def from_edges(cls, nodes: Iterable[Node], edges: Iterable[Edge]) -> "WeightedDigraph":
        node_map = {n.id: n for n in nodes}
        adj: dict[str, list[Edge]] = {node_id: [] for node_id in node_map}
        for e in edges:
            if e.from_id not in node_map or e.to_id not in node_map:
                raise ValueError(f"edge {e.from_id!r}->{e.to_id!r} references unknown node")
            adj[e.from_id].append(e)
        for out_edges in adj.values():
            out_edges.sort(key=lambda e: e.to_id)
        return cls(node_map, adj)

    @property
    def nodes(self) -> dict[str, Node]:
        return self._nodes

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node_ids(self) -> list[str]:
        return sorted(self._nodes)

    def neighbors(self, v: str) -> list[Edge]:
        """Out-edges of v in ascending neighbor-id order."""
        if v not in self._nodes:
            raise KeyError(f"unknown node id {v!r}")
        return self._adj[v]

    def out_degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def find_edge(self, u: str, v: str) -> Edge | None:
        return self._edge_index.get((u, v))

    def edges(self) -> Iterator[Edge]:
        for v in sorted(self._adj):
            yield from self._adj[v]

    def edge_count(self) -> int:
        return len(self._edge_index)


def build_digraph(nodes: Sequence[Node], p: LinkParams) -> WeightedDigraph:
    """Construct the digraph of all feasible directed links.

    Every ordered pair is examined exactly once: the SNR threshold and the
    visibility bound decide whether the edge is kept. Isolated nodes stay in
    the graph so degree-0 statistics remain observable. Co-located pairs have
    a singular link budget and produce no edge.
    """
    ids = [n.id for n in nodes]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate node ids: {dupes}")
    if len(nodes) < 2:
        raise ValueError("a digraph needs at least two nodes")

    ordered = sorted(nodes, key=lambda n: n.id)
    node_map = {n.id: n for n in ordered}
    adj: dict[str, list[Edge]] = {n.id: [] for n in ordered}

    for tx in ordered:
        for rx in ordered:
            if rx.id == tx.id:
                continue
            d = chord_distance(tx.position, rx.position)
            if d <= 0.0:
                continue
            link_snr = snr(tx, rx, p)
            if link_snr < p.snr_threshold or not is_visible(tx, rx):
                continue
            rate = capacity(link_snr, p)
            base = transmission_delay(p.file_size_bits, rate) + propagation_delay(d)
            adj[tx.id].append(
                Edge(
                    from_id=tx.id,
                    to_id=rx.id,
                    distance_m=d,
                    snr=link_snr,
                    base_delay_s=base,
                    df_delay_s=p.df_delay_s,
                )
            )

    return WeightedDigraph(node_map, adj)


def degree_distribution(g: WeightedDigraph) -> list[tuple[int, float]]:
    """Cumulative out-degree distribution.

    Returns (k, fraction of nodes with out-degree strictly below k) for
    k = 0 .. max_degree + 1; monotone non-decreasing with final value 1.0.
    """
    degrees = [g.out_degree(v) for v in g.node_ids()]
    n = len(degrees)
    if n == 0:
        return []
    max_deg = max(degrees)
    return [
        (k, sum(1 for deg in degrees if deg < k) / n)
        for k in range(0, max_deg + 2)
    ]


def write_edge_list(g: WeightedDigraph, stream: TextIO) -> None:
    """Emit the one-line-header edge-list text format for diffing/debugging."""
    stream.write(EDGE_LIST_HEADER + "\n")
    for e in g.edges():
        stream.write(
            f"{e.from_id},{e.to_id},{e.distance_m!r},{e.snr!r},{e.base_delay_s!r}\n"
        )


def export_edge_list(g: WeightedDigraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write_edge_list(g, fh)
