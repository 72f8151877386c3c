"""Network model with direct and cooperative links, the max-min
lifetime LP, and the dynamic-cost routing heuristic.

A cooperative link lets a node and its nearest neighbor transmit the
same packet together so their combined received energy clears the SNR
threshold at an otherwise unreachable target; the helper pays one
energy unit per packet just like the transmitter.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .gainmodels import PhyParams
from .lpsolver import StandardLP, solve_lp
from .numerics import Tolerance

__all__ = [
    "SensorNode",
    "LinkSet",
    "FlowSolution",
    "CostParams",
    "NoRouteError",
    "build_links",
    "solve_lifetime_lp",
    "dynamic_cost",
    "simulate_dynamic",
    "shortest_path_lifetime",
]


class NoRouteError(RuntimeError):
    pass


@dataclass(frozen=True)
class SensorNode:
    id: int
    x: float
    y: float
    energy: float = 1.0
    rate: float = 1.0  # negative at sinks

    def __post_init__(self):
        if self.energy <= 0:
            raise ValueError("initial energy must be positive")

    @property
    def is_sink(self) -> bool:
        return self.rate < 0


@dataclass(frozen=True)
class LinkSet:
    """Directed direct links plus cooperative links (src, dst) ->
    helper tuple."""

    direct: frozenset[tuple[int, int]]
    coop: dict[tuple[int, int], tuple[int, ...]]
    nearest: dict[int, int] = field(default_factory=dict)

    def direct_out(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.direct if a == i)

    def helpers(self, i: int, m: int) -> tuple[int, ...]:
        return self.coop[(i, m)]


@dataclass(frozen=True)
class FlowSolution:
    qhat: dict[tuple[int, int, bool], float]  # (src, dst, is_coop) -> flow
    lifetime: float
    energy_used: dict[int, float]
    status: str = "optimal"


@dataclass(frozen=True)
class CostParams:
    beta1: float = 2.0
    beta2: float = 2.0

    def __post_init__(self):
        if self.beta1 <= 0 or self.beta2 <= 0:
            raise ValueError("cost exponents must be positive")


def _distances(nodes: list[SensorNode]) -> dict[tuple[int, int], float]:
    d = {}
    for a in nodes:
        for b in nodes:
            if a.id < b.id:
                dist = math.hypot(a.x - b.x, a.y - b.y)
                if dist == 0.0:
                    raise ValueError(f"nodes {a.id} and {b.id} share a position")
                d[(a.id, b.id)] = d[(b.id, a.id)] = dist
    return d


def build_links(nodes: list[SensorNode], phy: PhyParams) -> LinkSet:
    """Direct links wherever the single-hop SNR threshold is met;
    cooperative links from each node through its nearest neighbor to
    targets whose combined received energy meets the threshold."""
    if len(nodes) < 2:
        raise ValueError("need at least two nodes")
    dist = _distances(nodes)
    a0 = phy.hop_range()
    threshold = phy.snr_min * phy.noise / (phy.power * phy.c0)  # on sum of d^-alpha

    direct = set()
    for a in nodes:
        for b in nodes:
            if a.id != b.id and dist[(a.id, b.id)] <= a0:
                direct.add((a.id, b.id))

    nearest: dict[int, int] = {}
    coop: dict[tuple[int, int], tuple[int, ...]] = {}
    sensors = [n for n in nodes if not n.is_sink]
    for src in sensors:
        candidates = sorted(
            (dist[(src.id, other.id)], other.id) for other in sensors if other.id != src.id
        )
        if not candidates:
            continue
        d_h, h = candidates[0]
        nearest[src.id] = h
        if d_h > a0:
            continue  # helper cannot decode the source
        for tgt in nodes:
            if tgt.id == src.id or (src.id, tgt.id) in direct:
                continue
            combined = dist[(src.id, tgt.id)] ** -phy.alpha + dist[(h, tgt.id)] ** -phy.alpha
            if combined >= threshold:
                coop[(src.id, tgt.id)] = (h,)
    return LinkSet(direct=frozenset(direct), coop=coop, nearest=nearest)


def _lp_variables(nodes, links, with_coop):
    sinks = {n.id for n in nodes if n.is_sink}
    direct_vars = sorted((i, j) for (i, j) in links.direct if i not in sinks)
    coop_vars = sorted(links.coop) if with_coop else []
    coop_vars = [(i, m) for (i, m) in coop_vars if i not in sinks]
    return sinks, direct_vars, coop_vars


def solve_lifetime_lp(
    nodes: list[SensorNode],
    links: LinkSet,
    with_coop: bool = True,
    tol: Tolerance = Tolerance(rel=1e-9),
) -> FlowSolution:
    """Max-min lifetime as an LP over lifetime-scaled flows.

    Variables: one flow per direct link, one per cooperative link (if
    enabled), slacks for the energy caps, and the lifetime itself.
    A cooperative unit of flow consumes one energy unit at the
    transmitter and one at each helper.
    """
    sinks, direct_vars, coop_vars = _lp_variables(nodes, links, with_coop)
    sensors = [n for n in nodes if not n.is_sink]
    nd, nc, ns = len(direct_vars), len(coop_vars), len(sensors)
    # columns: direct flows | coop flows | T | energy slacks
    n_cols = nd + nc + 1 + ns
    t_col = nd + nc
    col_of_direct = {lk: k for k, lk in enumerate(direct_vars)}
    col_of_coop = {lk: nd + k for k, lk in enumerate(coop_vars)}
    sensor_row = {n.id: r for r, n in enumerate(sensors)}

    rows = []
    rhs = []
    # Flow conservation at every non-sink node: out - in - rate*T = 0.
    for node in sensors:
        row = np.zeros(n_cols)
        for (i, j), k in col_of_direct.items():
            if i == node.id:
                row[k] += 1.0
            if j == node.id:
                row[k] -= 1.0
        for (i, m), k in col_of_coop.items():
            if i == node.id:
                row[k] += 1.0
            if m == node.id:
                row[k] -= 1.0
        row[t_col] = -node.rate
        rows.append(row)
        rhs.append(0.0)
    # Energy caps: transmissions + helper duty + slack = energy.
    for node in sensors:
        row = np.zeros(n_cols)
        for (i, _j), k in col_of_direct.items():
            if i == node.id:
                row[k] += 1.0
        for (i, m), k in col_of_coop.items():
            if i == node.id:
                row[k] += 1.0
            if node.id in links.coop.get((i, m), ()):
                row[k] += 1.0
        row[t_col + 1 + sensor_row[node.id]] = 1.0
        rows.append(row)
        rhs.append(node.energy)

    c = np.zeros(n_cols)
    c[t_col] = 1.0
    names = (
        [f"q_{i}_{j}" for i, j in direct_vars]
        + [f"qc_{i}_{m}" for i, m in coop_vars]
        + ["T"]
        + [f"s_{n.id}" for n in sensors]
    )
    sol = solve_lp(StandardLP(a=np.array(rows), b=np.array(rhs), c=c, names=tuple(names)), tol)
    if sol.status != "optimal":
        return FlowSolution(qhat={}, lifetime=0.0, energy_used={}, status=sol.status)

    qhat: dict[tuple[int, int, bool], float] = {}
    for (i, j), k in col_of_direct.items():
        if sol.x[k] > 0.0:
            qhat[(i, j, False)] = float(sol.x[k])
    for (i, m), k in col_of_coop.items():
        if sol.x[k] > 0.0:
            qhat[(i, m, True)] = float(sol.x[k])
    energy_used = {n.id: 0.0 for n in nodes}
    for (i, m, is_coop), q in qhat.items():
        energy_used[i] += q
        if is_coop:
            for h in links.coop[(i, m)]:
                energy_used[h] += q
    return FlowSolution(
        qhat=qhat,
        lifetime=float(sol.x[t_col]),
        energy_used=energy_used,
        status="optimal",
    )


def dynamic_cost(
    i: int,
    j: int,
    links: LinkSet,
    params: CostParams,
    initial: dict[int, float],
    remaining: dict[int, float],
) -> float:
    """Inverse-barrier link cost: grows without bound as the remaining
    energy of the transmitter or any helper runs out."""
    if (i, j) in links.direct:
        helpers: tuple[int, ...] = ()
    elif (i, j) in links.coop:
        helpers = links.coop[(i, j)]
    else:
        raise NoRouteError(f"no link {i} -> {j}")
    if remaining[i] < 1.0 or any(remaining[h] < 1.0 for h in helpers):
        return math.inf
    cost = (initial[i] / remaining[i]) ** params.beta1
    for h in helpers:
        cost += (initial[h] / remaining[h]) ** params.beta2
    return cost


def _least_cost_path(
    src: int,
    sinks: set[int],
    nodes_by_id: dict[int, SensorNode],
    links: LinkSet,
    params: CostParams,
    initial: dict[int, float],
    remaining: dict[int, float],
) -> list[tuple[int, int, bool]] | None:
    """Deterministic Dijkstra over direct+cooperative links; ties are
    broken toward lower predecessor ids."""
    dist = {src: 0.0}
    pred: dict[int, tuple[int, int, bool]] = {}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u in sinks:
            path = []
            v = u
            while v != src:
                edge = pred[v]
                path.append(edge)
                v = edge[0]
            return list(reversed(path))
        if u != src and nodes_by_id[u].is_sink:
            continue
        edges = [(v, False) for v in links.direct_out(u)]
        edges += [(m, True) for (a, m) in sorted(links.coop) if a == u]
        for v, is_coop in edges:
            w = dynamic_cost(u, v, links, params, initial, remaining)
            if not math.isfinite(w):
                continue
            nd = d + w
            better = v not in dist or nd < dist[v] - 1e-15
            tie = v in dist and abs(nd - dist[v]) <= 1e-15 and u < pred[v][0]
            if better or tie:
                dist[v] = nd
                pred[v] = (u, v, is_coop)
                heapq.heappush(heap, (nd, v))
    return None


def simulate_dynamic(
    nodes: list[SensorNode],
    links: LinkSet,
    params: CostParams = CostParams(),
    traffic=None,
    seed: int = 0,
    max_rounds: int = 10**6,
) -> float:
    """Round-based heuristic: every origin emits its per-round packets,
    each routed along the current least-cost path; energies are
    decremented one unit per transmission (helpers included).

    traffic maps (rng, node) to an integer packet count; the default
    emits round(node.rate) packets.  Returns completed rounds plus the
    delivered fraction of the failing round.
    """
    rng = np.random.default_rng(seed)
    if traffic is None:
        traffic = lambda _rng, node: int(round(node.rate))
    nodes_by_id = {n.id: n for n in nodes}
    sinks = {n.id for n in nodes if n.is_sink}
    initial = {n.id: n.energy for n in nodes}
    remaining = dict(initial)
    origins = sorted(n.id for n in nodes if n.rate > 0)

    for rnd in range(max_rounds):
        packets = [(o, traffic(rng, nodes_by_id[o])) for o in origins]
        emitted = sum(cnt for _o, cnt in packets)
        if emitted == 0:
            continue
        delivered = 0
        for origin, count in packets:
            for _ in range(count):
                path = _least_cost_path(
                    origin, sinks, nodes_by_id, links, params, initial, remaining
                )
                if path is None:
                    return rnd + delivered / emitted
                for (i, _j, is_coop) in path:
                    remaining[i] -= 1.0
                    if is_coop:
                        for h in links.coop[(i, _j)]:
                            remaining[h] -= 1.0
                delivered += 1
    return float(max_rounds)


def shortest_path_lifetime(nodes: list[SensorNode], links: LinkSet) -> float:
    """Static min-hop routing over direct links only: fixed paths,
    ties toward lower node ids, lifetime until the busiest node dies."""
    sinks = {n.id for n in nodes if n.is_sink}
    if not sinks:
        raise ValueError("network has no sink")
    # BFS hop counts from the sink set over (reversed) direct links.
    hops = {s: 0 for s in sinks}
    frontier = sorted(sinks)
    while frontier:
        nxt = []
        for v in frontier:
            for (i, j) in links.direct:
                if j == v and i not in hops:
                    hops[i] = hops[v] + 1
                    nxt.append(i)
        frontier = sorted(set(nxt))

    spend = {n.id: 0.0 for n in nodes}
    for node in nodes:
        if node.rate <= 0:
            continue
        if node.id not in hops:
            raise NoRouteError(f"origin {node.id} cannot reach any sink")
        v = node.id
        while v not in sinks:
            nxt = min(
                j for j in links.direct_out(v) if j in hops and hops[j] == hops[v] - 1
            )
            spend[v] += node.rate
            v = nxt
    lifetimes = [
        nodes_by.energy / spend[nodes_by.id]
        for nodes_by in nodes
        if spend[nodes_by.id] > 0
    ]
    if not lifetimes:
        raise NoRouteError("no node transmits anything")
    return min(lifetimes)
