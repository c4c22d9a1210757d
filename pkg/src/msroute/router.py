"""Congestion-aware routing over the junction graph.

Nets route one at a time in non-decreasing (HPWL, degree) order.  A
multi-terminal net is first decomposed into t-1 two-terminal pairs by a
minimum spanning tree over pairwise pin HPWL; each pair routes by Dijkstra
on the net's GSRG under the live congestion weights, charging segment usage
after every successful pair.  If any pair is unroutable the whole net fails
and the usage charged for its earlier pairs is rolled back.

Search direction picks the Dijkstra source of each pair: FWD starts from the
minimum-x pin (minimum y on ties), BACK from the maximum-x pin.  Both explore
the same weighted graph but break ties differently, so they may return
different equal-weight paths with different via counts.
"""

from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum

from .adjacency import all_junctions
from .errors import PinHostError
from .floorplan import Floorplan, Net, Pin
from .routegraph import (
    UNUSABLE,
    CapacityProfile,
    Gsrg,
    JunctionGraph,
    LayerModel,
    ProfileKind,
    build_gsrg,
    build_junction_graph,
    charge,
    edge_weight,
    init_layer_state,
    pin_edge_weights,
)
from .staircase import BalanceMode, MscTree, Segment, assign_capacities, build_msc_tree, extract_segments

logger = logging.getLogger("msroute")


class SearchDir(str, Enum):
    FWD = "FWD"
    BACK = "BACK"


#: the six named run configurations: search direction x capacity profile
PRESETS: dict[str, tuple[SearchDir, ProfileKind]] = {
    "FCN": (SearchDir.FWD, ProfileKind.UNIFORM),
    "FCH": (SearchDir.FWD, ProfileKind.HYPERBOLIC),
    "FCL": (SearchDir.FWD, ProfileKind.LADDER),
    "BCN": (SearchDir.BACK, ProfileKind.UNIFORM),
    "BCH": (SearchDir.BACK, ProfileKind.HYPERBOLIC),
    "BCL": (SearchDir.BACK, ProfileKind.LADDER),
}


@dataclass(frozen=True)
class RunConfig:
    search: SearchDir
    profile_kind: ProfileKind
    layers: int = 8
    layer_model: LayerModel = LayerModel.RESERVED_HV
    balance: BalanceMode = BalanceMode.NUMBER

    @property
    def profile(self) -> CapacityProfile:
        return CapacityProfile(self.profile_kind, self.layers, self.layer_model)

    @property
    def name(self) -> str:
        for name, (search, kind) in PRESETS.items():
            if search is self.search and kind is self.profile_kind:
                return name
        return f"{self.search.value}-{self.profile_kind.value}"

    @classmethod
    def from_name(cls, name: str, **kwargs) -> "RunConfig":
        search, kind = PRESETS[name.upper()]
        return cls(search=search, profile_kind=kind, **kwargs)


@dataclass
class RoutePath:
    net_id: int
    source_pin: int
    sink_pin: int
    junctions: list[int]          # visited junction sequence
    segments: list[int]           # traversed segments, len(junctions) - 1
    entry_host: int
    exit_host: int
    entry_dist: float             # Manhattan pin -> first junction
    exit_dist: float
    length: float                 # segment lengths + pin escapes
    weight: float                 # congestion-weighted cost at route time
    layers: list[int] = field(default_factory=list)
    vias: int = 0


@dataclass
class Smst:
    """A net's routed Steiner tree: union of its pair paths."""

    net_id: int
    paths: list[RoutePath]
    segments: list[int]           # unique, sorted
    steiner_points: list[int]     # junctions where branches merge
    wirelength: float             # shared segments counted once
    vias: int


@dataclass
class NetResult:
    net_id: int
    status: str                   # ROUTED | FAILED
    smst: Smst | None = None
    failure_pair: tuple[int, int] | None = None
    reason: str = ""


@dataclass
class RoutingState:
    """Everything route_all mutates: segments carry the live usage."""

    fp: Floorplan
    config: RunConfig
    profile: CapacityProfile
    nets: list[Net]
    tree: MscTree
    junctions: list
    segments: list[Segment]
    graph: JunctionGraph

    @classmethod
    def prepare(cls, fp: Floorplan, config: RunConfig, nets: list[Net] | None = None) -> "RoutingState":
        fp.require_valid()
        if nets is None:
            nets = fp.nets
        profile = config.profile
        tree = build_msc_tree(fp, nets, config.balance)
        junctions = all_junctions(fp)
        segments = extract_segments(tree, fp, junctions)
        assign_capacities(segments, tree, nets, fp.tol)
        init_layer_state(segments, profile)
        graph = build_junction_graph(segments, junctions)
        n = len(fp.blocks)
        logger.debug(
            "junction graph: %d nodes, %d usable edges (3n-7 = %d)",
            graph.n_nodes, len(graph.edges), 3 * n - 7,
        )
        return cls(fp=fp, config=config, profile=profile, nets=nets, tree=tree,
                   junctions=junctions, segments=segments, graph=graph)


@dataclass
class RouteRun:
    state: RoutingState
    results: list[NetResult]      # net id order
    order: list[int]              # net ids in routed order
    runtime: float


# ---------------------------------------------------------------------------
# ordering and decomposition

def order_nets(nets: list[Net]) -> list[Net]:
    """Routing priority: non-decreasing HPWL, then degree, then net id."""
    return sorted(nets, key=lambda n: (n.hpwl, n.degree, n.id))


def identify_source(pin_a: Pin, pin_b: Pin, search: SearchDir) -> tuple[Pin, Pin]:
    """Pick the Dijkstra source of a pin pair.

    FWD: minimum x, minimum y on an x-tie.  BACK: maximum x / maximum y.
    Identical positions fall back to the given order (FWD) or its reverse.
    """
    ka, kb = (pin_a.x, pin_a.y), (pin_b.x, pin_b.y)
    if search is SearchDir.FWD:
        return (pin_a, pin_b) if ka <= kb else (pin_b, pin_a)
    return (pin_a, pin_b) if ka > kb else (pin_b, pin_a)


def _manhattan(a: Pin, b: Pin) -> float:
    return abs(a.x - b.x) + abs(a.y - b.y)


def decompose_net(net: Net) -> list[tuple[int, int]]:
    """Prim MST over the pin clique under pairwise-HPWL (Manhattan) weights.

    Returns t-1 pin-index pairs; equal-weight candidates break ties toward
    the smaller (sorted) pin-id pair.
    """
    t = net.degree
    if t <= 2:
        return [(0, 1)]
    pins = net.pins
    in_tree = [False] * t
    in_tree[0] = True
    best: list[tuple[float, int, int] | None] = [None] * t  # (dist, lo, hi) per candidate
    for j in range(1, t):
        d = _manhattan(pins[0], pins[j])
        best[j] = (d, 0, j)
    edges: list[tuple[int, int]] = []
    for _ in range(t - 1):
        pick = None
        for j in range(t):
            if not in_tree[j] and (pick is None or best[j] < best[pick]):
                pick = j
        d, lo, hi = best[pick]
        edges.append((lo, hi))
        in_tree[pick] = True
        best[pick] = None
        for j in range(t):
            if in_tree[j]:
                continue
            nd = _manhattan(pins[pick], pins[j])
            cand = (nd, *sorted((pick, j)))
            if cand < best[j]:
                best[j] = cand
    return edges


# ---------------------------------------------------------------------------
# shortest path

def dijkstra_ssp(gsrg: Gsrg, profile: CapacityProfile, source_pin: int, sink_pin: int) -> RoutePath | None:
    """Minimum-weight source->sink path under the current congestion weights.

    Runs on the junction level with the two pin-junction edges of each
    terminal folded into the seed/finish distances; unusable edges are
    skipped.  Ties expand the lower junction id first.  Returns None when the
    sink is unreachable.
    """
    jg = gsrg.base
    segs = jg.segments
    src, dst = gsrg.pins[source_pin], gsrg.pins[sink_pin]
    sw1, sw2 = pin_edge_weights(src, jg, profile)
    dw1, dw2 = pin_edge_weights(dst, jg, profile)
    sink_w: dict[int, float] = {}
    if dw1 != UNUSABLE:
        sink_w[dst.j1] = dw1
    if dw2 != UNUSABLE:
        sink_w[dst.j2] = min(dw2, sink_w.get(dst.j2, UNUSABLE))

    inf = math.inf
    dist = [inf] * jg.n_nodes
    pred_j = [-1] * jg.n_nodes
    pred_s = [-1] * jg.n_nodes
    heap: list[tuple[float, int]] = []
    for j, w in ((src.j1, sw1), (src.j2, sw2)):
        if w != UNUSABLE and w < dist[j]:
            dist[j] = w
            heapq.heappush(heap, (w, j))

    best = inf
    best_j = -1
    adj = jg.adj
    while heap:
        d, j = heapq.heappop(heap)
        if d > dist[j]:
            continue
        if d > best:
            break
        w_sink = sink_w.get(j)
        if w_sink is not None:
            cand = d + w_sink
            if cand < best or (cand == best and (best_j == -1 or j < best_j)):
                best, best_j = cand, j
        for nb, sid in adj[j]:
            w = edge_weight(segs[sid], profile)
            if w == UNUSABLE:
                continue
            nd = d + w
            if nd < dist[nb]:
                dist[nb] = nd
                pred_j[nb] = j
                pred_s[nb] = sid
                heapq.heappush(heap, (nd, nb))

    if best_j < 0:
        return None

    seq_j = [best_j]
    seq_s: list[int] = []
    while pred_j[seq_j[-1]] != -1:
        seq_s.append(pred_s[seq_j[-1]])
        seq_j.append(pred_j[seq_j[-1]])
    seq_j.reverse()
    seq_s.reverse()

    entry_dist = src.d1 if seq_j[0] == src.j1 else src.d2
    exit_dist = dst.d1 if best_j == dst.j1 else dst.d2
    length = sum(segs[s].length for s in seq_s) + entry_dist + exit_dist
    return RoutePath(
        net_id=gsrg.net.id,
        source_pin=source_pin,
        sink_pin=sink_pin,
        junctions=seq_j,
        segments=seq_s,
        entry_host=src.host_seg,
        exit_host=dst.host_seg,
        entry_dist=entry_dist,
        exit_dist=exit_dist,
        length=length,
        weight=best,
    )


def count_vias(path: RoutePath) -> int:
    """Unit layer changes along the path, with pins living on layer 1."""
    if not path.layers:
        return 0
    vias = abs(1 - path.layers[0]) + abs(path.layers[-1] - 1)
    for a, b in zip(path.layers, path.layers[1:]):
        vias += abs(a - b)
    return vias


# ---------------------------------------------------------------------------
# per-net routing

def identify_steiner_points(net: Net, paths: list[RoutePath], segments: list[Segment]) -> Smst:
    """Merge a net's pair paths into its routed tree.

    Shared segments and shared pin escapes count once toward wirelength.
    Steiner points are the non-terminal branch points: junctions where three
    or more distinct routed segments meet.
    """
    seg_ids = sorted({sid for p in paths for sid in p.segments})
    pin_edges = set()
    for p in paths:
        pin_edges.add((p.source_pin, p.junctions[0], p.entry_dist))
        pin_edges.add((p.sink_pin, p.junctions[-1], p.exit_dist))
    wirelength = sum(segments[sid].length for sid in seg_ids)
    wirelength += sum(d for _, _, d in pin_edges)

    incident: dict[int, set] = {}
    for sid in seg_ids:
        seg = segments[sid]
        incident.setdefault(seg.j1, set()).add(sid)
        incident.setdefault(seg.j2, set()).add(sid)
    steiner = sorted(j for j, edges in incident.items() if len(edges) >= 3)

    return Smst(
        net_id=net.id,
        paths=paths,
        segments=seg_ids,
        steiner_points=steiner,
        wirelength=wirelength,
        vias=sum(p.vias for p in paths),
    )


def _charge_path(state: RoutingState, path: RoutePath,
                 charged: dict[int, int], saved: dict[int, tuple[list[int], int]]) -> None:
    """Charge one unit of usage for the net on every new segment of the path.

    `charged` dedupes per net (a net pays a shared segment once); `saved`
    snapshots each touched segment for rollback.
    """
    for sid in list(path.segments) + [path.entry_host, path.exit_host]:
        if sid in charged:
            continue
        seg = state.segments[sid]
        if sid not in saved:
            saved[sid] = (seg.u.copy(), seg.curr_layer)
        charged[sid] = charge(seg, state.profile)
    path.layers = [charged[sid] for sid in path.segments]
    path.vias = count_vias(path)


def _rollback(state: RoutingState, saved: dict[int, tuple[list[int], int]]) -> None:
    for sid, (u, cur) in saved.items():
        seg = state.segments[sid]
        seg.u = u
        seg.curr_layer = cur


def route_net(state: RoutingState, net: Net) -> NetResult:
    """Route one net; on any pair failure the net fails and its usage rolls back."""
    try:
        gsrg = build_gsrg(state.graph, net)
    except PinHostError as exc:
        return NetResult(net_id=net.id, status="FAILED", reason=str(exc))

    pairs = [(0, 1)] if net.degree == 2 else decompose_net(net)
    pairs.sort(key=lambda pr: (_manhattan(net.pins[pr[0]], net.pins[pr[1]]), pr[0], pr[1]))

    saved: dict[int, tuple[list[int], int]] = {}
    charged: dict[int, int] = {}
    paths: list[RoutePath] = []
    for i, j in pairs:
        a, b = net.pins[i], net.pins[j]
        src_pin, _ = identify_source(a, b, state.config.search)
        si, ti = (i, j) if src_pin is a else (j, i)
        path = dijkstra_ssp(gsrg, state.profile, si, ti)
        if path is None:
            _rollback(state, saved)
            return NetResult(net_id=net.id, status="FAILED", failure_pair=(i, j),
                             reason=f"no usable path for pins {i}-{j}")
        _charge_path(state, path, charged, saved)
        paths.append(path)

    smst = identify_steiner_points(net, paths, state.segments)
    return NetResult(net_id=net.id, status="ROUTED", smst=smst)


def route_all(state: RoutingState) -> RouteRun:
    """Route every net in priority order; failures are recorded, not raised."""
    ordered = order_nets(state.nets)
    t0 = time.perf_counter()
    by_id: dict[int, NetResult] = {}
    for net in ordered:
        by_id[net.id] = route_net(state, net)
    runtime = time.perf_counter() - t0
    results = [by_id[net.id] for net in state.nets]
    return RouteRun(state=state, results=results, order=[n.id for n in ordered], runtime=runtime)


def route_floorplan(fp: Floorplan, config: RunConfig, nets: list[Net] | None = None) -> RouteRun:
    """Build all routing structures for fp and route its nets under config."""
    state = RoutingState.prepare(fp, config, nets)
    return route_all(state)
