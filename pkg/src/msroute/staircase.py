"""Hierarchical monotone staircase bipartitioning and routing segments.

A monotone staircase cut of the (sub-)floorplan corresponds one-to-one with a
predecessor-closed node set of the oriented block adjacency graph: absorbing
BAG sources grows the upper-left (MIS) or lower-left (MDS) side while its wall
boundary stays a monotone staircase.  The bipartitioner absorbs, at each step,
the source that minimizes the resulting cut-net count (ties to the smaller
block id) and stops at the balance point.

Recursing with alternating orientations yields the MSC tree: a full binary
tree with the blocks as leaves and exactly n-1 cuts as internal nodes.  Every
adjacency wall is consumed by exactly one cut (the tree node separating its
two blocks), so the cut walls plus the floorplan border cover all routing
channels.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum

from .adjacency import Axis, Bag, BagEdge, Orientation, Span, all_junctions, build_bag
from .errors import GeometryError, InternalError
from .floorplan import Floorplan, Net


class BalanceMode(str, Enum):
    NUMBER = "NUMBER"
    AREA = "AREA"


@dataclass
class MsCut:
    id: int
    orientation: Orientation
    left_set: tuple[int, ...]   # upper-left blocks (MIS) / lower-left (MDS)
    right_set: tuple[int, ...]
    cut_edges: list[BagEdge]    # staircase order
    cut_nets: list[int]
    # bounding boxes of the cut nets' pins restricted to this node's blocks,
    # aligned with cut_nets; used for per-segment capacity apportionment
    cut_net_boxes: list[tuple[float, float, float, float]] = field(default_factory=list)


@dataclass
class MscNode:
    cut: MsCut | None = None
    block_id: int | None = None
    left: "MscNode | None" = None
    right: "MscNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.block_id is not None


@dataclass
class MscTree:
    root: MscNode
    cuts: list[MsCut]  # preorder

    @property
    def n_internal(self) -> int:
        return len(self.cuts)


@dataclass
class Segment:
    """Atomic routing resource: a junction-bounded piece of a wall.

    region_id is the owning cut's id, or -(side+1) for the four border
    (non-MS) walls.  Layer state (u, curr_layer) is attached by the routing
    graph before use.
    """

    id: int
    region_id: int
    axis: Axis
    fixed: float
    lo: float
    hi: float
    j1: int
    j2: int
    r: int = 0
    u: list[int] | None = None
    curr_layer: int = 1

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def span(self) -> Span:
        return Span(self.axis, self.fixed, self.lo, self.hi)


# ---------------------------------------------------------------------------
# bipartitioning

class _NetSide:
    """Per-net bookkeeping for cut counting during the greedy sweep."""

    __slots__ = ("net_id", "total", "in_a", "per_block", "box")

    def __init__(self, net_id, per_block, box):
        self.net_id = net_id
        self.per_block = per_block
        self.total = sum(per_block.values())
        self.in_a = 0
        self.box = box

    @property
    def is_cut(self) -> bool:
        return 0 < self.in_a < self.total


def _restrict_nets(nets: list[Net], node_set: set[int]):
    views: list[_NetSide] = []
    for net in nets:
        per_block: dict[int, int] = {}
        xs, ys = [], []
        for pin in net.pins:
            if pin.block_id in node_set:
                per_block[pin.block_id] = per_block.get(pin.block_id, 0) + 1
                xs.append(pin.x)
                ys.append(pin.y)
        if sum(per_block.values()) >= 2:
            box = (min(xs), min(ys), max(xs), max(ys))
            views.append(_NetSide(net.id, per_block, box))
    return views


def _staircase_sorted(edges: list[BagEdge], orientation: Orientation) -> list[BagEdge]:
    if orientation is Orientation.MIS:
        return sorted(edges, key=lambda e: (e.span.min_x, e.span.min_y, e.span.max_x, e.span.max_y))
    return sorted(edges, key=lambda e: (e.span.min_x, -e.span.max_y, e.span.max_x, -e.span.min_y))


def is_monotone_chain(edges: list[BagEdge], orientation: Orientation) -> bool:
    """True when the cut walls, in staircase order, advance monotonically in x
    and in y (non-decreasing for MIS, non-increasing for MDS)."""
    ordered = _staircase_sorted(edges, orientation)
    for a, b in zip(ordered, ordered[1:]):
        if a.span.max_x > b.span.min_x:
            return False
        if orientation is Orientation.MIS and a.span.max_y > b.span.min_y:
            return False
        if orientation is Orientation.MDS and a.span.min_y < b.span.max_y:
            return False
    return True


def bipartition(
    bag: Bag,
    nets: list[Net],
    balance: BalanceMode = BalanceMode.NUMBER,
    areas: dict[int, float] | None = None,
) -> MsCut:
    """Split the bag's blocks by a balanced monotone staircase cut.

    Returns an MsCut whose left_set is the absorbed (upper/lower-left) side.
    The cut id is assigned by build_msc_tree; standalone calls get id 0.
    """
    nodes = sorted(bag.nodes)
    n_sub = len(nodes)
    if n_sub < 2:
        raise ValueError("bipartition needs at least 2 blocks")
    if balance is BalanceMode.AREA and areas is None:
        raise ValueError("AREA balance requires block areas")

    node_set = set(nodes)
    succ: dict[int, list[int]] = {v: [] for v in nodes}
    indeg: dict[int, int] = {v: 0 for v in nodes}
    in_edges: dict[int, list[int]] = {v: [] for v in nodes}
    out_edges: dict[int, list[int]] = {v: [] for v in nodes}
    for idx, e in enumerate(bag.edges):
        succ[e.src].append(e.dst)
        indeg[e.dst] += 1
        in_edges[e.dst].append(idx)
        out_edges[e.src].append(idx)

    views = _restrict_nets(nets, node_set)
    block_to_views: dict[int, list[tuple[_NetSide, int]]] = {v: [] for v in nodes}
    for view in views:
        for bid, count in view.per_block.items():
            block_to_views[bid].append((view, count))

    cut_count = sum(1 for v in views if v.is_cut)  # always 0 initially

    def eval_candidate(v: int) -> int:
        cc = cut_count
        for view, count in block_to_views[v]:
            was = view.is_cut
            now = (view.in_a + count) < view.total
            cc += int(now) - int(was)
        return cc

    def absorb(v: int):
        nonlocal cut_count
        for view, count in block_to_views[v]:
            was = view.is_cut
            view.in_a += count
            cut_count += int(view.is_cut) - int(was)

    def unabsorb(v: int):
        nonlocal cut_count
        for view, count in block_to_views[v]:
            was = view.is_cut
            view.in_a -= count
            cut_count += int(view.is_cut) - int(was)

    sources = sorted(v for v in nodes if indeg[v] == 0)
    a_set: set[int] = set()
    absorbed: list[int] = []
    a_area = 0.0
    total_area = sum(areas[v] for v in nodes) if areas else 0.0
    cut_idx: set[int] = set()

    def cut_after(v: int) -> set[int]:
        # v is a source, so every in-edge of v comes from the absorbed side
        return (cut_idx - set(in_edges[v])) | set(out_edges[v])

    def absorb_next():
        # in staircase-shaped sub-regions not every source keeps the frontier
        # a single monotone chain; only admissible sources may be absorbed
        nonlocal a_area, cut_idx
        best = None
        best_key = None
        best_cut = None
        for v in sources:
            new_cut = cut_after(v)
            if not is_monotone_chain([bag.edges[i] for i in new_cut], bag.orientation):
                continue
            key = (eval_candidate(v), v)
            if best_key is None or key < best_key:
                best, best_key, best_cut = v, key, new_cut
        if best is None:
            raise InternalError("no source keeps the cut a monotone staircase")
        sources.remove(best)
        absorb(best)
        a_set.add(best)
        absorbed.append(best)
        cut_idx = best_cut
        if areas:
            a_area += areas[best]
        for w in succ[best]:
            indeg[w] -= 1
            if indeg[w] == 0:
                sources.append(w)
        sources.sort()

    if balance is BalanceMode.NUMBER:
        for _ in range(n_sub // 2):
            absorb_next()
    else:
        while 2.0 * a_area < total_area and len(a_set) < n_sub - 1:
            absorb_next()
        if len(absorbed) > 1:
            last = absorbed[-1]
            with_last = abs(total_area - 2.0 * a_area)
            without = abs(total_area - 2.0 * (a_area - areas[last]))
            if without < with_last:
                unabsorb(last)
                a_set.remove(last)
                absorbed.pop()
                a_area -= areas[last]

    cut_edges = []
    for e in bag.edges:
        src_in, dst_in = e.src in a_set, e.dst in a_set
        if src_in and not dst_in:
            cut_edges.append(e)
        elif dst_in and not src_in:
            raise InternalError("cut is not predecessor-closed; not a staircase")
    if not is_monotone_chain(cut_edges, bag.orientation):
        raise InternalError("bipartition produced a non-monotone cut")

    cut_net_ids = []
    cut_net_boxes = []
    for view in views:
        if view.is_cut:
            cut_net_ids.append(view.net_id)
            cut_net_boxes.append(view.box)

    right = tuple(v for v in nodes if v not in a_set)
    return MsCut(
        id=0,
        orientation=bag.orientation,
        left_set=tuple(sorted(a_set)),
        right_set=right,
        cut_edges=_staircase_sorted(cut_edges, bag.orientation),
        cut_nets=cut_net_ids,
        cut_net_boxes=cut_net_boxes,
    )


def _induce(bag: Bag, subset: set[int]) -> Bag:
    edges = [e for e in bag.edges if e.src in subset and e.dst in subset]
    return Bag(bag.orientation, sorted(subset), edges)


def build_msc_tree(
    fp: Floorplan,
    nets: list[Net] | None = None,
    balance: BalanceMode = BalanceMode.NUMBER,
) -> MscTree:
    """Recursively bipartition the floorplan; root is MIS, levels alternate."""
    fp.require_valid()
    if nets is None:
        nets = fp.nets
    full = {
        Orientation.MIS: build_bag(fp, Orientation.MIS),
        Orientation.MDS: build_bag(fp, Orientation.MDS),
    }
    areas = {b.id: b.area for b in fp.blocks}
    cuts: list[MsCut] = []

    def rec(block_ids: tuple[int, ...], depth: int) -> MscNode:
        if len(block_ids) == 1:
            return MscNode(block_id=block_ids[0])
        orientation = Orientation.MIS if depth % 2 == 0 else Orientation.MDS
        sub = _induce(full[orientation], set(block_ids))
        cut = bipartition(sub, nets, balance, areas)
        cut.id = len(cuts)
        cuts.append(cut)
        node = MscNode(cut=cut)
        node.left = rec(cut.left_set, depth + 1)
        node.right = rec(cut.right_set, depth + 1)
        return node

    root = rec(tuple(range(len(fp.blocks))), 0)
    return MscTree(root=root, cuts=cuts)


# ---------------------------------------------------------------------------
# segments

def extract_segments(tree: MscTree, fp: Floorplan, junctions) -> list[Segment]:
    """Split every cut wall and border wall at the junctions lying on it.

    `junctions` must be the full set (interior T-junctions plus boundary
    corners, e.g. from adjacency.all_junctions); each resulting segment is
    bounded by exactly two of them.  Junction incident_segments lists are
    populated as a side effect.
    """
    vlines: dict[float, list[tuple[float, int]]] = {}
    hlines: dict[float, list[tuple[float, int]]] = {}
    for j in junctions:
        vlines.setdefault(j.x, []).append((j.y, j.id))
        hlines.setdefault(j.y, []).append((j.x, j.id))
    for line in vlines.values():
        line.sort()
    for line in hlines.values():
        line.sort()

    raw: list[tuple[Span, int]] = []
    for cut in tree.cuts:
        for e in cut.cut_edges:
            raw.append((e.span, cut.id))
    _, _, _, _, bbox = fp.snapped_rects()
    bx1, by1, bx2, by2 = bbox
    for side_idx, span in enumerate((
        Span(Axis.H, by1, bx1, bx2),
        Span(Axis.H, by2, bx1, bx2),
        Span(Axis.V, bx1, by1, by2),
        Span(Axis.V, bx2, by1, by2),
    )):
        raw.append((span, -(side_idx + 1)))

    pieces: list[tuple[Span, int, int, int]] = []
    for span, region in raw:
        line = (vlines if span.axis is Axis.V else hlines).get(span.fixed)
        if line is None:
            raise GeometryError(f"wall at {span.fixed} has no junctions on it")
        on_span = [(c, jid) for c, jid in line if span.lo <= c <= span.hi]
        if len(on_span) < 2 or on_span[0][0] != span.lo or on_span[-1][0] != span.hi:
            raise GeometryError(
                f"wall {span} endpoints are not junction-bounded ({on_span})")
        for (c1, ja), (c2, jb) in zip(on_span, on_span[1:]):
            if c2 <= c1:
                raise GeometryError(f"zero-length piece on wall {span}")
            pieces.append((Span(span.axis, span.fixed, c1, c2), region, ja, jb))

    pieces.sort(key=lambda p: (p[0].axis.value, p[0].fixed, p[0].lo))
    segments = [
        Segment(id=i, region_id=region, axis=span.axis, fixed=span.fixed,
                lo=span.lo, hi=span.hi, j1=ja, j2=jb)
        for i, (span, region, ja, jb) in enumerate(pieces)
    ]

    by_id = {j.id: j for j in junctions}
    for j in junctions:
        j.incident_segments.clear()
    for seg in segments:
        by_id[seg.j1].incident_segments.append(seg.id)
        by_id[seg.j2].incident_segments.append(seg.id)
    return segments


def _box_intersects_span(box, span: Span, tol: float) -> bool:
    x1, y1, x2, y2 = box
    if span.axis is Axis.V:
        return (x1 - tol <= span.fixed <= x2 + tol
                and max(span.lo, y1) <= min(span.hi, y2) + tol)
    return (y1 - tol <= span.fixed <= y2 + tol
            and max(span.lo, x1) <= min(span.hi, x2) + tol)


def _net_box(net: Net) -> tuple[float, float, float, float]:
    xs = [p.x for p in net.pins]
    ys = [p.y for p in net.pins]
    return (min(xs), min(ys), max(xs), max(ys))


def estimate_capacity(seg: Segment, cut: MsCut | None, nets: list[Net], tol: float = 1e-9) -> int:
    """Reference capacity of a segment (nets per base layer).

    Interior segments (cut is the owning ms-cut) count the nets whose pin
    bounding box touches the segment's wall — the nets that may need to cross
    it when routed within their box — with a floor of 1 so no interior wall
    disconnects the junction graph.  Border (non-MS) segments count the pins
    sitting on the wall piece itself; zero makes the segment unusable.
    """
    if cut is not None or seg.region_id >= 0:
        count = sum(1 for net in nets if _box_intersects_span(_net_box(net), seg.span, tol))
        return max(1, count)
    count = 0
    for net in nets:
        for pin in net.pins:
            along, perp = (pin.y, pin.x) if seg.axis is Axis.V else (pin.x, pin.y)
            if abs(perp - seg.fixed) <= tol and seg.lo - tol <= along <= seg.hi + tol:
                count += 1
    return count


def assign_capacities(segments: list[Segment], tree: MscTree, nets: list[Net], tol: float) -> None:
    """Vectorized estimate_capacity over all segments."""
    import numpy as np

    if not segments:
        return
    interior = [s for s in segments if s.region_id >= 0]
    border = [s for s in segments if s.region_id < 0]
    if nets and interior:
        boxes = np.array([_net_box(net) for net in nets])  # k x 4
        bx1, by1, bx2, by2 = boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3]
        for seg in interior:
            if seg.axis is Axis.V:
                hit = (bx1 - tol <= seg.fixed) & (seg.fixed <= bx2 + tol) \
                    & (np.maximum(seg.lo, by1) <= np.minimum(seg.hi, by2) + tol)
            else:
                hit = (by1 - tol <= seg.fixed) & (seg.fixed <= by2 + tol) \
                    & (np.maximum(seg.lo, bx1) <= np.minimum(seg.hi, bx2) + tol)
            seg.r = max(1, int(hit.sum()))
    else:
        for seg in interior:
            seg.r = 1
    for seg in border:
        seg.r = estimate_capacity(seg, None, nets, tol)


# ---------------------------------------------------------------------------
# dumps

def tree_text(tree: MscTree) -> str:
    """Indented text rendering of the MSC tree."""
    out = io.StringIO()

    def rec(node: MscNode, depth: int):
        pad = "  " * depth
        if node.is_leaf:
            out.write(f"{pad}block {node.block_id}\n")
            return
        cut = node.cut
        out.write(
            f"{pad}cut {cut.id} [{cut.orientation.value}] "
            f"left={list(cut.left_set)} right={list(cut.right_set)} "
            f"cut_nets={len(cut.cut_nets)}\n"
        )
        rec(node.left, depth + 1)
        rec(node.right, depth + 1)

    rec(tree.root, 0)
    return out.getvalue()


def segments_csv(segments: list[Segment]) -> str:
    lines = ["id,axis,fixed,lo,hi,r"]
    for s in segments:
        lines.append(f"{s.id},{s.axis.value},{s.fixed:.6f},{s.lo:.6f},{s.hi:.6f},{s.r}")
    return "\n".join(lines) + "\n"
