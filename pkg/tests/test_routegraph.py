"""Capacity profiles, layer state, junction graph and GSRG construction."""

import math

import pytest

from msroute import (
    UNUSABLE,
    Axis,
    CapacityProfile,
    LayerModel,
    Net,
    Pin,
    PinHostError,
    ProfileKind,
    Segment,
    advance_layer,
    all_junctions,
    build_gsrg,
    build_junction_graph,
    build_msc_tree,
    capacity_at,
    charge,
    compute_hpwl,
    edge_weight,
    effective_layer,
    extract_segments,
    generate_random_floorplan,
    init_layer_state,
)
from msroute.routegraph import pin_edge_weights

from test_floorplan import make_fp


def make_seg(seg_id=0, axis=Axis.H, length=100.0, r=10, profile=None):
    seg = Segment(id=seg_id, region_id=0, axis=axis, fixed=0.0, lo=0.0, hi=length, j1=0, j2=1)
    seg.r = r
    if profile is not None:
        init_layer_state([seg], profile)
    return seg


UNIFORM8 = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.UNRESERVED)


# ---------------------------------------------------------------------------
# capacity profiles

def test_capacity_at_examples():
    assert capacity_at(CapacityProfile(ProfileKind.UNIFORM, 8), 8, 5) == 8
    assert capacity_at(CapacityProfile(ProfileKind.HYPERBOLIC, 8), 8, 4) == 2
    assert capacity_at(CapacityProfile(ProfileKind.LADDER, 8), 8, 3) == 4


def test_capacity_layer_one_equals_r():
    for kind in ProfileKind:
        profile = CapacityProfile(kind, 8)
        for r in (1, 3, 8, 64):
            assert capacity_at(profile, r, 1) == r


def test_capacity_non_increasing_in_layer():
    for kind in ProfileKind:
        profile = CapacityProfile(kind, 8)
        for r in range(1, 65):
            caps = [capacity_at(profile, r, l) for l in range(1, 9)]
            assert caps == sorted(caps, reverse=True)


def test_profile_ordering():
    for r in range(1, 65):
        for layer in range(1, 9):
            hyp = capacity_at(CapacityProfile(ProfileKind.HYPERBOLIC, 8), r, layer)
            lad = capacity_at(CapacityProfile(ProfileKind.LADDER, 8), r, layer)
            uni = capacity_at(CapacityProfile(ProfileKind.UNIFORM, 8), r, layer)
            assert hyp <= lad <= uni


def test_capacity_layer_out_of_range():
    profile = CapacityProfile(ProfileKind.UNIFORM, 4)
    with pytest.raises(ValueError):
        capacity_at(profile, 8, 5)
    with pytest.raises(ValueError):
        capacity_at(profile, 8, 0)


# ---------------------------------------------------------------------------
# edge weight and layers

def test_edge_weight_zero_usage_is_length():
    seg = make_seg(length=100.0, r=10, profile=UNIFORM8)
    assert edge_weight(seg, UNIFORM8) == pytest.approx(100.0)


def test_edge_weight_half_full_doubles():
    seg = make_seg(length=100.0, r=10, profile=UNIFORM8)
    seg.u[0] = 5
    assert edge_weight(seg, UNIFORM8) == pytest.approx(200.0)


def test_edge_weight_unusable_at_top_layer():
    profile = CapacityProfile(ProfileKind.UNIFORM, 1, LayerModel.UNRESERVED)
    seg = make_seg(length=100.0, r=3, profile=profile)
    seg.u[0] = 3
    assert edge_weight(seg, profile) == UNUSABLE
    assert math.isinf(edge_weight(seg, profile))


def test_edge_weight_strictly_increasing_in_usage():
    seg = make_seg(length=50.0, r=10, profile=UNIFORM8)
    last = 0.0
    for u in range(10):
        seg.u[0] = u
        w = edge_weight(seg, UNIFORM8)
        assert w > last
        last = w


def test_zero_capacity_segment_is_unusable():
    seg = make_seg(r=0, profile=UNIFORM8)
    assert edge_weight(seg, UNIFORM8) == UNUSABLE


def test_advance_layer_reserved_parity():
    profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.RESERVED_HV)
    seg = make_seg(axis=Axis.H, r=2, profile=profile)
    seg.u[0] = 2
    assert advance_layer(seg, profile) == 3
    assert seg.curr_layer == 3


def test_advance_layer_unreserved_increments():
    profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.UNRESERVED)
    seg = make_seg(axis=Axis.V, r=1, profile=profile)
    seg.curr_layer = 2
    seg.u[1] = 1
    assert advance_layer(seg, profile) == 3


def test_advance_layer_saturated():
    profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.RESERVED_HV)
    seg = make_seg(axis=Axis.H, r=1, profile=profile)
    seg.curr_layer = 7
    seg.u[6] = 1
    assert advance_layer(seg, profile) is None
    assert seg.curr_layer == 7


def test_advance_layer_requires_saturation():
    profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.UNRESERVED)
    seg = make_seg(r=5, profile=profile)
    with pytest.raises(ValueError):
        advance_layer(seg, profile)


def test_reserved_vertical_segments_start_on_layer_two():
    profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.RESERVED_HV)
    seg = make_seg(axis=Axis.V, r=1, profile=profile)
    assert seg.curr_layer == 2
    assert effective_layer(seg, profile) == 2


def test_reserved_vertical_with_single_layer_is_unusable():
    profile = CapacityProfile(ProfileKind.UNIFORM, 1, LayerModel.RESERVED_HV)
    seg = make_seg(axis=Axis.V, r=5, profile=profile)
    assert effective_layer(seg, profile) is None
    assert edge_weight(seg, profile) == UNUSABLE


def test_charge_fills_then_advances():
    profile = CapacityProfile(ProfileKind.HYPERBOLIC, 4, LayerModel.UNRESERVED)
    seg = make_seg(r=2, profile=profile)
    layers = [charge(seg, profile) for _ in range(4)]
    # capacities: 2, 1, 1, 1
    assert layers == [1, 1, 2, 3]
    assert seg.curr_layer == 3
    for layer in range(1, 5):
        assert seg.u[layer - 1] <= capacity_at(profile, seg.r, layer)


def test_charge_weight_reflects_next_free_layer():
    # a full layer quotes the next layer's (empty) congestion, same length
    profile = CapacityProfile(ProfileKind.UNIFORM, 2, LayerModel.UNRESERVED)
    seg = make_seg(length=70.0, r=1, profile=profile)
    charge(seg, profile)
    assert edge_weight(seg, profile) == pytest.approx(70.0)


# ---------------------------------------------------------------------------
# junction graph

def _prepared(fp, profile=UNIFORM8, r_override=None):
    tree = build_msc_tree(fp)
    junctions = all_junctions(fp)
    segments = extract_segments(tree, fp, junctions)
    for seg in segments:
        seg.r = r_override if (r_override is not None and seg.region_id >= 0) else \
            (1 if seg.region_id >= 0 else 0)
    init_layer_state(segments, profile)
    return junctions, segments, build_junction_graph(segments, junctions)


def test_junction_graph_two_blocks():
    fp = make_fp([(0, 0, 1, 1), (1, 0, 1, 1)])
    junctions, segments, jg = _prepared(fp)
    assert jg.n_nodes == 6
    assert len(jg.edges) == 1  # only the interior wall is usable
    interior = next(s for s in segments if s.region_id >= 0)
    assert jg.edges[interior.id] == (interior.j1, interior.j2)


def test_junction_graph_node_count_matches_junctions():
    fp = generate_random_floorplan(10, 0, 2, seed=2)
    junctions, segments, jg = _prepared(fp)
    assert jg.n_nodes == len(junctions) == (2 * 10 - 2) + 4


def test_junction_graph_zero_capacity_everywhere():
    fp = make_fp([(0, 0, 1, 1), (1, 0, 1, 1)])
    tree = build_msc_tree(fp)
    junctions = all_junctions(fp)
    segments = extract_segments(tree, fp, junctions)
    for seg in segments:
        seg.r = 0
    init_layer_state(segments, UNIFORM8)
    jg = build_junction_graph(segments, junctions)
    assert jg.n_nodes == 6 and len(jg.edges) == 0


# ---------------------------------------------------------------------------
# GSRG

def _net_on(fp, points):
    pins = [Pin(net_id=0, block_id=0, dx=0, dy=0, x=x, y=y) for x, y in points]
    net = Net(id=0, name="n0", pins=pins)
    net.hpwl = compute_hpwl(net)
    return net


def test_gsrg_two_pin_net_has_two_attachments():
    fp = make_fp([(0, 0, 2, 2), (2, 0, 2, 2)])
    _, segments, jg = _prepared(fp)
    net = _net_on(fp, [(1.0, 1.0), (3.0, 1.0)])
    gsrg = build_gsrg(jg, net)
    assert len(gsrg.pins) == 2
    weights = [w for att in gsrg.pins for w in pin_edge_weights(att, jg, UNIFORM8)]
    assert len(weights) == 4 and all(w < UNUSABLE for w in weights)


def test_gsrg_five_pin_net_has_ten_edges():
    fp = generate_random_floorplan(10, 0, 2, seed=3)
    _, segments, jg = _prepared(fp)
    import random
    rng = random.Random(0)
    net = _net_on(fp, [(rng.uniform(0, fp.width), rng.uniform(0, fp.height)) for _ in range(5)])
    gsrg = build_gsrg(jg, net)
    assert len(gsrg.pins) == 5
    assert sum(2 for _ in gsrg.pins) == 10


def test_gsrg_pin_on_junction_gets_near_zero_edge():
    fp = make_fp([(0, 0, 2, 2), (2, 0, 2, 2)])
    _, segments, jg = _prepared(fp)
    net = _net_on(fp, [(2.0, 0.0), (2.0, 2.0)])  # exactly on the wall's junctions
    gsrg = build_gsrg(jg, net)
    w1, w2 = pin_edge_weights(gsrg.pins[0], jg, UNIFORM8)
    assert min(w1, w2) == pytest.approx(0.0)
    assert max(w1, w2) == pytest.approx(2.0)


def test_gsrg_host_distances_are_manhattan():
    fp = make_fp([(0, 0, 2, 2), (2, 0, 2, 2)])
    _, segments, jg = _prepared(fp)
    net = _net_on(fp, [(1.0, 0.5), (3.0, 1.5)])
    gsrg = build_gsrg(jg, net)
    att = gsrg.pins[0]
    # host wall is x=2, y in [0,2]; junction order is (lo, hi)
    assert att.d1 == pytest.approx(1.0 + 0.5)
    assert att.d2 == pytest.approx(1.0 + 1.5)


def test_gsrg_host_prefers_lower_id_on_ties():
    from msroute.routegraph import _point_interval_dist, host_segment

    fp = make_fp([(0, 0, 2, 2), (2, 0, 2, 2)])
    tree = build_msc_tree(fp)
    junctions = all_junctions(fp)
    segments = extract_segments(tree, fp, junctions)
    # give the (otherwise unusable) border walls capacity so several hosts tie
    for seg in segments:
        seg.r = max(seg.r, 1)
    init_layer_state(segments, UNIFORM8)
    jg = build_junction_graph(segments, junctions)

    interior = next(s for s in segments if s.region_id >= 0)
    assert host_segment(jg, 2.0, 1.0).id == interior.id  # distance 0, unique
    # the left block's center ties between several walls at distance 1.0
    host = host_segment(jg, 1.0, 1.0)
    tied = [s.id for s in segments
            if s.id in jg.edges and _point_interval_dist(s, 1.0, 1.0) == pytest.approx(1.0)]
    assert len(tied) > 1
    assert host.id == min(tied)


def test_gsrg_reversibility():
    fp = generate_random_floorplan(8, 0, 2, seed=1)
    junctions, segments, jg = _prepared(fp)
    adj_before = [list(lst) for lst in jg.adj]
    edges_before = dict(jg.edges)
    net = _net_on(fp, [(1.0, 1.0), (fp.width - 1.0, fp.height - 1.0)])
    build_gsrg(jg, net)
    assert jg.adj == adj_before
    assert jg.edges == edges_before


def test_gsrg_no_usable_host_raises():
    fp = make_fp([(0, 0, 1, 1), (1, 0, 1, 1)])
    tree = build_msc_tree(fp)
    junctions = all_junctions(fp)
    segments = extract_segments(tree, fp, junctions)
    for seg in segments:
        seg.r = 0
    init_layer_state(segments, UNIFORM8)
    jg = build_junction_graph(segments, junctions)
    with pytest.raises(PinHostError):
        build_gsrg(jg, _net_on(fp, [(0.5, 0.5), (1.5, 0.5)]))
