"""Congestion weights, capacity profiles and layer advancement.

Run as: python3 demos/03_junction_graph.py
"""

import msroute as msr
from msroute import Axis, CapacityProfile, LayerModel, ProfileKind, Segment


def section(title):
    print(f"\n{title}\n{'-' * len(title)}")


section("Capacity profiles across 8 metal layers (base capacity r = 8)")
print("layer      :", "  ".join(f"{l:>3}" for l in range(1, 9)))
for kind in ProfileKind:
    profile = CapacityProfile(kind, 8)
    caps = [msr.capacity_at(profile, 8, l) for l in range(1, 9)]
    print(f"{kind.value:<11}:", "  ".join(f"{c:>3}" for c in caps))
print("UNIFORM keeps r everywhere; HYPERBOLIC scales by 1/layer;")
print("LADDER steps r, r, r/2, r/2, r/4, ... -- always between the other two.")

section("Edge weight grows as a segment fills up")
profile = CapacityProfile(ProfileKind.UNIFORM, 1, LayerModel.UNRESERVED)
seg = Segment(id=0, region_id=0, axis=Axis.H, fixed=0, lo=0, hi=100, j1=0, j2=1)
seg.r = 10
msr.init_layer_state([seg], profile)
print("usage -> weight (length 100, capacity 10):")
for u in (0, 2, 5, 8, 9):
    seg.u[0] = u
    print(f"  u={u}: {msr.edge_weight(seg, profile):8.1f}")
seg.u[0] = 10
print(f"  u=10: {msr.edge_weight(seg, profile)}  (saturated at the top layer -> unusable)")

section("Layer advancement under the reserved-HV model")
profile = CapacityProfile(ProfileKind.UNIFORM, 8, LayerModel.RESERVED_HV)
h = Segment(id=0, region_id=0, axis=Axis.H, fixed=0, lo=0, hi=10, j1=0, j2=1)
v = Segment(id=1, region_id=0, axis=Axis.V, fixed=0, lo=0, hi=10, j1=0, j2=1)
h.r = v.r = 1
msr.init_layer_state([h, v], profile)
print(f"horizontal wires use odd layers: start {h.curr_layer}", end="")
for _ in range(3):
    h.u[h.curr_layer - 1] = 1
    print(f" -> {msr.advance_layer(h, profile)}", end="")
print()
print(f"vertical wires use even layers:  start {v.curr_layer}", end="")
for _ in range(3):
    v.u[v.curr_layer - 1] = 1
    print(f" -> {msr.advance_layer(v, profile)}", end="")
print()

section("Junction graph over a floorplan")
fp = msr.generate_random_floorplan(n=10, k=30, max_degree=4, seed=5)
tree = msr.build_msc_tree(fp)
junctions = msr.all_junctions(fp)
segments = msr.extract_segments(tree, fp, junctions)
msr.assign_capacities(segments, tree, fp.nets, fp.tol)
msr.init_layer_state(segments, CapacityProfile(ProfileKind.UNIFORM, 8))
graph = msr.build_junction_graph(segments, junctions)
print(f"{graph.n_nodes} junction nodes, {len(graph.edges)} usable edges "
      f"(segments with r = 0 are excluded)")

section("Per-net GSRG: pins attach to their host segment's junctions")
net = fp.nets[0]
gsrg = msr.build_gsrg(graph, net)
for att in gsrg.pins:
    print(f"  pin {att.pin_index} -> segment {att.host_seg}, "
          f"junctions {att.j1}/{att.j2} at Manhattan distance {att.d1:.1f}/{att.d2:.1f}")
print(f"{net.degree} pins contribute {2 * net.degree} pin-junction edges; "
      "dropping them restores the base graph unchanged.")
