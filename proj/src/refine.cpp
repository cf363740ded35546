#include "immext/refine.hpp"

#include <algorithm>

namespace immext {
namespace refine {

SubdividedEdge subdivide_edge(SurfaceComplex& sc, Id e) {
    SubdividedEdge out;
    out.half_tail = e;
    out.half_head = static_cast<Id>(sc.edge_ends.size());
    out.midpoint = sc.vertex_count++;

    Id old_head = sc.edge_ends[e][1];
    sc.edge_ends[e][1] = out.midpoint;
    sc.edge_ends.push_back({out.midpoint, old_head});
    if (!sc.edge_names.empty()) {
        sc.edge_names.resize(sc.edge_ends.size());
        sc.edge_names[out.half_head] = sc.edge_names[e] + "+";
        sc.edge_names[e] += "-";
    }
    if (!sc.vertex_names.empty()) {
        sc.vertex_names.resize(sc.vertex_count);
        sc.vertex_names[out.midpoint] = "mid";
    }

    for (auto& walk : sc.face_walks) {
        for (size_t p = 0; p < walk.size(); ++p) {
            if (walk[p].edge != e) continue;
            if (walk[p].forward) {
                walk.insert(walk.begin() + p + 1, Step{out.half_head, true});
            } else {
                walk[p] = Step{out.half_head, false};
                walk.insert(walk.begin() + p + 1, Step{e, false});
            }
            ++p; // skip the inserted step
        }
    }
    return out;
}

ConedFace cone_face(SurfaceComplex& sc, Id f) {
    ConedFace out;
    std::vector<Step> walk = sc.face_walks[f];
    int n = static_cast<int>(walk.size());
    require(n >= 1, "InternalError", "cannot cone an empty face");

    out.hub = sc.vertex_count++;
    if (!sc.vertex_names.empty()) {
        sc.vertex_names.resize(sc.vertex_count);
        sc.vertex_names[out.hub] = "hub";
    }

    // tails of the walk steps; derive from edge_ends
    for (int i = 0; i < n; ++i) {
        Id r = static_cast<Id>(sc.edge_ends.size());
        Id tail = walk[i].forward ? sc.edge_ends[walk[i].edge][0] : sc.edge_ends[walk[i].edge][1];
        sc.edge_ends.push_back({out.hub, tail});
        if (!sc.edge_names.empty()) {
            sc.edge_names.resize(sc.edge_ends.size());
            sc.edge_names[r] = "rad";
        }
        out.radials.push_back(r);
    }

    Id region = f < static_cast<Id>(sc.face_region.size()) ? sc.face_region[f] : -1;
    for (int i = 0; i < n; ++i) {
        std::vector<Step> tri = {Step{out.radials[i], true}, walk[i],
                                 Step{out.radials[(i + 1) % n], false}};
        if (i == 0) {
            sc.face_walks[f] = std::move(tri);
            out.triangles.push_back(f);
        } else {
            out.triangles.push_back(static_cast<Id>(sc.face_walks.size()));
            sc.face_walks.push_back(std::move(tri));
            sc.face_region.push_back(region);
        }
    }
    return out;
}

SplitVertex split_vertex(SurfaceComplex& sc, Id v, int first, int count) {
    require(sc.finalized(), "InternalError", "split_vertex needs a finalized complex");
    const auto& link = sc.vertex_link(v);
    require(link.closed, "InternalError", "split_vertex only applies to interior vertices");
    int deg = static_cast<int>(link.out_darts.size());
    require(count >= 1 && count < deg, "InternalError", "split block must be a proper subset");

    auto dart = [&](int i) { return link.out_darts[((i % deg) + deg) % deg]; };

    Step first_dart = dart(first);
    Step last_dart = dart(first + count - 1);
    Step before = dart(first - 1);
    Step after = dart(first + count);

    SplitVertex out;
    out.new_vertex = sc.vertex_count++;
    if (!sc.vertex_names.empty()) {
        sc.vertex_names.resize(sc.vertex_count);
        sc.vertex_names[out.new_vertex] = sc.vertex_name(v) + "'";
    }
    out.split_edge = static_cast<Id>(sc.edge_ends.size());
    sc.edge_ends.push_back({v, out.new_vertex});
    if (!sc.edge_names.empty()) {
        sc.edge_names.resize(sc.edge_ends.size());
        sc.edge_names[out.split_edge] = "split";
    }

    // Corner between link darts (d_j, d_{j+1}): the walk position p with
    // walk[p] = d_j and reversed(walk[p-1]) = d_{j+1}.
    auto corner_between = [&](Step dj, Step djj) {
        auto c = sc.side(dj.edge, dj.forward);
        require(c.has_value(), "InternalError", "missing corner at split vertex");
        Corner prev = sc.prev_corner(*c);
        Step arr = sc.step_at(prev);
        require(reversed(arr) == djj, "InternalError", "vertex link mismatch during split");
        return *c;
    };

    // corner between (before, first_dart): insert split-edge step new->v
    Corner c1 = corner_between(before, first_dart);
    // corner between (last_dart, after): insert split-edge step v->new
    Corner c2 = corner_between(last_dart, after);

    // Insert into walks; handle the same-face case by inserting the higher
    // position first.
    auto insert_step = [&](Corner c, Step s) {
        auto& walk = sc.face_walks[c.face];
        walk.insert(walk.begin() + c.pos, s);
    };
    if (c1.face == c2.face) {
        if (c1.pos > c2.pos) {
            insert_step(c1, Step{out.split_edge, false});
            insert_step(c2, Step{out.split_edge, true});
        } else {
            insert_step(c2, Step{out.split_edge, true});
            insert_step(c1, Step{out.split_edge, false});
        }
    } else {
        insert_step(c1, Step{out.split_edge, false});
        insert_step(c2, Step{out.split_edge, true});
    }

    // retarget the moved out-darts
    for (int i = 0; i < count; ++i) {
        Step d = dart(first + i);
        sc.edge_ends[d.edge][d.forward ? 0 : 1] = out.new_vertex;
    }
    return out;
}

} // namespace refine
} // namespace immext
