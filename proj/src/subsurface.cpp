#include "immext/subsurface.hpp"

#include <algorithm>
#include <map>

namespace immext {

Extraction extract_faces(const SurfaceComplex& parent, const std::vector<Id>& faces) {
    Extraction ex;
    std::vector<Id> edge_new(parent.edge_count(), -1);
    for (Id f : faces) {
        for (const Step& s : parent.face_walks[f]) {
            if (edge_new[s.edge] == -1) {
                edge_new[s.edge] = static_cast<Id>(ex.emap.size());
                ex.emap.push_back(s.edge);
            }
        }
    }
    for (Id f : faces) {
        std::vector<Step> walk;
        for (const Step& s : parent.face_walks[f]) walk.push_back(Step{edge_new[s.edge], s.forward});
        ex.sub.face_walks.push_back(std::move(walk));
        ex.fmap.push_back(f);
        ex.sub.face_region.push_back(f < static_cast<Id>(parent.face_region.size())
                                         ? parent.face_region[f]
                                         : -1);
    }
    ex.sub.vertex_count = derive_vertices_from_walks(static_cast<int>(ex.emap.size()),
                                                     ex.sub.face_walks, ex.sub.edge_ends);
    ex.vmap.assign(ex.sub.vertex_count, -1);
    for (Id e = 0; e < static_cast<Id>(ex.emap.size()); ++e) {
        Id pe = ex.emap[e];
        for (int end = 0; end < 2; ++end) {
            Id v = ex.sub.edge_ends[e][end];
            Id pv = parent.edge_ends[pe][end];
            require(ex.vmap[v] == -1 || ex.vmap[v] == pv, "InternalError",
                    "face extraction split a vertex; subsurface is pinched");
            ex.vmap[v] = pv;
        }
    }
    ex.sub.edge_names.resize(ex.emap.size());
    ex.sub.vertex_names.resize(ex.sub.vertex_count);
    for (Id e = 0; e < static_cast<Id>(ex.emap.size()); ++e)
        ex.sub.edge_names[e] = parent.edge_name(ex.emap[e]);
    for (Id v = 0; v < ex.sub.vertex_count; ++v)
        ex.sub.vertex_names[v] = parent.vertex_name(ex.vmap[v]);
    ex.sub.finalize();
    return ex;
}

std::vector<Id> nodes_V(const CurveDiagram& d, const Numbering& psi, int level) {
    // A node lies on the boundaries of both D_i and D_{i-1} exactly when its
    // least adjacent region value is i - 2.
    std::vector<Id> out;
    if (level <= psi.min_value) return out; // V_1..V_m are empty by definition
    for (Id v : d.nodes())
        if (d.min_quadrant(v, psi.values) == level - 2) out.push_back(v);
    return out;
}

Subsurface build_subsurface(const CurveDiagram& d, const Numbering& psi, int level) {
    require(level <= psi.max_value, "LevelOutOfRange",
            "level " + std::to_string(level) + " exceeds max numbering value " +
                std::to_string(psi.max_value));

    Subsurface s;
    s.level = level;
    const SurfaceComplex& amb = d.ambient();
    for (Id r = 0; r < d.region_count(); ++r)
        if (psi.values[r] >= level) s.region_ids.push_back(r);
    for (Id f = 0; f < amb.face_count(); ++f)
        if (psi.values[amb.face_region[f]] >= level) s.faces.push_back(f);
    require(!s.faces.empty(), "InternalError", "empty subsurface below max level");

    s.complex = extract_faces(amb, s.faces);

    for (const auto& circuit : s.complex.sub.boundary_circuits()) {
        std::vector<Step> mapped;
        for (const Step& st : circuit) mapped.push_back(Step{s.complex.emap[st.edge], st.forward});
        s.boundary.push_back(std::move(mapped));
    }

    s.nodes_V = nodes_V(d, psi, level);

    // per-component topology
    auto comps = s.complex.sub.face_components();
    std::map<Id, int> comp_of_face;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c)
        for (Id f : comps[c]) comp_of_face[f] = c;

    std::vector<int> verts(comps.size(), 0), edges(comps.size(), 0), bnds(comps.size(), 0);
    {
        std::vector<int> seen_v(s.complex.sub.vertex_count, -1);
        for (Id e = 0; e < s.complex.sub.edge_count(); ++e) {
            auto side = s.complex.sub.side(e, true);
            if (!side) side = s.complex.sub.side(e, false);
            int c = comp_of_face[side->face];
            edges[c]++;
            for (int end = 0; end < 2; ++end) {
                Id v = s.complex.sub.edge_ends[e][end];
                if (seen_v[v] != c) {
                    if (seen_v[v] == -1) {
                        seen_v[v] = c;
                        verts[c]++;
                    }
                }
            }
        }
        for (const auto& circuit : s.complex.sub.boundary_circuits()) {
            auto side = s.complex.sub.side(circuit.front().edge, circuit.front().forward);
            bnds[comp_of_face[side->face]]++;
        }
    }
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        Subsurface::ComponentTopology t;
        t.euler = verts[c] - edges[c] + static_cast<int>(comps[c].size());
        t.boundary_circuits = bnds[c];
        t.genus = (2 - t.euler - t.boundary_circuits) / 2;
        require(2 - t.euler - t.boundary_circuits >= 0 &&
                    (2 - t.euler - t.boundary_circuits) % 2 == 0,
                "InternalError", "subsurface component has inconsistent topology");
        s.topology.push_back(t);
    }
    return s;
}

} // namespace immext
