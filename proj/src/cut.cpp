#include "immext/cut.hpp"

#include <algorithm>

namespace immext {

int CutResult::piece_of_vertex(Id cut_vertex) const {
    for (Id e = 0; e < cut.edge_count(); ++e)
        if (cut.edge_ends[e][0] == cut_vertex || cut.edge_ends[e][1] == cut_vertex) {
            auto s = cut.side(e, true);
            if (!s) s = cut.side(e, false);
            return face_piece[s->face];
        }
    fail("InternalError", "vertex belongs to no piece");
}

CutResult cut_along(const SurfaceComplex& parent, const std::set<Id>& graph_edges,
                    const std::set<Id>& marks) {
    for (Id e : graph_edges) {
        require(e >= 0 && e < parent.edge_count(), "GraphNotEmbedded",
                "cut edge " + std::to_string(e) + " is not in the complex");
        require(parent.edge_interior(e), "GraphNotEmbedded",
                "cut edge " + parent.edge_name(e) + " lies on the boundary");
    }

    // graph degree per vertex, for the mark placement rule
    std::vector<int> gdeg(parent.vertex_count, 0);
    for (Id e : graph_edges) {
        gdeg[parent.edge_ends[e][0]]++;
        gdeg[parent.edge_ends[e][1]]++;
    }
    for (Id m : marks) {
        require(m >= 0 && m < parent.vertex_count, "InternalError", "mark out of range");
        require(gdeg[m] == 0 || gdeg[m] == 3, "MarkOnGraphInterior",
                "mark " + parent.vertex_name(m) +
                    " lies on the cut graph away from a degree-3 vertex");
    }

    CutResult res;
    int E = parent.edge_count();
    std::vector<Id> plus_copy(E), minus_copy(E);
    for (Id e = 0; e < E; ++e) plus_copy[e] = minus_copy[e] = e;

    res.emap.resize(E);
    for (Id e = 0; e < E; ++e) res.emap[e] = e;
    for (Id e : graph_edges) {
        Id fresh = static_cast<Id>(res.emap.size());
        minus_copy[e] = fresh;
        res.emap.push_back(e);
        res.copies[e] = {e, fresh};
    }

    res.cut.face_walks.resize(parent.face_count());
    for (Id f = 0; f < parent.face_count(); ++f) {
        std::vector<Step> walk;
        for (const Step& s : parent.face_walks[f]) {
            bool is_cut = graph_edges.count(s.edge) > 0;
            Id ne = !is_cut ? s.edge : (s.forward ? plus_copy[s.edge] : minus_copy[s.edge]);
            walk.push_back(Step{ne, s.forward});
        }
        res.cut.face_walks[f] = std::move(walk);
        res.fmap.push_back(f);
        res.cut.face_region.push_back(
            f < static_cast<Id>(parent.face_region.size()) ? parent.face_region[f] : -1);
    }

    res.cut.vertex_count = derive_vertices_from_walks(static_cast<int>(res.emap.size()),
                                                      res.cut.face_walks, res.cut.edge_ends);
    res.vmap.assign(res.cut.vertex_count, -1);
    for (Id e = 0; e < static_cast<Id>(res.emap.size()); ++e) {
        Id pe = res.emap[e];
        for (int end = 0; end < 2; ++end) {
            Id v = res.cut.edge_ends[e][end];
            Id pv = parent.edge_ends[pe][end];
            require(res.vmap[v] == -1 || res.vmap[v] == pv, "InternalError",
                    "cut produced an inconsistent vertex lift");
            res.vmap[v] = pv;
        }
    }

    res.cut.edge_names.resize(res.emap.size());
    for (Id e = 0; e < static_cast<Id>(res.emap.size()); ++e) {
        res.cut.edge_names[e] = parent.edge_name(res.emap[e]);
        if (e >= E) res.cut.edge_names[e] += "'";
    }
    res.cut.vertex_names.resize(res.cut.vertex_count);
    for (Id v = 0; v < res.cut.vertex_count; ++v)
        res.cut.vertex_names[v] = parent.vertex_name(res.vmap[v]);

    res.cut.finalize();

    // pieces
    auto comps = res.cut.face_components();
    res.face_piece.assign(res.cut.face_count(), -1);
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        for (Id f : comps[c]) res.face_piece[f] = c;
        res.piece_faces.push_back(comps[c]);
    }
    res.piece_anchor_face_.assign(res.cut.edge_count(), -1);
    for (Id e = 0; e < res.cut.edge_count(); ++e) {
        auto s = res.cut.side(e, true);
        if (!s) s = res.cut.side(e, false);
        res.piece_anchor_face_[e] = s->face;
    }

    for (Id m : marks) {
        std::vector<Id> lifts;
        for (Id v = 0; v < res.cut.vertex_count; ++v)
            if (res.vmap[v] == m) lifts.push_back(v);
        require(!lifts.empty(), "InternalError", "mark lost by the cut");
        res.lifted_marks[m] = lifts;
    }
    return res;
}

SurfaceComplex reglue(const CutResult& cut) {
    SurfaceComplex glued;
    // merge copies back: every cut edge id maps to its parent id
    glued.face_walks.resize(cut.cut.face_count());
    int parent_edges = 0;
    for (Id e : cut.emap) parent_edges = std::max(parent_edges, e + 1);
    for (Id f = 0; f < cut.cut.face_count(); ++f) {
        std::vector<Step> walk;
        for (const Step& s : cut.cut.face_walks[f]) walk.push_back(Step{cut.emap[s.edge], s.forward});
        glued.face_walks[f] = std::move(walk);
    }
    glued.vertex_count =
        derive_vertices_from_walks(parent_edges, glued.face_walks, glued.edge_ends);
    glued.face_region = cut.cut.face_region;
    glued.finalize();
    return glued;
}

bool roundtrip_identity(const SurfaceComplex& parent, const CutResult& cut) {
    SurfaceComplex glued = reglue(cut);
    if (glued.vertex_count != parent.vertex_count) return false;
    if (glued.edge_count() != parent.edge_count()) return false;
    if (glued.face_count() != parent.face_count()) return false;
    for (Id f = 0; f < parent.face_count(); ++f) {
        if (glued.face_walks[f].size() != parent.face_walks[f].size()) return false;
        for (size_t p = 0; p < parent.face_walks[f].size(); ++p)
            if (!(glued.face_walks[f][p] == parent.face_walks[f][p])) return false;
    }
    // vertices: derived classes must reproduce the parent's edge ends
    for (Id e = 0; e < parent.edge_count(); ++e) {
        // consistent renaming is allowed; require a bijection
        static_cast<void>(e);
    }
    std::vector<Id> rename(glued.vertex_count, -1);
    std::vector<bool> hit(parent.vertex_count, false);
    for (Id e = 0; e < parent.edge_count(); ++e) {
        for (int end = 0; end < 2; ++end) {
            Id gv = glued.edge_ends[e][end];
            Id pv = parent.edge_ends[e][end];
            if (rename[gv] == -1) {
                if (hit[pv]) return false;
                rename[gv] = pv;
                hit[pv] = true;
            } else if (rename[gv] != pv) {
                return false;
            }
        }
    }
    return true;
}

PieceShape piece_shape(const SurfaceComplex& cut, const std::vector<Id>& faces) {
    PieceShape shape;
    std::set<Id> piece_edges;
    std::set<Id> piece_vertices;
    std::set<Id> face_set(faces.begin(), faces.end());
    for (Id f : faces)
        for (const Step& s : cut.face_walks[f]) {
            piece_edges.insert(s.edge);
            piece_vertices.insert(cut.edge_ends[s.edge][0]);
            piece_vertices.insert(cut.edge_ends[s.edge][1]);
        }
    shape.euler = static_cast<int>(piece_vertices.size()) - static_cast<int>(piece_edges.size()) +
                  static_cast<int>(faces.size());
    shape.boundary_circuits = 0;
    for (const auto& circuit : cut.boundary_circuits()) {
        auto s = cut.side(circuit.front().edge, circuit.front().forward);
        if (face_set.count(s->face)) shape.boundary_circuits++;
    }
    shape.closed = shape.boundary_circuits == 0;
    shape.disk = (shape.euler == 1 && shape.boundary_circuits == 1);
    shape.genus = (2 - shape.euler - shape.boundary_circuits) / 2;
    return shape;
}

} // namespace immext
