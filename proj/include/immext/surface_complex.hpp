#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "immext/error.hpp"

namespace immext {

using Id = int;

// One directed edge inside a face walk.  `forward` means the edge is
// traversed tail -> head.
struct Step {
    Id edge = -1;
    bool forward = true;

    friend bool operator==(const Step& a, const Step& b) {
        return a.edge == b.edge && a.forward == b.forward;
    }
    friend bool operator!=(const Step& a, const Step& b) { return !(a == b); }
};

inline Step reversed(Step s) { return Step{s.edge, !s.forward}; }

// Position of a step inside a face walk.
struct Corner {
    Id face = -1;
    int pos = -1;

    friend bool operator==(const Corner& a, const Corner& b) {
        return a.face == b.face && a.pos == b.pos;
    }
};

// Combinatorial model of a compact oriented surface, possibly disconnected,
// possibly with boundary.  Each face is a closed walk of directed edges,
// oriented counterclockwise so the face lies on the LEFT of every step.
// An interior edge appears in exactly two steps, once per direction; a
// boundary edge appears in exactly one.  Vertex links are required to be a
// single cycle (interior vertex) or a single arc (boundary vertex).
class SurfaceComplex {
public:
    int vertex_count = 0;
    std::vector<std::array<Id, 2>> edge_ends; // [tail, head]
    std::vector<std::vector<Step>> face_walks;

    std::vector<std::string> vertex_names; // optional, sized or empty
    std::vector<std::string> edge_names;
    std::vector<Id> face_region; // region id per face, or -1

    int edge_count() const { return static_cast<int>(edge_ends.size()); }
    int face_count() const { return static_cast<int>(face_walks.size()); }

    Id tail(Step s) const { return s.forward ? edge_ends[s.edge][0] : edge_ends[s.edge][1]; }
    Id head(Step s) const { return s.forward ? edge_ends[s.edge][1] : edge_ends[s.edge][0]; }

    int euler_characteristic() const;

    // Face side of a directed edge: the face walk containing (edge, forward)
    // as a step, if any.  Built lazily by finalize().
    std::optional<Corner> side(Id edge, bool forward) const;
    bool edge_interior(Id edge) const;
    bool edge_boundary(Id edge) const { return !edge_interior(edge); }
    bool vertex_on_boundary(Id v) const;

    Step step_at(Corner c) const { return face_walks[c.face][c.pos]; }
    Corner next_corner(Corner c) const;
    Corner prev_corner(Corner c) const;

    // Boundary circuits chained so the surface stays on the left; each
    // circuit is a sequence of steps over boundary edges.
    std::vector<std::vector<Step>> boundary_circuits() const;

    // Counterclockwise vertex link as the ordered list of corners whose
    // wedge sits at v; a cycle for interior vertices, an arc for boundary
    // vertices (ordered from one boundary wedge to the other).
    struct VertexLink {
        bool closed = false;
        // Out-darts in ccw order around the vertex.  For a boundary vertex
        // the first and last dart bound the missing (outside) wedge.
        std::vector<Step> out_darts;
    };
    const VertexLink& vertex_link(Id v) const;

    int vertex_degree(Id v) const { return static_cast<int>(vertex_link(v).out_darts.size()); }

    // Connected components as face sets (cells connect through shared edges
    // and vertices).
    std::vector<std::vector<Id>> face_components() const;

    // Checks structural soundness and caches derived tables.  Throws
    // Error("InternalError", ...) on malformed data, or with the supplied
    // code when given.
    void finalize(const std::string& error_code = "InternalError");
    bool finalized() const { return finalized_; }

    std::string vertex_name(Id v) const;
    std::string edge_name(Id e) const;

private:
    bool finalized_ = false;
    // side_[2*e + (forward?0:1)]
    std::vector<Corner> side_;
    std::vector<VertexLink> links_;

    void build_sides(const std::string& code);
    void build_links(const std::string& code);
};

// Derives vertex identities from face walks alone: edge ends are identified
// when consecutive steps of a walk meet.  Returns the number of vertices and
// fills ends (end id = 2*edge + (0 tail | 1 head)).  Used by cut/glue, which
// construct walks first and vertices second.
int derive_vertices_from_walks(int edge_count,
                               const std::vector<std::vector<Step>>& face_walks,
                               std::vector<std::array<Id, 2>>& edge_ends_out);

} // namespace immext
