#pragma once

#include <vector>

#include "immext/surface_complex.hpp"

namespace immext {
namespace refine {

// In-place refinement operations.  They edit walks and append cells without
// deleting vertices; callers re-finalize when a phase is done.  Vertex ids
// are stable; a subdivided edge keeps its id for the tail half.

struct SubdividedEdge {
    Id half_tail = -1; // tail ... midpoint (reuses the old id)
    Id half_head = -1; // midpoint ... head (fresh)
    Id midpoint = -1;
};

SubdividedEdge subdivide_edge(SurfaceComplex& sc, Id e);

struct ConedFace {
    Id hub = -1;
    std::vector<Id> radials;   // radials[i]: hub -> tail of old walk step i
    std::vector<Id> triangles; // triangles[i] covers old walk step i; [0] reuses the face id
};

ConedFace cone_face(SurfaceComplex& sc, Id f);

struct SplitVertex {
    Id new_vertex = -1;
    Id split_edge = -1; // runs old vertex -> new vertex
};

// Moves a contiguous ccw block of out-darts from interior vertex v to a new
// vertex joined to v by a fresh edge.  `first` indexes into the current
// vertex link; `count` darts starting there migrate.  Requires a finalized
// complex; leaves it needing re-finalization.
SplitVertex split_vertex(SurfaceComplex& sc, Id v, int first, int count);

} // namespace refine
} // namespace immext
