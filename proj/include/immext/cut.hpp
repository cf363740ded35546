#pragma once

#include <map>
#include <set>
#include <vector>

#include "immext/surface_complex.hpp"

namespace immext {

// Result of cutting a complex along an embedded graph of interior edges
// (delete and path-compactify).  All pieces live together in one complex;
// `piece_faces` lists the faces of each connected piece.
struct CutResult {
    SurfaceComplex cut;

    std::vector<Id> vmap; // cut vertex -> parent vertex
    std::vector<Id> emap; // cut edge -> parent edge
    std::vector<Id> fmap; // cut face -> parent face (positions preserved)

    // parent cut edge -> its two boundary copies: [left, right] where the
    // left copy keeps the face of the forward step.
    std::map<Id, std::array<Id, 2>> copies;

    std::vector<std::vector<Id>> piece_faces;
    std::vector<Id> face_piece; // cut face -> piece index

    // parent mark vertex -> its lifted copies in the cut complex
    std::map<Id, std::vector<Id>> lifted_marks;

    int piece_of_vertex(Id cut_vertex) const;
    int piece_of_edge(Id cut_edge) const { return face_piece[piece_anchor_face_[cut_edge]]; }

    std::vector<Id> piece_anchor_face_; // per cut edge, one incident face
};

// Cuts `parent` along `graph_edges`.  Every graph edge must be interior;
// `marks` may only touch the graph at vertices of graph degree 3.
CutResult cut_along(const SurfaceComplex& parent, const std::set<Id>& graph_edges,
                    const std::set<Id>& marks);

// Reglues the two copies of every cut edge; used by the round-trip check.
SurfaceComplex reglue(const CutResult& cut);

// True when regluing `cut` reproduces `parent` cell for cell.
bool roundtrip_identity(const SurfaceComplex& parent, const CutResult& cut);

// Topology of one piece.
struct PieceShape {
    bool closed = false;
    bool disk = false;
    int euler = 0;
    int boundary_circuits = 0;
    int genus = 0;
};

PieceShape piece_shape(const SurfaceComplex& cut, const std::vector<Id>& faces);

} // namespace immext
