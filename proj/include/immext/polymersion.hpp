#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "immext/emb_graph.hpp"
#include "immext/surface_complex.hpp"

namespace immext {

// A cellular map from a compact oriented surface complex (possibly
// disconnected, possibly with boundary) to a closed target complex, locally
// z -> z^k at interior vertices and an immersion near the boundary.
struct Polymersion {
    SurfaceComplex source;
    std::shared_ptr<const SurfaceComplex> target;
    std::vector<Id> vmap; // source vertex -> target vertex
    std::vector<Id> emap; // source edge -> target edge, orientation preserved
    std::vector<Id> fmap; // source face -> target face

    struct BranchPoint {
        Id source_vertex = -1;
        int multiplicity = 0; // k - 1
    };
    std::vector<BranchPoint> branch_points;

    // Embedded copy of a target graph inside the source (the associated map
    // of the previous cancellation): target edge -> source edge.
    std::map<Id, Id> seam;

    bool source_empty() const { return source.face_count() == 0; }
    bool closed_source() const;

    // Wrap count k at a source vertex (1 = regular point).
    int local_wrap(Id source_vertex) const;

    // Full invariant check: cell maps commute with walks, local models hold,
    // the branch ledger matches, branch images avoid the boundary image.
    // When `allow_shared_branch_images`, distinct critical points over one
    // branch point are tolerated (assembly intermediates may need it).
    void validate(bool allow_shared_branch_images = false) const;

    std::vector<BranchPoint> derive_branch_points() const;

    int face_degree(Id target_face) const;
    // number of preimages plus branch index at a target vertex
    int point_degree(Id target_vertex) const;

    std::set<Id> boundary_image_edges() const;
};

// R(g): the top subsurface of the boundary multicurve, or the whole target
// for a closed source.
struct RegionR {
    std::vector<Id> faces;
    std::set<Id> face_set;
    std::set<Id> boundary_edges; // edges of the target on the frontier of R
};

RegionR region_R(const Polymersion& g);

// Connected components of R \ G as target face sets.
std::vector<std::vector<Id>> complement_components(const SurfaceComplex& target,
                                                   const std::set<Id>& region_faces,
                                                   const std::set<Id>& graph_edges);

// G-cancellable domains when no branch point lies in R(g): one source face
// set per component of R(g) \ G, each mapped homeomorphically.
std::vector<std::set<Id>> domains_case1(const Polymersion& g, const EmbGraph& G);

// (G, g(G'))-cancellable domains: G' is the seam copy of `gprime_edges`
// carried by g.  Verifies the clockwise rule at every branch point and that
// every critical point over R lies on the seam with degree 3.
std::vector<std::set<Id>> domains_case2(const Polymersion& g, const EmbGraph& G,
                                        const std::set<Id>& gprime_edges);

struct CancellationRecord {
    std::vector<std::set<Id>> domains; // source face sets, one per component
    std::set<Id> graph_G;              // the associated graph
    std::set<Id> G_of_A;               // edges of G with two surviving copies
    bool regular = false;
    Polymersion result;
    std::map<Id, Id> associated_T; // target edge in G_of_A -> result source edge
    int chi_before = 0;
    int chi_after = 0;
};

// Deletes the domain interiors and identifies equal-image boundary
// segments along G.  The domains must be cancellable; both Def-3.4 bullets
// are re-verified.
CancellationRecord cancel(const Polymersion& g, const std::vector<std::set<Id>>& domains,
                          const std::set<Id>& G);

// Identity embedding of a face subset of the target (used for tests and as
// the base case of pipelines).
Polymersion identity_embedding(std::shared_ptr<const SurfaceComplex> target,
                               const std::vector<Id>& faces);

} // namespace immext
