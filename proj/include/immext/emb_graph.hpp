#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "immext/cut.hpp"
#include "immext/diagram.hpp"
#include "immext/surface_complex.hpp"

namespace immext {

// The growing master cell complex: the ambient surface of a diagram,
// progressively refined as spine strata are added.  Edge identity inside
// one master lineage is what makes graph equality well defined.
struct MasterComplex {
    std::shared_ptr<const SurfaceComplex> sc;
    std::vector<Id> edge_origin; // per edge: ambient arc id, or -1 for non-arc cells
    std::vector<int> edge_stratum; // recursion level that created the edge, -1 for base

    const SurfaceComplex& c() const { return *sc; }
};

MasterComplex master_from_diagram(const CurveDiagram& d);

// An embedded graph as an edge subset of its host complex.
struct EmbGraph {
    std::set<Id> edges;

    bool operator==(const EmbGraph& o) const { return edges == o.edges; }
    bool operator<(const EmbGraph& o) const { return edges < o.edges; }
    bool empty() const { return edges.empty(); }
};

// Chain decomposition of an edge set: maximal paths through cell vertices
// of degree 2, producing the topological edges of the graph.
struct GraphChain {
    int u = -1, v = -1;         // abstract endpoint vertices
    std::vector<Id> cells;      // host edges, ordered u -> v
};

struct GraphComponent {
    std::vector<Id> vertex_cells; // abstract vertex -> host vertex (or -1 for a severed copy)
    std::vector<GraphChain> chains;
    std::vector<int> x_degree;    // abstract degree in the full component

    std::vector<int> leaves() const; // abstract vertices of degree 1
};

// Splits `edges` into connected components, severing connectivity at the
// `sever` vertices (each incidence gets its own abstract copy), and
// decomposes each component into chains.
std::vector<GraphComponent> graph_components(const SurfaceComplex& host,
                                             const std::set<Id>& edges,
                                             const std::set<Id>& sever);

// Def of good subgraphs: edge-induced subsets whose degree-1 vertices are
// exactly those of the host component.  The empty subgraph qualifies
// exactly when the component has no leaves.
std::vector<std::set<Id>> good_subgraphs_component(const GraphComponent& comp);

// sub_{G0}(X): product over the components of X severed at the vertices it
// shares with G0.  With G0 empty this is sub(X).  Canonically ordered.
std::vector<std::set<Id>> good_subgraphs(const SurfaceComplex& host, const std::set<Id>& X,
                                         const std::set<Id>& G0);

// Appropriateness of (A, G0, P): cut A along G0; no piece may be closed,
// and no disk piece may carry exactly one lifted mark.
bool is_appropriate(const SurfaceComplex& A, const std::set<Id>& G0, const std::set<Id>& marks);

struct TrivalentResult {
    MasterComplex master;                    // refined master
    std::vector<std::vector<Id>> edge_trace; // old master edge -> descendant edges
    EmbGraph tilde;                          // spine edges in the refined master
    std::vector<GraphComponent> components;  // of tilde severed at G0 (cells in refined master)
    std::vector<Id> trace_vertex;            // old master vertex -> new (identity-extended)
};

// Builds a thin (A, G0, P)-trivalent graph for the subsurface of `master`
// spanned by `area_faces`: per cut piece a spine whose leaf set is exactly
// the lifted marks, empty on unmarked disks, pushed into the master.
// Deterministic for a fixed seed.  Throws Error("NotAppropriate") if the
// cut data is not appropriate.
TrivalentResult build_trivalent(const MasterComplex& master, const std::vector<Id>& area_faces,
                                const std::set<Id>& G0, const std::set<Id>& marks, uint64_t seed,
                                int stratum_level);

// Remaps an edge set through an edge trace.
std::set<Id> remap_edges(const std::set<Id>& edges, const std::vector<std::vector<Id>>& trace);

} // namespace immext
