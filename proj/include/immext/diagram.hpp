#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "immext/surface_complex.hpp"

namespace immext {

// Rotation-system encoding of an embedded graph on an oriented surface.
// `rotation` lists the darts at each vertex in counterclockwise order;
// `edge_pairing` is the fixed-point-free involution matching the two darts
// of each edge.  Face circuits are the orbits of rotation^{-1} composed
// with the pairing; a circuit read that way keeps its face on the left.
struct CombinatorialMap {
    int dart_count = 0;
    std::vector<Id> pairing;                // dart -> opposite dart
    std::vector<std::vector<Id>> rotation;  // per vertex, ccw dart cycle

    std::vector<Id> dart_vertex; // derived
    std::vector<Id> dart_edge;   // derived; edge id = index of min dart pair
    int edge_count = 0;

    std::vector<std::vector<Id>> face_circuits; // canonical order (min unused dart first)
    std::vector<Id> dart_face;                  // derived

    void finalize(); // derives tables, validates involution/permutation structure
};

struct RegionSpec {
    std::vector<Id> circuits; // face-circuit indices
    int genus = 0;
};

// A normal immersed closed curve on a closed oriented surface, encoded as
// the curve's image graph plus the region topology of the complement.
// Nodes are the degree-4 vertices; a curve without nodes carries a single
// degree-2 marker vertex instead.
class CurveDiagram {
public:
    std::string name;
    CombinatorialMap map;
    std::vector<Id> traversal; // darts of the oriented curve, one per edge
    std::vector<RegionSpec> regions;
    std::optional<Id> outer_region; // set in planar mode

    int region_count() const { return static_cast<int>(regions.size()); }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Id>& nodes() const { return nodes_; }
    bool planar_mode() const { return outer_region.has_value(); }

    Id region_of_face_circuit(Id circuit) const { return circuit_region_[circuit]; }

    // The ambient surface as a cell complex: curve vertices and arcs, plus
    // per region one hub vertex, one tether per boundary circuit and a
    // handle pair per unit of genus, all carried by a single 2-cell.
    const SurfaceComplex& ambient() const { return *ambient_; }
    std::shared_ptr<const SurfaceComplex> ambient_ptr() const { return ambient_; }

    // Curve dart -> directed ambient arc.
    Step dart_step(Id dart) const;
    Id left_region_of_dart(Id dart) const;
    Id right_region_of_dart(Id dart) const;
    Id region_of_face(Id ambient_face) const { return ambient_->face_region[ambient_face]; }

    bool edge_is_arc(Id ambient_edge) const { return ambient_edge < map.edge_count; }

    // traversal as ambient steps, in curve order
    const std::vector<Step>& traversal_steps() const { return traversal_steps_; }

    int ambient_genus() const { return ambient_genus_; }

    // Minimum adjacent region value around a node under a numbering-like
    // vector of region values.
    int min_quadrant(Id node, const std::vector<int>& region_values) const;

    void validate(); // full invariant check; builds the ambient complex

private:
    std::shared_ptr<SurfaceComplex> ambient_;
    std::vector<Id> circuit_region_;
    std::vector<Id> nodes_;
    std::vector<Step> traversal_steps_;
    int ambient_genus_ = 0;

    void build_ambient();
};

CurveDiagram parse_diagram(const std::string& json_text);
std::string diagram_to_json(const CurveDiagram& d);

// Integer labels on regions with value(left) = value(right) + 1 across
// every arc of the curve.
struct Numbering {
    std::vector<int> values; // per region
    int min_value = 0;
    int max_value = 0;
};

// The unique numbering with the given minimum; throws
// Error("NotNullHomologous") when the +-1 system is inconsistent.
Numbering numbering(const CurveDiagram& d, int min_value);

// Planar mode: the numbering with value 0 on the outer region (winding
// numbers).  May contain negative values.
Numbering winding_numbering(const CurveDiagram& d);

// Rotation index of a planar curve, computed as the Euler characteristic a
// filling surface would have: counts cell preimages that any extension
// inducing the winding numbering must create.
int turning_number(const CurveDiagram& d);

} // namespace immext
