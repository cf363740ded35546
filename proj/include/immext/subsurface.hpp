#pragma once

#include <set>
#include <vector>

#include "immext/diagram.hpp"
#include "immext/surface_complex.hpp"

namespace immext {

// Extraction of a face subset as its own complex, with cell maps back into
// the parent.  Walks are preserved step for step.
struct Extraction {
    SurfaceComplex sub;
    std::vector<Id> vmap; // sub vertex -> parent vertex
    std::vector<Id> emap; // sub edge -> parent edge (orientation preserved)
    std::vector<Id> fmap; // sub face -> parent face
};

Extraction extract_faces(const SurfaceComplex& parent, const std::vector<Id>& faces);

// D_i(f, psi): closure of the union of regions numbered >= i.
struct Subsurface {
    int level = 0;
    std::vector<Id> region_ids;               // regions with psi >= level
    std::vector<Id> faces;                    // ambient faces of those regions
    std::vector<std::vector<Step>> boundary;  // Gaussian circles, ambient steps
    std::vector<Id> nodes_V;                  // V_level: nodes on both boundaries
    struct ComponentTopology {
        int genus = 0;
        int boundary_circuits = 0;
        int euler = 0;
    };
    std::vector<ComponentTopology> topology;

    Extraction complex; // the extracted surface with maps into the ambient
};

// Builds D_i with its Gaussian circles and V_i.  Levels i <= min(psi)
// return the full surface; i > max(psi) is LevelOutOfRange.
Subsurface build_subsurface(const CurveDiagram& d, const Numbering& psi, int level);

// Nodes of the diagram lying in V_i, by the least adjacent region value.
std::vector<Id> nodes_V(const CurveDiagram& d, const Numbering& psi, int level);

} // namespace immext
