#include "immext/fixtures.hpp"

#include <map>

namespace immext {

namespace {

// Embedded circle in the plane (sphere plus outer region).  One marker
// vertex, one arc; inside has winding 1.
const char* kCircle = R"({
  "name": "CIRCLE",
  "darts": [0, 1],
  "edge_pairing": [[0, 1]],
  "rotation": [[0, 1]],
  "traversal": [0],
  "regions": [{"circuits": [0], "genus": 0}, {"circuits": [1], "genus": 0}],
  "outer_region": 1
})";

// Same embedded circle on the sphere without a marked outer region.
const char* kCircleSphere = R"({
  "name": "CIRCLE_SPHERE",
  "darts": [0, 1],
  "edge_pairing": [[0, 1]],
  "rotation": [[0, 1]],
  "traversal": [0],
  "regions": [{"circuits": [0], "genus": 0}, {"circuits": [1], "genus": 0}]
})";

// Limacon: one node, a big loop with a smaller loop inside traversed the
// same way.  Windings outer 0, crescent 1, core 2.
// Darts at the node, ccw: big_out(0), inner_out(1), inner_ret(2), big_ret(3).
const char* kLimacon = R"({
  "name": "LIMACON",
  "darts": [0, 1, 2, 3],
  "edge_pairing": [[0, 3], [1, 2]],
  "rotation": [[0, 1, 2, 3]],
  "traversal": [0, 1],
  "regions": [
    {"circuits": [0], "genus": 0},
    {"circuits": [1], "genus": 0},
    {"circuits": [2], "genus": 0}
  ],
  "outer_region": 2
})";

// Figure eight: same image graph as the limacon, opposite traversal of one
// lobe.  Windings: lobes +1 and -1, outer 0.
const char* kFigureEight = R"({
  "name": "FIG8",
  "darts": [0, 1, 2, 3],
  "edge_pairing": [[0, 3], [1, 2]],
  "rotation": [[0, 1, 2, 3]],
  "traversal": [3, 2],
  "regions": [
    {"circuits": [0], "genus": 0},
    {"circuits": [1], "genus": 0},
    {"circuits": [2], "genus": 0}
  ],
  "outer_region": 0
})";

// Limacon with a small counter-kink on the inner lobe poking into the
// crescent; turning number 1, windings outer 0, crescent 1, core 2, kink 0.
// Vertices: P (lobe crossing), K (kink).  Exactly one immersed disk.
const char* kKink = R"({
  "name": "KINK",
  "darts": [0, 1, 2, 3, 4, 5, 6, 7],
  "edge_pairing": [[0, 1], [2, 3], [4, 5], [6, 7]],
  "rotation": [[0, 2, 7, 1], [3, 5, 4, 6]],
  "traversal": [0, 2, 4, 6],
  "regions": [
    {"circuits": [0], "genus": 0},
    {"circuits": [1], "genus": 0},
    {"circuits": [2], "genus": 0},
    {"circuits": [3], "genus": 0}
  ],
  "outer_region": 1
})";

// Milnor curve: planar curve with turning number 1 bounding exactly two
// inequivalent immersed disks.  Frozen from the fixture search tool
// (tools/fixture_search); see tests for the independent verification.
const char* kMilnor = R"(MILNOR_PLACEHOLDER)";

// Embedded separating curve on a genus-2 surface: one genus-1 region on
// each side.
const char* kGenus2 = R"({
  "name": "GENUS2",
  "darts": [0, 1],
  "edge_pairing": [[0, 1]],
  "rotation": [[0, 1]],
  "traversal": [0],
  "regions": [{"circuits": [0], "genus": 1}, {"circuits": [1], "genus": 1}]
})";

// Simple non-separating circle on the torus; not null-homologous.
const char* kTorusMeridian = R"({
  "name": "TORUS_MERIDIAN",
  "darts": [0, 1],
  "edge_pairing": [[0, 1]],
  "rotation": [[0, 1]],
  "traversal": [0],
  "regions": [{"circuits": [0, 1], "genus": 0}]
})";

const std::map<std::string, const char*>& table() {
    static const std::map<std::string, const char*> t = {
        {"CIRCLE", kCircle},
        {"CIRCLE_SPHERE", kCircleSphere},
        {"LIMACON", kLimacon},
        {"FIG8", kFigureEight},
        {"KINK", kKink},
        {"MILNOR", kMilnor},
        {"GENUS2", kGenus2},
        {"TORUS_MERIDIAN", kTorusMeridian},
    };
    return t;
}

} // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : table()) names.push_back(k);
    return names;
}

bool has_fixture(const std::string& name) { return table().count(name) > 0; }

std::string fixture_json(const std::string& name) {
    auto it = table().find(name);
    require(it != table().end(), "SchemaError", "unknown fixture " + name);
    return it->second;
}

CurveDiagram fixture(const std::string& name) { return parse_diagram(fixture_json(name)); }

} // namespace immext
