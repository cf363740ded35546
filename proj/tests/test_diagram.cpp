#include <doctest.h>

#include "immext/diagram.hpp"
#include "immext/fixtures.hpp"

using namespace immext;

namespace {

int region_value(const CurveDiagram& d, const Numbering& n, Id region) {
    static_cast<void>(d);
    return n.values[region];
}

} // namespace

TEST_CASE("CIRCLE parses and numbers") {
    CurveDiagram d = fixture("CIRCLE");
    CHECK(d.node_count() == 0);
    CHECK(d.ambient_genus() == 0);
    CHECK(d.planar_mode());

    Numbering w = winding_numbering(d);
    CHECK(region_value(d, w, *d.outer_region) == 0);
    // inside = left of the traversal dart
    Id inside = d.left_region_of_dart(d.traversal[0]);
    CHECK(w.values[inside] == 1);

    Numbering n0 = numbering(d, 0);
    CHECK(n0.min_value == 0);
    CHECK(n0.max_value == 1);
    CHECK(turning_number(d) == 1);
}

TEST_CASE("LIMACON windings and turning number") {
    CurveDiagram d = fixture("LIMACON");
    CHECK(d.node_count() == 1);
    CHECK(d.ambient_genus() == 0);

    Numbering w = winding_numbering(d);
    CHECK(w.min_value == 0);
    CHECK(w.max_value == 2);
    // outer 0, crescent 1, core 2
    Id crescent = d.left_region_of_dart(d.traversal[0]);
    Id core = d.left_region_of_dart(d.traversal[1]);
    CHECK(w.values[crescent] == 1);
    CHECK(w.values[core] == 2);
    CHECK(w.values[*d.outer_region] == 0);

    CHECK(turning_number(d) == 2);
}

TEST_CASE("FIG8 windings and turning number") {
    CurveDiagram d = fixture("FIG8");
    Numbering w = winding_numbering(d);
    CHECK(w.min_value == -1);
    CHECK(w.max_value == 1);
    CHECK(w.values[*d.outer_region] == 0);
    CHECK(turning_number(d) == 0);
}

TEST_CASE("KINK fixture is the one-disk curve") {
    CurveDiagram d = fixture("KINK");
    CHECK(d.node_count() == 2);
    Numbering w = winding_numbering(d);
    CHECK(w.min_value == 0);
    CHECK(w.max_value == 2);
    CHECK(turning_number(d) == 1);
}

TEST_CASE("GENUS2 ambient and numbering") {
    CurveDiagram d = fixture("GENUS2");
    CHECK(d.ambient_genus() == 2);
    CHECK(!d.planar_mode());

    Numbering n1 = numbering(d, 1);
    CHECK(n1.min_value == 1);
    CHECK(n1.max_value == 2);
    Id left = d.left_region_of_dart(d.traversal[0]);
    CHECK(n1.values[left] == 2);

    // uniqueness up to the additive shift
    Numbering n0 = numbering(d, 0);
    for (Id r = 0; r < d.region_count(); ++r) CHECK(n1.values[r] == n0.values[r] + 1);
}

TEST_CASE("TORUS_MERIDIAN is not null-homologous") {
    CurveDiagram d = fixture("TORUS_MERIDIAN");
    CHECK(d.ambient_genus() == 1);
    CHECK_THROWS_WITH_AS(numbering(d, 0), doctest::Contains("NotNullHomologous"), Error);
}

TEST_CASE("numbering satisfies the left-right rule on every arc") {
    for (const auto& name : fixture_names()) {
        if (name == "TORUS_MERIDIAN" || name == "MILNOR") continue;
        CurveDiagram d = fixture(name);
        for (int m = 0; m <= 3; ++m) {
            Numbering n = numbering(d, m);
            CHECK(n.min_value == m);
            for (Id dart : d.traversal) {
                Id l = d.left_region_of_dart(dart);
                Id r = d.right_region_of_dart(dart);
                CHECK(n.values[l] == n.values[r] + 1);
            }
        }
    }
}

TEST_CASE("ambient Euler characteristic matches declared genus") {
    struct Expect {
        const char* name;
        int genus;
    } cases[] = {{"CIRCLE", 0},  {"LIMACON", 0},        {"FIG8", 0},
                 {"KINK", 0},    {"GENUS2", 2},         {"TORUS_MERIDIAN", 1}};
    for (auto [name, genus] : cases) {
        CurveDiagram d = fixture(name);
        CHECK(d.ambient().euler_characteristic() == 2 - 2 * genus);
        CHECK(d.ambient_genus() == genus);
    }
}

TEST_CASE("invalid diagrams are rejected") {
    // limacon traversal broken: visits the node along adjacent darts
    std::string bad = R"({
      "darts": [0,1,2,3],
      "edge_pairing": [[0,3],[1,2]],
      "rotation": [[0,1,2,3]],
      "traversal": [0,2],
      "regions": [{"circuits":[0]},{"circuits":[1]},{"circuits":[2]}]
    })";
    CHECK_THROWS_AS(parse_diagram(bad), Error);

    std::string garbled = "{ not json";
    CHECK_THROWS_WITH_AS(parse_diagram(garbled), doctest::Contains("SchemaError"), Error);
}

TEST_CASE("diagram round-trips through JSON") {
    CurveDiagram d = fixture("KINK");
    CurveDiagram d2 = parse_diagram(diagram_to_json(d));
    CHECK(d2.map.dart_count == d.map.dart_count);
    CHECK(d2.traversal == d.traversal);
    CHECK(d2.region_count() == d.region_count());
}
