#include <doctest.h>

#include <set>

#include "immext/cut.hpp"
#include "immext/fixtures.hpp"
#include "immext/subsurface.hpp"

using namespace immext;

TEST_CASE("CIRCLE D_1 is the inside disk") {
    CurveDiagram d = fixture("CIRCLE");
    Numbering psi = numbering(d, 0);
    Subsurface s = build_subsurface(d, psi, 1);
    REQUIRE(s.topology.size() == 1);
    CHECK(s.topology[0].genus == 0);
    CHECK(s.topology[0].boundary_circuits == 1);
    CHECK(s.topology[0].euler == 1);
    CHECK(s.nodes_V.empty());
    CHECK(s.boundary.size() == 1);
}

TEST_CASE("LIMACON D_2 is a disk with V_2 the node") {
    CurveDiagram d = fixture("LIMACON");
    Numbering w = winding_numbering(d);
    Subsurface s2 = build_subsurface(d, w, 2);
    REQUIRE(s2.topology.size() == 1);
    CHECK(s2.topology[0].euler == 1);
    CHECK(s2.topology[0].boundary_circuits == 1);
    REQUIRE(s2.nodes_V.size() == 1);
    CHECK(s2.nodes_V[0] == d.nodes()[0]);
    // the Gaussian circle passes through the node
    bool through_node = false;
    for (const auto& circuit : s2.boundary)
        for (const Step& st : circuit)
            if (d.ambient().tail(st) == d.nodes()[0]) through_node = true;
    CHECK(through_node);

    Subsurface s1 = build_subsurface(d, w, 1);
    CHECK(s1.nodes_V.empty()); // the node has least quadrant 0, so V_1 is empty
    CHECK(s1.topology.size() == 1);

    CHECK_THROWS_WITH_AS(build_subsurface(d, w, 3), doctest::Contains("LevelOutOfRange"), Error);
}

TEST_CASE("GENUS2 D_2 is the genus-1 left side") {
    CurveDiagram d = fixture("GENUS2");
    Numbering psi = numbering(d, 1);
    Subsurface s2 = build_subsurface(d, psi, 2);
    REQUIRE(s2.topology.size() == 1);
    CHECK(s2.topology[0].genus == 1);
    CHECK(s2.topology[0].boundary_circuits == 1);
    CHECK(s2.nodes_V.empty());
    // boundary is the whole curve (one arc)
    REQUIRE(s2.boundary.size() == 1);
    CHECK(s2.boundary[0].size() == 1);

    Subsurface s1 = build_subsurface(d, psi, 1);
    CHECK(s1.topology.size() == 1);
    CHECK(s1.topology[0].boundary_circuits == 0); // full closed surface
}

TEST_CASE("nesting and node coverage across the corpus") {
    for (const auto& name : {"CIRCLE", "LIMACON", "KINK"}) {
        CurveDiagram d = fixture(name);
        Numbering w = winding_numbering(d);
        std::set<Id> prev;
        bool first = true;
        std::set<Id> covered;
        for (int i = w.max_value; i >= 1; --i) {
            Subsurface s = build_subsurface(d, w, i);
            std::set<Id> faces(s.faces.begin(), s.faces.end());
            if (!first)
                for (Id f : prev) CHECK(faces.count(f) == 1);
            first = false;
            prev = faces;
            for (Id v : s.nodes_V) {
                CHECK(covered.count(v) == 0); // V_i are disjoint
                covered.insert(v);
            }
        }
        CHECK(covered.size() == static_cast<size_t>(d.node_count()));
    }
}

TEST_CASE("every Gaussian circuit is a simple cycle") {
    for (const auto& name : {"LIMACON", "KINK"}) {
        CurveDiagram d = fixture(name);
        Numbering w = winding_numbering(d);
        for (int i = 1; i <= w.max_value; ++i) {
            Subsurface s = build_subsurface(d, w, i);
            for (const auto& circuit : s.boundary) {
                std::set<Id> seen;
                for (const Step& st : circuit) {
                    CHECK(seen.count(st.edge) == 0);
                    seen.insert(st.edge);
                }
            }
        }
    }
}

TEST_CASE("cut round-trip on subsurfaces") {
    CurveDiagram d = fixture("KINK");
    Numbering w = winding_numbering(d);
    Subsurface s1 = build_subsurface(d, w, 1);
    CutResult cut = cut_along(s1.complex.sub, {}, {});
    CHECK(roundtrip_identity(s1.complex.sub, cut));
}
