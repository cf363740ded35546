#include "immext/diagram.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

namespace immext {

using nlohmann::json;

void CombinatorialMap::finalize() {
    require(dart_count > 0, "InvalidDiagram", "map has no darts");
    require(static_cast<int>(pairing.size()) == dart_count, "SchemaError",
            "edge_pairing does not cover all darts");

    for (Id d = 0; d < dart_count; ++d) {
        require(pairing[d] >= 0 && pairing[d] < dart_count, "SchemaError",
                "edge_pairing out of range");
        require(pairing[d] != d, "InvalidDiagram", "edge_pairing has a fixed point");
        require(pairing[pairing[d]] == d, "InvalidDiagram", "edge_pairing is not an involution");
    }

    dart_vertex.assign(dart_count, -1);
    for (Id v = 0; v < static_cast<int>(rotation.size()); ++v) {
        for (Id d : rotation[v]) {
            require(d >= 0 && d < dart_count, "SchemaError", "rotation dart out of range");
            require(dart_vertex[d] == -1, "InvalidDiagram",
                    "dart " + std::to_string(d) + " appears in two rotation cycles");
            dart_vertex[d] = v;
        }
    }
    for (Id d = 0; d < dart_count; ++d)
        require(dart_vertex[d] != -1, "InvalidDiagram",
                "dart " + std::to_string(d) + " missing from rotation");

    dart_edge.assign(dart_count, -1);
    edge_count = 0;
    for (Id d = 0; d < dart_count; ++d) {
        if (dart_edge[d] != -1) continue;
        dart_edge[d] = dart_edge[pairing[d]] = edge_count++;
    }

    // face circuits: orbits of rotation^{-1} o pairing, face kept on the left
    std::vector<Id> rot_prev(dart_count, -1);
    for (const auto& cyc : rotation) {
        int n = static_cast<int>(cyc.size());
        for (int i = 0; i < n; ++i) rot_prev[cyc[(i + 1) % n]] = cyc[i];
    }
    face_circuits.clear();
    dart_face.assign(dart_count, -1);
    for (Id d0 = 0; d0 < dart_count; ++d0) {
        if (dart_face[d0] != -1) continue;
        std::vector<Id> circuit;
        Id d = d0;
        do {
            require(dart_face[d] == -1, "InternalError", "face circuit tangled");
            dart_face[d] = static_cast<int>(face_circuits.size());
            circuit.push_back(d);
            d = rot_prev[pairing[d]];
        } while (d != d0);
        face_circuits.push_back(std::move(circuit));
    }
}

Step CurveDiagram::dart_step(Id dart) const {
    Id e = map.dart_edge[dart];
    bool fwd = dart < map.pairing[dart];
    return Step{e, fwd};
}

Id CurveDiagram::left_region_of_dart(Id dart) const {
    return circuit_region_[map.dart_face[dart]];
}

Id CurveDiagram::right_region_of_dart(Id dart) const {
    return circuit_region_[map.dart_face[map.pairing[dart]]];
}

int CurveDiagram::min_quadrant(Id node, const std::vector<int>& region_values) const {
    int best = 0;
    bool first = true;
    for (Id d : map.rotation[node]) {
        int v = region_values[circuit_region_[map.dart_face[d]]];
        if (first || v < best) best = v;
        first = false;
    }
    return best;
}

void CurveDiagram::validate() {
    map.finalize();

    // vertices: nodes of degree 4, at most one marker of degree 2
    nodes_.clear();
    int markers = 0;
    for (Id v = 0; v < static_cast<int>(map.rotation.size()); ++v) {
        int deg = static_cast<int>(map.rotation[v].size());
        if (deg == 4) {
            nodes_.push_back(v);
        } else if (deg == 2) {
            ++markers;
        } else {
            fail("InvalidDiagram", "vertex " + std::to_string(v) + " has degree " +
                                       std::to_string(deg) + "; expected 4 (node) or 2 (marker)");
        }
    }
    require(markers <= 1, "InvalidDiagram", "more than one marker vertex");
    require(markers == 0 || nodes_.empty(), "InvalidDiagram",
            "marker vertex present alongside nodes");
    require(markers == 1 || !nodes_.empty(), "InvalidDiagram", "no vertices");

    // traversal: single closed walk covering every edge once, straight
    // through every vertex
    require(static_cast<int>(traversal.size()) == map.edge_count, "InvalidDiagram",
            "traversal length differs from edge count");
    std::vector<bool> edge_seen(map.edge_count, false);
    std::vector<Id> rot_pos(map.dart_count, -1);
    for (const auto& cyc : map.rotation)
        for (int i = 0; i < static_cast<int>(cyc.size()); ++i) rot_pos[cyc[i]] = i;

    int n = static_cast<int>(traversal.size());
    for (int i = 0; i < n; ++i) {
        Id d = traversal[i];
        require(d >= 0 && d < map.dart_count, "SchemaError", "traversal dart out of range");
        Id e = map.dart_edge[d];
        require(!edge_seen[e], "InvalidDiagram", "traversal repeats an edge");
        edge_seen[e] = true;
        Id arrive_end = map.pairing[d];           // dart at the head vertex
        Id next = traversal[(i + 1) % n];
        Id v = map.dart_vertex[arrive_end];
        require(map.dart_vertex[next] == v, "InvalidDiagram",
                "traversal does not chain at step " + std::to_string(i));
        int deg = static_cast<int>(map.rotation[v].size());
        int hop = (deg == 4) ? 2 : 1; // straight through a node, onward at a marker
        Id expected = map.rotation[v][(rot_pos[arrive_end] + hop) % deg];
        require(next == expected, "InvalidDiagram",
                "traversal is not transverse at vertex " + std::to_string(v) +
                    " (not a straight-through double point)");
    }

    // regions partition the face circuits
    require(!regions.empty(), "SchemaError", "no regions declared");
    circuit_region_.assign(map.face_circuits.size(), -1);
    for (Id r = 0; r < region_count(); ++r) {
        require(!regions[r].circuits.empty(), "SchemaError", "region with no circuits");
        require(regions[r].genus >= 0, "SchemaError", "negative region genus");
        for (Id c : regions[r].circuits) {
            require(c >= 0 && c < static_cast<int>(map.face_circuits.size()), "SchemaError",
                    "region circuit index out of range");
            require(circuit_region_[c] == -1, "InvalidDiagram",
                    "face circuit assigned to two regions");
            circuit_region_[c] = r;
        }
    }
    for (Id c = 0; c < static_cast<int>(map.face_circuits.size()); ++c)
        require(circuit_region_[c] != -1, "InvalidDiagram",
                "face circuit " + std::to_string(c) + " not assigned to a region");

    if (outer_region)
        require(*outer_region >= 0 && *outer_region < region_count(), "SchemaError",
                "outer_region out of range");

    build_ambient();

    // ambient must be a closed connected oriented surface
    for (Id e = 0; e < ambient_->edge_count(); ++e)
        require(ambient_->edge_interior(e), "InvalidDiagram", "ambient surface has boundary");
    require(ambient_->face_components().size() == 1, "Disconnected",
            "ambient surface is disconnected");
    int chi = ambient_->euler_characteristic();
    require(chi % 2 == 0 && chi <= 2, "InvalidDiagram",
            "ambient Euler characteristic " + std::to_string(chi) +
                " is not that of a closed oriented surface");
    ambient_genus_ = (2 - chi) / 2;

    traversal_steps_.clear();
    for (Id d : traversal) traversal_steps_.push_back(dart_step(d));
}

void CurveDiagram::build_ambient() {
    auto sc = std::make_shared<SurfaceComplex>();
    int nv = static_cast<int>(map.rotation.size());
    sc->vertex_count = nv;
    sc->vertex_names.resize(nv);
    for (Id v = 0; v < nv; ++v)
        sc->vertex_names[v] = (map.rotation[v].size() == 4 ? "n" : "m") + std::to_string(v);

    // arcs first, ids aligned with map edge ids
    sc->edge_ends.resize(map.edge_count);
    sc->edge_names.resize(map.edge_count);
    for (Id d = 0; d < map.dart_count; ++d) {
        if (d < map.pairing[d]) {
            Id e = map.dart_edge[d];
            sc->edge_ends[e] = {map.dart_vertex[d], map.dart_vertex[map.pairing[d]]};
            sc->edge_names[e] = "arc" + std::to_string(e);
        }
    }

    auto circuit_steps = [&](Id c) {
        std::vector<Step> steps;
        for (Id d : map.face_circuits[c]) steps.push_back(dart_step(d));
        return steps;
    };

    for (Id r = 0; r < region_count(); ++r) {
        const RegionSpec& spec = regions[r];
        Id hub = sc->vertex_count++;
        sc->vertex_names.push_back("hub_r" + std::to_string(r));

        std::vector<Step> walk;
        auto first_circuit = circuit_steps(spec.circuits[0]);
        Id base0 = map.dart_vertex[map.face_circuits[spec.circuits[0]][0]];
        walk.insert(walk.end(), first_circuit.begin(), first_circuit.end());

        Id t0 = static_cast<Id>(sc->edge_ends.size());
        sc->edge_ends.push_back({base0, hub});
        sc->edge_names.push_back("tether_r" + std::to_string(r) + "_0");
        walk.push_back(Step{t0, true});

        for (int g = 0; g < spec.genus; ++g) {
            Id a = static_cast<Id>(sc->edge_ends.size());
            sc->edge_ends.push_back({hub, hub});
            sc->edge_names.push_back("handle_a" + std::to_string(r) + "_" + std::to_string(g));
            Id b = static_cast<Id>(sc->edge_ends.size());
            sc->edge_ends.push_back({hub, hub});
            sc->edge_names.push_back("handle_b" + std::to_string(r) + "_" + std::to_string(g));
            walk.push_back(Step{a, true});
            walk.push_back(Step{b, true});
            walk.push_back(Step{a, false});
            walk.push_back(Step{b, false});
        }

        for (size_t j = 1; j < spec.circuits.size(); ++j) {
            Id cj = spec.circuits[j];
            Id basej = map.dart_vertex[map.face_circuits[cj][0]];
            Id tj = static_cast<Id>(sc->edge_ends.size());
            sc->edge_ends.push_back({basej, hub});
            sc->edge_names.push_back("tether_r" + std::to_string(r) + "_" + std::to_string(j));
            walk.push_back(Step{tj, false}); // hub -> base_j
            auto cs = circuit_steps(cj);
            walk.insert(walk.end(), cs.begin(), cs.end());
            walk.push_back(Step{tj, true}); // back to hub
        }
        walk.push_back(Step{t0, false}); // hub -> base_0, closing the walk

        sc->face_walks.push_back(std::move(walk));
        sc->face_region.push_back(r);
    }

    sc->finalize("InvalidDiagram");
    ambient_ = sc;
}

CurveDiagram parse_diagram(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& ex) {
        fail("SchemaError", std::string("malformed JSON: ") + ex.what());
    }

    CurveDiagram d;
    try {
        require(doc.is_object(), "SchemaError", "document is not an object");
        d.name = doc.value("name", std::string());

        const auto& darts = doc.at("darts");
        require(darts.is_array(), "SchemaError", "darts must be an array");
        int dart_count = static_cast<int>(darts.size());
        for (int i = 0; i < dart_count; ++i)
            require(darts[i].get<int>() == i, "SchemaError",
                    "darts must be the contiguous ids 0..n-1");
        d.map.dart_count = dart_count;

        d.map.pairing.assign(dart_count, -1);
        for (const auto& pr : doc.at("edge_pairing")) {
            require(pr.is_array() && pr.size() == 2, "SchemaError",
                    "edge_pairing entries must be 2-arrays");
            int a = pr[0].get<int>(), b = pr[1].get<int>();
            require(a >= 0 && a < dart_count && b >= 0 && b < dart_count && a != b, "SchemaError",
                    "edge_pairing entry out of range");
            require(d.map.pairing[a] == -1 && d.map.pairing[b] == -1, "SchemaError",
                    "edge_pairing repeats a dart");
            d.map.pairing[a] = b;
            d.map.pairing[b] = a;
        }

        for (const auto& cyc : doc.at("rotation")) {
            require(cyc.is_array() && !cyc.empty(), "SchemaError",
                    "rotation cycles must be nonempty arrays");
            d.map.rotation.push_back(cyc.get<std::vector<Id>>());
        }

        d.traversal = doc.at("traversal").get<std::vector<Id>>();

        for (const auto& reg : doc.at("regions")) {
            RegionSpec spec;
            spec.circuits = reg.at("circuits").get<std::vector<Id>>();
            spec.genus = reg.value("genus", 0);
            d.regions.push_back(std::move(spec));
        }

        if (doc.contains("outer_region")) d.outer_region = doc["outer_region"].get<Id>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        fail("SchemaError", std::string("missing or ill-typed field: ") + ex.what());
    }

    d.validate();
    return d;
}

std::string diagram_to_json(const CurveDiagram& d) {
    json doc;
    if (!d.name.empty()) doc["name"] = d.name;
    std::vector<int> darts(d.map.dart_count);
    for (int i = 0; i < d.map.dart_count; ++i) darts[i] = i;
    doc["darts"] = darts;
    json pairs = json::array();
    for (Id a = 0; a < d.map.dart_count; ++a)
        if (a < d.map.pairing[a]) pairs.push_back({a, d.map.pairing[a]});
    doc["edge_pairing"] = pairs;
    doc["rotation"] = d.map.rotation;
    doc["traversal"] = d.traversal;
    json regs = json::array();
    for (const auto& r : d.regions) {
        json jr;
        jr["circuits"] = r.circuits;
        jr["genus"] = r.genus;
        regs.push_back(jr);
    }
    doc["regions"] = regs;
    if (d.outer_region) doc["outer_region"] = *d.outer_region;
    return doc.dump(2);
}

namespace {

// Solves value(left) = value(right) + 1 over the region adjacency induced
// by the traversal, anchored at `anchor_region` = 0.  Breadth-first; any
// inconsistency means the curve is not null-homologous.
std::vector<int> solve_numbering(const CurveDiagram& d, Id anchor_region) {
    std::vector<int> val(d.region_count(), 0);
    std::vector<bool> known(d.region_count(), false);
    val[anchor_region] = 0;
    known[anchor_region] = true;

    struct Arc {
        Id left, right;
    };
    std::vector<Arc> arcs;
    for (Id dart : d.traversal)
        arcs.push_back({d.left_region_of_dart(dart), d.right_region_of_dart(dart)});

    std::deque<Id> queue{anchor_region};
    // adjacency list per region
    std::vector<std::vector<int>> touching(d.region_count());
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
        touching[arcs[i].left].push_back(i);
        touching[arcs[i].right].push_back(i);
    }
    while (!queue.empty()) {
        Id r = queue.front();
        queue.pop_front();
        for (int i : touching[r]) {
            const Arc& a = arcs[i];
            Id other = (a.left == r) ? a.right : a.left;
            int want = (a.left == r) ? val[r] - 1 : val[r] + 1;
            if (a.left == other && a.right == other) {
                // same region on both sides of an arc: 0 = 1, unsatisfiable
                fail("NotNullHomologous",
                     "arc with the same region on both sides; the curve bounds nothing");
            }
            if (!known[other]) {
                known[other] = true;
                val[other] = want;
                queue.push_back(other);
            } else {
                require(val[other] == want, "NotNullHomologous",
                        "the left-minus-right rule is inconsistent; the curve is not "
                        "homologically trivial");
            }
        }
    }
    for (Id r = 0; r < d.region_count(); ++r)
        require(known[r], "InternalError", "region adjacency not connected");
    return val;
}

Numbering make_numbering(std::vector<int> vals) {
    Numbering n;
    n.values = std::move(vals);
    n.min_value = *std::min_element(n.values.begin(), n.values.end());
    n.max_value = *std::max_element(n.values.begin(), n.values.end());
    return n;
}

} // namespace

Numbering numbering(const CurveDiagram& d, int min_value) {
    auto vals = solve_numbering(d, 0);
    int lo = *std::min_element(vals.begin(), vals.end());
    for (int& v : vals) v += min_value - lo;
    return make_numbering(std::move(vals));
}

Numbering winding_numbering(const CurveDiagram& d) {
    require(d.planar_mode(), "NotPlanar", "diagram has no outer region marked");
    auto vals = solve_numbering(d, *d.outer_region);
    return make_numbering(std::move(vals));
}

int turning_number(const CurveDiagram& d) {
    require(d.planar_mode(), "NotPlanar", "turning number requires planar mode");
    Numbering w = winding_numbering(d);

    // Euler characteristic of the virtual filling related to the winding
    // numbering: cell preimage counts forced by the local models.
    long chi = 0;
    // vertices: a node with least adjacent value k contributes k interior
    // preimages plus 2 boundary ones; a marker contributes min+1.
    for (Id v = 0; v < static_cast<int>(d.map.rotation.size()); ++v) {
        int deg = static_cast<int>(d.map.rotation[v].size());
        int k = d.min_quadrant(v, w.values);
        chi += (deg == 4) ? k + 2 : k + 1;
    }
    // arcs: right value + 1 preimages (that many sheets pass or end there)
    for (Id dart : d.traversal) chi -= w.values[d.right_region_of_dart(dart)] + 1;
    // regions: value * chi(region), one 2-cell complex each
    for (Id r = 0; r < d.region_count(); ++r) {
        int c = 2 - 2 * d.regions[r].genus - static_cast<int>(d.regions[r].circuits.size());
        chi += static_cast<long>(w.values[r]) * c;
    }
    return static_cast<int>(chi);
}

} // namespace immext
