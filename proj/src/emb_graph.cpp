#include "immext/emb_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>

#include "immext/refine.hpp"
#include "immext/subsurface.hpp"

namespace immext {

MasterComplex master_from_diagram(const CurveDiagram& d) {
    MasterComplex m;
    m.sc = d.ambient_ptr();
    m.edge_origin.assign(m.sc->edge_count(), -1);
    for (Id e = 0; e < m.sc->edge_count(); ++e)
        if (d.edge_is_arc(e)) m.edge_origin[e] = e;
    m.edge_stratum.assign(m.sc->edge_count(), -1);
    return m;
}

std::vector<int> GraphComponent::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(x_degree.size()); ++v)
        if (x_degree[v] == 1) out.push_back(v);
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<GraphComponent> graph_components(const SurfaceComplex& host,
                                             const std::set<Id>& edges,
                                             const std::set<Id>& sever) {
    std::map<Id, int> shared_vertex; // host vertex -> abstract id
    std::vector<Id> edge_list(edges.begin(), edges.end());
    std::vector<std::array<int, 2>> aends(edge_list.size());
    std::vector<Id> vertex_cells;

    auto abstract_for = [&](Id hv) {
        if (sever.count(hv)) {
            vertex_cells.push_back(hv);
            return static_cast<int>(vertex_cells.size()) - 1;
        }
        auto it = shared_vertex.find(hv);
        if (it != shared_vertex.end()) return it->second;
        vertex_cells.push_back(hv);
        int id = static_cast<int>(vertex_cells.size()) - 1;
        shared_vertex[hv] = id;
        return id;
    };

    for (size_t i = 0; i < edge_list.size(); ++i)
        for (int k = 0; k < 2; ++k)
            aends[i][k] = abstract_for(host.edge_ends[edge_list[i]][k]);

    int nv = static_cast<int>(vertex_cells.size());
    std::vector<int> degree(nv, 0);
    std::vector<std::vector<std::pair<int, int>>> incident(nv); // (edge idx, end)
    for (size_t i = 0; i < edge_list.size(); ++i)
        for (int k = 0; k < 2; ++k) {
            degree[aends[i][k]]++;
            incident[aends[i][k]].push_back({static_cast<int>(i), k});
        }

    UnionFind uf(nv);
    for (size_t i = 0; i < edge_list.size(); ++i) uf.unite(aends[i][0], aends[i][1]);

    std::map<int, std::vector<int>> comp_edges;
    for (size_t i = 0; i < edge_list.size(); ++i)
        comp_edges[uf.find(aends[i][0])].push_back(static_cast<int>(i));

    std::vector<GraphComponent> out;
    for (auto& [root, eidx] : comp_edges) {
        static_cast<void>(root);
        GraphComponent comp;
        std::map<int, int> local_of;
        auto local = [&](int av) {
            auto it = local_of.find(av);
            if (it != local_of.end()) return it->second;
            int id = static_cast<int>(comp.vertex_cells.size());
            comp.vertex_cells.push_back(vertex_cells[av]);
            local_of[av] = id;
            return id;
        };

        std::set<int> used;
        auto walk_chain = [&](int ei, int from_end) {
            GraphChain chain;
            chain.u = local(aends[ei][from_end]);
            int cur = ei, cur_end = from_end;
            while (true) {
                used.insert(cur);
                chain.cells.push_back(edge_list[cur]);
                int arrive = aends[cur][cur_end ^ 1];
                if (degree[arrive] != 2) {
                    chain.v = local(arrive);
                    break;
                }
                int nxt = -1, nxt_end = -1;
                for (auto [ej, k] : incident[arrive]) {
                    if (ej == cur && k == (cur_end ^ 1)) continue;
                    nxt = ej;
                    nxt_end = k;
                }
                if (nxt == -1 || used.count(nxt)) { // closed back up
                    chain.v = local(arrive);
                    break;
                }
                cur = nxt;
                cur_end = nxt_end;
            }
            return chain;
        };

        for (int ei : eidx) {
            if (used.count(ei)) continue;
            if (degree[aends[ei][0]] != 2)
                comp.chains.push_back(walk_chain(ei, 0));
            else if (degree[aends[ei][1]] != 2)
                comp.chains.push_back(walk_chain(ei, 1));
        }
        for (int ei : eidx) { // leftover pure cycles
            if (used.count(ei)) continue;
            comp.chains.push_back(walk_chain(ei, 0));
        }

        comp.x_degree.assign(comp.vertex_cells.size(), 0);
        for (const auto& ch : comp.chains) {
            comp.x_degree[ch.u]++;
            comp.x_degree[ch.v]++;
        }
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<std::set<Id>> good_subgraphs_component(const GraphComponent& comp) {
    int nc = static_cast<int>(comp.chains.size());
    require(nc <= 24, "InternalError", "graph too large for subgraph enumeration");
    int nv = static_cast<int>(comp.vertex_cells.size());

    std::vector<std::set<Id>> out;
    for (std::uint32_t mask = 0; mask < (1u << nc); ++mask) {
        std::vector<int> deg(nv, 0);
        for (int c = 0; c < nc; ++c)
            if (mask & (1u << c)) {
                deg[comp.chains[c].u]++;
                deg[comp.chains[c].v]++;
            }
        bool ok = true;
        for (int v = 0; v < nv && ok; ++v)
            if ((deg[v] == 1) != (comp.x_degree[v] == 1)) ok = false;
        if (!ok) continue;
        std::set<Id> edges;
        for (int c = 0; c < nc; ++c)
            if (mask & (1u << c))
                edges.insert(comp.chains[c].cells.begin(), comp.chains[c].cells.end());
        out.push_back(std::move(edges));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::set<Id>> good_subgraphs(const SurfaceComplex& host, const std::set<Id>& X,
                                         const std::set<Id>& G0) {
    if (X.empty()) return {std::set<Id>{}}; // sub(empty) = { empty }

    std::set<Id> g0_vertices;
    for (Id e : G0) {
        g0_vertices.insert(host.edge_ends[e][0]);
        g0_vertices.insert(host.edge_ends[e][1]);
    }
    std::set<Id> sever;
    for (Id e : X)
        for (int k = 0; k < 2; ++k) {
            Id v = host.edge_ends[e][k];
            if (g0_vertices.count(v)) sever.insert(v);
        }

    auto comps = graph_components(host, X, sever);
    std::vector<std::set<Id>> acc = {std::set<Id>{}};
    for (const auto& comp : comps) {
        auto local = good_subgraphs_component(comp);
        std::vector<std::set<Id>> next;
        for (const auto& base : acc)
            for (const auto& add : local) {
                std::set<Id> u = base;
                u.insert(add.begin(), add.end());
                next.push_back(std::move(u));
            }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return acc;
}

bool is_appropriate(const SurfaceComplex& A, const std::set<Id>& G0, const std::set<Id>& marks) {
    CutResult cut = cut_along(A, G0, marks);
    std::vector<int> marks_in_piece(cut.piece_faces.size(), 0);
    for (const auto& [mark, lifts] : cut.lifted_marks) {
        static_cast<void>(mark);
        for (Id lv : lifts) marks_in_piece[cut.piece_of_vertex(lv)]++;
    }
    for (size_t p = 0; p < cut.piece_faces.size(); ++p) {
        PieceShape shape = piece_shape(cut.cut, cut.piece_faces[p]);
        if (shape.closed) return false; // undefined case, rejected
        if (shape.disk && marks_in_piece[p] == 1) return false;
    }
    return true;
}

std::set<Id> remap_edges(const std::set<Id>& edges, const std::vector<std::vector<Id>>& trace) {
    std::set<Id> out;
    for (Id e : edges) {
        require(e >= 0 && e < static_cast<Id>(trace.size()), "InternalError",
                "edge trace out of range");
        out.insert(trace[e].begin(), trace[e].end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// build_trivalent
// ---------------------------------------------------------------------------

namespace {

// The cut complex C and the master M refined in lockstep, with maps kept
// aligned so spine cells can be pushed forward.
struct Lockstep {
    SurfaceComplex C;
    SurfaceComplex M;
    std::vector<Id> e_c2m;
    std::vector<Id> v_c2m;
    std::vector<Id> f_c2m;
    std::vector<std::vector<Id>> m_children; // original master edge -> current ids
    std::vector<int> c_face_piece;           // C face -> piece index

    void note_new_master_edge(Id me) { m_children.push_back({me}); }

    void note_master_split(Id me, Id second) {
        for (auto& kids : m_children) {
            auto it = std::find(kids.begin(), kids.end(), me);
            if (it != kids.end()) {
                kids.insert(it + 1, second);
                return;
            }
        }
        fail("InternalError", "edge lineage lost");
    }

    refine::SubdividedEdge subdivide(Id ce) {
        Id me = e_c2m[ce];
        auto rc = refine::subdivide_edge(C, ce);
        auto rm = refine::subdivide_edge(M, me);
        e_c2m.resize(C.edge_ends.size(), -1);
        v_c2m.resize(C.vertex_count, -1);
        e_c2m[rc.half_head] = rm.half_head;
        v_c2m[rc.midpoint] = rm.midpoint;
        note_master_split(me, rm.half_head);
        return rc;
    }

    refine::ConedFace cone(Id cf) {
        Id mf = f_c2m[cf];
        require(C.face_walks[cf].size() == M.face_walks[mf].size(), "InternalError",
                "lockstep face walks misaligned");
        auto rc = refine::cone_face(C, cf);
        auto rm = refine::cone_face(M, mf);
        e_c2m.resize(C.edge_ends.size(), -1);
        v_c2m.resize(C.vertex_count, -1);
        f_c2m.resize(C.face_walks.size(), -1);
        c_face_piece.resize(C.face_walks.size(), -1);
        v_c2m[rc.hub] = rm.hub;
        int piece = c_face_piece[cf];
        for (size_t i = 0; i < rc.radials.size(); ++i) {
            e_c2m[rc.radials[i]] = rm.radials[i];
            note_new_master_edge(rm.radials[i]);
        }
        for (size_t i = 0; i < rc.triangles.size(); ++i) {
            f_c2m[rc.triangles[i]] = rm.triangles[i];
            c_face_piece[rc.triangles[i]] = piece;
        }
        return rc;
    }

    refine::SplitVertex split(Id cv, int first, int count) {
        const auto& clink = C.vertex_link(cv);
        Id mv = v_c2m[cv];
        const auto& mlink = M.vertex_link(mv);
        int deg = static_cast<int>(clink.out_darts.size());
        require(static_cast<int>(mlink.out_darts.size()) == deg, "InternalError",
                "lockstep links differ at split vertex");
        Step cfirst = clink.out_darts[((first % deg) + deg) % deg];
        Step mfirst{e_c2m[cfirst.edge], cfirst.forward};
        int mpos = -1;
        for (int i = 0; i < deg; ++i)
            if (mlink.out_darts[i] == mfirst) mpos = i;
        require(mpos >= 0, "InternalError", "split dart not found in master link");
        for (int i = 0; i < count; ++i) {
            Step cd = clink.out_darts[(first + i) % deg];
            Step md = mlink.out_darts[(mpos + i) % deg];
            require(Step{e_c2m[cd.edge], cd.forward} == md, "InternalError",
                    "lockstep links misaligned at split vertex");
        }
        auto rc = refine::split_vertex(C, cv, first, count);
        auto rm = refine::split_vertex(M, mv, mpos, count);
        e_c2m.resize(C.edge_ends.size(), -1);
        v_c2m.resize(C.vertex_count, -1);
        e_c2m[rc.split_edge] = rm.split_edge;
        v_c2m[rc.new_vertex] = rm.new_vertex;
        note_new_master_edge(rm.split_edge);
        return rc;
    }

    void refresh() {
        C.finalize();
        M.finalize();
    }
};

} // namespace

TrivalentResult build_trivalent(const MasterComplex& master, const std::vector<Id>& area_faces,
                                const std::set<Id>& G0, const std::set<Id>& marks, uint64_t seed,
                                int stratum_level) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0xabcdef12345ull);

    Extraction ex = extract_faces(master.c(), area_faces);
    std::vector<Id> m2sub_edge(master.c().edge_count(), -1);
    for (Id e = 0; e < static_cast<Id>(ex.emap.size()); ++e) m2sub_edge[ex.emap[e]] = e;
    std::vector<Id> m2sub_vertex(master.c().vertex_count, -1);
    for (Id v = 0; v < ex.sub.vertex_count; ++v) m2sub_vertex[ex.vmap[v]] = v;

    std::set<Id> g0_sub;
    for (Id e : G0) {
        require(e >= 0 && e < static_cast<Id>(m2sub_edge.size()) && m2sub_edge[e] >= 0,
                "GraphNotEmbedded", "relative graph leaves the subsurface");
        g0_sub.insert(m2sub_edge[e]);
    }
    std::set<Id> marks_sub;
    for (Id v : marks) {
        require(v >= 0 && v < static_cast<Id>(m2sub_vertex.size()) && m2sub_vertex[v] >= 0,
                "InternalError", "mark outside the subsurface");
        marks_sub.insert(m2sub_vertex[v]);
    }

    CutResult cut = cut_along(ex.sub, g0_sub, marks_sub);

    int n_pieces = static_cast<int>(cut.piece_faces.size());
    std::vector<std::vector<Id>> piece_mark_lifts(n_pieces);
    for (const auto& [mark, lifts] : cut.lifted_marks) {
        static_cast<void>(mark);
        for (Id lv : lifts) piece_mark_lifts[cut.piece_of_vertex(lv)].push_back(lv);
    }
    for (auto& lifts : piece_mark_lifts) std::sort(lifts.begin(), lifts.end());

    std::vector<PieceShape> shapes(n_pieces);
    std::vector<bool> active(n_pieces, false);
    for (int p = 0; p < n_pieces; ++p) {
        shapes[p] = piece_shape(cut.cut, cut.piece_faces[p]);
        require(!shapes[p].closed, "NotAppropriate", "a cut piece is a closed surface");
        require(!(shapes[p].disk && piece_mark_lifts[p].size() == 1), "NotAppropriate",
                "a cut piece is a disk with exactly one mark");
        active[p] = !(shapes[p].disk && piece_mark_lifts[p].empty());
    }

    Lockstep ls;
    ls.C = cut.cut;
    ls.M = master.c();
    ls.e_c2m.resize(ls.C.edge_count());
    for (Id e = 0; e < ls.C.edge_count(); ++e) ls.e_c2m[e] = ex.emap[cut.emap[e]];
    ls.v_c2m.resize(ls.C.vertex_count);
    for (Id v = 0; v < ls.C.vertex_count; ++v) ls.v_c2m[v] = ex.vmap[cut.vmap[v]];
    ls.f_c2m.resize(ls.C.face_count());
    for (Id f = 0; f < ls.C.face_count(); ++f) ls.f_c2m[f] = ex.fmap[cut.fmap[f]];
    ls.m_children.resize(master.c().edge_count());
    for (Id e = 0; e < master.c().edge_count(); ++e) ls.m_children[e] = {e};
    ls.c_face_piece = cut.face_piece;

    // pre-refinement structure of each piece
    struct PieceInfo {
        std::vector<Id> faces;
        std::vector<Id> interior_edges;
        std::vector<Id> interior_vertices;
    };
    std::vector<PieceInfo> infos(n_pieces);
    for (int p = 0; p < n_pieces; ++p) infos[p].faces = cut.piece_faces[p];
    for (Id e = 0; e < ls.C.edge_count(); ++e) {
        if (!ls.C.edge_interior(e)) continue;
        infos[cut.face_piece[ls.C.side(e, true)->face]].interior_edges.push_back(e);
    }
    for (Id v = 0; v < ls.C.vertex_count; ++v)
        if (ls.C.vertex_link(v).closed)
            infos[cut.piece_of_vertex(v)].interior_vertices.push_back(v);

    // refinement: subdivide interior edges and cone faces of active pieces
    std::map<Id, refine::SubdividedEdge> subdivided; // original C edge -> record
    for (int p = 0; p < n_pieces; ++p) {
        if (!active[p]) continue;
        for (Id e : infos[p].interior_edges) subdivided[e] = ls.subdivide(e);
    }
    std::map<Id, refine::ConedFace> cones;
    for (int p = 0; p < n_pieces; ++p) {
        if (!active[p]) continue;
        for (Id f : infos[p].faces) cones[f] = ls.cone(f);
    }
    ls.refresh();

    // realized dual arcs: midpoint -> its two radials
    struct DualArc {
        Id radial_a = -1, radial_b = -1;
        Id u = -1, v = -1; // original endpoints of the subdivided edge
    };
    std::map<Id, DualArc> arc_of_edge; // original C edge -> arc
    {
        std::map<Id, Id> edge_of_midpoint;
        for (auto& [e, rec] : subdivided) {
            DualArc a;
            a.u = ls.C.edge_ends[rec.half_tail][0];
            a.v = ls.C.edge_ends[rec.half_head][1];
            arc_of_edge[e] = a;
            edge_of_midpoint[rec.midpoint] = e;
        }
        for (auto& [f, rec] : cones) {
            static_cast<void>(f);
            for (Id r : rec.radials) {
                Id tip = ls.C.edge_ends[r][1];
                auto it = edge_of_midpoint.find(tip);
                if (it == edge_of_midpoint.end()) continue;
                DualArc& a = arc_of_edge[it->second];
                if (a.radial_a == -1)
                    a.radial_a = r;
                else if (a.radial_b == -1)
                    a.radial_b = r;
                else
                    fail("InternalError", "midpoint with more than two radials");
            }
        }
        for (auto& [e, a] : arc_of_edge) {
            static_cast<void>(e);
            require(a.radial_a != -1 && a.radial_b != -1, "InternalError", "dual arc incomplete");
        }
    }

    std::set<Id> spine; // C edges
    std::vector<std::set<Id>> piece_graphs(n_pieces);

    for (int p = 0; p < n_pieces; ++p) {
        if (!active[p]) continue;
        const PieceInfo& info = infos[p];
        std::set<Id> interior_set(info.interior_vertices.begin(), info.interior_vertices.end());

        // pick the trim set (one diamond-opening edge per interior original
        // vertex), retrying shuffles until the remaining core is connected
        std::set<Id> core;
        bool built = false;
        for (int attempt = 0; attempt < 64 && !built; ++attempt) {
            std::vector<Id> order = info.interior_edges;
            std::shuffle(order.begin(), order.end(), rng);

            std::set<Id> trimmed;
            std::set<Id> reached;
            bool progress = true;
            while (reached.size() < interior_set.size() && progress) {
                progress = false;
                for (Id e : order) {
                    const DualArc& a = arc_of_edge.at(e);
                    if (trimmed.count(e)) continue;
                    auto attached = [&](Id v) {
                        return !interior_set.count(v) || reached.count(v);
                    };
                    if (a.u == a.v) continue;
                    Id need = -1;
                    if (attached(a.u) && !attached(a.v)) need = a.v;
                    else if (attached(a.v) && !attached(a.u)) need = a.u;
                    if (need == -1) continue;
                    trimmed.insert(e);
                    reached.insert(need);
                    progress = true;
                }
            }
            if (reached.size() != interior_set.size())
                fail("InternalError", "spine trim cannot reach every interior vertex");

            std::set<Id> cand;
            for (Id e : info.interior_edges) {
                if (trimmed.count(e)) continue;
                cand.insert(arc_of_edge.at(e).radial_a);
                cand.insert(arc_of_edge.at(e).radial_b);
            }
            // prune dangling ends
            bool changed = true;
            while (changed) {
                changed = false;
                std::map<Id, int> deg;
                for (Id e : cand) {
                    deg[ls.C.edge_ends[e][0]]++;
                    deg[ls.C.edge_ends[e][1]]++;
                }
                for (auto it = cand.begin(); it != cand.end();) {
                    if (deg[ls.C.edge_ends[*it][0]] == 1 || deg[ls.C.edge_ends[*it][1]] == 1) {
                        it = cand.erase(it);
                        changed = true;
                    } else {
                        ++it;
                    }
                }
            }

            if (shapes[p].disk) {
                // a tree core prunes away; whisker tails will serve instead
                core.clear();
                built = true;
                break;
            }
            if (cand.empty()) continue; // retry another trim
            UnionFind uf(ls.C.vertex_count);
            for (Id e : cand) uf.unite(ls.C.edge_ends[e][0], ls.C.edge_ends[e][1]);
            int root = uf.find(ls.C.edge_ends[*cand.begin()][0]);
            bool connected = true;
            for (Id e : cand)
                if (uf.find(ls.C.edge_ends[e][0]) != root) connected = false;
            if (!connected) continue;
            core = cand;
            built = true;
        }
        require(built, "InternalError", "could not build a connected spine core");

        std::set<Id> used_vertices;
        for (Id e : core) {
            used_vertices.insert(ls.C.edge_ends[e][0]);
            used_vertices.insert(ls.C.edge_ends[e][1]);
        }
        std::set<Id> target = used_vertices;
        if (core.empty()) {
            Id f0 = *std::min_element(info.faces.begin(), info.faces.end());
            target.insert(cones.at(f0).hub);
        }

        std::set<Id> piece_graph = core;
        for (Id m : piece_mark_lifts[p]) {
            std::map<Id, std::pair<Id, Id>> pred; // vertex -> (prev, via edge)
            std::deque<Id> q{m};
            std::set<Id> visited{m};
            Id landing = -1;
            while (!q.empty() && landing == -1) {
                Id v = q.front();
                q.pop_front();
                std::vector<std::pair<Id, Id>> nbrs;
                for (const Step& d : ls.C.vertex_link(v).out_darts) {
                    if (!ls.C.edge_interior(d.edge)) continue;
                    if (piece_graph.count(d.edge)) continue;
                    nbrs.push_back({d.edge, ls.C.head(d)});
                }
                std::sort(nbrs.begin(), nbrs.end());
                for (auto [e, other] : nbrs) {
                    if (visited.count(other)) continue;
                    bool is_target = target.count(other) > 0;
                    if (!is_target) {
                        if (!ls.C.vertex_link(other).closed) continue; // stay interior
                        if (used_vertices.count(other)) continue;
                    }
                    visited.insert(other);
                    pred[other] = {v, e};
                    if (is_target) {
                        landing = other;
                        break;
                    }
                    q.push_back(other);
                }
            }
            require(landing != -1, "InternalError", "no whisker route from mark to spine");
            std::vector<Id> path_edges;
            std::vector<Id> path_vertices{landing};
            for (Id v = landing; v != m;) {
                auto [pv, pe] = pred[v];
                path_edges.push_back(pe);
                path_vertices.push_back(pv);
                v = pv;
            }
            if (path_edges.size() == 1) {
                // subdivide so the mark's own edge stays off the core
                auto rc = ls.subdivide(path_edges[0]);
                ls.refresh();
                path_edges = {rc.half_tail, rc.half_head};
                path_vertices = {path_vertices[0], rc.midpoint, m};
            }
            for (Id e : path_edges) piece_graph.insert(e);
            for (Id v : path_vertices) used_vertices.insert(v);
            if (core.empty()) target.insert(path_vertices.begin(), path_vertices.end() - 1);
        }

        spine.insert(piece_graph.begin(), piece_graph.end());
        piece_graphs[p] = std::move(piece_graph);
    }

    // splits: every spine vertex of spine-degree above 3 sheds a block of
    // two ends onto a new vertex, joined by a spine edge
    ls.refresh();
    while (true) {
        Id heavy = -1;
        std::vector<int> ends;
        for (Id v = 0; v < ls.C.vertex_count && heavy == -1; ++v) {
            const auto& link = ls.C.vertex_link(v);
            std::vector<int> here;
            for (int i = 0; i < static_cast<int>(link.out_darts.size()); ++i)
                if (spine.count(link.out_darts[i].edge)) here.push_back(i);
            // a loop spine edge shows up twice; count ends, not edges
            if (static_cast<int>(here.size()) > 3) {
                heavy = v;
                ends = here;
            }
        }
        if (heavy == -1) break;
        require(ls.C.vertex_link(heavy).closed, "InternalError",
                "boundary vertex acquired spine degree above 3");
        int piece = -1;
        {
            Step d0 = ls.C.vertex_link(heavy).out_darts[ends[0]];
            auto s = ls.C.side(d0.edge, true);
            if (!s) s = ls.C.side(d0.edge, false);
            piece = ls.c_face_piece[s->face];
        }
        int first = ends[0];
        int count = ends[1] - ends[0] + 1;
        auto rc = ls.split(heavy, first, count);
        spine.insert(rc.split_edge);
        piece_graphs[piece].insert(rc.split_edge);
        ls.refresh();
    }

    // contract checks
    std::set<Id> all_marks;
    for (const auto& lifts : piece_mark_lifts) all_marks.insert(lifts.begin(), lifts.end());
    {
        std::map<Id, int> deg;
        for (Id e : spine) {
            deg[ls.C.edge_ends[e][0]]++;
            deg[ls.C.edge_ends[e][1]]++;
        }
        for (auto& [v, dv] : deg) {
            require(dv <= 3, "InternalError", "spine vertex of degree above 3 after splits");
            if (dv == 1)
                require(all_marks.count(v) > 0, "InternalError", "spine leaf is not a mark");
            if (!ls.C.vertex_link(v).closed)
                require(all_marks.count(v) > 0, "InternalError",
                        "spine touches the boundary away from its leaves");
        }
        for (Id m : all_marks)
            require(deg.count(m) && deg[m] == 1, "InternalError",
                    "mark is not a degree-1 spine vertex");
    }

    // the core must be a deformation retract: its complement in each active
    // piece is one annular collar per boundary circuit
    {
        std::set<Id> core;
        for (Id e : spine) {
            if (all_marks.count(ls.C.edge_ends[e][0]) || all_marks.count(ls.C.edge_ends[e][1]))
                continue;
            core.insert(e);
        }
        CutResult check = cut_along(ls.C, core, {});
        std::map<int, int> collars;
        for (const auto& faces : check.piece_faces) {
            int piece = ls.c_face_piece[check.fmap[faces.front()]];
            if (!active[piece]) continue;
            PieceShape sh = piece_shape(check.cut, faces);
            require(sh.euler == 0 && sh.boundary_circuits == 2 && sh.genus == 0, "InternalError",
                    "spine core complement is not a collar annulus");
            collars[piece]++;
        }
        for (int p = 0; p < n_pieces; ++p)
            if (active[p])
                require(collars[p] == shapes[p].boundary_circuits, "InternalError",
                        "spine core complement has the wrong collar count");
    }

    TrivalentResult out;
    for (Id e : spine) out.tilde.edges.insert(ls.e_c2m[e]);

    for (int p = 0; p < n_pieces; ++p) {
        if (piece_graphs[p].empty()) continue;
        auto comps = graph_components(ls.C, piece_graphs[p], {});
        for (auto& comp : comps) {
            for (auto& ch : comp.chains)
                for (Id& cell : ch.cells) cell = ls.e_c2m[cell];
            for (Id& vc : comp.vertex_cells) vc = ls.v_c2m[vc];
            out.components.push_back(std::move(comp));
        }
    }

    MasterComplex refined;
    auto sc = std::make_shared<SurfaceComplex>(std::move(ls.M));
    refined.sc = sc;
    refined.edge_origin.assign(sc->edge_count(), -1);
    refined.edge_stratum.assign(sc->edge_count(), stratum_level);
    for (Id e = 0; e < master.c().edge_count(); ++e)
        for (Id kid : ls.m_children[e]) {
            refined.edge_origin[kid] = master.edge_origin[e];
            refined.edge_stratum[kid] = master.edge_stratum[e];
        }
    out.master = std::move(refined);
    out.edge_trace.assign(ls.m_children.begin(),
                          ls.m_children.begin() + master.c().edge_count());
    out.trace_vertex.resize(master.c().vertex_count);
    std::iota(out.trace_vertex.begin(), out.trace_vertex.end(), 0);
    return out;
}

} // namespace immext
