#include "immext/polymersion.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "immext/subsurface.hpp"

namespace immext {

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

bool Polymersion::closed_source() const {
    for (Id e = 0; e < source.edge_count(); ++e)
        if (source.edge_boundary(e)) return false;
    return true;
}

int Polymersion::local_wrap(Id sv) const {
    const auto& slink = source.vertex_link(sv);
    if (!slink.closed) return 1;
    const auto& tlink = target->vertex_link(vmap[sv]);
    require(tlink.closed, "InternalError", "interior source vertex over boundary target vertex");
    int m = static_cast<int>(slink.out_darts.size());
    int n = static_cast<int>(tlink.out_darts.size());
    require(m % n == 0, "InternalError",
            "source link size is not a multiple of the target's at " + source.vertex_name(sv));
    return m / n;
}

std::set<Id> Polymersion::boundary_image_edges() const {
    std::set<Id> out;
    for (Id e = 0; e < source.edge_count(); ++e)
        if (source.edge_boundary(e)) out.insert(emap[e]);
    return out;
}

int Polymersion::face_degree(Id target_face) const {
    int n = 0;
    for (Id f = 0; f < source.face_count(); ++f)
        if (fmap[f] == target_face) ++n;
    return n;
}

int Polymersion::point_degree(Id target_vertex) const {
    int n = 0;
    for (Id v = 0; v < source.vertex_count; ++v)
        if (vmap[v] == target_vertex) ++n;
    for (const auto& bp : branch_points)
        if (vmap[bp.source_vertex] == target_vertex) n += bp.multiplicity;
    return n;
}

std::vector<Polymersion::BranchPoint> Polymersion::derive_branch_points() const {
    std::vector<BranchPoint> out;
    for (Id v = 0; v < source.vertex_count; ++v) {
        if (!source.vertex_link(v).closed) continue;
        int k = local_wrap(v);
        if (k >= 2) out.push_back({v, k - 1});
    }
    return out;
}

void Polymersion::validate(bool allow_shared_branch_images) const {
    require(static_cast<int>(vmap.size()) == source.vertex_count, "InternalError",
            "vmap size mismatch");
    require(static_cast<int>(emap.size()) == source.edge_count(), "InternalError",
            "emap size mismatch");
    require(static_cast<int>(fmap.size()) == source.face_count(), "InternalError",
            "fmap size mismatch");

    for (Id e = 0; e < source.edge_count(); ++e) {
        Id te = emap[e];
        require(te >= 0 && te < target->edge_count(), "InternalError", "emap out of range");
        require(vmap[source.edge_ends[e][0]] == target->edge_ends[te][0] &&
                    vmap[source.edge_ends[e][1]] == target->edge_ends[te][1],
                "InternalError", "edge map does not commute with endpoints");
    }

    for (Id f = 0; f < source.face_count(); ++f) {
        const auto& sw = source.face_walks[f];
        const auto& tw = target->face_walks[fmap[f]];
        require(sw.size() == tw.size(), "InternalError", "face walk length mismatch");
        int L = static_cast<int>(sw.size());
        int offset = -1;
        for (int o = 0; o < L && offset == -1; ++o) {
            bool ok = true;
            for (int i = 0; i < L && ok; ++i) {
                Step si = sw[i];
                Step ti = tw[(i + o) % L];
                if (emap[si.edge] != ti.edge || si.forward != ti.forward) ok = false;
            }
            if (ok) offset = o;
        }
        require(offset >= 0, "InternalError", "face walk does not map onto the target walk");
    }

    // z^k at interior vertices, an immersion along the boundary
    std::map<Id, int> wrap;
    for (Id v = 0; v < source.vertex_count; ++v) {
        const auto& slink = source.vertex_link(v);
        const auto& tlink = target->vertex_link(vmap[v]);
        int n = static_cast<int>(tlink.out_darts.size());

        auto image_pos = [&](Step d) {
            Step img{emap[d.edge], d.forward};
            for (int i = 0; i < n; ++i)
                if (tlink.out_darts[i] == img) return i;
            fail("InternalError", "image dart missing from target link");
        };

        int m = static_cast<int>(slink.out_darts.size());
        int p0 = image_pos(slink.out_darts[0]);
        for (int i = 1; i < m; ++i) {
            int pi = image_pos(slink.out_darts[i]);
            require(pi == (p0 + i) % n, "InternalError",
                    "local model broken at " + source.vertex_name(v) +
                        ": link does not wind the target rotation");
        }
        if (slink.closed) {
            require(m % n == 0, "InternalError", "interior wrap is fractional");
            wrap[v] = m / n;
        } else {
            require(m <= n, "InternalError",
                    "boundary corner overwraps the target rotation (not an immersion)");
            wrap[v] = 1;
        }
    }

    std::map<Id, int> ledger;
    for (const auto& bp : branch_points) {
        require(bp.multiplicity >= 1, "InternalError", "branch point of multiplicity 0");
        require(ledger.emplace(bp.source_vertex, bp.multiplicity).second, "InternalError",
                "duplicate branch ledger entry");
    }
    for (Id v = 0; v < source.vertex_count; ++v) {
        int k = wrap.count(v) ? wrap[v] : 1;
        if (k >= 2) {
            require(ledger.count(v) && ledger[v] == k - 1, "InternalError",
                    "unledgered critical point at " + source.vertex_name(v));
        } else {
            require(!ledger.count(v), "InternalError", "ledgered vertex is not a critical point");
        }
    }

    std::set<Id> bimage;
    std::set<Id> boundary_vertices;
    for (const auto& circ : source.boundary_circuits())
        for (const Step& st : circ) boundary_vertices.insert(vmap[source.tail(st)]);
    for (const auto& bp : branch_points) {
        Id y = vmap[bp.source_vertex];
        require(!boundary_vertices.count(y), "InternalError",
                "branch point on the boundary image");
        if (!allow_shared_branch_images)
            require(bimage.insert(y).second, "InternalError",
                    "two critical points share a branch point image");
    }
}

RegionR region_R(const Polymersion& g) {
    RegionR out;
    const SurfaceComplex& T = *g.target;
    if (g.source_empty() || g.closed_source()) {
        for (Id f = 0; f < T.face_count(); ++f) out.faces.push_back(f);
        out.face_set.insert(out.faces.begin(), out.faces.end());
        return out;
    }

    std::set<Id> bimage = g.boundary_image_edges();

    UnionFind uf(T.face_count());
    for (Id e = 0; e < T.edge_count(); ++e) {
        if (bimage.count(e)) continue;
        auto a = T.side(e, true);
        auto b = T.side(e, false);
        if (a && b) uf.unite(a->face, b->face);
    }
    std::map<int, std::vector<Id>> regions;
    for (Id f = 0; f < T.face_count(); ++f) regions[uf.find(f)].push_back(f);

    int best = -1;
    for (auto& [root, faces] : regions) {
        static_cast<void>(root);
        int d = g.face_degree(faces.front());
        for (Id f : faces)
            require(g.face_degree(f) == d, "InternalError",
                    "face degree not constant on a complement region");
        best = std::max(best, d);
    }
    for (auto& [root, faces] : regions) {
        static_cast<void>(root);
        if (g.face_degree(faces.front()) == best)
            out.faces.insert(out.faces.end(), faces.begin(), faces.end());
    }
    std::sort(out.faces.begin(), out.faces.end());
    out.face_set.insert(out.faces.begin(), out.faces.end());
    for (Id e = 0; e < T.edge_count(); ++e) {
        auto a = T.side(e, true);
        auto b = T.side(e, false);
        bool ina = a && out.face_set.count(a->face);
        bool inb = b && out.face_set.count(b->face);
        if (ina != inb) out.boundary_edges.insert(e);
    }
    return out;
}

std::vector<std::vector<Id>> complement_components(const SurfaceComplex& target,
                                                   const std::set<Id>& region_faces,
                                                   const std::set<Id>& graph_edges) {
    UnionFind uf(target.face_count());
    for (Id e = 0; e < target.edge_count(); ++e) {
        if (graph_edges.count(e)) continue;
        auto a = target.side(e, true);
        auto b = target.side(e, false);
        if (!a || !b) continue;
        if (!region_faces.count(a->face) || !region_faces.count(b->face)) continue;
        uf.unite(a->face, b->face);
    }
    std::map<int, std::vector<Id>> groups;
    for (Id f : region_faces) groups[uf.find(f)].push_back(f);
    std::vector<std::vector<Id>> out;
    for (auto& [root, faces] : groups) {
        static_cast<void>(root);
        out.push_back(faces);
    }
    return out;
}

namespace {

// Grows the single sheet of one component of R \ G from every anchored
// lift, checking all anchors agree.
std::set<Id> lift_component(const Polymersion& g, const RegionR& R, const std::set<Id>& G,
                            const std::vector<Id>& component) {
    const SurfaceComplex& S = g.source;
    std::set<Id> comp_faces(component.begin(), component.end());

    std::vector<Id> seeds;

    // (a) frontier edges of R covered exactly once by the source boundary
    for (Id te : R.boundary_edges) {
        auto a = g.target->side(te, true);
        auto b = g.target->side(te, false);
        Id rface = -1;
        if (a && R.face_set.count(a->face)) rface = a->face;
        if (b && R.face_set.count(b->face)) rface = b->face;
        if (rface == -1 || !comp_faces.count(rface)) continue;
        std::vector<Id> boundary_copies;
        for (Id se = 0; se < S.edge_count(); ++se)
            if (g.emap[se] == te && S.edge_boundary(se)) boundary_copies.push_back(se);
        if (boundary_copies.size() != 1) continue;
        Id se = boundary_copies.front();
        auto sside = S.side(se, true);
        if (!sside) sside = S.side(se, false);
        if (g.fmap[sside->face] == rface) seeds.push_back(sside->face);
    }
    // (b) seam edges inside the component
    for (const auto& [te, se] : g.seam) {
        if (G.count(te)) continue;
        for (bool dir : {true, false}) {
            auto ts = g.target->side(te, dir);
            if (!ts || !comp_faces.count(ts->face)) continue;
            auto ss = S.side(se, dir);
            if (ss && comp_faces.count(g.fmap[ss->face])) seeds.push_back(ss->face);
        }
    }

    require(!seeds.empty(), "NotCancellable",
            "a component of the complement has no anchored lift");
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::optional<std::set<Id>> reference;
    for (Id seed : seeds) {
        std::set<Id> grown{seed};
        std::deque<Id> queue{seed};
        while (!queue.empty()) {
            Id f = queue.front();
            queue.pop_front();
            for (const Step& st : S.face_walks[f]) {
                Id te = g.emap[st.edge];
                if (G.count(te)) continue; // the graph bounds the domain
                if (S.edge_boundary(st.edge)) continue;
                auto other = S.side(st.edge, !st.forward);
                require(other.has_value(), "InternalError", "interior edge lost a side");
                Id of = other->face;
                require(comp_faces.count(g.fmap[of]) > 0, "NotCancellable",
                        "sheet growth escapes the component");
                if (grown.insert(of).second) queue.push_back(of);
            }
        }
        if (reference) {
            require(*reference == grown, "NotCancellable",
                    "anchored lifts disagree; domains depend on the base points");
        } else {
            reference = std::move(grown);
        }
    }

    std::map<Id, int> covered;
    for (Id f : *reference) covered[g.fmap[f]]++;
    require(covered.size() == comp_faces.size(), "NotCancellable",
            "domain does not cover its component");
    for (auto& [tf, n] : covered) {
        require(comp_faces.count(tf) > 0, "InternalError", "domain covers a foreign face");
        require(n == 1, "NotCancellable", "domain interior is not embedded");
    }
    return *reference;
}

void check_frontier_condition(const Polymersion& g, const RegionR& R,
                              const std::set<Id>& domain) {
    // (g|A)^{-1}(g(A) on the frontier of R) must lie in the source boundary
    const SurfaceComplex& S = g.source;
    for (Id f : domain)
        for (const Step& st : S.face_walks[f]) {
            Id te = g.emap[st.edge];
            if (R.boundary_edges.count(te))
                require(S.edge_boundary(st.edge), "NotCancellable",
                        "domain touches the frontier of R through an interior edge");
        }
}

void check_graph_degree(const SurfaceComplex& T, const std::set<Id>& G, const char* code) {
    std::map<Id, int> deg;
    for (Id e : G) {
        deg[T.edge_ends[e][0]]++;
        deg[T.edge_ends[e][1]]++;
    }
    for (auto& [v, dv] : deg) {
        static_cast<void>(v);
        require(dv <= 3, code, "graph has a vertex of degree above 3");
    }
}

} // namespace

std::vector<std::set<Id>> domains_case1(const Polymersion& g, const EmbGraph& G) {
    require(!g.closed_source() && !g.source_empty(), "BranchInRegion",
            "case 1 needs a source with boundary");
    RegionR R = region_R(g);
    for (const auto& bp : g.branch_points) {
        Id y = g.vmap[bp.source_vertex];
        for (Id f : R.faces)
            for (const Step& st : g.target->face_walks[f])
                require(g.target->tail(st) != y, "BranchInRegion",
                        "a branch point lies in R(g)");
    }
    check_graph_degree(*g.target, G.edges, "NotTrivalentForN");

    auto comps = complement_components(*g.target, R.face_set, G.edges);
    std::vector<std::set<Id>> domains;
    for (const auto& comp : comps) {
        auto dom = lift_component(g, R, G.edges, comp);
        check_frontier_condition(g, R, dom);
        domains.push_back(std::move(dom));
    }
    std::sort(domains.begin(), domains.end());
    return domains;
}

std::vector<std::set<Id>> domains_case2(const Polymersion& g, const EmbGraph& G,
                                        const std::set<Id>& gprime_edges) {
    RegionR R = region_R(g);
    const SurfaceComplex& T = *g.target;
    const SurfaceComplex& S = g.source;

    std::set<Id> seam_sources;
    for (Id te : gprime_edges) {
        auto it = g.seam.find(te);
        require(it != g.seam.end(), "NotThinTrivalent",
                "relative graph edge missing from the seam");
        require(seam_sources.insert(it->second).second, "InternalError", "seam not injective");
    }

    // leaves of G' lie on the source boundary
    {
        std::map<Id, int> deg;
        for (Id te : gprime_edges) {
            deg[T.edge_ends[te][0]]++;
            deg[T.edge_ends[te][1]]++;
        }
        for (Id te : gprime_edges) {
            Id se = g.seam.at(te);
            for (int end = 0; end < 2; ++end) {
                Id tv = T.edge_ends[te][end];
                if (deg[tv] != 1) continue;
                Id sv = S.edge_ends[se][end];
                require(!S.vertex_link(sv).closed, "NotThinTrivalent",
                        "a leaf of the relative graph is interior to the source");
            }
        }
    }

    // critical points over R: degree-3 seam vertices obeying the clockwise rule
    std::map<Id, Id> source_of_seam; // source edge -> target edge
    for (Id te : gprime_edges) source_of_seam[g.seam.at(te)] = te;
    for (const auto& bp : g.branch_points) {
        Id t = bp.source_vertex;
        Id y = g.vmap[t];
        bool y_in_R = false;
        for (Id f : R.faces) {
            for (const Step& st : T.face_walks[f])
                if (T.tail(st) == y) y_in_R = true;
        }
        if (!y_in_R) continue;
        require(bp.multiplicity == 1, "CriticalPointNotOnGraph",
                "critical point over R has index above 1");

        std::vector<Id> source_cyc;
        for (const Step& d : S.vertex_link(t).out_darts) {
            auto it = source_of_seam.find(d.edge);
            if (it != source_of_seam.end()) source_cyc.push_back(it->second);
        }
        require(source_cyc.size() == 3, "CriticalPointNotOnGraph",
                "critical point over R is not a degree-3 vertex of the relative graph");

        std::vector<Id> target_cyc;
        for (const Step& d : T.vertex_link(y).out_darts)
            if (gprime_edges.count(d.edge)) target_cyc.push_back(d.edge);
        require(target_cyc.size() == 3, "InternalError",
                "branch point misses its three graph edges");

        auto rotation_is = [&](const std::vector<Id>& cyc, Id x, Id yy, Id z) {
            for (int r = 0; r < 3; ++r)
                if (cyc[r] == x && cyc[(r + 1) % 3] == yy && cyc[(r + 2) % 3] == z) return true;
            return false;
        };
        require(rotation_is(target_cyc, source_cyc[0], source_cyc[2], source_cyc[1]),
                "OrientationRuleViolated",
                "edges at a branch point violate the clockwise rule");
    }

    check_graph_degree(T, G.edges, "NotThinTrivalent");

    auto comps = complement_components(T, R.face_set, G.edges);
    std::vector<std::set<Id>> domains;
    for (const auto& comp : comps) {
        auto dom = lift_component(g, R, G.edges, comp);
        check_frontier_condition(g, R, dom);
        domains.push_back(std::move(dom));
    }
    std::sort(domains.begin(), domains.end());
    return domains;
}

CancellationRecord cancel(const Polymersion& g, const std::vector<std::set<Id>>& domains,
                          const std::set<Id>& G) {
    CancellationRecord rec;
    rec.domains = domains;
    rec.graph_G = G;
    rec.chi_before = g.source.euler_characteristic();

    const SurfaceComplex& S = g.source;
    RegionR R = region_R(g);

    // Def 3.4 re-verification
    {
        auto comps = complement_components(*g.target, R.face_set, G);
        require(comps.size() == domains.size(), "NotCancellable",
                "domain count differs from the components of R minus G");
        std::set<std::set<Id>> images;
        for (const auto& dom : domains) {
            std::set<Id> img;
            for (Id f : dom) img.insert(g.fmap[f]);
            require(img.size() == dom.size(), "NotCancellable",
                    "domain interior is not embedded");
            require(images.insert(img).second, "NotCancellable",
                    "two domains share an image component");
        }
        for (const auto& comp : comps) {
            std::set<Id> compset(comp.begin(), comp.end());
            require(images.count(compset) == 1, "NotCancellable",
                    "a complement component is not the image of a domain");
        }
        for (const auto& dom : domains) check_frontier_condition(g, R, dom);
    }

    std::set<Id> deleted;
    for (const auto& dom : domains) deleted.insert(dom.begin(), dom.end());
    std::vector<Id> kept;
    for (Id f = 0; f < S.face_count(); ++f)
        if (!deleted.count(f)) kept.push_back(f);

    // surviving copies over each G edge: boundary edges of the remainder
    std::map<Id, std::vector<Id>> copies;
    {
        std::vector<bool> edge_kept(S.edge_count(), false);
        for (Id f : kept)
            for (const Step& st : S.face_walks[f]) edge_kept[st.edge] = true;
        for (Id se = 0; se < S.edge_count(); ++se) {
            if (!edge_kept[se]) continue;
            Id te = g.emap[se];
            if (!G.count(te)) continue;
            int sides_kept = 0;
            for (bool dir : {true, false}) {
                auto sd = S.side(se, dir);
                if (sd && !deleted.count(sd->face)) sides_kept++;
            }
            if (sides_kept == 1) copies[te].push_back(se);
        }
    }
    for (auto& [te, cps] : copies)
        require(cps.size() == 2, "NotCancellable",
                "graph edge " + g.target->edge_name(te) + " has " +
                    std::to_string(cps.size()) + " surviving copies (expected 2)");

    std::set<Id> g_of_a;
    std::map<Id, Id> merge;
    for (auto& [te, cps] : copies) {
        g_of_a.insert(te);
        merge[cps[1]] = cps[0];
    }
    rec.G_of_A = g_of_a;

    SurfaceComplex out;
    std::vector<Id> new_edge(S.edge_count(), -1);
    std::vector<Id> res_emap;
    auto edge_id = [&](Id se) {
        Id rep = merge.count(se) ? merge[se] : se;
        if (new_edge[rep] == -1) {
            new_edge[rep] = static_cast<Id>(res_emap.size());
            res_emap.push_back(g.emap[rep]);
        }
        return new_edge[rep];
    };
    std::vector<Id> res_fmap;
    for (Id f : kept) {
        std::vector<Step> walk;
        for (const Step& st : S.face_walks[f]) walk.push_back(Step{edge_id(st.edge), st.forward});
        out.face_walks.push_back(std::move(walk));
        res_fmap.push_back(g.fmap[f]);
        out.face_region.push_back(f < static_cast<Id>(S.face_region.size()) ? S.face_region[f]
                                                                            : -1);
    }
    out.vertex_count = derive_vertices_from_walks(static_cast<int>(res_emap.size()),
                                                  out.face_walks, out.edge_ends);

    Polymersion res;
    res.target = g.target;
    if (out.face_count() > 0) {
        res.vmap.assign(out.vertex_count, -1);
        for (Id e = 0; e < static_cast<Id>(res_emap.size()); ++e)
            for (int end = 0; end < 2; ++end) {
                Id rv = out.edge_ends[e][end];
                Id tv = g.target->edge_ends[res_emap[e]][end];
                require(res.vmap[rv] == -1 || res.vmap[rv] == tv, "NotCancellable",
                        "identification maps one point onto two images");
                res.vmap[rv] = tv;
            }
        out.vertex_names.resize(out.vertex_count);
        for (Id v = 0; v < out.vertex_count; ++v)
            out.vertex_names[v] = g.target->vertex_name(res.vmap[v]);
        out.edge_names.resize(res_emap.size());
        for (Id e = 0; e < static_cast<Id>(res_emap.size()); ++e)
            out.edge_names[e] = g.target->edge_name(res_emap[e]);
        out.finalize();
    }
    res.source = std::move(out);
    res.emap = std::move(res_emap);
    res.fmap = std::move(res_fmap);

    // regularity: all identified preimages of each graph vertex collapse to
    // a single result point
    rec.regular = true;
    {
        std::set<Id> gvertices;
        for (Id te : g_of_a) {
            gvertices.insert(g.target->edge_ends[te][0]);
            gvertices.insert(g.target->edge_ends[te][1]);
        }
        for (Id x : gvertices) {
            std::set<Id> result_points;
            for (auto& [te, cps] : copies)
                for (Id se : cps)
                    for (int end = 0; end < 2; ++end) {
                        if (g.target->edge_ends[te][end] != x) continue;
                        Id rep = merge.count(se) ? merge[se] : se;
                        Id re = new_edge[rep];
                        if (re >= 0) result_points.insert(res.source.edge_ends[re][end]);
                    }
            if (result_points.size() > 1) rec.regular = false;
        }
    }

    if (rec.regular)
        for (auto& [te, cps] : copies) rec.associated_T[te] = new_edge[cps[0]];
    res.seam = rec.associated_T;

    if (!res.source_empty()) {
        res.branch_points = res.derive_branch_points();
        res.validate();
    }
    rec.chi_after = res.source.euler_characteristic();
    rec.result = std::move(res);
    return rec;
}

Polymersion identity_embedding(std::shared_ptr<const SurfaceComplex> target,
                               const std::vector<Id>& faces) {
    Extraction ex = extract_faces(*target, faces);
    Polymersion g;
    g.source = std::move(ex.sub);
    g.target = std::move(target);
    g.vmap = ex.vmap;
    g.emap = ex.emap;
    g.fmap = ex.fmap;
    return g;
}

} // namespace immext
