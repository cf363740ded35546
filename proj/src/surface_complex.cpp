#include "immext/surface_complex.hpp"

#include <algorithm>
#include <numeric>

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

inline int dart_id(Step s) { return 2 * s.edge + (s.forward ? 0 : 1); }

} // namespace

int SurfaceComplex::euler_characteristic() const {
    return vertex_count - edge_count() + face_count();
}

void SurfaceComplex::build_sides(const std::string& code) {
    side_.assign(2 * edge_ends.size(), Corner{});
    std::vector<int> uses(2 * edge_ends.size(), 0);
    for (Id f = 0; f < face_count(); ++f) {
        const auto& walk = face_walks[f];
        require(!walk.empty(), code, "face " + std::to_string(f) + " has an empty walk");
        for (int p = 0; p < static_cast<int>(walk.size()); ++p) {
            Step s = walk[p];
            require(s.edge >= 0 && s.edge < edge_count(), code, "face walk references missing edge");
            int d = dart_id(s);
            require(uses[d] == 0, code,
                    "directed edge used twice (edge " + std::to_string(s.edge) +
                        "); complex is not an oriented surface");
            uses[d] = 1;
            side_[d] = Corner{f, p};
            // consecutive steps must chain head -> tail
            Step nxt = walk[(p + 1) % walk.size()];
            require(head(s) == tail(nxt), code,
                    "face walk of face " + std::to_string(f) + " does not chain at step " +
                        std::to_string(p));
        }
    }
    for (Id e = 0; e < edge_count(); ++e) {
        int total = uses[2 * e] + uses[2 * e + 1];
        require(total >= 1, code, "edge " + std::to_string(e) + " belongs to no face");
    }
}

std::optional<Corner> SurfaceComplex::side(Id edge, bool forward) const {
    const Corner& c = side_[2 * edge + (forward ? 0 : 1)];
    if (c.face < 0) return std::nullopt;
    return c;
}

bool SurfaceComplex::edge_interior(Id edge) const {
    return side_[2 * edge].face >= 0 && side_[2 * edge + 1].face >= 0;
}

bool SurfaceComplex::vertex_on_boundary(Id v) const { return !links_[v].closed; }

Corner SurfaceComplex::next_corner(Corner c) const {
    int n = static_cast<int>(face_walks[c.face].size());
    return Corner{c.face, (c.pos + 1) % n};
}

Corner SurfaceComplex::prev_corner(Corner c) const {
    int n = static_cast<int>(face_walks[c.face].size());
    return Corner{c.face, (c.pos + n - 1) % n};
}

void SurfaceComplex::build_links(const std::string& code) {
    // ccw successor of an out-dart around its tail vertex: for consecutive
    // walk steps (s, t) at v = head(s) = tail(t), the wedge of their face
    // links t (departure) ccw to reversed(s).
    std::vector<int> ccw_next(2 * edge_ends.size(), -1);
    std::vector<int> ccw_pred(2 * edge_ends.size(), -1);
    for (Id f = 0; f < face_count(); ++f) {
        const auto& walk = face_walks[f];
        int n = static_cast<int>(walk.size());
        for (int p = 0; p < n; ++p) {
            Step arrive = walk[(p + n - 1) % n];
            Step depart = walk[p];
            int from = dart_id(depart);
            int to = dart_id(reversed(arrive));
            require(ccw_next[from] == -1, code, "vertex link over-determined");
            ccw_next[from] = to;
            require(ccw_pred[to] == -1, code, "vertex link over-determined");
            ccw_pred[to] = from;
        }
    }

    // group out-darts by vertex
    std::vector<std::vector<int>> darts_at(vertex_count);
    for (Id e = 0; e < edge_count(); ++e) {
        darts_at[edge_ends[e][0]].push_back(2 * e);
        darts_at[edge_ends[e][1]].push_back(2 * e + 1);
    }

    auto dart_step = [](int d) { return Step{d / 2, d % 2 == 0}; };

    links_.assign(vertex_count, VertexLink{});
    for (Id v = 0; v < vertex_count; ++v) {
        const auto& darts = darts_at[v];
        if (darts.empty())
            fail(code, "isolated vertex " + std::to_string(v));
        // find a start: a dart with no predecessor (boundary arc), else any
        int start = -1;
        for (int d : darts)
            if (ccw_pred[d] == -1) {
                require(start == -1, code,
                        "vertex " + std::to_string(v) + " has a pinched link");
                start = d;
            }
        bool closed = (start == -1);
        if (closed) start = darts[0];
        std::vector<Step> order;
        int cur = start;
        for (size_t i = 0; i < darts.size(); ++i) {
            order.push_back(dart_step(cur));
            cur = ccw_next[cur];
            if (cur == -1) break;
            if (cur == start) break;
        }
        require(order.size() == darts.size(), code,
                "vertex " + std::to_string(v) + " has a disconnected link (pinch point)");
        if (closed)
            require(cur == start, code, "vertex " + std::to_string(v) + " link does not close");
        links_[v].closed = closed;
        links_[v].out_darts = std::move(order);
    }
}

const SurfaceComplex::VertexLink& SurfaceComplex::vertex_link(Id v) const {
    return links_[v];
}

std::vector<std::vector<Step>> SurfaceComplex::boundary_circuits() const {
    // Boundary steps are covered directions of boundary edges; the circuit
    // continues with the unique covered boundary step leaving the head
    // vertex, which is the first dart of that vertex's link arc.
    std::vector<std::vector<Step>> circuits;
    std::vector<bool> used(edge_count(), false);
    for (Id e = 0; e < edge_count(); ++e) {
        if (edge_interior(e) || used[e]) continue;
        bool fwd = side(e, true).has_value();
        Step s{e, fwd};
        std::vector<Step> circuit;
        Step cur = s;
        do {
            require(!used[cur.edge], "InternalError", "boundary chaining revisited an edge");
            used[cur.edge] = true;
            circuit.push_back(cur);
            Id v = head(cur);
            const VertexLink& link = links_[v];
            require(!link.closed, "InternalError", "boundary ends at interior vertex");
            cur = link.out_darts.front();
            require(edge_boundary(cur.edge), "InternalError", "boundary chain left the boundary");
        } while (!(cur == s));
        circuits.push_back(std::move(circuit));
    }
    return circuits;
}

std::vector<std::vector<Id>> SurfaceComplex::face_components() const {
    UnionFind uf(face_count());
    for (Id e = 0; e < edge_count(); ++e) {
        auto a = side(e, true);
        auto b = side(e, false);
        if (a && b) uf.unite(a->face, b->face);
    }
    std::vector<std::vector<Id>> groups;
    std::vector<int> index(face_count(), -1);
    for (Id f = 0; f < face_count(); ++f) {
        int root = uf.find(f);
        if (index[root] == -1) {
            index[root] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[index[root]].push_back(f);
    }
    return groups;
}

void SurfaceComplex::finalize(const std::string& code) {
    require(vertex_count >= 0, code, "negative vertex count");
    for (const auto& ends : edge_ends) {
        require(ends[0] >= 0 && ends[0] < vertex_count && ends[1] >= 0 && ends[1] < vertex_count,
                code, "edge endpoint out of range");
    }
    build_sides(code);
    build_links(code);
    finalized_ = true;
}

std::string SurfaceComplex::vertex_name(Id v) const {
    if (v < static_cast<int>(vertex_names.size()) && !vertex_names[v].empty())
        return vertex_names[v];
    return "v" + std::to_string(v);
}

std::string SurfaceComplex::edge_name(Id e) const {
    if (e < static_cast<int>(edge_names.size()) && !edge_names[e].empty())
        return edge_names[e];
    return "e" + std::to_string(e);
}

int derive_vertices_from_walks(int edge_count,
                               const std::vector<std::vector<Step>>& face_walks,
                               std::vector<std::array<Id, 2>>& edge_ends_out) {
    auto tail_end = [](Step s) { return 2 * s.edge + (s.forward ? 0 : 1); };
    auto head_end = [](Step s) { return 2 * s.edge + (s.forward ? 1 : 0); };

    UnionFind uf(2 * edge_count);
    for (const auto& walk : face_walks) {
        int n = static_cast<int>(walk.size());
        for (int p = 0; p < n; ++p)
            uf.unite(head_end(walk[p]), tail_end(walk[(p + 1) % n]));
    }
    std::vector<int> index(2 * edge_count, -1);
    int count = 0;
    edge_ends_out.assign(edge_count, {-1, -1});
    for (int end = 0; end < 2 * edge_count; ++end) {
        int root = uf.find(end);
        if (index[root] == -1) index[root] = count++;
        edge_ends_out[end / 2][end % 2] = index[root];
    }
    return count;
}

} // namespace immext
