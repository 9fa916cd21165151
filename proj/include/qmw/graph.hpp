#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/matrix.hpp"
#include "qmw/rational.hpp"

namespace qmw {

struct InternalEdge {
    std::string id;
    std::string source;
    std::string target;
    Rat mass; // strictly positive

    bool self_loop() const { return source == target; }
};

struct ExternalEdge {
    std::string id;
    std::string vertex;
    RatVec momentum; // length = dimension
};

/// Massive Feynman graph: the combinatorial seed of the whole pipeline.
/// Vertices and edges are kept sorted by id so every downstream choice
/// ("edge-id order") is reproducible.
struct FeynmanGraph {
    std::string name;
    long dimension = 0;
    std::vector<std::string> vertices;
    std::vector<InternalEdge> internal_edges;
    std::vector<ExternalEdge> external_edges;

    std::size_t n_internal() const { return internal_edges.size(); }

    std::size_t vertex_index(const std::string& id) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
        if (it == vertices.end() || *it != id)
            fail(errc::unknown_vertex, "vertex", "undeclared vertex \"" + id + "\"");
        return static_cast<std::size_t>(it - vertices.begin());
    }

    std::size_t edge_index(const std::string& id) const {
        for (std::size_t i = 0; i < internal_edges.size(); ++i)
            if (internal_edges[i].id == id) return i;
        fail(errc::internal, "edge_index", "unknown internal edge \"" + id + "\"");
    }

    bool has_self_loop() const {
        return std::any_of(internal_edges.begin(), internal_edges.end(),
                           [](const InternalEdge& e) { return e.self_loop(); });
    }
};

/// Entries eps_{v,i}: +1 if v = s(e_i), -1 if v = t(e_i), 0 otherwise.
/// Self-loops give an identically zero column.
struct IncidenceMatrix {
    std::vector<std::string> vertex_ids;
    std::vector<std::string> edge_ids;
    std::vector<std::vector<int>> entries; // [vertex][edge]
};

struct SpanningTree {
    std::vector<std::string> tree_edges;  // edge ids, sorted
    std::vector<std::string> complement;  // edge-id order; indexes loop variables
};

/// Linear relations imposed on the momentum variables by the vertex delta
/// functions (kappa = 0), the chosen loop variables, and the exact expansion
/// of every edge momentum over them.
struct MomentumRelations {
    std::vector<RatVec> equations;       // one row per vertex, columns = internal edges
    std::size_t rank = 0;                // = #V - 1 on connected graphs
    std::vector<std::string> loop_edges; // complement of the tree, edge-id order
    /// expansion[i][j]: coefficient of loop variable j in k_i; always in {-1,0,1}
    /// for the fundamental-cycle basis used here.
    std::vector<std::vector<int>> expansion;

    std::size_t loop_count() const { return loop_edges.size(); }
};

namespace detail {

inline bool connected_on_internal_edges(const FeynmanGraph& g) {
    if (g.vertices.empty()) return false;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& e : g.internal_edges) {
        adj[e.source].push_back(e.target);
        adj[e.target].push_back(e.source);
    }
    std::set<std::string> seen;
    std::vector<std::string> stack{g.vertices.front()};
    while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) continue;
        for (const auto& w : adj[v]) stack.push_back(w);
    }
    return seen.size() == g.vertices.size();
}

} // namespace detail

/// Validates every FeynmanGraph invariant; used by parse_graph and by code
/// that assembles graphs programmatically.
inline void validate_graph(const FeynmanGraph& g) {
    if (g.dimension < 1) fail(errc::bad_dimension, "dimension", "dimension must be a positive integer");
    if (g.vertices.empty()) fail(errc::malformed_document, "vertices", "at least one vertex required");
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < g.vertices.size(); ++i)
            if (!seen.insert(g.vertices[i]).second)
                fail(errc::duplicate_id, "vertices[" + std::to_string(i) + "]",
                     "duplicate vertex id \"" + g.vertices[i] + "\"");
    }
    std::set<std::string> edge_ids;
    for (std::size_t i = 0; i < g.internal_edges.size(); ++i) {
        const auto& e = g.internal_edges[i];
        std::string loc = "internal_edges[" + std::to_string(i) + "]";
        if (!edge_ids.insert(e.id).second)
            fail(errc::duplicate_id, loc + ".id", "duplicate edge id \"" + e.id + "\"");
        if (!std::binary_search(g.vertices.begin(), g.vertices.end(), e.source))
            fail(errc::unknown_vertex, loc + ".source", "undeclared vertex \"" + e.source + "\"");
        if (!std::binary_search(g.vertices.begin(), g.vertices.end(), e.target))
            fail(errc::unknown_vertex, loc + ".target", "undeclared vertex \"" + e.target + "\"");
        if (e.mass <= 0)
            fail(errc::non_positive_mass, loc + ".mass", "mass must be > 0, got " + rat_str(e.mass));
    }
    for (std::size_t i = 0; i < g.external_edges.size(); ++i) {
        const auto& e = g.external_edges[i];
        std::string loc = "external_edges[" + std::to_string(i) + "]";
        if (!edge_ids.insert(e.id).second)
            fail(errc::duplicate_id, loc + ".id", "duplicate edge id \"" + e.id + "\"");
        if (!std::binary_search(g.vertices.begin(), g.vertices.end(), e.vertex))
            fail(errc::unknown_vertex, loc + ".vertex", "undeclared vertex \"" + e.vertex + "\"");
        if (e.momentum.size() != static_cast<std::size_t>(g.dimension))
            fail(errc::malformed_document, loc + ".momentum",
                 "momentum vector must have length D = " + std::to_string(g.dimension));
    }
    if (!detail::connected_on_internal_edges(g))
        fail(errc::disconnected_graph, "internal_edges", "graph is not connected on its internal edges");
}

/// Parses the structured graph document. See the README for the format; all
/// rationals are exact strings ("p/q").
inline FeynmanGraph parse_graph(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(errc::malformed_document, "", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(errc::malformed_document, "", "top level must be an object");

    FeynmanGraph g;
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) fail(errc::malformed_document, key, "missing field");
        return doc[key];
    };
    if (!need("name").is_string()) fail(errc::malformed_document, "name", "must be a string");
    g.name = doc["name"].get<std::string>();
    if (!need("dimension").is_number_integer()) fail(errc::malformed_document, "dimension", "must be an integer");
    g.dimension = doc["dimension"].get<long>();

    if (!need("vertices").is_array()) fail(errc::malformed_document, "vertices", "must be an array");
    for (const auto& v : doc["vertices"]) {
        if (!v.is_string()) fail(errc::malformed_document, "vertices", "vertex ids must be strings");
        g.vertices.push_back(v.get<std::string>());
    }
    std::sort(g.vertices.begin(), g.vertices.end());

    if (!need("internal_edges").is_array()) fail(errc::malformed_document, "internal_edges", "must be an array");
    std::size_t idx = 0;
    for (const auto& e : doc["internal_edges"]) {
        std::string loc = "internal_edges[" + std::to_string(idx++) + "]";
        if (!e.is_object()) fail(errc::malformed_document, loc, "must be an object");
        for (const char* k : {"id", "source", "target", "mass"})
            if (!e.contains(k) || !e[k].is_string())
                fail(errc::malformed_document, loc + "." + k, "missing or non-string field");
        g.internal_edges.push_back({e["id"].get<std::string>(), e["source"].get<std::string>(),
                                    e["target"].get<std::string>(),
                                    rat_parse(e["mass"].get<std::string>(), loc + ".mass")});
    }
    std::sort(g.internal_edges.begin(), g.internal_edges.end(),
              [](const InternalEdge& a, const InternalEdge& b) { return a.id < b.id; });

    if (doc.contains("external_edges")) {
        if (!doc["external_edges"].is_array())
            fail(errc::malformed_document, "external_edges", "must be an array");
        idx = 0;
        for (const auto& e : doc["external_edges"]) {
            std::string loc = "external_edges[" + std::to_string(idx++) + "]";
            if (!e.is_object()) fail(errc::malformed_document, loc, "must be an object");
            for (const char* k : {"id", "vertex"})
                if (!e.contains(k) || !e[k].is_string())
                    fail(errc::malformed_document, loc + "." + k, "missing or non-string field");
            if (!e.contains("momentum") || !e["momentum"].is_array())
                fail(errc::malformed_document, loc + ".momentum", "missing or non-array field");
            ExternalEdge x{e["id"].get<std::string>(), e["vertex"].get<std::string>(), {}};
            std::size_t mi = 0;
            for (const auto& c : e["momentum"]) {
                std::string mloc = loc + ".momentum[" + std::to_string(mi++) + "]";
                if (!c.is_string()) fail(errc::malformed_document, mloc, "momentum entries must be rational strings");
                x.momentum.push_back(rat_parse(c.get<std::string>(), mloc));
            }
            g.external_edges.push_back(std::move(x));
        }
        std::sort(g.external_edges.begin(), g.external_edges.end(),
                  [](const ExternalEdge& a, const ExternalEdge& b) { return a.id < b.id; });
    }

    validate_graph(g);
    return g;
}

/// Canonical serialization: keys sorted, lists sorted by id, rationals as
/// reduced strings. parse_graph(serialize_graph(g)) reproduces g exactly.
inline std::string serialize_graph(const FeynmanGraph& g, int indent = 2) {
    nlohmann::json doc;
    doc["name"] = g.name;
    doc["dimension"] = g.dimension;
    doc["vertices"] = g.vertices;
    doc["internal_edges"] = nlohmann::json::array();
    for (const auto& e : g.internal_edges)
        doc["internal_edges"].push_back(
            {{"id", e.id}, {"source", e.source}, {"target", e.target}, {"mass", rat_str(e.mass)}});
    doc["external_edges"] = nlohmann::json::array();
    for (const auto& e : g.external_edges) {
        nlohmann::json mom = nlohmann::json::array();
        for (const auto& c : e.momentum) mom.push_back(rat_str(c));
        doc["external_edges"].push_back({{"id", e.id}, {"vertex", e.vertex}, {"momentum", mom}});
    }
    return doc.dump(indent);
}

/// L = b1(Gamma) = n - #V + 1 for connected graphs.
inline long loop_number(const FeynmanGraph& g) {
    return static_cast<long>(g.n_internal()) - static_cast<long>(g.vertices.size()) + 1;
}

inline IncidenceMatrix incidence_matrix(const FeynmanGraph& g) {
    IncidenceMatrix m;
    m.vertex_ids = g.vertices;
    for (const auto& e : g.internal_edges) m.edge_ids.push_back(e.id);
    m.entries.assign(g.vertices.size(), std::vector<int>(g.n_internal(), 0));
    for (std::size_t j = 0; j < g.internal_edges.size(); ++j) {
        const auto& e = g.internal_edges[j];
        if (e.self_loop()) continue; // +1 and -1 cancel at the same vertex
        m.entries[g.vertex_index(e.source)][j] = 1;
        m.entries[g.vertex_index(e.target)][j] = -1;
    }
    return m;
}

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

inline bool is_spanning_tree(const FeynmanGraph& g, const std::vector<std::size_t>& edge_subset) {
    if (edge_subset.size() + 1 != g.vertices.size()) return false;
    UnionFind uf(g.vertices.size());
    for (std::size_t j : edge_subset) {
        const auto& e = g.internal_edges[j];
        if (e.self_loop()) return false;
        if (!uf.unite(g.vertex_index(e.source), g.vertex_index(e.target))) return false;
    }
    return true;
}

} // namespace detail

/// All spanning trees, enumerated over edge subsets in lexicographic
/// edge-id order. Graphs in this domain are small; no fancy enumeration.
inline std::vector<SpanningTree> spanning_trees(const FeynmanGraph& g) {
    std::vector<SpanningTree> out;
    std::size_t n = g.n_internal();
    std::size_t k = g.vertices.size() - 1;
    if (k > n) return out;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    auto emit = [&]() {
        if (!detail::is_spanning_tree(g, pick)) return;
        SpanningTree t;
        std::set<std::size_t> chosen(pick.begin(), pick.end());
        for (std::size_t j = 0; j < n; ++j) {
            if (chosen.count(j)) t.tree_edges.push_back(g.internal_edges[j].id);
            else t.complement.push_back(g.internal_edges[j].id);
        }
        out.push_back(std::move(t));
    };
    if (k == 0) {
        SpanningTree t;
        for (const auto& e : g.internal_edges) t.complement.push_back(e.id);
        out.push_back(std::move(t));
        return out;
    }
    while (true) {
        emit();
        // next k-combination
        std::size_t i = k;
        while (i-- > 0) {
            if (pick[i] != i + n - k) {
                ++pick[i];
                for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
    }
}

/// The spanning tree whose complement is lexicographically smallest in
/// edge-id order, i.e. the loop variables sit on the earliest edges. For the
/// sunset this picks tree {e3} with loop variables (e1, e2).
inline SpanningTree first_tree(const FeynmanGraph& g) {
    auto all = spanning_trees(g);
    if (all.empty()) fail(errc::disconnected_graph, "first_tree", "graph has no spanning tree");
    return *std::min_element(all.begin(), all.end(), [](const SpanningTree& a, const SpanningTree& b) {
        return a.complement < b.complement;
    });
}

/// Momentum relations at kappa = 0: each edge momentum k_i is resolved as a
/// signed sum of the loop variables via the fundamental cycles of `tree`.
/// External momenta must vanish; self-loops carry no constraint and are
/// rejected.
inline MomentumRelations momentum_relations(const FeynmanGraph& g, const SpanningTree& tree) {
    for (std::size_t i = 0; i < g.external_edges.size(); ++i)
        for (const auto& c : g.external_edges[i].momentum)
            if (c != 0)
                fail(errc::nonzero_external_momentum, "external_edges[" + std::to_string(i) + "]",
                     "only kappa = 0 is supported");
    for (const auto& e : g.internal_edges)
        if (e.self_loop())
            fail(errc::self_loop_unsupported, "internal_edges",
                 "edge \"" + e.id + "\" is a self-loop; momentum relations do not constrain it");

    MomentumRelations rel;
    std::size_t n = g.n_internal();

    // Raw vertex relations: sum over sources = sum over targets.
    IncidenceMatrix inc = incidence_matrix(g);
    RatMat sys(g.vertices.size(), n);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        RatVec row(n, Rat(0));
        for (std::size_t j = 0; j < n; ++j) {
            sys(v, j) = inc.entries[v][j];
            row[j] = inc.entries[v][j];
        }
        rel.equations.push_back(std::move(row));
    }
    rel.rank = rank_rational(sys);

    rel.loop_edges = tree.complement;
    std::size_t L = rel.loop_edges.size();

    // Tree adjacency for path finding.
    std::set<std::string> in_tree(tree.tree_edges.begin(), tree.tree_edges.end());
    std::map<std::string, std::vector<std::pair<std::size_t, bool>>> adj; // vertex -> (edge idx, forward?)
    for (std::size_t j = 0; j < n; ++j) {
        const auto& e = g.internal_edges[j];
        if (!in_tree.count(e.id)) continue;
        adj[e.source].push_back({j, true});
        adj[e.target].push_back({j, false});
    }

    rel.expansion.assign(n, std::vector<int>(L, 0));
    for (std::size_t l = 0; l < L; ++l) {
        std::size_t j = g.edge_index(rel.loop_edges[l]);
        const auto& loop_edge = g.internal_edges[j];
        rel.expansion[j][l] = 1;
        // Tree path from t(loop_edge) back to s(loop_edge); edges traversed
        // along their own orientation pick up +1, against it -1.
        std::map<std::string, std::pair<std::size_t, bool>> came_from;
        std::set<std::string> seen{loop_edge.target};
        std::vector<std::string> stack{loop_edge.target};
        while (!stack.empty() && !seen.count(loop_edge.source)) {
            std::string v = stack.back();
            stack.pop_back();
            for (auto [ej, fwd] : adj[v]) {
                const auto& te = g.internal_edges[ej];
                std::string w = fwd ? te.target : te.source;
                if (seen.count(w)) continue;
                seen.insert(w);
                came_from[w] = {ej, fwd};
                stack.push_back(w);
            }
        }
        std::string v = loop_edge.source;
        while (v != loop_edge.target) {
            auto it = came_from.find(v);
            if (it == came_from.end())
                fail(errc::internal, "momentum_relations", "spanning tree does not connect the graph");
            auto [ej, fwd] = it->second;
            rel.expansion[ej][l] += fwd ? 1 : -1;
            const auto& te = g.internal_edges[ej];
            v = fwd ? te.source : te.target;
        }
    }
    return rel;
}

/// delta_alpha(Gamma) = D*L - 2*n*alpha; negative means convergent at
/// infinity, zero is the logarithmically divergent edge case.
inline Rat superficial_degree(const FeynmanGraph& g, const Rat& alpha) {
    return Rat(g.dimension) * Rat(loop_number(g)) - Rat(2) * Rat(static_cast<long>(g.n_internal())) * alpha;
}

} // namespace qmw
