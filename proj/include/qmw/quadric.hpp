#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/graph.hpp"
#include "qmw/matrix.hpp"
#include "qmw/poly.hpp"
#include "qmw/rational.hpp"

namespace qmw {

/// Homogeneous quadratic form q(u) = <u, A u> in the projective coordinates
/// u = (u_0, ..., u_{LD}) with u_0 the homogenizing variable and block j of
/// D slots holding loop variable j.
struct QuadraticForm {
    RatMat a; // symmetric (LD+1) x (LD+1)

    std::size_t size() const { return a.rows(); }

    Rat evaluate(const RatVec& u) const {
        RatVec au = a.apply(u);
        Rat v(0);
        for (std::size_t i = 0; i < u.size(); ++i) v += u[i] * au[i];
        return v;
    }
};

/// Diagonal factorization data for a form built by the pipeline:
/// A = T^t T with T = diag(mass_root, tbar_1, ..., tbar_LD). Entries are
/// polynomials in the deformation parameter; the undeformed net has constant
/// entries in {-1, 0, 1}.
struct DiagWitness {
    Rat mass_root;           // the undeformed x^2 coefficient stays the mass
    std::vector<Poly> tbar;  // loop-slot entries of PTP, length LD

    std::vector<Rat> tbar_at(const Rat& eps) const {
        std::vector<Rat> out;
        out.reserve(tbar.size());
        for (const auto& p : tbar) out.push_back(p.eval(eps));
        return out;
    }
};

/// Full square witness matrix T (diagonal case); A = transpose(T) * T.
struct FactorizationWitness {
    RatMat t;
    RatMat tbar; // P T P with P projecting out u_0

    static FactorizationWitness diagonal(const Rat& mass_root, const std::vector<Rat>& loop_entries) {
        std::size_t n = loop_entries.size() + 1;
        FactorizationWitness w{RatMat(n, n), RatMat(n, n)};
        w.t(0, 0) = mass_root;
        for (std::size_t i = 0; i < loop_entries.size(); ++i) {
            w.t(i + 1, i + 1) = loop_entries[i];
            w.tbar(i + 1, i + 1) = loop_entries[i];
        }
        return w;
    }
};

enum class WitnessStatus { materialized, minor_certified };

/// Either an explicit T with T^t T = A, or a Sylvester-based positivity
/// certificate when the diagonal entries are not perfect rational squares.
struct WitnessResult {
    WitnessStatus status;
    std::optional<FactorizationWitness> witness;
};

/// Deformation schedules for the off-tree forms (Prop-style construction).
///  - paper:   the r-th coordinate missing from form i gains eps^{2r};
///             reproduces the explicit sunset deformation exactly.
///  - uniform: every missing coordinate gains eps^2.
enum class DeformationSchedule { paper, uniform };

inline const char* schedule_name(DeformationSchedule s) {
    return s == DeformationSchedule::paper ? "paper" : "uniform";
}

inline DeformationSchedule schedule_from_name(const std::string& s) {
    if (s == "paper") return DeformationSchedule::paper;
    if (s == "uniform") return DeformationSchedule::uniform;
    fail(errc::malformed_document, "schedule", "unknown schedule \"" + s + "\" (expected paper|uniform)");
}

/// Slim copy of the incidence data a net needs to re-check momentum
/// conservation without the original graph object.
struct NetGraphRef {
    std::string graph_name;
    std::vector<std::string> vertices;
    std::vector<std::string> edge_ids;              // per form, sorted
    std::vector<std::pair<std::string, std::string>> endpoints; // (source, target) per form
};

/// The net of n quadrics in P^{LD}: one form per internal edge, plus the
/// diagonal witnesses and enough provenance to re-derive everything.
struct QuadricNet {
    long loop_count = 0;  // L
    long dimension = 0;   // D
    Rat epsilon = Rat(0);
    DeformationSchedule schedule = DeformationSchedule::paper;
    std::vector<QuadraticForm> forms;
    std::vector<DiagWitness> witnesses; // same order as forms
    NetGraphRef graph;
    std::vector<std::string> tree_edges; // spanning tree used for the layout

    long ambient_dim() const { return loop_count * dimension; } // LD, forms live in P^{LD}
    std::size_t form_count() const { return forms.size(); }
};

/// Report for the smoothness / reality / positivity / conservation checks.
/// Failures are recorded, never thrown.
struct ConditionReport {
    bool smooth = false;                 // (i) det(A_i) != 0 for all i
    bool real = true;                    // (ii) structural: entries are rationals
    bool positive_definite = false;      // (iii) Sylvester on every form
    bool conservation = false;           // (iv) sum_s Tbar = sum_t Tbar at every vertex
    std::vector<Rat> determinants;       // witness for (i)
    std::optional<std::string> first_singular_form;
    std::optional<std::string> first_nonpositive_form;
    std::optional<std::string> failing_vertex; // witness for (iv)

    bool all() const { return smooth && real && positive_definite && conservation; }
};

namespace detail {

inline QuadraticForm diagonal_form(const std::vector<Rat>& diag) {
    QuadraticForm f{RatMat(diag.size(), diag.size())};
    for (std::size_t i = 0; i < diag.size(); ++i) f.a(i, i) = diag[i];
    return f;
}

} // namespace detail

/// Raw homogenized propagator forms q'_i(k, x) = k_i^2 + m_i^2 x^2 in the
/// nD+1 variables (x, k_1, ..., k_n), before restriction to H_Gamma.
inline std::vector<QuadraticForm> build_raw_forms(const FeynmanGraph& g, const MomentumRelations&) {
    std::size_t n = g.n_internal();
    std::size_t d = static_cast<std::size_t>(g.dimension);
    std::vector<QuadraticForm> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rat> diag(n * d + 1, Rat(0));
        diag[0] = g.internal_edges[i].mass * g.internal_edges[i].mass;
        for (std::size_t r = 0; r < d; ++r) diag[1 + i * d + r] = 1;
        out.push_back(detail::diagonal_form(diag));
    }
    return out;
}

/// Restriction to H_Gamma in the loop coordinates. Edge momentum k_i resolves
/// as sum_j sigma_{ij} l_j with sigma in {-1,0,1}; slot-wise this puts
/// sigma_{ij} on the witness diagonal and sigma^2 on the form, so every
/// restricted form is diagonal and the witnesses obey the vertex conservation
/// identity by construction.
inline QuadricNet restrict_to_subspace(const FeynmanGraph& g, const MomentumRelations& rel) {
    std::size_t L = rel.loop_count();
    if (L == 0)
        fail(errc::empty_loop_space, "restrict_to_subspace",
             "graph has no loops (L = 0); the projective ambient space is empty");
    std::size_t d = static_cast<std::size_t>(g.dimension);
    std::size_t n = g.n_internal();

    QuadricNet net;
    net.loop_count = static_cast<long>(L);
    net.dimension = g.dimension;
    net.epsilon = 0;
    net.graph.graph_name = g.name;
    net.graph.vertices = g.vertices;
    for (const auto& e : g.internal_edges) {
        net.graph.edge_ids.push_back(e.id);
        net.graph.endpoints.push_back({e.source, e.target});
    }

    for (std::size_t i = 0; i < n; ++i) {
        DiagWitness w;
        w.mass_root = g.internal_edges[i].mass;
        w.tbar.assign(L * d, Poly());
        std::vector<Rat> diag(L * d + 1, Rat(0));
        diag[0] = w.mass_root * w.mass_root;
        for (std::size_t j = 0; j < L; ++j) {
            int sigma = rel.expansion[i][j];
            if (sigma == 0) continue;
            for (std::size_t r = 0; r < d; ++r) {
                w.tbar[j * d + r] = Poly(Rat(sigma));
                diag[1 + j * d + r] = Rat(sigma) * Rat(sigma);
            }
        }
        net.forms.push_back(detail::diagonal_form(diag));
        net.witnesses.push_back(std::move(w));
    }
    return net;
}

namespace detail {

inline QuadricNet net_from_witnesses(QuadricNet base, std::vector<DiagWitness> witnesses, const Rat& eps) {
    base.epsilon = eps;
    base.forms.clear();
    for (const auto& w : witnesses) {
        std::vector<Rat> diag(w.tbar.size() + 1, Rat(0));
        diag[0] = w.mass_root * w.mass_root;
        for (std::size_t s = 0; s < w.tbar.size(); ++s) {
            Rat t = w.tbar[s].eval(eps);
            diag[1 + s] = t * t;
        }
        base.forms.push_back(diagonal_form(diag));
    }
    base.witnesses = std::move(witnesses);
    return base;
}

} // namespace detail

/// One-parameter deformation of the restricted net. Off-tree forms gain the
/// scheduled lambda terms on their missing loop slots; tree forms are then
/// forced, leaf-inward, by the vertex conservation identity on the Tbar
/// matrices, with the x^2 coefficient pinned to the mass. eps = 0 returns the
/// net unchanged.
inline QuadricNet deform_net(const QuadricNet& net, const SpanningTree& tree, const Rat& eps,
                             DeformationSchedule schedule) {
    if (eps == 0) return net;
    std::size_t n = net.form_count();

    std::map<std::string, std::size_t> edge_pos;
    for (std::size_t i = 0; i < n; ++i) edge_pos[net.graph.edge_ids[i]] = i;

    std::vector<DiagWitness> wit = net.witnesses;
    std::set<std::string> pending(tree.tree_edges.begin(), tree.tree_edges.end());

    // Off-tree forms: fill in every vanishing loop slot.
    for (std::size_t i = 0; i < n; ++i) {
        if (pending.count(net.graph.edge_ids[i])) continue;
        std::size_t missing_rank = 0;
        for (std::size_t s = 0; s < wit[i].tbar.size(); ++s) {
            if (!wit[i].tbar[s].is_zero()) continue;
            ++missing_rank;
            long power = schedule == DeformationSchedule::paper ? static_cast<long>(missing_rank) : 1;
            wit[i].tbar[s] = Poly::variable(power);
        }
    }

    // Tree sweep: repeatedly solve the single unknown Tbar at a leaf of the
    // remaining tree, smallest edge id first.
    std::map<std::string, std::vector<std::string>> tree_at_vertex;
    for (const auto& id : pending) {
        std::size_t i = edge_pos.at(id);
        tree_at_vertex[net.graph.endpoints[i].first].push_back(id);
        tree_at_vertex[net.graph.endpoints[i].second].push_back(id);
    }

    while (!pending.empty()) {
        std::string pick_edge;
        std::string pick_vertex;
        for (const auto& id : pending) { // set iteration = edge-id order
            std::size_t i = edge_pos.at(id);
            for (const std::string& v : {net.graph.endpoints[i].first, net.graph.endpoints[i].second}) {
                std::size_t live = 0;
                for (const auto& other : tree_at_vertex[v])
                    if (pending.count(other)) ++live;
                if (live == 1) {
                    pick_edge = id;
                    pick_vertex = v;
                    break;
                }
            }
            if (!pick_edge.empty()) break;
        }
        if (pick_edge.empty())
            fail(errc::internal, "deform_net", "no leaf found in remaining spanning tree");

        std::size_t ei = edge_pos.at(pick_edge);
        bool edge_sourced_here = net.graph.endpoints[ei].first == pick_vertex;
        // Conservation at pick_vertex: sum_{s(e)=v} Tbar_e = sum_{t(e)=v} Tbar_e.
        std::vector<Poly> rhs(wit[ei].tbar.size(), Poly());
        for (std::size_t i = 0; i < n; ++i) {
            if (i == ei) continue;
            int side = 0;
            if (net.graph.endpoints[i].first == pick_vertex) side += 1;
            if (net.graph.endpoints[i].second == pick_vertex) side -= 1;
            if (side == 0) continue;
            for (std::size_t s = 0; s < rhs.size(); ++s) {
                Poly term = wit[i].tbar[s];
                if (side > 0) rhs[s] -= term;
                else rhs[s] += term;
            }
        }
        if (!edge_sourced_here)
            for (auto& p : rhs) p = -p;
        wit[ei].tbar = std::move(rhs);
        pending.erase(pick_edge);
    }

    QuadricNet out = detail::net_from_witnesses(net, std::move(wit), eps);
    out.schedule = schedule;
    out.tree_edges = tree.tree_edges;
    // Structurally guaranteed for diagonal witnesses; kept as a hard check so
    // a future non-diagonal schedule cannot silently ship a broken net.
    for (std::size_t i = 0; i < out.forms.size(); ++i) {
        if (!out.forms[i].a.is_symmetric())
            fail(errc::schedule_inconsistent, "deform_net",
                 "solved form " + out.graph.edge_ids[i] + " is not symmetric");
        for (std::size_t s = 0; s < out.forms[i].size(); ++s)
            if (out.forms[i].a(s, s) < 0)
                fail(errc::schedule_inconsistent, "deform_net",
                     "solved form " + out.graph.edge_ids[i] + " is not positive semidefinite");
    }
    return out;
}

/// Re-evaluates the symbolic one-parameter family carried by the witnesses
/// at another parameter value. evaluate_at(net, 0) is the literal eps -> 0
/// limit.
inline QuadricNet evaluate_at(const QuadricNet& net, const Rat& eps) {
    return detail::net_from_witnesses(net, net.witnesses, eps);
}

/// True iff the form is positive-definite (all leading principal minors
/// positive); such quadrics have no real projective points.
inline bool no_real_points(const QuadraticForm& form) {
    return sylvester_positive_definite(form.a);
}

/// Explicit T with T^t T = A when the diagonal entries are perfect rational
/// squares; otherwise the positivity is certified by minors alone.
inline WitnessResult factorization_witness(const QuadraticForm& form) {
    bool diagonal = true;
    for (std::size_t i = 0; i < form.size() && diagonal; ++i)
        for (std::size_t j = 0; j < form.size(); ++j)
            if (i != j && form.a(i, j) != 0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        std::vector<Rat> roots;
        bool exact = true;
        for (std::size_t i = 0; i < form.size(); ++i) {
            auto r = rat_sqrt_exact(form.a(i, i));
            if (!r) {
                exact = false;
                break;
            }
            roots.push_back(*r);
        }
        if (exact) {
            FactorizationWitness w{RatMat(form.size(), form.size()), RatMat(form.size(), form.size())};
            for (std::size_t i = 0; i < form.size(); ++i) {
                w.t(i, i) = roots[i];
                if (i > 0) w.tbar(i, i) = roots[i];
            }
            return {WitnessStatus::materialized, std::move(w)};
        }
    }
    if (!sylvester_positive_definite(form.a))
        fail(errc::internal, "factorization_witness", "form is not positive definite");
    return {WitnessStatus::minor_certified, std::nullopt};
}

/// Checks conditions (i)-(iv) on a deformed net, in exact arithmetic:
/// (i) every form nonsingular, (ii) real entries (structural here),
/// (iii) positive-definite by Sylvester, (iv) vertex-wise conservation of the
/// Tbar witnesses.
inline ConditionReport verify_conditions(const QuadricNet& net) {
    ConditionReport rep;
    rep.real = true; // entries are exact rationals by representation

    rep.smooth = true;
    for (std::size_t i = 0; i < net.form_count(); ++i) {
        Rat det = det_bareiss(net.forms[i].a);
        rep.determinants.push_back(det);
        if (det == 0 && rep.smooth) {
            rep.smooth = false;
            rep.first_singular_form = net.graph.edge_ids[i];
        }
    }

    rep.positive_definite = true;
    for (std::size_t i = 0; i < net.form_count(); ++i) {
        if (!sylvester_positive_definite(net.forms[i].a)) {
            rep.positive_definite = false;
            rep.first_nonpositive_form = net.graph.edge_ids[i];
            break;
        }
    }

    rep.conservation = true;
    std::size_t slots = net.witnesses.empty() ? 0 : net.witnesses.front().tbar.size();
    for (const auto& v : net.graph.vertices) {
        std::vector<Rat> balance(slots, Rat(0));
        for (std::size_t i = 0; i < net.form_count(); ++i) {
            int side = 0;
            if (net.graph.endpoints[i].first == v) side += 1;
            if (net.graph.endpoints[i].second == v) side -= 1;
            if (side == 0) continue;
            auto t = net.witnesses[i].tbar_at(net.epsilon);
            for (std::size_t s = 0; s < slots; ++s) balance[s] += Rat(side) * t[s];
        }
        bool ok = std::all_of(balance.begin(), balance.end(), [](const Rat& x) { return x == 0; });
        if (!ok) {
            rep.conservation = false;
            rep.failing_vertex = v;
            break;
        }
    }
    return rep;
}

/// Net dump: epsilon plus each form as a dense lower-triangular list of
/// rational strings. Consumed by the certificate and integrator tooling.
inline nlohmann::json net_to_json(const QuadricNet& net) {
    nlohmann::json doc;
    doc["graph"] = net.graph.graph_name;
    doc["loop_count"] = net.loop_count;
    doc["dimension"] = net.dimension;
    doc["epsilon"] = rat_str(net.epsilon);
    doc["schedule"] = schedule_name(net.schedule);
    doc["forms"] = nlohmann::json::array();
    for (std::size_t i = 0; i < net.form_count(); ++i) {
        nlohmann::json tri = nlohmann::json::array();
        for (std::size_t r = 0; r < net.forms[i].size(); ++r)
            for (std::size_t c = 0; c <= r; ++c) tri.push_back(rat_str(net.forms[i].a(r, c)));
        doc["forms"].push_back({{"edge", net.graph.edge_ids[i]}, {"lower_triangular", tri}});
    }
    return doc;
}

} // namespace qmw
