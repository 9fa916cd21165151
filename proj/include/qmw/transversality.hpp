#pragma once

#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/graph.hpp"
#include "qmw/matrix.hpp"
#include "qmw/quadric.hpp"
#include "qmw/rational.hpp"

namespace qmw {

/// grad q(u) = 2 A u, exact.
inline RatVec gradient(const QuadraticForm& form, const RatVec& point) {
    if (point.size() != form.size())
        fail(errc::dimension_mismatch, "gradient", "point length differs from form size");
    RatVec g = form.a.apply(point);
    for (auto& x : g) x *= 2;
    return g;
}

/// One labeled determinant certificate: the matrix of gradient coefficients
/// at a choice of coordinate slots, with its exact determinant.
struct Certificate {
    std::string family;       // e.g. "q1q3:l1[j],l2[k]"
    std::vector<long> indices; // the instantiated slot indices (j, k, ...)
    RatMat matrix;
    Rat det;
};

struct CertificateSet {
    std::vector<Certificate> certificates;
    bool all_nonzero = true;
    std::optional<std::string> first_failure; // family + indices label

    void push(Certificate c) {
        if (c.det == 0 && all_nonzero) {
            all_nonzero = false;
            std::string label = c.family + "(";
            for (std::size_t i = 0; i < c.indices.size(); ++i)
                label += (i ? "," : "") + std::to_string(c.indices[i]);
            first_failure = label + ")";
        }
        certificates.push_back(std::move(c));
    }
};

namespace detail {

/// Gradient coefficient of deformed sunset form `f` (0,1,2) at a coordinate
/// slot, as a function of (m, eps): the entries of the explicit deformation.
/// slot: 0 = u0, (1, j) = block-1 slot j, (2, j) = block-2 slot j.
struct SunsetEntry {
    const std::array<Rat, 3>& msq;
    Rat eps;

    Rat operator()(std::size_t f, int block, long j) const {
        if (block == 0) return msq[f];
        Rat ej = rat_pow(eps, j);
        switch (f) {
            case 0: return block == 1 ? Rat(1) : ej * ej;
            case 1: return block == 1 ? ej * ej : Rat(1);
            default: {
                Rat t = Rat(1) + ej;
                return t * t;
            }
        }
    }
};

inline void require_sunset_paper_net(const QuadricNet& net, const std::array<Rat, 3>& masses) {
    if (net.form_count() != 3 || net.loop_count != 2)
        fail(errc::unsupported_net_shape, "certificates",
             "determinant families are transcribed for the sunset net (3 forms, 2 loops) only");
    std::array<Rat, 3> msq{masses[0] * masses[0], masses[1] * masses[1], masses[2] * masses[2]};
    SunsetEntry entry{msq, net.epsilon};
    long d = net.dimension;
    for (std::size_t f = 0; f < 3; ++f) {
        const RatMat& a = net.forms[f].a;
        if (a.rows() != static_cast<std::size_t>(2 * d + 1))
            fail(errc::unsupported_net_shape, "certificates", "form size is not 2D+1");
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c) {
                Rat expected(0);
                if (r == c) {
                    if (r == 0) expected = entry(f, 0, 0);
                    else if (r <= static_cast<std::size_t>(d)) expected = entry(f, 1, static_cast<long>(r));
                    else expected = entry(f, 2, static_cast<long>(r) - d);
                }
                if (a(r, c) != expected)
                    fail(errc::unsupported_net_shape, "certificates",
                         "net does not match the explicit sunset deformation (schedule \"paper\")");
            }
    }
}

inline RatMat mat2(std::initializer_list<Rat> v) {
    RatMat m(2, 2);
    auto it = v.begin();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = *it++;
    return m;
}
inline RatMat mat3(std::initializer_list<Rat> v) {
    RatMat m(3, 3);
    auto it = v.begin();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = *it++;
    return m;
}

} // namespace detail

/// The 2x2 determinant families certifying pairwise transversality of the
/// explicit sunset deformation. Columns are gradient coefficients at the two
/// chosen slots (loop slots first, then u0 for the mass families); every
/// determinant is evaluated exactly. Index ranges are iterated literally, so
/// the two-index families are empty at D = 1.
inline CertificateSet pairwise_certificates(const QuadricNet& net, const std::array<Rat, 3>& masses) {
    detail::require_sunset_paper_net(net, masses);
    std::array<Rat, 3> msq{masses[0] * masses[0], masses[1] * masses[1], masses[2] * masses[2]};
    detail::SunsetEntry e{msq, net.epsilon};
    long d = net.dimension;
    CertificateSet out;

    struct Pair {
        std::size_t f1, f2;
        std::string tag;
    };
    const std::vector<Pair> pairs{{0, 1, "q1q2"}, {0, 2, "q1q3"}, {1, 2, "q2q3"}};

    for (const auto& p : pairs) {
        // (block-1 slot j, u0) and (block-2 slot j, u0)
        for (int block : {1, 2}) {
            for (long j = 1; j <= d; ++j) {
                RatMat m = detail::mat2({e(p.f1, block, j), e(p.f1, 0, 0), e(p.f2, block, j), e(p.f2, 0, 0)});
                out.push({p.tag + (block == 1 ? ":l1[j],u0" : ":l2[j],u0"), {j}, m, det_bareiss(m)});
            }
        }
        // (block-1 slot j, block-2 slot k), j != k
        for (long j = 1; j <= d; ++j)
            for (long k = 1; k <= d; ++k) {
                if (j == k) continue;
                RatMat m = detail::mat2({e(p.f1, 1, j), e(p.f1, 2, k), e(p.f2, 1, j), e(p.f2, 2, k)});
                out.push({p.tag + ":l1[j],l2[k]", {j, k}, m, det_bareiss(m)});
            }
        // same-block slot pairs, j < k
        for (int block : {1, 2}) {
            for (long j = 1; j <= d; ++j)
                for (long k = j + 1; k <= d; ++k) {
                    RatMat m =
                        detail::mat2({e(p.f1, block, j), e(p.f1, block, k), e(p.f2, block, j), e(p.f2, block, k)});
                    out.push({p.tag + (block == 1 ? ":l1[j],l1[k]" : ":l2[j],l2[k]"), {j, k}, m, det_bareiss(m)});
                }
        }
    }
    return out;
}

/// The 3x3 families for the triple intersection: all slot triples touching
/// u0 at most once, with index tuples that keep the chosen slots distinct.
inline CertificateSet triple_certificates(const QuadricNet& net, const std::array<Rat, 3>& masses) {
    detail::require_sunset_paper_net(net, masses);
    std::array<Rat, 3> msq{masses[0] * masses[0], masses[1] * masses[1], masses[2] * masses[2]};
    detail::SunsetEntry e{msq, net.epsilon};
    long d = net.dimension;
    CertificateSet out;

    auto col = [&](int block, long j) {
        return std::array<Rat, 3>{e(0, block, j), e(1, block, j), e(2, block, j)};
    };
    auto push3 = [&](const std::string& family, std::vector<long> idx, const std::array<Rat, 3>& c1,
                     const std::array<Rat, 3>& c2, const std::array<Rat, 3>& c3) {
        RatMat m = detail::mat3({c1[0], c2[0], c3[0], c1[1], c2[1], c3[1], c1[2], c2[2], c3[2]});
        out.push({family, std::move(idx), m, det_bareiss(m)});
    };
    const std::array<Rat, 3> u0 = col(0, 0);

    // (l1[j], l2[k], u0), all j, k
    for (long j = 1; j <= d; ++j)
        for (long k = 1; k <= d; ++k) push3("q1q2q3:l1[j],l2[k],u0", {j, k}, col(1, j), col(2, k), u0);
    // (l1[j], l1[k], u0) and (l2[j], l2[k], u0), j < k
    for (int block : {1, 2})
        for (long j = 1; j <= d; ++j)
            for (long k = j + 1; k <= d; ++k)
                push3(block == 1 ? "q1q2q3:l1[j],l1[k],u0" : "q1q2q3:l2[j],l2[k],u0", {j, k}, col(block, j),
                      col(block, k), u0);
    // three slots in one block, i < j < k
    for (int block : {1, 2})
        for (long i = 1; i <= d; ++i)
            for (long j = i + 1; j <= d; ++j)
                for (long k = j + 1; k <= d; ++k)
                    push3(block == 1 ? "q1q2q3:l1[i],l1[j],l1[k]" : "q1q2q3:l2[i],l2[j],l2[k]", {i, j, k},
                          col(block, i), col(block, j), col(block, k));
    // two slots in one block plus one in the other
    for (long i = 1; i <= d; ++i)
        for (long j = i + 1; j <= d; ++j)
            for (long k = 1; k <= d; ++k) {
                push3("q1q2q3:l1[i],l1[j],l2[k]", {i, j, k}, col(1, i), col(1, j), col(2, k));
                push3("q1q2q3:l1[k],l2[i],l2[j]", {k, i, j}, col(1, k), col(2, i), col(2, j));
            }
    return out;
}

// ---------------------------------------------------------------------------
// Exact points on intersections, via quadratic towers.
// ---------------------------------------------------------------------------

/// Element of Q[x_1..x_k]/(x_i^2 - r_i), k <= 3: 2^k rational coordinates
/// indexed by subsets of the generators. Gives exact arithmetic at points
/// whose squared coordinates are rational but whose coordinates are not.
class TowerElem {
public:
    TowerElem() = default;
    TowerElem(std::vector<Rat> radicands, Rat scalar) : r_(std::move(radicands)) {
        c_.assign(std::size_t(1) << r_.size(), Rat(0));
        c_[0] = std::move(scalar);
    }

    static TowerElem generator(const std::vector<Rat>& radicands, std::size_t which) {
        TowerElem e(radicands, Rat(0));
        e.c_[std::size_t(1) << which] = 1;
        return e;
    }

    const std::vector<Rat>& radicands() const { return r_; }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rat& x) { return x == 0; });
    }

    friend TowerElem operator+(TowerElem a, const TowerElem& b) {
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    friend TowerElem operator-(TowerElem a, const TowerElem& b) {
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
        return a;
    }
    friend TowerElem operator*(const TowerElem& a, const TowerElem& b) {
        TowerElem out(a.r_, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                Rat coeff = a.c_[i] * b.c_[j];
                std::size_t common = i & j;
                for (std::size_t g = 0; g < a.r_.size(); ++g)
                    if (common & (std::size_t(1) << g)) coeff *= a.r_[g];
                out.c_[i ^ j] += coeff;
            }
        }
        return out;
    }

    TowerElem scaled(const Rat& s) const {
        TowerElem out = *this;
        for (auto& x : out.c_) x *= s;
        return out;
    }

    /// Conjugate under the sign pattern flipping the chosen generators.
    TowerElem conjugate(std::size_t sign_mask) const {
        TowerElem out = *this;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            std::size_t bits = i & sign_mask;
            int pop = 0;
            while (bits) {
                pop ^= 1;
                bits &= bits - 1;
            }
            if (pop) out.c_[i] = -out.c_[i];
        }
        return out;
    }

    /// Product over all 2^k conjugates; lands in Q. Nonzero norm certifies
    /// the element is invertible, i.e. nonzero in every conjugate embedding.
    Rat norm() const {
        TowerElem acc(r_, Rat(1));
        for (std::size_t mask = 0; mask < c_.size(); ++mask) acc = acc * conjugate(mask);
        for (std::size_t i = 1; i < acc.c_.size(); ++i)
            if (acc.c_[i] != 0) fail(errc::internal, "TowerElem::norm", "norm did not land in the base field");
        return acc.c_[0];
    }

private:
    std::vector<Rat> r_;
    std::vector<Rat> c_;
};

/// One sample-point rank check at an exact point of an intersection of
/// quadrics, built by solving for squared coordinates and adjoining their
/// square roots. Not a certificate: patterns that happen to be unsolvable
/// are skipped, so coverage is opportunistic by design.
struct RankProbe {
    std::vector<std::size_t> forms;      // which forms the point lies on
    std::vector<std::size_t> slots;      // nonzero coordinate slots (0 = u0)
    std::vector<Rat> squared;            // exact squared coordinates at the slots (first is 1)
    bool full_rank = false;
};

struct HeuristicRankReport {
    bool heuristic = true; // never a certificate
    std::vector<RankProbe> probes;
    bool all_full_rank = true;
};

namespace detail {

inline std::optional<std::vector<Rat>> solve_square_system(const QuadricNet& net,
                                                           const std::vector<std::size_t>& forms,
                                                           const std::vector<std::size_t>& slots) {
    // slots[0] carries coordinate 1; solve for the squares at slots[1..].
    std::size_t unknowns = slots.size() - 1;
    if (forms.size() != unknowns) return std::nullopt;
    RatMat sys(unknowns, unknowns);
    RatVec rhs(unknowns, Rat(0));
    for (std::size_t r = 0; r < unknowns; ++r) {
        const RatMat& a = net.forms[forms[r]].a;
        for (std::size_t c = 0; c < unknowns; ++c) sys(r, c) = a(slots[c + 1], slots[c + 1]);
        rhs[r] = -a(slots[0], slots[0]);
    }
    Rat det = det_bareiss(sys);
    if (det == 0) return std::nullopt;
    // Cramer solve (tiny systems).
    std::vector<Rat> sol(unknowns);
    for (std::size_t c = 0; c < unknowns; ++c) {
        RatMat m = sys;
        for (std::size_t r = 0; r < unknowns; ++r) m(r, c) = rhs[r];
        sol[c] = det_bareiss(m) / det;
    }
    for (const Rat& s : sol)
        if (s == 0) return std::nullopt; // want genuinely nonzero coordinates
    return sol;
}

} // namespace detail

/// Probes an exact point on the intersection of the chosen forms, with
/// nonzero coordinates exactly at `slots`, and checks that the gradient
/// matrix has full rank there (every minor test is exact, via tower norms).
inline std::optional<RankProbe> rank_probe(const QuadricNet& net, const std::vector<std::size_t>& forms,
                                           const std::vector<std::size_t>& slots) {
    auto squares = detail::solve_square_system(net, forms, slots);
    if (!squares) return std::nullopt;

    RankProbe probe;
    probe.forms = forms;
    probe.slots = slots;
    probe.squared.push_back(Rat(1));
    for (const auto& s : *squares) probe.squared.push_back(s);

    // Point coordinates in the tower: u[slots[0]] = 1, u[slots[i]] = x_i.
    std::vector<Rat> radicands = *squares;
    std::vector<TowerElem> coords;
    coords.push_back(TowerElem(radicands, Rat(1)));
    for (std::size_t i = 0; i < radicands.size(); ++i)
        coords.push_back(TowerElem::generator(radicands, i));

    // Gradient entries at the active slots: 2 * a_ss * u_s.
    std::vector<std::vector<TowerElem>> grad(forms.size());
    for (std::size_t f = 0; f < forms.size(); ++f)
        for (std::size_t s = 0; s < slots.size(); ++s) {
            Rat coeff = Rat(2) * net.forms[forms[f]].a(slots[s], slots[s]);
            grad[f].push_back(coords[s].scaled(coeff));
        }

    // Full rank iff some maximal minor has nonzero norm.
    std::size_t k = forms.size();
    std::vector<std::size_t> choice(k);
    std::iota(choice.begin(), choice.end(), 0);
    bool ok = false;
    while (!ok) {
        // determinant of the k x k minor at columns `choice`, in the tower
        if (k == 2) {
            TowerElem m = grad[0][choice[0]] * grad[1][choice[1]] - grad[0][choice[1]] * grad[1][choice[0]];
            ok = !m.is_zero() && m.norm() != 0;
        } else {
            TowerElem m =
                grad[0][choice[0]] * (grad[1][choice[1]] * grad[2][choice[2]] - grad[1][choice[2]] * grad[2][choice[1]]) -
                grad[0][choice[1]] * (grad[1][choice[0]] * grad[2][choice[2]] - grad[1][choice[2]] * grad[2][choice[0]]) +
                grad[0][choice[2]] * (grad[1][choice[0]] * grad[2][choice[1]] - grad[1][choice[1]] * grad[2][choice[0]]);
            ok = !m.is_zero() && m.norm() != 0;
        }
        if (ok) break;
        // next combination
        std::size_t i = k;
        bool advanced = false;
        while (i-- > 0) {
            if (choice[i] != i + slots.size() - k) {
                ++choice[i];
                for (std::size_t j = i + 1; j < k; ++j) choice[j] = choice[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    probe.full_rank = ok;
    return probe;
}

/// Sample-based rank checks for nets outside the sunset template. Labeled
/// heuristic: it probes the patterns it can solve exactly and reports what it
/// saw, nothing more.
inline HeuristicRankReport heuristic_rank_report(const QuadricNet& net, std::size_t max_probes = 64) {
    HeuristicRankReport rep;
    std::size_t n = net.form_count();
    std::size_t dim = static_cast<std::size_t>(net.ambient_dim()) + 1;

    auto try_probe = [&](const std::vector<std::size_t>& forms, const std::vector<std::size_t>& slots) {
        if (rep.probes.size() >= max_probes) return;
        auto p = rank_probe(net, forms, slots);
        if (!p) return;
        rep.all_full_rank = rep.all_full_rank && p->full_rank;
        rep.probes.push_back(std::move(*p));
    };

    for (std::size_t f1 = 0; f1 < n; ++f1)
        for (std::size_t f2 = f1 + 1; f2 < n; ++f2)
            for (std::size_t a = 0; a < dim; ++a)
                for (std::size_t b = a + 1; b < dim; ++b)
                    for (std::size_t c = b + 1; c < dim; ++c) try_probe({f1, f2}, {a, b, c});
    for (std::size_t f1 = 0; f1 < n; ++f1)
        for (std::size_t f2 = f1 + 1; f2 < n; ++f2)
            for (std::size_t f3 = f2 + 1; f3 < n; ++f3)
                for (std::size_t a = 0; a < dim; ++a)
                    for (std::size_t b = a + 1; b < dim; ++b)
                        for (std::size_t c = b + 1; c < dim; ++c)
                            for (std::size_t e = c + 1; e < dim; ++e) try_probe({f1, f2, f3}, {a, b, c, e});
    return rep;
}

// ---------------------------------------------------------------------------
// Admissible-epsilon search.
// ---------------------------------------------------------------------------

struct EpsilonSearch {
    std::vector<Rat> sequence; // empty = harmonic 1/2, 1/3, ..., 1/cutoff
    long cutoff = 64;

    std::vector<Rat> values() const {
        if (!sequence.empty()) return sequence;
        std::vector<Rat> v;
        for (long k = 2; k <= cutoff; ++k) v.push_back(Rat(1, k));
        return v;
    }
};

struct EvidenceBundle {
    Rat epsilon;
    ConditionReport conditions;
    CertificateSet pairwise;
    CertificateSet triple;
    QuadricNet net;

    bool pass() const { return conditions.all() && pairwise.all_nonzero && triple.all_nonzero; }
};

struct EpsilonAttempt {
    Rat epsilon;
    bool pass = false;
    std::string failure; // first failing condition or certificate
};

struct EpsilonSearchResult {
    std::optional<EvidenceBundle> found;
    std::vector<EpsilonAttempt> attempts;
};

/// Builds the canonical massive sunset graph (2 vertices, 3 parallel edges).
inline FeynmanGraph sunset_graph(const std::array<Rat, 3>& masses, long dimension) {
    FeynmanGraph g;
    g.name = "sunset";
    g.dimension = dimension;
    g.vertices = {"v1", "v2"};
    g.internal_edges = {{"e1", "v1", "v2", masses[0]}, {"e2", "v1", "v2", masses[1]}, {"e3", "v1", "v2", masses[2]}};
    validate_graph(g);
    return g;
}

/// Walks the epsilon sequence until conditions (i)-(iv) and every pairwise and
/// triple determinant pass, collecting the failure trace along the way.
inline EpsilonSearchResult search_admissible_epsilon(const std::array<Rat, 3>& masses, long dimension,
                                                     const EpsilonSearch& search = {}) {
    for (const auto& m : masses)
        if (m <= 0) fail(errc::non_positive_mass, "search_admissible_epsilon", "masses must be positive");
    FeynmanGraph g = sunset_graph(masses, dimension);
    SpanningTree tree = first_tree(g);
    MomentumRelations rel = momentum_relations(g, tree);
    QuadricNet base = restrict_to_subspace(g, rel);

    EpsilonSearchResult result;
    for (const Rat& eps : search.values()) {
        EpsilonAttempt attempt;
        attempt.epsilon = eps;
        QuadricNet net = deform_net(base, tree, eps, DeformationSchedule::paper);
        ConditionReport rep = verify_conditions(net);
        if (!rep.all()) {
            if (!rep.smooth)
                attempt.failure = "condition (i): singular form " + rep.first_singular_form.value_or("?");
            else if (!rep.positive_definite)
                attempt.failure = "condition (iii): form " + rep.first_nonpositive_form.value_or("?") +
                                  " not positive-definite";
            else
                attempt.failure = "condition (iv): conservation fails at vertex " + rep.failing_vertex.value_or("?");
            result.attempts.push_back(std::move(attempt));
            continue;
        }
        CertificateSet pw = pairwise_certificates(net, masses);
        CertificateSet tr = triple_certificates(net, masses);
        if (!pw.all_nonzero || !tr.all_nonzero) {
            attempt.failure = "zero determinant: " + (pw.all_nonzero ? tr : pw).first_failure.value_or("?");
            result.attempts.push_back(std::move(attempt));
            continue;
        }
        attempt.pass = true;
        result.attempts.push_back(attempt);
        result.found = EvidenceBundle{eps, std::move(rep), std::move(pw), std::move(tr), std::move(net)};
        return result;
    }
    return result;
}

/// Throwing wrapper: the first admissible epsilon with its evidence bundle.
inline EvidenceBundle find_admissible_epsilon(const std::array<Rat, 3>& masses, long dimension,
                                              const EpsilonSearch& search = {}) {
    EpsilonSearchResult r = search_admissible_epsilon(masses, dimension, search);
    if (!r.found) {
        std::string msg = "no admissible epsilon in the search sequence; failures:";
        for (const auto& a : r.attempts) msg += "\n  eps = " + rat_str(a.epsilon) + ": " + a.failure;
        fail(errc::search_exhausted, "find_admissible_epsilon", msg);
    }
    return std::move(*r.found);
}

inline nlohmann::json certificates_to_json(const CertificateSet& set) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : set.certificates) {
        nlohmann::json item;
        item["family"] = c.family;
        item["indices"] = c.indices;
        item["det"] = rat_str(c.det);
        arr.push_back(std::move(item));
    }
    return arr;
}

inline nlohmann::json conditions_to_json(const ConditionReport& rep) {
    nlohmann::json j;
    j["smooth"] = rep.smooth;
    j["real"] = rep.real;
    j["positive_definite"] = rep.positive_definite;
    j["momentum_conservation"] = rep.conservation;
    nlohmann::json dets = nlohmann::json::array();
    for (const auto& d : rep.determinants) dets.push_back(rat_str(d));
    j["determinants"] = dets;
    if (rep.first_singular_form) j["first_singular_form"] = *rep.first_singular_form;
    if (rep.first_nonpositive_form) j["first_nonpositive_form"] = *rep.first_nonpositive_form;
    if (rep.failing_vertex) j["failing_vertex"] = *rep.failing_vertex;
    return j;
}

/// The evidence bundle emitted by reports and the CLI.
inline nlohmann::json evidence_to_json(const EvidenceBundle& b) {
    nlohmann::json j;
    j["epsilon"] = rat_str(b.epsilon);
    j["conditions"] = conditions_to_json(b.conditions);
    nlohmann::json certs = certificates_to_json(b.pairwise);
    for (auto& c : certificates_to_json(b.triple)) certs.push_back(c);
    j["certificates"] = std::move(certs);
    j["pass"] = b.pass();
    return j;
}

} // namespace qmw
