#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/rational.hpp"

namespace qmw {

/// Twist exponent of an exotic term, kept affine in the (possibly unknown)
/// dimension d of the named variety: twist = c0 + cdim * d. Duality flips
/// cdim, so twists stay exact even while d is symbolic.
struct ExoticTwist {
    long c0 = 0;
    long cdim = 0;

    friend bool operator==(const ExoticTwist&, const ExoticTwist&) = default;
    friend auto operator<=>(const ExoticTwist&, const ExoticTwist&) = default;

    std::string str() const {
        if (cdim == 0) return std::to_string(c0);
        std::string d = cdim == 1 ? "d" : (cdim == -1 ? "-d" : std::to_string(cdim) + "d");
        if (c0 == 0) return d;
        return std::to_string(c0) + (cdim > 0 ? "+" : "") + d;
    }
};

/// One abelian-variety style summand: coeff * symbol * L^twist, with the
/// optional dimension of the named variety as metadata.
struct ExoticTerm {
    std::string symbol; // e.g. "h1(Prym)"
    ExoticTwist twist;
    long long coeff = 0;
    std::optional<long> dim;

    friend bool operator==(const ExoticTerm&, const ExoticTerm&) = default;
};

/// Class in the cut-and-paste ring: an integer Laurent polynomial in the
/// Lefschetz symbol L plus a normalized multiset of exotic terms.
class MotiveClass {
public:
    MotiveClass() = default;

    static MotiveClass tate_monomial(long exp, long long coeff = 1) {
        MotiveClass c;
        if (coeff != 0) c.tate_[exp] = coeff;
        return c;
    }
    static MotiveClass one() { return tate_monomial(0); }
    static MotiveClass lefschetz(long exp = 1) { return tate_monomial(exp); }

    static MotiveClass exotic(std::string symbol, ExoticTwist twist, long long coeff,
                              std::optional<long> dim) {
        MotiveClass c;
        ExoticTerm t{std::move(symbol), twist, coeff, dim};
        c.add_exotic(t);
        return c;
    }

    const std::map<long, long long>& tate() const { return tate_; }
    std::vector<ExoticTerm> exotic_terms() const {
        std::vector<ExoticTerm> out;
        for (const auto& [k, t] : exotic_) out.push_back(t);
        return out;
    }
    bool is_tate() const { return exotic_.empty(); }
    bool is_zero() const { return tate_.empty() && exotic_.empty(); }

    long long tate_coeff(long exp) const {
        auto it = tate_.find(exp);
        return it == tate_.end() ? 0 : it->second;
    }

    MotiveClass& operator+=(const MotiveClass& o) {
        for (const auto& [e, c] : o.tate_) {
            auto [it, fresh] = tate_.try_emplace(e, c);
            if (!fresh && (it->second += c) == 0) tate_.erase(it);
        }
        for (const auto& [k, t] : o.exotic_) add_exotic(t);
        return *this;
    }
    MotiveClass operator-() const {
        MotiveClass r = *this;
        for (auto& [e, c] : r.tate_) c = -c;
        for (auto& [k, t] : r.exotic_) t.coeff = -t.coeff;
        return r;
    }
    MotiveClass& operator-=(const MotiveClass& o) { return *this += -o; }
    friend MotiveClass operator+(MotiveClass a, const MotiveClass& b) { return a += b; }
    friend MotiveClass operator-(MotiveClass a, const MotiveClass& b) { return a -= b; }

    /// Ring product. Products of two exotic parts are outside this class
    /// ledger's vocabulary and are rejected.
    friend MotiveClass operator*(const MotiveClass& a, const MotiveClass& b) {
        if (!a.exotic_.empty() && !b.exotic_.empty())
            fail(errc::unsupported_exotic_product, "MotiveClass::mul",
                 "product of two classes with exotic parts is not representable");
        MotiveClass r;
        for (const auto& [ea, ca] : a.tate_)
            for (const auto& [eb, cb] : b.tate_) {
                auto [it, fresh] = r.tate_.try_emplace(ea + eb, ca * cb);
                if (!fresh && (it->second += ca * cb) == 0) r.tate_.erase(it);
            }
        auto fold_exotic = [&r](const std::map<long, long long>& tate, const auto& exotic) {
            for (const auto& [e, c] : tate)
                for (const auto& [k, t] : exotic) {
                    ExoticTerm shifted = t;
                    shifted.twist.c0 += e;
                    shifted.coeff *= c;
                    r.add_exotic(shifted);
                }
        };
        fold_exotic(b.tate_, a.exotic_);
        fold_exotic(a.tate_, b.exotic_);
        return r;
    }
    MotiveClass& operator*=(const MotiveClass& o) { return *this = *this * o; }

    friend bool operator==(const MotiveClass& a, const MotiveClass& b) {
        return a.tate_ == b.tate_ && a.exotic_ == b.exotic_;
    }

    /// Euler characteristic: chi(L) = 1, chi(h1 of an abelian variety of
    /// dimension d) = -2d. Refuses when a surviving exotic term has no
    /// dimension attached.
    long long euler() const {
        long long chi = 0;
        for (const auto& [e, c] : tate_) chi += c;
        for (const auto& [k, t] : exotic_) {
            if (!t.dim)
                fail(errc::unknown_dimension, "MotiveClass::euler",
                     "term " + t.symbol + " has no dimension metadata");
            chi += t.coeff * (-2) * *t.dim;
        }
        return chi;
    }

    std::optional<long long> euler_if_known() const {
        for (const auto& [k, t] : exotic_)
            if (!t.dim) return std::nullopt;
        return euler();
    }

private:
    using ExoticKey = std::pair<std::string, ExoticTwist>;

    void add_exotic(const ExoticTerm& t) {
        if (t.coeff == 0) return;
        ExoticTerm canon = t;
        if (canon.dim && canon.twist.cdim != 0) { // resolve symbolic twist when d is known
            canon.twist.c0 += canon.twist.cdim * *canon.dim;
            canon.twist.cdim = 0;
        }
        ExoticKey key{canon.symbol, canon.twist};
        auto it = exotic_.find(key);
        if (it == exotic_.end()) {
            exotic_.emplace(key, canon);
            return;
        }
        if (it->second.dim != canon.dim)
            fail(errc::internal, "MotiveClass", "conflicting dimensions for symbol " + canon.symbol);
        it->second.coeff += canon.coeff;
        if (it->second.coeff == 0) exotic_.erase(it);
    }

    std::map<long, long long> tate_;
    std::map<ExoticKey, ExoticTerm> exotic_;

    friend struct MotiveOps;
};

/// Ordered log of the cut-and-paste triangles a computation used; the length
/// is the cone count the main theorem bounds.
struct TriangleLedger {
    struct Entry {
        std::string kind; // "MV" or "Gysin"
        std::array<std::string, 3> slots;
    };
    std::vector<Entry> entries;

    std::size_t cone_count() const { return entries.size(); }
    void mv(std::string a, std::string b, std::string c) {
        entries.push_back({"MV", {std::move(a), std::move(b), std::move(c)}});
    }
    void gysin(std::string a, std::string b, std::string c) {
        entries.push_back({"Gysin", {std::move(a), std::move(b), std::move(c)}});
    }
};

struct Verdict {
    enum class Kind { not_mixed_tate, tate_type, indeterminate };
    Kind kind = Kind::indeterminate;
    std::string witness;              // exotic symbol, for not_mixed_tate
    bool mass_condition_checked = false;
    std::string reason;               // for indeterminate

    static Verdict not_mixed_tate(std::string witness) {
        return {Kind::not_mixed_tate, std::move(witness), true, ""};
    }
    static Verdict tate_type() { return {Kind::tate_type, "", true, ""}; }
    static Verdict indeterminate(std::string reason) {
        return {Kind::indeterminate, "", false, std::move(reason)};
    }

    const char* name() const {
        switch (kind) {
            case Kind::not_mixed_tate: return "NotMixedTate";
            case Kind::tate_type: return "TateType";
            case Kind::indeterminate: return "Indeterminate";
        }
        return "?";
    }
};

/// [P^N] = 1 + L + ... + L^N.
inline MotiveClass class_projective(long n) {
    if (n < 0) fail(errc::dimension_too_small, "class_projective", "N must be >= 0");
    MotiveClass c;
    for (long i = 0; i <= n; ++i) c += MotiveClass::tate_monomial(i);
    return c;
}

/// Smooth odd-dimensional quadric in P^{2D}: 1 + L + ... + L^{2D-1}.
inline MotiveClass class_odd_quadric(long d) {
    if (d < 1) fail(errc::dimension_too_small, "class_odd_quadric", "D must be >= 1");
    MotiveClass c;
    for (long i = 0; i <= 2 * d - 1; ++i) c += MotiveClass::tate_monomial(i);
    return c;
}

/// Smooth complete intersection of two odd-dimensional quadrics in P^{2D}:
/// sum_{i<=D-2} L^i + (2D+2) L^{D-1} + sum_{D<=i<=2D-2} L^i.
inline MotiveClass class_two_quadrics(long d) {
    if (d < 2) fail(errc::dimension_too_small, "class_two_quadrics", "D must be >= 2");
    MotiveClass c;
    for (long i = 0; i <= d - 2; ++i) c += MotiveClass::tate_monomial(i);
    c += MotiveClass::tate_monomial(d - 1, 2 * d + 2);
    for (long i = d; i <= 2 * d - 2; ++i) c += MotiveClass::tate_monomial(i);
    return c;
}

inline constexpr const char* prym_symbol = "h1(Prym)";

/// Smooth complete intersection of three odd-dimensional quadrics in P^{2D}:
/// Tate tail plus the Prym h^1 summand. The middle-degree placement forces
/// the default twist exponent D-2 (a curve class 1 + h1 + L at D = 2); the
/// exponent stays configurable.
inline MotiveClass class_three_quadrics(long d, std::optional<long> prym_dim,
                                        std::optional<long> twist_exponent = std::nullopt) {
    if (d < 2) fail(errc::dimension_too_small, "class_three_quadrics", "D must be >= 2");
    MotiveClass c;
    for (long i = 0; i <= 2 * d - 3; ++i) c += MotiveClass::tate_monomial(i);
    long twist = twist_exponent.value_or(d - 2);
    c += MotiveClass::exotic(prym_symbol, ExoticTwist{twist, 0}, 1, prym_dim);
    return c;
}

/// Class of a union by inclusion-exclusion. Supports 1 to 3 members; the
/// ledger records one MV cone per fold (two for the three-quadric union).
/// `pairwise` is ordered (0,1), (0,2), (1,2); `triple` required for n = 3.
inline MotiveClass union_class(const std::vector<MotiveClass>& singles,
                               const std::vector<MotiveClass>& pairwise,
                               const std::optional<MotiveClass>& triple, TriangleLedger& ledger) {
    std::size_t n = singles.size();
    if (n == 0 || n > 3) fail(errc::internal, "union_class", "supported for 1..3 classes");
    if (pairwise.size() != n * (n - 1) / 2)
        fail(errc::internal, "union_class", "wrong number of pairwise intersection classes");
    if ((n == 3) != triple.has_value())
        fail(errc::internal, "union_class", "triple intersection class required exactly when n = 3");

    if (n == 1) return singles[0];
    if (n == 2) {
        ledger.mv("[Q1 u Q2]", "[Q1] + [Q2]", "[Q1 n Q2]");
        return singles[0] + singles[1] - pairwise[0];
    }
    ledger.mv("[Q1 u Q2]", "[Q1] + [Q2]", "[Q1 n Q2]");
    ledger.mv("[Q1 u Q2 u Q3]", "[Q1 u Q2] + [Q3]", "[(Q1 u Q2) n Q3]");
    MotiveClass acc;
    for (const auto& s : singles) acc += s;
    for (const auto& p : pairwise) acc -= p;
    acc += *triple;
    return acc;
}

/// [X \ Z] = [X] - [Z]; one Gysin cone.
inline MotiveClass complement_class(const MotiveClass& ambient, const MotiveClass& closed,
                                    TriangleLedger& ledger) {
    ledger.gysin("[Z]", "[X]", "[X \\ Z]");
    return ambient - closed;
}

/// Class-level duality bookkeeping in an ambient of dimension N: Tate terms
/// L^k map to L^{N-k}; an exotic twist t maps to N - d - t, kept affine in d
/// while the dimension is symbolic. Involutive by construction.
inline MotiveClass dual_class(const MotiveClass& c, long ambient_dim) {
    MotiveClass out;
    for (const auto& [e, coeff] : c.tate()) out += MotiveClass::tate_monomial(ambient_dim - e, coeff);
    for (const auto& t : c.exotic_terms()) {
        ExoticTwist tw{ambient_dim - t.twist.c0, -1 - t.twist.cdim};
        out += MotiveClass::exotic(t.symbol, tw, t.coeff, t.dim);
    }
    return out;
}

struct SunsetPipelineResult {
    MotiveClass cls;
    TriangleLedger ledger;
    Verdict verdict;
    MotiveClass union_cls; // [Q1 u Q2 u Q3], for cross-checks and reports
};

/// Assembles the complement class of the three-quadric arrangement the way
/// the proof does: three Gysin steps (two of them on direct sums) and two
/// Mayer-Vietoris steps, five cones in total, then derives the verdict from
/// the surviving exotic part and the mass condition m3^2 != m1^2 + m2^2.
inline SunsetPipelineResult sunset_pipeline(long d, const std::array<Rat, 3>& masses,
                                            std::optional<long> prym_dim = std::nullopt,
                                            std::optional<long> twist_exponent = std::nullopt) {
    if (d < 2) fail(errc::dimension_too_small, "sunset_pipeline", "requires D >= 2");
    std::optional<long> prym = prym_dim ? prym_dim : (d == 2 ? std::optional<long>(5) : std::nullopt);

    MotiveClass p = class_projective(2 * d);
    MotiveClass q = class_odd_quadric(d);        // any single quadric
    MotiveClass qq = class_two_quadrics(d);      // any pairwise intersection
    MotiveClass qqq = class_three_quadrics(d, prym, twist_exponent);

    SunsetPipelineResult out;
    TriangleLedger& ledger = out.ledger;

    // Gysin: [P \ Q123] = [P] - [Q123].
    MotiveClass p_minus_q123 = p - qqq;
    ledger.gysin("[Q123]", "[P]", "[P \\ Q123]");

    // Gysin on a direct sum: [U13] + [U23] = 2[P] - [Q13] - [Q23].
    MotiveClass u13_plus_u23 = p + p - qq - qq;
    ledger.gysin("[Q13] + [Q23]", "[P] + [P]", "[U13] + [U23]");

    // MV: [U u V] = [U13] + [U23] - [U13 n U23], with U13 u U23 = P \ Q123.
    MotiveClass u_cup_v = u13_plus_u23 - p_minus_q123;
    ledger.mv("[P \\ Q123]", "[U13] + [U23]", "[U u V]");

    // Gysin on a direct sum: [U] + [V] = 2[P] - [Q1 u Q2] - [Q3], the union
    // slot evaluated by scissor additivity.
    MotiveClass q1_cup_q2 = q + q - qq;
    MotiveClass u_plus_v = p + p - q1_cup_q2 - q;
    ledger.gysin("[Q1 u Q2] + [Q3]", "[P] + [P]", "[U] + [V]");

    // MV: [P \ (Q1 u Q2 u Q3)] = [U] + [V] - [U u V].
    out.cls = u_plus_v - u_cup_v;
    ledger.mv("[U u V]", "[U] + [V]", "[P \\ (Q1 u Q2 u Q3)]");

    if (ledger.cone_count() > 5)
        fail(errc::internal, "sunset_pipeline", "cone budget exceeded");

    // Union class for reports: plain inclusion-exclusion on a scratch ledger.
    TriangleLedger scratch;
    out.union_cls = union_class({q, q, q}, {qq, qq, qq}, qqq, scratch);

    bool mass_condition = masses[2] * masses[2] != masses[0] * masses[0] + masses[1] * masses[1];
    if (!mass_condition) {
        out.verdict = Verdict::indeterminate(
            "mass stratum m3^2 = m1^2 + m2^2: the Prym obstruction is not established there");
    } else if (out.cls.is_tate()) {
        out.verdict = Verdict::tate_type();
    } else {
        out.verdict = Verdict::not_mixed_tate(out.cls.exotic_terms().front().symbol);
    }
    return out;
}

inline nlohmann::json motive_to_json(const MotiveClass& c) {
    nlohmann::json j;
    j["tate"] = nlohmann::json::array();
    for (const auto& [e, coeff] : c.tate()) j["tate"].push_back({e, coeff});
    j["exotic"] = nlohmann::json::array();
    for (const auto& t : c.exotic_terms()) {
        nlohmann::json item;
        item["symbol"] = t.symbol;
        if (t.twist.cdim == 0) item["twist"] = t.twist.c0;
        else item["twist"] = {{"const", t.twist.c0}, {"dim_coeff", t.twist.cdim}};
        item["coeff"] = t.coeff;
        item["dim"] = t.dim ? nlohmann::json(*t.dim) : nlohmann::json(nullptr);
        j["exotic"].push_back(std::move(item));
    }
    auto chi = c.euler_if_known();
    j["euler"] = chi ? nlohmann::json(*chi) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json ledger_to_json(const TriangleLedger& ledger) {
    nlohmann::json j;
    j["cone_count"] = ledger.cone_count();
    j["triangles"] = nlohmann::json::array();
    for (const auto& e : ledger.entries)
        j["triangles"].push_back({{"kind", e.kind}, {"slots", e.slots}});
    return j;
}

inline nlohmann::json verdict_to_json(const Verdict& v) {
    nlohmann::json j;
    j["kind"] = v.name();
    if (v.kind == Verdict::Kind::not_mixed_tate) {
        j["witness"] = v.witness;
        j["mass_condition_checked"] = v.mass_condition_checked;
    }
    if (v.kind == Verdict::Kind::indeterminate) j["reason"] = v.reason;
    return j;
}

/// Human-readable rendering, e.g. "1 - 14*L + 3*L^3 + h1(Prym)".
inline std::string motive_str(const MotiveClass& c) {
    std::string out;
    auto append = [&out](long long coeff, const std::string& body) {
        if (coeff == 0) return;
        std::string mag = std::to_string(coeff < 0 ? -coeff : coeff);
        std::string term;
        if (body.empty()) term = mag;
        else if (mag == "1") term = body;
        else term = mag + "*" + body;
        if (out.empty()) out = (coeff < 0 ? "-" : "") + term;
        else out += (coeff < 0 ? " - " : " + ") + term;
    };
    for (const auto& [e, coeff] : c.tate())
        append(coeff, e == 0 ? "" : (e == 1 ? "L" : "L^" + std::to_string(e)));
    for (const auto& t : c.exotic_terms()) {
        std::string body = t.symbol;
        if (!(t.twist.c0 == 0 && t.twist.cdim == 0)) body += "*L^" + t.twist.str();
        append(t.coeff, body);
    }
    return out.empty() ? "0" : out;
}

} // namespace qmw
