#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/rational.hpp"

namespace qmw {

/// Monomial in 1PI graph generators: name -> positive power, canonical order.
using Monomial = std::map<std::string, int>;

inline Monomial monomial_one() { return {}; }
inline Monomial monomial_of(const std::string& g) { return {{g, 1}}; }
inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (const auto& [g, p] : b) r[g] += p;
    return r;
}

/// Element of the polynomial Hopf algebra on graph generators, over Q.
class HopfElement {
public:
    HopfElement() = default;
    static HopfElement zero() { return {}; }
    static HopfElement unit() { return from(monomial_one()); }
    static HopfElement generator(const std::string& g) { return from(monomial_of(g)); }
    static HopfElement from(Monomial m, Rat coeff = Rat(1)) {
        HopfElement e;
        if (coeff != 0) e.terms_[std::move(m)] = std::move(coeff);
        return e;
    }

    const std::map<Monomial, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    HopfElement& operator+=(const HopfElement& o) {
        for (const auto& [m, c] : o.terms_) {
            auto [it, fresh] = terms_.try_emplace(m, c);
            if (!fresh && (it->second += c) == 0) terms_.erase(it);
        }
        return *this;
    }
    HopfElement operator-() const {
        HopfElement r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    HopfElement& operator-=(const HopfElement& o) { return *this += -o; }
    friend HopfElement operator+(HopfElement a, const HopfElement& b) { return a += b; }
    friend HopfElement operator-(HopfElement a, const HopfElement& b) { return a -= b; }

    friend HopfElement operator*(const HopfElement& a, const HopfElement& b) {
        HopfElement r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = monomial_mul(ma, mb);
                Rat c = ca * cb;
                auto [it, fresh] = r.terms_.try_emplace(std::move(m), c);
                if (!fresh && (it->second += c) == 0) r.terms_.erase(it);
            }
        return r;
    }

    HopfElement scaled(const Rat& s) const {
        HopfElement r;
        if (s == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
        return r;
    }

    friend bool operator==(const HopfElement&, const HopfElement&) = default;

    /// Counit: the coefficient of the empty monomial.
    Rat counit() const {
        auto it = terms_.find(monomial_one());
        return it == terms_.end() ? Rat(0) : it->second;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            std::string body;
            for (const auto& [g, p] : m) {
                if (!body.empty()) body += "*";
                body += g;
                if (p > 1) body += "^" + std::to_string(p);
            }
            std::string term = body.empty() ? rat_str(c) : (c == 1 ? body : rat_str(c) + "*" + body);
            out += (out.empty() ? "" : " + ") + term;
        }
        return out;
    }

private:
    std::map<Monomial, Rat> terms_;
};

/// Element of H (x) H, for coproduct computations.
class HopfTensor {
public:
    using Key = std::pair<Monomial, Monomial>;

    static HopfTensor of(Monomial left, Monomial right, Rat coeff = Rat(1)) {
        HopfTensor t;
        if (coeff != 0) t.terms_[{std::move(left), std::move(right)}] = std::move(coeff);
        return t;
    }

    const std::map<Key, Rat>& terms() const { return terms_; }

    HopfTensor& operator+=(const HopfTensor& o) {
        for (const auto& [k, c] : o.terms_) {
            auto [it, fresh] = terms_.try_emplace(k, c);
            if (!fresh && (it->second += c) == 0) terms_.erase(it);
        }
        return *this;
    }
    friend HopfTensor operator+(HopfTensor a, const HopfTensor& b) { return a += b; }

    friend HopfTensor operator*(const HopfTensor& a, const HopfTensor& b) {
        HopfTensor r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Key k{monomial_mul(ka.first, kb.first), monomial_mul(ka.second, kb.second)};
                Rat c = ca * cb;
                auto [it, fresh] = r.terms_.try_emplace(std::move(k), c);
                if (!fresh && (it->second += c) == 0) r.terms_.erase(it);
            }
        return r;
    }

    HopfTensor scaled(const Rat& s) const {
        HopfTensor r;
        if (s == 0) return r;
        for (const auto& [k, c] : terms_) r.terms_[k] = c * s;
        return r;
    }

    friend bool operator==(const HopfTensor&, const HopfTensor&) = default;

private:
    std::map<Key, Rat> terms_;
};

/// One admissible-subgraph record: gamma (a disjoint union, i.e. a monomial)
/// and the contracted quotient generator.
struct SubgraphEntry {
    Monomial gamma;
    std::string quotient;
    // Optional divergence metadata of gamma, for delta-based admissibility.
    std::optional<long> gamma_loops;
    std::optional<long> gamma_edges;
};

struct Generator {
    std::string name;
    long loops = 1; // grading
    std::vector<SubgraphEntry> table;
};

/// Admissibility rule: which table entries enter the coproduct sum. The
/// library ships the accept-all rule (explicit fixture tables are taken as
/// given) and a superficial-degree filter for tables carrying metadata.
using SubgraphRule = std::function<bool(const Generator&, const SubgraphEntry&)>;

inline SubgraphRule accept_all_subgraphs() {
    return [](const Generator&, const SubgraphEntry&) { return true; };
}

/// Keep gamma iff D * L(gamma) - 2 * n(gamma) >= 0 at alpha = 1 (entries
/// without metadata are kept).
inline SubgraphRule divergent_subgraphs(long dimension) {
    return [dimension](const Generator&, const SubgraphEntry& e) {
        if (!e.gamma_loops || !e.gamma_edges) return true;
        return dimension * *e.gamma_loops - 2 * *e.gamma_edges >= 0;
    };
}

/// The (fixture-backed) Hopf algebra of 1PI graphs: a generator set graded by
/// loop number with declared admissible-subgraph tables. Tables must be
/// graded (deg gamma + deg quotient = deg graph), which also makes every
/// recursion below well-founded.
class HopfAlgebra {
public:
    void add_generator(Generator g) {
        if (g.loops < 1)
            fail(errc::bad_character_table, "HopfAlgebra", "generator " + g.name + " must have degree >= 1");
        if (gens_.count(g.name))
            fail(errc::duplicate_id, "HopfAlgebra", "generator " + g.name + " declared twice");
        gens_.emplace(g.name, std::move(g));
    }

    bool has(const std::string& name) const { return gens_.count(name) > 0; }
    const Generator& generator(const std::string& name) const {
        auto it = gens_.find(name);
        if (it == gens_.end())
            fail(errc::bad_character_table, "HopfAlgebra", "unknown generator \"" + name + "\"");
        return it->second;
    }
    const std::map<std::string, Generator>& generators() const { return gens_; }

    long degree(const Monomial& m) const {
        long d = 0;
        for (const auto& [g, p] : m) d += generator(g).loops * p;
        return d;
    }
    long degree(const HopfElement& x) const {
        long d = 0;
        for (const auto& [m, c] : x.terms()) d = std::max(d, degree(m));
        return d;
    }

    /// Validates grading of every table entry; call once after construction.
    void validate() const {
        for (const auto& [name, g] : gens_) {
            for (const auto& e : g.table) {
                long dg = degree(e.gamma);
                long dq = generator(e.quotient).loops;
                if (dg < 1)
                    fail(errc::bad_character_table, "HopfAlgebra",
                         "subgraph of " + name + " must have positive degree");
                if (dg + dq != g.loops)
                    fail(errc::bad_character_table, "HopfAlgebra",
                         "table of " + name + " is not graded: deg(gamma) + deg(quotient) != deg(graph)");
            }
        }
    }

private:
    std::map<std::string, Generator> gens_;
};

/// Coproduct: Delta(G) = G (x) 1 + 1 (x) G + sum gamma (x) G/gamma over the
/// admissible entries, extended multiplicatively to monomials and linearly.
inline HopfTensor coproduct(const HopfAlgebra& h, const HopfElement& x,
                            const SubgraphRule& rule = accept_all_subgraphs()) {
    HopfTensor out;
    for (const auto& [mono, coeff] : x.terms()) {
        HopfTensor prod = HopfTensor::of(monomial_one(), monomial_one());
        for (const auto& [gname, power] : mono) {
            const Generator& g = h.generator(gname);
            HopfTensor dg = HopfTensor::of(monomial_of(gname), monomial_one()) +
                            HopfTensor::of(monomial_one(), monomial_of(gname));
            for (const auto& e : g.table)
                if (rule(g, e)) dg += HopfTensor::of(e.gamma, monomial_of(e.quotient));
            for (int p = 0; p < power; ++p) prod = prod * dg;
        }
        out += prod.scaled(coeff);
    }
    return out;
}

/// Reduced coproduct: Delta(x) - x (x) 1 - 1 (x) x on generators.
inline HopfTensor reduced_coproduct(const HopfAlgebra& h, const std::string& gname,
                                    const SubgraphRule& rule = accept_all_subgraphs()) {
    const Generator& g = h.generator(gname);
    HopfTensor t;
    for (const auto& e : g.table)
        if (rule(g, e)) t += HopfTensor::of(e.gamma, monomial_of(e.quotient));
    return t;
}

namespace detail {

inline HopfElement antipode_of_generator(const HopfAlgebra& h, const std::string& gname,
                                         const SubgraphRule& rule,
                                         std::map<std::string, HopfElement>& memo);

inline HopfElement antipode_of_monomial(const HopfAlgebra& h, const Monomial& m, const SubgraphRule& rule,
                                        std::map<std::string, HopfElement>& memo) {
    HopfElement acc = HopfElement::unit();
    for (const auto& [g, p] : m)
        for (int i = 0; i < p; ++i) acc = acc * antipode_of_generator(h, g, rule, memo);
    return acc;
}

inline HopfElement antipode_of_generator(const HopfAlgebra& h, const std::string& gname,
                                         const SubgraphRule& rule,
                                         std::map<std::string, HopfElement>& memo) {
    auto it = memo.find(gname);
    if (it != memo.end()) return it->second;
    // S(X) = -X - sum S(X') X'' over the reduced coproduct; this sign makes
    // the antipode axiom hold for Delta(X) = X(x)1 + 1(x)X + sum X'(x)X''.
    HopfElement s = -HopfElement::generator(gname);
    for (const auto& [key, coeff] : reduced_coproduct(h, gname, rule).terms()) {
        HopfElement left = antipode_of_monomial(h, key.first, rule, memo);
        s -= (left * HopfElement::from(key.second)).scaled(coeff);
    }
    memo.emplace(gname, s);
    return s;
}

} // namespace detail

/// Antipode, extended as an algebra morphism (the algebra is commutative).
inline HopfElement antipode(const HopfAlgebra& h, const HopfElement& x,
                            const SubgraphRule& rule = accept_all_subgraphs()) {
    std::map<std::string, HopfElement> memo;
    HopfElement out;
    for (const auto& [m, c] : x.terms())
        out += detail::antipode_of_monomial(h, m, rule, memo).scaled(c);
    return out;
}

} // namespace qmw
