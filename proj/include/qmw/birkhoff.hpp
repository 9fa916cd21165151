#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/hopf.hpp"
#include "qmw/laurent.hpp"

namespace qmw {

/// Multiplicative character: generator -> Laurent series, extended as an
/// algebra morphism to the whole Hopf algebra. All series share one center.
template <typename K>
struct CharacterMap {
    Rat center = Rat(1);
    std::map<std::string, LaurentSeries<K>> values;

    LaurentSeries<K> unit_series() const { return LaurentSeries<K>::scalar(center, K(1)); }

    const LaurentSeries<K>& at(const std::string& g) const {
        auto it = values.find(g);
        if (it == values.end())
            fail(errc::bad_character_table, "CharacterMap", "no series assigned to generator \"" + g + "\"");
        return it->second;
    }

    LaurentSeries<K> of_monomial(const Monomial& m) const {
        LaurentSeries<K> acc = unit_series();
        for (const auto& [g, p] : m)
            for (int i = 0; i < p; ++i) acc = acc * at(g);
        return acc;
    }

    LaurentSeries<K> of(const HopfElement& x) const {
        LaurentSeries<K> acc(center);
        for (const auto& [m, c] : x.terms())
            acc = acc + of_monomial(m).scaled(detail::coeff_from_rat<K>(c));
        return acc;
    }
};

/// phi-minus / phi-plus tables for every generator of the algebra.
template <typename K>
struct BirkhoffFactors {
    CharacterMap<K> minus;
    CharacterMap<K> plus;
};

namespace detail {

template <typename K>
LaurentSeries<K> birkhoff_minus_of_generator(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                             const std::string& g, const SubgraphRule& rule,
                                             std::map<std::string, LaurentSeries<K>>& memo);

template <typename K>
LaurentSeries<K> birkhoff_minus_of_monomial(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                            const Monomial& m, const SubgraphRule& rule,
                                            std::map<std::string, LaurentSeries<K>>& memo) {
    LaurentSeries<K> acc = phi.unit_series();
    for (const auto& [g, p] : m)
        for (int i = 0; i < p; ++i) acc = acc * birkhoff_minus_of_generator(h, phi, g, rule, memo);
    return acc;
}

/// The preparation R(X) = phi(X) + sum phi_-(X') phi(X'') over the reduced
/// coproduct; then phi_- = -T(R) and phi_+ = (1 - T)(R).
template <typename K>
LaurentSeries<K> birkhoff_preparation(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                      const std::string& g, const SubgraphRule& rule,
                                      std::map<std::string, LaurentSeries<K>>& memo) {
    LaurentSeries<K> r = phi.at(g);
    for (const auto& [key, coeff] : reduced_coproduct(h, g, rule).terms()) {
        LaurentSeries<K> left = birkhoff_minus_of_monomial(h, phi, key.first, rule, memo);
        r = r + (left * phi.of_monomial(key.second)).scaled(detail::coeff_from_rat<K>(coeff));
    }
    return r;
}

template <typename K>
LaurentSeries<K> birkhoff_minus_of_generator(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                             const std::string& g, const SubgraphRule& rule,
                                             std::map<std::string, LaurentSeries<K>>& memo) {
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    LaurentSeries<K> r = birkhoff_preparation(h, phi, g, rule, memo);
    if (r.valid_to() < 0)
        fail(errc::truncation_exceeded, "birkhoff_factorize",
             "series for \"" + g + "\" truncated below order 0; increase the input truncation");
    LaurentSeries<K> minus = -rota_baxter_T(r);
    memo.emplace(g, minus);
    return minus;
}

} // namespace detail

/// Full Birkhoff factorization tables over all generators.
template <typename K>
BirkhoffFactors<K> birkhoff_characters(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                       const SubgraphRule& rule = accept_all_subgraphs()) {
    BirkhoffFactors<K> out;
    out.minus.center = phi.center;
    out.plus.center = phi.center;
    std::map<std::string, LaurentSeries<K>> memo;
    for (const auto& [name, g] : h.generators()) {
        if (!phi.values.count(name)) continue; // characters may cover a sub-universe
        LaurentSeries<K> r = detail::birkhoff_preparation(h, phi, name, rule, memo);
        if (r.valid_to() < 0)
            fail(errc::truncation_exceeded, "birkhoff_factorize",
                 "series for \"" + name + "\" truncated below order 0");
        out.minus.values.emplace(name, -rota_baxter_T(r));
        out.plus.values.emplace(name, r - rota_baxter_T(r));
    }
    return out;
}

/// (phi_-(x), phi_+(x)) for a single element.
template <typename K>
std::pair<LaurentSeries<K>, LaurentSeries<K>> birkhoff_factorize(
    const HopfAlgebra& h, const CharacterMap<K>& phi, const HopfElement& x,
    const SubgraphRule& rule = accept_all_subgraphs()) {
    BirkhoffFactors<K> f = birkhoff_characters(h, phi, rule);
    return {f.minus.of(x), f.plus.of(x)};
}

/// Convolution through the coproduct: (phi1 * phi2)(x) = <phi1 (x) phi2, Delta(x)>.
template <typename K>
LaurentSeries<K> convolution(const HopfAlgebra& h, const CharacterMap<K>& phi1, const CharacterMap<K>& phi2,
                             const HopfElement& x, const SubgraphRule& rule = accept_all_subgraphs()) {
    LaurentSeries<K> acc(phi1.center);
    for (const auto& [key, coeff] : coproduct(h, x, rule).terms())
        acc = acc + (phi1.of_monomial(key.first) * phi2.of_monomial(key.second))
                        .scaled(detail::coeff_from_rat<K>(coeff));
    return acc;
}

/// The character x -> phi(S(x)); for an algebra-morphism phi this is its
/// convolution inverse.
template <typename K>
CharacterMap<K> compose_with_antipode(const HopfAlgebra& h, const CharacterMap<K>& phi,
                                      const SubgraphRule& rule = accept_all_subgraphs()) {
    CharacterMap<K> out;
    out.center = phi.center;
    for (const auto& kv : phi.values)
        out.values.emplace(kv.first, phi.of(antipode(h, HopfElement::generator(kv.first), rule)));
    return out;
}

/// Renormalized value: phi_+(Gamma) evaluated at the expansion center.
template <typename K>
K renormalized_value(const HopfAlgebra& h, const CharacterMap<K>& phi, const std::string& graph,
                     const SubgraphRule& rule = accept_all_subgraphs()) {
    BirkhoffFactors<K> f = birkhoff_characters(h, phi, rule);
    return f.plus.at(graph).at_center();
}

// ---------------------------------------------------------------------------
// File formats: fixture subgraph tables and character tables.
// ---------------------------------------------------------------------------

namespace detail {

inline Monomial parse_monomial(const std::string& text, const std::string& where) {
    Monomial m;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t star = text.find('*', pos);
        std::string g = text.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        if (g.empty()) fail(errc::malformed_document, where, "empty generator name in \"" + text + "\"");
        m[g] += 1;
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    if (m.empty()) fail(errc::malformed_document, where, "empty subgraph monomial");
    return m;
}

} // namespace detail

/// Fixture table format: a list of {"graph": g, "loops"?: int, "subgraphs":
/// [{"gamma": "a" or "a*b", "quotient": q, "gamma_loops"?: int,
/// "gamma_edges"?: int}]}. Generators appearing only inside entries are
/// primitives of degree 1 unless declared with their own record.
inline HopfAlgebra parse_fixture_table(const nlohmann::json& doc) {
    if (!doc.is_array()) fail(errc::malformed_document, "fixtures", "top level must be an array");
    HopfAlgebra h;
    std::set<std::string> mentioned;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        std::string loc = "fixtures[" + std::to_string(i) + "]";
        if (!rec.is_object() || !rec.contains("graph") || !rec["graph"].is_string())
            fail(errc::malformed_document, loc, "record needs a \"graph\" name");
        Generator g;
        g.name = rec["graph"].get<std::string>();
        if (rec.contains("loops")) g.loops = rec["loops"].get<long>();
        if (rec.contains("subgraphs")) {
            if (!rec["subgraphs"].is_array()) fail(errc::malformed_document, loc + ".subgraphs", "must be an array");
            for (const auto& s : rec["subgraphs"]) {
                if (!s.is_object() || !s.contains("gamma") || !s.contains("quotient"))
                    fail(errc::malformed_document, loc + ".subgraphs", "entries need gamma and quotient");
                SubgraphEntry e;
                e.gamma = detail::parse_monomial(s["gamma"].get<std::string>(), loc + ".subgraphs.gamma");
                e.quotient = s["quotient"].get<std::string>();
                if (s.contains("gamma_loops")) e.gamma_loops = s["gamma_loops"].get<long>();
                if (s.contains("gamma_edges")) e.gamma_edges = s["gamma_edges"].get<long>();
                for (const auto& [name, p] : e.gamma) mentioned.insert(name);
                mentioned.insert(e.quotient);
                g.table.push_back(std::move(e));
            }
        }
        h.add_generator(std::move(g));
    }
    for (const auto& name : mentioned)
        if (!h.has(name)) h.add_generator({name, 1, {}}); // undeclared names are primitives
    h.validate();
    return h;
}

/// Character table format: {"center": "p/q", "series": {name: {"pole_order":
/// n, "coeffs": ["p/q", ...]}}}; coefficients start at exponent -pole_order.
inline CharacterMap<Rat> parse_character_table(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("series") || !doc["series"].is_object())
        fail(errc::malformed_document, "characters", "expected {\"center\", \"series\": {...}}");
    CharacterMap<Rat> phi;
    phi.center = doc.contains("center") ? rat_parse(doc["center"].get<std::string>(), "characters.center") : Rat(1);
    for (const auto& [name, rec] : doc["series"].items()) {
        std::string loc = "characters.series." + name;
        if (!rec.is_object() || !rec.contains("pole_order") || !rec.contains("coeffs"))
            fail(errc::malformed_document, loc, "expected {\"pole_order\", \"coeffs\"}");
        int pole = rec["pole_order"].get<int>();
        std::vector<Rat> coeffs;
        for (const auto& c : rec["coeffs"])
            coeffs.push_back(rat_parse(c.get<std::string>(), loc + ".coeffs"));
        if (coeffs.empty()) fail(errc::malformed_document, loc + ".coeffs", "at least one coefficient required");
        phi.values.emplace(name, LaurentSeries<Rat>::from_coeffs(phi.center, pole, std::move(coeffs)));
    }
    return phi;
}

} // namespace qmw
