#include <catch2/catch_amalgamated.hpp>

#include "qmw/birkhoff.hpp"
#include "qmw/hopf.hpp"

using namespace qmw;

using LS = LaurentSeries<Rat>;

namespace {

/// Fixture universe of degree <= 3:
///   p1, p2, p3           primitives
///   g2   = one-subgraph graph:      Delta~ = p1 (x) p2
///   g2q  = quotient-side degree 2:  Delta~ = p2 (x) p3
///   g2r  =                          Delta~ = p1 (x) p3
///   g3   = nested chain:            Delta~ = p1 (x) g2q + g2 (x) p3
///   w3   = disjoint subdivergences: Delta~ = p1 (x) g2q + p2 (x) g2r + p1*p2 (x) p3
HopfAlgebra fixture_algebra() {
    HopfAlgebra h;
    h.add_generator({"p1", 1, {}});
    h.add_generator({"p2", 1, {}});
    h.add_generator({"p3", 1, {}});
    h.add_generator({"g2", 2, {{monomial_of("p1"), "p2", {}, {}}}});
    h.add_generator({"g2q", 2, {{monomial_of("p2"), "p3", {}, {}}}});
    h.add_generator({"g2r", 2, {{monomial_of("p1"), "p3", {}, {}}}});
    h.add_generator({"g3", 3, {{monomial_of("p1"), "g2q", {}, {}}, {monomial_of("g2"), "p3", {}, {}}}});
    h.add_generator({"w3",
                     3,
                     {{monomial_of("p1"), "g2q", {}, {}},
                      {monomial_of("p2"), "g2r", {}, {}},
                      {monomial_mul(monomial_of("p1"), monomial_of("p2")), "p3", {}, {}}}});
    h.validate();
    return h;
}

/// Tensor cube with plain map arithmetic, for coassociativity.
using Key3 = std::array<Monomial, 3>;
using Tensor3 = std::map<Key3, Rat>;

Tensor3 apply_left(const HopfAlgebra& h, const HopfTensor& t) {
    Tensor3 out;
    for (const auto& [key, c] : t.terms()) {
        HopfTensor left = coproduct(h, HopfElement::from(key.first));
        for (const auto& [lk, lc] : left.terms()) {
            Key3 k{lk.first, lk.second, key.second};
            Rat v = lc * c;
            if ((out[k] += v) == 0) out.erase(k);
        }
    }
    return out;
}

Tensor3 apply_right(const HopfAlgebra& h, const HopfTensor& t) {
    Tensor3 out;
    for (const auto& [key, c] : t.terms()) {
        HopfTensor right = coproduct(h, HopfElement::from(key.second));
        for (const auto& [rk, rc] : right.terms()) {
            Key3 k{key.first, rk.first, rk.second};
            Rat v = rc * c;
            if ((out[k] += v) == 0) out.erase(k);
        }
    }
    return out;
}

/// m (S (x) id) Delta or m (id (x) S) Delta.
HopfElement antipode_convolve(const HopfAlgebra& h, const HopfElement& x, bool s_left) {
    HopfElement acc;
    for (const auto& [key, c] : coproduct(h, x).terms()) {
        HopfElement left = HopfElement::from(key.first);
        HopfElement right = HopfElement::from(key.second);
        HopfElement prod = s_left ? antipode(h, left) * right : left * antipode(h, right);
        acc += prod.scaled(c);
    }
    return acc;
}

CharacterMap<Rat> demo_character(const HopfAlgebra&) {
    CharacterMap<Rat> phi;
    phi.center = Rat(1);
    int trunc = 8;
    auto series = [&](int pole, std::vector<Rat> lead) {
        std::vector<Rat> coeffs = std::move(lead);
        coeffs.resize(static_cast<std::size_t>(trunc + pole + 1), Rat(0));
        return LS::from_coeffs(Rat(1), pole, std::move(coeffs));
    };
    phi.values.emplace("p1", series(1, {Rat(1), Rat(2)}));
    phi.values.emplace("p2", series(1, {Rat(1), Rat(-1), Rat(3)}));
    phi.values.emplace("p3", series(1, {Rat(2), Rat(1)}));
    phi.values.emplace("g2", series(2, {Rat(1), Rat(1)}));
    phi.values.emplace("g2q", series(2, {Rat(3), Rat(0), Rat(1)}));
    phi.values.emplace("g2r", series(2, {Rat(1), Rat(5)}));
    phi.values.emplace("g3", series(3, {Rat(1), Rat(1), Rat(2)}));
    phi.values.emplace("w3", series(3, {Rat(2), Rat(0), Rat(0), Rat(1)}));
    return phi;
}

} // namespace

TEST_CASE("coproduct of a primitive and of products") {
    HopfAlgebra h = fixture_algebra();
    HopfTensor dp = coproduct(h, HopfElement::generator("p1"));
    HopfTensor expected = HopfTensor::of(monomial_of("p1"), monomial_one()) +
                          HopfTensor::of(monomial_one(), monomial_of("p1"));
    CHECK(dp == expected);

    // multiplicativity on a product of two primitives
    HopfElement prod = HopfElement::generator("p1") * HopfElement::generator("p2");
    HopfTensor dprod = coproduct(h, prod);
    HopfTensor manual = coproduct(h, HopfElement::generator("p1")) * coproduct(h, HopfElement::generator("p2"));
    CHECK(dprod == manual);
    CHECK(dprod.terms().size() == 4);
}

TEST_CASE("coproduct with one admissible subgraph") {
    HopfAlgebra h = fixture_algebra();
    HopfTensor d = coproduct(h, HopfElement::generator("g2"));
    HopfTensor expected = HopfTensor::of(monomial_of("g2"), monomial_one()) +
                          HopfTensor::of(monomial_one(), monomial_of("g2")) +
                          HopfTensor::of(monomial_of("p1"), monomial_of("p2"));
    CHECK(d == expected);
}

TEST_CASE("subgraph rules filter the coproduct") {
    HopfAlgebra h;
    h.add_generator({"p", 1, {}});
    h.add_generator({"q", 1, {}});
    // gamma metadata: 1 loop, 2 edges -> delta = D - 4 at alpha = 1
    h.add_generator({"big", 2, {{monomial_of("p"), "q", 1, 2}}});
    h.validate();
    HopfElement big = HopfElement::generator("big");
    CHECK(coproduct(h, big, divergent_subgraphs(4)).terms().size() == 3);  // delta = 0: kept
    CHECK(coproduct(h, big, divergent_subgraphs(3)).terms().size() == 2);  // delta < 0: dropped
}

TEST_CASE("coassociativity on all fixtures of degree <= 3") {
    HopfAlgebra h = fixture_algebra();
    std::vector<HopfElement> elements;
    for (const auto& [name, g] : h.generators()) elements.push_back(HopfElement::generator(name));
    elements.push_back(HopfElement::generator("p1") * HopfElement::generator("g2"));
    elements.push_back(HopfElement::generator("p1") * HopfElement::generator("p2"));
    for (const auto& x : elements) {
        HopfTensor d = coproduct(h, x);
        CHECK(apply_left(h, d) == apply_right(h, d));
    }
}

TEST_CASE("counit laws") {
    HopfAlgebra h = fixture_algebra();
    for (const auto& [name, g] : h.generators()) {
        HopfElement x = HopfElement::generator(name);
        // (counit (x) id) Delta = id
        HopfElement left, right;
        for (const auto& [key, c] : coproduct(h, x).terms()) {
            left += HopfElement::from(key.second).scaled(c * HopfElement::from(key.first).counit());
            right += HopfElement::from(key.first).scaled(c * HopfElement::from(key.second).counit());
        }
        CHECK(left == x);
        CHECK(right == x);
    }
}

TEST_CASE("antipode on fixtures") {
    HopfAlgebra h = fixture_algebra();
    CHECK(antipode(h, HopfElement::unit()) == HopfElement::unit());
    CHECK(antipode(h, HopfElement::generator("p1")) == -HopfElement::generator("p1"));
    // one-subgraph fixture: S(g2) = -g2 + p1 * p2
    HopfElement s = antipode(h, HopfElement::generator("g2"));
    HopfElement expected = -HopfElement::generator("g2") +
                           HopfElement::generator("p1") * HopfElement::generator("p2");
    CHECK(s == expected);
}

TEST_CASE("antipode axiom m(S x id)Delta = unit counit on degree <= 3") {
    HopfAlgebra h = fixture_algebra();
    std::vector<HopfElement> elements;
    for (const auto& [name, g] : h.generators()) elements.push_back(HopfElement::generator(name));
    elements.push_back(HopfElement::generator("p1") * HopfElement::generator("g2q"));
    elements.push_back(HopfElement::generator("p1") * HopfElement::generator("p1"));
    for (const auto& x : elements) {
        CHECK(antipode_convolve(h, x, true) == HopfElement::zero());
        CHECK(antipode_convolve(h, x, false) == HopfElement::zero());
    }
    CHECK(antipode_convolve(h, HopfElement::unit(), true) == HopfElement::unit());
}

TEST_CASE("grading sanity and table validation") {
    HopfAlgebra h = fixture_algebra();
    CHECK(h.degree(HopfElement::generator("g3")) == 3);
    CHECK(h.degree(HopfElement::generator("p1") * HopfElement::generator("g2")) == 3);
    HopfAlgebra bad;
    bad.add_generator({"p", 1, {}});
    bad.add_generator({"x", 3, {{monomial_of("p"), "p", {}, {}}}}); // 1 + 1 != 3
    CHECK_THROWS_MATCHES(bad.validate(), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::bad_character_table;
                         }));
}

TEST_CASE("Birkhoff: minimal subtraction on primitives") {
    HopfAlgebra h = fixture_algebra();
    CharacterMap<Rat> phi;
    phi.center = Rat(1);
    phi.values.emplace("p1", LS::from_coeffs(Rat(1), 1, {Rat(3), Rat(5), Rat(0), Rat(0)})); // 3/(s-1) + 5
    auto [minus, plus] = birkhoff_factorize(h, phi, HopfElement::generator("p1"));
    CHECK(minus.pole_order() == 1);
    CHECK(minus.coeff(-1) == -3);
    CHECK(minus.coeff(0) == 0);
    CHECK(plus.coeff(0) == 5);
    CHECK_FALSE(plus.has_pole());

    // regular character: phi_- = 0, phi_+ = phi
    CharacterMap<Rat> reg;
    reg.center = Rat(1);
    reg.values.emplace("p1", LS::from_coeffs(Rat(1), 0, {Rat(7), Rat(1)}));
    auto [m2, p2] = birkhoff_factorize(h, reg, HopfElement::generator("p1"));
    CHECK(m2.stored_zero());
    CHECK(equal_to_truncation(p2, reg.values.at("p1")));
}

TEST_CASE("Birkhoff: designed subdivergence cancellation") {
    // phi(p1) = 1/(s-1), phi(g2) = 1/(s-1)^2, phi(p2) = 1/(s-1):
    // phi_-(g2) = -T(1/(s-1)^2 - 1/(s-1) * 1/(s-1)) = 0, phi_+(g2) = 0.
    HopfAlgebra h = fixture_algebra();
    CharacterMap<Rat> phi;
    phi.center = Rat(1);
    auto pole = [](int order) {
        std::vector<Rat> c(static_cast<std::size_t>(order) + 9, Rat(0));
        c[0] = 1;
        return LS::from_coeffs(Rat(1), order, std::move(c));
    };
    phi.values.emplace("p1", pole(1));
    phi.values.emplace("p2", pole(1));
    phi.values.emplace("g2", pole(2));
    auto [minus, plus] = birkhoff_factorize(h, phi, HopfElement::generator("g2"));
    CHECK(minus.stored_zero());
    CHECK(plus.stored_zero()); // to the computed order
    CHECK(renormalized_value(h, phi, "g2") == 0);
}

TEST_CASE("Birkhoff contract on the whole fixture table") {
    HopfAlgebra h = fixture_algebra();
    CharacterMap<Rat> phi = demo_character(h);
    BirkhoffFactors<Rat> f = birkhoff_characters(h, phi);
    for (const auto& [name, series] : phi.values) {
        // phi_- is a pure polar part, phi_+ regular at the center
        CHECK(f.minus.at(name).regular_part().stored_zero());
        CHECK_FALSE(f.plus.at(name).has_pole());
    }
    // factorization identity phi = (phi_- o S) * phi_+ on every generator
    CharacterMap<Rat> minus_s = compose_with_antipode(h, f.minus);
    for (const auto& [name, series] : phi.values) {
        LS conv = convolution(h, minus_s, f.plus, HopfElement::generator(name));
        CHECK(equal_to_truncation(conv, series));
    }
    // and on a product element
    HopfElement prod = HopfElement::generator("p1") * HopfElement::generator("g2");
    CHECK(equal_to_truncation(convolution(h, minus_s, f.plus, prod), phi.of(prod)));
}

TEST_CASE("convolution unit and associativity") {
    HopfAlgebra h = fixture_algebra();
    CharacterMap<Rat> phi = demo_character(h);
    CharacterMap<Rat> unit;
    unit.center = Rat(1);
    for (const auto& [name, s] : phi.values)
        unit.values.emplace(name, LS::scalar(Rat(1), Rat(0))); // vanishes on generators
    for (const auto& [name, s] : phi.values) {
        LS conv = convolution(h, unit, phi, HopfElement::generator(name));
        CHECK(equal_to_truncation(conv, s));
        LS conv2 = convolution(h, phi, unit, HopfElement::generator(name));
        CHECK(equal_to_truncation(conv2, s));
    }

    // associativity on three random characters at truncation 6
    unsigned state = 11;
    auto random_char = [&]() {
        CharacterMap<Rat> c;
        c.center = Rat(1);
        auto next = [&state]() {
            state = state * 1664525u + 1013904223u;
            return static_cast<long>((state >> 16) % 9) - 4;
        };
        for (const auto& [name, s] : phi.values) {
            std::vector<Rat> coeffs;
            for (int k = -1; k <= 6; ++k) coeffs.push_back(Rat(next()));
            c.values.emplace(name, LS::from_coeffs(Rat(1), 1, std::move(coeffs)));
        }
        return c;
    };
    CharacterMap<Rat> a = random_char(), b = random_char(), c = random_char();
    for (const std::string name : {"g2", "g3", "w3"}) {
        HopfElement x = HopfElement::generator(name);
        // ((a * b) * c)(x) via the tensor cube equals (a * (b * c))(x)
        LS left(Rat(1)), right(Rat(1));
        for (const auto& [key, coeff] : coproduct(h, x).terms()) {
            left = left + (convolution(h, a, b, HopfElement::from(key.first)) * c.of_monomial(key.second))
                              .scaled(coeff);
            right = right + (a.of_monomial(key.first) * convolution(h, b, c, HopfElement::from(key.second)))
                                .scaled(coeff);
        }
        CHECK(equal_to_truncation(left, right));
    }
}

TEST_CASE("truncation exhaustion surfaces as an error") {
    HopfAlgebra h = fixture_algebra();
    CharacterMap<Rat> phi;
    phi.center = Rat(1);
    // g2's preparation needs p1 * p2 products at order 0; a bare pole with no
    // known regular part cannot provide them
    phi.values.emplace("p1", LS::from_coeffs(Rat(1), 1, {Rat(1)}));
    phi.values.emplace("p2", LS::from_coeffs(Rat(1), 1, {Rat(1)}));
    phi.values.emplace("g2", LS::from_coeffs(Rat(1), 2, {Rat(1), Rat(0), Rat(0)}));
    CHECK_THROWS_MATCHES(birkhoff_factorize(h, phi, HopfElement::generator("g2")), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::truncation_exceeded;
                         }));
}

TEST_CASE("fixture and character table parsing") {
    nlohmann::json fixtures = nlohmann::json::parse(R"([
      {"graph": "a"},
      {"graph": "b"},
      {"graph": "big", "subgraphs": [{"gamma": "a*b", "quotient": "c"}], "loops": 3}
    ])");
    HopfAlgebra h = parse_fixture_table(fixtures);
    CHECK(h.has("c")); // auto-declared primitive
    CHECK(h.generator("big").loops == 3);
    REQUIRE(h.generator("big").table.size() == 1);
    CHECK(h.degree(h.generator("big").table[0].gamma) == 2);

    nlohmann::json chars = nlohmann::json::parse(R"({
      "center": "1",
      "series": {"a": {"pole_order": 1, "coeffs": ["1", "1/2", "0"]}}
    })");
    CharacterMap<Rat> phi = parse_character_table(chars);
    CHECK(phi.at("a").coeff(-1) == 1);
    CHECK(phi.at("a").coeff(0) == Rat(1, 2));
    CHECK(phi.at("a").valid_to() == 1);

    CHECK_THROWS_AS(parse_fixture_table(nlohmann::json::parse("{}")), Error);
    CHECK_THROWS_AS(parse_character_table(nlohmann::json::parse("[]")), Error);
}
