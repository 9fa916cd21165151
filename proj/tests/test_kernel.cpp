#include <catch2/catch_amalgamated.hpp>

#include "qmw/matrix.hpp"
#include "qmw/poly.hpp"
#include "qmw/rational.hpp"

using namespace qmw;

TEST_CASE("rational parsing and formatting") {
    CHECK(rat_parse("3/4") == Rat(3, 4));
    CHECK(rat_parse("-7") == Rat(-7));
    CHECK(rat_str(Rat(6, 4)) == "3/2");
    CHECK(rat_str(Rat(-6, 4)) == "-3/2");
    CHECK(rat_str(Rat(5)) == "5");
    CHECK_THROWS_AS(rat_parse("1/0"), Error);
    CHECK_THROWS_AS(rat_parse("a/2"), Error);
    CHECK_THROWS_AS(rat_parse(""), Error);
    CHECK_THROWS_AS(rat_parse("1.5"), Error);
}

TEST_CASE("rational powers and exact square roots") {
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(2), -2) == Rat(1, 4));
    CHECK(rat_pow(Rat(5), 0) == Rat(1));
    CHECK(rat_sqrt_exact(Rat(9, 4)) == Rat(3, 2));
    CHECK(rat_sqrt_exact(Rat(2)) == std::nullopt);
    CHECK(rat_sqrt_exact(Rat(-1)) == std::nullopt);
    CHECK(rat_sqrt_exact(Rat(0)) == Rat(0));
}

TEST_CASE("polynomials in the deformation parameter") {
    Poly e = Poly::variable(1);
    Poly p = (Poly(1) + e) * (Poly(1) + e); // (1+e)^2
    CHECK(p.coeff(0) == 1);
    CHECK(p.coeff(1) == 2);
    CHECK(p.coeff(2) == 1);
    CHECK(p.eval(Rat(1, 2)) == Rat(9, 4));
    CHECK(p.at_zero() == 1);
    CHECK((p - p).is_zero());
    CHECK(Poly::variable(3).eval(Rat(1, 2)) == Rat(1, 8));
    CHECK(p.str() == "1 + 2*e + e^2");
}

namespace {
RatMat random_matrix(std::size_t n, unsigned& state) {
    auto next = [&state]() {
        state = state * 1664525u + 1013904223u;
        return static_cast<long>((state >> 16) % 19) - 9;
    };
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(next(), 1 + (next() & 3));
    return m;
}
} // namespace

TEST_CASE("Bareiss and cofactor determinants agree bit for bit") {
    unsigned state = 12345;
    for (std::size_t n = 1; n <= 5; ++n)
        for (int rep = 0; rep < 40; ++rep) {
            RatMat m = random_matrix(n, state);
            CHECK(det_bareiss(m) == det_cofactor(m));
        }
}

TEST_CASE("determinant handles pivoting and singularity") {
    RatMat m(3, 3);
    // first pivot zero, needs a swap
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(2, 2) = 1;
    CHECK(det_bareiss(m) == Rat(-1));
    CHECK(det_cofactor(m) == Rat(-1));

    RatMat s(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s(i, j) = Rat(static_cast<long>(i + j));
    CHECK(det_bareiss(s) == 0); // rank 2
    CHECK(rank_rational(s) == 2);
}

TEST_CASE("Sylvester positive-definiteness") {
    RatMat pd(3, 3);
    pd(0, 0) = 4;
    pd(1, 1) = 1;
    pd(2, 2) = Rat(1, 9);
    pd(0, 1) = pd(1, 0) = 1; // still PD: minors 4, 3, 3/9
    CHECK(sylvester_positive_definite(pd));
    auto minors = leading_principal_minors(pd);
    REQUIRE(minors.size() == 3);
    CHECK(minors[0] == 4);
    CHECK(minors[1] == 3);
    CHECK(minors[2] == Rat(3, 9));

    RatMat psd(2, 2); // diag(1, 0): semidefinite, not definite
    psd(0, 0) = 1;
    CHECK_FALSE(sylvester_positive_definite(psd));

    RatMat indef(2, 2);
    indef(0, 0) = 1;
    indef(1, 1) = -1;
    CHECK_FALSE(sylvester_positive_definite(indef));
}

TEST_CASE("rank over the rationals") {
    RatMat inc(2, 3); // sunset incidence
    for (std::size_t j = 0; j < 3; ++j) {
        inc(0, j) = 1;
        inc(1, j) = -1;
    }
    CHECK(rank_rational(inc) == 1);
    CHECK(rank_rational(RatMat::identity(4)) == 4);
    CHECK(rank_rational(RatMat(3, 3)) == 0);
}
