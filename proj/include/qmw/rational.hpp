#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

#include "qmw/error.hpp"

namespace qmw {

using BigInt = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational. All symbolic-side arithmetic in the
/// workbench runs on this type; doubles appear only in the integrator.
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Parses "p", "-p/q" or "p/q" (whitespace-free). Throws on anything else,
/// including q = 0.
inline Rat rat_parse(const std::string& text, const std::string& where = "") {
    auto bad = [&]() -> Rat {
        fail(errc::malformed_document, where, "expected a rational \"p\" or \"p/q\", got \"" + text + "\"");
    };
    if (text.empty()) return bad();
    std::size_t slash = text.find('/');
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!is_int(text)) return bad();
            return Rat(BigInt(text));
        }
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return bad();
        BigInt d(den);
        if (d == 0) fail(errc::malformed_document, where, "zero denominator in \"" + text + "\"");
        return Rat(BigInt(num), d);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        return bad();
    }
}

/// Canonical "p" / "p/q" rendering (q > 0, reduced).
inline std::string rat_str(const Rat& r) {
    BigInt n = rat_num(r), d = rat_den(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

/// r^k for integer k (k < 0 requires r != 0).
inline Rat rat_pow(const Rat& r, long k) {
    if (k == 0) return Rat(1);
    bool inv = k < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    Rat acc(1), base = r;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    if (inv) {
        if (acc == 0) fail(errc::internal, "rat_pow", "negative power of zero");
        acc = Rat(1) / acc;
    }
    return acc;
}

namespace detail {
inline std::optional<BigInt> int_sqrt_exact(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt s = boost::multiprecision::sqrt(n);
    if (s * s == n) return s;
    return std::nullopt;
}
} // namespace detail

/// Exact square root when `r` is a perfect square of a rational.
inline std::optional<Rat> rat_sqrt_exact(const Rat& r) {
    if (r < 0) return std::nullopt;
    auto n = detail::int_sqrt_exact(rat_num(r));
    auto d = detail::int_sqrt_exact(rat_den(r));
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

inline double rat_double(const Rat& r) { return static_cast<double>(r); }

} // namespace qmw
