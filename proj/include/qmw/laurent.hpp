#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmw/error.hpp"
#include "qmw/rational.hpp"

namespace qmw {

inline constexpr int laurent_exact = std::numeric_limits<int>::max() / 4;
inline constexpr int laurent_default_truncation = 8;

namespace detail {
template <typename K>
K coeff_from_rat(const Rat& r) {
    if constexpr (std::is_same_v<K, Rat>) return r;
    else return static_cast<K>(rat_double(r));
}
} // namespace detail

/// Truncated Laurent series in (s - center) over K (exact rationals for the
/// algebraic tests, doubles for numeric characters). Coefficients are stored
/// from the valuation up; `valid_to` is the largest exponent whose
/// coefficient is known, and no operation ever pretends to know more.
template <typename K>
class LaurentSeries {
public:
    LaurentSeries() : center_(0), lo_(0), valid_to_(laurent_exact) {}

    explicit LaurentSeries(Rat center, int valid_to = laurent_exact)
        : center_(std::move(center)), lo_(0), valid_to_(valid_to) {}

    static LaurentSeries scalar(Rat center, K value) {
        LaurentSeries s(std::move(center));
        if (!(value == K(0))) {
            s.lo_ = 0;
            s.c_ = {std::move(value)};
        }
        return s;
    }

    /// Series from coefficients starting at exponent -pole_order; the last
    /// given coefficient marks the truncation order.
    static LaurentSeries from_coeffs(Rat center, int pole_order, std::vector<K> coeffs) {
        LaurentSeries s(std::move(center));
        s.lo_ = -pole_order;
        s.c_ = std::move(coeffs);
        s.valid_to_ = s.lo_ + static_cast<int>(s.c_.size()) - 1;
        s.normalize();
        return s;
    }

    /// Single monomial a * (s-c)^k, known exactly.
    static LaurentSeries monomial(Rat center, int k, K a) {
        LaurentSeries s(std::move(center));
        if (!(a == K(0))) {
            s.lo_ = k;
            s.c_ = {std::move(a)};
        }
        return s;
    }

    const Rat& center() const { return center_; }
    int valid_to() const { return valid_to_; }
    bool exact() const { return valid_to_ >= laurent_exact; }

    bool stored_zero() const { return c_.empty(); }

    /// Lowest exponent with a (known) nonzero coefficient; for a series with
    /// no known nonzero coefficient this is valid_to + 1, i.e. the first
    /// exponent that could be nonzero.
    int valuation() const {
        if (!c_.empty()) return lo_;
        return exact() ? laurent_exact : valid_to_ + 1;
    }

    /// Known coefficient at exponent k; throws if k is beyond the truncation.
    K coeff(int k) const {
        if (k > valid_to_)
            fail(errc::truncation_exceeded, "LaurentSeries::coeff",
                 "coefficient at order " + std::to_string(k) + " exceeds truncation " +
                     std::to_string(valid_to_));
        if (k < lo_ || k >= lo_ + static_cast<int>(c_.size())) return K(0);
        return c_[static_cast<std::size_t>(k - lo_)];
    }

    int pole_order() const {
        int v = valuation();
        return v < 0 ? -v : 0;
    }
    bool has_pole() const { return pole_order() > 0; }

    LaurentSeries operator-() const {
        LaurentSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        a.check_center(b);
        LaurentSeries r(a.center_, std::min(a.valid_to_, b.valid_to_));
        if (a.c_.empty() && b.c_.empty()) return r;
        int lo = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
        int hi_store = std::max(a.lo_ + static_cast<int>(a.c_.size()), b.lo_ + static_cast<int>(b.c_.size()));
        int hi = std::min(hi_store - 1, r.valid_to_);
        if (hi < lo) return r;
        r.lo_ = lo;
        r.c_.assign(static_cast<std::size_t>(hi - lo + 1), K(0));
        for (int k = lo; k <= hi; ++k) r.c_[static_cast<std::size_t>(k - lo)] = a.at(k) + b.at(k);
        r.normalize();
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        a.check_center(b);
        int valid = std::min(sat_add(a.valid_to_, b.valuation()), sat_add(b.valid_to_, a.valuation()));
        LaurentSeries r(a.center_, std::min(valid, laurent_exact));
        if (a.c_.empty() || b.c_.empty()) return r;
        int lo = a.lo_ + b.lo_;
        int hi = std::min(lo + static_cast<int>(a.c_.size() + b.c_.size()) - 2, r.valid_to_);
        if (hi < lo) return r;
        r.lo_ = lo;
        r.c_.assign(static_cast<std::size_t>(hi - lo + 1), K(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == K(0)) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                int k = a.lo_ + static_cast<int>(i) + b.lo_ + static_cast<int>(j);
                if (k > hi) break;
                r.c_[static_cast<std::size_t>(k - lo)] += a.c_[i] * b.c_[j];
            }
        }
        r.normalize();
        return r;
    }

    LaurentSeries scaled(const K& s) const {
        LaurentSeries r = *this;
        if (s == K(0)) {
            r.c_.clear();
            r.lo_ = 0;
            return r;
        }
        for (auto& x : r.c_) x = x * s;
        r.normalize();
        return r;
    }

    /// Multiplicative inverse; requires a known leading coefficient.
    LaurentSeries inverse() const {
        if (c_.empty())
            fail(errc::truncation_exceeded, "LaurentSeries::inverse",
                 "no known nonzero coefficient to invert");
        int v = lo_;
        if (c_.size() == 1 && exact()) return monomial(center_, -v, K(1) / c_[0]);
        int order = valid_to_ >= laurent_exact ? laurent_default_truncation + pole_order()
                                               : valid_to_ - v; // known coefficients of f past the valuation
        LaurentSeries r(center_);
        r.valid_to_ = exact() ? sat_add(-v, order) : valid_to_ - 2 * v;
        r.lo_ = -v;
        r.c_.assign(static_cast<std::size_t>(order) + 1, K(0));
        K lead = c_[0];
        r.c_[0] = K(1) / lead;
        for (int k = 1; k <= order; ++k) {
            K acc = K(0);
            for (int i = 1; i <= k; ++i) acc = acc + at(v + i) * r.c_[static_cast<std::size_t>(k - i)];
            r.c_[static_cast<std::size_t>(k)] = -(acc / lead);
        }
        r.normalize();
        return r;
    }

    /// Polar projection: keeps exactly the negative exponents. The result is
    /// exact (everything below the stored range is zero by representation).
    LaurentSeries pole_part() const {
        if (valid_to_ < -1)
            fail(errc::truncation_exceeded, "LaurentSeries::pole_part",
                 "series truncated inside its polar part");
        LaurentSeries r(center_);
        if (lo_ >= 0 || c_.empty()) return r;
        r.lo_ = lo_;
        r.c_.assign(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), static_cast<std::size_t>(-lo_)));
        r.normalize();
        return r;
    }

    LaurentSeries regular_part() const { return *this - pole_part(); }

    /// Value at the center; requires no pole and a known constant term.
    K at_center() const {
        if (has_pole())
            fail(errc::out_of_half_plane, "LaurentSeries::at_center", "series has a pole at the center");
        return coeff(0);
    }

    /// Equality of all coefficients over the common known range. Beyond the
    /// stored ranges exact series are identically zero, so the scan stops at
    /// the last stored exponent.
    friend bool equal_to_truncation(const LaurentSeries& a, const LaurentSeries& b) {
        a.check_center(b);
        int stored_top =
            std::max(a.lo_ + static_cast<int>(a.c_.size()), b.lo_ + static_cast<int>(b.c_.size())) - 1;
        int hi = std::min({a.valid_to_, b.valid_to_, stored_top});
        int lo = std::min(a.c_.empty() ? 0 : a.lo_, b.c_.empty() ? 0 : b.lo_);
        for (int k = lo; k <= hi; ++k)
            if (!(a.at(k) == b.at(k))) return false;
        return true;
    }

    std::string str(const std::string& var = "s") const {
        std::string x = "(" + var + (center_ == 0 ? "" : "-" + rat_str(center_)) + ")";
        std::string out;
        for (int k = lo_; k < lo_ + static_cast<int>(c_.size()); ++k) {
            K c = at(k);
            if (c == K(0)) continue;
            std::string term = coeff_str(c);
            if (k != 0) term += "*" + x + "^" + std::to_string(k);
            out += (out.empty() ? "" : " + ") + term;
        }
        if (out.empty()) out = "0";
        if (!exact()) out += " + O(" + x + "^" + std::to_string(valid_to_ + 1) + ")";
        return out;
    }

private:
    static int sat_add(int a, int b) {
        if (a >= laurent_exact || b >= laurent_exact) return laurent_exact; // infinity absorbs
        long s = static_cast<long>(a) + static_cast<long>(b);
        if (s >= laurent_exact) return laurent_exact;
        return static_cast<int>(s);
    }
    static std::string coeff_str(const K& c) {
        if constexpr (std::is_same_v<K, Rat>) return rat_str(c);
        else return std::to_string(c);
    }

    K at(int k) const {
        if (k < lo_ || k >= lo_ + static_cast<int>(c_.size())) return K(0);
        return c_[static_cast<std::size_t>(k - lo_)];
    }

    void check_center(const LaurentSeries& o) const {
        if (center_ != o.center_)
            fail(errc::bad_character_table, "LaurentSeries", "mixed expansion centers");
    }

    void normalize() {
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead] == K(0)) ++lead;
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            lo_ += static_cast<int>(lead);
        }
        while (!c_.empty() && c_.back() == K(0)) c_.pop_back();
        if (c_.empty()) lo_ = 0;
    }

    Rat center_;
    int lo_ = 0;
    std::vector<K> c_;
    int valid_to_ = laurent_exact;
};

/// The Rota-Baxter operator of weight -1: projection onto the polar part.
template <typename K>
LaurentSeries<K> rota_baxter_T(const LaurentSeries<K>& f) {
    return f.pole_part();
}

template <typename K>
nlohmann::json laurent_to_json(const LaurentSeries<K>& s) {
    nlohmann::json j;
    j["center"] = rat_str(s.center());
    int p = s.pole_order();
    j["pole_order"] = p;
    nlohmann::json coeffs = nlohmann::json::array();
    int hi;
    if (s.exact()) { // dump up to the highest nonzero coefficient
        hi = -p;
        for (int k = -p; k <= laurent_default_truncation + 4; ++k)
            if (!(s.coeff(k) == K(0))) hi = k;
    } else {
        hi = s.valid_to();
    }
    for (int k = -p; k <= hi; ++k) {
        if constexpr (std::is_same_v<K, Rat>) coeffs.push_back(rat_str(s.coeff(k)));
        else coeffs.push_back(s.coeff(k));
    }
    j["coeffs"] = std::move(coeffs);
    if (!s.exact()) j["truncation"] = s.valid_to();
    return j;
}

} // namespace qmw
