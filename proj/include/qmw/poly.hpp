#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qmw/rational.hpp"

namespace qmw {

/// Dense univariate polynomial over Rat. Used for the deformation parameter:
/// net entries are kept symbolic in eps so the eps -> 0 limit is a literal
/// substitution, not a float limit.
class Poly {
public:
    Poly() = default;
    /*implicit*/ Poly(Rat constant) {
        if (constant != 0) c_ = {std::move(constant)};
    }
    /*implicit*/ Poly(long constant) : Poly(Rat(constant)) {}

    static Poly variable(long power = 1, Rat coeff = Rat(1)) {
        Poly p;
        if (coeff == 0 || power < 0) return p;
        p.c_.assign(static_cast<std::size_t>(power) + 1, Rat(0));
        p.c_.back() = std::move(coeff);
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return c_.empty() ? -1 : static_cast<long>(c_.size()) - 1; }

    const Rat& coeff(std::size_t k) const {
        static const Rat zero(0);
        return k < c_.size() ? c_[k] : zero;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Rat eval(const Rat& x) const {
        Rat v(0);
        for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
        return v;
    }

    /// Constant term == value at 0; the deformation's eps -> 0 limit.
    Rat at_zero() const { return coeff(0); }

    std::string str(const std::string& var = "e") const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            std::string term;
            if (i == 0) {
                term = rat_str(c_[i]);
            } else {
                if (c_[i] == 1) term = "";
                else if (c_[i] == -1) term = "-";
                else term = rat_str(c_[i]) + "*";
                term += var;
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (out.empty()) out = term;
            else if (!term.empty() && term[0] == '-') out += " - " + term.substr(1);
            else out += " + " + term;
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_; // c_[k] multiplies x^k
};

} // namespace qmw
