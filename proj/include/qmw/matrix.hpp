#pragma once

#include <cstddef>
#include <vector>

#include "qmw/error.hpp"
#include "qmw/rational.hpp"

namespace qmw {

using RatVec = std::vector<Rat>;

/// Dense matrix over exact rationals. Sizes here are tiny (a few dozen rows
/// at most), so the implementation favours clarity over blocking tricks.
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols, Rat fill = Rat(0))
        : rows_(rows), cols_(cols), a_(rows * cols, std::move(fill)) {}

    static RatMat identity(std::size_t n) {
        RatMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend bool operator==(const RatMat& x, const RatMat& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    RatMat transpose() const {
        RatMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend RatMat operator*(const RatMat& x, const RatMat& y) {
        if (x.cols_ != y.rows_) fail(errc::dimension_mismatch, "RatMat::mul", "inner sizes differ");
        RatMat r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }

    friend RatMat operator+(const RatMat& x, const RatMat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            fail(errc::dimension_mismatch, "RatMat::add", "shapes differ");
        RatMat r = x;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
        return r;
    }
    friend RatMat operator-(const RatMat& x, const RatMat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            fail(errc::dimension_mismatch, "RatMat::sub", "shapes differ");
        RatMat r = x;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }
    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    RatVec apply(const RatVec& v) const {
        if (v.size() != cols_) fail(errc::dimension_mismatch, "RatMat::apply", "vector length differs");
        RatVec r(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Determinant by fraction-free Gaussian elimination (Bareiss). Primary
/// route for all certificate evaluations.
inline Rat det_bareiss(RatMat m) {
    if (m.rows() != m.cols()) fail(errc::dimension_mismatch, "det_bareiss", "matrix not square");
    std::size_t n = m.rows();
    if (n == 0) return Rat(1);
    Rat sign(1);
    Rat prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return Rat(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// Independent determinant route: Laplace cofactor expansion along the first
/// row. Exponential, reserved for cross-checking certificates (n <= 6 or so).
inline Rat det_cofactor(const RatMat& m) {
    if (m.rows() != m.cols()) fail(errc::dimension_mismatch, "det_cofactor", "matrix not square");
    std::size_t n = m.rows();
    if (n == 0) return Rat(1);
    if (n == 1) return m(0, 0);
    Rat acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        RatMat minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(i - 1, cc++) = m(i, c);
            }
        }
        Rat term = m(0, j) * det_cofactor(minor);
        if (j % 2) acc -= term;
        else acc += term;
    }
    return acc;
}

/// Rank over the rationals, by exact Gaussian elimination.
inline std::size_t rank_rational(RatMat m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

/// Leading principal minors det(A[0..k][0..k]), k = 0..n-1.
inline std::vector<Rat> leading_principal_minors(const RatMat& m) {
    if (m.rows() != m.cols()) fail(errc::dimension_mismatch, "leading_principal_minors", "matrix not square");
    std::vector<Rat> out;
    out.reserve(m.rows());
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        RatMat sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(i, j);
        out.push_back(det_bareiss(sub));
    }
    return out;
}

/// Sylvester criterion: a symmetric matrix is positive-definite iff all
/// leading principal minors are > 0. Exact, no eigenvalues needed.
inline bool sylvester_positive_definite(const RatMat& m) {
    if (!m.is_symmetric()) return false;
    for (const Rat& d : leading_principal_minors(m))
        if (d <= 0) return false;
    return true;
}

} // namespace qmw
