// Dense exact linear algebra over Q, used for kernels, dual bases and the
// sharp projection of the Lie superalgebra module.
#pragma once

#include <vector>

#include "pvsa/scalar.hpp"

namespace pvsa {

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols, Rational(0)) {}

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    Rational& at(size_t i, size_t j) { return a_[i * c_ + j]; }
    const Rational& at(size_t i, size_t j) const { return a_[i * c_ + j]; }

    static QMatrix identity(size_t n) {
        QMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    QMatrix transposed() const {
        QMatrix t(c_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
        QMatrix m(x.r_, y.c_);
        for (size_t i = 0; i < x.r_; ++i)
            for (size_t k = 0; k < x.c_; ++k) {
                if (x.at(i, k) == 0) continue;
                for (size_t j = 0; j < y.c_; ++j) m.at(i, j) += x.at(i, k) * y.at(k, j);
            }
        return m;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        std::vector<Rational> out(r_, Rational(0));
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j)
                if (at(i, j) != 0) out[i] += at(i, j) * v[j];
        return out;
    }

    // Row-reduce in place; returns pivot columns.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t row = 0;
        for (size_t col = 0; col < c_ && row < r_; ++col) {
            size_t p = row;
            while (p < r_ && at(p, col) == 0) ++p;
            if (p == r_) continue;
            if (p != row)
                for (size_t j = 0; j < c_; ++j) std::swap(at(p, j), at(row, j));
            Rational inv = 1 / at(row, col);
            for (size_t j = 0; j < c_; ++j) at(row, j) *= inv;
            for (size_t i = 0; i < r_; ++i) {
                if (i == row || at(i, col) == 0) continue;
                Rational f = at(i, col);
                for (size_t j = 0; j < c_; ++j) at(i, j) -= f * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    // Null space basis (column vectors).
    std::vector<std::vector<Rational>> kernel() const {
        QMatrix m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_pivot(c_, false);
        for (size_t p : pivots) is_pivot[p] = true;
        std::vector<std::vector<Rational>> basis;
        for (size_t free = 0; free < c_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<Rational> v(c_, Rational(0));
            v[free] = 1;
            for (size_t t = 0; t < pivots.size(); ++t) v[pivots[t]] = -m.at(t, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Solves A x = b; false when inconsistent.
    bool solve(const std::vector<Rational>& b, std::vector<Rational>& x) const {
        QMatrix aug(r_, c_ + 1);
        for (size_t i = 0; i < r_; ++i) {
            for (size_t j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, c_) = b[i];
        }
        auto pivots = aug.rref();
        x.assign(c_, Rational(0));
        for (size_t t = 0; t < pivots.size(); ++t) {
            if (pivots[t] == c_) return false;  // pivot in the constant column
            x[pivots[t]] = aug.at(t, c_);
        }
        return true;
    }

    bool invert(QMatrix& out) const {
        if (r_ != c_) return false;
        QMatrix aug(r_, 2 * c_);
        for (size_t i = 0; i < r_; ++i) {
            for (size_t j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, c_ + i) = 1;
        }
        auto pivots = aug.rref();
        if (pivots.size() != r_) return false;
        for (size_t t = 0; t < pivots.size(); ++t)
            if (pivots[t] != t) return false;
        out = QMatrix(r_, c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) out.at(i, j) = aug.at(i, c_ + j);
        return true;
    }

    size_t rank() const {
        QMatrix m = *this;
        return m.rref().size();
    }

private:
    size_t r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

}  // namespace pvsa
