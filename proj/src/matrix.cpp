#include "jetphase/matrix.hpp"

#include <utility>

#include "jetphase/errors.hpp"

namespace jetphase {

ScalarMatrix::ScalarMatrix(std::initializer_list<std::initializer_list<Scalar>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw InputShapeError("matrix must be square");
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

ScalarMatrix ScalarMatrix::identity(std::size_t n) {
    ScalarMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

bool ScalarMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
}

ScalarMatrix ScalarMatrix::transposed() const {
    ScalarMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ScalarMatrix ScalarMatrix::scaled(const Scalar& s) const {
    ScalarMatrix m = *this;
    for (auto& v : m.a_) v *= s;
    return m;
}

Scalar ScalarMatrix::determinant() const {
    ScalarMatrix m = *this;
    Scalar det(1);
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        while (pivot < n_ && m(pivot, col).is_zero()) ++pivot;
        if (pivot == n_) return Scalar(0);
        if (pivot != col) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        Scalar inv = m(col, col).inverse();
        for (std::size_t r = col + 1; r < n_; ++r) {
            if (m(r, col).is_zero()) continue;
            Scalar factor = m(r, col) * inv;
            for (std::size_t j = col; j < n_; ++j) m(r, j) -= factor * m(col, j);
        }
    }
    return det;
}

ScalarMatrix ScalarMatrix::inverse() const {
    ScalarMatrix m = *this;
    ScalarMatrix inv = identity(n_);
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        while (pivot < n_ && m(pivot, col).is_zero()) ++pivot;
        if (pivot == n_) throw ArithmeticError("matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(m(pivot, j), m(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        Scalar p = m(col, col).inverse();
        for (std::size_t j = 0; j < n_; ++j) {
            m(col, j) *= p;
            inv(col, j) *= p;
        }
        for (std::size_t r = 0; r < n_; ++r) {
            if (r == col || m(r, col).is_zero()) continue;
            Scalar factor = m(r, col);
            for (std::size_t j = 0; j < n_; ++j) {
                m(r, j) -= factor * m(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
    if (a.n_ != b.n_) throw InputShapeError("matrix size mismatch");
    ScalarMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
        for (std::size_t k = 0; k < a.n_; ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

} // namespace jetphase
