#pragma once

#include <cstddef>
#include <vector>

#include "jetphase/scalar.hpp"

namespace jetphase {

/// Small dense square matrix over exact scalars.
class ScalarMatrix {
public:
    ScalarMatrix() = default;
    explicit ScalarMatrix(std::size_t n) : n_(n), a_(n * n, Scalar(0)) {}
    ScalarMatrix(std::initializer_list<std::initializer_list<Scalar>> rows);

    static ScalarMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool is_symmetric() const;
    ScalarMatrix transposed() const;
    ScalarMatrix scaled(const Scalar& s) const;

    /// Gaussian elimination, first nonzero pivot.
    Scalar determinant() const;
    /// Throws ArithmeticError when singular.
    ScalarMatrix inverse() const;

    friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b);
    friend bool operator==(const ScalarMatrix&, const ScalarMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Scalar> a_;
};

} // namespace jetphase
