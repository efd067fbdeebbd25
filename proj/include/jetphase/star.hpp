#pragma once

#include <vector>

#include "jetphase/distribution.hpp"
#include "jetphase/grading.hpp"
#include "jetphase/jet.hpp"
#include "jetphase/matrix.hpp"
#include "jetphase/operator.hpp"

namespace jetphase {

/// f * g = fg + sum_{r >= 1} nu^r C_r(f, g), each C_r a nu-free operator on 2n variables
/// (y = x^1..x^n, z = x^{n+1}..x^{2n}) acting on f(y) g(z) and restricted to y = z.
/// Orders beyond the stored list are zero.
struct StarProduct {
    int num_vars = 1;
    /// c_ops[r - 1] is C_r.
    std::vector<FormalOperator> c_ops;

    const FormalOperator* c(int r) const {
        return r >= 1 && static_cast<std::size_t>(r) <= c_ops.size() ? &c_ops[static_cast<std::size_t>(r - 1)]
                                                                     : nullptr;
    }
};

/// Checks the variable count and that every C_r is nu-free.
void validate_star(const StarProduct& s);

/// C_r = (1/r!) (pi^{ij} d_{y_i} d_{z_j})^r for r <= N.
StarProduct moyal_star(const ScalarMatrix& pi, int n_max);

/// C(f(y) g(z))|_{y=z} for an operator on 2n variables.
Jet apply_bidifferential(const FormalOperator& c, const Jet& f, const Jet& g, const TruncationSpec& trunc);

/// fg + sum nu^r C_r(f, g) modulo nu^{N+1}.
Jet star_multiply(const StarProduct& s, const Jet& f, const Jet& g, int n_max);

/// Every C_r (r <= N) has order <= r in the y-derivatives and in the z-derivatives.
bool is_natural_star(const StarProduct& s, int n_max);

/// (f (x) g) -> (f * g)(0) as a distribution on 2n variables.
PointDistribution two_point_distribution(const StarProduct& s, int n_max);

/// 1 + f + f*f/2 + ... truncated by `trunc`. f must have nu-exponents >= -1 and only
/// terms of positive degree under the truncation grading.
Jet star_exponential(const StarProduct& s, const Jet& f, const TruncationSpec& trunc);

/// g -> f * g and g -> g * f as differential operators, modulo nu^{N+1}.
FormalOperator left_multiplication(const StarProduct& s, const Jet& f, int n_max);
FormalOperator right_multiplication(const StarProduct& s, const Jet& g, int n_max);

/// Full symbol of the left multiplication operator of f.
Jet left_mult_symbol(const StarProduct& s, const Jet& f, int n_max);

/// The equivalent product f *' g = T^{-1}(Tf * Tg) for constant-coefficient S and
/// T = 1 + nu T_1 + ... on n variables, modulo nu^{N+1}.
StarProduct gauge_transform(const StarProduct& s, const FormalOperator& t, int n_max);

} // namespace jetphase
