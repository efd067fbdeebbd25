#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jetphase/grading.hpp"
#include "jetphase/jet.hpp"
#include "jetphase/matrix.hpp"
#include "jetphase/multi_index.hpp"
#include "jetphase/operator.hpp"

namespace jetphase {

/// Formal distribution supported at the origin:
/// L(f) = sum_{r, beta} c_{r,beta} nu^r (d^beta f)(0), with r >= 0.
class PointDistribution {
public:
    using Key = std::pair<int, MultiIndex>;
    using TermMap = std::map<Key, Scalar>;

    explicit PointDistribution(int num_vars = 1);

    /// The evaluation functional at the origin.
    static PointDistribution delta(int num_vars);

    int num_vars() const noexcept { return num_vars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(int nu, MultiIndex dx, const Scalar& c);
    Scalar coeff(int nu, const MultiIndex& dx) const;
    std::optional<int> highest_nu() const;
    /// Largest |beta| among the terms of nu-order r, or -1 if there are none.
    int max_order(int r) const;

    PointDistribution truncated_nu(int max_nu) const;
    /// The constant-coefficient operator D with L = delta o D.
    FormalOperator as_operator() const;

    friend bool operator==(const PointDistribution&, const PointDistribution&) = default;

private:
    int num_vars_;
    TermMap terms_;
};

/// delta o A: keeps the x-free terms of the normal form, restricted by `trunc`.
PointDistribution distribution_from_operator(const FormalOperator& a, const TruncationSpec& trunc);

/// L(f) modulo nu^{N+1}, returned as a jet whose terms all sit at x = 0.
Jet apply_distribution(const PointDistribution& l, const Jet& f, int n_max);

struct OscillatoryVerdict {
    bool oscillatory = false;
    /// X with L = delta o exp(nu^{-1} X) modulo nu^{N+1}; present when oscillatory.
    std::optional<FormalOperator> x;
};

OscillatoryVerdict is_oscillatory(const PointDistribution& l, int n_max);

/// b^{ij} = L_1(x^i x^j).
ScalarMatrix beta_form(const PointDistribution& l);
bool is_nondegenerate(const PointDistribution& l);

/// L^Phi(f) = L(f o Phi), restricted by `trunc` (nu-exponent and derivative order of each term).
PointDistribution pushforward_diffeo(const PointDistribution& l, const std::vector<Jet>& phi,
                                     const TruncationSpec& trunc);

using JetMatrix = std::vector<std::vector<Jet>>;

/// [L(e_i e_j)] modulo nu^{N+1}.
JetMatrix gram_matrix(const PointDistribution& l, const std::vector<Jet>& basis, int n_max);
/// Determinant of a square matrix of nu-series, modulo nu^{N+1}.
Jet series_determinant(const JetMatrix& m, int n_max);

} // namespace jetphase
