#pragma once

#include <optional>
#include <vector>

#include "jetphase/grading.hpp"
#include "jetphase/operator.hpp"

namespace jetphase {

/// Complementary pair of term-level projections of the Lie algebra. Each projection
/// selects terms of one ordering, so both are idempotent, sum to the identity and
/// preserve every filtration degree.
enum class SplitKind {
    /// normal form: beta = 0 (multiplication) | |beta| >= 1 (annihilates constants)
    mult_vs_annih,
    /// normal form: |alpha| >= 1 (killed by delta at 0) | alpha = 0 (constant coefficients)
    deltaker_vs_const,
    /// anti-normal form: |beta| >= 1 (d_i o A^i) | beta = 0 (multiplication)
    div_vs_mult,
};

struct SplitSpec {
    SplitKind kind;

    Ordering ordering() const {
        return kind == SplitKind::div_vs_mult ? Ordering::anti_normal : Ordering::normal;
    }
    bool in_first(const OpKey& key) const;

    /// First component, returned in normal form.
    FormalOperator project_a(const FormalOperator& op) const;
    /// Second component, returned in normal form.
    FormalOperator project_b(const FormalOperator& op) const;
};

struct FiltrationSpec {
    GradingContext grading = GradingContext::nu();
    int floor = 1;

    static FiltrationSpec nu() { return {GradingContext::nu(), 1}; }
    static FiltrationSpec standard() { return {GradingContext::standard(), 1}; }
};

FormalOperator op_exp(const FormalOperator& g, const FiltrationSpec& filt, const TruncationSpec& trunc);
FormalOperator op_log(const FormalOperator& g, const FiltrationSpec& filt, const TruncationSpec& trunc);

struct Factorization {
    FormalOperator a;
    FormalOperator b;
    /// Filtration degree of the residual gamma_i at each iteration (gamma_0 = log g first).
    std::vector<int> residual_degrees;
};

/// Unique g = a*b with a in exp(first part), b in exp(second part), by the doubling
/// iteration gamma_{i+1} = log(e^{-alpha_i} e^{gamma_i} e^{-beta_i}).
Factorization factorize(const FormalOperator& g, const SplitSpec& split, const FiltrationSpec& filt,
                        const TruncationSpec& trunc);
/// Same, starting from the Lie algebra element gamma_0 = log g.
Factorization factorize_log(const FormalOperator& gamma, const SplitSpec& split, const FiltrationSpec& filt,
                            const TruncationSpec& trunc);

/// Termination measure strictly decreased by ad(P).
enum class ConjugationMeasure {
    /// max |beta| in normal form; ad(nu^-1 psi) with psi a quadratic x-jet.
    derivative_order,
    /// max |alpha| in normal form; ad(nu Delta) with Delta a constant-coefficient operator.
    coefficient_degree,
};

/// e^{ad P}(A) = sum_k ad(P)^k(A)/k!, a finite sum under the measure.
FormalOperator conjugate(const FormalOperator& p, const FormalOperator& a, ConjugationMeasure measure,
                         const TruncationSpec& trunc);

} // namespace jetphase
