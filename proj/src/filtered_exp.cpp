#include "jetphase/filtered_exp.hpp"

#include <string>

#include "jetphase/errors.hpp"

namespace jetphase {

namespace {

void require_degree_at_least(const FormalOperator& op, const GradingContext& g, int bound, const char* what) {
    for (const auto& [key, c] : op.terms()) {
        int d = op.degree(key, g);
        if (d < bound)
            throw ConvergenceError(std::string(what) + ": term of degree " + std::to_string(d) +
                                   " below the admissible bound " + std::to_string(bound));
    }
}

FormalOperator project(const FormalOperator& op, const SplitSpec& split, bool first) {
    const FormalOperator ordered = reorder(op, split.ordering());
    FormalOperator out(op.num_vars(), split.ordering());
    for (const auto& [key, c] : ordered.terms())
        if (split.in_first(key) == first) out.add_term(key, c);
    return reorder(out, Ordering::normal);
}

int max_measure(const FormalOperator& op, ConjugationMeasure m) {
    int best = -1;
    for (const auto& [key, c] : op.terms())
        best = std::max(best, m == ConjugationMeasure::derivative_order ? key.dx.total() : key.x.total());
    return best;
}

} // namespace

bool SplitSpec::in_first(const OpKey& key) const {
    switch (kind) {
    case SplitKind::mult_vs_annih: return key.dx.is_zero();
    case SplitKind::deltaker_vs_const: return !key.x.is_zero();
    case SplitKind::div_vs_mult: return !key.dx.is_zero();
    }
    return false;
}

FormalOperator SplitSpec::project_a(const FormalOperator& op) const { return project(op, *this, true); }

FormalOperator SplitSpec::project_b(const FormalOperator& op) const { return project(op, *this, false); }

FormalOperator op_exp(const FormalOperator& g, const FiltrationSpec& filt, const TruncationSpec& trunc) {
    require_degree_at_least(g, filt.grading, std::max(filt.floor, 1), "op_exp");
    require_degree_at_least(g, trunc.grading, 1, "op_exp (truncation grading)");
    FormalOperator sum = FormalOperator::identity(g.num_vars()).truncated(trunc);
    FormalOperator power = sum;
    for (int k = 1; k <= std::max(trunc.max_degree, 0); ++k) {
        power = op_compose(power, g, trunc).scaled(Scalar::rational(1, k));
        if (power.is_zero()) break;
        sum += power;
    }
    return sum;
}

FormalOperator op_log(const FormalOperator& g, const FiltrationSpec& filt, const TruncationSpec& trunc) {
    const FormalOperator one = FormalOperator::identity(g.num_vars());
    const FormalOperator h = g - one;
    try {
        require_degree_at_least(h, filt.grading, std::max(filt.floor, 1), "op_log");
        require_degree_at_least(h, trunc.grading, 1, "op_log (truncation grading)");
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("op_log: argument is not 1 plus admissible terms (") + e.what() + ")");
    }
    FormalOperator sum(g.num_vars());
    FormalOperator power = one.truncated(trunc);
    for (int k = 1; k <= std::max(trunc.max_degree, 0); ++k) {
        power = op_compose(power, h, trunc);
        if (power.is_zero()) break;
        sum += power.scaled(Scalar::rational(k % 2 == 1 ? 1 : -1, k));
    }
    return sum;
}

Factorization factorize(const FormalOperator& g, const SplitSpec& split, const FiltrationSpec& filt,
                        const TruncationSpec& trunc) {
    return factorize_log(op_log(g, filt, trunc), split, filt, trunc);
}

Factorization factorize_log(const FormalOperator& gamma0, const SplitSpec& split, const FiltrationSpec& filt,
                            const TruncationSpec& trunc) {
    const int n = gamma0.num_vars();
    const FormalOperator one = FormalOperator::identity(n);
    FormalOperator gamma = gamma0.truncated(trunc);
    require_degree_at_least(gamma, filt.grading, std::max(filt.floor, 1), "factorize");

    // gamma_i has degree >= 2^i, so the truncation is exhausted after this many rounds
    // whenever the truncation grading bounds the filtration.
    int max_rounds = 1;
    while ((1 << (max_rounds - 1)) <= std::max(trunc.max_degree, 0)) ++max_rounds;

    std::vector<FormalOperator> a_factors;
    std::vector<FormalOperator> b_factors;
    Factorization result{one, one, {}};
    for (int i = 0; !gamma.is_zero(); ++i) {
        if (i > max_rounds)
            throw ConvergenceError("factorize: residual did not vanish under the truncation");
        const int degree = *gamma.min_degree(filt.grading);
        result.residual_degrees.push_back(degree);
        if (i < 30 && degree < (1 << i))
            throw ConvergenceError("factorize: residual degree " + std::to_string(degree) +
                                   " violates the doubling bound 2^" + std::to_string(i));

        FormalOperator alpha = split.project_a(gamma);
        FormalOperator beta = split.project_b(gamma);
        FormalOperator e_alpha = op_exp(alpha, filt, trunc);
        FormalOperator e_beta = op_exp(beta, filt, trunc);
        a_factors.push_back(e_alpha);
        b_factors.push_back(e_beta);

        if (alpha.is_zero() || beta.is_zero()) break;
        FormalOperator product = op_compose(op_exp(-alpha, filt, trunc),
                                            op_compose(op_exp(gamma, filt, trunc), op_exp(-beta, filt, trunc), trunc),
                                            trunc);
        gamma = op_log(product, filt, trunc);
    }

    for (const auto& f : a_factors) result.a = op_compose(result.a, f, trunc);
    for (auto it = b_factors.rbegin(); it != b_factors.rend(); ++it) result.b = op_compose(result.b, *it, trunc);
    result.a = result.a.truncated(trunc);
    result.b = result.b.truncated(trunc);
    return result;
}

FormalOperator conjugate(const FormalOperator& p, const FormalOperator& a, ConjugationMeasure measure,
                         const TruncationSpec& trunc) {
    FormalOperator sum = a.truncated(trunc);
    FormalOperator term = sum;
    int previous = max_measure(term, measure);
    for (int k = 1; !term.is_zero(); ++k) {
        term = op_commutator(p, term, trunc).scaled(Scalar::rational(1, k));
        if (term.is_zero()) break;
        int current = max_measure(term, measure);
        if (current >= previous)
            throw ConvergenceError("conjugate: ad(P) does not decrease the termination measure (" +
                                   std::to_string(previous) + " -> " + std::to_string(current) + ")");
        previous = current;
        sum += term;
    }
    return sum;
}

} // namespace jetphase
