#include "jetphase/foi.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "jetphase/errors.hpp"
#include "jetphase/filtered_exp.hpp"

namespace jetphase {

namespace {

int depth(const Jet& f) { return std::max(0, -f.lowest_nu().value_or(0)); }

/// Gaussian moments m(gamma) = [(Delta^k / k!) x^gamma](0) with k = |gamma|/2.
class GaussianMoments {
public:
    GaussianMoments(int n, FormalOperator delta) : n_(n), delta_(std::move(delta)) {}

    const Scalar& operator()(const MultiIndex& gamma) {
        auto it = cache_.find(gamma);
        if (it != cache_.end()) return it->second;
        Scalar value(0);
        if (gamma.total() % 2 == 0) {
            const int k = gamma.total() / 2;
            Jet f = Jet::monomial(n_, 0, gamma, Scalar(1));
            for (int i = 0; i < k && !f.is_zero(); ++i) f = op_apply(delta_, f);
            value = f.coeff(0, MultiIndex(static_cast<std::size_t>(n_))) / factorial(k);
        }
        return cache_.emplace(gamma, value).first->second;
    }

private:
    int n_;
    FormalOperator delta_;
    std::map<MultiIndex, Scalar> cache_;
};

/// For e^gamma = e^E e^chi split as divergence part times multiplication, chi = log(e^{gamma^t}(1)):
/// transposing gives e^chi e^{E^t}, and E^t annihilates constants. This avoids exponentiating
/// the divergence part, whose normal form grows quickly under the standard grading.
Jet multiplicative_factor_log(const FormalOperator& gamma, const TruncationSpec& trunc) {
    const int n = gamma.num_vars();
    const FormalOperator gt = op_transpose(gamma);
    Jet sum = Jet::constant(n, Scalar(1));
    Jet power = sum;
    for (int k = 1; k <= trunc.max_degree; ++k) {
        power = op_apply(gt, power, trunc).scaled(Scalar::rational(1, k));
        if (power.is_zero()) break;
        sum += power;
    }
    return jet_log(sum, trunc);
}

Jet derivation(const VectorField& v, const Jet& f) {
    Jet out(f.num_vars(), f.aux_names());
    for (std::size_t i = 0; i < v.size(); ++i) out += v[i] * jet_derive(f, JetVariable::x(static_cast<int>(i)));
    return out;
}

} // namespace

void validate_pair(const PhaseDensityPair& pair) {
    const int n = pair.phase.num_vars();
    if (pair.u.num_vars() != n)
        throw InputShapeError("phase has " + std::to_string(n) + " variables, density exponent has " +
                              std::to_string(pair.u.num_vars()));
    if (!pair.phase.aux_names().empty() || !pair.u.aux_names().empty())
        throw InputShapeError("phase and density exponent take no aux parameters");
    if (pair.phase.lowest_nu().value_or(0) < -1)
        throw InputShapeError("phase has a term of nu-order " + std::to_string(*pair.phase.lowest_nu()) +
                              ", the lowest allowed order is -1");
    if (pair.u.lowest_nu().value_or(0) < 0)
        throw InputShapeError("density exponent must be nu-regular");
}

HessianData hessian_data(const PhaseDensityPair& pair) {
    validate_pair(pair);
    const int n = pair.num_vars();
    const auto un = static_cast<std::size_t>(n);
    const Jet leading = pair.phase.nu_component(-1);
    for (const auto& [key, c] : leading.terms()) {
        if (key.x.total() == 0) throw NotCriticalError("leading phase has nonzero value " + c.to_string() + " at 0");
        if (key.x.total() == 1) throw NotCriticalError("leading phase has nonzero differential at 0");
    }
    ScalarMatrix h(un);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) {
            MultiIndex m = MultiIndex::unit(un, i) + MultiIndex::unit(un, j);
            h(i, j) = leading.coeff(0, m) * factorial(m);
        }
    if (h.determinant().is_zero()) throw DegenerateCriticalPointError("Hessian of the leading phase is singular");

    HessianData data{h, h.inverse(), Jet(n), FormalOperator(n)};
    const MultiIndex zero(un);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) {
            MultiIndex m = MultiIndex::unit(un, i) + MultiIndex::unit(un, j);
            data.psi.add_term(0, m, h(i, j) * Scalar::rational(1, 2));
            data.delta_op.add_term(0, zero, m, data.h_upper(i, j) * Scalar::rational(-1, 2));
        }
    return data;
}

Jet phase_remainder(const PhaseDensityPair& pair) {
    const HessianData hd = hessian_data(pair);
    const int n = pair.num_vars();
    const MultiIndex origin(static_cast<std::size_t>(n));
    Jet chi = pair.phase - hd.psi.shifted_nu(-1) + pair.u;
    chi -= Jet::constant(n, pair.phase.coeff(0, origin) + pair.u.coeff(0, origin));
    return chi;
}

PointDistribution foi_distribution(const PhaseDensityPair& pair, int n_max) {
    const HessianData hd = hessian_data(pair);
    const int n = pair.num_vars();
    const auto un = static_cast<std::size_t>(n);
    PointDistribution out(n);
    if (n_max < 0) return out;

    const GradingContext standard = GradingContext::standard();
    const Jet e = jet_exp(phase_remainder(pair), TruncationSpec::standard(2 * n_max));
    GaussianMoments moments(n, hd.delta_op);

    // A term nu^a x^alpha of e^chi paired with d^beta lands at nu-order r with 2r = 2a + |alpha| + |beta|.
    for (const auto& [key, c] : e.terms()) {
        const int d = e.degree(key, standard);
        for (int t = (d % 2 == 0 ? 0 : 1); d + t <= 2 * n_max; t += 2) {
            const int r = (d + t) / 2;
            for (const MultiIndex& beta : indices_of_total(un, t)) {
                const Scalar& m = moments(key.x + beta);
                if (!m.is_zero()) out.add_term(r, beta, c * m / factorial(beta));
            }
        }
    }
    return out;
}

Jet foi_eval(const PhaseDensityPair& pair, const Jet& f, int n_max) {
    return apply_distribution(foi_distribution(pair, n_max + depth(f)), f, n_max);
}

Jet divergence(const VectorField& v, const PhaseDensityPair& pair) {
    const int n = pair.num_vars();
    if (v.size() != static_cast<std::size_t>(n))
        throw InputShapeError("vector field has " + std::to_string(v.size()) + " components, expected " +
                              std::to_string(n));
    Jet out(n);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i].check_compatible(pair.u, "divergence");
        out += jet_derive(v[i], JetVariable::x(static_cast<int>(i)));
    }
    return out + derivation(v, pair.u);
}

Defect check_foi_axiom(const PointDistribution& l, const PhaseDensityPair& pair, const VectorField& v, const Jet& f,
                       int n_max) {
    const Jet g = derivation(v, f) + (derivation(v, pair.phase) + divergence(v, pair)) * f;
    const int exact = n_max - depth(g);
    return {apply_distribution(l, g, exact), exact};
}

Defect check_strong(const PointDistribution& l, const PhaseDensityPair& pair, const Jet& f, int n_max) {
    const int n = pair.num_vars();
    const Jet weight = jet_derive(pair.phase, JetVariable::nu()) + jet_derive(pair.u, JetVariable::nu()) -
                       Jet::monomial(n, -1, MultiIndex(static_cast<std::size_t>(n)), Scalar::rational(n, 2));
    const Jet g = jet_derive(f, JetVariable::nu()) + weight * f;
    const int exact = std::min(n_max - depth(f) - 1, n_max - depth(g));
    const Jet lhs = jet_derive(apply_distribution(l, f, n_max - depth(f)), JetVariable::nu()).truncated_nu(exact);
    return {lhs - apply_distribution(l, g, exact), exact};
}

PhaseDensityPair recover_phase(const PointDistribution& l, int n_max) {
    const int n = l.num_vars();
    const auto un = static_cast<std::size_t>(n);
    const OscillatoryVerdict verdict = is_oscillatory(l, n_max);
    if (!verdict.oscillatory) throw PreconditionError("phase recovery needs an oscillatory distribution");
    const ScalarMatrix b = beta_form(l.truncated_nu(n_max));
    if (b.determinant().is_zero()) throw NondegeneracyError("the bilinear form of the distribution is degenerate");

    const ScalarMatrix h_upper = b.scaled(Scalar(-1));
    const ScalarMatrix h_lower = h_upper.inverse();
    Jet psi(n);
    FormalOperator nu_delta(n);
    const MultiIndex zero(un);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) {
            MultiIndex m = MultiIndex::unit(un, i) + MultiIndex::unit(un, j);
            psi.add_term(0, m, h_lower(i, j) * Scalar::rational(1, 2));
            nu_delta.add_term(1, zero, m, h_upper(i, j) * Scalar::rational(-1, 2));
        }

    const TruncationSpec trunc = TruncationSpec::standard(2 * n_max);
    const FormalOperator c = verdict.x->shifted_nu(-1) - nu_delta;
    const FormalOperator p = FormalOperator::multiplication(psi).shifted_nu(-1);
    const FormalOperator gamma = conjugate(p, c, ConjugationMeasure::derivative_order, trunc);
    return {psi.shifted_nu(-1) + multiplicative_factor_log(gamma, trunc), Jet(n)};
}

} // namespace jetphase
