#include "jetphase/distribution.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "jetphase/errors.hpp"
#include "jetphase/filtered_exp.hpp"

namespace jetphase {

PointDistribution::PointDistribution(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 1) throw InputShapeError("a distribution needs at least one chart variable");
}

PointDistribution PointDistribution::delta(int num_vars) {
    PointDistribution d(num_vars);
    d.add_term(0, MultiIndex(static_cast<std::size_t>(num_vars)), Scalar(1));
    return d;
}

void PointDistribution::add_term(int nu, MultiIndex dx, const Scalar& c) {
    if (nu < 0) throw InputShapeError("distribution terms need nu >= 0, got " + std::to_string(nu));
    if (dx.size() != static_cast<std::size_t>(num_vars_))
        throw InputShapeError("derivative index has " + std::to_string(dx.size()) + " entries, expected " +
                              std::to_string(num_vars_));
    if (!dx.nonnegative()) throw InputShapeError("negative derivative order");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(Key{nu, std::move(dx)}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Scalar PointDistribution::coeff(int nu, const MultiIndex& dx) const {
    auto it = terms_.find(Key{nu, dx});
    return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<int> PointDistribution::highest_nu() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first.first;
}

int PointDistribution::max_order(int r) const {
    int best = -1;
    for (const auto& [key, c] : terms_)
        if (key.first == r) best = std::max(best, key.second.total());
    return best;
}

PointDistribution PointDistribution::truncated_nu(int max_nu) const {
    PointDistribution out(num_vars_);
    for (const auto& [key, c] : terms_)
        if (key.first <= max_nu) out.terms_.emplace(key, c);
    return out;
}

FormalOperator PointDistribution::as_operator() const {
    FormalOperator d(num_vars_);
    const MultiIndex zero(static_cast<std::size_t>(num_vars_));
    for (const auto& [key, c] : terms_) d.add_term(key.first, zero, key.second, c);
    return d;
}

PointDistribution distribution_from_operator(const FormalOperator& a, const TruncationSpec& trunc) {
    const FormalOperator normal = reorder(a, Ordering::normal).truncated(trunc);
    PointDistribution out(a.num_vars());
    for (const auto& [key, c] : normal.terms()) {
        if (!key.x.is_zero()) continue;
        if (key.nu < 0)
            throw NotNuRegularError("delta o A has a term of nu-order " + std::to_string(key.nu));
        out.add_term(key.nu, key.dx, c);
    }
    return out;
}

Jet apply_distribution(const PointDistribution& l, const Jet& f, int n_max) {
    if (f.num_vars() != l.num_vars())
        throw InputShapeError("jet has " + std::to_string(f.num_vars()) + " variables, distribution has " +
                              std::to_string(l.num_vars()));
    Jet out(f.num_vars(), f.aux_names());
    const MultiIndex origin(static_cast<std::size_t>(f.num_vars()));
    for (const auto& [fkey, fc] : f.terms()) {
        const int room = n_max - fkey.nu;
        if (room < 0) continue;
        const Scalar weight = fc * factorial(fkey.x);
        for (int r = 0; r <= room; ++r) {
            auto it = l.terms().find(PointDistribution::Key{r, fkey.x});
            if (it != l.terms().end()) out.add_term(JetKey{r + fkey.nu, origin, fkey.aux}, it->second * weight);
        }
    }
    out.set_nu_min(std::min(0, f.nu_min()));
    return out;
}

OscillatoryVerdict is_oscillatory(const PointDistribution& l, int n_max) {
    const PointDistribution head = l.truncated_nu(std::max(n_max, 0));
    const MultiIndex origin(static_cast<std::size_t>(l.num_vars()));
    for (const auto& [key, c] : head.terms()) {
        if (key.first != 0) break;
        if (!key.second.is_zero() || !c.is_one()) return {};
    }
    if (head.coeff(0, origin) != Scalar(1)) return {};
    if (n_max < 1) return {true, FormalOperator(l.num_vars())};

    const FormalOperator c = op_log(head.as_operator(), FiltrationSpec::nu(), TruncationSpec::nu(n_max));
    for (const auto& [key, coeff] : c.terms())
        if (key.nu < 1 || key.dx.total() > key.nu + 1) return {};
    return {true, c.shifted_nu(1)};
}

ScalarMatrix beta_form(const PointDistribution& l) {
    const int order = std::max(1, l.highest_nu().value_or(0));
    if (!is_oscillatory(l, order).oscillatory)
        throw PreconditionError("the bilinear form is only defined for oscillatory distributions");
    const int n = l.num_vars();
    ScalarMatrix b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiIndex m(static_cast<std::size_t>(n));
            m[static_cast<std::size_t>(i)] += 1;
            m[static_cast<std::size_t>(j)] += 1;
            b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                apply_distribution(l, Jet::monomial(n, 0, m, Scalar(1)), 1).nu_coeff(1);
        }
    return b;
}

bool is_nondegenerate(const PointDistribution& l) { return !beta_form(l).determinant().is_zero(); }

namespace {

ScalarMatrix jacobian_at_origin(const std::vector<Jet>& phi) {
    const std::size_t n = phi.size();
    ScalarMatrix j(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) j(i, k) = phi[i].coeff(0, MultiIndex::unit(n, k));
    return j;
}

} // namespace

PointDistribution pushforward_diffeo(const PointDistribution& l, const std::vector<Jet>& phi,
                                     const TruncationSpec& trunc) {
    const int n = l.num_vars();
    if (phi.size() != static_cast<std::size_t>(n))
        throw InputShapeError("diffeomorphism has " + std::to_string(phi.size()) + " components, expected " +
                              std::to_string(n));
    const MultiIndex origin(static_cast<std::size_t>(n));
    for (const Jet& component : phi) {
        if (component.num_vars() != n) throw InputShapeError("diffeomorphism component on the wrong chart");
        if (!component.aux_names().empty()) throw InputShapeError("diffeomorphism components take no aux parameters");
        for (const auto& [key, c] : component.terms()) {
            if (key.nu != 0) throw InputShapeError("diffeomorphism components must be nu-free");
            if (key.x.is_zero()) throw InputShapeError("diffeomorphism must fix the origin");
        }
    }
    if (jacobian_at_origin(phi).determinant().is_zero())
        throw SingularJacobianError("linear part of the diffeomorphism is not invertible");

    // Phi^beta vanishes to order |beta|, so L_r(Phi^beta) = 0 once |beta| exceeds the order of L_r.
    int top = -1;
    for (const auto& [key, c] : l.terms()) top = std::max(top, key.second.total());
    PointDistribution out(n);
    if (top < 0) return out;
    const TruncationSpec xcap = TruncationSpec::polynomial(top);

    std::map<MultiIndex, Jet> powers;
    powers.emplace(origin, Jet::constant(n, Scalar(1)));
    for (const MultiIndex& beta : indices_up_to(static_cast<std::size_t>(n), top)) {
        if (beta.is_zero()) continue;
        std::size_t i = 0;
        while (beta[i] == 0) ++i;
        MultiIndex prev = beta;
        prev[i] -= 1;
        powers.emplace(beta, mul(powers.at(prev), phi[i], xcap));
    }

    const GradingContext& g = trunc.grading;
    const std::optional<int> hi = l.highest_nu();
    for (int r = 0; r <= hi.value_or(-1); ++r) {
        const int order = l.max_order(r);
        if (order < 0) continue;
        for (const MultiIndex& beta : indices_up_to(static_cast<std::size_t>(n), order)) {
            if (g.nu_weight * r + g.d_weight * beta.total() > trunc.max_degree) continue;
            Scalar value(0);
            for (const auto& [fkey, fc] : powers.at(beta).terms()) {
                auto it = l.terms().find(PointDistribution::Key{r, fkey.x});
                if (it != l.terms().end()) value += it->second * fc * factorial(fkey.x);
            }
            out.add_term(r, beta, value / factorial(beta));
        }
    }
    return out;
}

JetMatrix gram_matrix(const PointDistribution& l, const std::vector<Jet>& basis, int n_max) {
    JetMatrix m(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            m[i].push_back(apply_distribution(l, basis[i] * basis[j], n_max));
    return m;
}

Jet series_determinant(const JetMatrix& m, int n_max) {
    const std::size_t k = m.size();
    for (const auto& row : m)
        if (row.size() != k) throw InputShapeError("determinant of a non-square matrix");
    if (k == 0) throw InputShapeError("determinant of an empty matrix");
    const TruncationSpec trunc = TruncationSpec::nu(n_max);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Jet det(m[0][0].num_vars(), m[0][0].aux_names());
    do {
        std::size_t inversions = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (perm[a] > perm[b]) ++inversions;
        Jet term = m[0][perm[0]].truncated(trunc);
        for (std::size_t i = 1; i < k && !term.is_zero(); ++i) term = mul(term, m[i][perm[i]], trunc);
        det = inversions % 2 == 0 ? det + term : det - term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

} // namespace jetphase
