#include "jetphase/operator.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "jetphase/errors.hpp"

namespace jetphase {

namespace {

// Factor table for one variable: entry s holds C(b, s) * g!/(g-s)!, the coefficient of
// x^(g-s) d^(b-s) in d^b o x^g.
std::vector<Scalar> leibniz_row(int b, int g) {
    std::vector<Scalar> row;
    int top = std::min(b, g);
    row.reserve(static_cast<std::size_t>(top) + 1);
    for (int s = 0; s <= top; ++s) row.push_back(binomial(b, s) * falling_factorial(g, s));
    return row;
}

// Visits every sigma with sigma_i < rows[i].size(), passing prod_i rows[i][sigma_i].
template <typename Fn>
void contract(const std::vector<std::vector<Scalar>>& rows, std::size_t i, MultiIndex& sigma, const Scalar& acc,
              Fn& fn) {
    if (i == rows.size()) {
        fn(sigma, acc);
        return;
    }
    for (std::size_t s = 0; s < rows[i].size(); ++s) {
        sigma[i] = static_cast<int>(s);
        contract(rows, i + 1, sigma, acc * rows[i][s], fn);
    }
    sigma[i] = 0;
}

template <typename Fn>
void for_each_contraction(const std::vector<std::vector<Scalar>>& rows, Fn&& fn) {
    MultiIndex sigma(rows.size());
    contract(rows, 0, sigma, Scalar(1), fn);
}

FormalOperator as_normal(const FormalOperator& a) {
    return a.ordering() == Ordering::normal ? a : reorder(a, Ordering::normal);
}

void check_same_shape(const FormalOperator& a, const FormalOperator& b, const char* what) {
    if (a.num_vars() != b.num_vars())
        throw InputShapeError(std::string(what) + ": operators act on " + std::to_string(a.num_vars()) +
                              " and " + std::to_string(b.num_vars()) + " variables");
}

FormalOperator compose_impl(const FormalOperator& a_in, const FormalOperator& b_in, const TruncationSpec* trunc) {
    check_same_shape(a_in, b_in, "op_compose");
    const FormalOperator a = as_normal(a_in);
    const FormalOperator b = as_normal(b_in);
    const std::size_t n = static_cast<std::size_t>(a.num_vars());
    FormalOperator out(a.num_vars());

    bool can_prune = false;
    std::vector<std::pair<int, const FormalOperator::TermMap::value_type*>> rhs;
    rhs.reserve(b.size());
    if (trunc) {
        const auto& g = trunc->grading;
        can_prune = g.x_weight + g.d_weight <= 0;
        for (const auto& t : b.terms()) rhs.emplace_back(b.degree(t.first, g), &t);
        std::sort(rhs.begin(), rhs.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    } else {
        for (const auto& t : b.terms()) rhs.emplace_back(0, &t);
    }

    std::vector<std::vector<Scalar>> rows(n);
    for (const auto& [ka, ca] : a.terms()) {
        const int da = trunc ? a.degree(ka, trunc->grading) : 0;
        for (const auto& [db, tb] : rhs) {
            if (can_prune && da + db > trunc->max_degree) break;
            const auto& [kb, cb] = *tb;
            const Scalar c = ca * cb;
            for (std::size_t i = 0; i < n; ++i) rows[i] = leibniz_row(ka.dx[i], kb.x[i]);
            for_each_contraction(rows, [&](const MultiIndex& sigma, const Scalar& f) {
                OpKey key{ka.nu + kb.nu, ka.x + kb.x - sigma, ka.dx - sigma + kb.dx};
                if (trunc && out.degree(key, trunc->grading) > trunc->max_degree) return;
                out.add_term(key, c * f);
            });
        }
    }
    out.set_nu_min(a.nu_min() + b.nu_min());
    return out;
}

Jet apply_impl(const FormalOperator& a_in, const Jet& f, const TruncationSpec* trunc) {
    if (a_in.num_vars() != f.num_vars())
        throw InputShapeError("op_apply: operator and jet have different variable counts");
    const FormalOperator a = as_normal(a_in);
    Jet out(f.num_vars(), f.aux_names());
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kf, cf] : f.terms()) {
            if (!ka.dx.le(kf.x)) continue;
            Scalar c = ca * cf;
            for (std::size_t i = 0; i < ka.dx.size(); ++i) c *= falling_factorial(kf.x[i], ka.dx[i]);
            JetKey key{ka.nu + kf.nu, ka.x + kf.x - ka.dx, kf.aux};
            if (trunc && f.degree(key, trunc->grading) > trunc->max_degree) continue;
            out.add_term(key, c);
        }
    }
    out.set_nu_min(a.nu_min() + f.nu_min());
    return out;
}

} // namespace

FormalOperator::FormalOperator(int num_vars, Ordering ordering) : num_vars_(num_vars), ordering_(ordering) {
    if (num_vars < 1) throw InputShapeError("an operator needs at least one variable");
}

FormalOperator FormalOperator::scalar(int num_vars, const Scalar& c) {
    FormalOperator op(num_vars);
    auto n = static_cast<std::size_t>(num_vars);
    op.add_term(0, MultiIndex(n), MultiIndex(n), c);
    return op;
}

FormalOperator FormalOperator::monomial(int num_vars, int nu, MultiIndex x, MultiIndex dx, const Scalar& c,
                                        Ordering ordering) {
    FormalOperator op(num_vars, ordering);
    op.add_term(nu, std::move(x), std::move(dx), c);
    return op;
}

FormalOperator FormalOperator::coordinate(int num_vars, int i) {
    auto n = static_cast<std::size_t>(num_vars);
    if (i < 0 || i >= num_vars) throw InputShapeError("coordinate index out of range");
    return monomial(num_vars, 0, MultiIndex::unit(n, static_cast<std::size_t>(i)), MultiIndex(n), Scalar(1));
}

FormalOperator FormalOperator::derivative(int num_vars, int i) {
    auto n = static_cast<std::size_t>(num_vars);
    if (i < 0 || i >= num_vars) throw InputShapeError("derivative index out of range");
    return monomial(num_vars, 0, MultiIndex(n), MultiIndex::unit(n, static_cast<std::size_t>(i)), Scalar(1));
}

FormalOperator FormalOperator::multiplication(const Jet& f) {
    if (!f.aux_names().empty())
        throw InputShapeError("operator coefficients cannot carry auxiliary parameters");
    FormalOperator op(f.num_vars());
    auto n = static_cast<std::size_t>(f.num_vars());
    for (const auto& [key, c] : f.terms()) op.add_term(key.nu, key.x, MultiIndex(n), c);
    op.set_nu_min(f.nu_min());
    return op;
}

void FormalOperator::add_term(int nu, MultiIndex x, MultiIndex dx, const Scalar& c) {
    add_term(OpKey{nu, std::move(x), std::move(dx)}, c);
}

void FormalOperator::add_term(const OpKey& key, const Scalar& c) {
    const auto n = static_cast<std::size_t>(num_vars_);
    if (key.x.size() != n || key.dx.size() != n)
        throw InputShapeError("operator term multi-index length differs from " + std::to_string(num_vars_));
    if (!key.x.nonnegative() || !key.dx.nonnegative()) throw InputShapeError("negative exponent in operator term");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    nu_min_ = std::min(nu_min_, key.nu);
}

Scalar FormalOperator::coeff(int nu, const MultiIndex& x, const MultiIndex& dx) const {
    auto it = terms_.find(OpKey{nu, x, dx});
    return it == terms_.end() ? Scalar(0) : it->second;
}

void FormalOperator::set_nu_min(int nu_min) {
    if (auto lo = lowest_nu()) nu_min = std::min(nu_min, *lo);
    nu_min_ = nu_min;
}

std::optional<int> FormalOperator::min_degree(const GradingContext& g) const {
    std::optional<int> best;
    for (const auto& [key, c] : terms_) {
        int d = degree(key, g);
        if (!best || d < *best) best = d;
    }
    return best;
}

std::optional<int> FormalOperator::lowest_nu() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.nu;
}

FormalOperator FormalOperator::truncated(const TruncationSpec& trunc) const {
    FormalOperator out(num_vars_, ordering_);
    out.nu_min_ = nu_min_;
    for (const auto& [key, c] : terms_)
        if (degree(key, trunc.grading) <= trunc.max_degree) out.terms_.emplace_hint(out.terms_.end(), key, c);
    return out;
}

bool FormalOperator::is_multiplication() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.dx.is_zero(); });
}

bool FormalOperator::has_constant_coefficients() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.x.is_zero(); });
}

Jet FormalOperator::as_jet() const {
    if (!is_multiplication()) throw InputShapeError("operator is not a multiplication operator");
    Jet f(num_vars_);
    for (const auto& [key, c] : terms_) f.add_term(key.nu, key.x, c);
    f.set_nu_min(nu_min_);
    return f;
}

FormalOperator& FormalOperator::operator+=(const FormalOperator& o) {
    check_same_shape(*this, o, "add");
    if (o.ordering_ != ordering_) return *this += reorder(o, ordering_);
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    nu_min_ = std::min(nu_min_, o.nu_min_);
    return *this;
}

FormalOperator& FormalOperator::operator-=(const FormalOperator& o) {
    check_same_shape(*this, o, "sub");
    if (o.ordering_ != ordering_) return *this -= reorder(o, ordering_);
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    nu_min_ = std::min(nu_min_, o.nu_min_);
    return *this;
}

FormalOperator FormalOperator::scaled(const Scalar& s) const {
    FormalOperator out(num_vars_, ordering_);
    out.nu_min_ = nu_min_;
    if (s.is_zero()) return out;
    for (const auto& [key, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), key, c * s);
    return out;
}

FormalOperator FormalOperator::shifted_nu(int k) const {
    FormalOperator out(num_vars_, ordering_);
    out.nu_min_ = nu_min_ + k;
    for (const auto& [key, c] : terms_) out.terms_.emplace(OpKey{key.nu + k, key.x, key.dx}, c);
    return out;
}

bool operator==(const FormalOperator& a, const FormalOperator& b) {
    if (a.num_vars_ != b.num_vars_) return false;
    if (a.ordering_ == b.ordering_) return a.terms_ == b.terms_;
    return as_normal(a).terms_ == as_normal(b).terms_;
}

FormalOperator op_compose(const FormalOperator& a, const FormalOperator& b, const TruncationSpec& trunc) {
    return compose_impl(a, b, &trunc);
}

FormalOperator op_compose(const FormalOperator& a, const FormalOperator& b) { return compose_impl(a, b, nullptr); }

FormalOperator op_commutator(const FormalOperator& a, const FormalOperator& b, const TruncationSpec& trunc) {
    return op_compose(a, b, trunc) - op_compose(b, a, trunc);
}

FormalOperator op_commutator(const FormalOperator& a, const FormalOperator& b) {
    return op_compose(a, b) - op_compose(b, a);
}

Jet op_apply(const FormalOperator& a, const Jet& f, const TruncationSpec& trunc) { return apply_impl(a, f, &trunc); }

Jet op_apply(const FormalOperator& a, const Jet& f) { return apply_impl(a, f, nullptr); }

FormalOperator reorder(const FormalOperator& a, Ordering target) {
    if (a.ordering() == target) return a;
    // normal -> anti:  x^a d^b = sum_s (-1)^s C(b,s) a!/(a-s)! d^(b-s) x^(a-s)
    // anti -> normal:  d^b x^a = sum_s        C(b,s) a!/(a-s)! x^(a-s) d^(b-s)
    const bool to_anti = target == Ordering::anti_normal;
    const std::size_t n = static_cast<std::size_t>(a.num_vars());
    FormalOperator out(a.num_vars(), target);
    std::vector<std::vector<Scalar>> rows(n);
    for (const auto& [key, c] : a.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = leibniz_row(key.dx[i], key.x[i]);
            if (to_anti)
                for (std::size_t s = 1; s < rows[i].size(); s += 2) rows[i][s] = -rows[i][s];
        }
        for_each_contraction(rows, [&](const MultiIndex& sigma, const Scalar& f) {
            out.add_term(OpKey{key.nu, key.x - sigma, key.dx - sigma}, c * f);
        });
    }
    out.set_nu_min(a.nu_min());
    return out;
}

FormalOperator op_transpose(const FormalOperator& a) {
    // (nu^k x^alpha d^beta)^t = (-1)^|beta| d^beta o x^alpha and symmetrically for anti-normal terms.
    const Ordering flipped = a.ordering() == Ordering::normal ? Ordering::anti_normal : Ordering::normal;
    FormalOperator t(a.num_vars(), flipped);
    for (const auto& [key, c] : a.terms()) t.add_term(key, key.dx.total() % 2 == 0 ? c : -c);
    t.set_nu_min(a.nu_min());
    return as_normal(t);
}

FormalOperator constant_part(const FormalOperator& a_in) {
    const FormalOperator a = as_normal(a_in);
    FormalOperator out(a.num_vars());
    for (const auto& [key, c] : a.terms())
        if (key.x.is_zero()) out.add_term(key, c);
    out.set_nu_min(a.nu_min());
    return out;
}

std::vector<std::string> symbol_aux_names(int num_vars) {
    std::vector<std::string> names;
    for (int i = 1; i <= num_vars; ++i) names.push_back("xi" + std::to_string(i));
    return names;
}

Jet full_symbol(const FormalOperator& a_in) {
    const FormalOperator a = as_normal(a_in);
    Jet s(a.num_vars(), symbol_aux_names(a.num_vars()));
    for (const auto& [key, c] : a.terms()) s.add_term(JetKey{key.nu - key.dx.total(), key.x, key.dx}, c);
    return s;
}

OperatorClassReport classify(const FormalOperator& a_in) {
    const FormalOperator a = as_normal(a_in);
    OperatorClassReport report{true, true, std::nullopt};
    const GradingContext standard = GradingContext::standard();
    for (const auto& [key, c] : a.terms()) {
        const int order = key.dx.total();
        if (key.nu < 0 || order > key.nu) report.is_natural = false;
        if (key.nu < 1 || order > key.nu + 1) report.in_g_nu = false;
        int d = a.degree(key, standard);
        if (!report.standard_degree || d < *report.standard_degree) report.standard_degree = d;
    }
    return report;
}

} // namespace jetphase
