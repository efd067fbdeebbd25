#include "jetphase/star.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "jetphase/errors.hpp"
#include "jetphase/filtered_exp.hpp"

namespace jetphase {

namespace {

/// d^beta f, built up one derivative at a time and cached.
class DerivativeCache {
public:
    explicit DerivativeCache(const Jet& f) : f_(f) {}

    const Jet& operator()(const MultiIndex& beta) {
        auto it = cache_.find(beta);
        if (it != cache_.end()) return it->second;
        if (beta.is_zero()) return cache_.emplace(beta, f_).first->second;
        std::size_t i = 0;
        while (beta[i] == 0) ++i;
        MultiIndex prev = beta;
        prev[i] -= 1;
        Jet d = jet_derive((*this)(prev), JetVariable::x(static_cast<int>(i)));
        return cache_.emplace(beta, std::move(d)).first->second;
    }

private:
    Jet f_;
    std::map<MultiIndex, Jet> cache_;
};

int nu_floor(const Jet& f) { return std::min(0, f.lowest_nu().value_or(0)); }

TruncationSpec lowered(const TruncationSpec& trunc, int by) {
    TruncationSpec t = trunc;
    t.max_degree -= by;
    return t;
}

Jet bidifferential(const FormalOperator& c, DerivativeCache& df, DerivativeCache& dg, const Jet& shape,
                   const TruncationSpec& trunc) {
    const auto n = static_cast<std::size_t>(shape.num_vars());
    Jet out(shape.num_vars(), shape.aux_names());
    const FormalOperator normal = reorder(c, Ordering::normal);
    for (const auto& [key, coeff] : normal.terms()) {
        const Jet& fy = df(key.dx.slice(0, n));
        if (fy.is_zero()) continue;
        const Jet& gz = dg(key.dx.slice(n, n));
        if (gz.is_zero()) continue;
        Jet weight = Jet::monomial(shape.num_vars(), key.nu, key.x.slice(0, n) + key.x.slice(n, n), coeff,
                                   shape.aux_names());
        out += mul(mul(weight, fy, trunc), gz, trunc);
    }
    return out.truncated(trunc);
}

/// fg + sum_r nu^r C_r(f, g) over every stored C_r, truncated by `trunc`.
Jet star_product_all(const StarProduct& s, const Jet& f, const Jet& g, const TruncationSpec& trunc) {
    f.check_compatible(g, "star product");
    DerivativeCache df(f);
    DerivativeCache dg(g);
    Jet out = mul(f, g, trunc);
    for (int r = 1; r <= static_cast<int>(s.c_ops.size()); ++r) {
        const int shift = trunc.grading.nu_weight * r;
        out += bidifferential(*s.c(r), df, dg, f, lowered(trunc, shift)).shifted_nu(r);
    }
    return out.truncated(trunc);
}

FormalOperator multiplication_operator(const StarProduct& s, const Jet& f, int n_max, bool left) {
    validate_star(s);
    const int n = s.num_vars;
    const auto un = static_cast<std::size_t>(n);
    if (f.num_vars() != n) throw InputShapeError("function lives on the wrong chart");
    if (!f.aux_names().empty()) throw InputShapeError("multiplication operators take functions without aux");
    if (f.lowest_nu().value_or(0) < 0) throw InputShapeError("multiplication operators need a nu-regular function");
    const TruncationSpec trunc = TruncationSpec::nu(n_max);
    DerivativeCache df(f);
    FormalOperator out = FormalOperator::multiplication(f.truncated(trunc));
    for (int r = 1; r <= std::min(n_max, static_cast<int>(s.c_ops.size())); ++r) {
        const FormalOperator normal = reorder(*s.c(r), Ordering::normal);
        for (const auto& [key, c] : normal.terms()) {
            const MultiIndex fixed = left ? key.dx.slice(0, un) : key.dx.slice(un, un);
            const MultiIndex free = left ? key.dx.slice(un, un) : key.dx.slice(0, un);
            const Jet coeff = mul(Jet::monomial(n, key.nu, key.x.slice(0, un) + key.x.slice(un, un), c),
                                  df(fixed), TruncationSpec::nu(n_max - r));
            for (const auto& [jk, jc] : coeff.terms()) out.add_term(jk.nu + r, jk.x, free, jc);
        }
    }
    return out.truncated(trunc);
}

/// T(d_y + d_z), T(d_y) or T(d_z) for a constant-coefficient operator T on n variables.
FormalOperator embed(const FormalOperator& t, int which) {
    const int n = t.num_vars();
    const auto un = static_cast<std::size_t>(n);
    FormalOperator out(2 * n);
    const MultiIndex zero(2 * un);
    for (const auto& [key, c] : t.terms()) {
        if (which == 0) {
            out.add_term(key.nu, zero, MultiIndex::concat(key.dx, MultiIndex(un)), c);
        } else if (which == 1) {
            out.add_term(key.nu, zero, MultiIndex::concat(MultiIndex(un), key.dx), c);
        } else {
            for (const MultiIndex& part : indices_below(key.dx)) {
                Scalar w = c;
                for (std::size_t i = 0; i < un; ++i) w *= binomial(key.dx[i], part[i]);
                out.add_term(key.nu, zero, MultiIndex::concat(part, key.dx - part), w);
            }
        }
    }
    return out;
}

} // namespace

void validate_star(const StarProduct& s) {
    if (s.num_vars < 1) throw InputShapeError("a star product needs at least one variable");
    for (std::size_t r = 0; r < s.c_ops.size(); ++r) {
        const FormalOperator& c = s.c_ops[r];
        if (c.num_vars() != 2 * s.num_vars)
            throw InputShapeError("C_" + std::to_string(r + 1) + " must act on " + std::to_string(2 * s.num_vars) +
                                  " variables");
        for (const auto& [key, coeff] : c.terms())
            if (key.nu != 0) throw InputShapeError("C_" + std::to_string(r + 1) + " must be nu-free");
    }
}

StarProduct moyal_star(const ScalarMatrix& pi, int n_max) {
    const int n = static_cast<int>(pi.size());
    const auto un = pi.size();
    if (n < 1) throw InputShapeError("empty Poisson matrix");
    FormalOperator p(2 * n);
    const MultiIndex zero(2 * un);
    for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j)
            p.add_term(0, zero, MultiIndex::unit(2 * un, i) + MultiIndex::unit(2 * un, un + j), pi(i, j));
    StarProduct s{n, {}};
    FormalOperator power = FormalOperator::identity(2 * n);
    for (int r = 1; r <= n_max; ++r) {
        power = op_compose(power, p).scaled(Scalar::rational(1, r));
        s.c_ops.push_back(power);
    }
    return s;
}

Jet apply_bidifferential(const FormalOperator& c, const Jet& f, const Jet& g, const TruncationSpec& trunc) {
    f.check_compatible(g, "bidifferential operator");
    if (c.num_vars() != 2 * f.num_vars()) throw InputShapeError("bidifferential operator on the wrong chart");
    DerivativeCache df(f);
    DerivativeCache dg(g);
    return bidifferential(c, df, dg, f, trunc);
}

Jet star_multiply(const StarProduct& s, const Jet& f, const Jet& g, int n_max) {
    validate_star(s);
    if (f.num_vars() != s.num_vars || g.num_vars() != s.num_vars)
        throw InputShapeError("star product on " + std::to_string(s.num_vars) + " variables applied to jets on " +
                              std::to_string(f.num_vars()) + " and " + std::to_string(g.num_vars()));
    f.check_compatible(g, "star_multiply");
    const TruncationSpec trunc = TruncationSpec::nu(n_max);
    DerivativeCache df(f);
    DerivativeCache dg(g);
    Jet out = mul(f, g, trunc);
    const int top = std::min(n_max - nu_floor(f) - nu_floor(g), static_cast<int>(s.c_ops.size()));
    for (int r = 1; r <= top; ++r)
        out += bidifferential(*s.c(r), df, dg, f, TruncationSpec::nu(n_max - r)).shifted_nu(r);
    out.set_nu_min(std::min(0, nu_floor(f) + nu_floor(g)));
    return out.truncated(trunc);
}

bool is_natural_star(const StarProduct& s, int n_max) {
    validate_star(s);
    const auto un = static_cast<std::size_t>(s.num_vars);
    for (int r = 1; r <= std::min(n_max, static_cast<int>(s.c_ops.size())); ++r) {
        const FormalOperator normal = reorder(*s.c(r), Ordering::normal);
        for (const auto& [key, c] : normal.terms())
            if (key.dx.slice(0, un).total() > r || key.dx.slice(un, un).total() > r) return false;
    }
    return true;
}

PointDistribution two_point_distribution(const StarProduct& s, int n_max) {
    validate_star(s);
    PointDistribution out = PointDistribution::delta(2 * s.num_vars);
    for (int r = 1; r <= std::min(n_max, static_cast<int>(s.c_ops.size())); ++r) {
        const FormalOperator normal = reorder(*s.c(r), Ordering::normal);
        for (const auto& [key, c] : normal.terms())
            if (key.x.is_zero()) out.add_term(r, key.dx, c);
    }
    return out;
}

Jet star_exponential(const StarProduct& s, const Jet& f, const TruncationSpec& trunc) {
    validate_star(s);
    if (f.num_vars() != s.num_vars) throw InputShapeError("star exponential of a jet on the wrong chart");
    for (const auto& [key, c] : f.terms()) {
        if (key.nu < -1)
            throw ConvergenceError("star exponential: term of nu-order " + std::to_string(key.nu) + " below -1");
        if (f.degree(key, trunc.grading) < 1)
            throw ConvergenceError("star exponential: term without positive filtration degree");
    }
    Jet sum = Jet::constant(f.num_vars(), Scalar(1), f.aux_names());
    Jet power = sum;
    for (int k = 1; k <= std::max(trunc.max_degree, 0); ++k) {
        power = star_product_all(s, power, f, trunc).scaled(Scalar::rational(1, k));
        if (power.is_zero()) break;
        sum += power;
    }
    sum.set_nu_min(std::min(0, f.nu_min() * std::max(trunc.max_degree, 0)));
    return sum;
}

FormalOperator left_multiplication(const StarProduct& s, const Jet& f, int n_max) {
    return multiplication_operator(s, f, n_max, true);
}

FormalOperator right_multiplication(const StarProduct& s, const Jet& g, int n_max) {
    return multiplication_operator(s, g, n_max, false);
}

Jet left_mult_symbol(const StarProduct& s, const Jet& f, int n_max) {
    return full_symbol(left_multiplication(s, f, n_max));
}

StarProduct gauge_transform(const StarProduct& s, const FormalOperator& t, int n_max) {
    validate_star(s);
    const int n = s.num_vars;
    if (t.num_vars() != n) throw InputShapeError("gauge operator lives on the wrong chart");
    if (!t.has_constant_coefficients()) throw InputShapeError("gauge operator must have constant coefficients");
    for (const auto& c : s.c_ops)
        if (!c.has_constant_coefficients())
            throw InputShapeError("gauge transform needs a constant-coefficient star product");
    const TruncationSpec trunc = TruncationSpec::nu(n_max);
    const FormalOperator one = FormalOperator::identity(n);
    if (!(constant_part(t).truncated(TruncationSpec::nu(0)) == one))
        throw InputShapeError("gauge operator must start with the identity");

    FormalOperator product = FormalOperator::identity(2 * n);
    for (int r = 1; r <= static_cast<int>(s.c_ops.size()); ++r) product += s.c(r)->shifted_nu(r);
    const FormalOperator t_inv =
        op_exp(-op_log(t, FiltrationSpec::nu(), trunc), FiltrationSpec::nu(), trunc);
    FormalOperator b = op_compose(embed(t_inv, 2), product, trunc);
    b = op_compose(b, embed(t, 0), trunc);
    b = op_compose(b, embed(t, 1), trunc);

    StarProduct out{n, {}};
    for (int r = 1; r <= n_max; ++r) {
        FormalOperator c(2 * n);
        for (const auto& [key, coeff] : b.terms())
            if (key.nu == r) c.add_term(0, key.x, key.dx, coeff);
        out.c_ops.push_back(c);
    }
    return out;
}

} // namespace jetphase
