#include "jetphase/jet.hpp"

#include <algorithm>
#include <string>

#include "jetphase/errors.hpp"

namespace jetphase {

Jet::Jet(int num_vars, std::vector<std::string> aux_names)
    : num_vars_(num_vars), aux_names_(std::move(aux_names)) {
    if (num_vars < 1) throw InputShapeError("a jet needs at least one chart variable");
}

Jet Jet::constant(int num_vars, const Scalar& c, std::vector<std::string> aux_names) {
    Jet j(num_vars, std::move(aux_names));
    j.add_term(0, MultiIndex(static_cast<std::size_t>(num_vars)), c);
    return j;
}

Jet Jet::monomial(int num_vars, int nu, MultiIndex x, const Scalar& c,
                  std::vector<std::string> aux_names, MultiIndex aux) {
    Jet j(num_vars, std::move(aux_names));
    j.add_term(nu, std::move(x), c, std::move(aux));
    return j;
}

Jet Jet::coordinate(int num_vars, int i) {
    if (i < 0 || i >= num_vars) throw InputShapeError("coordinate index out of range");
    return monomial(num_vars, 0, MultiIndex::unit(static_cast<std::size_t>(num_vars),
                                                  static_cast<std::size_t>(i)),
                    Scalar(1));
}

void Jet::add_term(int nu, MultiIndex x, const Scalar& c, MultiIndex aux) {
    if (aux.size() == 0 && !aux_names_.empty()) aux = MultiIndex(aux_names_.size());
    add_term(JetKey{nu, std::move(x), std::move(aux)}, c);
}

void Jet::add_term(const JetKey& key, const Scalar& c) {
    if (key.x.size() != static_cast<std::size_t>(num_vars_))
        throw InputShapeError("x multi-index has " + std::to_string(key.x.size()) +
                              " entries, expected " + std::to_string(num_vars_));
    if (key.aux.size() != aux_names_.size())
        throw InputShapeError("aux multi-index has " + std::to_string(key.aux.size()) +
                              " entries, expected " + std::to_string(aux_names_.size()));
    if (!key.x.nonnegative() || !key.aux.nonnegative())
        throw InputShapeError("negative exponent in jet term");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    nu_min_ = std::min(nu_min_, key.nu);
}

Scalar Jet::coeff(int nu, const MultiIndex& x, const MultiIndex& aux) const {
    JetKey key{nu, x, aux.size() == 0 && !aux_names_.empty() ? MultiIndex(aux_names_.size()) : aux};
    auto it = terms_.find(key);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void Jet::set_nu_min(int nu_min) {
    if (auto lo = lowest_nu()) nu_min = std::min(nu_min, *lo);
    nu_min_ = nu_min;
}

std::optional<int> Jet::lowest_nu() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.nu;
}

std::optional<int> Jet::highest_nu() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first.nu;
}

int Jet::degree(const JetKey& key, const GradingContext& g) const {
    int d = g.nu_weight * key.nu + g.x_weight * key.x.total();
    for (std::size_t k = 0; k < aux_names_.size(); ++k) d += g.aux_weight(aux_names_[k]) * key.aux[k];
    return d;
}

std::optional<int> Jet::min_degree(const GradingContext& g) const {
    std::optional<int> best;
    for (const auto& [key, c] : terms_) {
        int d = degree(key, g);
        if (!best || d < *best) best = d;
    }
    return best;
}

Jet Jet::truncated(const TruncationSpec& trunc) const {
    Jet out(num_vars_, aux_names_);
    out.nu_min_ = nu_min_;
    for (const auto& [key, c] : terms_)
        if (degree(key, trunc.grading) <= trunc.max_degree) out.terms_.emplace_hint(out.terms_.end(), key, c);
    return out;
}

Jet Jet::truncated_nu(int max_nu) const {
    Jet out(num_vars_, aux_names_);
    out.nu_min_ = nu_min_;
    for (const auto& [key, c] : terms_)
        if (key.nu <= max_nu) out.terms_.emplace_hint(out.terms_.end(), key, c);
    return out;
}

Jet Jet::at_origin() const {
    Jet out(num_vars_, aux_names_);
    out.nu_min_ = nu_min_;
    for (const auto& [key, c] : terms_)
        if (key.x.is_zero()) out.terms_.emplace_hint(out.terms_.end(), key, c);
    return out;
}

Scalar Jet::nu_coeff(int nu) const {
    return coeff(nu, MultiIndex(static_cast<std::size_t>(num_vars_)), MultiIndex(aux_names_.size()));
}

Jet Jet::nu_component(int nu) const {
    Jet out(num_vars_, aux_names_);
    for (const auto& [key, c] : terms_)
        if (key.nu == nu) out.add_term(JetKey{0, key.x, key.aux}, c);
    return out;
}

void Jet::check_compatible(const Jet& o, const char* what) const {
    if (num_vars_ != o.num_vars_)
        throw InputShapeError(std::string(what) + ": variable count mismatch (" +
                              std::to_string(num_vars_) + " vs " + std::to_string(o.num_vars_) + ")");
    if (aux_names_ != o.aux_names_)
        throw InputShapeError(std::string(what) + ": auxiliary parameter mismatch");
}

Jet Jet::operator-() const { return scaled(Scalar(-1)); }

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o, "add");
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    nu_min_ = std::min(nu_min_, o.nu_min_);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o, "sub");
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    nu_min_ = std::min(nu_min_, o.nu_min_);
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b, "mul");
    Jet out(a.num_vars_, a.aux_names_);
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) out.add_term(JetKey{ka.nu + kb.nu, ka.x + kb.x, ka.aux + kb.aux}, ca * cb);
    out.nu_min_ = std::min(out.nu_min_, a.nu_min_ + b.nu_min_);
    return out;
}

Jet Jet::scaled(const Scalar& s) const {
    Jet out(num_vars_, aux_names_);
    out.nu_min_ = nu_min_;
    if (s.is_zero()) return out;
    for (const auto& [key, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), key, c * s);
    return out;
}

Jet Jet::shifted_nu(int k) const {
    Jet out(num_vars_, aux_names_);
    out.nu_min_ = nu_min_ + k;
    for (const auto& [key, c] : terms_) out.terms_.emplace(JetKey{key.nu + k, key.x, key.aux}, c);
    return out;
}

Jet add(const Jet& a, const Jet& b, const TruncationSpec& trunc) { return (a + b).truncated(trunc); }

Jet sub(const Jet& a, const Jet& b, const TruncationSpec& trunc) { return (a - b).truncated(trunc); }

Jet scale(const Jet& a, const Scalar& s, const TruncationSpec& trunc) { return a.scaled(s).truncated(trunc); }

Jet mul(const Jet& a, const Jet& b, const TruncationSpec& trunc) {
    a.check_compatible(b, "mul");
    const auto& g = trunc.grading;
    std::vector<std::pair<int, const Jet::TermMap::value_type*>> rhs;
    rhs.reserve(b.size());
    for (const auto& t : b.terms()) rhs.emplace_back(b.degree(t.first, g), &t);
    std::sort(rhs.begin(), rhs.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

    Jet out(a.num_vars(), a.aux_names());
    for (const auto& [ka, ca] : a.terms()) {
        int da = a.degree(ka, g);
        for (const auto& [db, tb] : rhs) {
            if (da + db > trunc.max_degree) break;
            const auto& [kb, cb] = *tb;
            out.add_term(JetKey{ka.nu + kb.nu, ka.x + kb.x, ka.aux + kb.aux}, ca * cb);
        }
    }
    out.set_nu_min(a.nu_min() + b.nu_min());
    return out;
}

Jet jet_ring_op(const Jet& a, const Jet& b, RingOp kind, const TruncationSpec& trunc, const Scalar& s) {
    switch (kind) {
    case RingOp::add: return add(a, b, trunc);
    case RingOp::sub: return sub(a, b, trunc);
    case RingOp::mul: return mul(a, b, trunc);
    case RingOp::scale: return scale(a, s, trunc);
    }
    throw InputShapeError("unknown ring operation");
}

namespace {

void require_positive_degree(const Jet& h, const TruncationSpec& trunc, const char* what) {
    for (const auto& [key, c] : h.terms()) {
        if (h.degree(key, trunc.grading) <= 0)
            throw ConvergenceError(std::string(what) + ": term of non-positive degree " +
                                   std::to_string(h.degree(key, trunc.grading)) + " present");
    }
}

} // namespace

Jet jet_exp(const Jet& f, const TruncationSpec& trunc) {
    require_positive_degree(f, trunc, "jet_exp");
    Jet sum = Jet::constant(f.num_vars(), Scalar(1), f.aux_names()).truncated(trunc);
    Jet power = sum;
    for (int k = 1; k <= std::max(trunc.max_degree, 0); ++k) {
        power = mul(power, f, trunc).scaled(Scalar::rational(1, k));
        if (power.is_zero()) break;
        sum += power;
    }
    return sum;
}

Jet jet_log(const Jet& f, const TruncationSpec& trunc) {
    Jet one = Jet::constant(f.num_vars(), Scalar(1), f.aux_names());
    Jet h = f - one;
    try {
        require_positive_degree(h, trunc, "jet_log");
    } catch (const ConvergenceError&) {
        throw ConvergenceError("jet_log: argument is not 1 plus positive-degree terms");
    }
    // log(1 + h) = sum (-1)^{k+1} h^k / k
    Jet sum(f.num_vars(), f.aux_names());
    Jet power = one.truncated(trunc);
    for (int k = 1; k <= std::max(trunc.max_degree, 0); ++k) {
        power = mul(power, h, trunc);
        if (power.is_zero()) break;
        sum += power.scaled(Scalar::rational(k % 2 == 1 ? 1 : -1, k));
    }
    sum.set_nu_min(f.nu_min());
    return sum;
}

Jet jet_derive(const Jet& f, JetVariable var) {
    Jet out(f.num_vars(), f.aux_names());
    switch (var.kind) {
    case JetVariable::Kind::x:
        if (var.index < 0 || var.index >= f.num_vars())
            throw InputShapeError("jet_derive: no chart variable x" + std::to_string(var.index + 1));
        for (const auto& [key, c] : f.terms()) {
            int e = key.x[static_cast<std::size_t>(var.index)];
            if (e == 0) continue;
            JetKey k = key;
            k.x[static_cast<std::size_t>(var.index)] -= 1;
            out.add_term(k, c * Scalar(e));
        }
        out.set_nu_min(f.nu_min());
        return out;
    case JetVariable::Kind::nu:
        for (const auto& [key, c] : f.terms()) {
            if (key.nu == 0) continue;
            JetKey k = key;
            k.nu -= 1;
            out.add_term(k, c * Scalar(key.nu));
        }
        out.set_nu_min(f.nu_min() - 1);
        return out;
    case JetVariable::Kind::aux:
        if (var.index < 0 || static_cast<std::size_t>(var.index) >= f.aux_names().size())
            throw InputShapeError("jet_derive: no auxiliary parameter #" + std::to_string(var.index));
        for (const auto& [key, c] : f.terms()) {
            int e = key.aux[static_cast<std::size_t>(var.index)];
            if (e == 0) continue;
            JetKey k = key;
            k.aux[static_cast<std::size_t>(var.index)] -= 1;
            out.add_term(k, c * Scalar(e));
        }
        out.set_nu_min(f.nu_min());
        return out;
    }
    throw InputShapeError("jet_derive: unknown variable kind");
}

Jet graded_component(const Jet& f, const GradingContext& grading, int degree) {
    Jet out(f.num_vars(), f.aux_names());
    for (const auto& [key, c] : f.terms())
        if (f.degree(key, grading) == degree) out.add_term(key, c);
    out.set_nu_min(f.nu_min());
    return out;
}

} // namespace jetphase
