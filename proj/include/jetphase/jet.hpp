#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jetphase/grading.hpp"
#include "jetphase/multi_index.hpp"
#include "jetphase/scalar.hpp"

namespace jetphase {

struct JetKey {
    int nu = 0;
    MultiIndex x;
    MultiIndex aux;

    friend bool operator==(const JetKey&, const JetKey&) = default;
    friend std::strong_ordering operator<=>(const JetKey& a, const JetKey& b) {
        if (auto c = a.nu <=> b.nu; c != 0) return c;
        if (auto c = a.x <=> b.x; c != 0) return c;
        return a.aux <=> b.aux;
    }
};

/// Truncated formal series in chart variables x^1..x^n, the formal parameter nu
/// (integer exponents bounded below) and optional named auxiliary parameters.
/// Stored coefficients are never zero.
class Jet {
public:
    using TermMap = std::map<JetKey, Scalar>;

    Jet() : Jet(1) {}
    explicit Jet(int num_vars, std::vector<std::string> aux_names = {});

    static Jet constant(int num_vars, const Scalar& c, std::vector<std::string> aux_names = {});
    static Jet monomial(int num_vars, int nu, MultiIndex x, const Scalar& c,
                        std::vector<std::string> aux_names = {}, MultiIndex aux = {});
    /// The coordinate function x^i (0-based i).
    static Jet coordinate(int num_vars, int i);

    int num_vars() const noexcept { return num_vars_; }
    const std::vector<std::string>& aux_names() const noexcept { return aux_names_; }
    int nu_min() const noexcept { return nu_min_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Adds c to the coefficient of the given monomial, dropping it if it cancels.
    void add_term(int nu, MultiIndex x, const Scalar& c, MultiIndex aux = {});
    void add_term(const JetKey& key, const Scalar& c);
    Scalar coeff(int nu, const MultiIndex& x, const MultiIndex& aux = {}) const;
    /// Lowers the declared nu floor (never raises it above a stored exponent).
    void set_nu_min(int nu_min);

    /// Smallest nu exponent actually present, if any.
    std::optional<int> lowest_nu() const;
    std::optional<int> highest_nu() const;

    int degree(const JetKey& key, const GradingContext& g) const;
    std::optional<int> min_degree(const GradingContext& g) const;
    Jet truncated(const TruncationSpec& trunc) const;
    /// Keeps nu exponents <= max_nu.
    Jet truncated_nu(int max_nu) const;

    /// Value at x = 0 as a jet with the same shape (only x = 0 terms kept).
    Jet at_origin() const;
    /// Coefficient series of nu^k x^0 aux^0, i.e. a scalar when the jet is a pure number series.
    Scalar nu_coeff(int nu) const;
    /// The x-jet multiplying nu^k (aux exponents kept).
    Jet nu_component(int nu) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    /// Exact (untruncated) product.
    friend Jet operator*(const Jet& a, const Jet& b);
    Jet scaled(const Scalar& s) const;
    /// Multiplies by nu^k.
    Jet shifted_nu(int k) const;

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.num_vars_ == b.num_vars_ && a.aux_names_ == b.aux_names_ && a.terms_ == b.terms_;
    }

    void check_compatible(const Jet& o, const char* what) const;

private:
    int num_vars_;
    std::vector<std::string> aux_names_;
    int nu_min_ = 0;
    TermMap terms_;
};

enum class RingOp { add, sub, mul, scale };

Jet add(const Jet& a, const Jet& b, const TruncationSpec& trunc);
Jet sub(const Jet& a, const Jet& b, const TruncationSpec& trunc);
/// Truncated product; pairs whose degrees already exceed the bound are skipped.
Jet mul(const Jet& a, const Jet& b, const TruncationSpec& trunc);
Jet scale(const Jet& a, const Scalar& s, const TruncationSpec& trunc);
/// Dispatcher over the four ring operations; `s` is only used by RingOp::scale.
Jet jet_ring_op(const Jet& a, const Jet& b, RingOp kind, const TruncationSpec& trunc,
                const Scalar& s = Scalar(1));

/// exp(f) = sum f^k/k!. Every term of f must have positive degree.
Jet jet_exp(const Jet& f, const TruncationSpec& trunc);
/// log(f) = -sum (1-f)^k/k. f - 1 must have only positive-degree terms.
Jet jet_log(const Jet& f, const TruncationSpec& trunc);

struct JetVariable {
    enum class Kind { x, nu, aux };
    Kind kind = Kind::x;
    int index = 0;

    static JetVariable x(int i) { return {Kind::x, i}; }
    static JetVariable nu() { return {Kind::nu, 0}; }
    static JetVariable aux(int i) { return {Kind::aux, i}; }
};

Jet jet_derive(const Jet& f, JetVariable var);
Jet graded_component(const Jet& f, const GradingContext& grading, int degree);

} // namespace jetphase
