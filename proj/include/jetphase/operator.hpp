#pragma once

#include <compare>
#include <map>
#include <optional>

#include "jetphase/grading.hpp"
#include "jetphase/jet.hpp"
#include "jetphase/multi_index.hpp"
#include "jetphase/scalar.hpp"

namespace jetphase {

enum class Ordering { normal, anti_normal };

struct OpKey {
    int nu = 0;
    MultiIndex x;
    MultiIndex dx;

    friend bool operator==(const OpKey&, const OpKey&) = default;
    friend std::strong_ordering operator<=>(const OpKey& a, const OpKey& b) {
        if (auto c = a.nu <=> b.nu; c != 0) return c;
        if (auto c = a.x <=> b.x; c != 0) return c;
        return a.dx <=> b.dx;
    }
};

/// Sparse element of the nu-Laurent Weyl algebra on n variables. A term (a, alpha, beta)
/// denotes nu^a x^alpha d^beta in normal ordering and nu^a d^beta x^alpha in anti-normal
/// ordering. Equality compares normal forms.
class FormalOperator {
public:
    using TermMap = std::map<OpKey, Scalar>;

    FormalOperator() : FormalOperator(1) {}
    explicit FormalOperator(int num_vars, Ordering ordering = Ordering::normal);

    static FormalOperator identity(int num_vars) { return scalar(num_vars, Scalar(1)); }
    static FormalOperator scalar(int num_vars, const Scalar& c);
    static FormalOperator monomial(int num_vars, int nu, MultiIndex x, MultiIndex dx, const Scalar& c,
                                   Ordering ordering = Ordering::normal);
    /// Multiplication by x^i (0-based).
    static FormalOperator coordinate(int num_vars, int i);
    /// d/dx^i (0-based).
    static FormalOperator derivative(int num_vars, int i);
    /// Multiplication by an x-jet; auxiliary parameters are not allowed in operator coefficients.
    static FormalOperator multiplication(const Jet& f);

    int num_vars() const noexcept { return num_vars_; }
    Ordering ordering() const noexcept { return ordering_; }
    int nu_min() const noexcept { return nu_min_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    void add_term(int nu, MultiIndex x, MultiIndex dx, const Scalar& c);
    void add_term(const OpKey& key, const Scalar& c);
    Scalar coeff(int nu, const MultiIndex& x, const MultiIndex& dx) const;
    void set_nu_min(int nu_min);

    int degree(const OpKey& key, const GradingContext& g) const {
        return g.nu_weight * key.nu + g.x_weight * key.x.total() + g.d_weight * key.dx.total();
    }
    std::optional<int> min_degree(const GradingContext& g) const;
    std::optional<int> lowest_nu() const;
    FormalOperator truncated(const TruncationSpec& trunc) const;

    /// True when every term has dx = 0.
    bool is_multiplication() const;
    /// True when every term has x = 0.
    bool has_constant_coefficients() const;
    /// The multiplication operator read back as a jet; throws unless is_multiplication().
    Jet as_jet() const;

    FormalOperator operator-() const { return scaled(Scalar(-1)); }
    FormalOperator& operator+=(const FormalOperator& o);
    FormalOperator& operator-=(const FormalOperator& o);
    friend FormalOperator operator+(FormalOperator a, const FormalOperator& b) { return a += b; }
    friend FormalOperator operator-(FormalOperator a, const FormalOperator& b) { return a -= b; }
    FormalOperator scaled(const Scalar& s) const;
    FormalOperator shifted_nu(int k) const;

    friend bool operator==(const FormalOperator& a, const FormalOperator& b);

private:
    int num_vars_;
    Ordering ordering_;
    int nu_min_ = 0;
    TermMap terms_;
};

/// Normal-ordered product A*B, exact modulo `trunc`.
FormalOperator op_compose(const FormalOperator& a, const FormalOperator& b, const TruncationSpec& trunc);
/// Exact normal-ordered product.
FormalOperator op_compose(const FormalOperator& a, const FormalOperator& b);
/// [A, B] = AB - BA.
FormalOperator op_commutator(const FormalOperator& a, const FormalOperator& b, const TruncationSpec& trunc);
FormalOperator op_commutator(const FormalOperator& a, const FormalOperator& b);

Jet op_apply(const FormalOperator& a, const Jet& f, const TruncationSpec& trunc);
Jet op_apply(const FormalOperator& a, const Jet& f);

FormalOperator reorder(const FormalOperator& a, Ordering target);
/// Formal transpose with d^t = -d and x^t = x; returned in normal form.
FormalOperator op_transpose(const FormalOperator& a);
/// Terms with x-exponent zero: the constant-coefficient operator C with delta o A = delta o C.
FormalOperator constant_part(const FormalOperator& a);
/// nu^a x^alpha d^beta -> nu^(a-|beta|) x^alpha xi^beta, aux parameters named xi1..xin.
Jet full_symbol(const FormalOperator& a);

struct OperatorClassReport {
    bool is_natural = false;
    bool in_g_nu = false;
    /// min over terms of 2a + |alpha| - |beta|; empty for the zero operator.
    std::optional<int> standard_degree;
};

OperatorClassReport classify(const FormalOperator& a);

/// Aux parameter names used by full symbols.
std::vector<std::string> symbol_aux_names(int num_vars);

} // namespace jetphase
