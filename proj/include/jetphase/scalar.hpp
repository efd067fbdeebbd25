#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace jetphase {

/// Exact Gaussian rational re + im*i. Both parts are kept canonical
/// (lowest terms, positive denominator) by GMP.
class Scalar {
public:
    Scalar() = default;
    Scalar(long value) : re_(value) {}
    explicit Scalar(mpq_class re, mpq_class im = 0);

    static Scalar rational(long num, long den);
    static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }
    bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    Scalar operator-() const { return Scalar(-re_, -im_); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Serialized form `<rat>` or `<rat>(+|-)<rat>i`, with
    /// `<rat> := INT | INT/POSINT`.
    std::string to_string() const;
    static Scalar parse(std::string_view text);

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// n! as an exact scalar.
Scalar factorial(int n);
/// n!/(n-k)!; zero when k > n.
Scalar falling_factorial(int n, int k);
Scalar binomial(int n, int k);

} // namespace jetphase
