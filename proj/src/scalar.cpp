#include "jetphase/scalar.hpp"

#include <cctype>
#include <ostream>

#include "jetphase/errors.hpp"

namespace jetphase {

Scalar::Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw ArithmeticError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    if (is_real()) return Scalar(1 / re_);
    mpq_class norm = re_ * re_ + im_ * im_;
    return Scalar(re_ / norm, -im_ / norm);
}

Scalar& Scalar::operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_real()) {
        if (sgn(o.re_) == 0) throw ArithmeticError("division by zero");
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

std::string Scalar::to_string() const {
    std::string out = re_.get_str();
    if (is_real()) return out;
    if (sgn(im_) < 0) {
        out += '-';
        out += mpq_class(-im_).get_str();
    } else {
        out += '+';
        out += im_.get_str();
    }
    out += 'i';
    return out;
}

namespace {

class RationalReader {
public:
    explicit RationalReader(std::string_view text) : text_(text) {}

    bool done() const { return pos_ == text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    void advance() { ++pos_; }

    // INT or INT/POSINT; a leading sign is accepted only when signed is true.
    mpq_class read(bool allow_sign) {
        std::string num;
        if (allow_sign && (peek() == '-' || peek() == '+')) {
            if (peek() == '-') num += '-';
            advance();
        }
        std::string digits = read_digits();
        if (digits.empty()) fail("expected digits");
        num += digits;
        mpz_class n(num, 10);
        if (peek() != '/') return mpq_class(n);
        advance();
        std::string den_digits = read_digits();
        if (den_digits.empty()) fail("expected denominator digits");
        mpz_class d(den_digits, 10);
        if (d == 0) fail("zero denominator");
        mpq_class q(n, d);
        q.canonicalize();
        return q;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("malformed scalar '" + std::string(text_) + "': " + why);
    }

private:
    std::string read_digits() {
        std::string out;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            out += peek();
            advance();
        }
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Scalar Scalar::parse(std::string_view text) {
    RationalReader reader(text);
    mpq_class re = reader.read(true);
    if (reader.done()) return Scalar(re);
    if (reader.peek() == 'i') {
        reader.advance();
        if (!reader.done()) reader.fail("trailing characters");
        return Scalar(mpq_class(0), re);
    }
    char sign = reader.peek();
    if (sign != '+' && sign != '-') reader.fail("expected '+' or '-' before imaginary part");
    reader.advance();
    mpq_class im = reader.read(false);
    if (reader.peek() != 'i') reader.fail("expected 'i'");
    reader.advance();
    if (!reader.done()) reader.fail("trailing characters");
    if (sign == '-') im = -im;
    return Scalar(re, im);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

Scalar factorial(int n) {
    if (n < 0) throw ArithmeticError("negative factorial");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(mpq_class(f));
}

Scalar falling_factorial(int n, int k) {
    if (k < 0 || k > n) return Scalar(0);
    mpz_class f = 1;
    for (int i = 0; i < k; ++i) f *= (n - i);
    return Scalar(mpq_class(f));
}

Scalar binomial(int n, int k) {
    if (k < 0 || k > n) return Scalar(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Scalar(mpq_class(b));
}

} // namespace jetphase
