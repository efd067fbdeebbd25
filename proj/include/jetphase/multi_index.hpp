#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "jetphase/scalar.hpp"

namespace jetphase {

/// Exponent vector over a fixed number of variables. Ordered graded-lexicographically:
/// total degree first, then entry by entry.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t size) : e_(size, 0) {}
    MultiIndex(std::initializer_list<int> entries) : e_(entries) {}
    explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {}

    static MultiIndex unit(std::size_t size, std::size_t i) {
        MultiIndex m(size);
        m.e_[i] = 1;
        return m;
    }

    std::size_t size() const noexcept { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<int>& entries() const noexcept { return e_; }

    int total() const noexcept {
        int t = 0;
        for (int v : e_) t += v;
        return t;
    }
    bool is_zero() const noexcept {
        for (int v : e_)
            if (v != 0) return false;
        return true;
    }
    bool nonnegative() const noexcept {
        for (int v : e_)
            if (v < 0) return false;
        return true;
    }
    /// Componentwise <=.
    bool le(const MultiIndex& o) const noexcept {
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    MultiIndex& operator+=(const MultiIndex& o) {
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    MultiIndex& operator-=(const MultiIndex& o) {
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
    friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

    /// Entries [begin, begin+count).
    MultiIndex slice(std::size_t begin, std::size_t count) const {
        return MultiIndex(std::vector<int>(e_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           e_.begin() + static_cast<std::ptrdiff_t>(begin + count)));
    }
    static MultiIndex concat(const MultiIndex& a, const MultiIndex& b) {
        std::vector<int> e = a.e_;
        e.insert(e.end(), b.e_.begin(), b.e_.end());
        return MultiIndex(std::move(e));
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.total() <=> b.total(); c != 0) return c;
        return a.e_ <=> b.e_;
    }

private:
    std::vector<int> e_;
};

/// All multi-indices of the given size with total degree <= max_total, in graded-lex order.
std::vector<MultiIndex> indices_up_to(std::size_t size, int max_total);
/// All multi-indices of the given size with total degree exactly `total`.
std::vector<MultiIndex> indices_of_total(std::size_t size, int total);
/// All multi-indices componentwise <= bound.
std::vector<MultiIndex> indices_below(const MultiIndex& bound);

/// alpha! = alpha_1! ... alpha_n!
Scalar factorial(const MultiIndex& alpha);

} // namespace jetphase
