#pragma once

#include <map>
#include <string>

namespace jetphase {

/// Integer weights that turn every monomial nu^a x^alpha aux^gamma d^beta into a degree.
struct GradingContext {
    int nu_weight = 1;
    int x_weight = 0;
    int d_weight = 0;
    int aux_default = 0;
    std::map<std::string, int> aux_weights;

    int aux_weight(const std::string& name) const {
        auto it = aux_weights.find(name);
        return it == aux_weights.end() ? aux_default : it->second;
    }

    // nu -> 1, everything else 0.
    static GradingContext nu() { return {1, 0, 0, 0, {}}; }
    // nu -> 2, x -> 1, d -> -1. nu*Delta is homogeneous of degree 0 here.
    static GradingContext standard() { return {2, 1, -1, 0, {}}; }
    // every aux parameter -> 1, everything else 0.
    static GradingContext aux() { return {0, 0, 0, 1, {}}; }
    // polynomial degree in x only.
    static GradingContext polynomial() { return {0, 1, 0, 0, {}}; }

    friend bool operator==(const GradingContext&, const GradingContext&) = default;
};

/// Results are exact modulo the terms of degree > max_degree under `grading`.
struct TruncationSpec {
    GradingContext grading;
    int max_degree = 0;

    static TruncationSpec nu(int max) { return {GradingContext::nu(), max}; }
    static TruncationSpec standard(int max) { return {GradingContext::standard(), max}; }
    static TruncationSpec aux(int max) { return {GradingContext::aux(), max}; }
    static TruncationSpec polynomial(int max) { return {GradingContext::polynomial(), max}; }
};

} // namespace jetphase
