#include <doctest.h>

#include "generators.hpp"
#include "jetphase/distribution.hpp"
#include "jetphase/errors.hpp"
#include "jetphase/filtered_exp.hpp"
#include "jetphase/star.hpp"

using namespace jetphase;

namespace {

const ScalarMatrix kSymplectic2{{Scalar(0), Scalar(1)}, {Scalar(-1), Scalar(0)}};
const ScalarMatrix kUnit1{{Scalar(1)}};

Jet x(int n, int i) { return Jet::coordinate(n, i); }

Jet nu_const(int n, int nu, const Scalar& c) { return Jet::monomial(n, nu, MultiIndex(static_cast<std::size_t>(n)), c); }

/// C_r = d_y^a d_z^b on one variable, every other order zero.
StarProduct planted(int r, int a, int b) {
    StarProduct s{1, {}};
    for (int k = 1; k <= r; ++k) s.c_ops.emplace_back(2);
    s.c_ops[static_cast<std::size_t>(r - 1)].add_term(0, MultiIndex{0, 0}, MultiIndex{a, b}, Scalar(1));
    return s;
}

Jet poisson(const ScalarMatrix& pi, const Jet& f, const Jet& g) {
    const int n = f.num_vars();
    Jet out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (pi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).is_zero()) continue;
            const Jet a = jet_derive(f, JetVariable::x(i)) * jet_derive(g, JetVariable::x(j));
            const Jet b = jet_derive(g, JetVariable::x(i)) * jet_derive(f, JetVariable::x(j));
            out += (a - b).scaled(pi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        }
    return out;
}

FormalOperator nu_power_of_derivative(int n, int nu, int order) {
    MultiIndex d(static_cast<std::size_t>(n));
    d[0] = order;
    return FormalOperator::monomial(n, nu, MultiIndex(static_cast<std::size_t>(n)), d, Scalar(1));
}

/// exp(nu^k d^m) as a gauge operator on n variables.
FormalOperator gauge_exp(int n, int k, int m, int n_max) {
    return op_exp(nu_power_of_derivative(n, k, m), FiltrationSpec::nu(), TruncationSpec::nu(n_max));
}

bool associative_on(const StarProduct& s, gen::Rng& rng, int n_max, int samples) {
    for (int t = 0; t < samples; ++t) {
        const Jet f = gen::random_jet(rng, s.num_vars, 3, 0, 3);
        const Jet g = gen::random_jet(rng, s.num_vars, 3, 0, 3);
        const Jet h = gen::random_jet(rng, s.num_vars, 3, 0, 3);
        const Jet lhs = star_multiply(s, star_multiply(s, f, g, n_max), h, n_max);
        const Jet rhs = star_multiply(s, f, star_multiply(s, g, h, n_max), n_max);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

} // namespace

TEST_SUITE("star-products") {

TEST_CASE("Moyal products of coordinates") {
    const auto s = moyal_star(kSymplectic2, 3);
    const Jet x1 = x(2, 0), x2 = x(2, 1);
    CHECK(star_multiply(s, x1, x2, 3) == x1 * x2 + nu_const(2, 1, Scalar(1)));
    CHECK(star_multiply(s, x2, x1, 3) == x1 * x2 - nu_const(2, 1, Scalar(1)));
    CHECK(star_multiply(s, x1, x2, 3) - star_multiply(s, x2, x1, 3) == nu_const(2, 1, Scalar(2)));

    const auto s1 = moyal_star(kUnit1, 3);
    CHECK(star_multiply(s1, x(1, 0), x(1, 0), 3) == x(1, 0) * x(1, 0) + nu_const(1, 1, Scalar(1)));
}

TEST_CASE("Moyal associativity on a cubic example") {
    const auto s = moyal_star(kUnit1, 2);
    const Jet xx = star_multiply(s, x(1, 0), x(1, 0), 2);
    const Jet lhs = star_multiply(s, xx, x(1, 0), 2);
    const Jet rhs = star_multiply(s, x(1, 0), xx, 2);
    CHECK(lhs == rhs);
    // x^3 + 3 nu x, by counting Wick contractions.
    Jet expected = Jet::monomial(1, 0, {3}, Scalar(1));
    expected.add_term(1, {1}, Scalar(3));
    CHECK(lhs == expected);
}

TEST_CASE("unit is the constant 1") {
    gen::Rng rng(101);
    for (int n = 1; n <= 2; ++n) {
        ScalarMatrix pi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) pi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = gen::small_rational(rng);
        const auto s = moyal_star(pi, 4);
        const Jet one = Jet::constant(n, Scalar(1));
        for (int t = 0; t < 10; ++t) {
            const Jet f = gen::random_jet(rng, n, 4, 0, 3, 0, 2);
            CHECK(star_multiply(s, f, one, 4) == f.truncated_nu(4));
            CHECK(star_multiply(s, one, f, 4) == f.truncated_nu(4));
        }
    }
}

TEST_CASE("Moyal associativity on random polynomials") {
    gen::Rng rng(202);
    for (int n_max = 1; n_max <= 5; ++n_max) {
        CHECK(associative_on(moyal_star(kSymplectic2, n_max), rng, n_max, 4));
        CHECK(associative_on(moyal_star(kUnit1, n_max), rng, n_max, 4));
    }
}

TEST_CASE("first cochain antisymmetrizes to the Poisson bracket") {
    gen::Rng rng(303);
    for (int t = 0; t < 20; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        ScalarMatrix pi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Scalar p = gen::small_rational(rng);
                pi(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = p;
                pi(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = -p;
            }
        if (n == 1) pi(0, 0) = gen::small_rational(rng);
        const auto s = moyal_star(pi, 2);
        const Jet f = gen::random_jet(rng, n, 3, 0, 3);
        const Jet g = gen::random_jet(rng, n, 3, 0, 3);
        const auto trunc = TruncationSpec::nu(2);
        const Jet c1 = apply_bidifferential(*s.c(1), f, g, trunc) - apply_bidifferential(*s.c(1), g, f, trunc);
        CHECK(c1 == poisson(pi, f, g));
    }
}

TEST_CASE("naturalness of star products") {
    CHECK(is_natural_star(moyal_star(kSymplectic2, 4), 4));
    CHECK(is_natural_star(moyal_star(kUnit1, 6), 6));
    CHECK_FALSE(is_natural_star(planted(1, 2, 2), 3));
    CHECK(is_natural_star(planted(2, 2, 2), 3));
    CHECK_FALSE(is_natural_star(planted(2, 3, 1), 3));
    CHECK(is_natural_star(planted(2, 3, 1), 1));
}

TEST_CASE("validation rejects nu-dependent cochains") {
    StarProduct bad{1, {FormalOperator(2)}};
    bad.c_ops[0].add_term(1, {0, 0}, {1, 1}, Scalar(1));
    CHECK_THROWS_AS(validate_star(bad), InputShapeError);
    StarProduct wrong_chart{1, {FormalOperator(1)}};
    CHECK_THROWS_AS(validate_star(wrong_chart), InputShapeError);
    CHECK_THROWS_AS(star_multiply(moyal_star(kUnit1, 2), x(2, 0), x(1, 0), 2), InputShapeError);
}

TEST_CASE("two-point distribution of the unit Moyal product") {
    const int n_max = 4;
    const auto l = two_point_distribution(moyal_star(kUnit1, n_max), n_max);
    const auto expected = distribution_from_operator(
        op_exp(FormalOperator::monomial(2, 1, {0, 0}, {1, 1}, Scalar(1)), FiltrationSpec::nu(),
               TruncationSpec::nu(n_max)),
        TruncationSpec::nu(n_max));
    CHECK(l == expected);
    const auto verdict = is_oscillatory(l, n_max);
    CHECK(verdict.oscillatory);
    CHECK(is_nondegenerate(l));

    const ScalarMatrix zero(1);
    const auto l0 = two_point_distribution(moyal_star(zero, n_max), n_max);
    CHECK(is_oscillatory(l0, n_max).oscillatory);
    CHECK_FALSE(is_nondegenerate(l0));
}

TEST_CASE("nondegeneracy tracks the determinant of pi") {
    const ScalarMatrix singular{{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(4)}};
    CHECK(is_nondegenerate(two_point_distribution(moyal_star(kSymplectic2, 3), 3)));
    CHECK_FALSE(is_nondegenerate(two_point_distribution(moyal_star(singular, 3), 3)));
    gen::Rng rng(404);
    for (int t = 0; t < 10; ++t) {
        ScalarMatrix pi(2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) pi(i, j) = gen::coin(rng, 0.3) ? Scalar(0) : gen::small_rational(rng);
        CHECK(is_nondegenerate(two_point_distribution(moyal_star(pi, 2), 2)) == !pi.determinant().is_zero());
    }
}

TEST_CASE("planted non-natural cochain is not oscillatory") {
    for (const auto& scale : {Scalar(1), Scalar::rational(-3, 5), Scalar(7)}) {
        StarProduct s = planted(1, 2, 2);
        s.c_ops[0] = s.c_ops[0].scaled(scale);
        CHECK_FALSE(is_oscillatory(two_point_distribution(s, 3), 3).oscillatory);
    }
}

TEST_CASE("star exponential of nu^{-1} x xi") {
    const auto s = moyal_star(kUnit1, 4);
    const std::vector<std::string> aux{"xi"};
    const Jet f = Jet::monomial(1, -1, {1}, Scalar(1), aux, {1});
    const auto trunc = TruncationSpec::aux(2);
    const Jet e = star_exponential(s, f, trunc);

    Jet expected = Jet::constant(1, Scalar(1), aux);
    expected += f;
    expected.add_term(-2, {2}, Scalar::rational(1, 2), {2});
    expected.add_term(-1, {0}, Scalar::rational(1, 2), {2});
    CHECK(e == expected);

    Jet log_expected(1, aux);
    log_expected += f;
    log_expected.add_term(-1, {0}, Scalar::rational(1, 2), {2});
    CHECK(jet_log(e, trunc) == log_expected);

    CHECK(star_exponential(s, Jet(1, aux), trunc) == Jet::constant(1, Scalar(1), aux));
}

TEST_CASE("star exponential enforces the pronilpotent class") {
    const auto s = moyal_star(kUnit1, 3);
    const std::vector<std::string> aux{"xi"};
    CHECK_THROWS_AS(star_exponential(s, Jet::monomial(1, -2, {1}, Scalar(1), aux, {1}), TruncationSpec::aux(2)),
                    ConvergenceError);
    CHECK_THROWS_AS(star_exponential(s, Jet::monomial(1, -1, {1}, Scalar(1), aux, {0}), TruncationSpec::aux(2)),
                    ConvergenceError);
}

TEST_CASE("log of star exponentials stays above nu^{-1}") {
    gen::Rng rng(505);
    const std::vector<std::string> aux{"xi"};
    const auto trunc = TruncationSpec::aux(4);
    for (int t = 0; t < 8; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        const auto s = n == 1 ? moyal_star(kUnit1, 8) : moyal_star(kSymplectic2, 8);
        Jet f(n, aux);
        for (int k = 0; k < 3; ++k)
            f.add_term(gen::uniform(rng, -1, 0), gen::random_index(rng, n, gen::uniform(rng, 0, 2)),
                       gen::small_rational(rng), {1});
        const Jet chi = jet_log(star_exponential(s, f, trunc), trunc);
        REQUIRE(chi.lowest_nu().has_value());
        CHECK(*chi.lowest_nu() >= -1);
    }
}

TEST_CASE("left multiplication symbols") {
    const auto s = moyal_star(kUnit1, 3);
    Jet expected(1, symbol_aux_names(1));
    expected.add_term(0, {1}, Scalar(1), {0});
    expected.add_term(0, {0}, Scalar(1), {1});
    CHECK(left_mult_symbol(s, x(1, 0), 3) == expected);
    CHECK(left_mult_symbol(s, Jet::constant(1, Scalar(1)), 3) == Jet::constant(1, Scalar(1), symbol_aux_names(1)));

    const Jet sym = left_mult_symbol(planted(1, 2, 2), Jet::monomial(1, 0, {2}, Scalar(1)), 3);
    REQUIRE(sym.lowest_nu().has_value());
    CHECK(*sym.lowest_nu() < 0);
    CHECK(sym.coeff(-1, {0}, {2}) == Scalar(2));
}

TEST_CASE("natural products give nu-regular symbols") {
    gen::Rng rng(606);
    for (int t = 0; t < 10; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        const auto s = n == 1 ? moyal_star(kUnit1, 4) : moyal_star(kSymplectic2, 4);
        const Jet sym = left_mult_symbol(s, gen::random_jet(rng, n, 4, 0, 4, 0, 2), 4);
        if (auto lo = sym.lowest_nu()) CHECK(*lo >= 0);
    }
}

TEST_CASE("left and right multiplications commute") {
    gen::Rng rng(707);
    for (int t = 0; t < 10; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        const int n_max = gen::uniform(rng, 1, 4);
        const auto s = n == 1 ? moyal_star(kUnit1, n_max) : moyal_star(kSymplectic2, n_max);
        const auto lf = left_multiplication(s, gen::random_jet(rng, n, 3, 0, 3), n_max);
        const auto rg = right_multiplication(s, gen::random_jet(rng, n, 3, 0, 3), n_max);
        CHECK(op_commutator(lf, rg, TruncationSpec::nu(n_max)).is_zero());
    }
}

TEST_CASE("gauge transforms keep associativity") {
    gen::Rng rng(808);
    const int n_max = 3;
    const auto s = moyal_star(kUnit1, n_max);
    CHECK(associative_on(gauge_transform(s, gauge_exp(1, 1, 3, n_max), n_max), rng, n_max, 3));
    CHECK(associative_on(gauge_transform(s, gauge_exp(1, 1, 2, n_max), n_max), rng, n_max, 3));
    CHECK(gauge_transform(s, FormalOperator::identity(1), n_max).c_ops == s.c_ops);
}

TEST_CASE("naturalness agrees with the oscillatory test on the corpus") {
    gen::Rng rng(909);
    const int n_max = 3;
    std::vector<StarProduct> corpus;
    corpus.push_back(moyal_star(kUnit1, n_max));
    corpus.push_back(moyal_star(kSymplectic2, n_max));
    corpus.push_back(moyal_star(ScalarMatrix{{Scalar(1), Scalar(2)}, {Scalar(-1), Scalar::rational(1, 3)}}, n_max));
    for (int m = 1; m <= 4; ++m) {
        corpus.push_back(gauge_transform(corpus[0], gauge_exp(1, 1, m, n_max), n_max));
        corpus.push_back(gauge_transform(corpus[1], gauge_exp(2, 1, m, n_max), n_max));
    }
    corpus.push_back(gauge_transform(corpus[0], gauge_exp(1, 2, 4, n_max), n_max));
    corpus.push_back(gauge_transform(corpus[0], gauge_exp(1, 2, 5, n_max), n_max));

    int natural = 0;
    for (const auto& s : corpus) {
        REQUIRE(associative_on(s, rng, n_max, 2));
        const bool nat = is_natural_star(s, n_max);
        natural += nat ? 1 : 0;
        CHECK(nat == is_oscillatory(two_point_distribution(s, n_max), n_max).oscillatory);
    }
    CHECK(natural > 0);
    CHECK(natural < static_cast<int>(corpus.size()));
}

} // TEST_SUITE
