#include <doctest.h>

#include "generators.hpp"
#include "jetphase/distribution.hpp"
#include "jetphase/errors.hpp"
#include "jetphase/filtered_exp.hpp"
#include "oracles.hpp"

using namespace jetphase;

namespace {

PointDistribution dist1(std::initializer_list<std::tuple<int, int, Scalar>> terms) {
    PointDistribution l(1);
    for (const auto& [nu, k, c] : terms) l.add_term(nu, MultiIndex{k}, c);
    return l;
}

/// delta o exp(nu^{-1} X) modulo nu^{N+1}.
PointDistribution from_x(const FormalOperator& x, int n_max) {
    const auto d = op_exp(x.shifted_nu(-1), FiltrationSpec::nu(), TruncationSpec::nu(n_max));
    return distribution_from_operator(d, TruncationSpec::nu(n_max));
}

FormalOperator cterm(int n, int nu, MultiIndex dx, const Scalar& c) {
    return FormalOperator::monomial(n, nu, MultiIndex(static_cast<std::size_t>(n)), std::move(dx), c);
}

Scalar to_scalar(const mpq_class& q) { return Scalar(q); }

} // namespace

TEST_SUITE("oscillatory") {

TEST_CASE("distributions from operators keep the x-free terms") {
    const auto g = op_exp(cterm(1, 1, {2}, Scalar(1)), FiltrationSpec::nu(), TruncationSpec::nu(2));
    CHECK(distribution_from_operator(g, TruncationSpec::nu(2)) ==
          dist1({{0, 0, Scalar(1)}, {1, 2, Scalar(1)}, {2, 4, Scalar::rational(1, 2)}}));
    CHECK(distribution_from_operator(FormalOperator::monomial(1, 0, {1}, {1}, Scalar(1)), TruncationSpec::nu(3))
              .is_zero());
    CHECK(distribution_from_operator(FormalOperator::monomial(1, -1, {1}, {0}, Scalar(1)), TruncationSpec::nu(3))
              .is_zero());
    CHECK_THROWS_AS(distribution_from_operator(cterm(1, -1, {1}, Scalar(1)), TruncationSpec::nu(3)),
                    NotNuRegularError);
}

TEST_CASE("applying a distribution to jets") {
    const auto l = dist1({{0, 0, Scalar(1)}, {1, 2, Scalar(1)}});
    const Jet x2 = Jet::monomial(1, 0, {2}, Scalar(1));
    CHECK(apply_distribution(l, x2, 3) == Jet::monomial(1, 1, {0}, Scalar(2)));
    CHECK(apply_distribution(l, Jet::constant(1, Scalar(1)), 3).nu_coeff(0) == Scalar(1));
    CHECK(apply_distribution(PointDistribution::delta(1), x2.shifted_nu(-1), 3).is_zero());
    CHECK(apply_distribution(l, x2, 0).is_zero());
}

TEST_CASE("oscillatory verdicts") {
    const auto gauss = from_x(cterm(1, 2, {2}, Scalar(1)), 4);
    const auto v = is_oscillatory(gauss, 4);
    REQUIRE(v.oscillatory);
    CHECK(*v.x == cterm(1, 2, {2}, Scalar(1)));
    CHECK_FALSE(is_oscillatory(from_x(cterm(1, 2, {3}, Scalar(1)), 4), 4).oscillatory);

    // D = 1 + nu d: log D = nu d - nu^2 d^2/2 + nu^3 d^3/3
    const auto v2 = is_oscillatory(dist1({{0, 0, Scalar(1)}, {1, 1, Scalar(1)}}), 3);
    REQUIRE(v2.oscillatory);
    CHECK(*v2.x == cterm(1, 2, {1}, Scalar(1)) + cterm(1, 3, {2}, Scalar::rational(-1, 2)) +
                       cterm(1, 4, {3}, Scalar::rational(1, 3)));
}

TEST_CASE("the leading part must be delta") {
    CHECK_FALSE(is_oscillatory(dist1({{0, 0, Scalar(2)}}), 2).oscillatory);
    CHECK_FALSE(is_oscillatory(dist1({{0, 0, Scalar(1)}, {0, 1, Scalar(1)}}), 2).oscillatory);
    CHECK_FALSE(is_oscillatory(PointDistribution(1), 2).oscillatory);
    CHECK(is_oscillatory(PointDistribution::delta(2), 2).oscillatory);
}

TEST_CASE("random natural generators are recovered") {
    gen::Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        const int n_max = gen::uniform(rng, 2, 4);
        const auto x = gen::random_natural_x(rng, n, n_max);
        const auto v = is_oscillatory(from_x(x, n_max), n_max);
        REQUIRE(v.oscillatory);
        CHECK(*v.x == x.truncated(TruncationSpec::nu(n_max + 1)));
    }
}

TEST_CASE("bilinear form") {
    const auto b = beta_form(from_x(cterm(1, 2, {2}, Scalar(1)), 3));
    CHECK(b(0, 0) == Scalar(2));
    CHECK(is_nondegenerate(from_x(cterm(1, 2, {2}, Scalar(1)), 3)));
    CHECK_FALSE(is_nondegenerate(dist1({{0, 0, Scalar(1)}, {1, 1, Scalar(1)}})));
    const auto b2 = beta_form(from_x(cterm(2, 2, {1, 1}, Scalar(1)), 3));
    CHECK(b2 == ScalarMatrix{{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}});
    CHECK_THROWS_AS(beta_form(from_x(cterm(1, 2, {3}, Scalar(1)), 3)), PreconditionError);
}

TEST_CASE("pushforward examples") {
    const auto gauss = from_x(cterm(1, 2, {2}, Scalar(1)), 3);
    CHECK(pushforward_diffeo(gauss, {Jet::coordinate(1, 0)}, TruncationSpec::nu(3)) == gauss);

    const auto scaled = pushforward_diffeo(gauss, {Jet::coordinate(1, 0).scaled(Scalar(2))}, TruncationSpec::nu(3));
    for (const auto& [key, c] : gauss.terms()) {
        Scalar factor(1);
        for (int k = 0; k < key.second.total(); ++k) factor *= Scalar(2);
        CHECK(scaled.coeff(key.first, key.second) == c * factor);
    }
    CHECK(is_oscillatory(scaled, 3).oscillatory);

    // Phi = x + x^2: L(x^m) = nu^{m/2} m!/(m/2)! for L = delta o exp(nu d^2), and
    // (x + x^2)^k = sum_j C(k, j) x^{k + j}.
    const auto pushed = pushforward_diffeo(gauss, {Jet::coordinate(1, 0) + Jet::monomial(1, 0, {2}, Scalar(1))},
                                           TruncationSpec::nu(3));
    for (int k = 0; k <= 6; ++k)
        for (int r = 0; r <= 3; ++r) {
            mpq_class expected = 0;
            for (int j = 0; j <= k; ++j) {
                const int m = k + j;
                if (m % 2 != 0 || m / 2 != r) continue;
                mpz_class binom;
                mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
                expected += mpq_class(binom * oracle::factorial(m)) / mpq_class(oracle::factorial(m / 2));
            }
            expected /= mpq_class(oracle::factorial(k));
            CHECK(pushed.coeff(r, {k}) == to_scalar(expected));
        }
    CHECK(is_oscillatory(pushed, 3).oscillatory);
}

TEST_CASE("pushforward input checks") {
    const auto gauss = from_x(cterm(1, 2, {2}, Scalar(1)), 2);
    CHECK_THROWS_AS(pushforward_diffeo(gauss, {Jet::monomial(1, 0, {2}, Scalar(1))}, TruncationSpec::nu(2)),
                    SingularJacobianError);
    CHECK_THROWS_AS(pushforward_diffeo(gauss, {Jet::coordinate(1, 0) + Jet::constant(1, Scalar(1))},
                                       TruncationSpec::nu(2)),
                    InputShapeError);
}

TEST_CASE("verdicts and nondegeneracy are coordinate independent") {
    gen::Rng rng(42);
    for (int t = 0; t < 12; ++t) {
        const int n = gen::uniform(rng, 1, 2);
        const int n_max = gen::uniform(rng, 2, 3);
        auto x = gen::random_natural_x(rng, n, n_max);
        if (gen::coin(rng)) x.add_term(2, MultiIndex(static_cast<std::size_t>(n)), gen::random_index(rng, n, 3), Scalar(1));
        const auto l = from_x(x, n_max);
        const auto phi = gen::random_diffeo(rng, n, 3);
        const auto pushed = pushforward_diffeo(l, phi, TruncationSpec::nu(n_max));
        const bool osc = is_oscillatory(l, n_max).oscillatory;
        CHECK(is_oscillatory(pushed, n_max).oscillatory == osc);
        if (osc) CHECK(is_nondegenerate(pushed) == is_nondegenerate(l));
    }
}

TEST_CASE("gaussian gram determinant") {
    const auto gauss = from_x(cterm(1, 2, {2}, Scalar::rational(-1, 2)), 6);
    const std::vector<Jet> basis{Jet::constant(1, Scalar(1)), Jet::coordinate(1, 0), Jet::monomial(1, 0, {2}, Scalar(1))};
    const Jet det = series_determinant(gram_matrix(gauss, basis, 6), 6);
    const oracle::NuPoly expected = oracle::det3(oracle::gaussian_gram3());
    Jet expected_jet(1);
    for (std::size_t k = 0; k < expected.size(); ++k) expected_jet.add_term(static_cast<int>(k), {0}, Scalar(expected[k]));
    CHECK(det == expected_jet);
    CHECK(det == Jet::monomial(1, 3, {0}, Scalar(-2)));
}

}
