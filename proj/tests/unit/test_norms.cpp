#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hblab/norms.hpp"
#include "hblab/series.hpp"
#include "hblab/witnesses.hpp"
#include "oracles.hpp"

using namespace hblab;

namespace {

Holomorphic monomial(int k, Complex c = 1.0)
{
    VectorXcd v = VectorXcd::Zero(k + 1);
    v(k) = c;
    return polynomial_function(v);
}

VectorXcd random_coeffs(std::mt19937_64& rng, int degree)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXcd c(degree + 1);
    for (int k = 0; k <= degree; ++k)
        c(k) = Complex(u(rng), u(rng));
    return c;
}

bool nondecreasing(const std::vector<double>& v, double tol)
{
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] < v[k - 1] - tol * std::max(1.0, std::abs(v[k - 1])))
            return false;
    return true;
}

} // namespace

TEST_CASE("Hardy norms on the disc")
{
    const NormEstimate c = hardy_norm_disc(monomial(0, Complex(-3.0, 4.0)), 1.0);
    CHECK(c.value == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(c.converged);
    for (double a : {0.0, 0.5, 0.9, 0.99}) {
        const NormEstimate e = hardy_norm_disc(fa_function(a), 1.0);
        CHECK(e.converged);
        CHECK(std::abs(e.value - 1.0) <= 1e-6);
        CHECK(nondecreasing(e.ladder_values, 1e-9));
    }
    for (int k : {1, 5, 40})
        CHECK(hardy_norm_disc(monomial(k), 1.0).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(hardy_norm_disc(monomial(3), 1.0).ladder.front() == 0.5);
}

TEST_CASE("Bergman norms on the disc")
{
    CHECK(bergman_norm_disc(monomial(0), 1.0).value == doctest::Approx(pi).epsilon(1e-12));
    for (int k : {1, 2, 5, 32})
        CHECK(bergman_norm_disc(monomial(k), 1.0).value == doctest::Approx(two_pi / (k + 2)).epsilon(1e-10));
    const NormEstimate f09 = bergman_norm_disc(fa_function(0.9), 1.0);
    CHECK(f09.converged);
    CHECK(f09.value == doctest::Approx(oracle::A1_fa_0_9).epsilon(1e-8));
    CHECK(f09.value <= pi * hardy_norm_disc(fa_function(0.9), 1.0).value);
    CHECK(bergman_norm_disc(fa_function(0.5), 1.0).value == doctest::Approx(oracle::A1_fa_0_5).epsilon(1e-8));
    CHECK(bergman_norm_disc(fa_function(0.99), 1.0).value == doctest::Approx(oracle::A1_fa_0_99).epsilon(1e-7));
    CHECK(nondecreasing(f09.ladder_values, 0.0));
    CHECK(f09.ladder_values.back() == doctest::Approx(f09.value).epsilon(1e-12));
}

TEST_CASE("p = 2 against coefficient sums")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const VectorXcd c = random_coeffs(rng, 3 + 6 * trial);
        const Holomorphic f = polynomial_function(c);
        double h2 = 0.0, a2 = 0.0;
        for (Index k = 0; k < c.size(); ++k) {
            h2 += std::norm(c(k));
            a2 += std::norm(c(k)) * two_pi / (2.0 * k + 2.0);
        }
        const double hardy = hardy_norm_disc(f, 2.0).value;
        CHECK(hardy * hardy == doctest::Approx(h2).epsilon(1e-7));
        const double bergman = bergman_norm_disc(f, 2.0).value;
        CHECK(bergman * bergman == doctest::Approx(a2).epsilon(1e-10));
    }
}

TEST_CASE("embedding, scaling and monotonicity on the disc")
{
    std::mt19937_64 rng(37);
    std::vector<Holomorphic> family{monomial(0), monomial(7), fa_function(0.5), fa_function(0.9),
                                    polynomial_function(random_coeffs(rng, 12)), fa_partial_sum(0.9, 10)};
    for (const Holomorphic& f : family) {
        const NormEstimate h = hardy_norm_disc(f, 1.0);
        CHECK(bergman_norm_disc(f, 1.0).value <= pi * h.value * (1 + 1e-6));
        const Complex c(-0.3, 2.5);
        CHECK(hardy_norm_disc(c * f, 1.0).value == doctest::Approx(std::abs(c) * h.value).epsilon(1e-12));
        for (double p : {1.0, 2.0}) {
            const NormEstimate e = hardy_norm_disc(f, p);
            CHECK(nondecreasing(e.ladder_values, 1e-9));
            for (std::size_t i = 0; i + 5 < e.ladder.size(); i += 5)
                CHECK(monotonicity_check(f, p, e.ladder[i], e.ladder[i + 5], 1e-9));
        }
    }
    CHECK(monotonicity_check(monomial(1), 1.0, 0.3, 0.6, 1e-9));
    CHECK(monotonicity_check(fa_function(0.9), 1.0, 0.9, 0.99, 1e-9));
    CHECK_THROWS_AS(monotonicity_check(monomial(1), 1.0, 0.6, 0.3, 1e-9), ParameterError);
}

TEST_CASE("quasi-norm inputs are flagged")
{
    const NormEstimate e = hardy_norm_disc(fa_function(0.5), 0.5);
    CHECK(e.quasi);
    CHECK_FALSE(hardy_norm_disc(fa_function(0.5), 1.0).quasi);
    CHECK_THROWS_AS(hardy_norm_disc(fa_function(0.5), 0.0), ParameterError);
}

TEST_CASE("Hardy norms on Reinhardt domains")
{
    const HolomorphicN one = tensor_product({monomial(0), monomial(0)});
    for (const auto& d : {ReinhardtDomain::polydisc(2), ReinhardtDomain::ball(2)})
        CHECK(hardy_norm_reinhardt(one, 1.0, d).value == doctest::Approx(4 * pi * pi).epsilon(1e-12));

    const HolomorphicN prod = tensor_product({fa_function(0.5), fa_function(0.5)});
    const NormEstimate e = hardy_norm_reinhardt(prod, 1.0, ReinhardtDomain::polydisc(2));
    CHECK(e.converged);
    CHECK(e.directions == 64);
    CHECK(e.value == doctest::Approx(4 * pi * pi).epsilon(2e-6));

    const HolomorphicN z1 = tensor_product({monomial(1), monomial(0)});
    CHECK(hardy_norm_reinhardt(z1, 1.0, ReinhardtDomain::ball(2)).value == doctest::Approx(4 * pi * pi).epsilon(2e-6));

    NormOptions opt = NormOptions::several_variables();
    opt.directions = 0;
    CHECK_THROWS_AS(hardy_norm_reinhardt(one, 1.0, ReinhardtDomain::ball(2), opt), ParameterError);
}

TEST_CASE("Bergman norms on Reinhardt domains")
{
    const HolomorphicN one = tensor_product({monomial(0), monomial(0)});
    CHECK(bergman_norm_reinhardt(one, 1.0, ReinhardtDomain::polydisc(2)).value ==
          doctest::Approx(pi * pi).epsilon(1e-12));
    CHECK(bergman_norm_reinhardt(one, 1.0, ReinhardtDomain::ball(2)).value ==
          doctest::Approx(pi * pi / 2).epsilon(1e-12));
    for (auto [j, k] : {std::pair{1, 0}, std::pair{2, 3}, std::pair{5, 1}}) {
        const HolomorphicN m = tensor_product({monomial(j), monomial(k)});
        CHECK(bergman_norm_reinhardt(m, 1.0, ReinhardtDomain::polydisc(2)).value ==
              doctest::Approx(4 * pi * pi / ((j + 2) * (k + 2))).epsilon(1e-8));
    }
    const HolomorphicN prod = tensor_product({fa_function(0.9), fa_function(0.9)});
    CHECK(bergman_norm_reinhardt(prod, 1.0, ReinhardtDomain::polydisc(2)).value ==
          doctest::Approx(oracle::A1_fa_0_9 * oracle::A1_fa_0_9).epsilon(1e-6));

    // Unit ball volume in C^3 is pi^3 / 6.
    const HolomorphicN one3 = tensor_product({monomial(0), monomial(0), monomial(0)});
    CHECK(bergman_norm_reinhardt(one3, 1.0, ReinhardtDomain::ball(3), NormOptions::several_variables(3)).value ==
          doctest::Approx(pi * pi * pi / 6).epsilon(1e-6));
    const auto egg = ReinhardtDomain::power_egg((VectorXd(2) << 2.0, 4.0).finished());
    const double egg_volume = bergman_norm_reinhardt(one, 1.0, egg).value;
    // (2 pi)^2 int_0^1 r1 (1 - r1^2)^{1/2} / 2 dr1 = (2 pi)^2 / 6.
    CHECK(egg_volume == doctest::Approx(4 * pi * pi / 6).epsilon(1e-8));

    const NormEstimate e = bergman_norm_reinhardt(one, 1.0, ReinhardtDomain::polydisc(2));
    CHECK(nondecreasing(e.ladder_values, 0.0));
}

TEST_CASE("torus monotonicity in two variables")
{
    const HolomorphicN f = separable_sum({{fa_function(0.9), monomial(0)}, {monomial(0), monomial(3)}});
    CHECK(monotonicity_check(f, 1.0, VectorXd::Constant(2, 0.5), VectorXd::Constant(2, 0.9), 1e-9));
    CHECK_THROWS_AS(monotonicity_check(f, 1.0, VectorXd::Constant(2, 0.9), VectorXd::Constant(2, 0.5), 1e-9),
                    ParameterError);
}

TEST_CASE("CSV rows")
{
    NormEstimate e;
    e.space = Space::Bergman;
    e.p = 1.0;
    e.value = 0.1;
    e.ladder = {0.5, 0.75};
    e.tail_increment = 0.25;
    e.converged = true;
    CHECK(csv_header() == "space,p,value,ladder_len,tail_increment,converged");
    CHECK(csv_row(e) == "A,1,0.10000000000000001,2,0.25,true");
}
