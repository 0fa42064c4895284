#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hblab/reinhardt.hpp"
#include "hblab/witnesses.hpp"

using namespace hblab;

namespace {

Holomorphic geometric()
{
    Holomorphic g;
    g.eval = [](Complex z) { return 1.0 / (1.0 - z); };
    g.spike = 1.0;
    return g;
}

MultiIndexSeries random_series(std::mt19937_64& rng, int n, int degree)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MultiIndexSeries s(n);
    MultiIndex alpha(n, 0);
    for (int t = 0; t < 20; ++t) {
        for (int& a : alpha)
            a = int(rng() % (degree + 1));
        s.set(alpha, Complex(u(rng), u(rng)));
    }
    return s;
}

} // namespace

TEST_CASE("dilate_truncate on finitely supported series")
{
    std::mt19937_64 rng(41);
    for (int n : {1, 2, 3}) {
        const MultiIndexSeries s = random_series(rng, n, 6);
        const MultiIndexSeries all = dilate_truncate(s, 0.7, -1);
        CHECK(all.terms().size() == s.terms().size());
        for (const auto& [alpha, value] : s.terms()) {
            int total = 0;
            for (int a : alpha)
                total += a;
            CHECK(all.coefficient(alpha) == value * std::pow(0.7, total));
        }
        CHECK(dilate_truncate(s, 1.0, 6) == s);
        const MultiIndexSeries cut = dilate_truncate(s, 0.5, 3);
        CHECK(cut.inf_degree() <= 3);
        CHECK(cut == dilate_truncate(square_partial_sum(s, 3), 0.5, -1));
    }
    CHECK_THROWS_AS(dilate_truncate(MultiIndexSeries(2), 0.0, 3), ParameterError);
    CHECK_THROWS_AS(dilate_truncate(MultiIndexSeries(2), 1.5, 3), ParameterError);
}

TEST_CASE("dilate_truncate from evaluators")
{
    const MultiIndexSeries q = dilate_truncate(geometric(), 0.5, 3);
    CHECK(q.terms().size() == 4);
    for (int k = 0; k <= 3; ++k)
        CHECK(std::abs(q.coefficient({k}) - std::pow(0.5, k)) < 1e-14);

    std::mt19937_64 rng(43);
    for (int n : {1, 2}) {
        const MultiIndexSeries s = random_series(rng, n, 5);
        const MultiIndexSeries exact = dilate_truncate(s, 0.8, 4);
        const MultiIndexSeries sampled = dilate_truncate(s.function(), 0.8, 4);
        for (const auto& [alpha, value] : sampled.terms())
            CHECK(std::abs(value - exact.coefficient(alpha)) < 1e-13);
        for (const auto& [alpha, value] : exact.terms())
            CHECK(std::abs(value - sampled.coefficient(alpha)) < 1e-13);
    }
    CHECK_THROWS_AS(dilate_truncate(geometric(), 0.5, 10, 16), AliasingError);
    CHECK_THROWS_AS(dilate_truncate(geometric(), 0.5, -1), ParameterError);
}

TEST_CASE("polydisc hull")
{
    CHECK((polydisc_hull(ReinhardtDomain::ball(3)) - VectorXd::Ones(3)).norm() < 1e-12);
    CHECK((polydisc_hull(ReinhardtDomain::polydisc(2)) - VectorXd::Ones(2)).norm() < 1e-12);
    const auto egg = ReinhardtDomain::power_egg((VectorXd(2) << 2.0, 4.0).finished());
    CHECK((polydisc_hull(egg) - VectorXd::Ones(2)).norm() < 1e-12);
}

TEST_CASE("density on the disc")
{
    const std::vector<double> ladder{0.5, 0.1, 0.02};
    const auto rows = density_experiment(fa_function(0.9), ladder, 1.0);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].met);
        CHECK(rows[i].converged);
        CHECK_FALSE(rows[i].exhausted);
        CHECK(rows[i].rho < 1.0);
        if (i > 0)
            CHECK(rows[i].error < rows[i - 1].error);
    }
    VectorXcd c(4);
    c << 1.0, -2.0, Complex(0.0, 3.0), 0.5;
    for (const DensityRow& r : density_experiment(polynomial_function(c), ladder, 1.0)) {
        CHECK(r.rho == 1.0);
        CHECK(r.error < 1e-12);
        CHECK(r.met);
    }
    CHECK_THROWS_AS(density_experiment(fa_function(0.5), {0.0}, 1.0), ParameterError);
}

TEST_CASE("density on the bidisc")
{
    const HolomorphicN f = tensor_product({fa_function(0.5), fa_function(0.5)});
    const auto rows = density_experiment(f, ReinhardtDomain::polydisc(2), {0.1, 0.01}, 1.0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].met);
    CHECK(rows[1].met);
    CHECK(rows[1].error < rows[0].error);
    CHECK_THROWS_AS(density_experiment(f, ReinhardtDomain::ball(3), {0.1}, 1.0), ParameterError);
}
