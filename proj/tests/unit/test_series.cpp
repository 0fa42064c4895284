#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hblab/series.hpp"

using namespace hblab;

namespace {

PowerSeries fa_series(double a)
{
    return PowerSeries::generated(
        [a](Index k) -> std::optional<Complex> { return (1 - a * a) * double(k + 1) * std::pow(a, double(k)); },
        [a](Complex z) { return (1 - a * a) / ((1.0 - a * z) * (1.0 - a * z)); }, a);
}

VectorXcd random_coeffs(std::mt19937_64& rng, int degree)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VectorXcd c(degree + 1);
    for (int k = 0; k <= degree; ++k)
        c(k) = Complex(u(rng), u(rng));
    return c;
}

} // namespace

TEST_CASE("truncation keeps the leading coefficients")
{
    VectorXcd c(3);
    c << 1.0, 2.0, 3.0;
    PowerSeries p = partial_sum(PowerSeries::polynomial(c), 1);
    REQUIRE(p.degree() == 1);
    CHECK(p.coefficient(0) == Complex(1.0));
    CHECK(p.coefficient(1) == Complex(2.0));
    CHECK(p.coefficient(2) == Complex(0.0));

    PowerSeries cubic = PowerSeries::polynomial(random_coeffs(*std::make_unique<std::mt19937_64>(1), 3));
    PowerSeries same = partial_sum(cubic, 5);
    CHECK(same.degree() == 3);
    for (int k = 0; k <= 3; ++k)
        CHECK(same.coefficient(k) == cubic.coefficient(k));
}

TEST_CASE("f_a coefficients at a = 0.5")
{
    PowerSeries s = partial_sum(fa_series(0.5), 2);
    CHECK(s.coefficient(0).real() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.coefficient(1).real() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.coefficient(2).real() == doctest::Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("degree tracks the last nonzero coefficient")
{
    VectorXcd c(5);
    c << 1.0, 0.0, 2.0, 0.0, 0.0;
    CHECK(PowerSeries::polynomial(c).degree() == 2);
    CHECK(PowerSeries::polynomial(VectorXcd::Zero(4)).degree() == -1);
    CHECK(PowerSeries().degree() == -1);
    CHECK_FALSE(fa_series(0.3).degree().has_value());
}

TEST_CASE("unavailable coefficients raise")
{
    PowerSeries s = PowerSeries::generated([](Index k) -> std::optional<Complex> {
        if (k > 3)
            return std::nullopt;
        return Complex(1.0);
    });
    CHECK_NOTHROW(partial_sum(s, 3));
    CHECK_THROWS_AS(partial_sum(s, 4), UnavailableCoefficient);
    CHECK_THROWS_AS(partial_sum(s, -1), ParameterError);
}

TEST_CASE("memoized generator is called once per index")
{
    auto calls = std::make_shared<int>(0);
    PowerSeries s = PowerSeries::generated([calls](Index k) -> std::optional<Complex> {
        ++*calls;
        return Complex(double(k));
    });
    partial_sum(s, 10);
    partial_sum(s, 5);
    PowerSeries copy = s;
    partial_sum(copy, 10);
    CHECK(*calls == 11);
}

TEST_CASE("idempotence and linearity are exact")
{
    std::mt19937_64 rng(7);
    PowerSeries f = PowerSeries::polynomial(random_coeffs(rng, 20));
    PowerSeries g = PowerSeries::polynomial(random_coeffs(rng, 12));
    for (int N : {0, 3, 9, 15, 25})
        for (int M : {0, 4, 10, 30}) {
            PowerSeries lhs = partial_sum(partial_sum(f, N), M);
            PowerSeries rhs = partial_sum(f, std::min(N, M));
            for (int k = 0; k <= 30; ++k)
                CHECK(lhs.coefficient(k) == rhs.coefficient(k));
        }
    const Complex alpha(0.5, -1.25), beta(2.0, 0.0);
    PowerSeries lazy = linear_combination(alpha, fa_series(0.5), beta, f);
    for (int N : {0, 5, 18}) {
        PowerSeries lhs = partial_sum(lazy, N);
        for (int k = 0; k <= N; ++k)
            CHECK(lhs.coefficient(k) == alpha * fa_series(0.5).coefficient(k) + beta * f.coefficient(k));
    }
}

TEST_CASE("square partial sums")
{
    MultiIndexSeries f(2);
    for (MultiIndex a : {MultiIndex{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}})
        f.set(a, Complex(1.0 + a[0], a[1]));
    MultiIndexSeries s = square_partial_sum(f, 1);
    CHECK(s.terms().size() == 4);
    CHECK(s.coefficient({2, 0}) == Complex(0.0));
    CHECK(square_partial_sum(f, 2) == f);
    CHECK(s.inf_degree() == 1);

    PowerSeries h = fa_series(0.5);
    MultiIndexSeries prod = MultiIndexSeries::tensor_product({h, h}, 6);
    MultiIndexSeries trunc = square_partial_sum(prod, 1);
    MultiIndexSeries expect = MultiIndexSeries::tensor_product({partial_sum(h, 1), partial_sum(h, 1)}, 1);
    CHECK(trunc == expect);
    CHECK(trunc.coefficient({1, 1}).real() == doctest::Approx(0.5625).epsilon(1e-15));

    std::mt19937_64 rng(3);
    PowerSeries p = PowerSeries::polynomial(random_coeffs(rng, 9));
    for (int N = 0; N <= 12; ++N)
        CHECK(square_partial_sum(MultiIndexSeries::from_polynomial(p), N) ==
              MultiIndexSeries::from_polynomial(partial_sum(p, N)));

    CHECK_THROWS_AS(f.set({1}, 1.0), ParameterError);
    CHECK_THROWS_AS(f.set({1, -1}, 1.0), ParameterError);
}

TEST_CASE("multi-index evaluation and torus sampling agree")
{
    MultiIndexSeries f(2);
    f.set({0, 0}, 1.0);
    f.set({3, 1}, Complex(0.5, 0.25));
    f.set({0, 7}, Complex(-2.0, 1.0));
    HolomorphicN g = f.function();
    VectorXd radii(2);
    radii << 0.8, 0.6;
    const std::vector<Index> counts{4, 8};
    ArrayXcd fast = g.on_torus(radii, counts);
    HolomorphicN slow = g;
    slow.torus = nullptr;
    ArrayXcd ref = slow.on_torus(radii, counts);
    CHECK((fast - ref).abs().maxCoeff() < 1e-14);
}

TEST_CASE("series JSON round trip")
{
    MultiIndexSeries f(2);
    f.set({0, 1}, Complex(0.1, -1.0 / 3.0));
    f.set({2, 0}, Complex(1e-300, 7.0));
    const std::string text = to_json(f);
    CHECK(text.find("[0, 1, 0.10000000000000001, -0.33333333333333331]") != std::string::npos);
    CHECK(multi_index_series_from_json(text) == f);
    CHECK_THROWS_AS(multi_index_series_from_json("{\"dim\": 2, \"coeffs\": [[1, 0.5]]}"), ParameterError);
    CHECK_THROWS_AS(multi_index_series_from_json("not json"), ParameterError);
}

TEST_CASE("coefficient extraction")
{
    VectorXcd c = VectorXcd::Zero(3);
    c(2) = 3.0;
    Holomorphic f = polynomial_function(c);
    CHECK(std::abs(extract_coefficient(f, 2, 0.5, 8) - Complex(3.0)) < 1e-14);
    CHECK_THROWS_AS(extract_coefficient(f, 8, 0.5, 8), AliasingError);
    CHECK_THROWS_AS(extract_coefficient(f, 1, 1.5, 8), DomainError);

    Holomorphic one = polynomial_function(VectorXcd::Ones(1));
    for (double R : {0.1, 0.5, 0.9})
        CHECK(std::abs(extract_coefficient(one, 1, R)) < 1e-15);

    Holomorphic fa = fa_series(0.7).function();
    const double expect = (1 - 0.49) * 5 * std::pow(0.7, 4);
    CHECK(std::abs(extract_coefficient(fa, 4, 0.5) - expect) < 1e-13);

    for (int j : {0, 3, 7, 12}) {
        const Complex a = extract_coefficient(fa, j, 0.4), b = extract_coefficient(fa, j, 0.7);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }

    PartialSumReport rep = partial_sum_report(fa, 6, 0.75);
    CHECK(rep.method == PartialSumMethod::ContourKernel);
    CHECK(*rep.result.degree() <= 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(rep.result.coefficient(k) - fa_series(0.7).coefficient(k)) < 1e-12);
}

TEST_CASE("contour kernel partial sums")
{
    PowerSeries h = fa_series(0.5);
    const Complex via_kernel = partial_sum_kernel(h.function(), 8, 0.3, 0.7);
    const Complex via_trunc = partial_sum(h, 8).evaluate(0.3);
    CHECK(std::abs(via_kernel - via_trunc) <= 1e-12 * std::abs(via_trunc));

    CHECK(std::abs(partial_sum_kernel(h.function(), 5, 0.0) - Complex(0.75)) < 1e-14);
    CHECK_THROWS_AS(partial_sum_kernel(h.function(), 5, 0.8, 0.7), DomainError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries p = PowerSeries::polynomial(random_coeffs(rng, 1 + int(u(rng) * 31)));
        Holomorphic g = p.function();
        const int N = int(u(rng) * 40);
        PowerSeries s = partial_sum(p, N);
        for (int pt = 0; pt < 10; ++pt) {
            const Complex z = std::polar(0.6 * std::sqrt(u(rng)), two_pi * u(rng));
            const Complex ref = s.evaluate(z);
            CHECK(std::abs(partial_sum_kernel(g, N, z, 0.8) - ref) <= 1e-11 * std::max(std::abs(ref), 1e-300));
        }
    }
}

TEST_CASE("kernel identity")
{
    CHECK(kernel_identity_check(0.0, 1.0, 5) == 0.0);
    CHECK(kernel_identity_check(0.5, 0.8, 20) <= 1e-12);
    CHECK(kernel_identity_check(Complex(0, -0.3), Complex(0.5, 0.5), 64) <= 1e-12);
    CHECK_THROWS_AS(kernel_identity_check(0.4, 0.4, 3), SingularKernel);
    CHECK_THROWS_AS(kernel_identity_check(0.4, 0.0, 3), DomainError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Complex xi = std::polar(0.5 + 0.5 * u(rng), two_pi * u(rng));
        const Complex z = xi * std::polar(0.99 * u(rng), two_pi * u(rng));
        const int N = int(u(rng) * 100);
        CHECK(kernel_identity_check(z, xi, N) <= 1e-13 * (N + 1));
    }
}
