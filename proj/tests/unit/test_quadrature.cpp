#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hblab/quadrature.hpp"
#include "hblab/series.hpp"
#include "hblab/witnesses.hpp"

using namespace hblab;

TEST_CASE("Gauss-Legendre rules")
{
    for (int n : {1, 2, 5, 8, 64}) {
        const GaussLegendre& gl = gauss_legendre(n);
        CHECK(gl.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
        for (int k = 0; k < 2 * n; ++k) {
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs((gl.weights * gl.nodes.pow(k)).sum() - exact) < 1e-14);
        }
    }
    CHECK(&gauss_legendre(16) == &gauss_legendre(16));
    CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}

TEST_CASE("circle rule exactness")
{
    const CircleRule rule{0.5, 16};
    CHECK(std::abs(integrate_circle([](Complex) { return Complex(1.0); }, rule) - 1.0) < 1e-15);
    CHECK(std::abs(integrate_circle([](Complex z) { return z * z; }, rule)) < 1e-15);
    const CircleRule unit{1.0, 32};
    for (int j = 1; j < 32; ++j)
        CHECK(std::abs(integrate_circle([j](Complex z) { return std::pow(z, j); }, unit)) < 1e-14);
    CHECK(std::abs(integrate_circle([](Complex z) { return std::pow(z, 32); }, unit) - 1.0) < 1e-14);
}

TEST_CASE("Poisson normalization on circles")
{
    const Holomorphic f = fa_function(0.5);
    for (double r : {0.9, 0.999, 1.0 - 1e-9}) {
        const double expect = 0.75 / (1.0 - 0.25 * r * r);
        CHECK(mean_abs_pow(f.on_circle(r, 256), 1.0) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("disc rule")
{
    const PolarDiscRule rule = polar_disc_rule(1.0, 64);
    CHECK(integrate_disc([](Complex) { return 1.0; }, rule) == doctest::Approx(pi).epsilon(1e-14));
    for (int k : {0, 1, 2, 5, 17, 32})
        CHECK(integrate_disc([k](Complex z) { return std::pow(std::abs(z), k); }, rule) ==
              doctest::Approx(two_pi / (k + 2)).epsilon(1e-10));
    const PolarDiscRule half = polar_disc_rule(0.5, 64);
    CHECK(integrate_disc([](Complex) { return 1.0; }, half) == doctest::Approx(pi / 4).epsilon(1e-14));

    // z^j conj(z)^k integrates to zero off the diagonal.
    const PolarDiscRule small = polar_disc_rule(1.0, 8, 4, 8);
    CHECK(std::abs(integrate_disc([](Complex z) { return (z * z * std::conj(z)).real(); }, small)) < 1e-15);

    const double singular = integrate_disc([](Complex z) { return 1.0 / std::abs(0.9 - z); }, polar_disc_rule(1.0, 4096));
    CHECK(singular > 0.0);
    CHECK(singular < 4 * pi);
    CHECK(dyadic_panels(1.0, 3).back().hi == 1.0);
    CHECK(dyadic_panels(1.0, 3)[1].lo == 0.5);
}

TEST_CASE("torus rule")
{
    TorusRule rule{VectorXd::Constant(2, 0.7), {8, 8}};
    CHECK(integrate_torus([](const VectorXcd&) { return 1.0; }, rule) ==
          doctest::Approx(4 * pi * pi).epsilon(1e-14));
    TorusRule skew{(VectorXd(2) << 0.3, 0.8).finished(), {4, 16}};
    CHECK(integrate_torus([](const VectorXcd& z) { return std::abs(z(0)); }, skew) ==
          doctest::Approx(4 * pi * pi * 0.3).epsilon(1e-14));

    const Holomorphic fa = fa_function(0.5);
    TorusRule near_edge{VectorXd::Constant(2, 1.0 - 1e-10), {256, 256}};
    CHECK(integrate_torus([&](const VectorXcd& z) { return std::abs(fa(z(0)) * fa(z(1))); }, near_edge) ==
          doctest::Approx(4 * pi * pi).epsilon(1e-9));

    auto g = [](Complex z) { return std::exp(z) + 1.0 / (2.0 - z); };
    TorusRule one{VectorXd::Constant(1, 0.6), {64}};
    const double tensor = integrate_torus([&](const VectorXcd& z) { return std::abs(g(z(0))); }, one);
    const double circle = integrate_circle([&](Complex z) { return Complex(std::abs(g(z))); }, {0.6, 64}).real();
    CHECK(tensor == doctest::Approx(two_pi * circle).epsilon(1e-15));
}

TEST_CASE("refinement protocol")
{
    auto smooth = [](int, const std::vector<Index>& m) {
        const ArrayXcd w = unit_roots(m[0]);
        return pairwise_sum((1.0 / (1.5 - 0.9 * w)).abs().eval()) / double(m[0]);
    };
    const auto rep = refine_until(smooth, {8}, 1e-10, 1 << 20);
    CHECK(rep.converged);
    CHECK(rep.history.size() >= 2);
    CHECK(rep.history.size() <= 5);

    const auto once = refine_until(smooth, {8}, std::numeric_limits<double>::infinity(), 1 << 20);
    CHECK(once.converged);
    CHECK(once.node_counts[0] == 8);

    const Holomorphic spike = fa_function(0.999);
    auto spiky = [&](int, const std::vector<Index>& m) { return mean_abs_pow(spike.on_circle(1.0, m[0]), 1.0); };
    const auto slow = refine_until(spiky, {64}, 1e-10, 1 << 22);
    CHECK(slow.converged);
    CHECK(slow.node_counts[0] >= 64000 / 4);
    CHECK(slow.value == doctest::Approx(1.0).epsilon(1e-9));

    const auto capped = refine_until(spiky, {64}, 1e-10, 256);
    CHECK_FALSE(capped.converged);
    CHECK(capped.node_counts[0] == 256);

    // Once resolved, successive changes shrink.
    auto kinked = [](int, const std::vector<Index>& m) {
        const ArrayXcd w = unit_roots(m[0]);
        return pairwise_sum((1.0 + 0.5 * w + 0.49 * w * w).abs().eval()) / double(m[0]);
    };
    const auto mono = refine_until(kinked, {16}, 1e-12, 1 << 16);
    REQUIRE(mono.history.size() >= 3);
    const auto& h = mono.history;
    CHECK(h[h.size() - 1] <= h[h.size() - 2]);
    CHECK(h[h.size() - 2] <= h[h.size() - 3]);

    CHECK_THROWS_AS(refine_until(smooth, {8}, 0.0, 64), ParameterError);
}

TEST_CASE("per-coordinate refinement only doubles unsettled coordinates")
{
    auto f = [](int, const std::vector<Index>& m) {
        return 1.0 + 1.0 / double(m[1] * m[1]);
    };
    const auto rep = refine_per_coordinate(f, {4, 4}, 1e-6, Index(1) << 30);
    CHECK(rep.converged);
    CHECK(rep.node_counts[0] == 8);
    CHECK(rep.node_counts[1] > 512);
}

TEST_CASE("angular policy")
{
    const AngularPolicy p;
    CHECK(p.initial(0.0) == 4096);
    CHECK(p.initial(0.999) == round_up(64000, 64));
    CHECK(p.initial(0.0, 2000) == round_up(8004, 64));
    CHECK(p.initial(0.0, 2000, 0.5) == 4096);
    CHECK(p.initial(0.0) % 64 == 0);
}

TEST_CASE("DFT helpers invert each other")
{
    ArrayXcd c(12);
    for (Index k = 0; k < 12; ++k)
        c(k) = Complex(std::sin(k + 1.0), std::cos(3.0 * k));
    const std::vector<Index> counts{3, 4};
    CHECK((analyze(synthesize(c, counts), counts) - c).abs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(synthesize(c, {5}), ParameterError);

    VectorXcd coeffs(100);
    for (Index k = 0; k < 100; ++k)
        coeffs(k) = Complex(1.0 / (k + 1), -0.5 / (k + 2));
    const Holomorphic p = polynomial_function(coeffs);
    const ArrayXcd fast = p.on_circle(0.9, 64);
    const ArrayXcd w = unit_roots(64);
    for (Index k = 0; k < 64; ++k)
        CHECK(std::abs(fast(k) - horner(coeffs, 0.9 * w(k))) < 1e-13);
}
