#include "hblab/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace hblab {

namespace {

GaussLegendre compute_gauss_legendre(int n)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    GaussLegendre rule;
    rule.nodes = eig.eigenvalues().array();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes(i), dp = 1.0;
        for (int it = 0; it < 3; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
        }
        rule.nodes(i) = x;
        rule.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussLegendre& gauss_legendre(int order)
{
    if (order < 1)
        throw ParameterError("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[order];
    if (!slot)
        slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(order));
    return *slot;
}

Complex integrate_circle(const std::function<Complex(Complex)>& g, const CircleRule& rule)
{
    if (rule.nodes < 1)
        throw ParameterError("integrate_circle: need at least one node");
    const ArrayXcd w = unit_roots(rule.nodes);
    ArrayXcd v(rule.nodes);
    for (Index k = 0; k < rule.nodes; ++k)
        v(k) = g(rule.radius * w(k));
    return pairwise_sum(v) / double(rule.nodes);
}

double mean_abs_pow(const ArrayXcd& v, double p)
{
    if (v.size() == 0)
        return 0.0;
    ArrayXd a;
    if (p == 1.0)
        a = v.abs2().sqrt();
    else if (p == 2.0)
        a = v.abs2();
    else
        a = v.abs2().pow(0.5 * p);
    return pairwise_sum(a) / double(v.size());
}

std::vector<RadialPanel> dyadic_panels(double r_max, int K)
{
    if (K < 1)
        throw ParameterError("dyadic_panels: need at least one panel");
    std::vector<RadialPanel> panels;
    double lo = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double hi = k == K ? 1.0 : 1.0 - std::ldexp(1.0, -k);
        panels.push_back({r_max * lo, r_max * hi});
        lo = hi;
    }
    return panels;
}

PolarDiscRule polar_disc_rule(double r_max, Index angular, int panels, int order)
{
    if (!(r_max > 0.0))
        throw ParameterError("polar_disc_rule: radius must be positive");
    const GaussLegendre& gl = gauss_legendre(order);
    PolarDiscRule rule;
    rule.r_max = r_max;
    rule.angular = angular;
    const auto parts = dyadic_panels(r_max, panels);
    rule.radii.resize(Index(parts.size()) * order);
    rule.weights.resize(rule.radii.size());
    Index i = 0;
    for (const auto& panel : parts) {
        const double half = 0.5 * (panel.hi - panel.lo), mid = 0.5 * (panel.hi + panel.lo);
        for (int q = 0; q < order; ++q, ++i) {
            rule.radii(i) = mid + half * gl.nodes(q);
            rule.weights(i) = half * gl.weights(q) * rule.radii(i);
        }
        rule.panel_end.push_back(i);
    }
    return rule;
}

double integrate_disc(const std::function<double(Complex)>& g, const PolarDiscRule& rule)
{
    const ArrayXcd w = unit_roots(rule.angular);
    ArrayXd radial(rule.radii.size());
    ArrayXd ring(rule.angular);
    for (Index i = 0; i < rule.radii.size(); ++i) {
        for (Index k = 0; k < rule.angular; ++k)
            ring(k) = g(rule.radii(i) * w(k));
        radial(i) = rule.weights(i) * two_pi * pairwise_sum(ring) / double(rule.angular);
    }
    return pairwise_sum(radial);
}

double integrate_torus(const std::function<double(const VectorXcd&)>& g, const TorusRule& rule)
{
    const Index n = rule.radii.size();
    if (Index(rule.counts.size()) != n || n < 1)
        throw ParameterError("integrate_torus: radii and counts disagree");
    std::vector<ArrayXcd> roots;
    for (Index c : rule.counts)
        roots.push_back(unit_roots(c));
    const Index total = node_total(rule.counts);
    ArrayXd v(total);
    std::vector<Index> idx(std::size_t(n), 0);
    VectorXcd z(n);
    for (Index flat = 0; flat < total; ++flat) {
        for (Index j = 0; j < n; ++j)
            z(j) = rule.radii(j) * roots[std::size_t(j)](idx[std::size_t(j)]);
        v(flat) = g(z);
        for (Index j = 0; j < n; ++j) {
            if (++idx[std::size_t(j)] < rule.counts[std::size_t(j)])
                break;
            idx[std::size_t(j)] = 0;
        }
    }
    return std::pow(two_pi, double(n)) * pairwise_sum(v) / double(total);
}

Index AngularPolicy::initial(double spike, int degree, double radius) const
{
    double m = double(floor);
    if (spike > 0.0)
        m = std::max(m, std::ceil(factor / std::max(1.0 - spike, 1e-15)));
    if (degree >= 0) {
        double d = degree;
        if (radius > 0.0 && radius < 1.0)
            d = std::min(d, std::ceil(std::log(1e-16) / std::log(radius)));
        m = std::max(m, degree_factor * (d + 1));
    }
    m = std::min(m, double(Index(1) << 40));
    return round_up(Index(m), granularity);
}

} // namespace hblab
