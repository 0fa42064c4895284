#ifndef HBLAB_QUADRATURE_HPP
#define HBLAB_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hblab/core.hpp"

namespace hblab {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    ArrayXd nodes;
    ArrayXd weights;
};

/// Cached; computed by Golub-Welsch and polished with Newton steps.
const GaussLegendre& gauss_legendre(int order);

// ---------------------------------------------------------------------------
// Circles

/// M equispaced nodes radius * exp(2 pi i k / M), weights 2 pi / M.
struct CircleRule {
    double radius = 1.0;
    Index nodes = 64;
};

/// (1/2pi) sum_k (2pi/M) g(radius e^{i theta_k}).
Complex integrate_circle(const std::function<Complex(Complex)>& g, const CircleRule& rule);

/// Pairwise mean of |v|^p.
double mean_abs_pow(const ArrayXcd& v, double p);

// ---------------------------------------------------------------------------
// Discs

struct RadialPanel {
    double lo;
    double hi;
};

/// [0, 1/2], [1/2, 3/4], ..., [1 - 2^-(K-1), 1 - 2^-K], [1 - 2^-K, 1], scaled by r_max.
std::vector<RadialPanel> dyadic_panels(double r_max, int K);

/// Gauss-Legendre radial nodes on dyadic panels (weights carry the Jacobian r)
/// times an equispaced angular rule.
struct PolarDiscRule {
    ArrayXd radii;
    ArrayXd weights;
    std::vector<Index> panel_end; // one past the last radial node of each panel
    Index angular = 64;
    double r_max = 1.0;
};

PolarDiscRule polar_disc_rule(double r_max, Index angular, int panels = 20, int order = 64);

/// Approximates the area integral of g over the disc of radius r_max.
double integrate_disc(const std::function<double(Complex)>& g, const PolarDiscRule& rule);

// ---------------------------------------------------------------------------
// Tori

struct TorusRule {
    VectorXd radii;
    std::vector<Index> counts;
};

/// Tensor trapezoid approximation of the integral of g(r e^{i theta}) d theta
/// over [0, 2pi]^n, without normalization.
double integrate_torus(const std::function<double(const VectorXcd&)>& g, const TorusRule& rule);

// ---------------------------------------------------------------------------
// Node policy and refinement

/// Initial angular node count for an integrand whose modulus concentrates at
/// scale (1 - spike) around one direction.
struct AngularPolicy {
    Index floor = 4096;
    double factor = 64.0;
    Index granularity = 64;
    double degree_factor = 4.0;

    /// max(floor, ceil(factor / (1 - spike)), degree_factor (d + 1)) rounded up, where d is
    /// the degree capped at the index beyond which r^k drops below 1e-16.
    Index initial(double spike, int degree = -1, double radius = 1.0) const;
};

/// Preset for several-variable tensor rules.
inline AngularPolicy several_variable_policy()
{
    return AngularPolicy{64, 16.0, 16, 1.0};
}

template <typename T>
struct RefinementReport {
    T value{};
    std::vector<Index> node_counts;
    double rel_change = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::vector<double> history; // relative change at every doubling
};

inline Index node_total(const std::vector<Index>& counts)
{
    Index n = 1;
    for (Index c : counts)
        n *= c;
    return n;
}

/// Calls integrate(level, counts) with all counts doubled at every level until
/// two successive values agree to tol relative (or to tol * scale when the
/// value is below `scale`), or the total node count would exceed cap.
template <typename F>
auto refine_until(F&& integrate, std::vector<Index> counts, double tol, Index cap, double scale = 0.0)
    -> RefinementReport<decltype(integrate(0, counts))>
{
    using T = decltype(integrate(0, counts));
    if (!(tol > 0.0))
        throw ParameterError("refine_until: tolerance must be positive");
    RefinementReport<T> rep;
    rep.value = integrate(0, counts);
    rep.node_counts = counts;
    if (std::isinf(tol)) {
        rep.rel_change = 0.0;
        rep.converged = true;
        return rep;
    }
    for (int level = 1;; ++level) {
        Index next_total = 1;
        for (Index c : counts)
            next_total *= 2 * c;
        if (next_total > cap)
            break;
        for (Index& c : counts)
            c *= 2;
        const T next = integrate(level, counts);
        const double denom = std::max({std::abs(next), scale, std::numeric_limits<double>::min()});
        rep.rel_change = std::abs(next - rep.value) / denom;
        rep.history.push_back(rep.rel_change);
        rep.value = next;
        rep.node_counts = counts;
        if (rep.rel_change <= tol) {
            rep.converged = true;
            return rep;
        }
    }
    return rep;
}

/// Per-coordinate variant: doubles one unsettled coordinate at a time (round
/// robin). A coordinate is settled when its last doubling changed the value by
/// at most tol relative (denominator at least scale); stops when all are settled or the cap would be exceeded.
template <typename F>
auto refine_per_coordinate(F&& integrate, std::vector<Index> counts, double tol, Index cap, double scale = 0.0)
    -> RefinementReport<decltype(integrate(0, counts))>
{
    using T = decltype(integrate(0, counts));
    if (!(tol > 0.0))
        throw ParameterError("refine_per_coordinate: tolerance must be positive");
    RefinementReport<T> rep;
    rep.value = integrate(0, counts);
    rep.node_counts = counts;
    if (std::isinf(tol) || counts.empty()) {
        rep.rel_change = 0.0;
        rep.converged = true;
        return rep;
    }
    std::vector<bool> settled(counts.size(), false);
    std::vector<double> last(counts.size(), std::numeric_limits<double>::infinity());
    std::size_t j = 0;
    for (int level = 1;; ++level) {
        std::size_t tries = 0;
        while (settled[j] && tries < counts.size()) {
            j = (j + 1) % counts.size();
            ++tries;
        }
        if (tries == counts.size()) {
            rep.converged = true;
            break;
        }
        if (2 * node_total(counts) > cap)
            break;
        counts[j] *= 2;
        const T next = integrate(level, counts);
        const double denom = std::max({std::abs(next), scale, std::numeric_limits<double>::min()});
        last[j] = std::abs(next - rep.value) / denom;
        settled[j] = last[j] <= tol;
        rep.history.push_back(last[j]);
        rep.value = next;
        rep.node_counts = counts;
        j = (j + 1) % counts.size();
    }
    rep.rel_change = *std::max_element(last.begin(), last.end());
    return rep;
}

} // namespace hblab

#endif
