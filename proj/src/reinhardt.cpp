#include "hblab/reinhardt.hpp"

#include <algorithm>
#include <cmath>

namespace hblab {

namespace {

Index pow2_at_least(Index n)
{
    Index k = 1;
    while (k < n)
        k *= 2;
    return k;
}

struct Extraction {
    MultiIndexSeries Q;
    double tail = 0.0; // sum of |c_alpha| hull^alpha outside the box
};

Extraction extract_box(const HolomorphicN& f, double rho, int M, Index K, const VectorXd& hull)
{
    const int n = f.dim;
    const std::vector<Index> counts(n, K);
    const ArrayXcd c = analyze(f.on_torus(rho * hull, counts), counts);
    Extraction out{MultiIndexSeries(n), 0.0};
    std::vector<double> outside;
    MultiIndex alpha(n, 0);
    for (Index flat = 0; flat < c.size(); ++flat) {
        Index rest = flat;
        bool in_box = true;
        for (int j = 0; j < n; ++j) {
            alpha[j] = int(rest % K);
            rest /= K;
            in_box = in_box && alpha[j] <= M;
        }
        if (!in_box) {
            outside.push_back(std::abs(c(flat)));
            continue;
        }
        double scale = 1.0;
        for (int j = 0; j < n; ++j)
            scale *= std::pow(hull(j), alpha[j]);
        out.Q.set(alpha, c(flat) / scale);
    }
    out.tail = pairwise_sum(outside);
    return out;
}

Index default_nodes(int M)
{
    return std::max<Index>(64, pow2_at_least(4 * (Index(M) + 1)));
}

Holomorphic univariate(const MultiIndexSeries& Q)
{
    VectorXcd coeffs = VectorXcd::Zero(std::max(Q.inf_degree(), 0) + 1);
    for (const auto& [alpha, value] : Q.terms())
        coeffs(alpha[0]) = value;
    return polynomial_function(coeffs);
}

template <typename Dilation, typename Extract, typename Error>
std::vector<DensityRow> density_scheme(bool polynomial, int n, double p, const std::vector<double>& eps_ladder,
                                       int M_cap, const DensityOptions& opt, Dilation&& dilation_error,
                                       Extract&& extract, Error&& error)
{
    if (!(p > 0.0))
        throw ParameterError("density_experiment: p must be positive");
    std::vector<DensityRow> rows;
    for (double eps : eps_ladder) {
        if (!(eps > 0.0))
            throw ParameterError("density_experiment: eps must be positive");
        DensityRow row;
        row.eps = eps;
        bool found = false;
        for (int k = polynomial ? 0 : 1; k <= opt.rho_depth && !found; ++k) {
            row.rho_index = k;
            row.rho = k == 0 ? 1.0 : 1.0 - std::ldexp(1.0, -k);
            row.dilation_error = k == 0 ? 0.0 : dilation_error(row.rho);
            found = row.dilation_error <= eps / 2;
        }
        row.exhausted = !found;
        const double target = eps / (2 * std::pow(two_pi, n / p));
        found = false;
        Extraction ex{MultiIndexSeries(n), 0.0};
        for (int M = 1; M <= M_cap && !found; M *= 2) {
            row.M = M;
            ex = extract(row.rho, M);
            row.truncation_bound = ex.tail;
            found = ex.tail <= target;
        }
        row.exhausted = row.exhausted || !found;
        const NormEstimate e = error(ex.Q);
        row.error = e.value;
        row.converged = e.converged;
        row.met = row.error <= eps;
        rows.push_back(row);
    }
    return rows;
}

} // namespace

MultiIndexSeries dilate_truncate(const MultiIndexSeries& f, double rho, int M)
{
    if (!(rho > 0.0 && rho <= 1.0))
        throw ParameterError("dilate_truncate: rho must lie in (0, 1]");
    MultiIndexSeries out(f.dim());
    for (const auto& [alpha, value] : f.terms()) {
        int total = 0;
        bool keep = true;
        for (int a : alpha) {
            total += a;
            keep = keep && (M < 0 || a <= M);
        }
        if (keep)
            out.set(alpha, value * std::pow(rho, total));
    }
    return out;
}

MultiIndexSeries dilate_truncate(const HolomorphicN& f, double rho, int M, Index nodes, const VectorXd& hull)
{
    if (!(rho > 0.0 && rho <= 1.0))
        throw ParameterError("dilate_truncate: rho must lie in (0, 1]");
    if (M < 0)
        throw ParameterError("dilate_truncate: an evaluator needs a finite M");
    const Index K = nodes > 0 ? nodes : default_nodes(M);
    if (K < 2 * (Index(M) + 1))
        throw AliasingError("dilate_truncate: fewer than 2 (M + 1) nodes per coordinate");
    const VectorXd h = hull.size() == f.dim ? hull : VectorXd::Ones(f.dim);
    return extract_box(f, rho, M, K, h).Q;
}

MultiIndexSeries dilate_truncate(const Holomorphic& f, double rho, int M, Index nodes)
{
    return dilate_truncate(tensor_product({f}), rho, M, nodes);
}

VectorXd polydisc_hull(const ReinhardtDomain& domain)
{
    const int n = domain.dim();
    VectorXd hull(n);
    for (int j = 0; j < n; ++j)
        hull(j) = frontier_max_radius(domain, VectorXd::Unit(n, j))(j);
    return hull;
}

std::vector<DensityRow> density_experiment(const HolomorphicN& f, const ReinhardtDomain& domain,
                                           const std::vector<double>& eps_ladder, double p,
                                           const DensityOptions& opt)
{
    const int n = domain.dim();
    if (f.dim != n)
        throw ParameterError("density_experiment: dimension mismatch");
    const VectorXd hull = polydisc_hull(domain);
    std::vector<VectorXd> probes;
    for (const VectorXd& u : frontier_directions(n, n + 1))
        probes.push_back((1.0 - std::ldexp(1.0, -opt.probe_level)) * frontier_max_radius(domain, u));

    DensityOptions o = opt;
    double reference = 0.0;
    for (const VectorXd& r : probes)
        reference = std::max(reference, torus_integral(f, p, r, o.norm).value);
    o.norm.abs_floor = std::max(o.norm.abs_floor, 1e-3 * reference);

    auto dilation = [&](double rho) {
        const HolomorphicN g = f - dilate(f, rho);
        double worst = 0.0;
        for (const VectorXd& r : probes)
            worst = std::max(worst, std::pow(torus_integral(g, p, r, o.norm).value, 1.0 / p));
        return worst;
    };
    auto extract = [&](double rho, int M) { return extract_box(f, rho, M, default_nodes(M), hull); };
    auto error = [&](const MultiIndexSeries& Q) { return hardy_norm_reinhardt(f - Q.function(), p, domain, o.norm); };
    return density_scheme(f.degree >= 0, n, p, eps_ladder, o.max_degree_n, o, dilation, extract, error);
}

std::vector<DensityRow> density_experiment(const Holomorphic& f, const std::vector<double>& eps_ladder, double p,
                                           const DensityOptions& opt)
{
    NormOptions one_variable;
    one_variable.abs_floor = 1e-3 * std::pow(hardy_norm_disc(f, p).value, p);
    const HolomorphicN fn = tensor_product({f});
    auto dilation = [&](double rho) { return hardy_norm_disc(f - dilate(f, rho), p, one_variable).value; };
    auto extract = [&](double rho, int M) {
        return extract_box(fn, rho, M, default_nodes(M), VectorXd::Ones(1));
    };
    auto error = [&](const MultiIndexSeries& Q) { return hardy_norm_disc(f - univariate(Q), p, one_variable); };
    return density_scheme(f.degree >= 0, 1, p, eps_ladder, opt.max_degree, opt, dilation, extract, error);
}

} // namespace hblab
