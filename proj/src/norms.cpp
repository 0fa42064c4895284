#include "hblab/norms.hpp"

#include <cmath>
#include <cstdio>

namespace hblab {

std::string to_string(Space s)
{
    return s == Space::Hardy ? "H" : "A";
}

NormOptions NormOptions::several_variables(int n)
{
    NormOptions o;
    if (n >= 3) {
        o.policy = AngularPolicy{16, 8.0, 16, 1.0};
        o.radial_panels = 6;
    }
    o.tol = 1e-6;
    o.volume_tol = 1e-4;
    o.ladder_depth = 30;
    if (n < 3) {
        o.policy = several_variable_policy();
        o.radial_panels = 10;
    }
    o.radial_order = 8;
    return o;
}

namespace {

void check_p(double p)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParameterError("norm exponent p must be positive and finite");
}

// Shell integrals along one ladder; returns false when a shell failed to converge.
struct LadderResult {
    std::vector<double> scales;
    std::vector<double> values;
    double best = 0.0;
    double tail = 0.0;
    bool quadrature_ok = true;
    bool settled = false;
    Index max_nodes = 0;
};

template <typename Shell>
LadderResult walk_ladder(Shell&& shell, int depth, double tol, double floor)
{
    LadderResult L;
    for (int k = 1; k <= depth; ++k) {
        const double t = 1.0 - std::ldexp(1.0, -k);
        const RefinementReport<double> rep = shell(t);
        L.quadrature_ok = L.quadrature_ok && rep.converged;
        L.max_nodes = std::max(L.max_nodes, node_total(rep.node_counts));
        const double increment = L.values.empty() ? rep.value : rep.value - L.values.back();
        L.scales.push_back(t);
        L.values.push_back(rep.value);
        L.best = std::max(L.best, rep.value);
        L.tail = L.best > 0.0 ? std::max(increment, 0.0) / L.best : 0.0;
        if (k >= 4 && increment <= tol * std::max(L.best, floor)) {
            L.settled = true;
            break;
        }
    }
    return L;
}

double root_p(double v, double p)
{
    return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

} // namespace

NormEstimate hardy_norm_disc(const Holomorphic& f, double p, const NormOptions& opt)
{
    check_p(p);
    auto shell = [&](double r) {
        const Index start = std::min(opt.policy.initial(f.spike * r, f.degree, r), opt.max_nodes);
        return refine_until([&](int, const std::vector<Index>& c) { return mean_abs_pow(f.on_circle(r, c[0]), p); },
                            {start}, opt.tol, opt.max_nodes, opt.abs_floor);
    };
    const LadderResult L = walk_ladder(shell, opt.ladder_depth, opt.tol, opt.abs_floor);
    NormEstimate e;
    e.space = Space::Hardy;
    e.p = p;
    e.quasi = p < 1.0;
    e.value = root_p(L.best, p);
    e.ladder = L.scales;
    e.ladder_values = L.values;
    e.tail_increment = L.tail;
    e.converged = L.quadrature_ok && L.settled;
    e.max_nodes_used = L.max_nodes;
    return e;
}

NormEstimate bergman_norm_disc(const Holomorphic& f, double p, const NormOptions& opt)
{
    check_p(p);
    const Index top = std::min(opt.policy.initial(f.spike, f.degree), opt.max_nodes);
    std::vector<double> panel_sums;
    std::vector<double> panel_tops;
    auto integrate = [&](int level, const std::vector<Index>& counts) {
        const double factor = double(counts[0]) / double(top);
        const PolarDiscRule rule = polar_disc_rule(1.0, counts[0], opt.radial_panels + level, opt.radial_order);
        const auto panels = dyadic_panels(1.0, opt.radial_panels + level);
        ArrayXd contrib(rule.radii.size());
        for (Index i = 0; i < rule.radii.size(); ++i) {
            const double r = rule.radii(i);
            const Index M = std::min(
                round_up(Index(std::ceil(double(opt.policy.initial(f.spike * r, f.degree, r)) * factor)),
                         opt.policy.granularity),
                counts[0]);
            contrib(i) = rule.weights(i) * two_pi * mean_abs_pow(f.on_circle(r, M), p);
        }
        panel_sums.clear();
        panel_tops.clear();
        Index begin = 0;
        for (std::size_t k = 0; k < rule.panel_end.size(); ++k) {
            const Index end = rule.panel_end[k];
            panel_sums.push_back(pairwise_sum(contrib.segment(begin, end - begin)));
            panel_tops.push_back(panels[k].hi);
            begin = end;
        }
        return pairwise_sum(panel_sums);
    };
    const RefinementReport<double> rep = refine_until(integrate, {top}, opt.volume_tol, opt.max_nodes, opt.abs_floor);

    NormEstimate e;
    e.space = Space::Bergman;
    e.p = p;
    e.quasi = p < 1.0;
    e.value = root_p(rep.value, p);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < panel_sums.size(); ++k) {
        cumulative += panel_sums[k];
        e.ladder.push_back(panel_tops[k]);
        e.ladder_values.push_back(cumulative);
    }
    e.tail_increment = rep.value > 0.0 ? panel_sums.back() / rep.value : 0.0;
    e.converged = rep.converged;
    e.max_nodes_used = node_total(rep.node_counts);
    return e;
}

// ---------------------------------------------------------------------------

RefinementReport<double> torus_integral(const HolomorphicN& f, double p, const VectorXd& radii, const NormOptions& opt)
{
    check_p(p);
    const int n = f.dim;
    if (radii.size() != n)
        throw ParameterError("torus_integral: radii have the wrong dimension");
    std::vector<int> active;
    std::vector<Index> start;
    for (int j = 0; j < n; ++j)
        if (radii(j) > 0.0) {
            active.push_back(j);
            const double spike = f.spike.size() == n ? f.spike(j) * radii(j) : 0.0;
            start.push_back(opt.policy.initial(spike, f.degree, radii(j)));
        }
    const double volume = std::pow(two_pi, double(n));
    auto integrate = [&](int, const std::vector<Index>& c) {
        std::vector<Index> counts(std::size_t(n), 1);
        for (std::size_t a = 0; a < active.size(); ++a)
            counts[std::size_t(active[a])] = c[a];
        return volume * mean_abs_pow(f.on_torus(radii, counts), p);
    };
    if (active.empty())
        return refine_until(integrate, {}, std::numeric_limits<double>::infinity(), opt.max_nodes);
    while (node_total(start) > opt.max_nodes)
        for (Index& s : start)
            s = std::max<Index>(1, s / 2);
    return refine_per_coordinate(integrate, start, opt.tol, opt.max_nodes, opt.abs_floor);
}

NormEstimate hardy_norm_reinhardt(const HolomorphicN& f, double p, const ReinhardtDomain& domain,
                                  const NormOptions& opt)
{
    check_p(p);
    if (opt.directions < 1)
        throw ParameterError("hardy_norm_reinhardt: need at least one frontier direction");
    if (f.dim != domain.dim())
        throw ParameterError("hardy_norm_reinhardt: function and domain dimensions differ");
    NormEstimate e;
    e.space = Space::Hardy;
    e.p = p;
    e.quasi = p < 1.0;
    e.directions = opt.directions;
    e.converged = true;
    double best = -1.0;
    for (const VectorXd& u : frontier_directions(domain.dim(), opt.directions)) {
        const VectorXd top = frontier_max_radius(domain, u);
        auto shell = [&](double t) { return torus_integral(f, p, VectorXd(t * top), opt); };
        const LadderResult L = walk_ladder(shell, opt.ladder_depth, opt.tol, opt.abs_floor);
        e.converged = e.converged && L.quadrature_ok && L.settled;
        e.max_nodes_used = std::max(e.max_nodes_used, L.max_nodes);
        if (L.best > best) {
            best = L.best;
            e.ladder = L.scales;
            e.ladder_values = L.values;
            e.tail_increment = L.tail;
        }
    }
    e.value = root_p(std::max(best, 0.0), p);
    return e;
}

namespace {

struct RadialNodes {
    std::vector<double> r, w; // w carries the factor r
    std::vector<int> panel;
    std::vector<double> tops;
};

RadialNodes radial_nodes(int panels, int order)
{
    RadialNodes out;
    const PolarDiscRule rule = polar_disc_rule(1.0, 1, panels, order);
    const auto parts = dyadic_panels(1.0, panels);
    Index begin = 0;
    for (std::size_t k = 0; k < rule.panel_end.size(); ++k) {
        for (Index i = begin; i < rule.panel_end[k]; ++i) {
            out.r.push_back(rule.radii(i));
            out.w.push_back(rule.weights(i));
            out.panel.push_back(int(k));
        }
        out.tops.push_back(parts[k].hi);
        begin = rule.panel_end[k];
    }
    return out;
}

struct SimplexNode {
    VectorXd u;
    double w;
};

// Quadrature on {u >= 0, sum u = 1} in the coordinates u_1..u_{n-1}.
std::vector<SimplexNode> simplex_nodes(int n, int order)
{
    std::vector<SimplexNode> out;
    if (n == 1) {
        out.push_back({VectorXd::Ones(1), 1.0});
        return out;
    }
    const GaussLegendre& gl = gauss_legendre(order);
    const int pieces = n == 3 ? 2 : 4;
    std::vector<std::pair<double, double>> line;
    for (int k = 0; k < pieces; ++k)
        for (int q = 0; q < order; ++q)
            line.emplace_back((k + 0.5 * (1.0 + gl.nodes(q))) / pieces, 0.5 * gl.weights(q) / pieces);
    if (n == 2) {
        for (auto [v, w] : line)
            out.push_back({(VectorXd(2) << v, 1.0 - v).finished(), w});
        return out;
    }
    if (n == 3) {
        for (auto [v1, w1] : line)
            for (auto [v2, w2] : line)
                out.push_back({(VectorXd(3) << v1, (1.0 - v1) * v2, (1.0 - v1) * (1.0 - v2)).finished(),
                               w1 * w2 * (1.0 - v1)});
        return out;
    }
    throw ParameterError("bergman_norm_reinhardt: only dimensions up to 3 are supported off the polydisc");
}

} // namespace

NormEstimate bergman_norm_reinhardt(const HolomorphicN& f, double p, const ReinhardtDomain& domain,
                                    const NormOptions& opt)
{
    check_p(p);
    const int n = domain.dim();
    if (f.dim != n)
        throw ParameterError("bergman_norm_reinhardt: function and domain dimensions differ");
    const double volume = std::pow(two_pi, double(n));

    // Cell = (radius vector, weight, exhaustion index).
    struct Cell {
        VectorXd r;
        double w;
        int level;
    };
    std::vector<double> tops;
    auto build_cells = [&](int extra) {
        std::vector<Cell> cells;
        const RadialNodes rad = radial_nodes(opt.radial_panels + extra, opt.radial_order);
        tops = rad.tops;
        const Index m = Index(rad.r.size());
        if (domain.kind() == DomainKind::Polydisc) {
            std::vector<Index> idx(std::size_t(n), 0);
            while (true) {
                Cell c{VectorXd(n), 1.0, 0};
                for (int j = 0; j < n; ++j) {
                    const Index i = idx[std::size_t(j)];
                    c.r(j) = rad.r[std::size_t(i)];
                    c.w *= rad.w[std::size_t(i)];
                    c.level = std::max(c.level, rad.panel[std::size_t(i)]);
                }
                cells.push_back(std::move(c));
                int j = 0;
                for (; j < n; ++j) {
                    if (++idx[std::size_t(j)] < m)
                        break;
                    idx[std::size_t(j)] = 0;
                }
                if (j == n)
                    break;
            }
            return cells;
        }
        // r = s rho(u) u: dr = (s rho)^{n-1} rho ds du, and the polar factors give prod r_j.
        for (const SimplexNode& sn : simplex_nodes(n, opt.radial_order)) {
            const VectorXd edge = frontier_max_radius(domain, sn.u);
            const double rho = edge.sum();
            for (Index i = 0; i < m; ++i) {
                const double s = rad.r[std::size_t(i)];
                const double ds = rad.w[std::size_t(i)] / s; // strip the disc Jacobian
                const VectorXd r = s * edge;
                double w = sn.w * ds * std::pow(s * rho, n - 1) * rho;
                for (int j = 0; j < n; ++j)
                    w *= r(j);
                cells.push_back({r, w, rad.panel[std::size_t(i)]});
            }
        }
        return cells;
    };

    std::vector<double> level_sums;
    auto integrate = [&](int level, const std::vector<Index>& counts) {
        const Index factor = counts[0];
        const std::vector<Cell> cells = build_cells(level);
        ArrayXd contrib(Index(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::vector<Index> m(std::size_t(n), 1);
            for (int j = 0; j < n; ++j)
                if (cells[c].r(j) > 0.0) {
                    const double spike = f.spike.size() == n ? f.spike(j) * cells[c].r(j) : 0.0;
                    m[std::size_t(j)] = opt.policy.initial(spike, f.degree, cells[c].r(j)) * factor;
                }
            contrib(Index(c)) = cells[c].w * volume * mean_abs_pow(f.on_torus(cells[c].r, m), p);
        }
        level_sums.assign(tops.size(), 0.0);
        std::vector<std::vector<double>> buckets(tops.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            buckets[std::size_t(cells[c].level)].push_back(contrib(Index(c)));
        for (std::size_t k = 0; k < tops.size(); ++k)
            level_sums[k] = pairwise_sum(buckets[k]);
        return pairwise_sum(contrib);
    };
    // counts[0] is the angular multiplier; the cap bounds it by max_nodes / floor^n.
    const Index cap = std::max<Index>(1, opt.max_nodes / Index(std::pow(double(opt.policy.floor), n)));
    const RefinementReport<double> rep = refine_until(integrate, {1}, opt.volume_tol, cap, opt.abs_floor);

    NormEstimate e;
    e.space = Space::Bergman;
    e.p = p;
    e.quasi = p < 1.0;
    e.value = root_p(rep.value, p);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < level_sums.size(); ++k) {
        cumulative += level_sums[k];
        e.ladder.push_back(tops[k]);
        e.ladder_values.push_back(cumulative);
    }
    e.tail_increment = rep.value > 0.0 ? level_sums.back() / rep.value : 0.0;
    e.converged = rep.converged;
    e.max_nodes_used = rep.node_counts[0];
    return e;
}

// ---------------------------------------------------------------------------

bool monotonicity_check(const HolomorphicN& f, double p, const VectorXd& r, const VectorXd& R, double tol)
{
    if (r.size() != f.dim || R.size() != f.dim)
        throw ParameterError("monotonicity_check: radii have the wrong dimension");
    if ((r.array() > R.array()).any() || (r.array() < 0.0).any())
        throw ParameterError("monotonicity_check: need 0 <= r <= R componentwise");
    NormOptions opt = NormOptions::several_variables(f.dim);
    opt.tol = 1e-12;
    if (f.dim == 1)
        opt.policy = AngularPolicy{};
    const double inner = torus_integral(f, p, r, opt).value;
    const double outer = torus_integral(f, p, R, opt).value;
    return inner <= outer + tol;
}

bool monotonicity_check(const Holomorphic& f, double p, double r, double R, double tol)
{
    return monotonicity_check(tensor_product({f}), p, VectorXd::Constant(1, r), VectorXd::Constant(1, R), tol);
}

std::string csv_header()
{
    return "space,p,value,ladder_len,tail_increment,converged";
}

std::string csv_row(const NormEstimate& e)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%zu,%.17g,%s", to_string(e.space).c_str(), e.p, e.value,
                  e.ladder.size(), e.tail_increment, e.converged ? "true" : "false");
    return buf;
}

} // namespace hblab
