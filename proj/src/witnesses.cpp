#include "hblab/witnesses.hpp"

#include <cmath>

namespace hblab {

namespace {

void check_parameter(Complex a)
{
    if (!(std::abs(a) < 1.0))
        throw ParameterError("f_a: parameter must lie in the open unit disc");
}

Complex ipow(Complex z, int n)
{
    Complex result(1.0), base = z;
    while (n > 0) {
        if (n & 1)
            result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

Holomorphic from_w(Complex a, int degree, std::function<Complex(Complex)> of_w)
{
    const Complex ca = std::conj(a);
    Holomorphic f;
    f.eval = [ca, of_w](Complex z) { return of_w(ca * z); };
    f.circle = [ca, of_w](double r, Index M) {
        const ArrayXcd w = unit_roots(M);
        ArrayXcd out(M);
        for (Index k = 0; k < M; ++k)
            out(k) = of_w(ca * r * w(k));
        return out;
    };
    f.spike = std::abs(a);
    f.degree = degree;
    return f;
}

// As from_w for functions of (w, w^m); on circles w^m comes from the root table.
Holomorphic from_w_power(Complex a, int degree, int m, std::function<Complex(Complex, Complex)> of_w)
{
    const Complex ca = std::conj(a);
    Holomorphic f;
    f.eval = [ca, m, of_w](Complex z) { return of_w(ca * z, ipow(ca * z, m)); };
    f.circle = [ca, m, of_w](double r, Index M) {
        const ArrayXcd w = unit_roots(M);
        const Complex c = ca * r;
        const Complex cm = ipow(c, m);
        const Index step = Index(m) % M;
        ArrayXcd out(M);
        Index j = 0;
        for (Index k = 0; k < M; ++k) {
            out(k) = of_w(c * w(k), cm * w(j));
            j += step;
            if (j >= M)
                j -= M;
        }
        return out;
    };
    f.spike = std::abs(a);
    f.degree = degree;
    return f;
}

} // namespace

Complex eval_fa(Complex a, Complex z)
{
    check_parameter(a);
    const Complex d = 1.0 - std::conj(a) * z;
    if (d == Complex(0.0))
        throw PoleError("f_a: conj(a) z = 1");
    return (1.0 - std::norm(a)) / (d * d);
}

PowerSeries fa_series(Complex a)
{
    check_parameter(a);
    const Complex ca = std::conj(a);
    const double scale = 1.0 - std::norm(a);
    return PowerSeries::generated(
        [ca, scale](Index k) -> std::optional<Complex> { return scale * double(k + 1) * (ca == Complex(0.0) ? Complex(k == 0 ? 1.0 : 0.0) : std::pow(ca, double(k))); },
        [a](Complex z) { return eval_fa(a, z); }, std::abs(a));
}

Holomorphic fa_function(Complex a)
{
    check_parameter(a);
    const double scale = 1.0 - std::norm(a);
    return from_w(a, a == Complex(0.0) ? 0 : -1, [scale](Complex w) {
        const Complex d = 1.0 - w;
        return scale / (d * d);
    });
}

T1T2Split t1t2_split(Complex a, int N)
{
    check_parameter(a);
    if (N < 0)
        throw ParameterError("t1t2_split: N must be nonnegative");
    const double scale = 1.0 - std::norm(a);
    T1T2Split s;
    s.a = a;
    s.N = N;
    s.t1 = from_w_power(a, -1, N + 1, [scale](Complex w, Complex wm) {
        const Complex d = 1.0 - w;
        return scale * (1.0 - wm * w) / (d * d);
    });
    s.t2 = from_w_power(a, -1, N + 1,
                        [scale, N](Complex w, Complex wm) { return -scale * double(N + 2) * wm / (1.0 - w); });
    return s;
}

Holomorphic fa_partial_sum(Complex a, int N)
{
    check_parameter(a);
    if (N < 0)
        throw ParameterError("fa_partial_sum: N must be nonnegative");
    const double scale = 1.0 - std::norm(a);
    return from_w_power(a, a == Complex(0.0) ? 0 : N, N + 1, [scale, N](Complex w, Complex wm) {
        const Complex d = 1.0 - w;
        return scale * ((1.0 - wm * w) / (d * d) - double(N + 2) * wm / d);
    });
}

Holomorphic fa_remainder(Complex a, int N)
{
    check_parameter(a);
    if (N < 0)
        throw ParameterError("fa_remainder: N must be nonnegative");
    const double scale = 1.0 - std::norm(a);
    Holomorphic f = from_w_power(a, -1, N + 1, [scale, N](Complex w, Complex wm) {
        const Complex d = 1.0 - w;
        return scale * wm * (double(N + 2) / d + w / (d * d));
    });
    if (a == Complex(0.0))
        f.degree = 0;
    return f;
}

// ---------------------------------------------------------------------------

RefinementReport<double> eval_ic(const IcQuery& q, double tol, Index max_nodes)
{
    const double rho = std::abs(q.z);
    if (!(rho < 1.0))
        throw DomainError("eval_ic: |z| must be smaller than 1");
    const double e = -0.5 * (1.0 + q.c);
    const double gap = (1.0 - rho) * (1.0 - rho);
    // Nodes start at theta = arg z, where the integrand peaks.
    auto integrate = [&](int, const std::vector<Index>& counts) {
        const Index M = counts[0];
        ArrayXd v(M);
        for (Index k = 0; k < M; ++k) {
            const double s = std::sin(pi * double(k) / double(M));
            v(k) = std::pow(gap + 4.0 * rho * s * s, e);
        }
        return two_pi * pairwise_sum(v) / double(M);
    };
    const Index start = std::min(AngularPolicy{}.initial(rho), max_nodes);
    RefinementReport<double> rep = refine_until(integrate, {start}, tol, max_nodes);
    if (rho >= 1.0 - 1e-12)
        rep.converged = false;
    return rep;
}

std::vector<IcRatio> ic_asymptotic_ratio(double c, const std::vector<double>& ladder, double tol, Index max_nodes)
{
    std::vector<IcRatio> rows;
    for (double m : ladder) {
        if (!(m > 0.0 && m < 1.0))
            throw DomainError("ic_asymptotic_ratio: ladder values must lie in (0, 1)");
        const auto rep = eval_ic({c, Complex(m)}, tol, max_nodes);
        IcRatio row;
        row.modulus = m;
        row.value = rep.value;
        const double gap = (1.0 - m) * (1.0 + m);
        if (c > 0.0)
            row.comparison = std::pow(gap, -c);
        else if (c == 0.0)
            row.comparison = -std::log(gap);
        else
            row.comparison = 1.0;
        row.ratio = row.value / row.comparison;
        row.converged = rep.converged;
        rows.push_back(row);
    }
    return rows;
}

double blowup_lower_bound(double a, int N)
{
    if (!(a > 0.0 && a < 1.0))
        throw ParameterError("blowup_lower_bound: a must lie in (0, 1)");
    if (N < 0)
        throw ParameterError("blowup_lower_bound: N must be nonnegative");
    return (1.0 - a * a) * std::pow(a, N + 1) * double(N + 2) * -std::log1p(-a);
}

T2Ratio t2_hardy_vs_bound(double a, int N, double tol, Index max_nodes)
{
    T2Ratio r;
    r.bound = blowup_lower_bound(a, N);
    const auto ic = eval_ic({0.0, Complex(a)}, tol, max_nodes);
    r.t2_norm = (1.0 - a * a) * double(N + 2) * std::pow(a, N + 1) * ic.value / two_pi;
    r.ratio = r.t2_norm / r.bound;
    r.converged = ic.converged;
    return r;
}

} // namespace hblab
