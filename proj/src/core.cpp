#include "hblab/core.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <unsupported/Eigen/FFT>

namespace hblab {

namespace {

ArrayXcd compute_roots(Index M)
{
    ArrayXcd w(M);
    for (Index k = 0; k < M; ++k)
        w(k) = std::polar(1.0, two_pi * double(k) / double(M));
    return w;
}

} // namespace

ArrayXcd unit_roots(Index M)
{
    static std::mutex mutex;
    static std::map<Index, std::shared_ptr<const ArrayXcd>> cache;
    static Index cached = 0;
    if (M < 1)
        throw ParameterError("unit_roots: need at least one node");
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(M);
        if (it != cache.end())
            return *it->second;
    }
    auto w = std::make_shared<const ArrayXcd>(compute_roots(M));
    std::lock_guard<std::mutex> lock(mutex);
    if (cached + M > (Index(1) << 25)) {
        cache.clear();
        cached = 0;
    }
    if (cache.emplace(M, w).second)
        cached += M;
    return *w;
}

Index round_up(Index n, Index granularity)
{
    if (n < 1)
        n = 1;
    return ((n + granularity - 1) / granularity) * granularity;
}

namespace {

Index product(const std::vector<Index>& counts)
{
    Index n = 1;
    for (Index c : counts)
        n *= c;
    return n;
}

// Apply an unscaled 1D transform along every mode of a flattened tensor.
ArrayXcd modewise(ArrayXcd data, const std::vector<Index>& counts, bool inverse)
{
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    const Index total = product(counts);
    Index stride = 1;
    std::vector<Complex> line, out;
    for (Index extent : counts) {
        if (extent > 1) {
            line.resize(std::size_t(extent));
            const Index block = stride * extent;
            for (Index outer = 0; outer < total; outer += block) {
                for (Index inner = 0; inner < stride; ++inner) {
                    for (Index k = 0; k < extent; ++k)
                        line[std::size_t(k)] = data(outer + inner + k * stride);
                    if (inverse)
                        fft.inv(out, line);
                    else
                        fft.fwd(out, line);
                    for (Index k = 0; k < extent; ++k)
                        data(outer + inner + k * stride) = out[std::size_t(k)];
                }
            }
        }
        stride *= extent;
    }
    return data;
}

} // namespace

ArrayXcd synthesize(const ArrayXcd& c, const std::vector<Index>& counts)
{
    if (c.size() != product(counts))
        throw ParameterError("synthesize: coefficient tensor does not match grid extents");
    return modewise(c, counts, true);
}

ArrayXcd analyze(const ArrayXcd& v, const std::vector<Index>& counts)
{
    if (v.size() != product(counts))
        throw ParameterError("analyze: sample tensor does not match grid extents");
    return modewise(v, counts, false) / double(product(counts));
}

// ---------------------------------------------------------------------------

ArrayXcd Holomorphic::on_circle(double r, Index M) const
{
    if (circle)
        return circle(r, M);
    const ArrayXcd w = unit_roots(M);
    ArrayXcd out(M);
    for (Index k = 0; k < M; ++k)
        out(k) = eval(r * w(k));
    return out;
}

Holomorphic operator*(Complex c, const Holomorphic& f)
{
    Holomorphic g;
    g.eval = [c, e = f.eval](Complex z) { return c * e(z); };
    g.circle = [c, f](double r, Index M) -> ArrayXcd { return c * f.on_circle(r, M); };
    g.spike = f.spike;
    g.degree = f.degree;
    return g;
}

Holomorphic operator+(const Holomorphic& f, const Holomorphic& g)
{
    Holomorphic h;
    h.eval = [f, g](Complex z) { return f.eval(z) + g.eval(z); };
    h.circle = [f, g](double r, Index M) -> ArrayXcd { return f.on_circle(r, M) + g.on_circle(r, M); };
    h.spike = std::max(f.spike, g.spike);
    h.degree = (f.degree < 0 || g.degree < 0) ? -1 : std::max(f.degree, g.degree);
    return h;
}

Holomorphic operator-(const Holomorphic& f, const Holomorphic& g)
{
    return f + Complex(-1.0) * g;
}

Holomorphic dilate(const Holomorphic& f, double rho)
{
    Holomorphic g;
    g.eval = [rho, e = f.eval](Complex z) { return e(rho * z); };
    g.circle = [rho, f](double r, Index M) { return f.on_circle(rho * r, M); };
    g.spike = f.spike * rho;
    g.degree = f.degree;
    return g;
}

// ---------------------------------------------------------------------------

ArrayXcd HolomorphicN::on_torus(const VectorXd& radii, const std::vector<Index>& counts) const
{
    if (radii.size() != dim || Index(counts.size()) != dim)
        throw ParameterError("on_torus: radii/counts do not match the dimension");
    if (torus)
        return torus(radii, counts);

    std::vector<ArrayXcd> roots;
    roots.reserve(counts.size());
    for (Index c : counts)
        roots.push_back(unit_roots(c));
    const Index total = product(counts);
    ArrayXcd out(total);
    std::vector<Index> idx(std::size_t(dim), 0);
    VectorXcd z(dim);
    for (Index flat = 0; flat < total; ++flat) {
        for (int j = 0; j < dim; ++j)
            z(j) = radii(j) * roots[std::size_t(j)](idx[std::size_t(j)]);
        out(flat) = eval(z);
        for (int j = 0; j < dim; ++j) {
            if (++idx[std::size_t(j)] < counts[std::size_t(j)])
                break;
            idx[std::size_t(j)] = 0;
        }
    }
    return out;
}

namespace {

// Outer product of per-coordinate samples, coordinate 0 fastest.
ArrayXcd kron_samples(const std::vector<ArrayXcd>& factors)
{
    ArrayXcd acc = factors.front();
    for (std::size_t j = 1; j < factors.size(); ++j) {
        const ArrayXcd& g = factors[j];
        ArrayXcd next(acc.size() * g.size());
        for (Index k = 0; k < g.size(); ++k)
            next.segment(k * acc.size(), acc.size()) = acc * g(k);
        acc = std::move(next);
    }
    return acc;
}

} // namespace

HolomorphicN separable_sum(const std::vector<std::vector<Holomorphic>>& terms)
{
    if (terms.empty() || terms.front().empty())
        throw ParameterError("separable_sum: need at least one term with one factor");
    const std::size_t n = terms.front().size();
    for (const auto& t : terms)
        if (t.size() != n)
            throw ParameterError("separable_sum: terms have different numbers of factors");

    HolomorphicN f;
    f.dim = int(n);
    f.eval = [terms](const VectorXcd& z) {
        Complex s(0.0);
        for (const auto& t : terms) {
            Complex prod(1.0);
            for (std::size_t j = 0; j < t.size(); ++j)
                prod *= t[j].eval(z(Index(j)));
            s += prod;
        }
        return s;
    };
    f.torus = [terms](const VectorXd& radii, const std::vector<Index>& counts) {
        ArrayXcd total;
        for (const auto& t : terms) {
            std::vector<ArrayXcd> samples;
            samples.reserve(t.size());
            for (std::size_t j = 0; j < t.size(); ++j)
                samples.push_back(t[j].on_circle(radii(Index(j)), counts[j]));
            ArrayXcd term = kron_samples(samples);
            if (total.size() == 0)
                total = std::move(term);
            else
                total += term;
        }
        return total;
    };
    f.spike = VectorXd::Zero(Index(n));
    int degree = 0;
    for (const auto& t : terms)
        for (std::size_t j = 0; j < n; ++j) {
            f.spike(Index(j)) = std::max(f.spike(Index(j)), t[j].spike);
            degree = (degree < 0 || t[j].degree < 0) ? -1 : std::max(degree, t[j].degree);
        }
    f.degree = degree;
    return f;
}

HolomorphicN tensor_product(const std::vector<Holomorphic>& factors)
{
    return separable_sum({factors});
}

HolomorphicN operator*(Complex c, const HolomorphicN& f)
{
    HolomorphicN g = f;
    g.eval = [c, e = f.eval](const VectorXcd& z) { return c * e(z); };
    g.torus = [c, f](const VectorXd& r, const std::vector<Index>& m) -> ArrayXcd { return c * f.on_torus(r, m); };
    return g;
}

HolomorphicN operator+(const HolomorphicN& f, const HolomorphicN& g)
{
    if (f.dim != g.dim)
        throw ParameterError("HolomorphicN sum: dimension mismatch");
    HolomorphicN h;
    h.dim = f.dim;
    h.eval = [f, g](const VectorXcd& z) { return f.eval(z) + g.eval(z); };
    h.torus = [f, g](const VectorXd& r, const std::vector<Index>& m) -> ArrayXcd {
        return f.on_torus(r, m) + g.on_torus(r, m);
    };
    h.spike = f.spike.cwiseMax(g.spike);
    h.degree = (f.degree < 0 || g.degree < 0) ? -1 : std::max(f.degree, g.degree);
    return h;
}

HolomorphicN operator-(const HolomorphicN& f, const HolomorphicN& g)
{
    return f + Complex(-1.0) * g;
}

HolomorphicN dilate(const HolomorphicN& f, double rho)
{
    HolomorphicN g = f;
    g.eval = [rho, e = f.eval](const VectorXcd& z) { return e(rho * z); };
    g.torus = [rho, f](const VectorXd& r, const std::vector<Index>& m) { return f.on_torus(rho * r, m); };
    g.spike = rho * f.spike;
    return g;
}

} // namespace hblab
