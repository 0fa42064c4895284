#include "hblab/series.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace hblab {

namespace {

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

int last_nonzero(const VectorXcd& c)
{
    for (Index k = c.size() - 1; k >= 0; --k)
        if (c(k) != Complex(0.0))
            return int(k);
    return -1;
}

} // namespace

PowerSeries::PowerSeries()
    : gen_([](Index) -> std::optional<Complex> { return Complex(0.0); }),
      memo_(std::make_shared<Memo>()),
      degree_(-1)
{
    memo_->values.push_back(Complex(0.0));
}

PowerSeries PowerSeries::polynomial(VectorXcd coeffs)
{
    PowerSeries s;
    const int deg = last_nonzero(coeffs);
    VectorXcd trimmed = coeffs.head(std::max(deg + 1, 1)).eval();
    if (deg < 0)
        trimmed = VectorXcd::Zero(1);
    s.gen_ = [trimmed](Index k) -> std::optional<Complex> {
        return k < trimmed.size() ? trimmed(k) : Complex(0.0);
    };
    s.memo_ = std::make_shared<Memo>();
    s.memo_->values.assign(trimmed.data(), trimmed.data() + trimmed.size());
    s.degree_ = deg;
    return s;
}

PowerSeries PowerSeries::generated(Generator gen, std::function<Complex(Complex)> closed_form, double spike)
{
    PowerSeries s;
    s.gen_ = std::move(gen);
    s.closed_form_ = std::move(closed_form);
    s.memo_ = std::make_shared<Memo>();
    s.degree_.reset();
    s.spike_ = spike;
    return s;
}

Complex PowerSeries::coefficient(Index k) const
{
    if (k < 0)
        throw ParameterError("coefficient index must be nonnegative");
    if (degree_ && k > *degree_)
        return Complex(0.0);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto& values = memo_->values;
    while (Index(values.size()) <= k) {
        const Index next = Index(values.size());
        std::optional<Complex> c = gen_(next);
        if (!c)
            throw UnavailableCoefficient("coefficient generator cannot produce index " + std::to_string(next));
        values.push_back(*c);
    }
    return values[std::size_t(k)];
}

VectorXcd PowerSeries::head(Index count) const
{
    VectorXcd out(count);
    if (count > 0)
        coefficient(count - 1); // fills the memo in one pass
    for (Index k = 0; k < count; ++k)
        out(k) = coefficient(k);
    return out;
}

Complex PowerSeries::evaluate(Complex z) const
{
    if (closed_form_)
        return closed_form_(z);
    if (degree_)
        return sum(z, *degree_ + 1);
    throw Error("series has neither a closed form nor finite support");
}

Complex PowerSeries::sum(Complex z, Index terms) const
{
    return horner(head(terms), z);
}

Holomorphic PowerSeries::function() const
{
    if (degree_)
        return polynomial_function(head(std::max(*degree_ + 1, 1)));
    Holomorphic f;
    PowerSeries self = *this;
    f.eval = [self](Complex z) { return self.evaluate(z); };
    f.spike = spike_;
    return f;
}

PowerSeries linear_combination(Complex alpha, const PowerSeries& f, Complex beta, const PowerSeries& g)
{
    if (f.degree() && g.degree()) {
        const Index n = std::max(*f.degree(), *g.degree()) + 1;
        return PowerSeries::polynomial(alpha * f.head(std::max<Index>(n, 1)) + beta * g.head(std::max<Index>(n, 1)));
    }
    auto gen = [alpha, beta, f, g](Index k) -> std::optional<Complex> {
        try {
            return alpha * f.coefficient(k) + beta * g.coefficient(k);
        } catch (const UnavailableCoefficient&) {
            return std::nullopt;
        }
    };
    std::function<Complex(Complex)> closed;
    if ((f.has_closed_form() || f.degree()) && (g.has_closed_form() || g.degree()))
        closed = [alpha, beta, f, g](Complex z) { return alpha * f.evaluate(z) + beta * g.evaluate(z); };
    return PowerSeries::generated(gen, closed, std::max(f.spike(), g.spike()));
}

PowerSeries partial_sum(const PowerSeries& f, int N)
{
    if (N < 0)
        throw ParameterError("partial_sum: N must be nonnegative");
    return PowerSeries::polynomial(f.head(Index(N) + 1));
}

Complex horner(const VectorXcd& coeffs, Complex z)
{
    Complex acc(0.0);
    for (Index k = coeffs.size() - 1; k >= 0; --k)
        acc = acc * z + coeffs(k);
    return acc;
}

Holomorphic polynomial_function(const VectorXcd& coeffs)
{
    Holomorphic f;
    f.eval = [coeffs](Complex z) { return horner(coeffs, z); };
    f.circle = [coeffs](double r, Index M) -> ArrayXcd {
        if (coeffs.size() <= 64) {
            const ArrayXcd w = unit_roots(M);
            ArrayXcd out(M);
            for (Index k = 0; k < M; ++k)
                out(k) = horner(coeffs, r * w(k));
            return out;
        }
        ArrayXcd folded = ArrayXcd::Zero(M);
        double rk = 1.0;
        for (Index k = 0; k < coeffs.size(); ++k) {
            folded(k % M) += coeffs(k) * rk;
            rk *= r;
        }
        return synthesize(folded, {M});
    };
    f.degree = last_nonzero(coeffs);
    return f;
}

// ---------------------------------------------------------------------------

MultiIndexSeries::MultiIndexSeries(int dim) : dim_(dim)
{
    if (dim < 1)
        throw ParameterError("MultiIndexSeries: dimension must be at least 1");
}

void MultiIndexSeries::set(const MultiIndex& alpha, Complex c)
{
    if (int(alpha.size()) != dim_)
        throw ParameterError("multi-index has the wrong number of components");
    for (int a : alpha)
        if (a < 0)
            throw ParameterError("multi-index components must be nonnegative");
    if (c == Complex(0.0))
        terms_.erase(alpha);
    else
        terms_[alpha] = c;
}

Complex MultiIndexSeries::coefficient(const MultiIndex& alpha) const
{
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

int MultiIndexSeries::inf_degree() const
{
    int d = -1;
    for (const auto& [alpha, c] : terms_)
        for (int a : alpha)
            d = std::max(d, a);
    return d;
}

Complex MultiIndexSeries::evaluate(const VectorXcd& z) const
{
    if (z.size() != dim_)
        throw ParameterError("evaluate: point has the wrong dimension");
    const int D = inf_degree();
    if (D < 0)
        return Complex(0.0);
    Eigen::MatrixXcd powers(D + 1, dim_);
    for (int j = 0; j < dim_; ++j) {
        powers(0, j) = 1.0;
        for (int k = 1; k <= D; ++k)
            powers(k, j) = powers(k - 1, j) * z(j);
    }
    std::vector<Complex> parts;
    parts.reserve(terms_.size());
    for (const auto& [alpha, c] : terms_) {
        Complex t = c;
        for (int j = 0; j < dim_; ++j)
            t *= powers(alpha[std::size_t(j)], j);
        parts.push_back(t);
    }
    return pairwise_sum(parts);
}

HolomorphicN MultiIndexSeries::function() const
{
    HolomorphicN f;
    f.dim = dim_;
    MultiIndexSeries self = *this;
    f.eval = [self](const VectorXcd& z) { return self.evaluate(z); };
    f.torus = [self](const VectorXd& radii, const std::vector<Index>& counts) {
        Index total = 1;
        for (Index c : counts)
            total *= c;
        ArrayXcd folded = ArrayXcd::Zero(total);
        for (const auto& [alpha, c] : self.terms()) {
            Index flat = 0, stride = 1;
            Complex t = c;
            for (int j = 0; j < self.dim(); ++j) {
                const int a = alpha[std::size_t(j)];
                t *= std::pow(radii(j), a);
                flat += (a % counts[std::size_t(j)]) * stride;
                stride *= counts[std::size_t(j)];
            }
            folded(flat) += t;
        }
        return synthesize(folded, counts);
    };
    f.spike = VectorXd::Zero(dim_);
    f.degree = inf_degree();
    return f;
}

MultiIndexSeries MultiIndexSeries::from_polynomial(const PowerSeries& f)
{
    if (!f.degree())
        throw ParameterError("from_polynomial: series is not known to terminate");
    MultiIndexSeries s(1);
    for (int k = 0; k <= *f.degree(); ++k)
        s.set({k}, f.coefficient(k));
    return s;
}

MultiIndexSeries MultiIndexSeries::tensor_product(const std::vector<PowerSeries>& factors, int max_degree)
{
    const int n = int(factors.size());
    MultiIndexSeries s(n);
    if (max_degree < 0)
        return s;
    std::vector<VectorXcd> heads;
    for (const auto& f : factors)
        heads.push_back(f.head(max_degree + 1));
    MultiIndex alpha(std::size_t(n), 0);
    while (true) {
        Complex c(1.0);
        for (int j = 0; j < n; ++j)
            c *= heads[std::size_t(j)](alpha[std::size_t(j)]);
        s.set(alpha, c);
        int j = 0;
        for (; j < n; ++j) {
            if (++alpha[std::size_t(j)] <= max_degree)
                break;
            alpha[std::size_t(j)] = 0;
        }
        if (j == n)
            break;
    }
    return s;
}

MultiIndexSeries square_partial_sum(const MultiIndexSeries& f, int N)
{
    if (N < 0)
        throw ParameterError("square_partial_sum: N must be nonnegative");
    MultiIndexSeries s(f.dim());
    for (const auto& [alpha, c] : f.terms()) {
        bool keep = true;
        for (int a : alpha)
            keep = keep && a <= N;
        if (keep)
            s.set(alpha, c);
    }
    return s;
}

std::string to_json(const MultiIndexSeries& f)
{
    std::string out = "{\"dim\": " + std::to_string(f.dim()) + ", \"coeffs\": [";
    char buf[64];
    bool first = true;
    for (const auto& [alpha, c] : f.terms()) {
        out += first ? "[" : ", [";
        first = false;
        for (int a : alpha)
            out += std::to_string(a) + ", ";
        std::snprintf(buf, sizeof buf, "%.17g, %.17g", c.real(), c.imag());
        out += buf;
        out += "]";
    }
    out += "]}";
    return out;
}

MultiIndexSeries multi_index_series_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("series JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw ParameterError("series JSON: expected {\"dim\": n, \"coeffs\": [...]}");
    const int dim = j["dim"].get<int>();
    MultiIndexSeries s(dim);
    for (const auto& row : j["coeffs"]) {
        if (!row.is_array() || int(row.size()) != dim + 2)
            throw ParameterError("series JSON: each coefficient row needs dim + 2 entries");
        MultiIndex alpha;
        for (int k = 0; k < dim; ++k)
            alpha.push_back(row[std::size_t(k)].get<int>());
        s.set(alpha, Complex(row[std::size_t(dim)].get<double>(), row[std::size_t(dim) + 1].get<double>()));
    }
    return s;
}

// ---------------------------------------------------------------------------

PartialSumReport partial_sum_report(const PowerSeries& f, int N)
{
    PartialSumReport r;
    r.N = N;
    r.result = partial_sum(f, N);
    r.method = PartialSumMethod::Truncation;
    return r;
}

PartialSumReport partial_sum_report(const Holomorphic& f, int N, double R)
{
    if (N < 0)
        throw ParameterError("partial_sum_report: N must be nonnegative");
    VectorXcd c(N + 1);
    for (int j = 0; j <= N; ++j)
        c(j) = extract_coefficient(f, j, R);
    PartialSumReport r;
    r.N = N;
    r.result = PowerSeries::polynomial(c);
    r.method = PartialSumMethod::ContourKernel;
    r.contour_radius = R;
    return r;
}

Complex extract_coefficient(const Holomorphic& f, int j, double R, Index M)
{
    if (j < 0)
        throw ParameterError("extract_coefficient: j must be nonnegative");
    if (!(R > 0.0 && R < 1.0))
        throw DomainError("extract_coefficient: contour radius must lie in (0, 1)");
    if (M <= j)
        throw AliasingError("extract_coefficient: " + std::to_string(M) + " nodes cannot resolve coefficient " +
                            std::to_string(j));
    const ArrayXcd values = f.on_circle(R, M);
    const ArrayXcd w = unit_roots(M);
    ArrayXcd terms(M);
    for (Index k = 0; k < M; ++k)
        terms(k) = values(k) * std::conj(w((Index(j) * k) % M));
    return pairwise_sum(terms) / (double(M) * std::pow(R, j));
}

Complex extract_coefficient(const Holomorphic& f, int j, double R)
{
    constexpr Index cap = Index(1) << 20;
    Index M = std::max<Index>(256, 4 * (Index(j) + 1));
    Complex prev = extract_coefficient(f, j, R, M);
    while (2 * M <= cap) {
        M *= 2;
        const Complex next = extract_coefficient(f, j, R, M);
        // The noise floor of a_j scales like mean|f| / R^j.
        const double scale = f.on_circle(R, 64).abs().mean() / std::pow(R, j);
        if (std::abs(next - prev) <= 1e-12 * std::max(std::abs(next), scale))
            return next;
        prev = next;
    }
    return prev;
}

Complex partial_sum_kernel(const Holomorphic& f, int N, Complex z, double R)
{
    if (N < 0)
        throw ParameterError("partial_sum_kernel: N must be nonnegative");
    if (!(R > 0.0 && R < 1.0))
        throw DomainError("partial_sum_kernel: contour radius must lie in (0, 1)");
    if (std::abs(z) >= R)
        throw DomainError("partial_sum_kernel: |z| must be smaller than the contour radius");

    auto integrate = [&](Index M) {
        const ArrayXcd values = f.on_circle(R, M);
        const ArrayXcd w = unit_roots(M);
        ArrayXcd terms(M);
        for (Index k = 0; k < M; ++k) {
            const Complex xi = R * w(k);
            const Complex kernel = (1.0 - ipow(z / xi, N + 1)) / (xi - z);
            terms(k) = values(k) * kernel * xi;
        }
        return pairwise_sum(terms) / double(M);
    };

    constexpr Index cap = Index(1) << 20;
    Index M = std::max<Index>(256, round_up(4 * (Index(N) + 2), 64));
    Complex prev = integrate(M);
    while (2 * M <= cap) {
        M *= 2;
        const Complex next = integrate(M);
        if (std::abs(next - prev) <= 1e-14 * std::max(std::abs(next), 1e-300))
            return next;
        prev = next;
    }
    return prev;
}

Complex partial_sum_kernel(const Holomorphic& f, int N, Complex z)
{
    return partial_sum_kernel(f, N, z, 0.5 * (1.0 + std::abs(z)));
}

double kernel_identity_check(Complex z, Complex xi, int N)
{
    if (N < 0)
        throw ParameterError("kernel_identity_check: N must be nonnegative");
    if (xi == Complex(0.0))
        throw DomainError("kernel_identity_check: xi must be nonzero");
    if (xi == z)
        throw SingularKernel("kernel_identity_check: xi coincides with z");
    const Complex q = z / xi;
    Complex term = 1.0 / xi, direct(0.0);
    for (int j = 0; j <= N; ++j) {
        direct += term;
        term *= q;
    }
    const Complex closed = (1.0 - ipow(q, N + 1)) / (xi - z);
    return std::abs(direct - closed);
}

} // namespace hblab
