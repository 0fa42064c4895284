#include "hblab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hblab/witnesses.hpp"

namespace hblab {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Holomorphic zero_function()
{
    return polynomial_function(VectorXcd::Zero(1));
}

// splitmix64, mapped to [-1, 1).
struct SplitMix {
    std::uint64_t state;
    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53 * 2.0 - 1.0; }
};

void add_settings(ExperimentRecord& r, const NormOptions& o)
{
    r.set("tol", o.tol).set("volume_tol", o.volume_tol).set("max_nodes", (long long)o.max_nodes);
}

bool is_wall_time(const std::string& key)
{
    return key == "wall_s";
}

std::string csv_cell(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string>)
                return x;
            else if constexpr (std::is_same_v<T, double>)
                return fmt(x);
            else if constexpr (std::is_same_v<T, bool>)
                return x ? "true" : "false";
            else
                return std::to_string(x);
        },
        v);
}

double plateau_base(const std::vector<std::pair<int, double>>& curve, std::size_t back)
{
    return curve.size() > back ? curve[curve.size() - 1 - back].second : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

// ---------------------------------------------------------------------------
// Registry

int ProductEntry::degree() const
{
    int d = 0;
    for (const RegistryEntry& f : factors) {
        if (f.degree < 0)
            return -1;
        d = std::max(d, f.degree);
    }
    return d;
}

HolomorphicN ProductEntry::function() const
{
    std::vector<Holomorphic> parts;
    for (const RegistryEntry& f : factors)
        parts.push_back(f.function);
    return tensor_product(parts);
}

HolomorphicN ProductEntry::partial(int N) const
{
    std::vector<Holomorphic> parts;
    for (const RegistryEntry& f : factors)
        parts.push_back(f.partial(N));
    return tensor_product(parts);
}

HolomorphicN ProductEntry::remainder(int N) const
{
    if (degree() >= 0 && N >= degree()) {
        std::vector<Holomorphic> parts(factors.size(), zero_function());
        return tensor_product(parts);
    }
    return function() - partial(N);
}

RegistryEntry polynomial_entry(std::string id, VectorXcd coeffs)
{
    RegistryEntry e;
    e.id = std::move(id);
    e.series = PowerSeries::polynomial(coeffs);
    e.function = polynomial_function(coeffs);
    e.degree = e.series.degree().value_or(-1);
    e.safe_radius = 1.0;
    e.partial = [coeffs](int N) {
        return polynomial_function(coeffs.head(std::min<Index>(Index(N) + 1, coeffs.size())));
    };
    e.remainder = [coeffs](int N) {
        if (Index(N) + 1 >= coeffs.size())
            return zero_function();
        VectorXcd tail = coeffs;
        tail.head(N + 1).setZero();
        return polynomial_function(tail);
    };
    return e;
}

RegistryEntry constant_entry(Complex c)
{
    return polynomial_entry(c == Complex(1.0) ? "const" : "const-" + short_number(std::abs(c)),
                            VectorXcd::Constant(1, c));
}

RegistryEntry monomial_entry(int k)
{
    VectorXcd c = VectorXcd::Zero(k + 1);
    c(k) = 1.0;
    return polynomial_entry("z^" + std::to_string(k), c);
}

RegistryEntry random_polynomial_entry(std::string id, int degree, std::uint64_t seed)
{
    SplitMix rng{seed};
    VectorXcd c(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        const double re = rng.uniform();
        c(k) = Complex(re, rng.uniform());
    }
    return polynomial_entry(std::move(id), c);
}

RegistryEntry fa_entry(double a)
{
    RegistryEntry e;
    e.id = "fa-" + short_number(a);
    e.series = fa_series(a);
    e.function = fa_function(a);
    e.safe_radius = a > 0.0 ? std::min(1.0, 0.9 / a) : 1.0;
    e.partial = [a](int N) { return fa_partial_sum(a, N); };
    e.remainder = [a](int N) { return fa_remainder(a, N); };
    return e;
}

RegistryEntry geometric_entry(double q)
{
    if (!(std::abs(q) < 1.0))
        throw ParameterError("geometric_entry: need |q| < 1");
    RegistryEntry e;
    e.id = "geom-" + short_number(q);
    e.series = PowerSeries::generated([q](Index k) -> std::optional<Complex> { return std::pow(q, double(k)); },
                                      [q](Complex z) { return 1.0 / (1.0 - q * z); }, std::abs(q));
    e.function = e.series.function();
    e.safe_radius = q != 0.0 ? std::min(1.0, 0.9 / std::abs(q)) : 1.0;
    const PowerSeries series = e.series;
    e.partial = [series](int N) { return partial_sum(series, N).function(); };
    e.remainder = [q](int N) {
        Holomorphic r;
        r.eval = [q, N](Complex z) { return std::pow(q * z, double(N + 1)) / (1.0 - q * z); };
        r.spike = std::abs(q);
        return r;
    };
    return e;
}

FunctionRegistry FunctionRegistry::standard(std::uint64_t seed)
{
    FunctionRegistry r;
    r.add(constant_entry(1.0));
    r.add(monomial_entry(1));
    r.add(monomial_entry(5));
    const int degrees[3] = {4, 9, 16};
    for (int i = 0; i < 3; ++i)
        r.add(random_polynomial_entry("poly-" + std::to_string(i), degrees[i], seed + std::uint64_t(i)));
    for (double a : default_a_set())
        r.add(fa_entry(a));
    r.add(geometric_entry(0.5));
    r.add(ProductEntry{"fa-0.9xfa-0.9", {r.get("fa-0.9"), r.get("fa-0.9")}});
    r.add(ProductEntry{"fa-0.5xfa-0.5", {r.get("fa-0.5"), r.get("fa-0.5")}});
    r.add(ProductEntry{"z^1xz^5", {r.get("z^1"), r.get("z^5")}});
    r.add(ProductEntry{"poly-0xgeom-0.5", {r.get("poly-0"), r.get("geom-0.5")}});
    return r;
}

const RegistryEntry& FunctionRegistry::get(const std::string& id) const
{
    for (const RegistryEntry& e : entries_)
        if (e.id == id)
            return e;
    throw ParameterError("unknown function id: " + id);
}

const ProductEntry& FunctionRegistry::get_product(const std::string& id) const
{
    for (const ProductEntry& e : products_)
        if (e.id == id)
            return e;
    throw ParameterError("unknown product id: " + id);
}

bool FunctionRegistry::has(const std::string& id) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const RegistryEntry& e) { return e.id == id; });
}

bool FunctionRegistry::has_product(const std::string& id) const
{
    return std::any_of(products_.begin(), products_.end(), [&](const ProductEntry& e) { return e.id == id; });
}

void FunctionRegistry::add(RegistryEntry e)
{
    if (has(e.id))
        throw ParameterError("duplicate function id: " + e.id);
    entries_.push_back(std::move(e));
}

void FunctionRegistry::add(ProductEntry e)
{
    if (has_product(e.id))
        throw ParameterError("duplicate product id: " + e.id);
    products_.push_back(std::move(e));
}

// ---------------------------------------------------------------------------
// Records

ExperimentRecord& ExperimentRecord::set(const std::string& key, Value v)
{
    for (auto& [k, value] : fields)
        if (k == key) {
            value = std::move(v);
            return *this;
        }
    fields.emplace_back(key, std::move(v));
    return *this;
}

const Value& ExperimentRecord::get(const std::string& key) const
{
    for (const auto& [k, value] : fields)
        if (k == key)
            return value;
    throw ParameterError("record has no field " + key);
}

double ExperimentRecord::number(const std::string& key) const
{
    const Value& v = get(key);
    if (const double* d = std::get_if<double>(&v))
        return *d;
    if (const long long* i = std::get_if<long long>(&v))
        return double(*i);
    throw ParameterError("field " + key + " is not numeric");
}

std::vector<std::string> Table::columns() const
{
    std::vector<std::string> cols;
    for (const ExperimentRecord& r : rows)
        for (const auto& [k, v] : r.fields)
            if (std::find(cols.begin(), cols.end(), k) == cols.end())
                cols.push_back(k);
    return cols;
}

std::string to_csv(const Table& t, bool timing)
{
    std::vector<std::string> cols;
    for (const std::string& c : t.columns())
        if (timing || !is_wall_time(c))
            cols.push_back(c);
    std::ostringstream out;
    out << "experiment";
    for (const std::string& c : cols)
        out << ',' << c;
    out << '\n';
    for (const ExperimentRecord& r : t.rows) {
        out << t.experiment;
        for (const std::string& c : cols) {
            out << ',';
            for (const auto& [k, v] : r.fields)
                if (k == c)
                    out << csv_cell(v);
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json_lines(const Table& t, bool timing)
{
    std::ostringstream out;
    for (const ExperimentRecord& r : t.rows) {
        nlohmann::ordered_json j;
        j["experiment"] = t.experiment;
        for (const auto& [k, v] : r.fields) {
            if (!timing && is_wall_time(k))
                continue;
            std::visit([&](const auto& x) { j[k] = x; }, v);
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

std::string serialize(const Table& t, Format f, bool timing)
{
    return f == Format::Csv ? to_csv(t, timing) : to_json_lines(t, timing);
}

std::map<std::string, std::string> plot_data(const Table& t)
{
    std::map<std::string, std::string> curves;
    if (t.x.empty())
        return curves;
    for (const ExperimentRecord& r : t.rows) {
        if (r.get("kind") != Value(std::string("cell")))
            continue;
        const std::string group = t.group.empty() ? "" : csv_cell(r.get(t.group)) + ".";
        for (const std::string& y : t.y)
            curves[t.experiment + "." + group + y] += fmt(r.number(t.x)) + ' ' + fmt(r.number(y)) + '\n';
    }
    return curves;
}

// ---------------------------------------------------------------------------
// Settings and grids

NormOptions Settings::disc() const
{
    NormOptions o;
    if (tol)
        o.tol = *tol;
    if (volume_tol)
        o.volume_tol = *volume_tol;
    o.max_nodes = max_nodes;
    return o;
}

NormOptions Settings::several(int n) const
{
    NormOptions o = NormOptions::several_variables(n);
    if (tol)
        o.tol = *tol;
    if (volume_tol)
        o.volume_tol = *volume_tol;
    o.max_nodes = max_nodes;
    o.directions = directions;
    return o;
}

std::vector<int> default_disc_n_set()
{
    std::vector<int> n;
    for (int k = 3; k <= 10; ++k)
        n.push_back(1 << k);
    return n;
}

std::vector<int> default_several_n_set()
{
    std::vector<int> n;
    for (int k = 0; k <= 6; ++k)
        n.push_back(1 << k);
    return n;
}

std::vector<double> default_a_set()
{
    return {0.0, 0.5, 0.9, 0.99, 0.999};
}

void parallel_for(int count, int threads, const std::function<void(int)>& f)
{
    if (threads <= 0)
        threads = int(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Experiments

Outcome run_uniform_bound(const std::vector<RegistryEntry>& family, const std::vector<int>& n_set,
                          const Settings& s)
{
    if (family.empty())
        throw ParameterError("run_uniform_bound: empty family");
    const NormOptions opt = s.disc();
    std::vector<NormEstimate> h1(family.size());
    parallel_for(int(family.size()), s.threads, [&](int i) { h1[std::size_t(i)] = hardy_norm_disc(family[std::size_t(i)].function, 1.0, opt); });

    const int cells = int(family.size() * n_set.size());
    std::vector<ExperimentRecord> rows(std::size_t(cells), ExperimentRecord{"uniform-bound", {}});
    parallel_for(cells, s.threads, [&](int c) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t fi = std::size_t(c) / n_set.size();
        const int N = n_set[std::size_t(c) % n_set.size()];
        const Holomorphic partial = family[fi].partial(N);
        const NormEstimate a1 = bergman_norm_disc(partial, 1.0, opt);
        const NormEstimate h1p = hardy_norm_disc(partial, 1.0, opt);
        ExperimentRecord& r = rows[std::size_t(c)];
        r.set("kind", std::string("cell")).set("f", family[fi].id).set("N", (long long)N);
        r.set("a1_partial", a1.value).set("h1_partial", h1p.value).set("h1_f", h1[fi].value);
        r.set("a1_ratio", a1.value / h1[fi].value).set("h1_ratio", h1p.value / h1[fi].value);
        r.set("converged", a1.converged && h1p.converged && h1[fi].converged);
        add_settings(r, opt);
        r.set("wall_s", seconds_since(t0));
    });

    Outcome out;
    out.table.experiment = "uniform-bound";
    out.table.x = "N";
    out.table.y = {"a1_ratio", "h1_ratio"};
    out.table.group = "f";
    double max_a1 = 0.0, max_h1 = 0.0;
    std::map<int, double> by_n;
    for (const ExperimentRecord& r : rows) {
        if (!std::get<bool>(r.get("converged"))) {
            out.quadrature_ok = false;
            out.violations.push_back("uniform-bound: quadrature not converged for " +
                                     std::get<std::string>(r.get("f")) + " N=" + csv_cell(r.get("N")));
            continue;
        }
        max_a1 = std::max(max_a1, r.number("a1_ratio"));
        max_h1 = std::max(max_h1, r.number("h1_ratio"));
        double& m = by_n[int(r.number("N"))];
        m = std::max(m, r.number("a1_ratio"));
    }
    out.table.rows = rows;
    ExperimentRecord summary{"uniform-bound", {}};
    summary.set("kind", std::string("summary")).set("f", std::string("max")).set("N", (long long)-1);
    summary.set("a1_ratio", max_a1).set("h1_ratio", max_h1);
    std::vector<std::pair<int, double>> curve(by_n.begin(), by_n.end());
    if (curve.size() >= 4) {
        const double low = std::max(curve[0].second, curve[1].second);
        const double high = std::max(plateau_base(curve, 0), plateau_base(curve, 1));
        summary.set("plateau_growth", high / low - 1.0);
        if (!(high < 1.1 * low)) {
            out.contract_ok = false;
            out.violations.push_back("uniform-bound: A1 ratio grows by more than 10% between the first and last "
                                     "two N");
        }
    }
    if (!std::isfinite(max_a1)) {
        out.contract_ok = false;
        out.violations.push_back("uniform-bound: non-finite maximum");
    }
    summary.set("converged", out.quadrature_ok);
    add_settings(summary, opt);
    out.table.rows.push_back(summary);
    return out;
}

Outcome run_a1_convergence(const RegistryEntry& f, const std::vector<int>& n_set, double target, const Settings& s)
{
    const NormOptions opt = s.disc();
    std::vector<ExperimentRecord> rows(n_set.size(), ExperimentRecord{"a1-converge", {}});
    parallel_for(int(n_set.size()), s.threads, [&](int i) {
        const auto t0 = std::chrono::steady_clock::now();
        const int N = n_set[std::size_t(i)];
        const NormEstimate e = bergman_norm_disc(f.remainder(N), 1.0, opt);
        ExperimentRecord& r = rows[std::size_t(i)];
        r.set("kind", std::string("cell")).set("f", f.id).set("N", (long long)N).set("a1_error", e.value);
        r.set("converged", e.converged);
        add_settings(r, opt);
        r.set("wall_s", seconds_since(t0));
    });
    Outcome out;
    out.table.experiment = "a1-converge";
    out.table.x = "N";
    out.table.y = {"a1_error"};
    out.table.group = "f";
    out.table.rows = rows;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ExperimentRecord& r = rows[i];
        const int N = int(r.number("N"));
        const double err = r.number("a1_error");
        if (!std::get<bool>(r.get("converged"))) {
            out.quadrature_ok = false;
            out.violations.push_back("a1-converge: quadrature not converged at N=" + std::to_string(N));
        }
        if (f.degree >= 0) {
            if (N >= f.degree && !(err < 1e-12)) {
                out.contract_ok = false;
                out.violations.push_back("a1-converge: polynomial error does not vanish at N=" + std::to_string(N));
            }
            continue;
        }
        if (N >= 16) {
            if (!(err < previous)) {
                out.contract_ok = false;
                out.violations.push_back("a1-converge: error column not decreasing at N=" + std::to_string(N));
            }
            previous = err;
        }
    }
    if (f.degree < 0 && !rows.empty() && !(rows.back().number("a1_error") < target)) {
        out.contract_ok = false;
        out.violations.push_back("a1-converge: final error " + fmt(rows.back().number("a1_error")) +
                                 " not below " + fmt(target));
    }
    return out;
}

Outcome run_blowup(const std::vector<int>& n_set, const Settings& s)
{
    const NormOptions opt = s.disc();
    const double t2_tol = 1e-11;
    std::vector<ExperimentRecord> rows(n_set.size(), ExperimentRecord{"blowup", {}});
    parallel_for(int(n_set.size()), s.threads, [&](int i) {
        const auto t0 = std::chrono::steady_clock::now();
        const int N = n_set[std::size_t(i)];
        if (N < 1 || N > 4096)
            throw ParameterError("run_blowup: N must lie in [1, 4096]");
        const double a = double(N) / (N + 1);
        const Holomorphic partial = fa_partial_sum(a, N);
        const NormEstimate h1p = hardy_norm_disc(partial, 1.0, opt);
        const NormEstimate a1p = bergman_norm_disc(partial, 1.0, opt);
        const NormEstimate h1f = hardy_norm_disc(fa_function(a), 1.0, opt);
        const NormEstimate t1 = hardy_norm_disc(t1t2_split(a, N).t1, 1.0, opt);
        const T2Ratio t2 = t2_hardy_vs_bound(a, N, t2_tol, opt.max_nodes * 4);
        ExperimentRecord& r = rows[std::size_t(i)];
        r.set("kind", std::string("cell")).set("N", (long long)N).set("a", a);
        r.set("h1_partial", h1p.value).set("a1_partial", a1p.value).set("h1_f", h1f.value);
        r.set("lower_bound", blowup_lower_bound(a, N));
        r.set("h1_ratio", h1p.value / h1f.value).set("a1_ratio", a1p.value / h1f.value);
        r.set("t1_norm", t1.value).set("t2_norm", t2.t2_norm).set("t2_ratio", t2.ratio);
        r.set("converged", h1p.converged && a1p.converged && h1f.converged && t1.converged && t2.converged);
        add_settings(r, opt);
        r.set("wall_s", seconds_since(t0));
    });
    Outcome out;
    out.table.experiment = "blowup";
    out.table.x = "N";
    out.table.y = {"h1_partial", "a1_ratio", "t2_ratio"};
    out.table.rows = rows;
    double previous = -1.0, band_lo = std::numeric_limits<double>::infinity(), band_hi = 0.0;
    for (const ExperimentRecord& r : rows) {
        const std::string at = " at N=" + csv_cell(r.get("N"));
        if (!std::get<bool>(r.get("converged"))) {
            out.quadrature_ok = false;
            out.violations.push_back("blowup: quadrature not converged" + at);
        }
        if (!(r.number("h1_partial") > previous)) {
            out.contract_ok = false;
            out.violations.push_back("blowup: H1 norm of the partial sum not increasing" + at);
        }
        previous = r.number("h1_partial");
        if (!(std::abs(r.number("h1_f") - 1.0) <= 1e-6)) {
            out.contract_ok = false;
            out.violations.push_back("blowup: ||f_a||_H1 off 1 by more than 1e-6" + at);
        }
        if (!(r.number("t1_norm") <= 2.0)) {
            out.contract_ok = false;
            out.violations.push_back("blowup: ||T1||_H1 above 2" + at);
        }
        band_lo = std::min(band_lo, r.number("t2_ratio"));
        band_hi = std::max(band_hi, r.number("t2_ratio"));
    }
    if (!rows.empty()) {
        ExperimentRecord summary{"blowup", {}};
        summary.set("kind", std::string("summary")).set("N", (long long)-1);
        summary.set("t2_band_min", band_lo).set("t2_band_max", band_hi).set("t2_band_spread", band_hi / band_lo);
        summary.set("h1_growth", rows.back().number("h1_partial") / rows.front().number("h1_partial"));
        summary.set("converged", out.quadrature_ok);
        add_settings(summary, opt);
        out.table.rows.push_back(summary);
        if (!(band_hi <= 3.0 * band_lo)) {
            out.contract_ok = false;
            out.violations.push_back("blowup: ||T2||/L band spread above 3");
        }
    }
    return out;
}

namespace {

// Integral of |1 - e^{i theta}|^{-(1 + c)} over the circle, finite for c < 0.
double ic_boundary_value(double c)
{
    const double s = 1.0 + c;
    return two_pi * std::tgamma(1.0 - s) / std::pow(std::tgamma(1.0 - s / 2.0), 2);
}

} // namespace

Outcome run_ic_asymptotics(const std::vector<double>& c_set, const std::vector<double>& moduli, const Settings& s)
{
    const double tol = s.tol.value_or(1e-11);
    const Index cap = std::max<Index>(s.max_nodes, Index(1) << 24);
    std::vector<std::vector<IcRatio>> tables(c_set.size());
    parallel_for(int(c_set.size()), s.threads,
                 [&](int i) { tables[std::size_t(i)] = ic_asymptotic_ratio(c_set[std::size_t(i)], moduli, tol, cap); });
    Outcome out;
    out.table.experiment = "ic";
    out.table.x = "modulus";
    out.table.y = {"ratio"};
    out.table.group = "c";
    for (std::size_t i = 0; i < c_set.size(); ++i) {
        const double c = c_set[i];
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, vmax = 0.0;
        bool converged = true;
        for (const IcRatio& q : tables[i]) {
            ExperimentRecord r{"ic", {}};
            r.set("kind", std::string("cell")).set("c", c).set("modulus", q.modulus).set("value", q.value);
            r.set("comparison", q.comparison).set("ratio", q.ratio).set("converged", q.converged);
            r.set("tol", tol).set("max_nodes", (long long)cap);
            out.table.rows.push_back(r);
            converged = converged && q.converged;
            lo = std::min(lo, q.ratio);
            hi = std::max(hi, q.ratio);
            vmax = std::max(vmax, q.value);
            if (c == 1.0 && !(std::abs(q.ratio - two_pi) <= 1e-8)) {
                out.contract_ok = false;
                out.violations.push_back("ic: c = 1 ratio differs from 2 pi at |z| = " + fmt(q.modulus));
            }
        }
        if (!converged) {
            out.quadrature_ok = false;
            out.violations.push_back("ic: quadrature not converged for c = " + fmt(c));
        }
        ExperimentRecord summary{"ic", {}};
        summary.set("kind", std::string("summary")).set("c", c).set("band_min", lo).set("band_max", hi);
        summary.set("band_spread", hi / lo).set("value_max", vmax);
        if (c < 0.0) {
            const double bound = ic_boundary_value(c);
            summary.set("boundary_value", bound);
            if (!(vmax <= bound * (1 + 1e-9))) {
                out.contract_ok = false;
                out.violations.push_back("ic: c < 0 values exceed the boundary value for c = " + fmt(c));
            }
        } else if (c != 1.0 && !(hi <= 4.0 * lo)) {
            out.contract_ok = false;
            out.violations.push_back("ic: band spread above 4 for c = " + fmt(c));
        }
        summary.set("converged", converged);
        out.table.rows.push_back(summary);
    }
    return out;
}

Outcome run_reinhardt(const ReinhardtDomain& domain, const std::vector<ProductEntry>& family,
                      const std::vector<int>& n_set, const Settings& s)
{
    const int n = domain.dim();
    if (n < 2 || n > 3)
        throw ParameterError("run_reinhardt: dimension must be 2 or 3");
    for (const ProductEntry& f : family)
        if (f.dim() != n)
            throw ParameterError("run_reinhardt: " + f.id + " has the wrong dimension");
    const NormOptions opt = s.several(n);
    std::vector<NormEstimate> h1(family.size());
    parallel_for(int(family.size()), s.threads,
                 [&](int i) { h1[std::size_t(i)] = hardy_norm_reinhardt(family[std::size_t(i)].function(), 1.0, domain, opt); });
    const int cells = int(family.size() * n_set.size());
    std::vector<ExperimentRecord> rows(std::size_t(cells), ExperimentRecord{"reinhardt", {}});
    parallel_for(cells, s.threads, [&](int c) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t fi = std::size_t(c) / n_set.size();
        const int N = n_set[std::size_t(c) % n_set.size()];
        const NormEstimate a1 = bergman_norm_reinhardt(family[fi].partial(N), 1.0, domain, opt);
        const NormEstimate err = bergman_norm_reinhardt(family[fi].remainder(N), 1.0, domain, opt);
        ExperimentRecord& r = rows[std::size_t(c)];
        r.set("kind", std::string("cell")).set("domain", domain.name()).set("f", family[fi].id).set("N", (long long)N);
        r.set("a1_partial", a1.value).set("h1_f", h1[fi].value).set("a1_ratio", a1.value / h1[fi].value);
        r.set("a1_error", err.value);
        r.set("converged", a1.converged && err.converged && h1[fi].converged);
        add_settings(r, opt);
        r.set("directions", (long long)opt.directions);
        r.set("wall_s", seconds_since(t0));
    });
    Outcome out;
    out.table.experiment = "reinhardt";
    out.table.x = "N";
    out.table.y = {"a1_ratio", "a1_error"};
    out.table.group = "f";
    out.table.rows = rows;
    for (std::size_t fi = 0; fi < family.size(); ++fi) {
        const ProductEntry& f = family[fi];
        std::vector<std::pair<int, double>> ratio;
        double previous = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
        for (std::size_t k = 0; k < n_set.size(); ++k) {
            const ExperimentRecord& r = rows[fi * n_set.size() + k];
            const int N = n_set[k];
            const std::string at = " for " + f.id + " at N=" + std::to_string(N);
            if (!std::get<bool>(r.get("converged"))) {
                out.quadrature_ok = false;
                out.violations.push_back("reinhardt: quadrature not converged" + at);
            }
            ratio.emplace_back(N, r.number("a1_ratio"));
            max_ratio = std::max(max_ratio, r.number("a1_ratio"));
            const double e = r.number("a1_error");
            if (f.degree() >= 0) {
                if (N >= f.degree() && !(e < 1e-12)) {
                    out.contract_ok = false;
                    out.violations.push_back("reinhardt: polynomial error does not vanish" + at);
                }
            } else if (N >= 16) {
                if (!(e < previous)) {
                    out.contract_ok = false;
                    out.violations.push_back("reinhardt: error column not decreasing" + at);
                }
                previous = e;
            }
        }
        ExperimentRecord summary{"reinhardt", {}};
        summary.set("kind", std::string("summary")).set("domain", domain.name()).set("f", f.id);
        summary.set("N", (long long)-1).set("a1_ratio", max_ratio);
        if (ratio.size() >= 3) {
            const double base = plateau_base(ratio, 2);
            const double top = std::max(plateau_base(ratio, 0), plateau_base(ratio, 1));
            summary.set("plateau_growth", top / base - 1.0);
            if (!(top <= 1.1 * base)) {
                out.contract_ok = false;
                out.violations.push_back("reinhardt: A1 ratio grows by more than 10% over the last two doublings for " +
                                         f.id);
            }
        }
        if (f.degree() < 0 && !ratio.empty()) {
            const double final_error = rows[fi * n_set.size() + n_set.size() - 1].number("a1_error");
            summary.set("a1_error", final_error);
            if (!(final_error < 1e-2)) {
                out.contract_ok = false;
                out.violations.push_back("reinhardt: final error not below 1e-2 for " + f.id);
            }
        }
        summary.set("converged", out.quadrature_ok);
        out.table.rows.push_back(summary);
    }
    return out;
}

Outcome run_density(const ReinhardtDomain& domain, const std::string& f_id, const std::vector<double>& eps_ladder,
                    const FunctionRegistry& registry, const Settings& s)
{
    const int n = domain.dim();
    DensityOptions dopt;
    std::vector<DensityRow> rows;
    NormOptions recorded;
    if (n == 1) {
        recorded = s.disc();
        rows = density_experiment(registry.get(f_id).function, eps_ladder, 1.0, dopt);
    } else {
        dopt.norm = s.several(n);
        recorded = dopt.norm;
        rows = density_experiment(registry.get_product(f_id).function(), domain, eps_ladder, 1.0, dopt);
    }
    Outcome out;
    out.table.experiment = "density";
    out.table.x = "eps";
    out.table.y = {"error"};
    out.table.group = "f";
    double previous = std::numeric_limits<double>::infinity();
    for (const DensityRow& d : rows) {
        ExperimentRecord r{"density", {}};
        r.set("kind", std::string("cell")).set("domain", domain.name()).set("f", f_id).set("eps", d.eps);
        r.set("rho", d.rho).set("rho_index", (long long)d.rho_index).set("M", (long long)d.M);
        r.set("dilation_error", d.dilation_error).set("truncation_bound", d.truncation_bound);
        r.set("error", d.error).set("met", d.met).set("exhausted", d.exhausted).set("converged", d.converged);
        add_settings(r, recorded);
        out.table.rows.push_back(r);
        const std::string at = " at eps=" + fmt(d.eps);
        if (!d.converged) {
            out.quadrature_ok = false;
            out.violations.push_back("density: quadrature not converged" + at);
        }
        if (!d.met || d.exhausted) {
            out.contract_ok = false;
            out.violations.push_back("density: target missed" + at);
        }
        if (!(d.error < previous || (d.error <= 1e-12 && previous <= 1e-12))) {
            out.contract_ok = false;
            out.violations.push_back("density: error column not decreasing" + at);
        }
        previous = d.error;
    }
    return out;
}

bool cross_consistent(const Outcome& uniform, const Outcome& blowup, std::string* why)
{
    double bound = -1.0;
    for (const ExperimentRecord& r : uniform.table.rows)
        if (r.get("kind") == Value(std::string("summary")))
            bound = r.number("a1_ratio");
    for (const ExperimentRecord& r : blowup.table.rows) {
        if (r.get("kind") != Value(std::string("cell")))
            continue;
        if (!(r.number("a1_ratio") <= bound + 1e-6)) {
            if (why)
                *why = "blowup A1 ratio " + fmt(r.number("a1_ratio")) + " above uniform-bound maximum " + fmt(bound);
            return false;
        }
    }
    return true;
}

} // namespace hblab
