#ifndef HBLAB_EXPERIMENTS_HPP
#define HBLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hblab/domain.hpp"
#include "hblab/norms.hpp"
#include "hblab/reinhardt.hpp"
#include "hblab/series.hpp"

namespace hblab {

// ---------------------------------------------------------------------------
// Registry

/// A test function of one variable with coefficient access, pointwise
/// evaluation, and closed-form partial sums and remainders where known.
struct RegistryEntry {
    std::string id;
    PowerSeries series;
    Holomorphic function;
    int degree = -1;          // polynomial degree, -1 otherwise
    double safe_radius = 1.0; // evaluation and coefficients agree for |z| <= safe_radius
    std::function<Holomorphic(int)> partial;   // S_N f
    std::function<Holomorphic(int)> remainder; // f - S_N f
};

/// prod_j f_j(z_j) built from one-variable entries.
struct ProductEntry {
    std::string id;
    std::vector<RegistryEntry> factors;

    int dim() const { return int(factors.size()); }
    int degree() const; // max over factors, -1 if any factor is not a polynomial
    HolomorphicN function() const;
    HolomorphicN partial(int N) const;   // square partial sum
    HolomorphicN remainder(int N) const; // f - S_N f
};

class FunctionRegistry {
public:
    /// Constants, monomials, three seeded random polynomials, f_a for
    /// a in {0, 0.5, 0.9, 0.99, 0.999}, a geometric series, and products in two variables.
    static FunctionRegistry standard(std::uint64_t seed = 1);

    const std::vector<RegistryEntry>& entries() const { return entries_; }
    const std::vector<ProductEntry>& products() const { return products_; }
    const RegistryEntry& get(const std::string& id) const;
    const ProductEntry& get_product(const std::string& id) const;
    bool has(const std::string& id) const;
    bool has_product(const std::string& id) const;

    void add(RegistryEntry e);
    void add(ProductEntry e);

private:
    std::vector<RegistryEntry> entries_;
    std::vector<ProductEntry> products_;
};

RegistryEntry constant_entry(Complex c);
RegistryEntry monomial_entry(int k);
RegistryEntry polynomial_entry(std::string id, VectorXcd coeffs);
/// Degree `degree`, coefficients uniform in the unit square from a splitmix64 stream.
RegistryEntry random_polynomial_entry(std::string id, int degree, std::uint64_t seed);
RegistryEntry fa_entry(double a);
/// 1 / (1 - q z).
RegistryEntry geometric_entry(double q);

// ---------------------------------------------------------------------------
// Records and tables

using Value = std::variant<std::string, double, long long, bool>;

struct ExperimentRecord {
    std::string experiment;
    std::vector<std::pair<std::string, Value>> fields;

    ExperimentRecord& set(const std::string& key, Value v);
    const Value& get(const std::string& key) const;
    double number(const std::string& key) const;
};

struct Table {
    std::string experiment;
    std::vector<ExperimentRecord> rows;
    // Plot layout: one curve per value of `group` (empty: a single curve) and y column.
    std::string x;
    std::vector<std::string> y;
    std::string group;

    /// Union of the row keys in first-seen order.
    std::vector<std::string> columns() const;
};

enum class Format { Csv, Json };

/// Doubles print with 17 significant digits; wall-time columns are dropped
/// unless `timing` is set.
std::string to_csv(const Table& t, bool timing = false);
std::string to_json_lines(const Table& t, bool timing = false);
std::string serialize(const Table& t, Format f, bool timing = false);

/// Two-column "x y" text per curve.
std::map<std::string, std::string> plot_data(const Table& t);

// ---------------------------------------------------------------------------
// Experiments

/// Unset tolerances fall back to the NormOptions presets (1e-8 / 1e-6 on the
/// disc, 1e-6 / 1e-4 in several variables).
struct Settings {
    std::optional<double> tol;
    std::optional<double> volume_tol;
    Index max_nodes = Index(1) << 22;
    int directions = 64;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
    bool timing = false;

    NormOptions disc() const;
    NormOptions several(int n) const;
};

/// Exit status: 0 all contracts met, 1 a contract failed, 2 quadrature did not converge.
struct Outcome {
    Table table;
    bool contract_ok = true;
    bool quadrature_ok = true;
    std::vector<std::string> violations;

    int exit_code() const { return !quadrature_ok ? 2 : (!contract_ok ? 1 : 0); }
};

std::vector<int> default_disc_n_set();   // 8, 16, ..., 1024
std::vector<int> default_several_n_set(); // 1, 2, ..., 64
std::vector<double> default_a_set();      // 0, 0.5, 0.9, 0.99, 0.999

/// ||S_N f||_{A^1} / ||f||_{H^1} and ||S_N f||_{H^1} / ||f||_{H^1} over the
/// grid, with a summary row holding the maxima over converged rows.
Outcome run_uniform_bound(const std::vector<RegistryEntry>& family, const std::vector<int>& n_set,
                          const Settings& s);

/// ||S_N f - f||_{A^1} per N; the column must decrease strictly from N >= 16
/// on and end below `target`; polynomials must vanish once N >= degree.
Outcome run_a1_convergence(const RegistryEntry& f, const std::vector<int>& n_set, double target,
                           const Settings& s);

/// a = N / (N + 1): Hardy and Bergman norms of S_N f_a, ||f_a||_{H^1},
/// L(a, N), ||T1||_{H^1} and ||T2||_{H^1} / L.
Outcome run_blowup(const std::vector<int>& n_set, const Settings& s);

/// Ratio tables for I_c with band summaries.
Outcome run_ic_asymptotics(const std::vector<double>& c_set, const std::vector<double>& moduli,
                           const Settings& s);

/// Square-partial-sum analogue of run_uniform_bound and run_a1_convergence.
Outcome run_reinhardt(const ReinhardtDomain& domain, const std::vector<ProductEntry>& family,
                      const std::vector<int>& n_set, const Settings& s);

Outcome run_density(const ReinhardtDomain& domain, const std::string& f_id, const std::vector<double>& eps_ladder,
                    const FunctionRegistry& registry, const Settings& s);

/// Blow-up A^1 ratios may exceed the uniform-bound maximum by at most 1e-6.
bool cross_consistent(const Outcome& uniform, const Outcome& blowup, std::string* why = nullptr);

/// Runs f(i) for i in [0, count) on a pool; results stay in index order.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

} // namespace hblab

#endif
