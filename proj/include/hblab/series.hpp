#ifndef HBLAB_SERIES_HPP
#define HBLAB_SERIES_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hblab/core.hpp"

namespace hblab {

/// A power series sum_k a_k z^k on the unit disc.
///
/// Coefficients come either from a finite vector (a polynomial) or from a lazy
/// generator whose values are memoized up to the largest index requested.
/// Copies share the memo; the series itself is immutable.
class PowerSeries {
public:
    /// Returns the k-th coefficient, or nullopt when it cannot be produced.
    using Generator = std::function<std::optional<Complex>(Index)>;

    PowerSeries();

    static PowerSeries polynomial(VectorXcd coeffs);

    /// `spike` is the modulus of the nearest pole-like parameter and only
    /// steers quadrature node counts downstream.
    static PowerSeries generated(Generator gen, std::function<Complex(Complex)> closed_form = {},
                                 double spike = 0.0);

    Complex coefficient(Index k) const;
    /// First `count` coefficients.
    VectorXcd head(Index count) const;

    /// Largest index with a nonzero coefficient for polynomials (-1 for the
    /// zero polynomial); nullopt for series not known to terminate.
    std::optional<int> degree() const { return degree_; }
    bool has_closed_form() const { return bool(closed_form_); }
    double spike() const { return spike_; }

    /// Closed form when present, Horner for polynomials.
    Complex evaluate(Complex z) const;
    /// Horner over the first `terms` coefficients.
    Complex sum(Complex z, Index terms) const;

    Holomorphic function() const;

private:
    struct Memo {
        std::mutex mutex;
        std::vector<Complex> values;
    };

    Generator gen_;
    std::function<Complex(Complex)> closed_form_;
    std::shared_ptr<Memo> memo_;
    std::optional<int> degree_;
    double spike_ = 0.0;
};

/// alpha f + beta g, coefficientwise and lazily.
PowerSeries linear_combination(Complex alpha, const PowerSeries& f, Complex beta, const PowerSeries& g);

/// S_N f: the polynomial with coefficients a_0..a_N.
PowerSeries partial_sum(const PowerSeries& f, int N);

/// Horner evaluation of a coefficient vector.
Complex horner(const VectorXcd& coeffs, Complex z);

/// Evaluator for the polynomial with the given coefficients, with a circle
/// sampler that folds coefficients modulo the node count and synthesizes.
Holomorphic polynomial_function(const VectorXcd& coeffs);

// ---------------------------------------------------------------------------

using MultiIndex = std::vector<int>;

/// Finitely supported series sum_alpha a_alpha z^alpha in n variables.
class MultiIndexSeries {
public:
    explicit MultiIndexSeries(int dim);

    int dim() const { return dim_; }
    /// Zero coefficients are not stored.
    void set(const MultiIndex& alpha, Complex c);
    Complex coefficient(const MultiIndex& alpha) const;
    const std::map<MultiIndex, Complex>& terms() const { return terms_; }
    /// max_j alpha_j over stored coefficients; -1 when empty.
    int inf_degree() const;

    Complex evaluate(const VectorXcd& z) const;
    HolomorphicN function() const;

    /// The n = 1 view of a polynomial.
    static MultiIndexSeries from_polynomial(const PowerSeries& f);
    /// Coefficients of prod_j f_j(z_j) with every alpha_j <= max_degree.
    static MultiIndexSeries tensor_product(const std::vector<PowerSeries>& factors, int max_degree);

    friend bool operator==(const MultiIndexSeries& a, const MultiIndexSeries& b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

private:
    int dim_;
    std::map<MultiIndex, Complex> terms_;
};

/// Square partial sum: keeps exactly the terms with |alpha|_inf <= N.
MultiIndexSeries square_partial_sum(const MultiIndexSeries& f, int N);

/// {"dim": n, "coeffs": [[alpha..., re, im], ...]} in lexicographic order,
/// numbers printed with 17 significant digits.
std::string to_json(const MultiIndexSeries& f);
MultiIndexSeries multi_index_series_from_json(const std::string& text);

// ---------------------------------------------------------------------------

enum class PartialSumMethod { Truncation, ContourKernel };

struct PartialSumReport {
    int N = 0;
    PowerSeries result;
    PartialSumMethod method = PartialSumMethod::Truncation;
    double contour_radius = 0.0; // used by ContourKernel only
};

PartialSumReport partial_sum_report(const PowerSeries& f, int N);
/// Partial sum whose coefficients come from Cauchy integrals on |xi| = R.
PartialSumReport partial_sum_report(const Holomorphic& f, int N, double R);

/// Trapezoid Cauchy integral (1/M) sum_k f(R w^k) w^{-jk} / R^j with M nodes.
Complex extract_coefficient(const Holomorphic& f, int j, double R, Index M);
/// Adaptive version: M = max(256, 4(j+1)) doubled until two successive values
/// agree to 1e-12 relative, capped at 2^20.
Complex extract_coefficient(const Holomorphic& f, int j, double R = 0.75);

/// (S_N f)(z) as the contour integral of f against (1-(z/xi)^{N+1})/(xi-z)
/// on |xi| = R, by a trapezoid rule doubled until it settles.
Complex partial_sum_kernel(const Holomorphic& f, int N, Complex z, double R);
/// Same with R = (1 + |z|)/2.
Complex partial_sum_kernel(const Holomorphic& f, int N, Complex z);

/// |sum_{j<=N} z^j / xi^{j+1} - (1-(z/xi)^{N+1})/(xi-z)|.
double kernel_identity_check(Complex z, Complex xi, int N);

} // namespace hblab

#endif
