#ifndef HBLAB_CORE_HPP
#define HBLAB_CORE_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hblab {

using Complex = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::Index;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coefficient generator could not produce the requested index.
class UnavailableCoefficient : public Error {
public:
    using Error::Error;
};

/// A trapezoid rule with too few nodes to separate the requested frequency.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// A point or radius lies outside the region where an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class SingularKernel : public Error {
public:
    using Error::Error;
};

/// The gauge of a domain model does not bound the domain along a ray.
class DomainModelError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Summation

namespace detail {

template <typename T>
T pairwise_sum_range(const T* x, Index n)
{
    if (n <= 32) {
        T s(0);
        for (Index i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const Index half = n / 2;
    return pairwise_sum_range(x, half) + pairwise_sum_range(x + half, n - half);
}

} // namespace detail

/// Pairwise (cascade) summation of a one-dimensional Eigen expression.
/// The result depends only on the values and their order, never on threading.
template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& x)
{
    using Scalar = typename Derived::Scalar;
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> v = x.derived();
    return detail::pairwise_sum_range(v.data(), v.size());
}

template <typename T>
T pairwise_sum(const std::vector<T>& x)
{
    return detail::pairwise_sum_range(x.data(), Index(x.size()));
}

// ---------------------------------------------------------------------------
// Roots of unity and discrete Fourier helpers

/// omega_k = exp(2 pi i k / M) for k = 0..M-1.
ArrayXcd unit_roots(Index M);

/// Values sum_m c[m] exp(+2 pi i m.k / M) on a tensor grid. `c` and the result
/// are flattened column-major with coordinate 0 fastest; extents are `counts`.
ArrayXcd synthesize(const ArrayXcd& c, const std::vector<Index>& counts);

/// Inverse of synthesize: c[m] = (1/prod M) sum_k v[k] exp(-2 pi i m.k / M).
ArrayXcd analyze(const ArrayXcd& v, const std::vector<Index>& counts);

/// Smallest multiple of `granularity` that is >= n (n >= 1).
Index round_up(Index n, Index granularity);

// ---------------------------------------------------------------------------
// Holomorphic functions as evaluators

/// A holomorphic function of one variable given by a pointwise evaluator and an
/// optional fast sampler on circles |z| = r at the nodes r exp(2 pi i k / M).
///
/// `spike` is the modulus of the nearest pole-like parameter (|a| for f_a),
/// zero when the function has no boundary concentration; `degree` is the
/// polynomial degree when known and -1 otherwise. Both only steer node counts.
struct Holomorphic {
    std::function<Complex(Complex)> eval;
    std::function<ArrayXcd(double, Index)> circle;
    double spike = 0.0;
    int degree = -1;

    Complex operator()(Complex z) const { return eval(z); }
    ArrayXcd on_circle(double r, Index M) const;
};

Holomorphic operator*(Complex c, const Holomorphic& f);
Holomorphic operator+(const Holomorphic& f, const Holomorphic& g);
Holomorphic operator-(const Holomorphic& f, const Holomorphic& g);

/// z -> f(rho z).
Holomorphic dilate(const Holomorphic& f, double rho);

/// Samples on a torus are flattened column-major with coordinate 0 fastest;
/// coordinate j uses the nodes radii[j] exp(2 pi i k / counts[j]).
struct HolomorphicN {
    int dim = 1;
    std::function<Complex(const VectorXcd&)> eval;
    std::function<ArrayXcd(const VectorXd&, const std::vector<Index>&)> torus;
    VectorXd spike;  // per coordinate
    int degree = -1; // bound on max_j alpha_j when polynomial

    Complex operator()(const VectorXcd& z) const { return eval(z); }
    ArrayXcd on_torus(const VectorXd& radii, const std::vector<Index>& counts) const;
};

/// (z_1..z_n) -> prod_j f_j(z_j).
HolomorphicN tensor_product(const std::vector<Holomorphic>& factors);

/// sum_t prod_j f_{t,j}(z_j); every term must have the same number of factors.
HolomorphicN separable_sum(const std::vector<std::vector<Holomorphic>>& terms);

HolomorphicN operator*(Complex c, const HolomorphicN& f);
HolomorphicN operator+(const HolomorphicN& f, const HolomorphicN& g);
HolomorphicN operator-(const HolomorphicN& f, const HolomorphicN& g);
HolomorphicN dilate(const HolomorphicN& f, double rho);

} // namespace hblab

#endif
