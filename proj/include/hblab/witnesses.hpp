#ifndef HBLAB_WITNESSES_HPP
#define HBLAB_WITNESSES_HPP

#include <vector>

#include "hblab/norms.hpp"
#include "hblab/quadrature.hpp"
#include "hblab/series.hpp"

namespace hblab {

/// f_a(z) = (1 - |a|^2) / (1 - conj(a) z)^2.
Complex eval_fa(Complex a, Complex z);

/// Coefficients (1 - |a|^2)(k + 1) conj(a)^k with the closed form attached.
PowerSeries fa_series(Complex a);
Holomorphic fa_function(Complex a);

/// S_N f_a = T1 + T2 with w = conj(a) z:
/// T1 = (1 - |a|^2)(1 - w^{N+2}) / (1 - w)^2,
/// T2 = -(1 - |a|^2)(N + 2) w^{N+1} / (1 - w).
struct T1T2Split {
    Complex a;
    int N = 0;
    Holomorphic t1;
    Holomorphic t2;
};

T1T2Split t1t2_split(Complex a, int N);

/// Closed-form S_N f_a.
Holomorphic fa_partial_sum(Complex a, int N);

/// f_a - S_N f_a = (1 - |a|^2) w^{N+1} ((N + 2)/(1 - w) + w/(1 - w)^2).
Holomorphic fa_remainder(Complex a, int N);

// ---------------------------------------------------------------------------

struct IcQuery {
    double c = 0.0;
    Complex z;
};

/// I_c(z) = integral over [0, 2pi] of |1 - z e^{-i theta}|^{-(1 + c)}.
RefinementReport<double> eval_ic(const IcQuery& q, double tol = 1e-11, Index max_nodes = Index(1) << 24);

struct IcRatio {
    double modulus = 0.0;
    double value = 0.0;
    double comparison = 0.0; // (1-|z|^2)^-c, log(1/(1-|z|^2)) or 1
    double ratio = 0.0;
    bool converged = false;
};

std::vector<IcRatio> ic_asymptotic_ratio(double c, const std::vector<double>& ladder, double tol = 1e-11,
                                         Index max_nodes = Index(1) << 24);

/// L(a, N) = (1 - a^2) a^{N+1} (N + 2) log(1 / (1 - a)).
double blowup_lower_bound(double a, int N);

struct T2Ratio {
    double t2_norm = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool converged = false;
};

/// ||T2||_{H^1} = (1 - a^2)(N + 2) a^{N+1} I_0(a) / (2 pi), against L(a, N).
T2Ratio t2_hardy_vs_bound(double a, int N, double tol = 1e-11, Index max_nodes = Index(1) << 24);

} // namespace hblab

#endif
