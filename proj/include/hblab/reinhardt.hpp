#ifndef HBLAB_REINHARDT_HPP
#define HBLAB_REINHARDT_HPP

#include <vector>

#include "hblab/domain.hpp"
#include "hblab/norms.hpp"
#include "hblab/series.hpp"

namespace hblab {

/// b_alpha = a_alpha rho^{|alpha|_1} for |alpha|_inf <= M; M < 0 keeps every term.
MultiIndexSeries dilate_truncate(const MultiIndexSeries& f, double rho, int M);

/// Same polynomial with the coefficients of f(rho .) read off by a torus DFT on
/// the hull torus |z_j| = hull_j (hull = (1, ..., 1) unless given), with
/// `nodes` points per coordinate (0 picks a power of two >= 4 (M + 1)).
/// f must be evaluable on rho * hull.
MultiIndexSeries dilate_truncate(const HolomorphicN& f, double rho, int M, Index nodes = 0,
                                 const VectorXd& hull = {});
MultiIndexSeries dilate_truncate(const Holomorphic& f, double rho, int M, Index nodes = 0);

/// Coordinatewise sup of the radii in the domain.
VectorXd polydisc_hull(const ReinhardtDomain& domain);

struct DensityOptions {
    int rho_depth = 24;      // rho grid 1 - 2^-k, k = 1..rho_depth
    int max_degree = 4096;   // cap on M for n = 1
    int max_degree_n = 256;  // cap on M for n >= 2
    int probe_level = 12;    // probe tori at scale 1 - 2^-probe_level
    NormOptions norm = NormOptions::several_variables(); // n >= 2 only
};

struct DensityRow {
    double eps = 0.0;
    double rho = 1.0;
    int rho_index = 0;          // k in rho = 1 - 2^-k; 0 when rho = 1
    int M = 0;
    double dilation_error = 0;  // max over probe tori of ||f - f_rho||
    double truncation_bound = 0;
    double error = 0;           // ||f - Q||_{H^p}
    bool converged = false;
    bool met = false;           // error <= eps
    bool exhausted = false;
};

/// For each eps: the first rho on the grid whose probe dilation error is at most
/// eps / 2 (rho = 1 first for polynomials), then the first M in 1, 2, 4, ...
/// whose coefficient tail on the hull torus is at most eps / (2 (2 pi)^{n/p}),
/// and the Hardy norm of f - Q.
std::vector<DensityRow> density_experiment(const HolomorphicN& f, const ReinhardtDomain& domain,
                                           const std::vector<double>& eps_ladder, double p,
                                           const DensityOptions& opt = {});

std::vector<DensityRow> density_experiment(const Holomorphic& f, const std::vector<double>& eps_ladder,
                                           double p, const DensityOptions& opt = {});

} // namespace hblab

#endif
