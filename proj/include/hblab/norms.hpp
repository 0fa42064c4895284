#ifndef HBLAB_NORMS_HPP
#define HBLAB_NORMS_HPP

#include <string>
#include <vector>

#include "hblab/core.hpp"
#include "hblab/domain.hpp"
#include "hblab/quadrature.hpp"

namespace hblab {

enum class Space { Hardy, Bergman };

std::string to_string(Space s);

/// A norm value with its ladder. Hardy values are the maximum of the shell
/// integrals over the ladder raised to 1/p, a lower bound for the sup. Bergman
/// values are the full volume integral raised to 1/p; their ladder holds the
/// exhaustion by dilated subdomains.
struct NormEstimate {
    Space space = Space::Hardy;
    double p = 1.0;
    double value = 0.0;
    std::vector<double> ladder;        // radii or frontier scales
    std::vector<double> ladder_values; // shell (or exhaustion) integrals, not raised to 1/p
    double tail_increment = 0.0;       // last ladder increment relative to the maximum
    bool converged = false;
    bool quasi = false; // p < 1
    int directions = 0; // frontier directions, several variables only
    Index max_nodes_used = 0;
};

struct NormOptions {
    double tol = 1e-8;        // circle and torus shells
    double volume_tol = 1e-6; // Bergman volume integrals
    Index max_nodes = Index(1) << 22;
    int ladder_depth = 40;
    AngularPolicy policy;
    int radial_panels = 20;
    int radial_order = 64;
    int directions = 64;
    double abs_floor = 0.0;   // absolute scale for integrals of |f|^p near zero

    /// Tolerances 1e-6 (shells) and 1e-4 (volumes), ladder depth 30, GL order 8 on 10 panels, and the
    /// several-variable angular policy. From n = 3 on: 6 panels and an angular floor of 16.
    static NormOptions several_variables(int n = 2);
};

/// Circle means on r_k = 1 - 2^-k, k = 1..ladder_depth; the ladder stops early
/// once an increment falls to tol * value.
NormEstimate hardy_norm_disc(const Holomorphic& f, double p, const NormOptions& opt = {});

/// Polar rule on dyadic radial panels; every refinement level doubles the
/// angular counts and adds a panel at r = 1.
NormEstimate bergman_norm_disc(const Holomorphic& f, double p, const NormOptions& opt = {});

/// Definition without the (2 pi)^-n factor: sup over sampled frontier
/// directions u and scales t of the torus integral at t r_max(u).
NormEstimate hardy_norm_reinhardt(const HolomorphicN& f, double p, const ReinhardtDomain& domain,
                                  const NormOptions& opt = NormOptions::several_variables());

NormEstimate bergman_norm_reinhardt(const HolomorphicN& f, double p, const ReinhardtDomain& domain,
                                    const NormOptions& opt = NormOptions::several_variables());

/// Integral of |f|^p over radii . T^n without normalization.
RefinementReport<double> torus_integral(const HolomorphicN& f, double p, const VectorXd& radii,
                                        const NormOptions& opt = NormOptions::several_variables());

/// torus_integral(r) <= torus_integral(R) + tol for r <= R componentwise.
bool monotonicity_check(const HolomorphicN& f, double p, const VectorXd& r, const VectorXd& R, double tol);
bool monotonicity_check(const Holomorphic& f, double p, double r, double R, double tol);

/// "space,p,value,ladder_len,tail_increment,converged"
std::string csv_header();
std::string csv_row(const NormEstimate& e);

} // namespace hblab

#endif
