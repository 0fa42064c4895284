#ifndef HBLAB_DOMAIN_HPP
#define HBLAB_DOMAIN_HPP

#include <string>
#include <vector>

#include "hblab/core.hpp"

namespace hblab {

enum class DomainKind { Polydisc, Ball, PowerEgg, Custom };

/// A bounded complete Reinhardt domain {z : gauge(|z_1|, ..., |z_n|) < 1}
/// described by a gauge that is nondecreasing in every coordinate.
class ReinhardtDomain {
public:
    using Gauge = std::function<double(const VectorXd&)>;

    static ReinhardtDomain polydisc(int n);
    static ReinhardtDomain ball(int n);
    /// sum_j r_j^{p_j}.
    static ReinhardtDomain power_egg(const VectorXd& powers);
    static ReinhardtDomain custom(int n, Gauge gauge, std::string name = "custom");

    int dim() const { return dim_; }
    DomainKind kind() const { return kind_; }
    const VectorXd& powers() const { return powers_; }
    const std::string& name() const { return name_; }
    double gauge(const VectorXd& r) const;

    /// {"kind": ..., "dim": n, "powers": [...]}; custom domains print their name.
    std::string to_json() const;

private:
    int dim_ = 1;
    DomainKind kind_ = DomainKind::Polydisc;
    VectorXd powers_;
    Gauge gauge_;
    std::string name_;
};

ReinhardtDomain domain_from_json(const std::string& text);

bool contains(const ReinhardtDomain& domain, const VectorXcd& z);

/// t* u with gauge(t* u) = 1. Closed forms for the polydisc and the ball,
/// bisection to 1e-14 otherwise.
VectorXd frontier_max_radius(const ReinhardtDomain& domain, const VectorXd& u);

/// `count` radius profiles on the simplex sum_j u_j = 1: the barycenter, then
/// the vertices, then a low-discrepancy sequence.
std::vector<VectorXd> frontier_directions(int n, int count);

struct FrontierSample {
    VectorXd direction;
    VectorXd r_max;
    std::vector<double> scales; // t_k = 1 - 2^-k
    std::vector<VectorXd> radii;
};

FrontierSample frontier_sample(const ReinhardtDomain& domain, const VectorXd& u, int depth);

} // namespace hblab

#endif
