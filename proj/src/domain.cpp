#include "hblab/domain.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace hblab {

ReinhardtDomain ReinhardtDomain::polydisc(int n)
{
    if (n < 1)
        throw ParameterError("polydisc: dimension must be at least 1");
    ReinhardtDomain d;
    d.dim_ = n;
    d.kind_ = DomainKind::Polydisc;
    d.gauge_ = [](const VectorXd& r) { return r.maxCoeff(); };
    d.name_ = "polydisc";
    return d;
}

ReinhardtDomain ReinhardtDomain::ball(int n)
{
    if (n < 1)
        throw ParameterError("ball: dimension must be at least 1");
    ReinhardtDomain d;
    d.dim_ = n;
    d.kind_ = DomainKind::Ball;
    d.powers_ = VectorXd::Constant(n, 2.0);
    d.gauge_ = [](const VectorXd& r) { return r.squaredNorm(); };
    d.name_ = "ball";
    return d;
}

ReinhardtDomain ReinhardtDomain::power_egg(const VectorXd& powers)
{
    if (powers.size() < 1 || !(powers.array() > 0.0).all())
        throw ParameterError("power_egg: powers must be positive");
    ReinhardtDomain d;
    d.dim_ = int(powers.size());
    d.kind_ = DomainKind::PowerEgg;
    d.powers_ = powers;
    d.gauge_ = [powers](const VectorXd& r) { return r.array().pow(powers.array()).sum(); };
    d.name_ = "power-egg";
    return d;
}

ReinhardtDomain ReinhardtDomain::custom(int n, Gauge gauge, std::string name)
{
    if (n < 1 || !gauge)
        throw ParameterError("custom domain: need a dimension and a gauge");
    ReinhardtDomain d;
    d.dim_ = n;
    d.kind_ = DomainKind::Custom;
    d.gauge_ = std::move(gauge);
    d.name_ = std::move(name);
    return d;
}

double ReinhardtDomain::gauge(const VectorXd& r) const
{
    if (r.size() != dim_)
        throw ParameterError("gauge: radius vector has the wrong dimension");
    return gauge_(r);
}

std::string ReinhardtDomain::to_json() const
{
    std::string out = "{\"kind\": \"" + name_ + "\", \"dim\": " + std::to_string(dim_);
    if (kind_ == DomainKind::PowerEgg) {
        out += ", \"powers\": [";
        char buf[32];
        for (Index j = 0; j < powers_.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", powers_(j));
            out += (j ? ", " : "") + std::string(buf);
        }
        out += "]";
    }
    return out + "}";
}

ReinhardtDomain domain_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("domain JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind"))
        throw ParameterError("domain JSON: missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "power-egg") {
        if (!j.contains("powers") || !j["powers"].is_array())
            throw ParameterError("domain JSON: power-egg needs \"powers\"");
        const auto p = j["powers"].get<std::vector<double>>();
        if (j.contains("dim") && j["dim"].get<int>() != int(p.size()))
            throw ParameterError("domain JSON: \"dim\" disagrees with \"powers\"");
        return ReinhardtDomain::power_egg(Eigen::Map<const VectorXd>(p.data(), Index(p.size())));
    }
    if (!j.contains("dim"))
        throw ParameterError("domain JSON: missing \"dim\"");
    const int dim = j["dim"].get<int>();
    if (kind == "polydisc")
        return ReinhardtDomain::polydisc(dim);
    if (kind == "ball")
        return ReinhardtDomain::ball(dim);
    throw ParameterError("domain JSON: unknown kind \"" + kind + "\"");
}

bool contains(const ReinhardtDomain& domain, const VectorXcd& z)
{
    return domain.gauge(z.cwiseAbs()) < 1.0;
}

VectorXd frontier_max_radius(const ReinhardtDomain& domain, const VectorXd& u)
{
    if (u.size() != domain.dim())
        throw ParameterError("frontier_max_radius: direction has the wrong dimension");
    if ((u.array() < 0.0).any() || !(u.maxCoeff() > 0.0))
        throw ParameterError("frontier_max_radius: direction must be nonnegative and nonzero");
    switch (domain.kind()) {
    case DomainKind::Polydisc:
        return u / u.maxCoeff();
    case DomainKind::Ball:
        return u / u.norm();
    default:
        break;
    }
    double hi = 1.0 / u.maxCoeff();
    int expansions = 0;
    while (domain.gauge(hi * u) < 1.0) {
        hi *= 2.0;
        if (++expansions > 200)
            throw DomainModelError("frontier_max_radius: gauge stays below 1 along the ray");
    }
    double lo = 0.0;
    while (hi - lo > 1e-14 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (domain.gauge(mid * u) < 1.0 ? lo : hi) = mid;
    }
    return lo * u;
}

namespace {

double radical_inverse(std::uint64_t i, unsigned base)
{
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += f * double(i % base);
        i /= base;
        f *= inv;
    }
    return x;
}

constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

std::vector<VectorXd> frontier_directions(int n, int count)
{
    if (count < 1)
        throw ParameterError("frontier_directions: need at least one direction");
    if (n < 1)
        throw ParameterError("frontier_directions: dimension must be at least 1");
    std::vector<VectorXd> dirs;
    dirs.push_back(VectorXd::Constant(n, 1.0 / n));
    if (n == 1)
        return dirs;
    for (int j = 0; j < n && int(dirs.size()) < count; ++j)
        dirs.push_back(VectorXd::Unit(n, j));
    for (std::uint64_t i = 1; int(dirs.size()) < count; ++i) {
        VectorXd u(n);
        if (n == 2) {
            const double v = radical_inverse(i, 2);
            u << v, 1.0 - v;
        } else if (n == 3) {
            const double s = std::sqrt(radical_inverse(i, 2)), b = radical_inverse(i, 3);
            u << 1.0 - s, s * (1.0 - b), s * b;
        } else {
            if (n > int(std::size(primes)))
                throw ParameterError("frontier_directions: dimension too large");
            for (int j = 0; j < n; ++j)
                u(j) = -std::log(radical_inverse(i, primes[j]) + 1e-300);
            u /= u.sum();
        }
        dirs.push_back(u);
    }
    return dirs;
}

FrontierSample frontier_sample(const ReinhardtDomain& domain, const VectorXd& u, int depth)
{
    if (depth < 1)
        throw ParameterError("frontier_sample: depth must be positive");
    FrontierSample s;
    s.direction = u;
    s.r_max = frontier_max_radius(domain, u);
    for (int k = 1; k <= depth; ++k) {
        const double t = 1.0 - std::ldexp(1.0, -k);
        s.scales.push_back(t);
        s.radii.push_back(t * s.r_max);
    }
    return s;
}

} // namespace hblab
