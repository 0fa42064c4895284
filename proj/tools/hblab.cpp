#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hblab/experiments.hpp"

using namespace hblab;

namespace {

struct Flags {
    double tol = 0.0;
    double volume_tol = 0.0;
    Index max_nodes = Index(1) << 22;
    std::vector<int> n_set;
    std::vector<double> a_set;
    std::vector<double> c_set{-0.5, 0.0, 0.5, 1.0};
    std::vector<double> z_set{0.9, 0.99, 0.999, 0.9999};
    std::vector<double> eps_set{0.5, 0.1, 0.02};
    std::vector<std::string> functions;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string config;
    std::string plot_dir;
    bool timing = false;
    int threads = 0;
    int dirs = 64;
    double target = 1e-3;
};

Settings settings(const Flags& f)
{
    Settings s;
    if (f.tol > 0.0)
        s.tol = f.tol;
    if (f.volume_tol > 0.0)
        s.volume_tol = f.volume_tol;
    s.max_nodes = f.max_nodes;
    s.seed = f.seed;
    s.threads = f.threads;
    s.timing = f.timing;
    s.directions = f.dirs;
    return s;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReinhardtDomain domain(const Flags& f, int default_dim)
{
    if (f.config.empty())
        return ReinhardtDomain::polydisc(default_dim);
    return domain_from_json(read_file(f.config));
}

std::vector<RegistryEntry> uniform_family(const FunctionRegistry& reg, const Flags& f)
{
    std::vector<RegistryEntry> family;
    if (!f.functions.empty()) {
        for (const std::string& id : f.functions)
            family.push_back(reg.get(id));
        return family;
    }
    for (const RegistryEntry& e : reg.entries())
        if (e.id.rfind("fa-", 0) != 0 || f.a_set.empty())
            family.push_back(e);
    for (double a : f.a_set)
        family.push_back(fa_entry(a));
    return family;
}

class Sink {
public:
    explicit Sink(const Flags& f) : flags_(f) {}

    void write(const Outcome& o, bool several)
    {
        const Format fmt = flags_.format == "json" ? Format::Json : Format::Csv;
        const std::string text = serialize(o.table, fmt, flags_.timing);
        const std::string ext = fmt == Format::Json ? ".jsonl" : ".csv";
        if (flags_.out.empty()) {
            if (several && fmt == Format::Csv && written_ > 0)
                std::cout << '\n';
            std::cout << text;
        } else {
            const std::string path = several ? flags_.out + "." + o.table.experiment + ext : flags_.out;
            std::ofstream file(path, std::ios::binary);
            file << text;
        }
        if (!flags_.plot_dir.empty()) {
            std::filesystem::create_directories(flags_.plot_dir);
            for (const auto& [name, data] : plot_data(o.table)) {
                std::string safe = name;
                for (char& ch : safe)
                    if (ch == '/' || ch == '^')
                        ch = '_';
                std::ofstream file(std::filesystem::path(flags_.plot_dir) / (safe + ".dat"), std::ios::binary);
                file << data;
            }
        }
        for (const std::string& v : o.violations)
            std::cerr << v << '\n';
        code_ = std::max(code_, o.exit_code());
        ++written_;
    }

    void fail(const std::string& why)
    {
        std::cerr << why << '\n';
        code_ = std::max(code_, 1);
    }

    int code() const { return code_; }

private:
    const Flags& flags_;
    int code_ = 0;
    int written_ = 0;
};

std::vector<int> or_default(const std::vector<int>& v, std::vector<int> fallback)
{
    return v.empty() ? fallback : v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hardy and Bergman norm experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--tol", f.tol, "Quadrature tolerance for shells (preset when omitted)");
    app.add_option("--volume-tol", f.volume_tol, "Quadrature tolerance for volume integrals");
    app.add_option("--max-nodes", f.max_nodes, "Node cap per integral");
    app.add_option("--n-set", f.n_set, "Comma-separated N values")->delimiter(',');
    app.add_option("--a-set", f.a_set, "Comma-separated a values for the f_a family")->delimiter(',');
    app.add_option("--c-set", f.c_set, "Comma-separated exponents c")->delimiter(',');
    app.add_option("--z-set", f.z_set, "Comma-separated moduli |z|")->delimiter(',');
    app.add_option("--eps-set", f.eps_set, "Comma-separated density targets")->delimiter(',');
    app.add_option("--function", f.functions, "Registry id (repeatable)");
    app.add_option("--out", f.out, "Output path (stdout when omitted)");
    app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", f.seed, "Seed for the random polynomials");
    app.add_option("--config", f.config, "JSON domain file")->check(CLI::ExistingFile);
    app.add_option("--plot-data", f.plot_dir, "Directory for two-column curve files");
    app.add_flag("--timing", f.timing, "Keep wall-time columns");
    app.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    app.add_option("--dirs", f.dirs, "Frontier directions for Reinhardt Hardy norms")->check(CLI::PositiveNumber);
    app.add_option("--target", f.target, "Final error target for a1-converge");

    auto* uniform = app.add_subcommand("uniform-bound", "Ratio ||S_N f||_A1 / ||f||_H1 over the registry");
    auto* a1 = app.add_subcommand("a1-converge", "||S_N f - f||_A1 against N");
    auto* blowup = app.add_subcommand("blowup", "H1 growth of S_N f_a along a = N/(N+1)");
    auto* ic = app.add_subcommand("ic", "Asymptotics of I_c(z)");
    auto* reinhardt = app.add_subcommand("reinhardt", "Square partial sums on a Reinhardt domain");
    auto* density = app.add_subcommand("density", "Dilate-and-truncate polynomial approximation");
    auto* all = app.add_subcommand("all", "Every experiment with default grids");

    CLI11_PARSE(app, argc, argv);

    Sink sink(f);
    try {
        const Settings s = settings(f);
        const FunctionRegistry reg = FunctionRegistry::standard(f.seed);
        const bool several = all->parsed();

        Outcome uniform_out, blowup_out;
        if (uniform->parsed() || several) {
            uniform_out = run_uniform_bound(uniform_family(reg, f), or_default(f.n_set, default_disc_n_set()), s);
            sink.write(uniform_out, several);
        }
        if (a1->parsed() || several) {
            const std::vector<std::string> ids = f.functions.empty() ? std::vector<std::string>{"fa-0.9"} : f.functions;
            for (const std::string& id : ids)
                sink.write(run_a1_convergence(reg.get(id), or_default(f.n_set, default_disc_n_set()), f.target, s),
                           several);
        }
        if (blowup->parsed() || several) {
            blowup_out = run_blowup(or_default(f.n_set, default_disc_n_set()), s);
            sink.write(blowup_out, several);
        }
        if (several) {
            std::string why;
            if (!cross_consistent(uniform_out, blowup_out, &why))
                sink.fail(why);
        }
        if (ic->parsed() || several)
            sink.write(run_ic_asymptotics(f.c_set, f.z_set, s), several);
        if (reinhardt->parsed() || several) {
            const ReinhardtDomain d = domain(f, 2);
            std::vector<ProductEntry> family;
            if (f.functions.empty() || several) {
                for (const ProductEntry& p : reg.products())
                    if (p.dim() == d.dim() && (p.id == "fa-0.9xfa-0.9" || p.id == "z^1xz^5"))
                        family.push_back(p);
            } else {
                for (const std::string& id : f.functions)
                    family.push_back(reg.get_product(id));
            }
            sink.write(run_reinhardt(d, family, or_default(several ? std::vector<int>{} : f.n_set,
                                                           default_several_n_set()), s),
                       several);
        }
        if (density->parsed() || several) {
            const ReinhardtDomain d = domain(f, 1);
            std::string id = d.dim() == 1 ? "fa-0.9" : "fa-0.9xfa-0.9";
            if (!f.functions.empty() && !several)
                id = f.functions.front();
            sink.write(run_density(d, id, f.eps_set, reg, s), several);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return sink.code();
}
