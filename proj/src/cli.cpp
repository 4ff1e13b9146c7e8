#include "gnv/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnv/config.hpp"
#include "gnv/errors.hpp"
#include "gnv/estimators.hpp"
#include "gnv/kernels.hpp"
#include "gnv/mc.hpp"
#include "gnv/report.hpp"
#include "gnv/sampler.hpp"
#include "gnv/vasicek.hpp"

namespace gnv {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string out;
    std::string in;
    std::optional<std::string> kernel;
    std::optional<double> H;
    std::optional<double> k;
    std::optional<double> mu;
    std::vector<double> T;
    std::optional<double> dt;
    std::optional<std::size_t> reps;
    std::vector<std::string> modes;
};

// Thrown for problems the user fixes on the command line.
struct UsageError : Error {
    using Error::Error;
};

void add_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "JSON experiment configuration");
    cmd->add_option("--kernel", o.kernel, "noise kernel: fbm or subfbm");
    cmd->add_option("--H", o.H, "Hurst index in (1/2, 1)");
}

ExperimentConfig resolve_config(const Options& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : [&] {
        try {
            return load_config(o.config);
        } catch (const IoError& e) {
            throw UsageError(e.what());
        }
    }();
    const bool sampler_pinned = [&] {
        if (o.config.empty()) return false;
        std::ifstream in(o.config);
        return json::parse(in, nullptr, false).contains("sampler");
    }();
    if (o.kernel) cfg.kernel.name = *o.kernel;
    if (o.H) cfg.kernel.hurst = *o.H;
    if (!sampler_pinned) {
        cfg.sampler = cfg.kernel.name == "fbm" ? SamplerMethod::circulant : SamplerMethod::cholesky;
    }
    if (o.k) cfg.params.k = *o.k;
    if (o.mu) cfg.params.mu = *o.mu;
    if (!o.T.empty()) cfg.T_list = o.T;
    if (o.dt) cfg.dt = *o.dt;
    if (o.reps) cfg.replications = *o.reps;
    if (o.seed) cfg.master_seed = *o.seed;
    if (!o.modes.empty()) {
        cfg.modes.clear();
        for (const auto& m : o.modes) cfg.modes.push_back(parse_integral_mode(m));
    }
    (void)cfg.kernel.make();
    return cfg;
}

double single_horizon(const ExperimentConfig& cfg, const char* command) {
    if (cfg.T_list.size() != 1) {
        throw UsageError(std::string(command) + " takes exactly one horizon --T");
    }
    return cfg.T_list.front();
}

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed while writing " + path.string());
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

int cmd_kernel_check(const Options& o, std::ostream& out) {
    ExperimentConfig cfg = resolve_config(o);
    if (o.T.empty()) cfg.T_list = {5.0};
    if (!o.dt) cfg.dt = 0.1;
    const Kernel kernel = cfg.kernel.make();
    const Grid grid = Grid::from_horizon(single_horizon(cfg, "kernel-check"), cfg.dt);
    const AssumptionReport r = check_assumption(kernel, grid);

    out << "kernel           " << kernel.name << '\n'
        << "H                " << fixed(cfg.kernel.hurst, 6) << '\n'
        << "beta             " << fixed(kernel.beta, 6) << '\n'
        << "C_beta           " << fixed(kernel.c_beta, 10) << '\n'
        << "C'_beta          " << fixed(kernel.c_beta_prime, 10) << '\n'
        << "grid             n=" << grid.n() << " dt=" << fixed(grid.dt(), 6) << '\n'
        << "worst pair       t=" << fixed(r.worst_t, 6) << " s=" << fixed(r.worst_s, 6) << '\n'
        << "phi vs FD of R   " << fixed(r.max_phi_fd_rel_error, 3) << '\n'
        << "increment bound  " << fixed(increment_bound_constant(kernel), 10) << '\n'
        << (r.passes ? "PASS" : "FAIL") << " max_ratio=" << format_double(r.max_ratio) << '\n';
    return r.passes ? kExitOk : kExitDomain;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    ExperimentConfig cfg = resolve_config(o);
    const double T = single_horizon(cfg, "simulate");
    cfg.params.validate();
    const Kernel kernel = cfg.kernel.make();
    const Grid grid = Grid::from_horizon(T, cfg.dt);
    const std::uint64_t seed = cfg.master_seed;
    const GaussianPath g = cfg.sampler == SamplerMethod::circulant && kernel.name == "fbm"
                               ? sample_fgn_circulant(cfg.kernel.hurst, grid.n(), grid.dt(), seed)
                               : sample_path_cholesky(kernel, grid, seed);
    const VasicekPath x = simulate_vasicek(cfg.params, g, cfg.scheme, cfg.x0);
    if (o.out.empty()) {
        write_path_csv(out, g, x);
        return kExitOk;
    }
    std::ofstream file(o.out);
    if (!file) throw IoError("cannot write " + o.out);
    write_path_csv(file, g, x);
    if (!file) throw IoError("failed while writing " + o.out);
    return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
    if (o.in.empty()) throw UsageError("estimate needs --in <path.csv>");
    if (o.modes.size() > 1) throw UsageError("estimate takes a single --mode");
    const ExperimentConfig cfg = resolve_config(o);
    const IntegralMode mode = o.modes.empty() ? IntegralMode::pathwise : cfg.modes.front();
    if (mode == IntegralMode::skorohod_oracle && !o.k) {
        throw UsageError("--mode skorohod_oracle needs the true --k");
    }
    const PathTable table = read_path_csv(fs::path(o.in));
    if (!table.X) throw ShapeError(o.in + " has no X column");
    const Kernel kernel = cfg.kernel.make();
    const EstimateSet e = estimate_all(*table.X, table.grid.dt(), kernel, mode,
                                       o.k ? std::optional<double>(*o.k) : std::nullopt,
                                       cfg.params.sigma);
    const json doc{{"mode", std::string(to_string(e.mode))},
                   {"T", table.grid.T()},
                   {"dt", table.grid.dt()},
                   {"mu_hat", e.mu_hat},
                   {"k_hat", e.k_hat},
                   {"mu_ls", e.mu_ls},
                   {"k_ls", e.k_ls},
                   {"diagnostics",
                    {{"mean_X", e.diagnostics.mean_X},
                     {"mean_X2", e.diagnostics.mean_X2},
                     {"xdx", e.diagnostics.xdx},
                     {"correction", e.diagnostics.correction}}}};
    out << doc.dump(2) << '\n';
    return kExitOk;
}

void print_summary(const SummaryStats& s, std::ostream& out) {
    out << std::left << std::setw(26) << "estimator" << std::setw(8) << "T" << std::setw(7) << "n"
        << std::setw(14) << "mean" << std::setw(14) << "variance" << std::setw(14) << "med|err|"
        << "matching\n";
    for (const auto& c : s.cells) {
        std::string matching;
        for (const auto& m : c.matching_candidates) matching += (matching.empty() ? "" : " ") + m;
        out << std::left << std::setw(26) << c.estimator << std::setw(8) << fixed(c.T, 6)
            << std::setw(7) << c.n_valid << std::setw(14) << fixed(c.mean, 5) << std::setw(14)
            << fixed(c.variance, 5) << std::setw(14) << fixed(c.median_abs_error, 5)
            << (matching.empty() ? "-" : matching) << '\n';
    }
}

int cmd_experiment(const Options& o, std::ostream& out) {
    if (o.config.empty()) throw UsageError("experiment needs --config <file.json>");
    const ExperimentConfig cfg = resolve_config(o);
    const fs::path dir = o.out.empty() ? fs::path("results") : fs::path(o.out);
    const auto records = run_experiment(cfg, o.threads);
    const SummaryStats summary = summarize(records, cfg);
    emit_report(summary, records, cfg, dir);
    write_json_file(dir / "config.json", config_to_json(cfg));
    print_summary(summary, out);
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
    if (o.in.empty()) throw UsageError("report needs --in <replications.csv>");
    const fs::path in(o.in);
    Options resolved = o;
    if (resolved.config.empty()) {
        const fs::path sibling = in.parent_path() / "config.json";
        if (!fs::exists(sibling)) {
            throw UsageError("report needs --config (no config.json next to " + o.in + ")");
        }
        resolved.config = sibling.string();
    }
    const ExperimentConfig cfg = resolve_config(resolved);
    const auto records = read_replications_csv(in, cfg);
    const SummaryStats summary = summarize(records, cfg);
    const fs::path dir = o.out.empty() ? in.parent_path() : fs::path(o.out);
    emit_report(summary, records, cfg, dir.empty() ? fs::path(".") : dir);
    print_summary(summary, out);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and drift estimation for the Vasicek model under Gaussian noise", "gnv"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("kernel-check", "audit the covariance assumption on a grid");
    add_model_flags(check, o);
    check->add_option("--T", o.T, "grid horizon (default 5)")->expected(1);
    check->add_option("--dt", o.dt, "grid step (default 0.1)");

    auto* sim = app.add_subcommand("simulate", "write one noise and Vasicek path as t,G,X CSV");
    add_model_flags(sim, o);
    sim->add_option("--k", o.k, "mean-reversion speed");
    sim->add_option("--mu", o.mu, "long-run level");
    sim->add_option("--T", o.T, "horizon")->expected(1);
    sim->add_option("--dt", o.dt, "time step");
    sim->add_option("--seed", o.seed, "noise seed");
    sim->add_option("--out", o.out, "output CSV (default stdout)");

    auto* est = app.add_subcommand("estimate", "estimate mu and k from a path CSV");
    add_model_flags(est, o);
    est->add_option("--in", o.in, "path CSV with t and X columns")->required();
    est->add_option("--mode", o.modes, "pathwise, skorohod_oracle or skorohod_plugin")->expected(1);
    est->add_option("--k", o.k, "true k, used by skorohod_oracle");

    auto* exp = app.add_subcommand("experiment", "run the Monte Carlo study and write the report");
    add_model_flags(exp, o);
    exp->add_option("--k", o.k, "mean-reversion speed");
    exp->add_option("--mu", o.mu, "long-run level");
    exp->add_option("--T", o.T, "horizons")->expected(1, -1);
    exp->add_option("--dt", o.dt, "time step");
    exp->add_option("--reps", o.reps, "replications per horizon");
    exp->add_option("--seed", o.seed, "master seed");
    exp->add_option("--mode", o.modes, "estimator modes")->expected(1, -1);
    exp->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    exp->add_option("--out", o.out, "output directory (default ./results)");

    auto* rep = app.add_subcommand("report", "re-summarize an existing replications.csv");
    rep->add_option("--in", o.in, "replications.csv")->required();
    rep->add_option("--config", o.config, "configuration (default: config.json beside --in)");
    rep->add_option("--out", o.out, "output directory (default: beside --in)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_kernel_check(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
        if (est->parsed()) return cmd_estimate(o, out);
        if (exp->parsed()) return cmd_experiment(o, out);
        return cmd_report(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

}  // namespace gnv
