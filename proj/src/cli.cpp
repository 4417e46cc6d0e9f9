#include "lrdcma/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrdcma/config.hpp"
#include "lrdcma/error.hpp"
#include "lrdcma/estimate.hpp"
#include "lrdcma/limits.hpp"
#include "lrdcma/mc.hpp"
#include "lrdcma/parallel.hpp"
#include "lrdcma/simulate.hpp"

#ifndef LRDCMA_VERSION
#define LRDCMA_VERSION "dev"
#endif

namespace lrdcma {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// NaN and inf are not JSON; they become null.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Files of one invocation, flushed together at the end.
class Outputs {
public:
    explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string body) { files_.emplace_back(name, std::move(body)); }

    std::vector<std::string> commit(const RunConfig& cfg, const std::string& command) {
        fs::create_directories(dir_);
        std::vector<std::string> names;
        for (const auto& [name, body] : files_) {
            write(name, body);
            names.push_back(name);
        }
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        json m;
        m["config_hash"] = cfg.hash;
        m["seed"] = cfg.seed;
        m["timestamp"] = stamp;
        m["version"] = LRDCMA_VERSION;
        m["command"] = command;
        m["outputs"] = names;
        write("manifest.json", m.dump(2) + "\n");
        names.push_back("manifest.json");
        return names;
    }

private:
    void write(const std::string& name, const std::string& body) const {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream os(p, std::ios::binary);
        os << body;
        if (!os) throw ParameterError("cannot write '" + p.string() + "'");
    }

    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int threads = 1;
};

RunConfig load(const Globals& g, const std::string& positional = {}) {
    const std::string path = positional.empty() ? g.config_path : positional;
    RunConfig cfg = path.empty() ? parse_config_text("") : parse_config(path);
    if (g.seed) cfg.set_seed(*g.seed);
    cfg.experiment.threads = g.threads;
    return cfg;
}

std::vector<double> read_path_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open '" + path + "'");
    std::vector<double> x;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.rfind(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end == field.c_str()) {
            if (lineno == 1) continue;  // header
            throw ParameterError(path + ": line " + std::to_string(lineno) + " is not numeric");
        }
        x.push_back(v);
    }
    return x;
}

// ---------------------------------------------------------------------------

void cmd_kernel_table(const RunConfig& cfg, Outputs& out, double t_max, int points, long lags) {
    const Kernel k(cfg.kernel);
    if (!(t_max > 0.0) || points < 2) throw ParameterError("kernel table: need --t-max > 0 and --points >= 2");
    std::string f = "t,f\n";
    const double lo = std::log(1e-3), hi = std::log(t_max);
    for (int i = 0; i < points; ++i) {
        const double t = std::exp(lo + (hi - lo) * i / (points - 1));
        f += num(t) + "," + num(k(t)) + "\n";
    }
    out.add("kernel_f.csv", std::move(f));
    const double sigma2 = variance(cfg.model);
    const auto step = step_autocovariance_sequence(k, sigma2, cfg.grid.m, lags);
    std::string g = "h,gamma,gamma_step\n";
    for (long h = 0; h <= lags; ++h)
        g += std::to_string(h) + "," + num(autocovariance(k, sigma2, static_cast<double>(h), cfg.kernel.quad_tol)) + "," +
             num(step[static_cast<std::size_t>(h)]) + "\n";
    out.add("kernel_acv.csv", std::move(g));
}

void cmd_simulate(RunConfig cfg, Outputs& out, bool dump) {
    if (dump) {
        cfg.grid.retain_increments = true;
    }
    const Simulator sim(Kernel(cfg.kernel), cfg.model, cfg.grid);
    const SamplePath path = sim.simulate(cfg.seed, 0);
    std::string csv = "t,X_t\n";
    for (std::size_t t = 0; t < path.values.size(); ++t) csv += std::to_string(t + 1) + "," + num(path.values[t]) + "\n";
    out.add("path.csv", std::move(csv));
    if (dump) {
        std::ostringstream os(std::ios::binary);
        write_increment_dump(os, cfg.grid.m, path.increments);
        out.add("increments.bin", os.str());
    }
}

void cmd_acv(const RunConfig& cfg, bool have_config, Outputs& out, std::ostream& console, const std::string& path,
             long H) {
    const auto x = read_path_csv(path);
    if (H < 0) throw ParameterError("acv: --H must be nonnegative");
    const long N = static_cast<long>(x.size()) - H;
    if (N < 1) throw ParameterError("acv: the path has fewer than H + 1 values");
    AcvEstimate acv = sample_acv(x, N, H);
    if (have_config) attach_theoretical(acv, Kernel(cfg.kernel), variance(cfg.model), cfg.grid.m);
    const auto rho = sample_acf(acv);
    std::string csv = "h,gamma_hat,gamma,rho_hat\n";
    for (long h = 0; h <= H; ++h) {
        const auto i = static_cast<std::size_t>(h);
        csv += std::to_string(h) + "," + num(acv.gamma_hat[i]) + "," +
               (acv.gamma.empty() ? std::string("nan") : num(acv.gamma[i])) + "," + num(rho[i]) + "\n";
    }
    out.add("acv.csv", std::move(csv));
    json s;
    s["N"] = N;
    s["H"] = H;
    if (H >= 1 && rho[1] > -1.0) {
        const auto d = estimate_d(rho[1]);
        s["d_hat"] = d.value;
        s["d_hat_in_range"] = d.in_range;
        s["regime"] = d.in_range ? to_string(classify_regime(d.value, cfg.model)) : "undetermined";
    } else {
        s["d_hat"] = nullptr;
        s["d_hat_in_range"] = false;
        s["regime"] = "undetermined";
    }
    const std::string body = s.dump(2) + "\n";
    console << body;
    out.add("acv.json", body);
}

std::vector<double> limit_draws(const RunConfig& cfg, LimitKind law, std::size_t n, int threads) {
    switch (law) {
        case LimitKind::rosenblatt: {
            const double d = cfg.limit.d.value_or(cfg.kernel.d);
            const RosenblattSampler sampler(d, cfg.limit.rosenblatt);
            return sampler.draws(n, cfg.seed, threads);
        }
        case LimitKind::stable: {
            const StableParams p = stable_limit_params(cfg.model, cfg.limit.epsilon);
            std::vector<double> v(n);
            parallel_for(n, threads, [&](std::size_t i) {
                Rng rng = make_rng(cfg.seed, i);
                v[i] = sample_stable(p.alpha_half, p.tau, p.beta, p.mu, rng);
            });
            return v;
        }
        case LimitKind::gdm: {
            const Kernel k(cfg.kernel);
            const int m = cfg.experiment.target == Target::step ? cfg.grid.m : 0;
            const GdmSampler s(GdmSampler::grid_values(k, cfg.limit.lag, cfg.limit.gdm_grid, m),
                               stable_limit_params(cfg.model, 1.0));
            return s.draws(n, cfg.seed, threads);
        }
    }
    return {};
}

void cmd_limits_sample(const RunConfig& cfg, Outputs& out, const std::string& law_name, std::size_t n, bool binary,
                       int threads) {
    const LimitKind law = law_name.empty() ? cfg.limit.law : limit_kind_from_string(law_name);
    if (n < 1) throw ParameterError("limits sample: --n must be positive");
    const auto v = limit_draws(cfg, law, n, threads);
    if (binary) {
        std::ostringstream os(std::ios::binary);
        write_increment_dump(os, 0, v);
        out.add("draws.bin", os.str());
    } else {
        std::string body;
        for (double x : v) body += num(x) + "\n";
        out.add("draws.txt", std::move(body));
    }
}

// ---------------------------------------------------------------------------

std::vector<long> sweep_values(const RunConfig& cfg) {
    if (!cfg.sweep_N.empty()) return cfg.sweep_N;
    const long N = cfg.grid.N;
    if (N / 16 < 16) throw ParameterError("experiment: grid.N too small for the default sweep {N/16, N/4, N}");
    return {N / 16, N / 4, N};
}

std::map<long, ExperimentResult> run_sweep(const RunConfig& cfg, const std::vector<long>& Ns,
                                           std::map<long, ExperimentResult> have = {}) {
    for (long n : Ns) {
        if (have.count(n)) continue;
        ExperimentConfig e = cfg.experiment;
        e.grid.N = n;
        have.emplace(n, run_experiment(e));
    }
    return have;
}

json rate_json(const std::map<long, ExperimentResult>& runs, std::size_t lag_index) {
    std::map<long, std::vector<double>> raw;
    for (const auto& [n, r] : runs) raw[n] = r.raw.at(lag_index);
    const auto est = rate_regression(raw);
    json j;
    j["exponent"] = est.exponent;
    j["std_error"] = jnum(est.std_error);
    j["ci_low"] = jnum(est.ci_low);
    j["ci_high"] = jnum(est.ci_high);
    j["N"] = json::array();
    for (const auto& [n, r] : runs) j["N"].push_back(n);
    j["log_iqr"] = est.log_iqr;
    return j;
}

json experiment_summary(const RunConfig& cfg, const ExperimentResult& res, const json& rate) {
    json s;
    s["config_hash"] = cfg.hash;
    s["seed"] = cfg.seed;
    s["statistic"] = to_string(cfg.experiment.statistic);
    s["regime"] = to_string(res.regime);
    s["scaling"] = to_string(res.scaling);
    s["scaling_exponent"] = res.exponent;
    s["N"] = cfg.grid.N;
    s["m"] = cfg.grid.m;
    s["R"] = cfg.experiment.replicates;
    s["a_N"] = res.a_N;
    s["scale"] = res.scale;
    s["lags"] = res.lags;
    json per = json::array();
    for (std::size_t j = 0; j < res.lags.size(); ++j) {
        const auto c = compare_to_limits(cfg.experiment, res, j);
        json e;
        e["lag"] = res.lags[j];
        e["target"] = res.targets.at(static_cast<std::size_t>(res.lags[j]));
        e["median"] = quantile(res.scaled[j], 0.5);
        e["iqr"] = quantile(res.scaled[j], 0.75) - quantile(res.scaled[j], 0.25);
        e["ks_to_rosenblatt"] = c.ks_to_rosenblatt;
        e["ks_to_stable"] = c.ks_to_stable;
        e["ks_to_gaussian"] = c.ks_to_gaussian;
        e["hill_index"] = jnum(c.hill_index);
        e["hill_k"] = c.hill_k;
        per.push_back(e);
    }
    s["ks_to_rosenblatt"] = per[0]["ks_to_rosenblatt"];
    s["ks_to_stable"] = per[0]["ks_to_stable"];
    s["ks_to_gaussian"] = per[0]["ks_to_gaussian"];
    s["hill_index"] = per[0]["hill_index"];
    s["rate_exponent"] = rate["exponent"];
    s["rate"] = rate;
    const auto C = cross_lag_coupling(res.scaled);
    json corr = json::array();
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < C.cols(); ++j) row.push_back(jnum(C(i, j)));
        corr.push_back(row);
    }
    s["cross_lag_corr"] = corr;
    s["per_lag"] = per;
    return s;
}

std::string draws_csv(const ExperimentResult& res) {
    std::string csv = "replicate,lag,raw,scaled\n";
    for (std::size_t j = 0; j < res.lags.size(); ++j)
        for (std::size_t r = 0; r < res.scaled[j].size(); ++r)
            csv += std::to_string(r) + "," + std::to_string(res.lags[j]) + "," + num(res.raw[j][r]) + "," +
                   num(res.scaled[j][r]) + "\n";
    return csv;
}

void cmd_experiment_run(const RunConfig& cfg, Outputs& out, std::ostream& console) {
    const auto Ns = sweep_values(cfg);
    std::map<long, ExperimentResult> runs;
    runs.emplace(cfg.grid.N, run_experiment(cfg.experiment));
    runs = run_sweep(cfg, Ns, std::move(runs));
    std::map<long, ExperimentResult> rate_runs;
    for (long n : Ns) rate_runs.emplace(n, runs.at(n));
    const auto& res = runs.at(cfg.grid.N);
    const json summary = experiment_summary(cfg, res, rate_json(rate_runs, 0));
    const std::string body = summary.dump(2) + "\n";
    const std::string report = render_report(body);
    out.add("draws.csv", draws_csv(res));
    out.add("summary.json", body);
    out.add("report.txt", report);
    console << report;
}

void cmd_experiment_sweep(const RunConfig& cfg, Outputs& out, std::ostream& console) {
    const auto Ns = sweep_values(cfg);
    const auto runs = run_sweep(cfg, Ns);
    std::string csv = "N,lag,median_raw,iqr_raw,scale\n";
    for (const auto& [n, r] : runs)
        for (std::size_t j = 0; j < r.lags.size(); ++j)
            csv += std::to_string(n) + "," + std::to_string(r.lags[j]) + "," + num(quantile(r.raw[j], 0.5)) + "," +
                   num(quantile(r.raw[j], 0.75) - quantile(r.raw[j], 0.25)) + "," + num(r.scale) + "\n";
    json s;
    s["config_hash"] = cfg.hash;
    s["seed"] = cfg.seed;
    s["regime"] = to_string(runs.begin()->second.regime);
    s["rate_exponent_theory"] = runs.begin()->second.exponent;
    json per = json::array();
    for (std::size_t j = 0; j < runs.begin()->second.lags.size(); ++j) {
        json e = rate_json(runs, j);
        e["lag"] = runs.begin()->second.lags[j];
        per.push_back(e);
    }
    s["rate_exponent"] = per[0]["exponent"];
    s["per_lag"] = per;
    const std::string body = s.dump(2) + "\n";
    out.add("sweep.csv", std::move(csv));
    out.add("sweep.json", body);
    console << body;
}

void cmd_diagnostics(const RunConfig& cfg, Outputs& out, std::ostream& console, const std::vector<long long>& Ns) {
    const Kernel k(cfg.kernel);
    const double sigma2 = variance(cfg.model);
    json s;
    s["config_hash"] = cfg.hash;
    s["kernel"] = to_string(k.variant());
    s["C_d"] = k.C_d();
    s["bound_K"] = k.bound_K();
    s["sigma2"] = sigma2;
    s["regime"] = to_string(classify_regime(k.d(), cfg.model));

    const auto tr = truncation_report(k, sigma2, cfg.grid);
    s["truncation_T"] = tr.T;
    s["truncation_l2_tail"] = tr.l2_tail;
    s["far_residual"] = tr.far_residual;
    std::string trunc = "h,bias_bound\n";
    for (std::size_t h = 0; h < tr.bias_bound.size(); ++h) trunc += std::to_string(h) + "," + num(tr.bias_bound[h]) + "\n";
    out.add("truncation.csv", std::move(trunc));

    if (cfg.model.has_jumps()) {
        std::string csv = "N,a_N_mc,a_N_asym,b_N,karamata_diag\n";
        const std::size_t budget = cfg.experiment.norming_budget;
        for (long long n : Ns) {
            const auto a = norming_a(cfg.model, n, budget, derive_seed(cfg.seed, static_cast<std::uint64_t>(n)));
            const auto b = norming_b(cfg.model, a.a_mc, n, budget, derive_seed(cfg.seed, static_cast<std::uint64_t>(n) + 1));
            csv += std::to_string(n) + "," + num(a.a_mc) + "," + num(a.a_asym) + "," + num(b.b_N) + "," +
                   num(b.karamata) + "\n";
        }
        out.add("norming.csv", std::move(csv));
        if (cfg.model.brownian_sd == 0.0 && !cfg.model.bounded_jumps && cfg.model.alpha > 2.0 && cfg.model.alpha < 4.0) {
            const auto t = tau_monte_carlo(cfg.model, 10'000, 2'000, derive_seed(cfg.seed, 0x7a));
            s["tau_analytic"] = t.tau_analytic;
            s["tau_mc"] = t.tau_mc;
            s["tau_relative_gap"] = t.relative_gap;
            s["tau_ok"] = t.ok;
        }
    }
    const std::string body = s.dump(2) + "\n";
    out.add("diagnostics.json", body);
    console << body;
}

int threads_default() {
    if (const char* env = std::getenv("LRDCMA_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace

std::string render_report(const std::string& summary_json) {
    const json s = json::parse(summary_json);
    auto f = [](const json& v) {
        if (v.is_null()) return std::string("n/a");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
        return std::string(buf);
    };
    std::ostringstream os;
    os << "experiment " << s.at("config_hash").get<std::string>() << " seed " << s.at("seed").get<std::uint64_t>()
       << "\n";
    os << "  statistic " << s.at("statistic").get<std::string>() << ", regime " << s.at("regime").get<std::string>()
       << ", scaling " << s.at("scaling").get<std::string>() << " (exponent " << f(s.at("scaling_exponent")) << ")\n";
    os << "  N " << s.at("N").get<long>() << ", m " << s.at("m").get<int>() << ", R " << s.at("R").get<std::size_t>()
       << "\n";
    os << "  rate exponent " << f(s.at("rate_exponent")) << " [" << f(s.at("rate").at("ci_low")) << ", "
       << f(s.at("rate").at("ci_high")) << "]\n";
    for (const auto& e : s.at("per_lag")) {
        os << "  lag " << e.at("lag").get<long>() << ": KS rosenblatt " << f(e.at("ks_to_rosenblatt")) << ", stable "
           << f(e.at("ks_to_stable")) << ", gaussian " << f(e.at("ks_to_gaussian")) << "; hill "
           << f(e.at("hill_index")) << " (k = " << e.at("hill_k").get<std::size_t>() << ")\n";
    }
    const auto& C = s.at("cross_lag_corr");
    if (C.size() > 1) {
        os << "  cross-lag correlations\n";
        for (const auto& row : C) {
            os << "   ";
            for (const auto& v : row) os << " " << f(v);
            os << "\n";
        }
    }
    return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and limit-law experiments for sample autocovariances of long-memory moving averages",
                 "lrdcma"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    g.threads = threads_default();
    app.add_option("--config", g.config_path, "config file (key = value)");
    app.add_option("--seed", g.seed, "master seed, overrides run.seed");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (LRDCMA_THREADS)")->check(CLI::PositiveNumber);

    auto* kernel = app.add_subcommand("kernel", "kernel utilities");
    kernel->require_subcommand(1);
    auto* table = kernel->add_subcommand("table", "CSV of f(t) and gamma(h)");
    double t_max = 100.0;
    int points = 200;
    long lags = 32;
    table->add_option("--t-max", t_max)->capture_default_str();
    table->add_option("--points", points)->capture_default_str();
    table->add_option("--lags", lags)->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "simulate one path");
    bool dump = false;
    simulate->add_flag("--dump", dump, "also write the binary increment dump");

    auto* acv = app.add_subcommand("acv", "sample autocovariance of a path CSV");
    std::string acv_path;
    long acv_H = 0;
    acv->add_option("path", acv_path, "path CSV (t, X_t)")->required();
    acv->add_option("--H", acv_H, "largest lag")->capture_default_str();

    auto* limits = app.add_subcommand("limits", "limit-law samplers");
    limits->require_subcommand(1);
    auto* sample = limits->add_subcommand("sample", "draw from a limit law");
    std::string law;
    std::size_t n_draws = 1000;
    bool binary = false;
    sample->add_option("--law", law, "rosenblatt | stable | gdm (default limit.law)");
    sample->add_option("--n", n_draws, "number of draws")->capture_default_str();
    sample->add_flag("--binary", binary, "binary dump instead of text");

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiments");
    experiment->require_subcommand(1);
    std::string exp_config;
    auto* run = experiment->add_subcommand("run", "replicates at grid.N with limit-law comparison");
    run->add_option("config", exp_config, "config file");
    auto* sweep = experiment->add_subcommand("sweep", "replicates over experiment.sweep_N and rate regression");
    sweep->add_option("config", exp_config, "config file");
    auto* report = experiment->add_subcommand("report", "render the report of a summary.json");
    std::string summary_path;
    report->add_option("summary", summary_path, "summary.json")->required();

    auto* diagnostics = app.add_subcommand("diagnostics", "norming sequences, tau check, truncation bounds");
    std::vector<long long> diag_N{1000, 10000, 100000};
    diagnostics->add_option("--N", diag_N, "N values of the norming table")->delimiter(',');

    std::vector<const char*> argv{"lrdcma"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        const auto rest = app.remaining();
        if (!rest.empty() && rest.front().rfind('-', 0) != 0)
            err << "error: unknown subcommand '" << rest.front() << "'\n\n" << app.help();
        else
            err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        Outputs files(g.out_dir);
        std::string command;
        RunConfig cfg;
        if (table->parsed()) {
            command = "kernel table";
            cfg = load(g);
            cmd_kernel_table(cfg, files, t_max, points, lags);
        } else if (simulate->parsed()) {
            command = "simulate";
            cfg = load(g);
            cmd_simulate(cfg, files, dump);
        } else if (acv->parsed()) {
            command = "acv";
            cfg = load(g);
            cmd_acv(cfg, !g.config_path.empty(), files, out, acv_path, acv_H);
        } else if (sample->parsed()) {
            command = "limits sample";
            cfg = load(g);
            cmd_limits_sample(cfg, files, law, n_draws, binary, g.threads);
        } else if (run->parsed()) {
            command = "experiment run";
            cfg = load(g, exp_config);
            cmd_experiment_run(cfg, files, out);
        } else if (sweep->parsed()) {
            command = "experiment sweep";
            cfg = load(g, exp_config);
            cmd_experiment_sweep(cfg, files, out);
        } else if (report->parsed()) {
            std::ifstream is(summary_path);
            if (!is) throw ParameterError("cannot open '" + summary_path + "'");
            std::stringstream ss;
            ss << is.rdbuf();
            out << render_report(ss.str());
            return 0;
        } else if (diagnostics->parsed()) {
            command = "diagnostics";
            cfg = load(g);
            cmd_diagnostics(cfg, files, out, diag_N);
        }
        files.commit(cfg, command);
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << "error: malformed summary: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace lrdcma
