#include "lrdcma/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "lrdcma/error.hpp"
#include "lrdcma/estimate.hpp"

namespace lrdcma {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) {
        if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
        throw ParameterError("expected a number, got '" + v + "'");
    }
    return x;
}

long long parse_int(const std::string& v) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw ParameterError("expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& v) {
    std::uint64_t x = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw ParameterError("expected an unsigned integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParameterError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(parse_double(s));
    return out;
}

std::vector<long> parse_longs(const std::string& v) {
    std::vector<long> out;
    for (const auto& s : split_list(v)) out.push_back(static_cast<long>(parse_int(s)));
    return out;
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        if constexpr (std::is_floating_point_v<T>)
            s += fmt(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = {
        {"levy.brownian_sd", {[](RunConfig& c, const std::string& v) { c.model.brownian_sd = parse_double(v); },
                              [](const RunConfig& c) { return fmt(c.model.brownian_sd); }}},
        {"levy.jump_rate", {[](RunConfig& c, const std::string& v) { c.model.jump_rate = parse_double(v); },
                            [](const RunConfig& c) { return fmt(c.model.jump_rate); }}},
        {"levy.alpha", {[](RunConfig& c, const std::string& v) { c.model.alpha = parse_double(v); },
                        [](const RunConfig& c) { return fmt(c.model.alpha); }}},
        {"levy.x0", {[](RunConfig& c, const std::string& v) { c.model.x0 = parse_double(v); },
                     [](const RunConfig& c) { return fmt(c.model.x0); }}},
        {"levy.bounded_jumps", {[](RunConfig& c, const std::string& v) { c.model.bounded_jumps = parse_bool(v); },
                                [](const RunConfig& c) { return fmt_bool(c.model.bounded_jumps); }}},

        {"kernel.variant",
         {[](RunConfig& c, const std::string& v) { c.kernel.variant = kernel_variant_from_string(v); },
          [](const RunConfig& c) { return to_string(c.kernel.variant); }}},
        {"kernel.d", {[](RunConfig& c, const std::string& v) { c.kernel.d = parse_double(v); },
                      [](const RunConfig& c) { return fmt(c.kernel.d); }}},
        {"kernel.C_d", {[](RunConfig& c, const std::string& v) { c.kernel.C_d = parse_double(v); },
                        [](const RunConfig& c) { return fmt(c.kernel.C_d); }}},
        {"kernel.a", {[](RunConfig& c, const std::string& v) { c.kernel.a = parse_doubles(v); },
                      [](const RunConfig& c) { return fmt_list(c.kernel.a); }}},
        {"kernel.b", {[](RunConfig& c, const std::string& v) { c.kernel.b = parse_doubles(v); },
                      [](const RunConfig& c) { return fmt_list(c.kernel.b); }}},
        {"kernel.I_max", {[](RunConfig& c, const std::string& v) { c.kernel.I_max = static_cast<long>(parse_int(v)); },
                          [](const RunConfig& c) { return std::to_string(c.kernel.I_max); }}},
        {"kernel.quad_tol", {[](RunConfig& c, const std::string& v) { c.kernel.quad_tol = parse_double(v); },
                             [](const RunConfig& c) { return fmt(c.kernel.quad_tol); }}},

        {"grid.m", {[](RunConfig& c, const std::string& v) { c.grid.m = static_cast<int>(parse_int(v)); },
                    [](const RunConfig& c) { return std::to_string(c.grid.m); }}},
        {"grid.N", {[](RunConfig& c, const std::string& v) { c.grid.N = static_cast<long>(parse_int(v)); },
                    [](const RunConfig& c) { return std::to_string(c.grid.N); }}},
        {"grid.H", {[](RunConfig& c, const std::string& v) { c.grid.H = static_cast<long>(parse_int(v)); },
                    [](const RunConfig& c) { return std::to_string(c.grid.H); }}},
        {"grid.K_trunc", {[](RunConfig& c, const std::string& v) { c.grid.K_trunc = parse_int(v); },
                          [](const RunConfig& c) { return std::to_string(c.grid.K_trunc); }}},
        {"grid.retain_increments",
         {[](RunConfig& c, const std::string& v) { c.grid.retain_increments = parse_bool(v); },
          [](const RunConfig& c) { return fmt_bool(c.grid.retain_increments); }}},
        {"grid.far_past", {[](RunConfig& c, const std::string& v) { c.grid.far_past = parse_bool(v); },
                           [](const RunConfig& c) { return fmt_bool(c.grid.far_past); }}},
        {"grid.method", {[](RunConfig& c, const std::string& v) { c.grid.method = convolution_method_from_string(v); },
                         [](const RunConfig& c) { return to_string(c.grid.method); }}},
        {"grid.truncation_budget",
         {[](RunConfig& c, const std::string& v) { c.grid.truncation_budget = parse_double(v); },
          [](const RunConfig& c) { return fmt(c.grid.truncation_budget); }}},

        {"limit.law", {[](RunConfig& c, const std::string& v) { c.limit.law = limit_kind_from_string(v); },
                       [](const RunConfig& c) { return to_string(c.limit.law); }}},
        {"limit.d", {[](RunConfig& c, const std::string& v) { c.limit.d = parse_double(v); },
                     [](const RunConfig& c) { return c.limit.d ? fmt(*c.limit.d) : std::string("kernel"); }}},
        {"limit.n_grid",
         {[](RunConfig& c, const std::string& v) { c.limit.rosenblatt.n_grid = static_cast<long>(parse_int(v)); },
          [](const RunConfig& c) { return std::to_string(c.limit.rosenblatt.n_grid); }}},
        {"limit.window",
         {[](RunConfig& c, const std::string& v) { c.limit.rosenblatt.window = static_cast<long>(parse_int(v)); },
          [](const RunConfig& c) { return std::to_string(c.limit.rosenblatt.window); }}},
        {"limit.form",
         {[](RunConfig& c, const std::string& v) { c.limit.rosenblatt.form = rosenblatt_form_from_string(v); },
          [](const RunConfig& c) { return to_string(c.limit.rosenblatt.form); }}},
        {"limit.far_past", {[](RunConfig& c, const std::string& v) { c.limit.rosenblatt.far_past = parse_bool(v); },
                            [](const RunConfig& c) { return fmt_bool(c.limit.rosenblatt.far_past); }}},
        {"limit.horizon",
         {[](RunConfig& c, const std::string& v) { c.limit.rosenblatt.horizon = static_cast<int>(parse_int(v)); },
          [](const RunConfig& c) { return std::to_string(c.limit.rosenblatt.horizon); }}},
        {"limit.gdm_grid", {[](RunConfig& c, const std::string& v) { c.limit.gdm_grid = static_cast<long>(parse_int(v)); },
                            [](const RunConfig& c) { return std::to_string(c.limit.gdm_grid); }}},
        {"limit.lag", {[](RunConfig& c, const std::string& v) { c.limit.lag = static_cast<long>(parse_int(v)); },
                       [](const RunConfig& c) { return std::to_string(c.limit.lag); }}},
        {"limit.epsilon", {[](RunConfig& c, const std::string& v) { c.limit.epsilon = parse_double(v); },
                           [](const RunConfig& c) { return fmt(c.limit.epsilon); }}},

        {"experiment.replicates",
         {[](RunConfig& c, const std::string& v) { c.experiment.replicates = static_cast<std::size_t>(parse_u64(v)); },
          [](const RunConfig& c) { return std::to_string(c.experiment.replicates); }}},
        {"experiment.statistic",
         {[](RunConfig& c, const std::string& v) { c.experiment.statistic = statistic_from_string(v); },
          [](const RunConfig& c) { return to_string(c.experiment.statistic); }}},
        {"experiment.lags", {[](RunConfig& c, const std::string& v) { c.experiment.lags = parse_longs(v); },
                             [](const RunConfig& c) { return fmt_list(c.experiment.lags); }}},
        {"experiment.scaling",
         {[](RunConfig& c, const std::string& v) { c.experiment.scaling = scaling_from_string(v); },
          [](const RunConfig& c) {
              return c.experiment.scaling ? to_string(*c.experiment.scaling) : std::string("regime");
          }}},
        {"experiment.exponent", {[](RunConfig& c, const std::string& v) { c.experiment.exponent = parse_double(v); },
                                 [](const RunConfig& c) {
                                     return c.experiment.exponent ? fmt(*c.experiment.exponent) : std::string("regime");
                                 }}},
        {"experiment.centering",
         {[](RunConfig& c, const std::string& v) { c.experiment.centering = centering_from_string(v); },
          [](const RunConfig& c) { return to_string(c.experiment.centering); }}},
        {"experiment.target", {[](RunConfig& c, const std::string& v) { c.experiment.target = target_from_string(v); },
                               [](const RunConfig& c) { return to_string(c.experiment.target); }}},
        {"experiment.override_boundary",
         {[](RunConfig& c, const std::string& v) { c.experiment.override_boundary = parse_bool(v); },
          [](const RunConfig& c) { return fmt_bool(c.experiment.override_boundary); }}},
        {"experiment.norming_budget",
         {[](RunConfig& c, const std::string& v) { c.experiment.norming_budget = static_cast<std::size_t>(parse_u64(v)); },
          [](const RunConfig& c) { return std::to_string(c.experiment.norming_budget); }}},
        {"experiment.reference_draws",
         {[](RunConfig& c, const std::string& v) { c.experiment.reference_draws = static_cast<std::size_t>(parse_u64(v)); },
          [](const RunConfig& c) { return std::to_string(c.experiment.reference_draws); }}},
        {"experiment.hill_fraction",
         {[](RunConfig& c, const std::string& v) { c.experiment.hill_fraction = parse_double(v); },
          [](const RunConfig& c) { return fmt(c.experiment.hill_fraction); }}},
        {"experiment.sweep_N", {[](RunConfig& c, const std::string& v) { c.sweep_N = parse_longs(v); },
                                [](const RunConfig& c) { return fmt_list(c.sweep_N); }}},

        {"run.seed", {[](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
                      [](const RunConfig& c) { return std::to_string(c.seed); }}},
    };
    return table;
}

void validate(RunConfig& c, std::vector<std::string>& problems) {
    auto check = [&](const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            problems.emplace_back(e.what());
        }
    };
    std::optional<Kernel> kernel;
    check([&] { kernel.emplace(c.kernel); });
    bool model_ok = false;
    check([&] {
        c.model.validate();
        model_ok = true;
    });
    check([&] { c.grid.validate(); });

    if (kernel && model_ok && !kernel->test_only()) {
        if (!c.grid.far_past && std::isfinite(c.grid.truncation_budget) && c.grid.K() > 0) {
            check([&] {
                const double err = l2_tail(*kernel, variance(c.model), c.grid.epsilon() * static_cast<double>(c.grid.K()));
                if (err > c.grid.truncation_budget)
                    problems.push_back("truncation L2 error " + fmt(err) + " exceeds grid.truncation_budget " +
                                       fmt(c.grid.truncation_budget));
            });
        }
        if (classify_regime(kernel->d(), c.model) == Regime::boundary && !c.experiment.override_boundary) {
            const auto law = theoretical_limits(*kernel, c.model, 0);
            problems.push_back("boundary regime (" + law.reason +
                               "); set experiment.override_boundary = true to run it anyway");
        }
    }

    const auto& e = c.experiment;
    if (e.replicates < 100) problems.emplace_back("experiment.replicates must be at least 100 for KS comparisons");
    for (long l : e.lags)
        if (l < 0) problems.emplace_back("experiment.lags must be nonnegative");
    if (e.lags.empty()) problems.emplace_back("experiment.lags must name at least one lag");
    if (!(e.hill_fraction > 0.0 && e.hill_fraction < 1.0))
        problems.emplace_back("experiment.hill_fraction must lie in (0, 1)");
    if (e.reference_draws < 1) problems.emplace_back("experiment.reference_draws must be positive");
    if (e.norming_budget < 1000) problems.emplace_back("experiment.norming_budget must be at least 1000");
    if (!c.sweep_N.empty()) {
        if (c.sweep_N.size() < 3) problems.emplace_back("experiment.sweep_N needs at least three values");
        for (long n : c.sweep_N)
            if (n < 1) problems.emplace_back("experiment.sweep_N values must be positive");
        const auto [lo, hi] = std::minmax_element(c.sweep_N.begin(), c.sweep_N.end());
        if (*hi < 4 * *lo) problems.emplace_back("experiment.sweep_N must span at least two octaves");
    }

    const auto& l = c.limit;
    if (l.rosenblatt.n_grid < 2) problems.emplace_back("limit.n_grid must be at least 2");
    if (l.rosenblatt.window < 0) problems.emplace_back("limit.window must be nonnegative");
    if (l.rosenblatt.horizon < 1) problems.emplace_back("limit.horizon must be positive");
    if (l.gdm_grid < 1) problems.emplace_back("limit.gdm_grid must be positive");
    if (l.lag < 0) problems.emplace_back("limit.lag must be nonnegative");
    if (!(l.epsilon > 0.0)) problems.emplace_back("limit.epsilon must be positive");
    if (l.d && !(*l.d > 0.25 && *l.d < 0.5)) problems.emplace_back("limit.d must lie in (0.25, 0.5)");
}

}  // namespace

std::string to_string(LimitKind k) {
    switch (k) {
        case LimitKind::rosenblatt: return "rosenblatt";
        case LimitKind::stable: return "stable";
        case LimitKind::gdm: return "gdm";
    }
    return "rosenblatt";
}

LimitKind limit_kind_from_string(const std::string& s) {
    if (s == "rosenblatt") return LimitKind::rosenblatt;
    if (s == "stable") return LimitKind::stable;
    if (s == "gdm") return LimitKind::gdm;
    throw ParameterError("unknown limit law '" + s + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, f] : fields()) k.push_back(name);
        return k;
    }();
    return keys;
}

std::uint64_t fnv1a64(const std::string& s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunConfig::canonical_text() const {
    std::string out;
    for (const auto& [name, f] : fields()) {
        if (name == "run.seed") continue;
        out += name + " = " + f.get(*this) + "\n";
    }
    return out;
}

void RunConfig::set_seed(std::uint64_t s) {
    seed = s;
    experiment.seed = s;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::vector<std::string> problems;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            problems.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = fields().find(key);
        if (it == fields().end()) {
            problems.push_back(where + "unknown key '" + key + "'");
            continue;
        }
        if (!seen.insert(key).second) {
            problems.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        try {
            it->second.set(c, value);
        } catch (const std::exception& e) {
            problems.push_back(where + key + ": " + e.what());
        }
    }
    validate(c, problems);
    if (!problems.empty()) throw ConfigError(problems);

    c.experiment.kernel = c.kernel;
    c.experiment.model = c.model;
    c.experiment.grid = c.grid;
    c.experiment.seed = c.seed;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(c.canonical_text())));
    c.hash = buf;
    c.experiment.config_hash = c.hash;
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace lrdcma
