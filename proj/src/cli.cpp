#include "hphc/cli.hpp"

#include "hphc/combinatorics.hpp"
#include "hphc/local_time.hpp"
#include "hphc/oracle.hpp"
#include "hphc/parallel.hpp"
#include "hphc/return_prob.hpp"
#include "hphc/stats.hpp"
#include "hphc/verify.hpp"
#include "hphc/walk.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace hphc {

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{
        {"command", c.command},   {"format", c.format},   {"mode", c.mode},
        {"n", c.n},               {"grid", c.grid},       {"exact_bound", c.exact_bound},
        {"seed", c.seed},         {"profile", c.profile}, {"engine", c.engine},
        {"steps", c.steps},       {"replicas", c.replicas}, {"start", c.start},
        {"quantity", c.quantity}, {"r", c.r},             {"task", c.task},
        {"ratio", c.ratio},       {"measure", c.measure}, {"radius", c.radius},
        {"models", c.models},     {"max_n", c.max_n},     {"inject_fault", c.inject_fault},
    };
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    const RunConfig defaults;
    auto get = [&](const char* key, auto& field, const auto& fallback) {
        field = j.contains(key) ? j.at(key).get<std::decay_t<decltype(field)>>() : fallback;
    };
    get("command", c.command, defaults.command);
    get("format", c.format, defaults.format);
    get("mode", c.mode, defaults.mode);
    get("n", c.n, defaults.n);
    get("grid", c.grid, defaults.grid);
    get("exact_bound", c.exact_bound, defaults.exact_bound);
    get("seed", c.seed, defaults.seed);
    get("profile", c.profile, defaults.profile);
    get("engine", c.engine, defaults.engine);
    get("steps", c.steps, defaults.steps);
    get("replicas", c.replicas, defaults.replicas);
    get("start", c.start, defaults.start);
    get("quantity", c.quantity, defaults.quantity);
    get("r", c.r, defaults.r);
    get("task", c.task, defaults.task);
    get("ratio", c.ratio, defaults.ratio);
    get("measure", c.measure, defaults.measure);
    get("radius", c.radius, defaults.radius);
    get("models", c.models, defaults.models);
    get("max_n", c.max_n, defaults.max_n);
    get("inject_fault", c.inject_fault, defaults.inject_fault);
}

namespace {

constexpr const char* kConfigPrefix = "# config: ";

using Cell = std::variant<std::monostate, std::string, long long, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> notes;
};

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') out += '"';
    }
    return out + "\"";
}

std::string csv_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const { return csv_field(s); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

std::string json_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : "null"; }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

std::string render(const Table& t, const RunConfig& cfg) {
    const nlohmann::json config = cfg;
    std::ostringstream os;
    if (cfg.format == "json") {
        nlohmann::json notes = nlohmann::json::object();
        for (const auto& [k, v] : t.notes) notes[k] = v;
        os << "{\n  \"generator\": " << nlohmann::json(kVersion).dump() << ",\n  \"config\": " << config.dump()
           << ",\n  \"notes\": " << notes.dump() << ",\n  \"columns\": " << nlohmann::json(t.columns).dump()
           << ",\n  \"rows\": [";
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            os << (i ? ",\n    [" : "\n    [");
            for (std::size_t c = 0; c < t.rows[i].size(); ++c) os << (c ? ", " : "") << json_cell(t.rows[i][c]);
            os << "]";
        }
        os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
        return os.str();
    }
    os << "# " << kVersion << "\n" << kConfigPrefix << config.dump() << "\n";
    for (const auto& [k, v] : t.notes) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_field(t.columns[c]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
        os << "\n";
    }
    return os.str();
}

Cell num(long v) { return static_cast<long long>(v); }
Cell num(std::uint64_t v) { return static_cast<long long>(v); }

std::vector<long> n_list(const RunConfig& cfg) {
    if (cfg.n > 0) return {cfg.n};
    if (cfg.grid.empty()) throw std::invalid_argument("give --n or --grid");
    return cfg.grid;
}

EvalMode parse_mode(const std::string& s) {
    if (s == "exact") return EvalMode::exact;
    if (s == "log") return EvalMode::log;
    if (s == "both") return EvalMode::both;
    throw std::invalid_argument("mode must be exact, log or both");
}

Table cmd_return_prob(const RunConfig& cfg, unsigned workers) {
    const auto Ns = n_list(cfg);
    const auto records = scaled_convergence_table(Ns, parse_mode(cfg.mode), cfg.exact_bound, workers);
    Table t;
    t.columns = {"N", "exact_num", "exact_den", "log_prob", "scaled"};
    for (const auto& rec : records) {
        t.rows.push_back({num(rec.N), rec.exact ? Cell(rec.exact->numerator()) : Cell(),
                          rec.exact ? Cell(rec.exact->denominator()) : Cell(), rec.approx.log_value, rec.scaled});
    }
    t.notes.emplace_back("trend_toward_one", trends_toward_one(records) ? "true" : "false");
    return t;
}

Table cmd_exact(const RunConfig& cfg) {
    const std::string& q = cfg.quantity;
    const long n = cfg.n;
    const bool all = cfg.r == -1 && q != "negbin-cdf";
    Table t;
    t.columns = {"quantity", "n", "r", "numerator", "denominator", "value"};
    auto add = [&](long r, const Rational& v) {
        t.rows.push_back({q, num(n), num(r), v.get_num().get_str(), v.get_den().get_str(), v.get_d()});
    };
    auto sweep = [&](long lo, long hi, auto&& f) {
        if (all) {
            for (long r = lo; r <= hi; ++r) add(r, f(r));
        } else {
            add(cfg.r, f(cfg.r));
        }
    };
    if (q == "binomial") {
        sweep(0, n, [&](long k) { return Rational(binomial(n, k)); });
    } else if (q == "central") {
        add(0, central_return_1d(n).value());
    } else if (q == "q") {
        sweep(0, n, [&](long r) { return q_ratio(r, n).value(); });
    } else if (q == "p2n2r") {
        sweep(1, n, [&](long r) { return p2n2r_closed(n, r).value(); });
    } else if (q == "p2n2r-sum") {
        sweep(1, n, [&](long r) { return p2n2r_sum(n, r).value(); });
    } else if (q == "p2n-odd") {
        sweep(1, n, [&](long r) { return p2n_odd(n, r).value(); });
    } else if (q == "p2n") {
        sweep(1, 2 * n, [&](long g) { return p2n_any(n, g).value(); });
    } else if (q == "sparre-andersen-k") {
        sweep(0, n - 1, [&](long r) { return sparre_andersen_k(n, r).value(); });
    } else if (q == "negbin-pmf") {
        if (all) throw std::invalid_argument("negbin-pmf needs --r");
        add(cfg.r, negbin_pmf(n, cfg.r).value());
    } else if (q == "negbin-cdf") {
        add(cfg.r, negbin_cdf(n, cfg.r).value());
    } else if (q.empty()) {
        throw std::invalid_argument("exact needs --quantity");
    } else {
        throw std::invalid_argument("unknown quantity '" + q + "'");
    }
    return t;
}

Table cmd_simulate(const RunConfig& cfg, unsigned workers) {
    const PJProfile profile = PJProfile::parse(cfg.profile);
    const Engine engine = parse_engine(cfg.engine);
    const LatticeSite start = parse_site(cfg.start);
    if (cfg.steps < 0 || cfg.replicas < 1) throw std::invalid_argument("need steps >= 0 and replicas >= 1");
    Table t;
    if (cfg.replicas == 1) {
        t.columns = {"step", "k", "j"};
        TrajectoryStream stream(engine, profile, cfg.steps, split_seed(cfg.seed, 0), start);
        long step = 0;
        stream.for_each([&](const LatticeSite& s) { t.rows.push_back({num(step++), num(s.k), num(s.j)}); });
        return t;
    }
    std::vector<LatticeSite> ends(static_cast<std::size_t>(cfg.replicas));
    parallel_slices(ends.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            TrajectoryStream stream(engine, profile, cfg.steps, split_seed(cfg.seed, r), start);
            stream.for_each([&](const LatticeSite& s) { ends[r] = s; });
        }
    });
    std::map<LatticeSite, std::uint64_t> hist;
    for (const auto& s : ends) ++hist[s];
    t.columns = {"k", "j", "count", "frequency"};
    for (const auto& [s, c] : hist) {
        t.rows.push_back({num(s.k), num(s.j), num(c), static_cast<double>(c) / static_cast<double>(cfg.replicas)});
    }
    return t;
}

Table cmd_local_time(const RunConfig& cfg, unsigned workers) {
    SimulationSpec sim{PJProfile::parse(cfg.profile), parse_engine(cfg.engine), workers};
    Table t;
    const std::string task = cfg.task.empty() && !cfg.ratio.empty() ? "ratio" : cfg.task;
    if (task == "ratio") {
        const auto colon = cfg.ratio.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--ratio must be 'k,j:k,j'");
        const LatticeSite a = parse_site(cfg.ratio.substr(0, colon));
        const LatticeSite b = parse_site(cfg.ratio.substr(colon + 1));
        const RatioStats s = ratio_experiment(a, b, cfg.steps, cfg.replicas, cfg.seed, sim);
        t.columns = {"site_a", "site_b",     "N",     "mean",          "ci_lo",           "ci_hi",
                     "zero_denominator_count", "ratio_of_totals", "limit", "degenerate"};
        t.rows.push_back({to_string(a), to_string(b), num(s.steps), s.mean, s.ci_lo, s.ci_hi, num(s.zero_denominator),
                          s.ratio_of_totals, ratio_limit(sim.profile, a, b).get_d(), s.degenerate});
    } else if (task == "exp-law") {
        t.columns = {"N", "replicas", "ks_distance", "mean_scaled", "low_power"};
        for (long N : n_list(cfg)) {
            const auto s = exponential_law_samples(N, cfg.replicas, cfg.seed, sim);
            t.rows.push_back({num(N), num(s.replicas), s.ks_distance, mean_of(s.scaled), s.low_power});
        }
    } else if (task == "lil") {
        const auto grid = n_list(cfg);
        const auto table = lil_diagnostic(grid, cfg.replicas, cfg.seed, sim);
        t.columns = {"N", "replica", "scaled", "running_max"};
        for (std::size_t r = 0; r < table.scaled.size(); ++r)
            for (std::size_t i = 0; i < grid.size(); ++i)
                t.rows.push_back({num(grid[i]), num(static_cast<long>(r)), table.scaled[r][i], table.running_max[r][i]});
        t.notes.emplace_back("limsup_constant", format_double(2.0 / std::numbers::pi));
        t.notes.emplace_back("acceptance", "none (diagnostic only)");
    } else if (task == "green") {
        const auto grid = n_list(cfg);
        const EvalMode mode = parse_mode(cfg.mode) == EvalMode::log ? EvalMode::log : EvalMode::exact;
        t.columns = {"N", "g", "g_over_log_n", "g_num", "g_den"};
        for (const auto& row : green_table(grid, mode, cfg.exact_bound, workers)) {
            t.rows.push_back({num(row.N), row.g, row.scaled, row.exact ? Cell(row.exact->get_num().get_str()) : Cell(),
                              row.exact ? Cell(row.exact->get_den().get_str()) : Cell()});
        }
        t.notes.emplace_back("limit_of_g_over_log_n", format_double(2.0 / std::numbers::pi));
    } else if (task == "residual") {
        InvariantMeasure mu = InvariantMeasure::reciprocal(sim.profile);
        if (cfg.measure.starts_with("constant:")) {
            mu = InvariantMeasure::constant(parse_rational(cfg.measure.substr(9)));
        } else if (cfg.measure != "reciprocal") {
            throw std::invalid_argument("--measure must be 'reciprocal' or 'constant:<q>'");
        }
        bool all_zero = true;
        t.columns = {"k", "j", "residual_num", "residual_den"};
        for (const auto& [s, res] : invariant_residual(sim.profile, mu, cfg.radius)) {
            all_zero = all_zero && res == 0;
            t.rows.push_back({num(s.k), num(s.j), res.get_num().get_str(), res.get_den().get_str()});
        }
        t.notes.emplace_back("all_zero", all_zero ? "true" : "false");
    } else if (task == "ledger") {
        TrajectoryStream stream(sim.engine, sim.profile, cfg.steps, split_seed(cfg.seed, 0), parse_site(cfg.start));
        const auto ledger = accumulate_local_time(stream);
        std::map<LatticeSite, std::uint64_t> sorted(ledger.counts.begin(), ledger.counts.end());
        t.columns = {"k", "j", "count"};
        for (const auto& [s, c] : sorted) t.rows.push_back({num(s.k), num(s.j), num(c)});
        t.notes.emplace_back("steps", std::to_string(ledger.steps_taken));
    } else {
        throw std::invalid_argument("--task must be ratio, exp-law, lil, green, residual or ledger");
    }
    return t;
}

std::vector<ComparisonModel> parse_models(const std::string& text) {
    // Comma separated; a periodic model swallows the following rational tokens.
    std::vector<std::string> names;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const bool starts_model = tok == "simple" || tok == "comb" || tok == "hphc" || tok.starts_with("periodic:");
        if (starts_model || names.empty() || !names.back().starts_with("periodic:")) {
            names.push_back(tok);
        } else {
            names.back() += "," + tok;
        }
    }
    if (names.empty()) throw std::invalid_argument("--models is empty");
    std::vector<ComparisonModel> models;
    for (const auto& name : names) models.push_back(ComparisonModel::parse(name));
    return models;
}

Table cmd_compare(const RunConfig& cfg) {
    const auto models = parse_models(cfg.models);
    Table t;
    t.columns = {"N"};
    for (const auto& m : models) t.columns.push_back(m.to_string());
    for (long N : n_list(cfg)) {
        std::vector<Cell> row{num(N)};
        for (const auto& m : models) row.emplace_back(comparison_asymptotics(m, N));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table cmd_verify(const RunConfig& cfg, unsigned workers, bool& failed) {
    const auto results = run_verification(VerifyOptions{cfg.max_n, cfg.inject_fault, workers});
    Table t;
    t.columns = {"check", "cases", "failures", "status", "detail"};
    failed = false;
    for (const auto& r : results) {
        failed = failed || !r.passed();
        t.rows.push_back({r.name, num(r.cases), num(r.failures), std::string(r.passed() ? "pass" : "FAIL"), r.detail});
    }
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    const std::string text = read_file(path);
    const auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded() && parsed.is_object()) {
        return parsed.contains("generator") && parsed.contains("config") ? parsed.at("config").get<RunConfig>()
                                                                          : parsed.get<RunConfig>();
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.starts_with(kConfigPrefix)) {
            return nlohmann::json::parse(line.substr(std::string(kConfigPrefix).size())).get<RunConfig>();
        }
    }
    throw std::invalid_argument("'" + path + "' is neither a JSON config nor an artifact with an embedded config");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Return probabilities and local times of the half-plane half-comb random walk", "hphc"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, out_path;
    unsigned workers = default_workers();

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config or previous artifact; its values override flags");
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default: stdout or $" + std::string(kOutputDirEnv) + ")");
        sub->add_option("--workers", workers, "worker threads; results do not depend on it")
            ->check(CLI::PositiveNumber);
        return sub;
    };
    auto grid_opts = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "single N");
        sub->add_option("--grid", cfg.grid, "ascending N list, comma separated")->delimiter(',');
    };
    auto sim_opts = [&](CLI::App* sub) {
        sub->add_option("--profile", cfg.profile, "simple | comb | hphc | periodic:p0,p1,.. | custom:q;j=q,..");
        sub->add_option("--engine", cfg.engine, "kernel or construction")
            ->check(CLI::IsMember({"kernel", "construction"}));
        sub->add_option("--steps", cfg.steps, "steps per trajectory");
        sub->add_option("--replicas", cfg.replicas, "independent replicas");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--start", cfg.start, "start site k,j");
    };

    auto* rp = common(app.add_subcommand("return-prob", "P(C(2N)=(0,0)) with the 2/(pi N) scaling"));
    grid_opts(rp);
    rp->add_option("--mode", cfg.mode, "exact, log or both")->check(CLI::IsMember({"exact", "log", "both"}));
    rp->add_option("--exact-bound", cfg.exact_bound, "largest N evaluated exactly");

    auto* ex = common(app.add_subcommand("exact", "exact 1D combinatorial quantities"));
    ex->add_option("--quantity", cfg.quantity,
                   "binomial | central | q | p2n2r | p2n2r-sum | p2n-odd | p2n | sparre-andersen-k | negbin-pmf | "
                   "negbin-cdf");
    ex->add_option("--n", cfg.n, "n (or K for negbin)");
    ex->add_option("--r", cfg.r, "index r (omit for the whole row)");

    auto* sm = common(app.add_subcommand("simulate", "trajectory or endpoint histogram"));
    sim_opts(sm);

    auto* lt = common(app.add_subcommand("local-time", "local-time statistics"));
    sim_opts(lt);
    grid_opts(lt);
    lt->add_option("--task", cfg.task, "ratio | exp-law | lil | green | residual | ledger (ratio if --ratio is given)");
    lt->add_option("--ratio", cfg.ratio, "sites a:b as k,j:k,j");
    lt->add_option("--mode", cfg.mode, "exact or log (green)");
    lt->add_option("--exact-bound", cfg.exact_bound, "largest N evaluated exactly");
    lt->add_option("--measure", cfg.measure, "reciprocal or constant:<q> (residual)");
    lt->add_option("--radius", cfg.radius, "residual radius");

    auto* cmp = common(app.add_subcommand("compare", "asymptotic return probabilities of planar walks"));
    grid_opts(cmp);
    cmp->add_option("--models", cfg.models, "comma separated: simple, comb, hphc, periodic:p0,p1,..");

    auto* vf = common(app.add_subcommand("verify", "exact cross-checks of every identity"));
    vf->add_option("--max-n", cfg.max_n, "enumeration and DP oracle bound");
    vf->add_option("--inject-fault", cfg.inject_fault, "")->group("");  // negative control for tests

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!config_path.empty()) {
            const RunConfig file = load_run_config(config_path);
            if (!file.command.empty() && file.command != cfg.command) {
                throw std::invalid_argument("config is for '" + file.command + "', not '" + cfg.command + "'");
            }
            nlohmann::json merged = cfg;
            merged.merge_patch(nlohmann::json(file));
            merged["command"] = cfg.command;
            cfg = merged.get<RunConfig>();
        }

        bool verify_failed = false;
        Table table;
        if (cfg.command == "return-prob") table = cmd_return_prob(cfg, workers);
        else if (cfg.command == "exact") table = cmd_exact(cfg);
        else if (cfg.command == "simulate") table = cmd_simulate(cfg, workers);
        else if (cfg.command == "local-time") table = cmd_local_time(cfg, workers);
        else if (cfg.command == "compare") table = cmd_compare(cfg);
        else table = cmd_verify(cfg, workers, verify_failed);

        const std::string text = render(table, cfg);
        std::string path = out_path;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
                const std::string stem = cfg.command == "local-time" && !cfg.task.empty() ? cfg.command + "-" + cfg.task : cfg.command;
                path = (std::filesystem::path(dir) / (stem + "." + cfg.format)).string();
            }
        }
        if (path.empty()) {
            out << text;
        } else {
            std::ofstream file(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot write '" + path + "'");
            file << text;
        }
        if (verify_failed) {
            err << "verification failed\n";
            return kExitVerifyFailed;
        }
        return kExitOk;
    } catch (const SizeBoundError& e) {
        err << "size error: " << e.what() << "\n";
        return kExitSizeBound;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace hphc
