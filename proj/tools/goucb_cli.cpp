// Benchmark CLI: runs one method on one objective over a seed list and
// writes per-round regret CSVs (plus optional per-round diagnostics).
//
// Config files are flat key=value text (keys match the long flag names
// without the leading dashes); command-line flags override file values.

#include "goucb/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace {

struct CliValues {
    std::string method = "go-ucb";
    std::string objective = "f1";
    int dim = 10;
    int T = 400;
    int n = -1;
    double sigma = 0.1;
    double beta_scale = 1.0;
    double lambda_scale = 1.0;
    double lambda_override = -1.0;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out_dir = "results";
    bool diag = false;
    std::string acq_mode = "linearized";
    std::string config_path;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ','))
        if (!item.empty())
            seeds.push_back(std::stoull(item));
    return seeds;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw goucb::ConfigError("config: expected a boolean, got '" + v + "'");
}

// Applies `file` entries for options the command line did not set.
void apply_config_file(
    const std::string& path,
    const std::map<std::string, CLI::Option*>& options,
    const std::map<std::string, std::function<void(const std::string&)>>& set) {
    std::ifstream f(path);
    if (!f)
        throw goucb::ConfigError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw goucb::ConfigError("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        auto it = set.find(key);
        if (it == set.end())
            throw goucb::ConfigError("config line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        auto opt = options.find(key);
        if (opt != options.end() && opt->second->count() > 0)
            continue;  // command line wins
        it->second(value);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"goucb: global optimization with a parametric surrogate and "
                 "optimistic exploration, plus Gaussian-process baselines"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a benchmark suite");

    CliValues v;
    goucb::RunConfig cfg;

    std::map<std::string, CLI::Option*> opts;
    opts["method"] = run->add_option("--method", v.method,
                                     "go-ucb | gp-ucb | gp-ei | gp-pi | random")
                         ->capture_default_str();
    opts["objective"] =
        run->add_option("--objective", v.objective, "f1 | f2 | f3")
            ->capture_default_str();
    opts["dim"] = run->add_option("--dim", v.dim, "objective dimension")
                      ->capture_default_str();
    opts["T"] = run->add_option("--T", v.T, "optimistic-phase rounds")
                    ->capture_default_str();
    opts["n"] = run->add_option("--n", v.n,
                                "uniform-phase rounds; -1 = floor(sqrt(T))")
                    ->capture_default_str();
    opts["sigma"] = run->add_option("--sigma", v.sigma,
                                    "observation noise scale")
                        ->capture_default_str();
    opts["seeds"] = run->add_option("--seeds", v.seeds,
                                    "comma-separated seed list")
                        ->delimiter(',')
                        ->capture_default_str();
    opts["beta-scale"] = run->add_option("--beta-scale", v.beta_scale,
                                         "confidence radius scale c")
                             ->capture_default_str();
    opts["lambda-scale"] =
        run->add_option("--lambda-scale", v.lambda_scale,
                        "regularization rule scale: lambda = scale * sqrt(T)")
            ->capture_default_str();
    opts["lambda"] = run->add_option(
        "--lambda", v.lambda_override,
        "explicit regularization weight (overrides the rule)");
    opts["out"] = run->add_option("--out", v.out_dir,
                                  "output directory for CSV files")
                      ->capture_default_str();
    opts["diag"] = run->add_flag("--diag", v.diag,
                                 "also write per-round diagnostic CSVs (go-ucb)");

    opts["gd-iters"] = run->add_option("--gd-iters", cfg.phase1.gd_iters,
                                       "regression gradient-descent iterations")
                           ->capture_default_str();
    opts["gd-step"] = run->add_option("--gd-step", cfg.phase1.gd_step,
                                      "regression learning rate")
                          ->capture_default_str();
    opts["restarts"] = run->add_option("--restarts", cfg.phase1.restarts,
                                       "regression random restarts")
                           ->capture_default_str();
    opts["clamp-box"] =
        run->add_flag("--clamp-box", cfg.phase1.clamp_to_box,
                      "project regression iterates into the parameter box");

    opts["acq-mode"] = run->add_option("--acq-mode", v.acq_mode,
                                       "linearized | alternating")
                           ->capture_default_str();
    opts["acq-starts"] = run->add_option("--acq-starts", cfg.acq.outer_starts,
                                         "acquisition multistarts")
                             ->capture_default_str();
    opts["acq-iters"] =
        run->add_option("--acq-iters", cfg.acq.outer_iters,
                        "acquisition search iterations per start")
            ->capture_default_str();

    opts["gp-kappa"] = run->add_option("--gp-kappa", cfg.gp.kappa,
                                       "GP-UCB exploration weight")
                           ->capture_default_str();
    opts["gp-noise"] = run->add_option("--gp-noise", cfg.gp.noise_var,
                                       "GP observation noise variance")
                           ->capture_default_str();
    opts["gp-candidates"] =
        run->add_option("--gp-candidates", cfg.gp.candidate_count,
                        "GP acquisition candidate count")
            ->capture_default_str();

    opts["F"] = run->add_option("--F", cfg.geom.F, "function range constant")
                    ->capture_default_str();
    opts["mu"] = run->add_option("--mu", cfg.geom.mu,
                                 "strong convexity constant")
                     ->capture_default_str();

    run->add_option("--config", v.config_path,
                    "flat key=value config file; flags override file values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!v.config_path.empty()) {
            std::map<std::string, std::function<void(const std::string&)>> set;
            set["method"] = [&](const std::string& s) { v.method = s; };
            set["objective"] = [&](const std::string& s) { v.objective = s; };
            set["dim"] = [&](const std::string& s) { v.dim = std::stoi(s); };
            set["T"] = [&](const std::string& s) { v.T = std::stoi(s); };
            set["n"] = [&](const std::string& s) { v.n = std::stoi(s); };
            set["sigma"] = [&](const std::string& s) { v.sigma = std::stod(s); };
            set["seeds"] = [&](const std::string& s) {
                v.seeds = parse_seed_list(s);
            };
            set["beta-scale"] = [&](const std::string& s) {
                v.beta_scale = std::stod(s);
            };
            set["lambda-scale"] = [&](const std::string& s) {
                v.lambda_scale = std::stod(s);
            };
            set["lambda"] = [&](const std::string& s) {
                v.lambda_override = std::stod(s);
            };
            set["out"] = [&](const std::string& s) { v.out_dir = s; };
            set["diag"] = [&](const std::string& s) { v.diag = parse_bool(s); };
            set["gd-iters"] = [&](const std::string& s) {
                cfg.phase1.gd_iters = std::stoi(s);
            };
            set["gd-step"] = [&](const std::string& s) {
                cfg.phase1.gd_step = std::stod(s);
            };
            set["restarts"] = [&](const std::string& s) {
                cfg.phase1.restarts = std::stoi(s);
            };
            set["clamp-box"] = [&](const std::string& s) {
                cfg.phase1.clamp_to_box = parse_bool(s);
            };
            set["acq-mode"] = [&](const std::string& s) { v.acq_mode = s; };
            set["acq-starts"] = [&](const std::string& s) {
                cfg.acq.outer_starts = std::stoi(s);
            };
            set["acq-iters"] = [&](const std::string& s) {
                cfg.acq.outer_iters = std::stoi(s);
            };
            set["gp-kappa"] = [&](const std::string& s) {
                cfg.gp.kappa = std::stod(s);
            };
            set["gp-noise"] = [&](const std::string& s) {
                cfg.gp.noise_var = std::stod(s);
            };
            set["gp-candidates"] = [&](const std::string& s) {
                cfg.gp.candidate_count = std::stoi(s);
            };
            set["F"] = [&](const std::string& s) { cfg.geom.F = std::stod(s); };
            set["mu"] = [&](const std::string& s) { cfg.geom.mu = std::stod(s); };
            apply_config_file(v.config_path, opts, set);
        }

        cfg.method = goucb::parse_method(v.method);
        cfg.objective = v.objective;
        cfg.dim = v.dim;
        cfg.T = v.T;
        cfg.n = v.n;
        cfg.sigma = v.sigma;
        cfg.beta_scale = v.beta_scale;
        cfg.c_lambda = v.lambda_scale;
        cfg.lambda_override = v.lambda_override;
        cfg.seeds = v.seeds;
        cfg.out_dir = v.out_dir;
        cfg.write_diag = v.diag;
        if (v.acq_mode == "alternating")
            cfg.acq.mode = goucb::AcquisitionConfig::Mode::alternating;
        else if (v.acq_mode != "linearized")
            throw goucb::ConfigError("unknown acquisition mode '" + v.acq_mode +
                                     "'");

        goucb::RunSummary summary = goucb::run_suite(cfg);
        std::printf("%s\n", goucb::summary_line(summary).c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
