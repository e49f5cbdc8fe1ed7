#include "goucb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <thread>

namespace goucb {

Method parse_method(const std::string& name) {
    if (name == "go-ucb")
        return Method::go_ucb;
    if (name == "gp-ucb")
        return Method::gp_ucb;
    if (name == "gp-ei")
        return Method::gp_ei;
    if (name == "gp-pi")
        return Method::gp_pi;
    if (name == "random")
        return Method::random_search;
    throw ConfigError("unknown method '" + name + "'");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::go_ucb: return "go-ucb";
    case Method::gp_ucb: return "gp-ucb";
    case Method::gp_ei: return "gp-ei";
    case Method::gp_pi: return "gp-pi";
    case Method::random_search: return "random";
    }
    return "?";
}

int RunConfig::resolved_n() const {
    if (n >= 0)
        return n;
    return static_cast<int>(std::floor(std::sqrt(static_cast<double>(T))));
}

double RunConfig::resolved_lambda() const {
    if (lambda_override > 0.0)
        return lambda_override;
    return c_lambda * std::sqrt(static_cast<double>(T));
}

void RunConfig::validate() const {
    if (T < 1)
        throw ConfigError("RunConfig: T must be >= 1");
    if (resolved_n() < 0)
        throw ConfigError("RunConfig: n must be >= 0");
    if (method == Method::go_ucb && resolved_n() < 1)
        throw ConfigError("RunConfig: go-ucb needs at least one uniform round");
    if (seeds.empty())
        throw ConfigError("RunConfig: seed list is empty");
    if (sigma < 0.0)
        throw ConfigError("RunConfig: sigma must be >= 0");
    if (beta_scale <= 0.0)
        throw ConfigError("RunConfig: beta-scale must be > 0");
    if (c_lambda <= 0.0 && lambda_override <= 0.0)
        throw ConfigError("RunConfig: lambda scale must be > 0");
    if (dim < 1)
        throw ConfigError("RunConfig: dim must be >= 1");
    geom.validate();
}

int worker_count() {
    if (const char* env = std::getenv("GOUCB_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

GPConfig gp_config_for(const RunConfig& cfg) {
    GPConfig gp = cfg.gp;
    switch (cfg.method) {
    case Method::gp_ucb: gp.acq = GPConfig::Acq::ucb; break;
    case Method::gp_ei: gp.acq = GPConfig::Acq::ei; break;
    case Method::gp_pi: gp.acq = GPConfig::Acq::pi; break;
    default: break;
    }
    return gp;
}

RunResult run_go_ucb(const RunConfig& cfg, const Objective& obj,
                     std::uint64_t seed) {
    const int n = cfg.resolved_n();
    const int T = cfg.T;
    const Box& box = obj.box();

    SigmoidNet model(box.dim(), cfg.hidden);
    const int d_w = model.param_dim();

    std::optional<Vector> w_star = cfg.w_star;
    if (!w_star && cfg.objective == "f1" && cfg.dim == box.dim())
        w_star = Vector::Ones(d_w);
    if (w_star && w_star->size() != d_w)
        throw ConfigError("run_one: w_star has wrong length");

    RunResult out;
    NoisyOracle oracle(obj, cfg.sigma, derive_seed(seed, 1));

    Dataset data = sample_uniform(box, n, derive_seed(seed, 0));
    for (int j = 0; j < n; ++j) {
        data.y.push_back(oracle.observe(data.x[j]));
        record(out.trace, data.x[j], obj, Phase::uniform);
    }

    Phase1Config p1 = cfg.phase1;
    p1.n = n;
    Vector w0 = fit(model, data, p1, derive_seed(seed, 2));

    const double lambda = cfg.resolved_lambda();
    UcbEngine engine(d_w, lambda, w0);
    BetaSchedule schedule;
    schedule.scale = cfg.beta_scale;
    schedule.sigma = cfg.sigma;
    schedule.F = cfg.geom.F;
    schedule.mu = cfg.geom.mu;
    schedule.d_w = d_w;
    schedule.T = T;

    std::vector<Vector> xs;
    std::vector<double> ys;
    xs.reserve(T);
    ys.reserve(T);
    int feasible_rounds = 0;

    for (int t = 1; t <= T; ++t) {
        Vector w_t = engine.center();
        double beta_t = schedule(t);
        ConfidenceBall ball = engine.ball(w_t, beta_t);

        SelectResult sel;
        try {
            sel = select_point(model, ball, box, cfg.acq,
                               derive_seed(seed, 100 + t));
        } catch (const std::exception& e) {
            throw NumericalError("round " + std::to_string(t) + ": " + e.what());
        }

        ModelEval ev = model.eval(w_t, sel.x);
        double y = oracle.observe(sel.x);
        record(out.trace, sel.x, obj, Phase::optimistic);

        RoundLog log;
        log.round = t;
        log.beta = beta_t;
        if (w_star) {
            log.dist_sq = engine.state().mahalanobis_sq(w_t, *w_star);
            bool ok = log.dist_sq <= beta_t;
            log.feasible = ok ? 1 : 0;
            feasible_rounds += ok ? 1 : 0;
        }
        log.u_sq = engine.add(
            ObservationRecord{sel.x, y, std::move(w_t), std::move(ev.grad),
                              ev.value});
        log.log_det = engine.state().log_det();
        out.diag.push_back(log);

        xs.push_back(std::move(sel.x));
        ys.push_back(y);
    }

    std::size_t best = select_output(xs, ys);
    out.x_hat = xs[best];
    out.y_hat = ys[best];
    out.x_hat_round = best;
    out.cov_diag = covariance_diagnostics(engine.state(), engine.history());
    out.has_cov_diag = true;
    if (w_star)
        out.feasible_fraction = static_cast<double>(feasible_rounds) / T;
    return out;
}

RunResult run_gp(const RunConfig& cfg, const Objective& obj,
                 std::uint64_t seed) {
    const int n = cfg.resolved_n();
    const int T = cfg.T;
    const Box& box = obj.box();
    GPConfig gp = gp_config_for(cfg);

    RunResult out;
    NoisyOracle oracle(obj, cfg.sigma, derive_seed(seed, 1));

    Dataset data;
    if (n > 0) {
        data = sample_uniform(box, n, derive_seed(seed, 0));
        for (int j = 0; j < n; ++j) {
            data.y.push_back(oracle.observe(data.x[j]));
            record(out.trace, data.x[j], obj, Phase::uniform);
        }
    }

    std::vector<Vector> xs;
    std::vector<double> ys;
    xs.reserve(T);
    ys.reserve(T);
    Rng fallback(derive_seed(seed, 3));
    for (int t = 1; t <= T; ++t) {
        Vector x = data.size() == 0
                       ? box.sample(fallback)
                       : gp_select(data, gp, box, derive_seed(seed, 100 + t));
        double y = oracle.observe(x);
        record(out.trace, x, obj, Phase::optimistic);
        data.push(x, y);
        xs.push_back(std::move(x));
        ys.push_back(y);
    }

    std::size_t best = select_output(xs, ys);
    out.x_hat = xs[best];
    out.y_hat = ys[best];
    out.x_hat_round = best;
    return out;
}

RunResult run_random(const RunConfig& cfg, const Objective& obj,
                     std::uint64_t seed) {
    const int n = cfg.resolved_n();
    const int T = cfg.T;
    const Box& box = obj.box();

    RunResult out;
    NoisyOracle oracle(obj, cfg.sigma, derive_seed(seed, 1));
    Rng rng(derive_seed(seed, 0));

    std::vector<Vector> xs;
    std::vector<double> ys;
    for (int t = 0; t < n + T; ++t) {
        Vector x = box.sample(rng);
        double y = oracle.observe(x);
        record(out.trace, x, obj,
               t < n ? Phase::uniform : Phase::optimistic);
        if (t >= n) {
            xs.push_back(std::move(x));
            ys.push_back(y);
        }
    }
    std::size_t best = select_output(xs, ys);
    out.x_hat = xs[best];
    out.y_hat = ys[best];
    out.x_hat_round = best;
    return out;
}

void format_double(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    line += buf;
}

} // namespace

RunResult run_one(const RunConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Objective obj = make_objective(cfg.objective, cfg.dim);
    switch (cfg.method) {
    case Method::go_ucb: return run_go_ucb(cfg, obj, seed);
    case Method::gp_ucb:
    case Method::gp_ei:
    case Method::gp_pi: return run_gp(cfg, obj, seed);
    case Method::random_search: return run_random(cfg, obj, seed);
    }
    throw ConfigError("run_one: unhandled method");
}

namespace {

void write_regret_csv(const RunConfig& cfg, const RunSummary& s) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    fs::path path = fs::path(cfg.out_dir) /
                    ("regret_" + s.method + "_" + s.objective + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + path.string());

    std::string line = "round,mean_R,halfwidth";
    for (auto seed : s.seeds)
        line += ",R_seed" + std::to_string(seed);
    line += "\n";
    f << line;
    for (int i = 0; i < s.rounds; ++i) {
        line = std::to_string(i + 1);
        line += ',';
        format_double(line, s.mean_R[i]);
        line += ',';
        format_double(line, s.halfwidth[i]);
        for (const auto& curve : s.per_seed_R) {
            line += ',';
            format_double(line, curve[i]);
        }
        line += '\n';
        f << line;
    }
}

void write_diag_csv(const RunConfig& cfg, std::uint64_t seed,
                    const RunResult& res) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    fs::path path = fs::path(cfg.out_dir) /
                    ("diag_" + method_name(cfg.method) + "_" + cfg.objective +
                     "_seed" + std::to_string(seed) + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + path.string());
    f << "round,u_sq,beta,log_det,feasible\n";
    std::string line;
    for (const auto& d : res.diag) {
        line = std::to_string(d.round);
        line += ',';
        format_double(line, d.u_sq);
        line += ',';
        format_double(line, d.beta);
        line += ',';
        format_double(line, d.log_det);
        line += ',';
        line += std::to_string(d.feasible);
        line += '\n';
        f << line;
    }
}

} // namespace

RunSummary run_suite(const RunConfig& cfg) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();

    const int k = static_cast<int>(cfg.seeds.size());
    std::vector<RunResult> results(k);
    std::vector<std::exception_ptr> errors(k);

    int workers = std::min(worker_count(), k);
    if (workers <= 1) {
        for (int i = 0; i < k; ++i) {
            try {
                results[i] = run_one(cfg, cfg.seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        auto work = [&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= k)
                    return;
                try {
                    results[i] = run_one(cfg, cfg.seeds[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    // Any failed seed aborts the suite with its error (lowest index first).
    for (int i = 0; i < k; ++i)
        if (errors[i])
            std::rethrow_exception(errors[i]);

    RunSummary s;
    s.method = method_name(cfg.method);
    s.objective = cfg.objective;
    s.seeds = cfg.seeds;
    s.n = cfg.resolved_n();
    s.T = cfg.T;
    s.rounds = static_cast<int>(results[0].trace.rounds());
    s.mean_R.resize(s.rounds);
    s.halfwidth.resize(s.rounds);
    s.per_seed_R.reserve(k);
    for (const auto& res : results) {
        if (static_cast<int>(res.trace.rounds()) != s.rounds)
            throw StateError("run_suite: seeds produced different round counts");
        s.per_seed_R.push_back(res.trace.R);
    }

    for (int i = 0; i < s.rounds; ++i) {
        double mean = 0.0;
        bool identical = true;
        for (int j = 0; j < k; ++j) {
            mean += s.per_seed_R[j][i];
            identical = identical && s.per_seed_R[j][i] == s.per_seed_R[0][i];
        }
        mean /= k;
        s.mean_R[i] = mean;
        if (k > 1 && !identical) {
            double ss = 0.0;
            for (int j = 0; j < k; ++j) {
                double d = s.per_seed_R[j][i] - mean;
                ss += d * d;
            }
            double sd = std::sqrt(ss / (k - 1));
            s.halfwidth[i] = 1.96 * sd / std::sqrt(static_cast<double>(k));
        } else {
            s.halfwidth[i] = 0.0;
        }
    }

    auto t1 = std::chrono::steady_clock::now();
    s.wall_s = std::chrono::duration<double>(t1 - t0).count();

    if (!cfg.out_dir.empty()) {
        write_regret_csv(cfg, s);
        if (cfg.write_diag && cfg.method == Method::go_ucb)
            for (int i = 0; i < k; ++i)
                write_diag_csv(cfg, cfg.seeds[i], results[i]);
    }
    return s;
}

std::string summary_line(const RunSummary& s) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "method=%s objective=%s rounds=%d (n=%d T=%d) "
                  "final_mean_R=%.6g final_halfwidth=%.6g wall_s=%.2f",
                  s.method.c_str(), s.objective.c_str(), s.rounds, s.n, s.T,
                  s.final_mean_R(), s.final_halfwidth(), s.wall_s);
    return buf;
}

double calibrate_beta_scale(const RunConfig& cfg,
                            const std::vector<std::uint64_t>& calib_seeds,
                            double target, double margin) {
    if (cfg.method != Method::go_ucb)
        throw ConfigError("calibrate_beta_scale: requires go-ucb");
    if (calib_seeds.empty())
        throw ConfigError("calibrate_beta_scale: no calibration seeds");
    if (!(target > 0.0 && target <= 1.0))
        throw ConfigError("calibrate_beta_scale: target must be in (0, 1]");

    RunConfig probe = cfg;
    probe.beta_scale = 1.0;
    probe.out_dir.clear();
    probe.seeds = calib_seeds;
    if (!probe.w_star && probe.objective != "f1")
        throw ConfigError("calibrate_beta_scale: w_star unknown; calibration "
                          "needs a realizable self-test");

    // Feasibility ratio per round: ||w_t - w*||^2_Sigma over the unscaled
    // radius. The containment statement is per run, so the scale is the
    // worst per-run target quantile across calibration seeds: the smallest
    // scale at which every calibration run keeps the true parameter inside
    // the ball in at least `target` of its rounds.
    double needed = 0.0;
    for (auto seed : calib_seeds) {
        RunResult res = run_one(probe, seed);
        std::vector<double> ratios;
        ratios.reserve(res.diag.size());
        for (const auto& d : res.diag) {
            if (d.dist_sq < 0.0)
                throw StateError("calibrate_beta_scale: run produced no "
                                 "feasibility distances");
            ratios.push_back(d.dist_sq / d.beta);
        }
        std::sort(ratios.begin(), ratios.end());
        std::size_t idx = static_cast<std::size_t>(
            std::ceil(target * static_cast<double>(ratios.size())));
        idx = std::min(ratios.size(), std::max<std::size_t>(1, idx)) - 1;
        needed = std::max(needed, ratios[idx]);
    }
    return std::max(needed * margin, 1e-12);
}

} // namespace goucb
