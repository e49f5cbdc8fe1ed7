#pragma once

#include "goucb/acquisition.hpp"
#include "goucb/gp.hpp"
#include "goucb/objectives.hpp"
#include "goucb/phase1.hpp"
#include "goucb/ucb_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace goucb {

enum class Method { go_ucb, gp_ucb, gp_ei, gp_pi, random_search };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// One benchmark configuration: a method, an objective, phase lengths and
/// noise, plus the per-module knobs. `n < 0` means the default floor(sqrt(T));
/// `lambda_override <= 0` means the default c_lambda * sqrt(T).
struct RunConfig {
    Method method = Method::go_ucb;
    std::string objective = "f1";
    int dim = 10;
    int T = 400;
    int n = -1;
    double c_lambda = 1.0;
    double lambda_override = -1.0;
    double beta_scale = 1.0;
    double sigma = 0.1;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out_dir;
    bool write_diag = false;
    int hidden = 5;

    Phase1Config phase1;
    AcquisitionConfig acq;
    GPConfig gp;
    GeometryConstants geom;

    /// Known true parameter for realizable self-tests; enables the
    /// feasibility flag in diagnostics. Auto-filled for "f1" runs.
    std::optional<Vector> w_star;

    int resolved_n() const;
    double resolved_lambda() const;
    void validate() const;
};

struct RoundLog {
    int round = 0;
    double u_sq = 0.0;
    double beta = 0.0;
    double log_det = 0.0;
    int feasible = -1;      // 1/0 when the true parameter is known, else -1
    double dist_sq = -1.0;  // ||w_t - w*||^2_Sigma when w_star is known
};

struct RunResult {
    RegretTrace trace;
    Vector x_hat;
    double y_hat = 0.0;
    std::size_t x_hat_round = 0;      // index within the optimistic phase
    std::vector<RoundLog> diag;       // go-ucb only
    DiagnosticsReport cov_diag;         // go-ucb only
    bool has_cov_diag = false;
    double feasible_fraction = -1.0;  // go-ucb with known w_star only
};

/// One full optimization run for one seed.
RunResult run_one(const RunConfig& cfg, std::uint64_t seed);

struct RunSummary {
    std::string method;
    std::string objective;
    int rounds = 0;
    int n = 0;
    int T = 0;
    std::vector<double> mean_R;
    std::vector<double> halfwidth;              // 1.96 * sd / sqrt(k)
    std::vector<std::vector<double>> per_seed_R;
    std::vector<std::uint64_t> seeds;
    double wall_s = 0.0;

    double final_mean_R() const { return mean_R.empty() ? 0.0 : mean_R.back(); }
    double final_halfwidth() const {
        return halfwidth.empty() ? 0.0 : halfwidth.back();
    }
};

/// Runs every seed (in parallel when GOUCB_WORKERS allows), aggregates the
/// mean regret curve with Wald half-widths, and writes the per-round CSV and
/// optional diagnostic CSVs when an output directory is set.
RunSummary run_suite(const RunConfig& cfg);

std::string summary_line(const RunSummary& s);

/// Smallest radius scale at which the true parameter stays inside the
/// confidence ball in at least `target` of the calibration rounds, times
/// `margin`. Requires a realizable configuration (w_star known, go-ucb).
double calibrate_beta_scale(const RunConfig& cfg,
                            const std::vector<std::uint64_t>& calib_seeds,
                            double target = 0.95, double margin = 1.25);

/// Worker count for seed-level parallelism: GOUCB_WORKERS or the hardware
/// concurrency.
int worker_count();

} // namespace goucb
