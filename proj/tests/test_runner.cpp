#include "goucb/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace goucb;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunConfig small_go_ucb() {
    RunConfig cfg;
    cfg.method = Method::go_ucb;
    cfg.objective = "f1";
    cfg.dim = 2;
    cfg.T = 15;
    cfg.n = 5;
    cfg.sigma = 0.1;
    cfg.seeds = {1, 2};
    cfg.phase1.gd_iters = 300;
    cfg.phase1.restarts = 2;
    cfg.acq.outer_starts = 6;
    cfg.acq.outer_iters = 15;
    return cfg;
}

} // namespace

TEST_SUITE("runner") {

TEST_CASE("random search on a noiseless objective has clean regret") {
    RunConfig cfg;
    cfg.method = Method::random_search;
    cfg.objective = "f3";
    cfg.dim = 10;
    cfg.T = 10;
    cfg.n = 2;
    cfg.sigma = 0.0;
    cfg.seeds = {7};
    RunResult res = run_one(cfg, 7);
    CHECK(res.trace.rounds() == 12);
    for (double r : res.trace.r)
        CHECK(r >= -1e-9);
    for (std::size_t i = 1; i < res.trace.R.size(); ++i)
        CHECK(res.trace.R[i] >= res.trace.R[i - 1] - 1e-12);
}

TEST_CASE("go-ucb end-to-end smoke run") {
    RunConfig cfg = small_go_ucb();
    RunResult res = run_one(cfg, 3);
    CHECK(res.trace.rounds() == 20);
    CHECK(res.has_cov_diag);
    CHECK(res.cov_diag.det_identity_gap <= 1e-8);
    CHECK(res.cov_diag.log_det_bound_ok);
    CHECK(res.cov_diag.sum_sq_bound_ok);
    CHECK(res.diag.size() == 15);
    // f1 runs know the generating parameter, so feasibility is tracked.
    CHECK(res.feasible_fraction >= 0.0);
    for (const auto& d : res.diag) {
        CHECK(d.u_sq >= 0.0);
        CHECK(d.beta > 0.0);
        CHECK(d.feasible != -1);
    }
    CHECK(res.x_hat.size() == 2);
}

TEST_CASE("gp baseline smoke run and round count") {
    RunConfig cfg;
    cfg.method = Method::gp_ucb;
    cfg.objective = "f3";
    cfg.dim = 2;
    cfg.T = 5;
    cfg.n = 4;
    cfg.sigma = 0.1;
    cfg.seeds = {11};
    cfg.gp.candidate_count = 64;
    cfg.gp.refine_starts = 4;
    cfg.gp.refine_iters = 10;
    RunResult res = run_one(cfg, 11);
    CHECK(res.trace.rounds() == 9);
    CHECK_FALSE(res.has_cov_diag);

    // Without an init design the CSV has exactly T rounds.
    cfg.n = 0;
    RunResult bare = run_one(cfg, 11);
    CHECK(bare.trace.rounds() == 5);
}

TEST_CASE("suites aggregate means and Wald half-widths") {
    RunConfig cfg;
    cfg.method = Method::random_search;
    cfg.objective = "f2";
    cfg.dim = 3;
    cfg.T = 8;
    cfg.n = 2;
    cfg.seeds = {5};
    RunSummary one = run_suite(cfg);
    CHECK(one.rounds == 10);
    for (double hw : one.halfwidth)
        CHECK(hw == 0.0);

    // Identical seeds give zero variance.
    cfg.seeds = {5, 5, 5};
    RunSummary same = run_suite(cfg);
    for (double hw : same.halfwidth)
        CHECK(hw == 0.0);
    CHECK(same.mean_R.back() == doctest::Approx(one.mean_R.back()));

    cfg.seeds = {5, 6, 7};
    RunSummary mixed = run_suite(cfg);
    for (std::size_t i = 1; i < mixed.mean_R.size(); ++i)
        CHECK(mixed.mean_R[i] >= mixed.mean_R[i - 1] - 1e-12);
}

TEST_CASE("suite output is byte-identical across reruns") {
    namespace fs = std::filesystem;
    RunConfig cfg = small_go_ucb();
    cfg.write_diag = true;

    fs::path base = fs::temp_directory_path() / "goucb_test_csv";
    fs::remove_all(base);
    cfg.out_dir = (base / "a").string();
    run_suite(cfg);
    cfg.out_dir = (base / "b").string();
    run_suite(cfg);

    for (const char* name : {"regret_go-ucb_f1.csv", "diag_go-ucb_f1_seed1.csv",
                             "diag_go-ucb_f1_seed2.csv"}) {
        std::string a = slurp(base / "a" / name);
        std::string b = slurp(base / "b" / name);
        CHECK(a == b);
        CHECK(a.find('\r') == std::string::npos);
    }

    std::string csv = slurp(base / "a" / "regret_go-ucb_f1.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "round,mean_R,halfwidth,R_seed1,R_seed2");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty())
            ++rows;
    CHECK(rows == 20);
    fs::remove_all(base);
}

TEST_CASE("alternating acquisition completes a full run") {
    RunConfig cfg = small_go_ucb();
    cfg.acq.mode = AcquisitionConfig::Mode::alternating;
    cfg.acq.inner_iters = 3;
    RunResult res = run_one(cfg, 4);
    CHECK(res.trace.rounds() == 20);
    for (std::size_t i = 1; i < res.trace.R.size(); ++i)
        CHECK(res.trace.R[i] >= res.trace.R[i - 1] - 1e-12);
    CHECK(res.cov_diag.det_identity_gap <= 1e-8);
}

TEST_CASE("results do not depend on the worker count") {
    namespace fs = std::filesystem;
    RunConfig cfg = small_go_ucb();
    fs::path base = fs::temp_directory_path() / "goucb_test_workers";
    fs::remove_all(base);

    setenv("GOUCB_WORKERS", "1", 1);
    cfg.out_dir = (base / "serial").string();
    run_suite(cfg);
    setenv("GOUCB_WORKERS", "4", 1);
    cfg.out_dir = (base / "parallel").string();
    run_suite(cfg);
    unsetenv("GOUCB_WORKERS");

    CHECK(slurp(base / "serial" / "regret_go-ucb_f1.csv") ==
          slurp(base / "parallel" / "regret_go-ucb_f1.csv"));
    fs::remove_all(base);
}

TEST_CASE("beta auto-calibration reaches the feasibility target") {
    RunConfig cfg = small_go_ucb();
    cfg.T = 30;
    double scale = calibrate_beta_scale(cfg, {101, 102}, 0.95, 1.25);
    CHECK(scale > 0.0);

    cfg.beta_scale = scale;
    int feasible = 0, total = 0;
    for (std::uint64_t seed : {std::uint64_t{1}, std::uint64_t{2}}) {
        RunResult res = run_one(cfg, seed);
        for (const auto& d : res.diag) {
            total += 1;
            feasible += d.feasible == 1 ? 1 : 0;
        }
    }
    CHECK(total == 60);
    CHECK(static_cast<double>(feasible) / total >= 0.80);
}

TEST_CASE("configuration errors are rejected") {
    RunConfig cfg;
    cfg.objective = "mystery";
    CHECK_THROWS_AS(run_one(cfg, 1), ConfigError);

    RunConfig bad;
    bad.seeds.clear();
    CHECK_THROWS_AS(run_suite(bad), ConfigError);

    RunConfig neg;
    neg.T = 0;
    CHECK_THROWS_AS(run_one(neg, 1), ConfigError);

    CHECK_THROWS_AS(parse_method("sgd"), ConfigError);
    CHECK(parse_method("gp-ei") == Method::gp_ei);
    CHECK(method_name(Method::random_search) == "random");
}

} // TEST_SUITE

