#include "goucb/gp.hpp"

#include <Eigen/LU>
#include <doctest.h>

using namespace goucb;

namespace {

Dataset toy_1d(Rng& rng, int m, double lo = -2.0, double hi = 2.0) {
    Dataset d;
    for (int i = 0; i < m; ++i) {
        Vector x = Vector::Constant(1, rng.uniform(lo, hi));
        d.push(x, std::sin(2.0 * x[0]) + 0.3 * x[0]);
    }
    return d;
}

double matern52(double r, double ell, double s2) {
    double s = std::sqrt(5.0) * r / ell;
    return s2 * (1.0 + s + 5.0 * r * r / (3.0 * ell * ell)) * std::exp(-s);
}

} // namespace

TEST_SUITE("gp") {

TEST_CASE("posterior interpolates training data as noise vanishes") {
    Rng rng(1);
    Dataset d = toy_1d(rng, 8);
    GPConfig cfg;
    cfg.noise_var = 1e-10;
    auto [mean, var] = gp_posterior(d, cfg, d.x[3]);
    CHECK(mean == doctest::Approx(d.y[3]).epsilon(1e-5));
    CHECK(var <= 1e-6);
}

TEST_CASE("posterior reverts to the prior far from data") {
    Rng rng(2);
    Dataset d = toy_1d(rng, 6);
    GPConfig cfg;
    auto [mean, var] = gp_posterior(d, cfg, Vector::Constant(1, 40.0));
    CHECK(std::abs(mean) <= 1e-6);
    CHECK(std::abs(var - cfg.signal_var) <= 1e-6);
}

TEST_CASE("posterior matches a dense direct-inverse computation") {
    Rng rng(3);
    Dataset d = toy_1d(rng, 5);
    GPConfig cfg;
    cfg.length_scale = 0.8;
    cfg.signal_var = 1.3;
    cfg.noise_var = 0.05;

    Vector xq = Vector::Constant(1, 0.37);
    auto [mean, var] = gp_posterior(d, cfg, xq);

    const int m = 5;
    Matrix K(m, m);
    Vector ks(m), y(m);
    for (int i = 0; i < m; ++i) {
        y[i] = d.y[i];
        ks[i] = matern52(std::abs(d.x[i][0] - xq[0]), cfg.length_scale,
                         cfg.signal_var);
        for (int j = 0; j < m; ++j)
            K(i, j) = matern52(std::abs(d.x[i][0] - d.x[j][0]),
                               cfg.length_scale, cfg.signal_var) +
                      (i == j ? cfg.noise_var : 0.0);
    }
    Matrix Kinv = K.inverse();
    double mean_ref = ks.dot(Kinv * y);
    double var_ref = cfg.signal_var - ks.dot(Kinv * ks);
    CHECK(mean == doctest::Approx(mean_ref).epsilon(1e-8));
    CHECK(var == doctest::Approx(var_ref).epsilon(1e-8));
}

TEST_CASE("posterior variance is non-negative and shrinks with data") {
    Rng rng(4);
    GPConfig cfg;
    for (int instance = 0; instance < 5; ++instance) {
        Dataset d = toy_1d(rng, 6);
        GaussianProcess gp;
        Vector y = Eigen::Map<const Vector>(d.y.data(), d.y.size());
        gp.fit(d.x, y, cfg);

        std::vector<Vector> probes;
        std::vector<double> var_before;
        for (int i = 0; i < 20; ++i) {
            Vector xq = Vector::Constant(1, rng.uniform(-2.5, 2.5));
            auto [m0, v0] = gp.query(xq);
            (void)m0;
            CHECK(v0 >= 0.0);
            probes.push_back(xq);
            var_before.push_back(v0);
        }

        Dataset d2 = d;
        Vector extra = Vector::Constant(1, rng.uniform(-2.0, 2.0));
        d2.push(extra, std::sin(2.0 * extra[0]) + 0.3 * extra[0]);
        GaussianProcess gp2;
        Vector y2 = Eigen::Map<const Vector>(d2.y.data(), d2.y.size());
        gp2.fit(d2.x, y2, cfg);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            auto [m1, v1] = gp2.query(probes[i]);
            (void)m1;
            CHECK(v1 <= var_before[i] + 1e-9);
        }
    }
}

TEST_CASE("batched queries agree with scalar queries") {
    Rng rng(5);
    Dataset d = toy_1d(rng, 7);
    GPConfig cfg;
    GaussianProcess gp;
    gp.fit(d.x, Eigen::Map<const Vector>(d.y.data(), d.y.size()), cfg);

    Matrix Xq(1, 9);
    for (int j = 0; j < 9; ++j)
        Xq(0, j) = -2.0 + 0.5 * j;
    Vector mean, var;
    gp.query_batch(Xq, mean, var);
    for (int j = 0; j < 9; ++j) {
        auto [m1, v1] = gp.query(Xq.col(j));
        CHECK(mean[j] == doctest::Approx(m1).epsilon(1e-12));
        CHECK(var[j] == doctest::Approx(v1).epsilon(1e-12));
    }
}

TEST_CASE("acquisition closed forms behave at the boundaries") {
    GPConfig ei;
    ei.acq = GPConfig::Acq::ei;
    GPConfig pi;
    pi.acq = GPConfig::Acq::pi;
    GPConfig ucb;

    // EI at a noiseless training point (zero variance, mean = best) is zero.
    CHECK(acquisition_value(ei, 1.0, 0.0, 1.0) == 0.0);
    CHECK(acquisition_value(pi, 0.5, 0.0, 1.0) == 0.0);

    Rng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        double mean = rng.uniform(-3.0, 3.0);
        double var = rng.uniform(0.0, 2.0);
        double best = rng.uniform(-3.0, 3.0);
        CHECK(acquisition_value(ei, mean, var, best) >= 0.0);
        double p = acquisition_value(pi, mean, var, best);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }

    // kappa = 0 reduces UCB to the posterior mean.
    ucb.kappa = 0.0;
    CHECK(acquisition_value(ucb, 0.7, 1.3, 0.0) == doctest::Approx(0.7));
}

TEST_CASE("mean-only selection gravitates to the best observed basin") {
    GPConfig cfg;
    cfg.kappa = 0.0;
    Dataset d;
    for (int i = 0; i <= 10; ++i) {
        double x = -2.0 + 0.4 * i;
        d.push(Vector::Constant(1, x), -(x - 1.0) * (x - 1.0));
    }
    Box box = Box::cube(1, -2.0, 2.0);
    Vector x = gp_select(d, cfg, box, 17);
    CHECK(std::abs(x[0] - 1.0) <= 0.3);
}

TEST_CASE("gp-ucb solves the 1-d quadratic in 30 evaluations") {
    GPConfig cfg;
    cfg.noise_var = 1e-6;  // noiseless oracle, jitter only
    Box box = Box::cube(1, -5.0, 5.0);
    auto f = [](const Vector& x) { return -(x[0] - 1.0) * (x[0] - 1.0); };

    Dataset d = sample_uniform(box, 3, 915);
    for (const auto& x : d.x)
        d.y.push_back(f(x));
    for (int t = 3; t < 30; ++t) {
        Vector x = gp_select(d, cfg, box, derive_seed(4242, t));
        d.push(x, f(x));
    }
    double best_x = d.x[0][0];
    double best_y = d.y[0];
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d.y[i] > best_y) {
            best_y = d.y[i];
            best_x = d.x[i][0];
        }
    CHECK(std::abs(best_x - 1.0) <= 0.05);
}

TEST_CASE("degenerate kernels fail with a jitter hint") {
    Dataset d;
    for (int i = 0; i < 4; ++i)
        d.push(Vector::Constant(1, 1.0), 2.0);
    GPConfig cfg;
    cfg.noise_var = 1e-320;
    CHECK_THROWS_AS(gp_posterior(d, cfg, Vector::Constant(1, 0.0)),
                    NumericalError);
}

TEST_CASE("selection is deterministic per seed") {
    Rng rng(7);
    Dataset d = toy_1d(rng, 10);
    GPConfig cfg;
    Box box = Box::cube(1, -2.0, 2.0);
    Vector a = gp_select(d, cfg, box, 303);
    Vector b = gp_select(d, cfg, box, 303);
    CHECK((a.array() == b.array()).all());
}

} // TEST_SUITE

