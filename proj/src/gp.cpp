#include "goucb/gp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace goucb {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }
double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double acquisition_impl(GPConfig::Acq acq, double kappa, double mean,
                        double var, double best_y) {
    double sd = std::sqrt(std::max(0.0, var));
    switch (acq) {
    case GPConfig::Acq::ucb:
        return mean + kappa * sd;
    case GPConfig::Acq::ei: {
        double delta = mean - best_y;
        if (sd < 1e-12)
            return std::max(0.0, delta);
        double z = delta / sd;
        return delta * norm_cdf(z) + sd * norm_pdf(z);
    }
    case GPConfig::Acq::pi: {
        double delta = mean - best_y;
        if (sd < 1e-12)
            return delta > 0.0 ? 1.0 : 0.0;
        return norm_cdf(delta / sd);
    }
    }
    return 0.0;
}

} // namespace

double acquisition_value(const GPConfig& cfg, double mean, double var,
                         double best_y) {
    return acquisition_impl(cfg.acq, cfg.kappa, mean, var, best_y);
}

double GaussianProcess::kernel(const Vector& a, const Vector& b) const {
    double r = (a - b).norm() / cfg_.length_scale;
    double s = std::sqrt(5.0) * r;
    return cfg_.signal_var * (1.0 + s + 5.0 * r * r / 3.0) * std::exp(-s);
}

void GaussianProcess::fit(const std::vector<Vector>& X, const Vector& y,
                          const GPConfig& cfg) {
    cfg.validate();
    if (X.empty() || static_cast<Eigen::Index>(X.size()) != y.size())
        throw InputError("GaussianProcess: empty or inconsistent training set");
    cfg_ = cfg;
    train_ = X;

    const int m = static_cast<int>(X.size());
    Matrix K(m, m);
    for (int i = 0; i < m; ++i) {
        K(i, i) = cfg_.signal_var + cfg_.noise_var;
        for (int j = i + 1; j < m; ++j) {
            double k = kernel(X[i], X[j]);
            K(i, j) = k;
            K(j, i) = k;
        }
    }

    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success)
        throw NumericalError("GaussianProcess: Cholesky factorization failed; "
                             "increase the noise variance (jitter)");
    chol_ = llt.matrixL();
    alpha_ = llt.solve(y);
}

std::pair<double, double> GaussianProcess::query(const Vector& x) const {
    const int m = size();
    Vector ks(m);
    for (int i = 0; i < m; ++i)
        ks[i] = kernel(train_[i], x);
    double mean = ks.dot(alpha_);
    Vector v = chol_.triangularView<Eigen::Lower>().solve(ks);
    double var = cfg_.signal_var - v.squaredNorm();
    return {mean, std::max(0.0, var)};
}

void GaussianProcess::query_batch(const Matrix& Xq, Vector& mean,
                                  Vector& var) const {
    const int m = size();
    const int q = static_cast<int>(Xq.cols());
    Matrix Ks(m, q);
    for (int j = 0; j < q; ++j) {
        Vector x = Xq.col(j);
        for (int i = 0; i < m; ++i)
            Ks(i, j) = kernel(train_[i], x);
    }
    mean = Ks.transpose() * alpha_;
    chol_.triangularView<Eigen::Lower>().solveInPlace(Ks);
    var = (cfg_.signal_var - Ks.colwise().squaredNorm().array())
              .max(0.0)
              .matrix()
              .transpose();
}

std::pair<double, double> gp_posterior(const Dataset& data, const GPConfig& cfg,
                                       const Vector& x) {
    if (data.size() == 0 || data.y.size() != data.x.size())
        throw InputError("gp_posterior: dataset is empty or has unset "
                         "observations");
    GaussianProcess gp;
    gp.fit(data.x, Eigen::Map<const Vector>(data.y.data(), data.y.size()), cfg);
    return gp.query(x);
}

Vector gp_select(const Dataset& data, const GPConfig& cfg, const Box& box,
                 std::uint64_t seed) {
    cfg.validate();
    if (data.size() == 0 || data.y.size() != data.x.size())
        throw InputError("gp_select: dataset is empty or has unset observations");

    const int d = box.dim();
    const int m = static_cast<int>(data.size());

    // Rescale inputs to the unit cube and standardize observations so the
    // fixed kernel hyperparameters act on normalized data.
    auto to_unit = [&](const Vector& x) {
        Vector u(d);
        for (int i = 0; i < d; ++i) {
            double w = box.width(i);
            u[i] = w > 0.0 ? (x[i] - box.lo[i]) / w : 0.0;
        }
        return u;
    };
    std::vector<Vector> U(m);
    for (int i = 0; i < m; ++i)
        U[i] = to_unit(data.x[i]);

    double mean_y = std::accumulate(data.y.begin(), data.y.end(), 0.0) / m;
    double var_y = 0.0;
    for (double yi : data.y)
        var_y += (yi - mean_y) * (yi - mean_y);
    double sd_y = std::sqrt(var_y / std::max(1, m - 1));
    if (sd_y < 1e-12)
        sd_y = 1.0;
    Vector ys(m);
    for (int i = 0; i < m; ++i)
        ys[i] = (data.y[i] - mean_y) / sd_y;

    GaussianProcess gp;
    gp.fit(U, ys, cfg);
    double best_y = ys.maxCoeff();

    Rng rng(seed);
    Box unit = Box::cube(d, 0.0, 1.0);

    // Stage 1: uniform candidates, scored in one batch.
    Matrix cand(d, cfg.candidate_count);
    for (int j = 0; j < cfg.candidate_count; ++j)
        cand.col(j) = unit.sample(rng);
    Vector c_mean, c_var;
    gp.query_batch(cand, c_mean, c_var);
    std::vector<double> score(cfg.candidate_count);
    for (int j = 0; j < cfg.candidate_count; ++j)
        score[j] = acquisition_impl(cfg.acq, cfg.kappa, c_mean[j], c_var[j],
                                    best_y);

    const int starts = std::min(cfg.refine_starts, cfg.candidate_count);
    std::vector<int> order(cfg.candidate_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    // Stage 2: batched coordinate-search refinement of the top candidates.
    Matrix chain(d, starts);
    Vector chain_val(starts);
    Matrix step(d, starts);
    for (int s = 0; s < starts; ++s) {
        chain.col(s) = cand.col(order[s]);
        chain_val[s] = score[order[s]];
        step.col(s).setConstant(0.4);
    }

    Matrix proposal(d, starts);
    std::vector<int> coord(starts);
    Vector p_mean, p_var;
    for (int it = 0; it < cfg.refine_iters; ++it) {
        for (int s = 0; s < starts; ++s) {
            int k = rng.uniform_int(d);
            double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            coord[s] = k;
            proposal.col(s) = chain.col(s);
            proposal(k, s) = std::min(
                1.0, std::max(0.0, chain(k, s) + sign * step(k, s)));
        }
        gp.query_batch(proposal, p_mean, p_var);
        for (int s = 0; s < starts; ++s) {
            double v = acquisition_impl(cfg.acq, cfg.kappa, p_mean[s], p_var[s],
                                        best_y);
            int k = coord[s];
            if (v > chain_val[s] && proposal(k, s) != chain(k, s)) {
                chain(k, s) = proposal(k, s);
                chain_val[s] = v;
                step(k, s) = std::min(step(k, s) * 1.8, 1.0);
            } else {
                step(k, s) *= 0.6;
            }
        }
    }

    int best = 0;
    for (int s = 1; s < starts; ++s)
        if (chain_val[s] > chain_val[best])
            best = s;

    Vector u = chain.col(best);
    Vector x(d);
    for (int i = 0; i < d; ++i)
        x[i] = box.lo[i] + u[i] * box.width(i);
    return x;
}

} // namespace goucb
