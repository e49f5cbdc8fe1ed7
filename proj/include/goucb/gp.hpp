#pragma once

#include "goucb/box.hpp"
#include "goucb/phase1.hpp"
#include "goucb/types.hpp"

#include <cstdint>
#include <utility>

namespace goucb {

/// Matern 5/2 Gaussian-process settings for the baseline optimizers.
/// Hyperparameters are fixed; length_scale applies to whatever coordinates
/// the caller supplies (gp_select rescales the box to the unit cube first).
struct GPConfig {
    enum class Acq { ucb, ei, pi };

    double length_scale = 1.0;
    double signal_var = 1.0;
    double noise_var = 1e-2;
    Acq acq = Acq::ucb;
    double kappa = 2.0;
    int candidate_count = 256;
    int refine_starts = 32;  // mirrors the default optimistic-search budget
    int refine_iters = 50;

    void validate() const {
        if (length_scale <= 0.0 || signal_var <= 0.0 || noise_var <= 0.0)
            throw InputError("GPConfig: kernel parameters must be > 0");
        if (kappa < 0.0)
            throw InputError("GPConfig: kappa must be >= 0");
        if (candidate_count < 1 || refine_starts < 1 || refine_iters < 1)
            throw InputError("GPConfig: counts must be >= 1");
    }
};

/// Zero-mean GP regression with a Matern 5/2 kernel, factored once per fit.
class GaussianProcess {
public:
    void fit(const std::vector<Vector>& X, const Vector& y, const GPConfig& cfg);

    /// Posterior mean and variance at one point.
    std::pair<double, double> query(const Vector& x) const;

    /// Batched posterior for a set of points (columns of Xq).
    void query_batch(const Matrix& Xq, Vector& mean, Vector& var) const;

    int size() const { return static_cast<int>(train_.size()); }

private:
    double kernel(const Vector& a, const Vector& b) const;

    std::vector<Vector> train_;
    GPConfig cfg_;
    Matrix chol_;       // lower factor of K + noise I
    Vector alpha_;      // (K + noise I)^{-1} y
};

/// Posterior mean/variance of the zero-mean GP at x. Cholesky failure raises
/// a NumericalError suggesting a larger noise/jitter value.
std::pair<double, double> gp_posterior(const Dataset& data, const GPConfig& cfg,
                                       const Vector& x);

/// Acquisition score at a posterior (mean, var) given the best observed
/// value: UCB = mean + kappa * sd, or the closed-form EI / PI.
double acquisition_value(const GPConfig& cfg, double mean, double var,
                         double best_y);

/// Next query point maximizing the configured acquisition over uniform
/// candidates plus batched coordinate-search refinement. Observations are
/// standardized internally and the box is rescaled to the unit cube, so the
/// fixed hyperparameters act on normalized data. Deterministic per seed.
Vector gp_select(const Dataset& data, const GPConfig& cfg, const Box& box,
                 std::uint64_t seed);

} // namespace goucb
