#pragma once

#include "goucb/types.hpp"

#include <functional>
#include <vector>

namespace goucb {

/// Regularized gradient-outer-product covariance
///   Sigma_t = lambda I + sum_i g_i g_i^T
/// with its inverse maintained by Sherman-Morrison rank-one updates and a
/// dense re-factorization every `refresh_every` updates to cap float drift
/// (0 disables refresh). The log-determinant is kept alongside.
class CovarianceState {
public:
    CovarianceState(int d_w, double lambda, int refresh_every = 64);

    int dim() const { return d_w_; }
    double lambda() const { return lambda_; }
    /// Number of rank-one updates absorbed.
    int rounds() const { return t_; }

    const Matrix& sigma() const { return sigma_; }
    const Matrix& sigma_inv() const { return sigma_inv_; }
    double log_det() const { return log_det_; }

    /// Absorbs g g^T. Returns u^2 = g^T Sigma^{-1} g evaluated before the
    /// update.
    double rank_one_update(const Vector& g);

    /// g^T Sigma^{-1} g using the maintained inverse.
    double inv_quadform(const Vector& g) const;

    /// (a - b)^T Sigma (a - b).
    double mahalanobis_sq(const Vector& a, const Vector& b) const;

    /// Dense re-factorization of the inverse and log-determinant.
    void refresh();

private:
    int d_w_;
    double lambda_;
    int refresh_every_;
    int since_refresh_ = 0;
    int t_ = 0;
    Matrix sigma_;
    Matrix sigma_inv_;
    double log_det_;
    mutable Vector scratch_;
};

/// One optimistic-exploration round: query point, noisy observation, the
/// parameter estimate the round used, and the model value/gradient at it.
struct ObservationRecord {
    Vector x;
    double y = 0.0;
    Vector w;
    Vector grad;
    double value = 0.0;
};

/// Constants of the smoothness/geometry assumptions. They scale the
/// confidence radius and the covariance diagnostics; the optimization loop itself
/// never depends on them.
struct GeometryConstants {
    double c_g = 1.0;
    double c_h = 1.0;
    double F = 1.0;
    double mu = 1.0;
    double tau = 1.0;
    double gamma = 1.0;
    double zeta = 1.0;

    void validate() const {
        if (c_g <= 0 || c_h <= 0 || F <= 0 || mu <= 0 || tau <= 0 || zeta <= 0)
            throw InputError("GeometryConstants: all constants must be positive");
        if (!(gamma > 0.0 && gamma <= 2.0))
            throw InputError("GeometryConstants: gamma must lie in (0, 2]");
    }
};

/// Confidence radius schedule
///   beta_t = c * (d_w sigma^2 i' + d_w F^2 i / mu + d_w^3 F^4 t i'' i^2 / (mu^2 T)).
/// The log factors i, i', i'' default to the constant 1 and may be replaced
/// with slowly growing functions of the round index.
struct BetaSchedule {
    double scale = 1.0;
    double sigma = 0.1;
    double F = 1.0;
    double mu = 1.0;
    int d_w = 1;
    int T = 1;
    std::function<double(int)> iota;
    std::function<double(int)> iota_prime;
    std::function<double(int)> iota_dprime;

    double operator()(int t) const;

    /// log(1 + t c_g^2 / (d_w lambda))-shaped factor for callers that want
    /// non-constant log terms.
    static std::function<double(int)> scaled_log_factor(double c_g, int d_w,
                                                        double lambda);
};

/// Ellipsoid {w : (w - center)^T Sigma (w - center) <= radius}.
struct ConfidenceBall {
    Vector center;
    double radius = 0.0;
    const CovarianceState* shape = nullptr;

    double membership(const Vector& w) const {
        return shape->mahalanobis_sq(w, center);
    }
    bool contains(const Vector& w, double slack = 0.0) const {
        return membership(w) <= radius + slack;
    }
};

/// Consistency report for the covariance identities. Everything is
/// recomputed densely from the recorded gradients, independent of the
/// engine's incremental bookkeeping.
struct DiagnosticsReport {
    double det_identity_gap = 0.0;  // relative gap, maintained vs replayed
    bool log_det_bound_ok = true;   // det growth vs d_w log(1 + t c_g^2/(d_w l))
    bool sum_sq_bound_ok = true;    // sum of g^T Sigma_t^{-1} g vs twice that
    double log_det_lhs = 0.0;
    double log_det_rhs = 0.0;
    double sum_sq_lhs = 0.0;
    double sum_sq_rhs = 0.0;
    double c_g_used = 0.0;
    double max_grad_norm = 0.0;
    bool c_g_stale = false;         // an observed gradient exceeded c_g_used
};

/// Online state for the optimistic phase: covariance, observation history,
/// and the cached right-hand side of the closed-form center solve
///   w_hat = Sigma^{-1} (sum_i g_i (g_i . w_i + y_i - f_i) + lambda w0).
class UcbEngine {
public:
    UcbEngine(int d_w, double lambda, Vector w0, int refresh_every = 64);

    const CovarianceState& state() const { return state_; }
    const std::vector<ObservationRecord>& history() const { return history_; }
    const std::vector<double>& u_sq_log() const { return u_sq_; }
    const Vector& w0() const { return w0_; }

    /// Absorbs one round; returns u^2 of its gradient.
    double add(ObservationRecord rec);

    /// Center estimate in O(d_w^2) via the maintained inverse and cached sum.
    Vector center() const;

    /// Full recompute from history (dense factorization); test oracle for
    /// center().
    Vector center_dense() const;

    ConfidenceBall ball(const Vector& center, double radius) const {
        if (radius <= 0.0)
            throw InputError("ball: radius must be positive");
        return ConfidenceBall{center, radius, &state_};
    }

private:
    CovarianceState state_;
    std::vector<ObservationRecord> history_;
    std::vector<double> u_sq_;
    Vector sum_;
    Vector w0_;
};

/// Closed-form center from an explicit history against a state that absorbed
/// exactly those gradients, solved densely. Empty history returns w0
/// unchanged.
Vector solve_w_hat(const std::vector<ObservationRecord>& history,
                   const CovarianceState& state, const Vector& w0);

/// Dense replay of the recorded gradients checking the determinant identity
/// and the two logarithmic growth bounds. c_g <= 0 means "use the maximum
/// observed gradient norm".
DiagnosticsReport covariance_diagnostics(const CovarianceState& state,
                                    const std::vector<ObservationRecord>& history,
                                    double c_g = 0.0);

} // namespace goucb
