#include "goucb/ucb_engine.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace goucb {

CovarianceState::CovarianceState(int d_w, double lambda, int refresh_every)
    : d_w_(d_w), lambda_(lambda), refresh_every_(refresh_every) {
    if (d_w < 1)
        throw InputError("CovarianceState: dimension must be >= 1");
    if (lambda <= 0.0)
        throw InputError("CovarianceState: lambda must be > 0");
    sigma_ = Matrix::Identity(d_w, d_w) * lambda;
    sigma_inv_ = Matrix::Identity(d_w, d_w) / lambda;
    log_det_ = d_w * std::log(lambda);
    scratch_.resize(d_w);
}

double CovarianceState::inv_quadform(const Vector& g) const {
    scratch_.noalias() = sigma_inv_ * g;
    return g.dot(scratch_);
}

double CovarianceState::mahalanobis_sq(const Vector& a, const Vector& b) const {
    if (a.size() != d_w_ || b.size() != d_w_)
        throw InputError("mahalanobis_sq: dimension mismatch");
    scratch_ = a - b;
    return scratch_.dot(sigma_ * scratch_);
}

double CovarianceState::rank_one_update(const Vector& g) {
    if (g.size() != d_w_)
        throw InputError("rank_one_update: gradient has wrong length");
    if (!g.allFinite())
        throw InputError("rank_one_update: gradient has non-finite entries");

    Vector v = sigma_inv_ * g;
    double u_sq = g.dot(v);

    sigma_.noalias() += g * g.transpose();
    // Sherman-Morrison: (S + g g^T)^{-1} = S^{-1} - v v^T / (1 + u^2).
    sigma_inv_.noalias() -= (v * v.transpose()) / (1.0 + u_sq);
    log_det_ += std::log1p(u_sq);
    ++t_;

    if (refresh_every_ > 0 && ++since_refresh_ >= refresh_every_)
        refresh();
    return u_sq;
}

void CovarianceState::refresh() {
    Eigen::LLT<Matrix> llt(sigma_);
    if (llt.info() != Eigen::Success)
        throw NumericalError("CovarianceState: Cholesky refresh failed; "
                             "matrix lost positive definiteness");
    sigma_inv_ = llt.solve(Matrix::Identity(d_w_, d_w_));
    sigma_inv_ = (0.5 * (sigma_inv_ + sigma_inv_.transpose())).eval();
    log_det_ = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    since_refresh_ = 0;
}

double BetaSchedule::operator()(int t) const {
    if (scale <= 0.0)
        throw InputError("BetaSchedule: scale must be > 0");
    if (sigma < 0.0 || F <= 0.0 || mu <= 0.0 || d_w < 1 || T < 1)
        throw InputError("BetaSchedule: invalid constants");
    if (t < 1 || t > T)
        throw InputError("BetaSchedule: round out of range");
    double i = iota ? iota(t) : 1.0;
    double ip = iota_prime ? iota_prime(t) : 1.0;
    double ipp = iota_dprime ? iota_dprime(t) : 1.0;
    double dw = static_cast<double>(d_w);
    double term1 = dw * sigma * sigma * ip;
    double term2 = dw * F * F * i / mu;
    double term3 = dw * dw * dw * F * F * F * F * static_cast<double>(t) *
                   ipp * i * i / (mu * mu * static_cast<double>(T));
    return scale * (term1 + term2 + term3);
}

std::function<double(int)> BetaSchedule::scaled_log_factor(double c_g, int d_w,
                                                           double lambda) {
    return [c_g, d_w, lambda](int t) {
        return std::log1p(static_cast<double>(t) * c_g * c_g /
                          (static_cast<double>(d_w) * lambda));
    };
}

UcbEngine::UcbEngine(int d_w, double lambda, Vector w0, int refresh_every)
    : state_(d_w, lambda, refresh_every), w0_(std::move(w0)) {
    if (w0_.size() != d_w)
        throw InputError("UcbEngine: w0 has wrong length");
    sum_ = Vector::Zero(d_w);
}

double UcbEngine::add(ObservationRecord rec) {
    if (rec.grad.size() != state_.dim() || rec.w.size() != state_.dim())
        throw InputError("UcbEngine: record has wrong dimensions");
    if (!rec.grad.allFinite() || !rec.w.allFinite() ||
        !std::isfinite(rec.y) || !std::isfinite(rec.value))
        throw InputError("UcbEngine: record has non-finite entries");

    double u_sq = state_.rank_one_update(rec.grad);
    sum_ += rec.grad * (rec.grad.dot(rec.w) + rec.y - rec.value);
    u_sq_.push_back(u_sq);
    history_.push_back(std::move(rec));
    return u_sq;
}

Vector UcbEngine::center() const {
    if (history_.empty())
        return w0_;
    return state_.sigma_inv() * (sum_ + state_.lambda() * w0_);
}

Vector UcbEngine::center_dense() const {
    return solve_w_hat(history_, state_, w0_);
}

Vector solve_w_hat(const std::vector<ObservationRecord>& history,
                   const CovarianceState& state, const Vector& w0) {
    if (static_cast<int>(history.size()) != state.rounds())
        throw StateError("solve_w_hat: history length does not match the "
                         "number of absorbed updates");
    if (w0.size() != state.dim())
        throw InputError("solve_w_hat: w0 has wrong length");
    if (history.empty())
        return w0;

    Vector rhs = state.lambda() * w0;
    for (const auto& rec : history)
        rhs += rec.grad * (rec.grad.dot(rec.w) + rec.y - rec.value);

    Eigen::LLT<Matrix> llt(state.sigma());
    if (llt.info() != Eigen::Success)
        throw NumericalError("solve_w_hat: covariance is not positive definite");
    return llt.solve(rhs);
}

DiagnosticsReport covariance_diagnostics(const CovarianceState& state,
                                    const std::vector<ObservationRecord>& history,
                                    double c_g) {
    if (static_cast<int>(history.size()) != state.rounds())
        throw StateError("covariance_diagnostics: history length does not match "
                         "the number of absorbed updates");

    DiagnosticsReport rep;
    const int d = state.dim();
    const double lambda = state.lambda();
    const double t = static_cast<double>(history.size());

    for (const auto& rec : history)
        rep.max_grad_norm = std::max(rep.max_grad_norm, rec.grad.norm());
    rep.c_g_used = c_g > 0.0 ? c_g : rep.max_grad_norm;
    rep.c_g_stale = rep.max_grad_norm > rep.c_g_used * (1.0 + 1e-12);

    // Replay the updates densely, accumulating log(1 + u_i^2) with u_i taken
    // against the exact running covariance.
    Matrix sigma = Matrix::Identity(d, d) * lambda;
    double replay_log_det = d * std::log(lambda);
    for (const auto& rec : history) {
        Eigen::LLT<Matrix> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw NumericalError("covariance_diagnostics: replay factorization failed");
        double u_sq = rec.grad.dot(llt.solve(rec.grad));
        replay_log_det += std::log1p(u_sq);
        sigma.noalias() += rec.grad * rec.grad.transpose();
    }

    double gap = std::abs(state.log_det() - replay_log_det);
    rep.det_identity_gap = gap / std::max(std::abs(replay_log_det), 1e-12);

    if (history.empty()) {
        rep.log_det_lhs = rep.sum_sq_lhs = 0.0;
        rep.log_det_rhs = rep.sum_sq_rhs = 0.0;
        return rep;
    }

    double cg2 = rep.c_g_used * rep.c_g_used;
    double bound = d * std::log1p(t * cg2 / (d * lambda));

    Eigen::LLT<Matrix> llt_final(sigma);
    if (llt_final.info() != Eigen::Success)
        throw NumericalError("covariance_diagnostics: final factorization failed");
    double final_log_det = 2.0 * Matrix(llt_final.matrixL())
                                     .diagonal()
                                     .array()
                                     .log()
                                     .sum();
    rep.log_det_lhs = final_log_det - d * std::log(lambda);
    rep.log_det_rhs = bound;
    rep.log_det_bound_ok = rep.log_det_lhs <= bound * (1.0 + 1e-12) + 1e-12;

    double sum_sq = 0.0;
    for (const auto& rec : history)
        sum_sq += rec.grad.dot(llt_final.solve(rec.grad));
    rep.sum_sq_lhs = sum_sq;
    rep.sum_sq_rhs = 2.0 * bound;
    rep.sum_sq_bound_ok = sum_sq <= 2.0 * bound * (1.0 + 1e-12) + 1e-12;
    return rep;
}

} // namespace goucb
