#include "goucb/acquisition.hpp"

#include <cmath>
#include <limits>

namespace goucb {

namespace {

// ucb_value with reusable gradient buffer for the search loops.
class LinearizedValue {
public:
    LinearizedValue(const SurrogateModel& model, const ConfidenceBall& ball)
        : model_(model), ball_(ball), grad_(model.param_dim()) {}

    double operator()(const Vector& x) {
        double value = 0.0;
        model_.eval_into(ball_.center, x, value, grad_);
        double u_sq = std::max(0.0, ball_.shape->inv_quadform(grad_));
        return value + std::sqrt(ball_.radius * u_sq);
    }

private:
    const SurrogateModel& model_;
    const ConfidenceBall& ball_;
    Vector grad_;
};

// Adaptive coordinate random search: one proposal per iteration, accepted
// when it improves, with per-coordinate step expansion/contraction.
template <typename Score>
double coordinate_ascent(Score&& score, const Box& box, Vector& x, double val,
                         Vector& step, Rng& rng, int iters) {
    const int d = box.dim();
    Vector x2 = x;
    for (int it = 0; it < iters; ++it) {
        int k = rng.uniform_int(d);
        double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        double proposed = std::min(box.hi[k], std::max(box.lo[k], x[k] + sign * step[k]));
        if (proposed == x[k]) {
            step[k] *= 0.6;
            continue;
        }
        x2 = x;
        x2[k] = proposed;
        double v2 = score(x2);
        if (v2 > val) {
            x[k] = proposed;
            val = v2;
            step[k] = std::min(step[k] * 1.8, box.width(k));
        } else {
            step[k] *= 0.6;
        }
    }
    return val;
}

// Finite-difference gradient ascent in x for callers that prefer it over the
// derivative-free default.
template <typename Score>
double fd_gradient_ascent(Score&& score, const Box& box, Vector& x, double val,
                          double fd_step, double init_step, int iters) {
    const int d = box.dim();
    Vector grad(d), x2(d);
    double step = init_step;
    for (int it = 0; it < iters; ++it) {
        for (int k = 0; k < d; ++k) {
            double h = fd_step * std::max(1.0, std::abs(x[k]));
            double xu = std::min(box.hi[k], x[k] + h);
            double xd = std::max(box.lo[k], x[k] - h);
            x2 = x;
            x2[k] = xu;
            double up = score(x2);
            x2[k] = xd;
            double dn = score(x2);
            grad[k] = xu > xd ? (up - dn) / (xu - xd) : 0.0;
        }
        double norm = grad.norm();
        if (norm == 0.0)
            break;
        x2 = box.clamp(x + (step / norm) * grad);
        double v2 = score(x2);
        if (v2 > val) {
            x = x2;
            val = v2;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    return val;
}

Vector initial_steps(const Box& box, double frac) {
    Vector s(box.dim());
    for (int i = 0; i < box.dim(); ++i)
        s[i] = frac * box.width(i);
    return s;
}

// Maximizer of the linearized model over the ball at a fixed x, pulled a hair
// inside the boundary so membership survives rounding.
Vector linearized_argmax_w(const SurrogateModel& model, const ConfidenceBall& ball,
                           const Vector& x) {
    ModelEval ev = model.eval(ball.center, x);
    double u_sq = std::max(0.0, ball.shape->inv_quadform(ev.grad));
    if (u_sq < 1e-300)
        return ball.center;
    Vector dir = ball.shape->sigma_inv() * ev.grad;
    Vector w = ball.center +
               std::sqrt(ball.radius / u_sq) * (1.0 - 1e-12) * dir;
    return project_to_ball(ball, w);
}

} // namespace

double ucb_value(const SurrogateModel& model, const ConfidenceBall& ball,
                 const Vector& x) {
    ModelEval ev = model.eval(ball.center, x);
    double u_sq = std::max(0.0, ball.shape->inv_quadform(ev.grad));
    return ev.value + std::sqrt(ball.radius * u_sq);
}

Vector project_to_ball(const ConfidenceBall& ball, const Vector& w) {
    double q = ball.membership(w);
    if (q <= ball.radius)
        return w;
    double s = std::sqrt(ball.radius / q) * (1.0 - 1e-12);
    return ball.center + s * (w - ball.center);
}

SelectResult select_point(const SurrogateModel& model, const ConfidenceBall& ball,
                          const Box& box, const AcquisitionConfig& cfg,
                          std::uint64_t seed) {
    cfg.validate();
    if (ball.shape == nullptr)
        throw InputError("select_point: ball has no covariance state");

    SelectResult best;
    best.ucb = -std::numeric_limits<double>::infinity();

    if (cfg.mode == AcquisitionConfig::Mode::linearized_ucb) {
        LinearizedValue score(model, ball);
        for (int s = 0; s < cfg.outer_starts; ++s) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            Vector x = box.sample(rng);
            double val = score(x);
            Vector step = initial_steps(box, cfg.x_step_frac);
            if (cfg.x_search == AcquisitionConfig::XSearch::coordinate) {
                val = coordinate_ascent(score, box, x, val, step, rng,
                                        cfg.outer_iters);
            } else {
                double mean_w = 0.0;
                for (int i = 0; i < box.dim(); ++i)
                    mean_w += box.width(i);
                mean_w /= box.dim();
                val = fd_gradient_ascent(score, box, x, val, cfg.fd_step,
                                         cfg.x_step_frac * mean_w,
                                         cfg.outer_iters);
            }
            if (val > best.ucb) {
                best.ucb = val;
                best.x = x;
            }
        }
        best.w = linearized_argmax_w(model, ball, best.x);
        return best;
    }

    // Alternating mode: coordinate steps in x at fixed w, then projected
    // gradient ascent in w over the ball at fixed x; the score is the joint
    // f_x(w).
    Vector grad(model.param_dim());
    for (int s = 0; s < cfg.outer_starts; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        Vector x = box.sample(rng);
        Vector w = ball.center;
        double val = model.value(w, x);
        Vector step = initial_steps(box, cfg.x_step_frac);
        double w_scale = 1.0;
        const double w_step = std::sqrt(ball.radius) / 8.0;

        for (int it = 0; it < cfg.outer_iters; ++it) {
            auto score_x = [&](const Vector& xq) { return model.value(w, xq); };
            val = coordinate_ascent(score_x, box, x, val, step, rng, 1);

            for (int j = 0; j < cfg.inner_iters; ++j) {
                double value = 0.0;
                model.eval_into(w, x, value, grad);
                double g_sigma = std::sqrt(
                    std::max(1e-300, ball.shape->mahalanobis_sq(
                                         grad, Vector::Zero(grad.size()))));
                Vector w2 = project_to_ball(
                    ball, w + (w_scale * w_step / g_sigma) * grad);
                double v2 = model.value(w2, x);
                if (v2 > val) {
                    w = std::move(w2);
                    val = v2;
                } else {
                    w_scale *= 0.5;
                }
            }
        }
        if (val > best.ucb) {
            best.ucb = val;
            best.x = x;
            best.w = w;
        }
    }
    return best;
}

} // namespace goucb
