#include "goucb/phase1.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace goucb {

Dataset sample_uniform(const Box& box, int n, std::uint64_t seed) {
    if (n < 1)
        throw InputError("sample_uniform: n must be >= 1");
    Rng rng(seed);
    Dataset data;
    data.x.reserve(n);
    for (int j = 0; j < n; ++j)
        data.x.push_back(box.sample(rng));
    return data;
}

namespace {

struct RestartResult {
    Vector w;
    double final_loss = std::numeric_limits<double>::infinity();
    bool ok = false;
    int fail_iter = -1;
};

// Mean squared error and its gradient at w.
double mse_and_grad(const SurrogateModel& model, const Dataset& data,
                    const Vector& w, Vector& grad_out, Vector& scratch) {
    const double inv_n = 1.0 / static_cast<double>(data.size());
    grad_out.setZero();
    double loss = 0.0;
    double value = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        model.eval_into(w, data.x[j], value, scratch);
        double r = value - data.y[j];
        loss += r * r;
        grad_out += (2.0 * r) * scratch;
    }
    grad_out *= inv_n;
    return loss * inv_n;
}

RestartResult run_descent(const SurrogateModel& model, const Dataset& data,
                          const Phase1Config& cfg, const Vector& init,
                          double base_step) {
    RestartResult res;
    Vector w = init;
    Vector grad(model.param_dim());
    Vector scratch(model.param_dim());

    double step = base_step;
    for (int iter = 0; iter < cfg.gd_iters; ++iter) {
        if (iter > 0 && cfg.decay_every > 0 && iter % cfg.decay_every == 0)
            step *= cfg.lr_decay;
        double loss = mse_and_grad(model, data, w, grad, scratch);
        if (!std::isfinite(loss) || !grad.allFinite()) {
            res.fail_iter = iter;
            return res;
        }
        w -= step * grad;
        if (cfg.clamp_to_box)
            w = model.param_box().clamp(std::move(w));
    }

    double final_loss = mse_and_grad(model, data, w, grad, scratch);
    if (!std::isfinite(final_loss)) {
        res.fail_iter = cfg.gd_iters;
        return res;
    }
    res.w = std::move(w);
    res.final_loss = final_loss;
    res.ok = true;
    return res;
}

} // namespace

FitReport fit_report(const SurrogateModel& model, const Dataset& data,
                     const Phase1Config& cfg, std::uint64_t seed) {
    cfg.validate();
    if (data.size() == 0)
        throw InputError("fit: dataset is empty");
    if (data.y.size() != data.x.size())
        throw InputError("fit: dataset has unset observations");
    for (const auto& xi : data.x)
        if (xi.size() != model.input_dim())
            throw InputError("fit: design point has wrong dimension");
    for (double yi : data.y)
        if (!std::isfinite(yi))
            throw InputError("fit: observations must be finite");

    FitReport report;
    report.final_loss = std::numeric_limits<double>::infinity();
    int last_fail_iter = -1;

    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        Vector init = model.param_box().sample(rng);

        RestartResult res;
        double step = cfg.gd_step;
        for (int attempt = 0; attempt < 4; ++attempt) {
            res = run_descent(model, data, cfg, init, step);
            if (res.ok)
                break;
            step *= 0.1;
        }
        if (!res.ok) {
            ++report.failed_restarts;
            last_fail_iter = res.fail_iter;
            continue;
        }
        if (res.final_loss < report.final_loss) {
            report.final_loss = res.final_loss;
            report.w = std::move(res.w);
            report.best_restart = r;
        }
    }

    if (report.best_restart < 0)
        throw NumericalError("fit: loss became non-finite in every restart "
                             "(last failure at iteration " +
                             std::to_string(last_fail_iter) + ")");
    return report;
}

Vector fit(const SurrogateModel& model, const Dataset& data,
           const Phase1Config& cfg, std::uint64_t seed) {
    return fit_report(model, data, cfg, seed).w;
}

double expected_loss(const SurrogateModel& model, const Box& box,
                     const Vector& w, const Vector& w_ref, int mc_samples,
                     std::uint64_t seed) {
    if (mc_samples < 1)
        throw InputError("expected_loss: mc_samples must be >= 1");
    Rng rng(seed);
    double acc = 0.0;
    for (int s = 0; s < mc_samples; ++s) {
        Vector x = box.sample(rng);
        double d = model.value(w, x) - model.value(w_ref, x);
        acc += d * d;
    }
    return acc / static_cast<double>(mc_samples);
}

} // namespace goucb
