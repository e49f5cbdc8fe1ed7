#pragma once

#include "goucb/box.hpp"
#include "goucb/model.hpp"

#include <cstdint>
#include <vector>

namespace goucb {

/// Gradient-descent regression settings for the uniform-exploration phase.
/// The learning rate decays geometrically (gd_step * lr_decay every
/// decay_every iterations).
struct Phase1Config {
    int n = 20;
    int gd_iters = 2000;
    double gd_step = 0.05;
    int restarts = 3;
    bool clamp_to_box = false;
    double lr_decay = 0.5;
    int decay_every = 500;

    void validate() const {
        if (n < 1)
            throw InputError("Phase1Config: n must be >= 1");
        if (gd_iters < 1)
            throw InputError("Phase1Config: gd_iters must be >= 1");
        if (gd_step <= 0.0)
            throw InputError("Phase1Config: gd_step must be > 0");
        if (restarts < 1)
            throw InputError("Phase1Config: restarts must be >= 1");
    }
};

/// Paired samples; y may be empty while only design points exist.
struct Dataset {
    std::vector<Vector> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
    void push(Vector xi, double yi) {
        x.push_back(std::move(xi));
        y.push_back(yi);
    }
};

struct FitReport {
    Vector w;
    double final_loss = 0.0;
    int best_restart = -1;
    int failed_restarts = 0;
};

/// n i.i.d. uniform design points on the box; reproducible per seed.
Dataset sample_uniform(const Box& box, int n, std::uint64_t seed);

/// Least-squares fit of the model to (x, y) by multistart gradient descent
/// on the mean squared error. Each restart draws its initial point uniformly
/// from the parameter box and runs its own seed stream; the best final loss
/// wins, ties going to the lowest restart index. A restart whose loss turns
/// non-finite is retried from the same initial point with a 10x smaller step
/// (up to three times) before it counts as failed; if every restart fails a
/// NumericalError carrying the iteration index is thrown.
FitReport fit_report(const SurrogateModel& model, const Dataset& data,
                     const Phase1Config& cfg, std::uint64_t seed);

Vector fit(const SurrogateModel& model, const Dataset& data,
           const Phase1Config& cfg, std::uint64_t seed);

/// Monte-Carlo estimate of E_{x~U(box)} (f_x(w) - f_x(w_ref))^2.
double expected_loss(const SurrogateModel& model, const Box& box,
                     const Vector& w, const Vector& w_ref, int mc_samples,
                     std::uint64_t seed);

} // namespace goucb
