#pragma once

#include "goucb/box.hpp"
#include "goucb/model.hpp"
#include "goucb/ucb_engine.hpp"

#include <cstdint>

namespace goucb {

/// Search schedule for the per-round query selection. The default mode
/// maximizes the linearized upper confidence value over x; the alternating
/// mode interleaves derivative-free ascent in x with projected gradient
/// ascent in w over the confidence ball.
struct AcquisitionConfig {
    enum class Mode { linearized_ucb, alternating };
    enum class XSearch { coordinate, fd_gradient };
    enum class TieBreak { first_found };

    Mode mode = Mode::linearized_ucb;
    XSearch x_search = XSearch::coordinate;
    int outer_starts = 32;
    int outer_iters = 50;
    int inner_iters = 5;
    double x_step_frac = 0.4;   // initial coordinate step, fraction of box width
    double fd_step = 1e-4;      // finite-difference step for the gradient variant
    TieBreak tie_break = TieBreak::first_found;

    void validate() const {
        if (outer_starts < 1 || outer_iters < 1 || inner_iters < 1)
            throw InputError("AcquisitionConfig: counts must be >= 1");
        if (x_step_frac <= 0.0 || fd_step <= 0.0)
            throw InputError("AcquisitionConfig: step sizes must be > 0");
    }
};

struct SelectResult {
    Vector x;
    Vector w;      // ball member realizing (or approximating) the value
    double ucb = 0.0;
};

/// Linearized optimistic value at x:
///   f_x(center) + sqrt(radius) * ||grad f_x(center)||_{Sigma^{-1}},
/// the exact maximum of the first-order model of f_x(w) over the ball.
double ucb_value(const SurrogateModel& model, const ConfidenceBall& ball,
                 const Vector& x);

/// Radial projection onto the ball in the Sigma metric; identity for
/// members.
Vector project_to_ball(const ConfidenceBall& ball, const Vector& w);

/// Approximate argmax over x in the box (and w in the ball) of the
/// optimistic value. Deterministic given (seed, cfg, ball, model); ties are
/// broken first-found.
SelectResult select_point(const SurrogateModel& model, const ConfidenceBall& ball,
                          const Box& box, const AcquisitionConfig& cfg,
                          std::uint64_t seed);

} // namespace goucb
