#pragma once

#include "goucb/box.hpp"
#include "goucb/rng.hpp"
#include "goucb/types.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace goucb {

/// A maximization target with a known optimum value; evaluation outside the
/// domain box is an input error.
class Objective {
public:
    Objective() = default;
    Objective(std::string name, Box box, double f_star, std::string f_star_note,
              std::function<double(const Vector&)> f)
        : name_(std::move(name)), box_(std::move(box)), f_star_(f_star),
          f_star_note_(std::move(f_star_note)), f_(std::move(f)) {}

    const std::string& name() const { return name_; }
    const Box& box() const { return box_; }
    double f_star() const { return f_star_; }
    /// One-line statement of how f_star was obtained.
    const std::string& f_star_note() const { return f_star_note_; }

    double operator()(const Vector& x) const {
        if (!box_.contains(x, 1e-12))
            throw InputError("objective '" + name_ + "': point outside domain");
        return f_(x);
    }

private:
    std::string name_;
    Box box_;
    double f_star_ = std::numeric_limits<double>::quiet_NaN();
    std::string f_star_note_;
    std::function<double(const Vector&)> f_;
};

/// Realizable target: the built-in sigmoid network with every weight and
/// bias set to 1, i.e. hidden * sigmoid(sum_i x_i + 1) + 1 on [-5,5]^dim.
/// Its optimum sits at the all-upper vertex by monotonicity in sum_i x_i.
Objective make_f1(int dim = 10);

/// Negated Styblinski-Tang: -1/2 sum_i (x_i^4 - 16 x_i^2 + 5 x_i) on
/// [-5,5]^dim. The optimum value is dim times the per-coordinate quartic
/// maximum, located by a grid scan refined with Newton steps.
Objective make_f2(int dim = 10);

/// Negated Rastrigin: -100 + sum_i (10 cos(2 pi x_i) - x_i^2) on [-5,5]^dim;
/// each summand peaks at x_i = 0.
Objective make_f3(int dim = 10);

/// Lookup by CLI name ("f1", "f2", "f3", or a registered custom name).
Objective make_objective(const std::string& name, int dim);

/// Register an in-process custom objective factory under a name.
void register_objective(const std::string& name,
                        std::function<Objective(int)> factory);

/// Zero-mean Gaussian observation noise around an objective; one stream per
/// oracle instance.
class NoisyOracle {
public:
    NoisyOracle(const Objective& obj, double sigma, std::uint64_t seed)
        : obj_(&obj), sigma_(sigma), rng_(seed) {
        if (sigma < 0.0)
            throw InputError("NoisyOracle: sigma must be >= 0");
    }

    double observe(const Vector& x) {
        double f = (*obj_)(x);
        return sigma_ == 0.0 ? f : f + sigma_ * rng_.gaussian();
    }

    const Objective& objective() const { return *obj_; }
    double sigma() const { return sigma_; }

private:
    const Objective* obj_;
    double sigma_;
    Rng rng_;
};

enum class Phase { uniform = 0, optimistic = 1 };

/// Instantaneous and cumulative regret per round, with phase markers.
/// Regret uses noiseless objective values.
struct RegretTrace {
    std::vector<double> r;
    std::vector<double> R;
    std::vector<Phase> phase;

    std::size_t rounds() const { return r.size(); }
    double total() const { return R.empty() ? 0.0 : R.back(); }
};

/// Appends f_star - f(x_t). Requires the objective to carry a known optimum.
void record(RegretTrace& trace, const Vector& x_t, const Objective& obj,
            Phase phase);

/// Index of the observation with the largest y; ties go to the earliest
/// round.
std::size_t select_output(const std::vector<Vector>& xs,
                          const std::vector<double>& ys);

} // namespace goucb
