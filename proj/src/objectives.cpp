#include "goucb/objectives.hpp"

#include "goucb/model.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace goucb {

namespace {

// Per-coordinate maximum of -(x^4 - 16 x^2 + 5 x)/2 on [-5, 5]: grid scan
// then Newton refinement on the cubic stationarity condition.
double styblinski_tang_coord_max() {
    auto g = [](double x) { return -0.5 * (x * x * x * x - 16.0 * x * x + 5.0 * x); };
    double best_x = -5.0;
    double best_v = g(-5.0);
    for (int i = 0; i <= 1000; ++i) {
        double x = -5.0 + 10.0 * i / 1000.0;
        double v = g(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double x = best_x;
    for (int it = 0; it < 50; ++it) {
        double d1 = -0.5 * (4.0 * x * x * x - 32.0 * x + 5.0);
        double d2 = -0.5 * (12.0 * x * x - 32.0);
        if (d2 == 0.0)
            break;
        double step = d1 / d2;
        x -= step;
        if (std::abs(step) < 1e-15)
            break;
    }
    return g(x);
}

} // namespace

Objective make_f1(int dim) {
    if (dim < 1)
        throw InputError("make_f1: dimension must be >= 1");
    const int hidden = 5;
    Box box = Box::cube(dim, -5.0, 5.0);
    auto f = [hidden](const Vector& x) {
        return hidden * sigmoid(x.sum() + 1.0) + 1.0;
    };
    // Monotone in sum_i x_i, so the optimum is at the all-+5 vertex.
    double f_star = hidden * sigmoid(5.0 * dim + 1.0) + 1.0;
    return Objective("f1", std::move(box), f_star,
                     "analytic: monotone in the coordinate sum, optimum at "
                     "the all-upper vertex",
                     std::move(f));
}

Objective make_f2(int dim) {
    if (dim < 1)
        throw InputError("make_f2: dimension must be >= 1");
    Box box = Box::cube(dim, -5.0, 5.0);
    auto f = [](const Vector& x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            double xi = x[i];
            s += xi * xi * xi * xi - 16.0 * xi * xi + 5.0 * xi;
        }
        return -0.5 * s;
    };
    double f_star = dim * styblinski_tang_coord_max();
    return Objective("f2", std::move(box), f_star,
                     "separable: per-coordinate quartic maximized by grid "
                     "scan plus Newton refinement",
                     std::move(f));
}

Objective make_f3(int dim) {
    if (dim < 1)
        throw InputError("make_f3: dimension must be >= 1");
    Box box = Box::cube(dim, -5.0, 5.0);
    auto f = [](const Vector& x) {
        double s = -100.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            s += 10.0 * std::cos(2.0 * M_PI * x[i]) - x[i] * x[i];
        return s;
    };
    // Each summand is at most 10, attained only at x_i = 0.
    double f_star = -100.0 + 10.0 * dim;
    return Objective("f3", std::move(box), f_star,
                     "analytic: every summand peaks at the origin",
                     std::move(f));
}

namespace {

std::map<std::string, std::function<Objective(int)>>& registry() {
    static std::map<std::string, std::function<Objective(int)>> reg;
    return reg;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

void register_objective(const std::string& name,
                        std::function<Objective(int)> factory) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(factory);
}

Objective make_objective(const std::string& name, int dim) {
    if (name == "f1")
        return make_f1(dim);
    if (name == "f2")
        return make_f2(dim);
    if (name == "f3")
        return make_f3(dim);
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end())
        throw ConfigError("unknown objective '" + name + "'");
    return it->second(dim);
}

void record(RegretTrace& trace, const Vector& x_t, const Objective& obj,
            Phase phase) {
    if (!std::isfinite(obj.f_star()))
        throw ConfigError("record: objective '" + obj.name() +
                          "' has no known optimum value");
    double r_t = obj.f_star() - obj(x_t);
    trace.r.push_back(r_t);
    trace.R.push_back(trace.total() + r_t);
    trace.phase.push_back(phase);
}

std::size_t select_output(const std::vector<Vector>& xs,
                          const std::vector<double>& ys) {
    if (xs.empty() || xs.size() != ys.size())
        throw InputError("select_output: empty or inconsistent history");
    std::size_t best = 0;
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] > ys[best])
            best = i;
    return best;
}

} // namespace goucb
