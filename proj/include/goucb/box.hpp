#pragma once

#include "goucb/rng.hpp"
#include "goucb/types.hpp"

namespace goucb {

/// Axis-aligned box [lo_i, hi_i]^d. Degenerate coordinates (lo == hi) are
/// allowed; lo > hi is not.
struct Box {
    Vector lo;
    Vector hi;

    Box() = default;
    Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size())
            throw InputError("Box: bound dimensions differ");
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i]))
                throw InputError("Box: lower bound exceeds upper bound");
    }

    static Box cube(int d, double lo_, double hi_) {
        return Box(Vector::Constant(d, lo_), Vector::Constant(d, hi_));
    }

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Vector& x, double tol = 0.0) const {
        if (x.size() != lo.size())
            return false;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] - tol || x[i] > hi[i] + tol)
                return false;
        return true;
    }

    Vector clamp(Vector x) const {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = std::min(hi[i], std::max(lo[i], x[i]));
        return x;
    }

    Vector sample(Rng& rng) const {
        Vector x(lo.size());
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            x[i] = rng.uniform(lo[i], hi[i]);
        return x;
    }

    double width(int i) const { return hi[i] - lo[i]; }
};

} // namespace goucb
