#include "goucb/model.hpp"

#include <cmath>

namespace goucb {

SigmoidNet::SigmoidNet(int d_x, int hidden)
    : SigmoidNet(d_x, hidden,
                 Box::cube(hidden * d_x + 2 * hidden + 1, 0.0, 1.0)) {}

namespace {

void check_param_box(const Box& box) {
    for (int i = 0; i < box.dim(); ++i)
        if (!(box.lo[i] < box.hi[i]))
            throw InputError("model: parameter box needs lower < upper in "
                             "every coordinate");
}

} // namespace

SigmoidNet::SigmoidNet(int d_x, int hidden, Box param_box)
    : d_x_(d_x), hidden_(hidden), d_w_(hidden * d_x + 2 * hidden + 1),
      box_(std::move(param_box)) {
    if (d_x_ < 1)
        throw InputError("SigmoidNet: input dimension must be >= 1");
    if (hidden_ < 1)
        throw InputError("SigmoidNet: hidden width must be >= 1");
    if (box_.dim() != d_w_)
        throw InputError("SigmoidNet: parameter box has wrong dimension");
    check_param_box(box_);
}

double SigmoidNet::value(const Vector& w, const Vector& x) const {
    check_dims(w, x);
    const double* p = w.data();
    double out = p[b2_offset()];
    for (int k = 0; k < hidden_; ++k) {
        double z = p[b1_offset() + k];
        const double* row = p + k * d_x_;
        for (int i = 0; i < d_x_; ++i)
            z += row[i] * x[i];
        out += p[w2_offset() + k] * sigmoid(z);
    }
    return out;
}

void SigmoidNet::eval_into(const Vector& w, const Vector& x, double& value,
                           Vector& grad) const {
    check_dims(w, x);
    if (grad.size() != d_w_)
        grad.resize(d_w_);

    const double* p = w.data();
    double* g = grad.data();

    value = p[b2_offset()];
    g[b2_offset()] = 1.0;
    for (int k = 0; k < hidden_; ++k) {
        double z = p[b1_offset() + k];
        const double* row = p + k * d_x_;
        for (int i = 0; i < d_x_; ++i)
            z += row[i] * x[i];
        double a = sigmoid(z);
        double v = p[w2_offset() + k];
        value += v * a;

        // d f / d z_k, then backprop into the first layer.
        double dz = v * a * (1.0 - a);
        double* grow = g + k * d_x_;
        for (int i = 0; i < d_x_; ++i)
            grow[i] = dz * x[i];
        g[b1_offset() + k] = dz;
        g[w2_offset() + k] = a;
    }
}

double SigmoidNet::gradient_norm_bound(const Box& input_box) const {
    if (input_box.dim() != d_x_)
        throw InputError("SigmoidNet: input box has wrong dimension");

    // sup ||x||_2 over the box and sup |w2_k| over the parameter box.
    double x2_sq = 0.0;
    for (int i = 0; i < d_x_; ++i) {
        double m = std::max(std::abs(input_box.lo[i]), std::abs(input_box.hi[i]));
        x2_sq += m * m;
    }
    double w2_max = 0.0;
    for (int k = 0; k < hidden_; ++k) {
        int j = w2_offset() + k;
        w2_max = std::max(w2_max,
                          std::max(std::abs(box_.lo[j]), std::abs(box_.hi[j])));
    }

    // Per hidden unit: |df/dz| <= w2_max / 4 (sigmoid' <= 1/4), spread over
    // the W1 row (factor ||x||) and the b1 entry; w2 entries see the
    // activation a in (0,1); b2 contributes 1.
    double dz = w2_max / 4.0;
    double total = hidden_ * dz * dz * (x2_sq + 1.0) + hidden_ + 1.0;
    return std::sqrt(total);
}

LinearModel::LinearModel(int d) : LinearModel(d, Box::cube(d, 0.0, 1.0)) {}

LinearModel::LinearModel(int d, Box param_box)
    : d_(d), box_(std::move(param_box)) {
    if (d_ < 1)
        throw InputError("LinearModel: dimension must be >= 1");
    if (box_.dim() != d_)
        throw InputError("LinearModel: parameter box has wrong dimension");
    check_param_box(box_);
}

void LinearModel::eval_into(const Vector& w, const Vector& x, double& value,
                            Vector& grad) const {
    check_dims(w, x);
    value = w.dot(x);
    grad = x;
}

double LinearModel::gradient_norm_bound(const Box& input_box) const {
    if (input_box.dim() != d_)
        throw InputError("LinearModel: input box has wrong dimension");
    double s = 0.0;
    for (int i = 0; i < d_; ++i) {
        double m = std::max(std::abs(input_box.lo[i]), std::abs(input_box.hi[i]));
        s += m * m;
    }
    return std::sqrt(s);
}

} // namespace goucb
