#pragma once

#include "goucb/box.hpp"
#include "goucb/types.hpp"

#include <memory>

namespace goucb {

/// Value and exact parameter gradient of f_x(w) at one (w, x) pair.
struct ModelEval {
    double value = 0.0;
    Vector grad;
};

/// Differentiable parametric surrogate family {f_w : w in a parameter box}.
/// Implementations must be pure: eval() never mutates the model, so a model
/// is safe to share across threads once constructed.
class SurrogateModel {
public:
    virtual ~SurrogateModel() = default;

    virtual int input_dim() const = 0;
    virtual int param_dim() const = 0;

    /// Feasible parameter box (used by fitting inits and optional clamping).
    virtual const Box& param_box() const = 0;

    /// f_x(w) together with the exact analytic gradient in w.
    ModelEval eval(const Vector& w, const Vector& x) const {
        ModelEval out;
        out.grad.resize(param_dim());
        eval_into(w, x, out.value, out.grad);
        return out;
    }

    /// Allocation-free variant for hot loops. `grad` must have param_dim()
    /// entries.
    virtual void eval_into(const Vector& w, const Vector& x, double& value,
                           Vector& grad) const = 0;

    /// Value only (skips gradient work where an implementation can).
    virtual double value(const Vector& w, const Vector& x) const {
        ModelEval ev = eval(w, x);
        return ev.value;
    }

    /// Conservative analytic bound on sup ||grad f_x(w)||_2 over the
    /// parameter box and the given input box. Diagnostics only.
    virtual double gradient_norm_bound(const Box& input_box) const = 0;

protected:
    void check_dims(const Vector& w, const Vector& x) const {
        if (w.size() != param_dim())
            throw InputError("model: parameter vector has wrong length");
        if (x.size() != input_dim())
            throw InputError("model: input point has wrong length");
    }
};

/// Two linear layers with a sigmoid in between:
///   f(x) = w2 . sigmoid(W1 x + b1) + b2.
/// Parameters are packed as [W1 row-major | b1 | w2 | b2], so
/// param_dim = hidden * d_x + 2 * hidden + 1.
class SigmoidNet final : public SurrogateModel {
public:
    /// Default parameter box is [0,1]^{d_w}.
    SigmoidNet(int d_x, int hidden = 5);
    SigmoidNet(int d_x, int hidden, Box param_box);

    int input_dim() const override { return d_x_; }
    int param_dim() const override { return d_w_; }
    int hidden_dim() const { return hidden_; }
    const Box& param_box() const override { return box_; }

    void eval_into(const Vector& w, const Vector& x, double& value,
                   Vector& grad) const override;
    double value(const Vector& w, const Vector& x) const override;

    double gradient_norm_bound(const Box& input_box) const override;

    // Packing offsets.
    int w1_offset() const { return 0; }
    int b1_offset() const { return hidden_ * d_x_; }
    int w2_offset() const { return hidden_ * d_x_ + hidden_; }
    int b2_offset() const { return d_w_ - 1; }

private:
    int d_x_;
    int hidden_;
    int d_w_;
    Box box_;
};

/// f_w(x) = w . x; the gradient in w is the input itself. Used by tests and
/// oracle comparisons where the closed-form optimum is known.
class LinearModel final : public SurrogateModel {
public:
    explicit LinearModel(int d);
    LinearModel(int d, Box param_box);

    int input_dim() const override { return d_; }
    int param_dim() const override { return d_; }
    const Box& param_box() const override { return box_; }

    void eval_into(const Vector& w, const Vector& x, double& value,
                   Vector& grad) const override;

    double gradient_norm_bound(const Box& input_box) const override;

private:
    int d_;
    Box box_;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

} // namespace goucb
