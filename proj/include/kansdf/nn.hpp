#pragma once

#include "kansdf/rng.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

enum class Activation { Silu, Softplus, Relu };

double sigmoid(double t);
double silu(double t);
double silu_deriv(double t);
// ln(1 + e^t) with an overflow-safe branch for |t| > 30.
double softplus(double t);
double softplus_deriv(double t);

double apply_activation(Activation kind, double t);
double activation_deriv(Activation kind, double t);

// Elementwise activation over a full tensor.
Tensor2 activation(const Tensor2& x, Activation kind);

// --- layers with cached forward state (hand-derived reverse mode) ---

class LinearLayer {
public:
    LinearLayer() = default;
    LinearLayer(int in_dim, int out_dim) : w(out_dim, in_dim), b(1, out_dim) {}

    DualBuffer w;  // [out x in]
    DualBuffer b;  // [1 x out]

    int in_dim() const { return w.value.cols; }
    int out_dim() const { return w.value.rows; }

    Tensor2 forward(const Tensor2& x);
    // Accumulates into w.grad / b.grad, returns gradient w.r.t. the input.
    Tensor2 backward(const Tensor2& upstream);
    void zero_grad() { w.zero_grad(); b.zero_grad(); }

private:
    Tensor2 cached_input_;
    bool has_cache_ = false;
};

class ActivationLayer {
public:
    ActivationLayer() = default;
    explicit ActivationLayer(Activation kind) : kind(kind) {}

    Activation kind = Activation::Silu;

    Tensor2 forward(const Tensor2& x);
    Tensor2 backward(const Tensor2& upstream);

private:
    Tensor2 cached_input_;
    bool has_cache_ = false;
};

// Two linear layers with one activation between them; the building block used
// by the prototype encoders and the depth-image encoder.
class Mlp2 {
public:
    Mlp2() = default;
    Mlp2(int in_dim, int hidden, int out_dim, Activation act)
        : l1(in_dim, hidden), l2(hidden, out_dim), act_(act) {}

    LinearLayer l1, l2;

    Tensor2 forward(const Tensor2& x);
    Tensor2 backward(const Tensor2& upstream);
    void zero_grad() { l1.zero_grad(); l2.zero_grad(); }
    Activation act() const { return act_; }

private:
    ActivationLayer mid_;
    Activation act_ = Activation::Silu;
};

// --- Adam ---

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moments for one parameter tensor.
struct AdamState {
    Tensor2 m;
    Tensor2 v;
    long step = 0;

    AdamState() = default;
    explicit AdamState(const Tensor2& shape_of) : m(shape_of.rows, shape_of.cols), v(shape_of.rows, shape_of.cols) {}
};

// Bias-corrected Adam update reading param.grad; the gradient is left intact
// (clearing is the caller's zero_grad).
void adam_step(DualBuffer& param, AdamState& state, const AdamConfig& cfg);

// --- initializers ---

void fill_uniform(Tensor2& t, Rng& rng, double lo, double hi);
void fill_normal(Tensor2& t, Rng& rng, double mean, double stddev);
// U(+-sqrt(6/(fan_in+fan_out)))
void init_xavier_uniform(Tensor2& w, Rng& rng, double gain = 1.0);
// U(+-sqrt(6/fan_in))
void init_he_uniform(Tensor2& w, Rng& rng);

}  // namespace kansdf
