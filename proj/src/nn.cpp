#include "kansdf/nn.hpp"

#include <cmath>

namespace kansdf {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double silu(double t) { return t * sigmoid(t); }

double silu_deriv(double t) {
    const double s = sigmoid(t);
    return s * (1.0 + t * (1.0 - s));
}

double softplus(double t) {
    if (t > 30.0) return t;
    if (t < -30.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

double softplus_deriv(double t) { return sigmoid(t); }

double apply_activation(Activation kind, double t) {
    switch (kind) {
        case Activation::Silu: return silu(t);
        case Activation::Softplus: return softplus(t);
        case Activation::Relu: return t > 0.0 ? t : 0.0;
    }
    return t;
}

double activation_deriv(Activation kind, double t) {
    switch (kind) {
        case Activation::Silu: return silu_deriv(t);
        case Activation::Softplus: return softplus_deriv(t);
        case Activation::Relu: return t > 0.0 ? 1.0 : 0.0;
    }
    return 1.0;
}

Tensor2 activation(const Tensor2& x, Activation kind) {
    Tensor2 out(x.rows, x.cols);
    for (size_t i = 0; i < x.size(); ++i) out.data[i] = apply_activation(kind, x.data[i]);
    return out;
}

Tensor2 LinearLayer::forward(const Tensor2& x) {
    cached_input_ = x;
    has_cache_ = true;
    return linear_forward(x, w.value, b.value);
}

Tensor2 LinearLayer::backward(const Tensor2& upstream) {
    if (!has_cache_) throw StateError("LinearLayer::backward called before forward");
    linear_backward_params(upstream, cached_input_, w.grad, b.grad);
    return linear_backward_input(upstream, w.value);
}

Tensor2 ActivationLayer::forward(const Tensor2& x) {
    cached_input_ = x;
    has_cache_ = true;
    return activation(x, kind);
}

Tensor2 ActivationLayer::backward(const Tensor2& upstream) {
    if (!has_cache_) throw StateError("ActivationLayer::backward called before forward");
    require_same_shape(upstream, cached_input_, "activation backward");
    Tensor2 dx(upstream.rows, upstream.cols);
    for (size_t i = 0; i < upstream.size(); ++i)
        dx.data[i] = upstream.data[i] * activation_deriv(kind, cached_input_.data[i]);
    return dx;
}

Tensor2 Mlp2::forward(const Tensor2& x) {
    mid_.kind = act_;
    return l2.forward(mid_.forward(l1.forward(x)));
}

Tensor2 Mlp2::backward(const Tensor2& upstream) {
    return l1.backward(mid_.backward(l2.backward(upstream)));
}

void adam_step(DualBuffer& param, AdamState& state, const AdamConfig& cfg) {
    require_same_shape(param.value, state.m, "adam_step moments");
    require_same_shape(param.value, param.grad, "adam_step grad");
    state.step += 1;
    const double b1 = cfg.beta1, b2 = cfg.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (size_t i = 0; i < param.value.size(); ++i) {
        const double g = param.grad.data[i];
        double& m = state.m.data[i];
        double& v = state.v.data[i];
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        param.value.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

void fill_uniform(Tensor2& t, Rng& rng, double lo, double hi) {
    for (double& v : t.data) v = rng.uniform(lo, hi);
}

void fill_normal(Tensor2& t, Rng& rng, double mean, double stddev) {
    for (double& v : t.data) v = rng.normal(mean, stddev);
}

void init_xavier_uniform(Tensor2& w, Rng& rng, double gain) {
    const double bound = gain * std::sqrt(6.0 / (w.cols + w.rows));
    fill_uniform(w, rng, -bound, bound);
}

void init_he_uniform(Tensor2& w, Rng& rng) {
    const double bound = std::sqrt(6.0 / w.cols);
    fill_uniform(w, rng, -bound, bound);
}

}  // namespace kansdf
