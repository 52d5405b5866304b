#include "kansdf/kan.hpp"

#include <algorithm>
#include <cmath>

namespace kansdf {

KanLayer::KanLayer(int in_dim, int out_dim, int grid_size, int spline_order,
                   double range_lo, double range_hi)
    : w_base(out_dim, in_dim),
      w_spline(out_dim, in_dim * (grid_size + spline_order)),
      spline_scaler(out_dim, in_dim),
      grid(uniform_grid(range_lo, range_hi, grid_size, spline_order)),
      chan_shift(in_dim, 0.0),
      chan_scale(in_dim, 1.0) {}

void KanLayer::init_params(Rng& rng) {
    init_he_uniform(w_base.value, rng);
    fill_normal(w_spline.value, rng, 0.0, 0.1 / grid.grid_size);
    spline_scaler.value.fill(1.0);
}

void KanLayer::eval_basis_cache(const Tensor2& x) {
    const int nb = num_basis();
    const int I = in_dim();
    cached_basis_ = Tensor2(x.rows, I * nb);
    cached_deriv_ = Tensor2(x.rows, I * nb);
    const double lo = grid.interior_lo();
    const double hi = grid.interior_hi();
    for (int b = 0; b < x.rows; ++b) {
        const double* xr = x.row(b);
        double* brow = cached_basis_.row(b);
        double* drow = cached_deriv_.row(b);
        for (int i = 0; i < I; ++i) {
            const double u = (xr[i] - chan_shift[i]) / chan_scale[i];
            const bool clamped = u < lo || u > hi;
            const double uc = std::clamp(u, lo, hi);
            basis_and_deriv_at(uc, grid, brow + i * nb, drow + i * nb);
            if (clamped)
                for (int j = 0; j < nb; ++j) drow[i * nb + j] = 0.0;
        }
    }
}

Tensor2 KanLayer::forward(const Tensor2& x) {
    const int I = in_dim(), O = out_dim(), nb = num_basis();
    if (x.cols != I)
        throw DimensionError("KanLayer::forward: input " + x.shape_str() + " vs weights " +
                             w_base.value.shape_str());
    cached_input_ = x;
    cached_silu_ = activation(x, Activation::Silu);
    eval_basis_cache(x);
    has_cache_ = true;

    Tensor2 out(x.rows, O);
    for (int b = 0; b < x.rows; ++b) {
        const double* sr = cached_silu_.row(b);
        const double* brow = cached_basis_.row(b);
        double* outr = out.row(b);
        for (int o = 0; o < O; ++o) {
            const double* wb = w_base.value.row(o);
            double base = 0.0;
            for (int i = 0; i < I; ++i) base += sr[i] * wb[i];
            const double* ws = w_spline.value.row(o);
            const double* sc = spline_scaler.value.row(o);
            double spl = 0.0;
            for (int i = 0; i < I; ++i) {
                const double* wsi = ws + i * nb;
                const double* bvi = brow + i * nb;
                double dot = 0.0;
                for (int j = 0; j < nb; ++j) dot += wsi[j] * bvi[j];
                spl += sc[i] * dot;
            }
            outr[o] = base + spl;
        }
    }
    return out;
}

Tensor2 KanLayer::backward(const Tensor2& upstream) {
    if (!has_cache_) throw StateError("KanLayer::backward called before forward");
    const int I = in_dim(), O = out_dim(), nb = num_basis();
    require_shape(upstream, cached_input_.rows, O, "KanLayer::backward upstream");

    Tensor2 dx(cached_input_.rows, I);
    std::vector<double> tmp(static_cast<size_t>(I) * nb);
    for (int b = 0; b < upstream.rows; ++b) {
        const double* g = upstream.row(b);
        const double* brow = cached_basis_.row(b);
        const double* drow = cached_deriv_.row(b);
        const double* sr = cached_silu_.row(b);
        const double* xr = cached_input_.row(b);
        double* dxr = dx.row(b);
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int o = 0; o < O; ++o) {
            const double g_bo = g[o];
            if (g_bo == 0.0) continue;
            const double* wb = w_base.value.row(o);
            double* gwb = w_base.grad.row(o);
            const double* ws = w_spline.value.row(o);
            double* gws = w_spline.grad.row(o);
            const double* sc = spline_scaler.value.row(o);
            double* gsc = spline_scaler.grad.row(o);
            for (int i = 0; i < I; ++i) {
                gwb[i] += g_bo * sr[i];
                const double* wsi = ws + i * nb;
                const double* bvi = brow + i * nb;
                double dot_wb = 0.0;
                for (int j = 0; j < nb; ++j) dot_wb += wsi[j] * bvi[j];
                gsc[i] += g_bo * dot_wb;
                const double coef = g_bo * sc[i];
                double* gwsi = gws + i * nb;
                double* tmpi = tmp.data() + static_cast<size_t>(i) * nb;
                for (int j = 0; j < nb; ++j) {
                    gwsi[j] += coef * bvi[j];
                    tmpi[j] += coef * wsi[j];
                }
            }
        }
        // Input gradient: base path through silu', spline path through the
        // basis derivative and the channel affine.
        for (int i = 0; i < I; ++i) {
            double base_g = 0.0;
            for (int o = 0; o < O; ++o) base_g += upstream.at(b, o) * w_base.value.at(o, i);
            double spl_g = 0.0;
            const double* tmpi = tmp.data() + static_cast<size_t>(i) * nb;
            const double* dvi = drow + i * nb;
            for (int j = 0; j < nb; ++j) spl_g += tmpi[j] * dvi[j];
            dxr[i] = base_g * silu_deriv(xr[i]) + spl_g / chan_scale[i];
        }
    }
    return dx;
}

void KanLayer::zero_grad() {
    w_base.zero_grad();
    w_spline.zero_grad();
    spline_scaler.zero_grad();
}

namespace {

// Linear-interpolation quantiles of a sorted sample, count points including
// both extremes.
std::vector<double> sample_quantiles(const std::vector<double>& sorted, int count) {
    std::vector<double> q(count);
    const size_t n = sorted.size();
    for (int j = 0; j < count; ++j) {
        const double pos = static_cast<double>(j) * (n - 1) / (count - 1);
        const size_t i0 = static_cast<size_t>(pos);
        const size_t i1 = std::min(i0 + 1, n - 1);
        const double frac = pos - static_cast<double>(i0);
        q[j] = sorted[i0] + frac * (sorted[i1] - sorted[i0]);
    }
    return q;
}

}  // namespace

void KanLayer::adapt_grid(const Tensor2& batch_inputs, double eps, bool refit) {
    const int I = in_dim(), O = out_dim();
    if (batch_inputs.cols != I)
        throw DimensionError("adapt_grid: batch " + batch_inputs.shape_str() + " vs in_dim " +
                             std::to_string(I));
    if (batch_inputs.rows < grid.grid_size + 1)
        throw DataError("adapt_grid: need at least grid_size+1 = " +
                        std::to_string(grid.grid_size + 1) + " rows, got " +
                        std::to_string(batch_inputs.rows));
    if (eps < 0.0 || eps > 1.0) throw DataError("adapt_grid: eps must be in [0, 1]");

    double pooled_min = batch_inputs.data[0], pooled_max = batch_inputs.data[0];
    for (double v : batch_inputs.data) {
        pooled_min = std::min(pooled_min, v);
        pooled_max = std::max(pooled_max, v);
    }
    if (!(pooled_max > pooled_min))
        throw DataError("adapt_grid: degenerate input range (all values equal)");

    // New channel affines map each channel's batch range onto [-1, 1];
    // constant channels keep a unit scale so the division stays defined.
    std::vector<double> new_shift(I), new_scale(I);
    for (int i = 0; i < I; ++i) {
        double cmin = batch_inputs.at(0, i), cmax = cmin;
        for (int b = 1; b < batch_inputs.rows; ++b) {
            const double v = batch_inputs.at(b, i);
            cmin = std::min(cmin, v);
            cmax = std::max(cmax, v);
        }
        if (cmax - cmin < 1e-12) {
            new_shift[i] = cmin;
            new_scale[i] = 1.0;
        } else {
            new_shift[i] = 0.5 * (cmin + cmax);
            new_scale[i] = 0.5 * (cmax - cmin);
        }
    }

    std::vector<double> pooled;
    pooled.reserve(batch_inputs.size());
    for (int b = 0; b < batch_inputs.rows; ++b)
        for (int i = 0; i < I; ++i)
            pooled.push_back((batch_inputs.at(b, i) - new_shift[i]) / new_scale[i]);
    std::sort(pooled.begin(), pooled.end());

    const double u_min = pooled.front(), u_max = pooled.back();
    const int gs = grid.grid_size;
    const double h = (u_max - u_min) / gs;
    std::vector<double> adaptive = sample_quantiles(pooled, gs + 1);
    std::vector<double> interior(gs + 1);
    for (int j = 0; j <= gs; ++j) {
        const double uni = u_min + j * h;
        interior[j] = (1.0 - eps) * adaptive[j] + eps * uni;
    }
    SplineGrid new_grid = grid_from_interior(interior, h, grid.spline_order);

    if (refit) {
        const int nb = new_grid.num_basis();
        if (batch_inputs.rows < nb)
            throw DataError("adapt_grid: refit needs at least num_basis = " + std::to_string(nb) +
                            " rows, got " + std::to_string(batch_inputs.rows));
        const double old_lo = grid.interior_lo(), old_hi = grid.interior_hi();
        const double new_lo = new_grid.interior_lo(), new_hi = new_grid.interior_hi();
        const int nb_old = grid.num_basis();
        std::vector<double> old_vals(nb_old);
        Tensor2 targets(O, batch_inputs.rows);
        std::vector<double> new_u(batch_inputs.rows);
        Tensor2 new_w_spline(O, I * nb);
        for (int i = 0; i < I; ++i) {
            for (int b = 0; b < batch_inputs.rows; ++b) {
                const double x = batch_inputs.at(b, i);
                const double u_old =
                    std::clamp((x - chan_shift[i]) / chan_scale[i], old_lo, old_hi);
                basis_at(u_old, grid, old_vals.data());
                for (int o = 0; o < O; ++o) {
                    const double* wsi = w_spline.value.row(o) + i * nb_old;
                    double acc = 0.0;
                    for (int j = 0; j < nb_old; ++j) acc += wsi[j] * old_vals[j];
                    targets.at(o, b) = acc;
                }
                new_u[b] = std::clamp((x - new_shift[i]) / new_scale[i], new_lo, new_hi);
            }
            Tensor2 coeffs = fit_coefficients_multi(new_u, targets, new_grid);
            for (int o = 0; o < O; ++o)
                for (int j = 0; j < nb; ++j) new_w_spline.at(o, i * nb + j) = coeffs.at(o, j);
        }
        w_spline.value = std::move(new_w_spline);
        w_spline.grad = Tensor2(O, I * nb);
    }

    grid = std::move(new_grid);
    chan_shift = std::move(new_shift);
    chan_scale = std::move(new_scale);
    has_cache_ = false;
}

std::vector<double> KanLayer::effective_knots(int channel) const {
    std::vector<double> out(grid.knots.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = chan_shift[channel] + chan_scale[channel] * grid.knots[i];
    return out;
}

std::vector<double> KanLayer::effective_interior_knots(int channel) const {
    const int k = grid.spline_order;
    std::vector<double> out(grid.grid_size + 1);
    for (int j = 0; j <= grid.grid_size; ++j)
        out[j] = chan_shift[channel] + chan_scale[channel] * grid.knots[k + j];
    return out;
}

void validate_decoder_schedule(const std::vector<int>& widths) {
    if (widths.size() < 2) throw DimensionError("decoder schedule needs at least two widths");
    if (widths.back() != 1) throw DimensionError("decoder schedule must end at width 1");
    for (size_t i = 1; i < widths.size(); ++i)
        if (widths[i] >= widths[i - 1])
            throw DimensionError("decoder schedule widths must be strictly decreasing");
    for (int w : widths)
        if (w < 1) throw DimensionError("decoder schedule widths must be positive");
}

KanStack::KanStack(const std::vector<int>& widths, int grid_size, int spline_order,
                   double range_lo, double range_hi)
    : widths_(widths) {
    validate_decoder_schedule(widths);
    for (size_t i = 0; i + 1 < widths.size(); ++i)
        layers.emplace_back(widths[i], widths[i + 1], grid_size, spline_order, range_lo, range_hi);
}

Tensor2 KanStack::forward(const Tensor2& x) {
    if (x.cols != widths_.front())
        throw DimensionError("KanStack::forward: input " + x.shape_str() +
                             " vs schedule entry width " + std::to_string(widths_.front()));
    layer_inputs_.clear();
    Tensor2 h = x;
    for (auto& layer : layers) {
        layer_inputs_.push_back(h);
        h = layer.forward(h);
    }
    has_cache_ = true;
    return h;
}

Tensor2 KanStack::backward(const Tensor2& upstream) {
    if (!has_cache_) throw StateError("KanStack::backward called before forward");
    Tensor2 g = upstream;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) g = it->backward(g);
    return g;
}

void KanStack::zero_grad() {
    for (auto& layer : layers) layer.zero_grad();
}

void KanStack::init_params(Rng& rng) {
    for (auto& layer : layers) layer.init_params(rng);
}

const Tensor2& KanStack::layer_input(int layer) const {
    if (!has_cache_ || layer < 0 || layer >= static_cast<int>(layer_inputs_.size()))
        throw StateError("KanStack::layer_input: no cached forward for layer " +
                         std::to_string(layer));
    return layer_inputs_[layer];
}

size_t KanStack::param_count() const {
    size_t n = 0;
    for (const auto& layer : layers) n += layer.param_count();
    return n;
}

}  // namespace kansdf
