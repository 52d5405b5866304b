#pragma once

#include <vector>

#include "kansdf/nn.hpp"
#include "kansdf/spline.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

// One KAN layer: y = silu(x) * W_base^T + per-edge spline functions summed
// over input channels, every edge expanded in a shared B-spline basis.
//
// The knot grid is shared across the layer's input channels; per-channel
// ranges are folded in through an affine normalization u = (x - shift)/scale
// maintained alongside the grid.  Spline inputs are clamp-evaluated at the
// grid's interior span, so the basis always partitions unity and constants
// stay exactly representable no matter how far activations drift between
// grid adaptations.
class KanLayer {
public:
    KanLayer() = default;
    KanLayer(int in_dim, int out_dim, int grid_size, int spline_order,
             double range_lo = -1.0, double range_hi = 1.0);

    DualBuffer w_base;        // [O x I]
    DualBuffer w_spline;      // [O x I*nb], edge (o,i) owns the slice [i*nb, (i+1)*nb)
    DualBuffer spline_scaler; // [O x I]
    SplineGrid grid;
    std::vector<double> chan_shift;
    std::vector<double> chan_scale;

    int in_dim() const { return w_base.value.cols; }
    int out_dim() const { return w_base.value.rows; }
    int num_basis() const { return grid.num_basis(); }

    // w_base He-uniform, w_spline ~ N(0, (0.1/grid_size)^2), scaler = 1.
    void init_params(Rng& rng);

    Tensor2 forward(const Tensor2& x);
    Tensor2 backward(const Tensor2& upstream);
    void zero_grad();

    // Grid adaptation on a batch of raw layer inputs: refreshes the channel
    // affines from per-channel ranges, rebuilds the shared grid by blending
    // pooled-quantile knots with a uniform grid (eps = 1 gives the uniform
    // grid, eps = 0 the pure quantiles), then least-squares refits w_spline
    // so the layer function on this batch is preserved.  Requires at least
    // grid_size + 1 rows, and num_basis rows when refitting.
    void adapt_grid(const Tensor2& batch_inputs, double eps, bool refit = true);

    // Knot positions mapped back to channel i's raw input space.
    std::vector<double> effective_knots(int channel) const;
    // Interior knots only (grid_size + 1 of them), raw input space.
    std::vector<double> effective_interior_knots(int channel) const;

    size_t param_count() const {
        return w_base.value.size() + w_spline.value.size() + spline_scaler.value.size();
    }

private:
    Tensor2 cached_input_;
    Tensor2 cached_silu_;
    Tensor2 cached_basis_;   // [B x I*nb]
    Tensor2 cached_deriv_;   // [B x I*nb], d/du at the clamped point (0 if clamped)
    bool has_cache_ = false;

    void eval_basis_cache(const Tensor2& x);
};

// Sequential KAN layers with strictly decreasing widths ending at 1 (the
// scalar SDF head).  No activation between layers beyond each layer's own.
class KanStack {
public:
    KanStack() = default;
    KanStack(const std::vector<int>& widths, int grid_size, int spline_order,
             double range_lo = -1.0, double range_hi = 1.0);

    std::vector<KanLayer> layers;

    Tensor2 forward(const Tensor2& x);
    Tensor2 backward(const Tensor2& upstream);
    void zero_grad();
    void init_params(Rng& rng);

    // Raw input batch the given layer saw on the latest forward.
    const Tensor2& layer_input(int layer) const;
    bool has_cache() const { return has_cache_; }

    size_t param_count() const;
    const std::vector<int>& widths() const { return widths_; }

private:
    std::vector<int> widths_;
    std::vector<Tensor2> layer_inputs_;
    bool has_cache_ = false;
};

void validate_decoder_schedule(const std::vector<int>& widths);

}  // namespace kansdf
