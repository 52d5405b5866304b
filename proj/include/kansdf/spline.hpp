#pragma once

#include <span>
#include <vector>

#include "kansdf/tensor.hpp"

namespace kansdf {

// Open uniform-extension knot grid for B-splines of degree spline_order.
// knots has grid_size + 2*spline_order + 1 strictly increasing entries; the
// interior span [knots[k], knots[n-1-k]] is where the basis partitions unity.
struct SplineGrid {
    std::vector<double> knots;
    int grid_size = 0;
    int spline_order = 0;

    int num_basis() const { return grid_size + spline_order; }
    double interior_lo() const { return knots[spline_order]; }
    double interior_hi() const { return knots[knots.size() - 1 - spline_order]; }
    bool valid() const;
};

// Uniform grid over [x_min, x_max] with h = (x_max-x_min)/grid_size, extended
// by spline_order*h on both sides.
SplineGrid uniform_grid(double x_min, double x_max, int grid_size, int spline_order);

// Rebuild a grid from given interior knots (grid_size+1 points, increasing)
// plus uniform extension with spacing h on both sides.  Ties are separated by
// a 1e-9 jitter so the knot vector stays strictly increasing.
SplineGrid grid_from_interior(std::span<const double> interior, double h, int spline_order);

// Basis values of all num_basis functions at x.  Inputs beyond the extended
// span are clamped to its boundary; elsewhere this is the raw Cox-de Boor
// recursion, so local support is exact and rows sum to 1 only on the interior
// span.  vals must have num_basis slots.
void basis_at(double x, const SplineGrid& g, double* vals);

// Same plus d/dx of each basis function (zero where the extended-span clamp
// is active).
void basis_and_deriv_at(double x, const SplineGrid& g, double* vals, double* derivs);

// Batch version: [B x num_basis].
Tensor2 basis(std::span<const double> xs, const SplineGrid& g);

double eval_spline(double x, std::span<const double> coeffs, const SplineGrid& g);

// Least squares fit of coefficients c so that sum_j c_j B_j(x_i) ~= y_i, via
// normal equations with Tikhonov damping lambda = 1e-8.  Requires at least
// num_basis samples; throws NumericalError if the damped system is still
// numerically singular.
std::vector<double> fit_coefficients(std::span<const double> xs, std::span<const double> ys,
                                     const SplineGrid& g);

// Shared-factorization variant for many right-hand sides over the same xs.
// ys is [R x B] (row r is one target vector); returns [R x num_basis].
Tensor2 fit_coefficients_multi(std::span<const double> xs, const Tensor2& ys, const SplineGrid& g);

}  // namespace kansdf
