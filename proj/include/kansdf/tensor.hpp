#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kansdf/errors.hpp"

namespace kansdf {

// Dense row-major matrix of doubles. The only tensor type in the library;
// vectors are 1xN or Nx1, scalars 1x1.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    static Tensor2 zeros(int r, int c) { return Tensor2(r, c); }
    static Tensor2 full(int r, int c, double v) {
        Tensor2 t(r, c);
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }
    static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows_init);

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
    std::span<const double> row_span(int r) const { return {row(r), static_cast<size_t>(cols)}; }

    size_t size() const { return data.size(); }
    bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
    std::string shape_str() const;

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
    bool all_finite() const;
};

std::string shape_str(int rows, int cols);

// Throws DimensionError naming both shapes when they differ.
void require_shape(const Tensor2& t, int rows, int cols, const char* what);
void require_same_shape(const Tensor2& a, const Tensor2& b, const char* what);

// out = a + b, a - b, a * s (allocating helpers, used off the hot path)
Tensor2 add(const Tensor2& a, const Tensor2& b);
Tensor2 sub(const Tensor2& a, const Tensor2& b);
Tensor2 scale(const Tensor2& a, double s);
void add_inplace(Tensor2& a, const Tensor2& b);

// out[r][c] = sum_i x[r][i] * w[c][i] + b[0][c].  w is stored [out x in] so both
// operands of the inner dot are contiguous rows.
Tensor2 linear_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b);

// Gradients of linear_forward.  upstream is [B x O].
// dx[r][i] = sum_o upstream[r][o] * w[o][i]
Tensor2 linear_backward_input(const Tensor2& upstream, const Tensor2& w);
// dw[o][i] += sum_r upstream[r][o] * x[r][i];  db[0][o] += sum_r upstream[r][o]
void linear_backward_params(const Tensor2& upstream, const Tensor2& x, Tensor2& dw, Tensor2& db);

// Value plus gradient accumulation slot for one trainable tensor.
struct DualBuffer {
    Tensor2 value;
    Tensor2 grad;

    DualBuffer() = default;
    explicit DualBuffer(Tensor2 v) : value(std::move(v)), grad(value.rows, value.cols) {}
    DualBuffer(int r, int c) : value(r, c), grad(r, c) {}

    void zero_grad() { grad.fill(0.0); }
    double grad_norm2() const;
};

}  // namespace kansdf
