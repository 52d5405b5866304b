#include "kansdf/tensor.hpp"

#include <cmath>
#include <sstream>

namespace kansdf {

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows_init) {
    Tensor2 t(static_cast<int>(rows_init.size()),
              rows_init.size() ? static_cast<int>(rows_init.begin()->size()) : 0);
    int r = 0;
    for (const auto& row : rows_init) {
        if (static_cast<int>(row.size()) != t.cols)
            throw DimensionError("from_rows: ragged initializer");
        int c = 0;
        for (double v : row) t.at(r, c++) = v;
        ++r;
    }
    return t;
}

std::string Tensor2::shape_str() const { return kansdf::shape_str(rows, cols); }

bool Tensor2::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string shape_str(int rows, int cols) {
    std::ostringstream os;
    os << rows << "x" << cols;
    return os.str();
}

void require_shape(const Tensor2& t, int rows, int cols, const char* what) {
    if (t.rows != rows || t.cols != cols) {
        throw DimensionError(std::string(what) + ": expected " + shape_str(rows, cols) +
                             ", got " + t.shape_str());
    }
}

void require_same_shape(const Tensor2& a, const Tensor2& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch " + a.shape_str() +
                             " vs " + b.shape_str());
    }
}

Tensor2 add(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "add");
    Tensor2 out(a.rows, a.cols);
    for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] + b.data[i];
    return out;
}

Tensor2 sub(const Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "sub");
    Tensor2 out(a.rows, a.cols);
    for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] - b.data[i];
    return out;
}

Tensor2 scale(const Tensor2& a, double s) {
    Tensor2 out(a.rows, a.cols);
    for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * s;
    return out;
}

void add_inplace(Tensor2& a, const Tensor2& b) {
    require_same_shape(a, b, "add_inplace");
    for (size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
}

Tensor2 linear_forward(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
    if (x.cols != w.cols)
        throw DimensionError("linear_forward: input " + x.shape_str() +
                             " incompatible with weights " + w.shape_str());
    require_shape(b, 1, w.rows, "linear_forward bias");
    Tensor2 out(x.rows, w.rows);
    for (int r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double* outr = out.row(r);
        for (int o = 0; o < w.rows; ++o) {
            const double* wr = w.row(o);
            double acc = 0.0;
            for (int i = 0; i < x.cols; ++i) acc += xr[i] * wr[i];
            outr[o] = acc + b.at(0, o);
        }
    }
    return out;
}

Tensor2 linear_backward_input(const Tensor2& upstream, const Tensor2& w) {
    if (upstream.cols != w.rows)
        throw DimensionError("linear_backward_input: upstream " + upstream.shape_str() +
                             " incompatible with weights " + w.shape_str());
    Tensor2 dx(upstream.rows, w.cols);
    for (int r = 0; r < upstream.rows; ++r) {
        const double* gr = upstream.row(r);
        double* dxr = dx.row(r);
        for (int o = 0; o < w.rows; ++o) {
            const double g = gr[o];
            if (g == 0.0) continue;
            const double* wr = w.row(o);
            for (int i = 0; i < w.cols; ++i) dxr[i] += g * wr[i];
        }
    }
    return dx;
}

void linear_backward_params(const Tensor2& upstream, const Tensor2& x, Tensor2& dw, Tensor2& db) {
    if (upstream.rows != x.rows)
        throw DimensionError("linear_backward_params: batch mismatch " + upstream.shape_str() +
                             " vs " + x.shape_str());
    require_shape(dw, upstream.cols, x.cols, "linear_backward_params dw");
    require_shape(db, 1, upstream.cols, "linear_backward_params db");
    for (int r = 0; r < upstream.rows; ++r) {
        const double* gr = upstream.row(r);
        const double* xr = x.row(r);
        for (int o = 0; o < upstream.cols; ++o) {
            const double g = gr[o];
            db.at(0, o) += g;
            if (g == 0.0) continue;
            double* dwr = dw.row(o);
            for (int i = 0; i < x.cols; ++i) dwr[i] += g * xr[i];
        }
    }
}

double DualBuffer::grad_norm2() const {
    double acc = 0.0;
    for (double g : grad.data) acc += g * g;
    return acc;
}

}  // namespace kansdf
