#include "kansdf/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace kansdf {

bool SplineGrid::valid() const {
    if (grid_size < 1 || spline_order < 1) return false;
    if (static_cast<int>(knots.size()) != grid_size + 2 * spline_order + 1) return false;
    for (size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) return false;
    return true;
}

SplineGrid uniform_grid(double x_min, double x_max, int grid_size, int spline_order) {
    if (!(x_max > x_min))
        throw DataError("uniform_grid: degenerate range [" + std::to_string(x_min) + ", " +
                        std::to_string(x_max) + "]");
    if (grid_size < 1) throw DataError("uniform_grid: grid_size must be >= 1");
    if (spline_order < 1) throw DataError("uniform_grid: spline_order must be >= 1");
    SplineGrid g;
    g.grid_size = grid_size;
    g.spline_order = spline_order;
    const double h = (x_max - x_min) / grid_size;
    g.knots.resize(grid_size + 2 * spline_order + 1);
    for (int i = 0; i < static_cast<int>(g.knots.size()); ++i)
        g.knots[i] = x_min + (i - spline_order) * h;
    return g;
}

SplineGrid grid_from_interior(std::span<const double> interior, double h, int spline_order) {
    if (interior.size() < 2) throw DataError("grid_from_interior: need at least 2 interior knots");
    if (!(h > 0.0)) throw DataError("grid_from_interior: extension spacing must be positive");
    SplineGrid g;
    g.grid_size = static_cast<int>(interior.size()) - 1;
    g.spline_order = spline_order;
    g.knots.resize(g.grid_size + 2 * spline_order + 1);
    for (size_t i = 0; i < interior.size(); ++i) g.knots[spline_order + i] = interior[i];
    for (int j = 1; j <= spline_order; ++j) {
        g.knots[spline_order - j] = interior.front() - j * h;
        g.knots[spline_order + g.grid_size + j] = interior.back() + j * h;
    }
    // Merge ties: nudge any non-increasing knot up by 1e-9.
    for (size_t i = 1; i < g.knots.size(); ++i)
        if (g.knots[i] <= g.knots[i - 1]) g.knots[i] = g.knots[i - 1] + 1e-9;
    return g;
}

namespace {

// Largest span s with knots[s] <= x, capped to the last span so that
// x == knots.back() evaluates in the final interval.
int find_span(double x, const SplineGrid& g) {
    const auto& t = g.knots;
    const int n_spans = static_cast<int>(t.size()) - 1;
    if (x <= t.front()) return 0;
    if (x >= t.back()) return n_spans - 1;
    const int s = static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
    return std::min(std::max(s, 0), n_spans - 1);
}

// Cox-de Boor levels d_from..d_to, in place over the active window
// [span-d, span].  work holds level d_from-1 values on entry (the order-0
// start is the indicator work[span] = 1, everything else zero).
void raise_degree(double x, const SplineGrid& g, int span, int d_from, int d_to, double* work) {
    const auto& t = g.knots;
    const int n_spans = static_cast<int>(t.size()) - 1;
    for (int d = d_from; d <= d_to; ++d) {
        const int lo = std::max(0, span - d);
        const int hi = std::min(span, n_spans - 1 - d);
        for (int s = lo; s <= hi; ++s) {
            const double left = work[s] == 0.0
                                    ? 0.0
                                    : (x - t[s]) / (t[s + d] - t[s]) * work[s];
            const double right = work[s + 1] == 0.0
                                     ? 0.0
                                     : (t[s + d + 1] - x) / (t[s + d + 1] - t[s + 1]) * work[s + 1];
            work[s] = left + right;
        }
    }
}

}  // namespace

void basis_at(double x, const SplineGrid& g, double* vals) {
    const int nb = g.num_basis();
    const double xc = std::clamp(x, g.knots.front(), g.knots.back());
    const int span = find_span(xc, g);
    const int n_spans = static_cast<int>(g.knots.size()) - 1;
    std::vector<double> work(n_spans + 1, 0.0);
    work[span] = 1.0;
    raise_degree(xc, g, span, 1, g.spline_order, work.data());
    std::memcpy(vals, work.data(), sizeof(double) * nb);
}

void basis_and_deriv_at(double x, const SplineGrid& g, double* vals, double* derivs) {
    const int k = g.spline_order;
    const int nb = g.num_basis();
    const bool clamped = (x < g.knots.front()) || (x > g.knots.back());
    const double xc = std::clamp(x, g.knots.front(), g.knots.back());
    const int span = find_span(xc, g);
    const int n_spans = static_cast<int>(g.knots.size()) - 1;
    std::vector<double> work(n_spans + 1, 0.0);
    work[span] = 1.0;
    raise_degree(xc, g, span, 1, k - 1, work.data());
    // dB_s^k = k * (B_s^{k-1}/(t[s+k]-t[s]) - B_{s+1}^{k-1}/(t[s+k+1]-t[s+1])),
    // zero wherever the extended-span clamp froze the input.
    const auto& t = g.knots;
    for (int s = 0; s < nb; ++s) {
        if (clamped) {
            derivs[s] = 0.0;
            continue;
        }
        const double lo_term = work[s] == 0.0 ? 0.0 : work[s] / (t[s + k] - t[s]);
        const double hi_term = work[s + 1] == 0.0 ? 0.0 : work[s + 1] / (t[s + k + 1] - t[s + 1]);
        derivs[s] = k * (lo_term - hi_term);
    }
    raise_degree(xc, g, span, k, k, work.data());
    std::memcpy(vals, work.data(), sizeof(double) * nb);
}

Tensor2 basis(std::span<const double> xs, const SplineGrid& g) {
    Tensor2 out(static_cast<int>(xs.size()), g.num_basis());
    for (size_t r = 0; r < xs.size(); ++r) basis_at(xs[r], g, out.row(static_cast<int>(r)));
    return out;
}

double eval_spline(double x, std::span<const double> coeffs, const SplineGrid& g) {
    const int nb = g.num_basis();
    if (static_cast<int>(coeffs.size()) != nb)
        throw DimensionError("eval_spline: " + std::to_string(coeffs.size()) +
                             " coefficients for " + std::to_string(nb) + " basis functions");
    std::vector<double> vals(nb);
    basis_at(x, g, vals.data());
    double acc = 0.0;
    for (int i = 0; i < nb; ++i) acc += coeffs[i] * vals[i];
    return acc;
}

namespace {

// Cholesky factorization in place; throws on loss of positive definiteness.
void cholesky(std::vector<double>& a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (int p = 0; p < j; ++p) sum -= a[i * n + p] * a[j * n + p];
            if (i == j) {
                if (!(sum > 0.0) || !std::isfinite(sum))
                    throw NumericalError("fit_coefficients: normal equations not positive definite "
                                         "(rank-deficient beyond damping)");
                a[i * n + i] = std::sqrt(sum);
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
    }
}

void cholesky_solve(const std::vector<double>& chol, int n, std::vector<double>& rhs) {
    for (int i = 0; i < n; ++i) {
        double sum = rhs[i];
        for (int p = 0; p < i; ++p) sum -= chol[i * n + p] * rhs[p];
        rhs[i] = sum / chol[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = rhs[i];
        for (int p = i + 1; p < n; ++p) sum -= chol[p * n + i] * rhs[p];
        rhs[i] = sum / chol[i * n + i];
    }
}

}  // namespace

Tensor2 fit_coefficients_multi(std::span<const double> xs, const Tensor2& ys, const SplineGrid& g) {
    const int nb = g.num_basis();
    const int n = static_cast<int>(xs.size());
    if (n < nb)
        throw NumericalError("fit_coefficients: " + std::to_string(n) + " samples for " +
                             std::to_string(nb) + " basis functions (underdetermined)");
    if (ys.cols != n)
        throw DimensionError("fit_coefficients: targets " + ys.shape_str() + " vs " +
                             std::to_string(n) + " samples");
    constexpr double lambda = 1e-8;
    std::vector<double> ata(static_cast<size_t>(nb) * nb, 0.0);
    Tensor2 aty(ys.rows, nb);
    std::vector<double> row(nb);
    for (int i = 0; i < n; ++i) {
        basis_at(xs[i], g, row.data());
        for (int a = 0; a < nb; ++a) {
            if (row[a] == 0.0) continue;
            for (int b = 0; b <= a; ++b) ata[a * nb + b] += row[a] * row[b];
            for (int r = 0; r < ys.rows; ++r) aty.at(r, a) += row[a] * ys.at(r, i);
        }
    }
    for (int a = 0; a < nb; ++a) {
        for (int b = a + 1; b < nb; ++b) ata[a * nb + b] = ata[b * nb + a];
        ata[a * nb + a] += lambda;
    }
    cholesky(ata, nb);
    Tensor2 coeffs(ys.rows, nb);
    std::vector<double> rhs(nb);
    for (int r = 0; r < ys.rows; ++r) {
        for (int a = 0; a < nb; ++a) rhs[a] = aty.at(r, a);
        cholesky_solve(ata, nb, rhs);
        for (int a = 0; a < nb; ++a) {
            if (!std::isfinite(rhs[a]))
                throw NumericalError("fit_coefficients: non-finite solution");
            coeffs.at(r, a) = rhs[a];
        }
    }
    return coeffs;
}

std::vector<double> fit_coefficients(std::span<const double> xs, std::span<const double> ys,
                                     const SplineGrid& g) {
    if (xs.size() != ys.size())
        throw DimensionError("fit_coefficients: " + std::to_string(xs.size()) + " xs vs " +
                             std::to_string(ys.size()) + " ys");
    Tensor2 yrow(1, static_cast<int>(ys.size()));
    std::copy(ys.begin(), ys.end(), yrow.data.begin());
    Tensor2 c = fit_coefficients_multi(xs, yrow, g);
    return {c.data.begin(), c.data.end()};
}

}  // namespace kansdf
