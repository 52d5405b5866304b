#pragma once

#include <array>
#include <string>
#include <vector>

#include "kansdf/rng.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

enum class ShapeKind { Sphere, Box, Torus, Cylinder, Capsule };

const char* shape_kind_name(ShapeKind kind);
ShapeKind shape_kind_from_name(const std::string& name);

// Analytic solid with an exact signed distance, posed by translation and
// uniform scale.  Params are per-kind canonical dimensions:
//   sphere:   {radius}
//   box:      {hx, hy, hz} half extents
//   torus:    {major_radius, minor_radius}
//   cylinder: {radius, half_height}
//   capsule:  {radius, half_height of the straight segment}
struct AnalyticShape {
    ShapeKind kind = ShapeKind::Sphere;
    std::vector<double> params;
    Vec3 translate{0.0, 0.0, 0.0};
    double scale = 1.0;

    // Conservative bounding radius of the canonical (unposed) shape.
    double bound_radius() const;
};

// Exact signed distance, negative inside.
double analytic_sdf(const AnalyticShape& shape, const Vec3& p);

// Normalized SDF gradient by central differences (step 1e-6).
Vec3 sdf_gradient(const AnalyticShape& shape, const Vec3& p);

// Point on the surface: random domain point iterated to the zero level set
// along the gradient.  Exact-SDF shapes converge in a few steps.
Vec3 project_to_surface(const AnalyticShape& shape, Vec3 p, int iters = 8);

// One supervision sample: query position and its true signed distance.
struct SdfSample {
    Vec3 position{0.0, 0.0, 0.0};
    double sdf = 0.0;
};

// n samples: 40% near-surface (surface point + N(0, 0.03) offset),
// 40% uniform in [-1,1]^3, 20% in a thin shell |sdf| < 0.01.
std::vector<SdfSample> sample_training_points(const AnalyticShape& shape, int n, uint64_t seed);

// n points on the surface (projection sampling), sorted lexicographically by
// (x, y, z) for a deterministic canonical ordering.  Returned as [n x 3].
Tensor2 sample_surface_points(const AnalyticShape& shape, int n, uint64_t seed);

// Orthographic depth render: rays start at z = 1 over [-1,1]^2 and march
// toward -z.  Misses hold the background sentinel 2.0.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<double> depths;  // row-major

    double at(int row, int col) const { return depths[static_cast<size_t>(row) * width + col]; }
    static constexpr double kBackground = 2.0;
};

DepthImage render_depth(const AnalyticShape& shape, int resolution);

// Regular lattice of SDF values over [-1,1]^3 (res points per axis).
struct SdfGrid {
    int res = 0;
    double origin = -1.0;
    double spacing = 0.0;
    std::vector<double> values;  // index (ix, iy, iz) -> ix + res*(iy + res*iz)

    double at(int ix, int iy, int iz) const {
        return values[static_cast<size_t>(ix) + static_cast<size_t>(res) * (iy + static_cast<size_t>(res) * iz)];
    }
    double& at(int ix, int iy, int iz) {
        return values[static_cast<size_t>(ix) + static_cast<size_t>(res) * (iy + static_cast<size_t>(res) * iz)];
    }
    Vec3 position(int ix, int iy, int iz) const {
        return {origin + ix * spacing, origin + iy * spacing, origin + iz * spacing};
    }
};

SdfGrid make_grid(int res);
SdfGrid sample_sdf_grid(const AnalyticShape& shape, int res);

}  // namespace kansdf
