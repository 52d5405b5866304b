#include "kansdf/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "kansdf/errors.hpp"

namespace kansdf {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n < 1e-300) return {0.0, 0.0, 1.0};
    return v * (1.0 / n);
}

const char* shape_kind_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Sphere: return "sphere";
        case ShapeKind::Box: return "box";
        case ShapeKind::Torus: return "torus";
        case ShapeKind::Cylinder: return "cylinder";
        case ShapeKind::Capsule: return "capsule";
    }
    return "sphere";
}

ShapeKind shape_kind_from_name(const std::string& name) {
    if (name == "sphere") return ShapeKind::Sphere;
    if (name == "box") return ShapeKind::Box;
    if (name == "torus") return ShapeKind::Torus;
    if (name == "cylinder") return ShapeKind::Cylinder;
    if (name == "capsule") return ShapeKind::Capsule;
    throw DataError("unknown shape kind: " + name);
}

namespace {

double sdf_sphere(const Vec3& p, double r) { return norm(p) - r; }

double sdf_box(const Vec3& p, double hx, double hy, double hz) {
    const Vec3 q{std::fabs(p[0]) - hx, std::fabs(p[1]) - hy, std::fabs(p[2]) - hz};
    const Vec3 qp{std::max(q[0], 0.0), std::max(q[1], 0.0), std::max(q[2], 0.0)};
    const double outside = norm(qp);
    const double inside = std::min(std::max(q[0], std::max(q[1], q[2])), 0.0);
    return outside + inside;
}

double sdf_torus(const Vec3& p, double major, double minor) {
    const double ring = std::sqrt(p[0] * p[0] + p[2] * p[2]) - major;
    return std::sqrt(ring * ring + p[1] * p[1]) - minor;
}

double sdf_cylinder(const Vec3& p, double r, double hh) {
    const double dx = std::sqrt(p[0] * p[0] + p[2] * p[2]) - r;
    const double dy = std::fabs(p[1]) - hh;
    const double ox = std::max(dx, 0.0), oy = std::max(dy, 0.0);
    return std::min(std::max(dx, dy), 0.0) + std::sqrt(ox * ox + oy * oy);
}

double sdf_capsule(const Vec3& p, double r, double hh) {
    const double y = p[1] - std::clamp(p[1], -hh, hh);
    return std::sqrt(p[0] * p[0] + y * y + p[2] * p[2]) - r;
}

double param(const AnalyticShape& s, size_t i, const char* what) {
    if (i >= s.params.size())
        throw DataError(std::string("shape ") + shape_kind_name(s.kind) + " missing param " + what);
    return s.params[i];
}

}  // namespace

double AnalyticShape::bound_radius() const {
    switch (kind) {
        case ShapeKind::Sphere: return params.at(0);
        case ShapeKind::Box: {
            const double hx = params.at(0), hy = params.at(1), hz = params.at(2);
            return std::sqrt(hx * hx + hy * hy + hz * hz);
        }
        case ShapeKind::Torus: return params.at(0) + params.at(1);
        case ShapeKind::Cylinder: {
            const double r = params.at(0), hh = params.at(1);
            return std::sqrt(r * r + hh * hh);
        }
        case ShapeKind::Capsule: return params.at(1) + params.at(0);
    }
    return 1.0;
}

double analytic_sdf(const AnalyticShape& shape, const Vec3& p) {
    // Uniform scale keeps the distance exact: d(p) = s * d_canonical((p - t)/s).
    const Vec3 q = (p - shape.translate) * (1.0 / shape.scale);
    double d = 0.0;
    switch (shape.kind) {
        case ShapeKind::Sphere: d = sdf_sphere(q, param(shape, 0, "radius")); break;
        case ShapeKind::Box:
            d = sdf_box(q, param(shape, 0, "hx"), param(shape, 1, "hy"), param(shape, 2, "hz"));
            break;
        case ShapeKind::Torus:
            d = sdf_torus(q, param(shape, 0, "major"), param(shape, 1, "minor"));
            break;
        case ShapeKind::Cylinder:
            d = sdf_cylinder(q, param(shape, 0, "radius"), param(shape, 1, "half_height"));
            break;
        case ShapeKind::Capsule:
            d = sdf_capsule(q, param(shape, 0, "radius"), param(shape, 1, "half_height"));
            break;
    }
    return d * shape.scale;
}

Vec3 sdf_gradient(const AnalyticShape& shape, const Vec3& p) {
    const double h = 1e-6;
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 lo = p, hi = p;
        lo[a] -= h;
        hi[a] += h;
        g[a] = (analytic_sdf(shape, hi) - analytic_sdf(shape, lo)) / (2.0 * h);
    }
    return normalized(g);
}

Vec3 project_to_surface(const AnalyticShape& shape, Vec3 p, int iters) {
    for (int it = 0; it < iters; ++it) {
        const double d = analytic_sdf(shape, p);
        if (std::fabs(d) < 1e-12) break;
        const Vec3 g = sdf_gradient(shape, p);
        p = p - g * d;
    }
    return p;
}

namespace {

Vec3 random_domain_point(Rng& rng) {
    return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

Vec3 clamp_domain(Vec3 p) {
    for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a], -1.0, 1.0);
    return p;
}

}  // namespace

std::vector<SdfSample> sample_training_points(const AnalyticShape& shape, int n, uint64_t seed) {
    Rng rng = derive_rng(seed, "train_samples");
    std::vector<SdfSample> out;
    out.reserve(n);
    const int n_near = (n * 4) / 10;
    const int n_uniform = (n * 4) / 10;
    const int n_shell = n - n_near - n_uniform;
    for (int i = 0; i < n_near; ++i) {
        Vec3 s = project_to_surface(shape, random_domain_point(rng));
        Vec3 p = clamp_domain({s[0] + rng.normal(0.0, 0.03), s[1] + rng.normal(0.0, 0.03),
                               s[2] + rng.normal(0.0, 0.03)});
        out.push_back({p, analytic_sdf(shape, p)});
    }
    for (int i = 0; i < n_uniform; ++i) {
        const Vec3 p = random_domain_point(rng);
        out.push_back({p, analytic_sdf(shape, p)});
    }
    for (int i = 0; i < n_shell; ++i) {
        const Vec3 s = project_to_surface(shape, random_domain_point(rng));
        const Vec3 g = sdf_gradient(shape, s);
        const double offset = rng.uniform(-0.0099, 0.0099);
        const Vec3 p = clamp_domain(s + g * offset);
        out.push_back({p, analytic_sdf(shape, p)});
    }
    return out;
}

Tensor2 sample_surface_points(const AnalyticShape& shape, int n, uint64_t seed) {
    Rng rng = derive_rng(seed, "surface_points");
    std::vector<Vec3> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i)
        pts.push_back(project_to_surface(shape, random_domain_point(rng)));
    // Canonical ordering: lexicographic by (x, y, z).
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        if (a[1] != b[1]) return a[1] < b[1];
        return a[2] < b[2];
    });
    Tensor2 out(n, 3);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < 3; ++a) out.at(i, a) = pts[i][a];
    return out;
}

DepthImage render_depth(const AnalyticShape& shape, int resolution) {
    DepthImage img;
    img.width = resolution;
    img.height = resolution;
    img.depths.assign(static_cast<size_t>(resolution) * resolution, DepthImage::kBackground);
    for (int row = 0; row < resolution; ++row) {
        const double y = -1.0 + 2.0 * (row + 0.5) / resolution;
        for (int col = 0; col < resolution; ++col) {
            const double x = -1.0 + 2.0 * (col + 0.5) / resolution;
            double t = 0.0;
            for (int step = 0; step < 64; ++step) {
                const Vec3 p{x, y, 1.0 - t};
                const double d = analytic_sdf(shape, p);
                if (d < 1e-4) {
                    img.depths[static_cast<size_t>(row) * resolution + col] =
                        std::min(t, DepthImage::kBackground);
                    break;
                }
                t += d;
                if (t > DepthImage::kBackground) break;
            }
        }
    }
    return img;
}

SdfGrid make_grid(int res) {
    if (res < 2) throw DataError("grid resolution must be >= 2");
    SdfGrid g;
    g.res = res;
    g.origin = -1.0;
    g.spacing = 2.0 / (res - 1);
    g.values.assign(static_cast<size_t>(res) * res * res, 0.0);
    return g;
}

SdfGrid sample_sdf_grid(const AnalyticShape& shape, int res) {
    SdfGrid g = make_grid(res);
    for (int iz = 0; iz < res; ++iz)
        for (int iy = 0; iy < res; ++iy)
            for (int ix = 0; ix < res; ++ix)
                g.at(ix, iy, iz) = analytic_sdf(shape, g.position(ix, iy, iz));
    return g;
}

}  // namespace kansdf
