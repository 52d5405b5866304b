#include <cmath>

#include "doctest.h"
#include "kansdf/kdtree.hpp"
#include "kansdf/marching_cubes.hpp"
#include "kansdf/metrics.hpp"
#include "kansdf/rng.hpp"
#include "kansdf/nn.hpp"

using namespace kansdf;

namespace {

Tensor2 random_cloud(Rng& rng, int n) {
    Tensor2 c(n, 3);
    fill_uniform(c, rng, -1.0, 1.0);
    return c;
}

Mesh plane_mesh(double z, bool flip = false) {
    Mesh m;
    m.vertices = {{-1, -1, z}, {1, -1, z}, {1, 1, z}, {-1, 1, z}};
    if (!flip) {
        m.triangles = {{0, 1, 2}, {0, 2, 3}};
    } else {
        m.triangles = {{0, 2, 1}, {0, 3, 2}};
    }
    return m;
}

}  // namespace

TEST_CASE("kd-tree equals brute force on 100 random sets") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(200));
        const Tensor2 cloud = random_cloud(rng, n);
        PointCloudNN tree(cloud);
        for (int q = 0; q < 20; ++q) {
            const Vec3 query{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            double best = 1e300;
            for (int i = 0; i < n; ++i) {
                const double dx = cloud.at(i, 0) - query[0];
                const double dy = cloud.at(i, 1) - query[1];
                const double dz = cloud.at(i, 2) - query[2];
                best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
            CHECK(tree.nearest_sq_dist(query) == best);
        }
    }
}

TEST_CASE("chamfer: trivial and analytic cases") {
    Rng rng(5);
    const Tensor2 a = random_cloud(rng, 50);
    CHECK(chamfer(a, a) == doctest::Approx(0.0));
    const auto p = Tensor2::from_rows({{0.0, 0.0, 0.0}});
    const auto q = Tensor2::from_rows({{0.1, 0.0, 0.0}});
    CHECK(chamfer(p, q) == doctest::Approx(20.0).epsilon(1e-9));
    // symmetry
    const Tensor2 b = random_cloud(rng, 80);
    CHECK(chamfer(a, b) == doctest::Approx(chamfer(b, a)).epsilon(1e-12));
    CHECK_THROWS_AS(chamfer(Tensor2(0, 3), a), DataError);
}

TEST_CASE("chamfer via kd-tree equals brute-force oracle") {
    Rng rng(6);
    const Tensor2 a = random_cloud(rng, 200);
    const Tensor2 b = random_cloud(rng, 200);
    auto dir_mean = [](const Tensor2& from, const Tensor2& to) {
        double acc = 0.0;
        for (int i = 0; i < from.rows; ++i) {
            double best = 1e300;
            for (int j = 0; j < to.rows; ++j) {
                double d2 = 0.0;
                for (int axis = 0; axis < 3; ++axis) {
                    const double d = from.at(i, axis) - to.at(j, axis);
                    d2 += d * d;
                }
                best = std::min(best, d2);
            }
            acc += best;
        }
        return acc / from.rows;
    };
    const double oracle = 1000.0 * (dir_mean(a, b) + dir_mean(b, a));
    CHECK(chamfer(a, b) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("fscore: coincident, disjoint, and constructed P/R") {
    Rng rng(7);
    const Tensor2 a = random_cloud(rng, 64);
    CHECK(fscore(a, a, 0.05) == doctest::Approx(100.0));

    Tensor2 far(4, 3);
    for (int i = 0; i < 4; ++i) {
        far.at(i, 0) = 10.0 + i;
        far.at(i, 1) = 0;
        far.at(i, 2) = 0;
    }
    CHECK(fscore(a, far, 0.05) == doctest::Approx(0.0));

    // P = 1 (both pred points near gt), R = 0.5 (one gt point uncovered).
    const auto pred = Tensor2::from_rows({{0.0, 0.0, 0.0}, {0.01, 0.0, 0.0}});
    const auto gt = Tensor2::from_rows({{0.0, 0.0, 0.0}, {5.0, 0.0, 0.0}});
    CHECK(fscore(pred, gt, 0.05) == doctest::Approx(200.0 * 0.5 / 1.5).epsilon(1e-9));
}

TEST_CASE("normal consistency: identical, flipped, orthogonal planes") {
    const Mesh m = plane_mesh(0.0);
    CHECK(normal_consistency(m, m, 2000, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(normal_consistency(m, plane_mesh(0.0, true), 2000, 2) ==
          doctest::Approx(1.0).epsilon(1e-6));

    // orthogonal planes through the same region
    Mesh vertical;
    vertical.vertices = {{-1, 0, -1}, {1, 0, -1}, {1, 0, 1}, {-1, 0, 1}};
    vertical.triangles = {{0, 1, 2}, {0, 2, 3}};
    CHECK(normal_consistency(m, vertical, 2000, 3) < 0.05);
}

TEST_CASE("iou: identical, disjoint, half-shifted box") {
    const AnalyticShape box{ShapeKind::Box, {0.5, 0.5, 0.5}};
    const auto ga = sample_sdf_grid(box, 64);
    CHECK(iou(ga, ga) == doctest::Approx(1.0));

    AnalyticShape left{ShapeKind::Box, {0.2, 0.2, 0.2}, {-0.6, 0, 0}};
    AnalyticShape right{ShapeKind::Box, {0.2, 0.2, 0.2}, {0.6, 0, 0}};
    CHECK(iou(sample_sdf_grid(left, 32), sample_sdf_grid(right, 32)) == doctest::Approx(0.0));

    // unit-width box vs the same box shifted by half its width: IoU = 1/3
    AnalyticShape base{ShapeKind::Box, {0.5, 0.5, 0.5}};
    AnalyticShape shifted{ShapeKind::Box, {0.5, 0.5, 0.5}, {0.5, 0, 0}};
    // keep the shifted box inside the domain: both fit in [-1, 1]
    CHECK(iou(sample_sdf_grid(base, 64), sample_sdf_grid(shifted, 64)) ==
          doctest::Approx(1.0 / 3.0).epsilon(0.06));

    auto empty = make_grid(8);
    std::fill(empty.values.begin(), empty.values.end(), 1.0);
    CHECK(iou(empty, empty) == 1.0);
}

TEST_CASE("psnr proxy: cap, analytic value, monotonicity") {
    const AnalyticShape s{ShapeKind::Sphere, {0.5}};
    const auto gt = sample_sdf_grid(s, 16);
    CHECK(psnr_proxy(gt, gt, 0.1) == 99.0);

    // uniform error of 0.1*delta on clamped values -> MSE = 0.01 delta^2 -> 20 dB
    const double delta = 0.1;
    auto pred = gt;
    for (double& v : pred.values) {
        const double clamped = std::clamp(v, -delta, delta);
        // target clamp(pred) = clamp(gt) + 0.1*delta, reachable when the shift
        // stays strictly inside the clamp range
        v = std::clamp(clamped + 0.1 * delta, -delta, delta);
        if (clamped + 0.1 * delta > delta) v = 1e9;  // marker: will re-derive below
    }
    // build an exact case instead: gt 0 everywhere, pred = 0.1*delta
    auto zero = make_grid(8);
    auto off = make_grid(8);
    std::fill(off.values.begin(), off.values.end(), 0.1 * delta);
    CHECK(psnr_proxy(off, zero, delta) == doctest::Approx(20.0).epsilon(1e-9));

    auto worse = make_grid(8);
    std::fill(worse.values.begin(), worse.values.end(), 0.2 * delta);
    CHECK(psnr_proxy(worse, zero, delta) < psnr_proxy(off, zero, delta));
}

TEST_CASE("evaluate_instance: self-reconstruction ceiling on a sphere") {
    const AnalyticShape shape{ShapeKind::Sphere, {0.5}};
    EvalConfig cfg;
    cfg.grid_resolution = 64;
    cfg.surface_samples = 10000;
    cfg.seed = 42;
    const auto grid = sample_sdf_grid(shape, 64);
    const auto mesh = marching_cubes(grid, 0.0);
    const auto report = evaluate_instance(mesh, grid, shape, cfg);
    CHECK(report.valid);
    CHECK(report.cd < 1.0);
    CHECK(report.iou > 0.95);
    CHECK(report.nc > 0.97);
    CHECK(report.fscore > 99.0);
    CHECK(report.psnr_sdf == 99.0);

    // determinism
    const auto again = evaluate_instance(mesh, grid, shape, cfg);
    CHECK(again.cd == report.cd);
    CHECK(again.nc == report.nc);

    // empty prediction is flagged, not an exception
    const auto bad = evaluate_instance(Mesh{}, grid, shape, cfg);
    CHECK_FALSE(bad.valid);
}
