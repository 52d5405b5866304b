#include "kansdf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "kansdf/errors.hpp"
#include "kansdf/kdtree.hpp"
#include "kansdf/marching_cubes.hpp"

namespace kansdf {

namespace {

Vec3 row_vec(const Tensor2& t, int r) { return {t.at(r, 0), t.at(r, 1), t.at(r, 2)}; }

double directional_mean_sq(const Tensor2& from, const PointCloudNN& to) {
    double acc = 0.0;
    for (int i = 0; i < from.rows; ++i) acc += to.nearest_sq_dist(row_vec(from, i));
    return acc / from.rows;
}

void require_cloud(const Tensor2& c, const char* name) {
    if (c.rows < 1 || c.cols != 3)
        throw DataError(std::string("metrics: ") + name + " must be a non-empty [n x 3] cloud, got " +
                        c.shape_str());
}

}  // namespace

double chamfer(const Tensor2& cloud_a, const Tensor2& cloud_b) {
    require_cloud(cloud_a, "cloud_a");
    require_cloud(cloud_b, "cloud_b");
    PointCloudNN nn_a(cloud_a), nn_b(cloud_b);
    return 1000.0 * (directional_mean_sq(cloud_a, nn_b) + directional_mean_sq(cloud_b, nn_a));
}

double fscore(const Tensor2& cloud_a, const Tensor2& cloud_b, double tau) {
    require_cloud(cloud_a, "cloud_a");
    require_cloud(cloud_b, "cloud_b");
    if (!(tau > 0.0)) throw DataError("fscore: tau must be positive");
    PointCloudNN nn_a(cloud_a), nn_b(cloud_b);
    const double tau2 = tau * tau;
    int hits_a = 0;
    for (int i = 0; i < cloud_a.rows; ++i)
        if (nn_b.nearest_sq_dist(row_vec(cloud_a, i)) <= tau2) ++hits_a;
    int hits_b = 0;
    for (int i = 0; i < cloud_b.rows; ++i)
        if (nn_a.nearest_sq_dist(row_vec(cloud_b, i)) <= tau2) ++hits_b;
    const double precision = static_cast<double>(hits_a) / cloud_a.rows;
    const double recall = static_cast<double>(hits_b) / cloud_b.rows;
    if (precision + recall == 0.0) return 0.0;
    return 200.0 * precision * recall / (precision + recall);
}

double normal_consistency(const Mesh& mesh_a, const Mesh& mesh_b, int samples, uint64_t seed) {
    const SurfaceSample sa = sample_mesh_surface(mesh_a, samples, seed);
    const SurfaceSample sb = sample_mesh_surface(mesh_b, samples, seed + 1);
    PointCloudNN nn_a(sa.points), nn_b(sb.points);
    auto one_way = [](const SurfaceSample& from, const SurfaceSample& to,
                      const PointCloudNN& to_nn) {
        double acc = 0.0;
        for (int i = 0; i < from.points.rows; ++i) {
            const auto [j, d2] = to_nn.nearest(row_vec(from.points, i));
            const Vec3 na = row_vec(from.normals, i);
            const Vec3 nb = row_vec(to.normals, j);
            acc += std::fabs(dot(na, nb));
        }
        return acc / from.points.rows;
    };
    return 0.5 * (one_way(sa, sb, nn_b) + one_way(sb, sa, nn_a));
}

double iou(const SdfGrid& sdf_a, const SdfGrid& sdf_b) {
    if (sdf_a.res != sdf_b.res)
        throw DimensionError("iou: resolution mismatch " + std::to_string(sdf_a.res) + " vs " +
                             std::to_string(sdf_b.res));
    long inter = 0, uni = 0;
    for (size_t i = 0; i < sdf_a.values.size(); ++i) {
        const bool a = sdf_a.values[i] < 0.0;
        const bool b = sdf_b.values[i] < 0.0;
        inter += (a && b);
        uni += (a || b);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double psnr_proxy(const SdfGrid& pred, const SdfGrid& gt, double delta) {
    if (pred.res != gt.res)
        throw DimensionError("psnr_proxy: resolution mismatch " + std::to_string(pred.res) +
                             " vs " + std::to_string(gt.res));
    if (!(delta > 0.0)) throw DataError("psnr_proxy: delta must be positive");
    double mse = 0.0;
    for (size_t i = 0; i < pred.values.size(); ++i) {
        const double p = std::clamp(pred.values[i], -delta, delta);
        const double g = std::clamp(gt.values[i], -delta, delta);
        mse += (p - g) * (p - g);
    }
    mse /= pred.values.size();
    if (mse == 0.0) return 99.0;
    return std::min(99.0, 10.0 * std::log10(delta * delta / mse));
}

MetricReport evaluate_instance(const Mesh& pred_mesh, const SdfGrid& pred_grid,
                               const AnalyticShape& gt_shape, const EvalConfig& cfg) {
    MetricReport report;
    if (pred_mesh.empty()) {
        report.valid = false;
        report.note = "empty prediction mesh";
        return report;
    }
    const SdfGrid gt_grid = sample_sdf_grid(gt_shape, cfg.grid_resolution);
    const Mesh gt_mesh = marching_cubes(gt_grid, 0.0);
    if (gt_mesh.empty()) {
        report.valid = false;
        report.note = "empty ground-truth mesh";
        return report;
    }
    const SurfaceSample pred_pts = sample_mesh_surface(pred_mesh, cfg.surface_samples, cfg.seed);
    const SurfaceSample gt_pts = sample_mesh_surface(gt_mesh, cfg.surface_samples, cfg.seed + 7);
    report.cd = chamfer(pred_pts.points, gt_pts.points);
    report.fscore = fscore(pred_pts.points, gt_pts.points, cfg.fscore_tau);
    report.nc = normal_consistency(pred_mesh, gt_mesh, cfg.surface_samples, cfg.seed + 11);
    if (pred_grid.res == gt_grid.res) {
        report.iou = iou(pred_grid, gt_grid);
        report.psnr_sdf = psnr_proxy(pred_grid, gt_grid, cfg.psnr_delta);
    } else {
        report.valid = false;
        report.note = "prediction grid resolution mismatch";
    }
    return report;
}

}  // namespace kansdf
