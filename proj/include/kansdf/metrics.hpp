#pragma once

#include <optional>
#include <string>

#include "kansdf/geometry.hpp"
#include "kansdf/mesh.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

// One reconstruction's scores.  cd is the x1000-scaled symmetric squared
// chamfer distance; fscore a percentage; nc and iou in [0,1]; psnr_sdf the
// clamped-SDF proxy in dB capped at 99.
struct MetricReport {
    double cd = 0.0;
    double fscore = 0.0;
    double nc = 0.0;
    double iou = 0.0;
    double psnr_sdf = 0.0;
    bool valid = true;
    std::string note;
};

// 1000 * (mean_a min_b ||a-b||^2 + mean_b min_a ||a-b||^2)
double chamfer(const Tensor2& cloud_a, const Tensor2& cloud_b);

// 200*P*R/(P+R) with P/R the fractions of points within tau of the other
// cloud; 0 when P+R = 0.
double fscore(const Tensor2& cloud_a, const Tensor2& cloud_b, double tau);

// Mean absolute cosine between sampled normals and the normals at their
// nearest neighbors, averaged over both directions.
double normal_consistency(const Mesh& mesh_a, const Mesh& mesh_b, int samples, uint64_t seed);

// Occupancy IoU of (sdf < 0); 1.0 when both grids are empty.
double iou(const SdfGrid& sdf_a, const SdfGrid& sdf_b);

// 10*log10(delta^2 / MSE(clamp(pred, +-delta), clamp(gt, +-delta))), capped
// at 99 (the cap also covers MSE = 0).
double psnr_proxy(const SdfGrid& pred, const SdfGrid& gt, double delta);

struct EvalConfig {
    int grid_resolution = 64;
    int surface_samples = 10000;
    double fscore_tau = 0.05;
    double psnr_delta = 0.1;
    uint64_t seed = 0;
};

// Full per-instance evaluation against the analytic ground truth: samples
// both surfaces, resamples the GT grid, and fills every metric.  An empty
// prediction yields an invalid report (flagged, excluded from aggregates).
MetricReport evaluate_instance(const Mesh& pred_mesh, const SdfGrid& pred_grid,
                               const AnalyticShape& gt_shape, const EvalConfig& cfg);

}  // namespace kansdf
