#pragma once

#include <utility>
#include <vector>

#include "kansdf/geometry.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

// Exact nearest-neighbor search over a fixed 3D point set via an axis-median
// kd-tree (median split on the widest axis, small brute-force leaves).
class PointCloudNN {
public:
    explicit PointCloudNN(const Tensor2& points);  // [n x 3]

    // Index into the original point order plus squared distance.
    std::pair<int, double> nearest(const Vec3& query) const;
    double nearest_sq_dist(const Vec3& query) const { return nearest(query).second; }

    int size() const { return static_cast<int>(points_.size()); }
    const Vec3& point(int i) const { return points_[i]; }

private:
    struct Node {
        int axis = -1;       // -1 marks a leaf
        double split = 0.0;
        int begin = 0, end = 0;  // leaf range in order_
        int left = -1, right = -1;
    };

    int build(int begin, int end);
    void search(int node, const Vec3& q, int& best, double& best_d2) const;

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace kansdf
