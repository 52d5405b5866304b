#include "kansdf/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kansdf/errors.hpp"

namespace kansdf {

namespace {
constexpr int kLeafSize = 8;

double sq_dist(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}
}  // namespace

PointCloudNN::PointCloudNN(const Tensor2& points) {
    if (points.rows < 1 || points.cols != 3)
        throw DataError("PointCloudNN: need a non-empty [n x 3] cloud, got " + points.shape_str());
    points_.resize(points.rows);
    for (int i = 0; i < points.rows; ++i)
        points_[i] = {points.at(i, 0), points.at(i, 1), points.at(i, 2)};
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 4);
    root_ = build(0, static_cast<int>(points_.size()));
}

int PointCloudNN::build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin <= kLeafSize) {
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (int i = begin; i < end; ++i) {
        const Vec3& p = points_[order_[i]];
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int i, int j) { return points_[i][axis] < points_[j][axis]; });
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void PointCloudNN::search(int node_idx, const Vec3& q, int& best, double& best_d2) const {
    const Node& node = nodes_[node_idx];
    if (node.axis < 0) {
        for (int i = node.begin; i < node.end; ++i) {
            const double d2 = sq_dist(q, points_[order_[i]]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = order_[i];
            }
        }
        return;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    search(near, q, best, best_d2);
    if (delta * delta < best_d2) search(far, q, best, best_d2);
}

std::pair<int, double> PointCloudNN::nearest(const Vec3& query) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    search(root_, query, best, best_d2);
    return {best, best_d2};
}

}  // namespace kansdf
