#include "kansdf/marching_cubes.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "kansdf/errors.hpp"

namespace kansdf {

namespace {

// Corner offsets in the table convention (see mc_tables.cpp).
constexpr int kCorner[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

constexpr int kEdgeEnds[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0},
    {4, 5}, {5, 6}, {6, 7}, {7, 4},
    {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

// Grid gradient by central differences, one-sided at the boundary.
Vec3 grid_gradient(const SdfGrid& g, int ix, int iy, int iz) {
    auto axis = [&](int a) {
        int lo[3] = {ix, iy, iz}, hi[3] = {ix, iy, iz};
        lo[a] = std::max(lo[a] - 1, 0);
        hi[a] = std::min(hi[a] + 1, g.res - 1);
        const double dv = g.at(hi[0], hi[1], hi[2]) - g.at(lo[0], lo[1], lo[2]);
        const double dx = (hi[a] - lo[a]) * g.spacing;
        return dx > 0.0 ? dv / dx : 0.0;
    };
    return {axis(0), axis(1), axis(2)};
}

Vec3 gradient_at_point(const SdfGrid& g, const Vec3& p) {
    // Trilinear interpolation of corner gradients of the containing cell.
    double fx = (p[0] - g.origin) / g.spacing;
    double fy = (p[1] - g.origin) / g.spacing;
    double fz = (p[2] - g.origin) / g.spacing;
    const int ix = std::clamp(static_cast<int>(fx), 0, g.res - 2);
    const int iy = std::clamp(static_cast<int>(fy), 0, g.res - 2);
    const int iz = std::clamp(static_cast<int>(fz), 0, g.res - 2);
    fx = std::clamp(fx - ix, 0.0, 1.0);
    fy = std::clamp(fy - iy, 0.0, 1.0);
    fz = std::clamp(fz - iz, 0.0, 1.0);
    Vec3 acc{0.0, 0.0, 0.0};
    for (int c = 0; c < 8; ++c) {
        const double wx = kCorner[c][0] ? fx : 1.0 - fx;
        const double wy = kCorner[c][1] ? fy : 1.0 - fy;
        const double wz = kCorner[c][2] ? fz : 1.0 - fz;
        const Vec3 gr = grid_gradient(g, ix + kCorner[c][0], iy + kCorner[c][1], iz + kCorner[c][2]);
        acc = acc + gr * (wx * wy * wz);
    }
    return acc;
}

// Canonical id of a lattice edge: min corner index plus axis tag.
uint64_t edge_key(const SdfGrid& g, int ix, int iy, int iz, int corner_a, int corner_b) {
    int a[3] = {ix + kCorner[corner_a][0], iy + kCorner[corner_a][1], iz + kCorner[corner_a][2]};
    int b[3] = {ix + kCorner[corner_b][0], iy + kCorner[corner_b][1], iz + kCorner[corner_b][2]};
    int axis = -1;
    for (int d = 0; d < 3; ++d)
        if (a[d] != b[d]) axis = d;
    if (b[axis] < a[axis]) std::swap(a[0], b[0]), std::swap(a[1], b[1]), std::swap(a[2], b[2]);
    const uint64_t base = static_cast<uint64_t>(a[0]) +
                          static_cast<uint64_t>(g.res) *
                              (static_cast<uint64_t>(a[1]) + static_cast<uint64_t>(g.res) * a[2]);
    return base * 3 + axis;
}

}  // namespace

Mesh marching_cubes(const SdfGrid& grid, double iso) {
    if (grid.res < 2) throw DataError("marching_cubes: grid must be at least 2^3");
    Mesh mesh;
    std::unordered_map<uint64_t, int> edge_vertex;
    const int n = grid.res;

    double corner_val[8];
    Vec3 corner_pos[8];
    int vert_index[12];

    for (int iz = 0; iz < n - 1; ++iz)
        for (int iy = 0; iy < n - 1; ++iy)
            for (int ix = 0; ix < n - 1; ++ix) {
                int case_index = 0;
                for (int c = 0; c < 8; ++c) {
                    const int cx = ix + kCorner[c][0], cy = iy + kCorner[c][1], cz = iz + kCorner[c][2];
                    corner_val[c] = grid.at(cx, cy, cz);
                    corner_pos[c] = grid.position(cx, cy, cz);
                    if (corner_val[c] < iso) case_index |= 1 << c;
                }
                const int edge_mask = mc::kEdgeTable[case_index];
                if (edge_mask == 0) continue;

                for (int e = 0; e < 12; ++e) {
                    if (!(edge_mask & (1 << e))) continue;
                    const uint64_t key =
                        edge_key(grid, ix, iy, iz, kEdgeEnds[e][0], kEdgeEnds[e][1]);
                    auto it = edge_vertex.find(key);
                    if (it != edge_vertex.end()) {
                        vert_index[e] = it->second;
                        continue;
                    }
                    const double v0 = corner_val[kEdgeEnds[e][0]];
                    const double v1 = corner_val[kEdgeEnds[e][1]];
                    const Vec3& p0 = corner_pos[kEdgeEnds[e][0]];
                    const Vec3& p1 = corner_pos[kEdgeEnds[e][1]];
                    const double denom = v1 - v0;
                    const double t = denom != 0.0 ? std::clamp((iso - v0) / denom, 0.0, 1.0) : 0.5;
                    const Vec3 p = p0 + (p1 - p0) * t;
                    const int idx = static_cast<int>(mesh.vertices.size());
                    mesh.vertices.push_back(p);
                    edge_vertex.emplace(key, idx);
                    vert_index[e] = idx;
                }

                for (int t = 0; mc::kTriTable[case_index][t] != -1; t += 3) {
                    int i0 = vert_index[mc::kTriTable[case_index][t]];
                    int i1 = vert_index[mc::kTriTable[case_index][t + 1]];
                    int i2 = vert_index[mc::kTriTable[case_index][t + 2]];
                    if (i0 == i1 || i1 == i2 || i0 == i2) continue;
                    // Orient outward: triangle normal along the level-set gradient.
                    const Vec3& a = mesh.vertices[i0];
                    const Vec3& b = mesh.vertices[i1];
                    const Vec3& c = mesh.vertices[i2];
                    const Vec3 face_n = cross(b - a, c - a);
                    const Vec3 centroid = (a + b + c) * (1.0 / 3.0);
                    if (dot(face_n, gradient_at_point(grid, centroid)) < 0.0) std::swap(i1, i2);
                    mesh.triangles.push_back({i0, i1, i2});
                }
            }

    // Cleanup: drop exactly-degenerate triangles (coincident vertex positions).
    std::vector<std::array<int, 3>> kept;
    kept.reserve(mesh.triangles.size());
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        const Vec3 n2 = cross(b - a, c - a);
        if (n2[0] == 0.0 && n2[1] == 0.0 && n2[2] == 0.0) continue;
        kept.push_back(tri);
    }
    mesh.triangles = std::move(kept);

    mesh.normals.resize(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
        mesh.normals[i] = normalized(gradient_at_point(grid, mesh.vertices[i]));
    return mesh;
}

}  // namespace kansdf
