#pragma once

#include <array>
#include <string>
#include <vector>

#include "kansdf/geometry.hpp"
#include "kansdf/tensor.hpp"

namespace kansdf {

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> normals;  // per vertex; empty or size == vertices.size()

    bool empty() const { return triangles.empty(); }
    double total_area() const;
    // Signed volume via the divergence theorem; positive for outward winding.
    double signed_volume() const;
    // Every undirected edge shared by exactly two triangles.
    bool watertight() const;
};

// ASCII OBJ with v / vn / f records, 1-based indices.
void write_obj(const std::string& path, const Mesh& mesh);
Mesh read_obj(const std::string& path);

struct SurfaceSample {
    Tensor2 points;   // [n x 3]
    Tensor2 normals;  // [n x 3]
};

// Area-weighted triangle selection, uniform barycentric placement.  Normals
// interpolate the vertex normals when present, else use the face normal.
SurfaceSample sample_mesh_surface(const Mesh& mesh, int n, uint64_t seed);

}  // namespace kansdf
