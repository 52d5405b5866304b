#pragma once

#include "kansdf/geometry.hpp"
#include "kansdf/mesh.hpp"

namespace kansdf {

namespace mc {
extern const int kEdgeTable[256];
extern const int kTriTable[256][16];
}  // namespace mc

// Standard 256-case marching cubes with linear edge interpolation.
//
// Vertices are welded by exact edge identity (one vertex per crossed lattice
// edge), so closed level sets come out watertight.  Triangles are oriented
// outward (toward positive values) using the grid gradient at the triangle
// centroid; degenerate zero-area triangles are dropped in a cleanup pass.
// Vertex normals are trilinear interpolations of the central-difference grid
// gradient.  A grid with no iso crossing yields an empty mesh.
Mesh marching_cubes(const SdfGrid& grid, double iso);

}  // namespace kansdf
