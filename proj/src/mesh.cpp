#include "kansdf/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "kansdf/errors.hpp"

namespace kansdf {

namespace {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

}  // namespace

double Mesh::total_area() const {
    double acc = 0.0;
    for (const auto& t : triangles)
        acc += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return acc;
}

double Mesh::signed_volume() const {
    double acc = 0.0;
    for (const auto& t : triangles) {
        const Vec3& a = vertices[t[0]];
        const Vec3& b = vertices[t[1]];
        const Vec3& c = vertices[t[2]];
        acc += dot(a, cross(b, c)) / 6.0;
    }
    return acc;
}

bool Mesh::watertight() const {
    if (triangles.empty()) return false;
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) {
            int u = t[e], v = t[(e + 1) % 3];
            if (u > v) std::swap(u, v);
            edge_count[{u, v}] += 1;
        }
    for (const auto& [edge, count] : edge_count)
        if (count != 2) return false;
    return true;
}

void write_obj(const std::string& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw DataError("write_obj: cannot open " + path);
    char buf[160];
    const bool has_normals = mesh.normals.size() == mesh.vertices.size();
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
        out << buf;
    }
    if (has_normals) {
        for (const auto& n : mesh.normals) {
            std::snprintf(buf, sizeof buf, "vn %.9g %.9g %.9g\n", n[0], n[1], n[2]);
            out << buf;
        }
    }
    for (const auto& t : mesh.triangles) {
        if (has_normals)
            std::snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1,
                          t[1] + 1, t[1] + 1, t[2] + 1, t[2] + 1);
        else
            std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out << buf;
    }
    if (!out) throw DataError("write_obj: write failed for " + path);
}

namespace {

int parse_face_vertex(const std::string& token, int line_no) {
    // Accept "v", "v/t", "v//n", "v/t/n"; only the vertex index matters here.
    try {
        size_t pos = 0;
        const int v = std::stoi(token, &pos);
        if (pos != token.size() && token[pos] != '/')
            throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw FormatError("read_obj: malformed face token '" + token + "' at line " +
                          std::to_string(line_no));
    }
}

}  // namespace

Mesh read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("read_obj: cannot open " + path);
    Mesh mesh;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v[0] >> v[1] >> v[2]))
                throw FormatError("read_obj: malformed vertex at line " + std::to_string(line_no));
            mesh.vertices.push_back(v);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ls >> n[0] >> n[1] >> n[2]))
                throw FormatError("read_obj: malformed normal at line " + std::to_string(line_no));
            mesh.normals.push_back(n);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ls >> token) idx.push_back(parse_face_vertex(token, line_no));
            if (idx.size() != 3)
                throw FormatError("read_obj: face with " + std::to_string(idx.size()) +
                                  " vertices at line " + std::to_string(line_no) +
                                  " (triangles only)");
            for (int& v : idx) {
                if (v < 0 || v > static_cast<int>(mesh.vertices.size()))
                    throw FormatError("read_obj: vertex index " + std::to_string(v) +
                                      " out of range at line " + std::to_string(line_no));
                v -= 1;
            }
            mesh.triangles.push_back({idx[0], idx[1], idx[2]});
        }
    }
    if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size()) mesh.normals.clear();
    return mesh;
}

SurfaceSample sample_mesh_surface(const Mesh& mesh, int n, uint64_t seed) {
    if (mesh.triangles.empty()) throw DataError("sample_mesh_surface: empty mesh");
    std::vector<double> cumulative(mesh.triangles.size());
    double acc = 0.0;
    for (size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        acc += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        cumulative[i] = acc;
    }
    if (acc <= 0.0) throw DataError("sample_mesh_surface: zero total area");

    Rng rng = derive_rng(seed, "mesh_surface");
    SurfaceSample out;
    out.points = Tensor2(n, 3);
    out.normals = Tensor2(n, 3);
    const bool has_normals = mesh.normals.size() == mesh.vertices.size();
    for (int s = 0; s < n; ++s) {
        const double r = rng.uniform() * acc;
        const size_t ti = std::lower_bound(cumulative.begin(), cumulative.end(), r) -
                          cumulative.begin();
        const auto& t = mesh.triangles[std::min(ti, mesh.triangles.size() - 1)];
        // Uniform barycentric via the sqrt trick.
        const double su = std::sqrt(rng.uniform());
        const double v = rng.uniform();
        const double w0 = 1.0 - su, w1 = su * (1.0 - v), w2 = su * v;
        const Vec3 p = mesh.vertices[t[0]] * w0 + mesh.vertices[t[1]] * w1 + mesh.vertices[t[2]] * w2;
        Vec3 nrm;
        if (has_normals) {
            nrm = normalized(mesh.normals[t[0]] * w0 + mesh.normals[t[1]] * w1 +
                             mesh.normals[t[2]] * w2);
        } else {
            nrm = normalized(cross(mesh.vertices[t[1]] - mesh.vertices[t[0]],
                                   mesh.vertices[t[2]] - mesh.vertices[t[0]]));
        }
        for (int a = 0; a < 3; ++a) {
            out.points.at(s, a) = p[a];
            out.normals.at(s, a) = nrm[a];
        }
    }
    return out;
}

}  // namespace kansdf
