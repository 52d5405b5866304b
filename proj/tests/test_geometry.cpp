#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "kansdf/geometry.hpp"
#include "kansdf/marching_cubes.hpp"
#include "kansdf/mesh.hpp"
#include "kansdf/rng.hpp"

using namespace kansdf;

namespace {

AnalyticShape sphere(double r, Vec3 t = {0, 0, 0}, double s = 1.0) {
    return {ShapeKind::Sphere, {r}, t, s};
}

AnalyticShape random_shape(Rng& rng) {
    AnalyticShape s;
    switch (rng.next_below(5)) {
        case 0: s = {ShapeKind::Sphere, {rng.uniform(0.2, 0.6)}}; break;
        case 1:
            s = {ShapeKind::Box, {rng.uniform(0.2, 0.5), rng.uniform(0.2, 0.5), rng.uniform(0.2, 0.5)}};
            break;
        case 2: s = {ShapeKind::Torus, {rng.uniform(0.3, 0.5), rng.uniform(0.08, 0.2)}}; break;
        case 3: s = {ShapeKind::Cylinder, {rng.uniform(0.2, 0.4), rng.uniform(0.2, 0.5)}}; break;
        default: s = {ShapeKind::Capsule, {rng.uniform(0.15, 0.3), rng.uniform(0.1, 0.4)}}; break;
    }
    s.translate = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
    s.scale = rng.uniform(0.6, 1.0);
    return s;
}

}  // namespace

TEST_CASE("analytic_sdf: sphere values") {
    auto s = sphere(0.5);
    CHECK(analytic_sdf(s, {0, 0, 0}) == doctest::Approx(-0.5));
    CHECK(analytic_sdf(s, {1, 0, 0}) == doctest::Approx(0.5));
    CHECK(analytic_sdf(s, {0.5, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("analytic_sdf: box, torus, cylinder, capsule spot values") {
    AnalyticShape box{ShapeKind::Box, {0.5, 0.25, 0.25}};
    CHECK(analytic_sdf(box, {0, 0, 0}) == doctest::Approx(-0.25));
    CHECK(analytic_sdf(box, {1.0, 0, 0}) == doctest::Approx(0.5));
    CHECK(analytic_sdf(box, {1.0, 0.75, 0}) ==
          doctest::Approx(std::sqrt(0.5 * 0.5 + 0.5 * 0.5)));

    AnalyticShape torus{ShapeKind::Torus, {0.5, 0.1}};
    CHECK(analytic_sdf(torus, {0.5, 0, 0}) == doctest::Approx(-0.1));
    CHECK(analytic_sdf(torus, {0, 0, 0}) == doctest::Approx(0.4));

    AnalyticShape cyl{ShapeKind::Cylinder, {0.3, 0.4}};
    CHECK(analytic_sdf(cyl, {0, 0, 0}) == doctest::Approx(-0.3));
    CHECK(analytic_sdf(cyl, {0, 0.9, 0}) == doctest::Approx(0.5));

    AnalyticShape cap{ShapeKind::Capsule, {0.2, 0.3}};
    CHECK(analytic_sdf(cap, {0, 0, 0}) == doctest::Approx(-0.2));
    CHECK(analytic_sdf(cap, {0, 0.5, 0}) == doctest::Approx(0.0));
    CHECK(analytic_sdf(cap, {0, 0, 0.7}) == doctest::Approx(0.5));
}

TEST_CASE("analytic_sdf: pose = translation and uniform scale") {
    auto s = sphere(0.5, {1.0, 0.0, 0.0});
    CHECK(analytic_sdf(s, {1, 0, 0}) == doctest::Approx(-0.5));
    auto s2 = sphere(0.5, {0, 0, 0}, 0.5);
    CHECK(analytic_sdf(s2, {0, 0, 0}) == doctest::Approx(-0.25));
}

TEST_CASE("analytic_sdf is 1-Lipschitz on random pairs for every kind") {
    Rng rng(2024);
    for (int t = 0; t < 10; ++t) {
        const auto shape = random_shape(rng);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const Vec3 q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double lhs = std::fabs(analytic_sdf(shape, p) - analytic_sdf(shape, q));
            CHECK(lhs <= norm(p - q) + 1e-12);
        }
    }
}

TEST_CASE("sample_training_points: split counts, domain, exact sdf") {
    const auto shape = sphere(0.5);
    const auto samples = sample_training_points(shape, 1000, 7);
    REQUIRE(samples.size() == 1000);
    int shell = 0;
    for (const auto& s : samples) {
        for (int a = 0; a < 3; ++a) {
            CHECK(s.position[a] >= -1.0);
            CHECK(s.position[a] <= 1.0);
        }
        CHECK(s.sdf == analytic_sdf(shape, s.position));
        if (std::fabs(s.sdf) < 0.01) ++shell;
    }
    CHECK(shell >= 200);  // the 20% shell segment, plus lucky near-surface hits
    // determinism
    const auto again = sample_training_points(shape, 1000, 7);
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].position == again[i].position);
        CHECK(samples[i].sdf == again[i].sdf);
    }
}

TEST_CASE("sample_surface_points: on surface, lexicographically sorted, deterministic") {
    Rng rng(5);
    const auto shape = random_shape(rng);
    const auto pts = sample_surface_points(shape, 256, 11);
    REQUIRE(pts.rows == 256);
    for (int i = 0; i < pts.rows; ++i) {
        const Vec3 p{pts.at(i, 0), pts.at(i, 1), pts.at(i, 2)};
        CHECK(std::fabs(analytic_sdf(shape, p)) < 1e-7);
    }
    for (int i = 1; i < pts.rows; ++i) {
        const auto a = pts.row_span(i - 1), b = pts.row_span(i);
        CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }
    const auto again = sample_surface_points(shape, 256, 11);
    CHECK(pts.data == again.data);
}

TEST_CASE("render_depth: center pixel of a sphere, symmetry, empty scene") {
    const auto shape = sphere(0.5);
    const auto img = render_depth(shape, 32);
    // center four pixels are at +-1/32 from the axis; depth ~ 1 - z_hit
    const double d = img.at(16, 16);
    CHECK(std::fabs(d - 0.5) < 1e-2);
    const double dc = img.at(15, 16);
    CHECK(std::fabs(dc - 0.5) < 1e-2);
    // x-flip symmetry for an x-symmetric shape
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            CHECK(img.at(r, c) == doctest::Approx(img.at(r, 31 - c)).epsilon(1e-6));

    const auto empty = render_depth(sphere(1e-6), 16);
    int background = 0;
    for (double v : empty.depths) background += (v == DepthImage::kBackground);
    CHECK(background >= 16 * 16 - 1);
    for (double v : empty.depths) {
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
}

TEST_CASE("marching cubes: sphere mesh is watertight, outward, radius-accurate") {
    const auto shape = sphere(0.5);
    const auto grid = sample_sdf_grid(shape, 64);
    const auto mesh = marching_cubes(grid, 0.0);
    REQUIRE(!mesh.empty());
    const double cell_diag = grid.spacing * std::sqrt(3.0);
    for (const auto& v : mesh.vertices) {
        const double r = norm(v);
        CHECK(r >= 0.5 - cell_diag);
        CHECK(r <= 0.5 + cell_diag);
    }
    CHECK(mesh.watertight());
    CHECK(mesh.signed_volume() > 0.0);
    // volume close to (4/3) pi r^3
    CHECK(mesh.signed_volume() == doctest::Approx(4.0 / 3.0 * M_PI * 0.125).epsilon(0.02));
}

TEST_CASE("marching cubes: constant grids give empty meshes") {
    auto grid = make_grid(8);
    std::fill(grid.values.begin(), grid.values.end(), 1.0);
    CHECK(marching_cubes(grid, 0.0).empty());
    std::fill(grid.values.begin(), grid.values.end(), -1.0);
    CHECK(marching_cubes(grid, 0.0).empty());
}

TEST_CASE("marching cubes: watertight across shape kinds") {
    Rng rng(99);
    for (int t = 0; t < 3; ++t) {
        const auto shape = random_shape(rng);
        const auto mesh = marching_cubes(sample_sdf_grid(shape, 48), 0.0);
        REQUIRE(!mesh.empty());
        CHECK(mesh.watertight());
        CHECK(mesh.signed_volume() > 0.0);
    }
}

TEST_CASE("obj round trip") {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.normals = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
    m.triangles = {{0, 1, 2}};
    const auto path = std::filesystem::temp_directory_path() / "kansdf_test_tri.obj";
    write_obj(path.string(), m);
    const Mesh r = read_obj(path.string());
    REQUIRE(r.vertices.size() == 3);
    REQUIRE(r.triangles.size() == 1);
    for (size_t i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(r.vertices[i][a] == doctest::Approx(m.vertices[i][a]).epsilon(1e-6));
    CHECK(r.triangles[0] == m.triangles[0]);
    std::filesystem::remove(path);
}

TEST_CASE("obj: empty mesh round trips, malformed face errors carry line numbers") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto empty_path = dir / "kansdf_test_empty.obj";
    write_obj(empty_path.string(), Mesh{});
    CHECK(read_obj(empty_path.string()).empty());
    std::filesystem::remove(empty_path);

    const auto bad_path = dir / "kansdf_test_bad.obj";
    {
        std::ofstream out(bad_path);
        out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 zzz\n";
    }
    CHECK_THROWS_WITH_AS(read_obj(bad_path.string()), doctest::Contains("line 4"), FormatError);
    std::filesystem::remove(bad_path);
}

TEST_CASE("sample_mesh_surface: on-plane samples, area-weighted selection") {
    // Two triangles in z=0 with area ratio 3:1.
    Mesh m;
    m.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 2, 0}, {-1, 0, 0}, {0, -2, 0}};
    m.triangles = {{0, 1, 2}, {0, 3, 4}};  // areas 3 and 1
    const auto sample = sample_mesh_surface(m, 100000, 3);
    int first = 0;
    for (int i = 0; i < sample.points.rows; ++i) {
        CHECK(std::fabs(sample.points.at(i, 2)) < 1e-9);  // in-plane
        if (sample.points.at(i, 0) >= 0.0 && sample.points.at(i, 1) >= 0.0) ++first;
    }
    const double frac = static_cast<double>(first) / sample.points.rows;
    CHECK(frac == doctest::Approx(0.75).epsilon(0.05));

    Mesh single;
    single.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    single.triangles = {{0, 1, 2}};
    const auto s2 = sample_mesh_surface(single, 500, 4);
    for (int i = 0; i < s2.points.rows; ++i) {
        const double x = s2.points.at(i, 0), y = s2.points.at(i, 1);
        CHECK(x >= -1e-12);
        CHECK(y >= -1e-12);
        CHECK(x + y <= 1.0 + 1e-12);
    }
}
