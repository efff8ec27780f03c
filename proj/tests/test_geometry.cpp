#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fofkit/error.hpp"
#include "fofkit/mesh.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fofkit;

namespace {

const char* kCubeObj = R"(# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 4 3
f 1 3 2
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 4 8 7
f 4 7 3
f 1 5 8
f 1 8 4
f 2 3 7
f 2 7 6
)";

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("obj cube loads as 8 vertices and 12 triangles") {
  testutil::TempDir dir;
  testutil::write_text(dir / "cube.obj", kCubeObj);
  const Mesh m = load_mesh(dir / "cube.obj");
  CHECK(m.vertices.size() == 8);
  CHECK(m.triangles.size() == 12);
  CHECK(m.watertight);
  CHECK(mesh_volume(m) == doctest::Approx(1.0));
}

TEST_CASE("obj quads, negative indices and slash tokens") {
  testutil::TempDir dir;
  testutil::write_text(dir / "quad.obj",
                       "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
                       "f -4/1/1 -3/1/1 -2/1/1 -1/1/1\n");
  std::vector<std::string> warnings;
  const Mesh m = load_mesh(dir / "quad.obj", warnings);
  CHECK(m.triangles.size() == 2);
  CHECK(!warnings.empty());
  CHECK(!m.watertight);
}

TEST_CASE("ply with a repeated-index face drops it and warns") {
  testutil::TempDir dir;
  testutil::write_text(dir / "t.ply",
                       "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\n"
                       "property float y\nproperty float z\nelement face 3\n"
                       "property list uchar int vertex_indices\nend_header\n"
                       "0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 1\n3 0 2 3\n");
  std::vector<std::string> warnings;
  const Mesh m = load_mesh(dir / "t.ply", warnings);
  CHECK(m.triangles.size() == 2);
  REQUIRE(warnings.size() == 1);
}

TEST_CASE("empty file is a format error mentioning no geometry") {
  testutil::TempDir dir;
  testutil::write_text(dir / "empty.obj", "");
  try {
    load_mesh(dir / "empty.obj");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("no geometry") != std::string::npos);
  }
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(load_mesh("/nonexistent/nothing.obj"), IoError);
}

TEST_CASE("binary ply round trip preserves vertex order bit-exactly") {
  testutil::TempDir dir;
  const Mesh src = make_icosphere({0.1, -0.2, 0.3}, 0.7, 2);
  for (bool ascii : {false, true}) {
    const auto path = dir / (ascii ? "a.ply" : "b.ply");
    save_mesh(src, path, ascii);
    const Mesh back = load_mesh(path);
    REQUIRE(back.vertices.size() == src.vertices.size());
    CHECK(back.triangles == src.triangles);
    bool same = true;
    for (std::size_t v = 0; v < src.vertices.size(); ++v) {
      same = same && back.vertices[v].x == src.vertices[v].x &&
             back.vertices[v].y == src.vertices[v].y && back.vertices[v].z == src.vertices[v].z;
    }
    CHECK(same);
  }
}

TEST_CASE("obj writer round trips exactly") {
  testutil::TempDir dir;
  const Mesh src = make_torus({0, 0, 0}, 0.6, 0.2, 24, 12);
  save_mesh(src, dir / "t.obj");
  const Mesh back = load_mesh(dir / "t.obj");
  CHECK(back.triangles == src.triangles);
  CHECK(back.vertices[17].x == src.vertices[17].x);
  CHECK(back.watertight);
}

TEST_CASE("binary big-endian ply") {
  testutil::TempDir dir;
  std::string text =
      "ply\nformat binary_big_endian 1.0\nelement vertex 3\nproperty double x\n"
      "property double y\nproperty double z\nelement face 1\n"
      "property list uchar uint vertex_indices\nend_header\n";
  auto put_be = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) text.push_back(static_cast<char>(b[n - 1 - k]));
  };
  const double coords[9] = {0, 0, 0, 1, 0, 0, 0, 1, 0};
  for (double c : coords) put_be(&c, 8);
  text.push_back(3);
  for (std::uint32_t idx : {0u, 1u, 2u}) put_be(&idx, 4);
  testutil::write_text(dir / "be.ply", text);
  const Mesh m = load_mesh(dir / "be.ply");
  REQUIRE(m.triangles.size() == 1);
  CHECK(m.vertices[1].x == 1.0);
  CHECK(m.vertices[2].y == 1.0);
}

TEST_CASE("normalize cube (0,0,0)-(2,2,2) with margin 0.05") {
  const NormalizeResult n = normalize_mesh(make_box({0, 0, 0}, {2, 2, 2}), 0.05);
  CHECK(n.frame.scale == doctest::Approx(0.95));
  CHECK(n.frame.offset.x == 1.0);
  CHECK(n.frame.offset.y == 1.0);
  CHECK(n.frame.offset.z == 1.0);
  for (const Vec3& v : n.mesh.vertices) {
    CHECK(std::fabs(v.x) == doctest::Approx(0.95));
    CHECK(std::fabs(v.y) == doctest::Approx(0.95));
    CHECK(std::fabs(v.z) == doctest::Approx(0.95));
  }
  const Mesh back = denormalize_mesh(n.mesh, n.frame);
  for (std::size_t v = 0; v < back.vertices.size(); ++v) {
    CHECK(norm(back.vertices[v] - make_box({0, 0, 0}, {2, 2, 2}).vertices[v]) < 1e-12);
  }
}

TEST_CASE("normalize fits inside the margin box for a skewed mesh") {
  Mesh m = make_torus({3, -1, 7}, 5.0, 1.0, 32, 16);
  const NormalizeResult n = normalize_mesh(m, 0.1);
  for (const Vec3& v : n.mesh.vertices) {
    CHECK(std::fabs(v.x) <= 0.9 + 1e-12);
    CHECK(std::fabs(v.y) <= 0.9 + 1e-12);
    CHECK(std::fabs(v.z) <= 0.9 + 1e-12);
  }
}

TEST_CASE("normalize rejects a single-point mesh") {
  Mesh m;
  m.vertices = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  m.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(normalize_mesh(m), GeometryError);
}

TEST_CASE("normalize drops degenerate triangles") {
  Mesh m = make_box({-1, -1, -1}, {1, 1, 1});
  m.vertices.push_back({0.5, 0.5, 0.5});
  const auto last = static_cast<std::uint32_t>(m.vertices.size() - 1);
  m.triangles.push_back({0, 1, last});
  m.triangles.push_back({last, last, 0});
  const NormalizeResult n = normalize_mesh(m);
  CHECK(n.dropped_degenerate == 1);
  CHECK(n.mesh.triangles.size() == 13);
}

TEST_CASE("yaw rotation matches the 3x3 matrix") {
  const Vec3 r = rotate_yaw(Vec3{1, 0, 0}, std::numbers::pi / 2);
  CHECK(r.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.y == 0.0);
  CHECK(r.z == doctest::Approx(-1.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    const double theta = 4.0 * u(rng);
    const Vec3 want = oracle::apply(oracle::yaw_matrix(theta), p);
    CHECK(norm(rotate_yaw(p, theta) - want) < 1e-15);
  }
}

TEST_CASE("yaw group property and identity") {
  const Mesh m = make_icosphere({0.1, 0.2, -0.3}, 0.5, 2);
  const Mesh same = rotate_yaw(m, 0.0);
  CHECK(same.triangles == m.triangles);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    CHECK(norm(same.vertices[v] - m.vertices[v]) == 0.0);
  }
  const Mesh twice = rotate_yaw(rotate_yaw(m, std::numbers::pi / 2), std::numbers::pi / 2);
  const Mesh once = rotate_yaw(m, std::numbers::pi);
  double worst = 0.0;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    worst = std::max(worst, norm(twice.vertices[v] - once.vertices[v]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("primitives are closed, outward and have the right topology") {
  const Mesh box = make_box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  CHECK(count_nonmanifold_edges(box) == 0);
  CHECK(euler_characteristic(box) == 2);
  CHECK(mesh_volume(box) == doctest::Approx(1.0));
  CHECK(surface_area(box) == doctest::Approx(6.0));

  const Mesh sphere = make_icosphere({0, 0, 0}, 0.3, 4);
  CHECK(count_nonmanifold_edges(sphere) == 0);
  CHECK(euler_characteristic(sphere) == 2);
  const double ball = 4.0 / 3.0 * std::numbers::pi * 0.027;
  CHECK(mesh_volume(sphere) > 0.99 * ball);
  CHECK(mesh_volume(sphere) < ball);

  const Mesh torus = make_torus({0, 0, 0}, 0.6, 0.2, 64, 32);
  CHECK(count_nonmanifold_edges(torus) == 0);
  CHECK(euler_characteristic(torus) == 0);
  const double solid = 2.0 * std::numbers::pi * std::numbers::pi * 0.6 * 0.04;
  CHECK(mesh_volume(torus) == doctest::Approx(solid).epsilon(0.01));
}

}  // TEST_SUITE
