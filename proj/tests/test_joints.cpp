#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fofkit/error.hpp"
#include "fofkit/joints.hpp"
#include "oracles.hpp"

using namespace fofkit;

namespace {

std::vector<Vec3> default_positions() {
  std::vector<Vec3> out;
  for (int k = 0; k < kSmplJointCount; ++k) {
    const double a = 2.0 * std::numbers::pi * k / kSmplJointCount;
    out.push_back({0.6 * std::cos(a), 0.8 - 0.06 * k, 0.2 * std::sin(a)});
  }
  return out;
}

std::string joints_json(const std::vector<int>& order, const std::vector<Vec3>& pos,
                        const std::string& frame = "normalized") {
  std::ostringstream s;
  s.precision(17);
  s << "{\"frame\": \"" << frame << "\", \"joints\": [";
  for (std::size_t n = 0; n < order.size(); ++n) {
    const int k = order[n];
    if (n) s << ", ";
    s << "{\"name\": \"" << kSmplJointNames[k] << "\", \"p\": [" << pos[k].x << ", "
      << pos[k].y << ", " << pos[k].z << "]}";
  }
  s << "]}";
  return s.str();
}

std::vector<int> identity_order() {
  std::vector<int> o(kSmplJointCount);
  for (int k = 0; k < kSmplJointCount; ++k) o[k] = k;
  return o;
}

}  // namespace

TEST_SUITE("joints") {

TEST_CASE("shuffled entries load in canonical order") {
  auto order = identity_order();
  std::mt19937_64 rng(4);
  std::shuffle(order.begin(), order.end(), rng);
  const auto pos = default_positions();
  const JointSet js = parse_joints(joints_json(order, pos));
  REQUIRE(js.size() == 24);
  for (int k = 0; k < 24; ++k) {
    CHECK(js.joints[k].name == kSmplJointNames[k]);
    CHECK(js.joints[k].position.x == pos[k].x);
  }
}

TEST_CASE("schema violations") {
  const auto pos = default_positions();
  auto order = identity_order();
  order.erase(order.begin() + 15);
  try {
    parse_joints(joints_json(order, pos));
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("missing joint head") != std::string::npos);
  }
  auto dup = identity_order();
  dup.push_back(3);
  CHECK_THROWS_AS(parse_joints(joints_json(dup, pos)), FormatError);
  CHECK_THROWS_AS(parse_joints(R"({"joints": [{"name": "tail", "p": [0, 0, 0]}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_joints(R"({"joints": [{"name": "pelvis", "p": [1e999, 0, 0]}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_joints("not json"), FormatError);
  CHECK_THROWS_AS(parse_joints(joints_json(identity_order(), pos, "weird")), FormatError);
}

TEST_CASE("order hash is stable and order sensitive") {
  CHECK(smpl_order_hash() == joint_order_hash(kSmplJointNames));
  std::vector<std::string_view> swapped(kSmplJointNames.begin(), kSmplJointNames.end());
  std::swap(swapped[1], swapped[2]);
  CHECK(joint_order_hash(swapped) != smpl_order_hash());
  // FNV-1a of the empty string is the offset basis.
  CHECK(joint_order_hash({}) == 0xcbf29ce484222325ULL);
}

TEST_CASE("24 joints with 8 channels give 192 channels of independent spheres") {
  const JointSet js = parse_joints(joints_json(identity_order(), default_positions()));
  const CsejGrid c = embed_joints(js, 0.1, 64, 64, 8);
  CHECK(c.grid.channels() == 192);
  CHECK(c.joints == 24);
  CHECK(c.channels_per_joint == 8);
  CHECK(c.order_hash == smpl_order_hash());
  for (int k = 0; k < 24; ++k) {
    const FofGrid s = sphere_fof(js.joints[k].position, 0.1, 64, 64, 8);
    bool same = true;
    for (int j = 0; j < 64; ++j) {
      for (int i = 0; i < 64; ++i) {
        for (int ch = 0; ch < 8; ++ch) same = same && c.grid.at(i, j, k * 8 + ch) == s.at(i, j, ch);
      }
    }
    CHECK(same);
  }
}

TEST_CASE("pixels outside every disc are zero and a0 at a center is 2r") {
  const auto pos = default_positions();
  const JointSet js = parse_joints(joints_json(identity_order(), pos));
  const int res = 128;
  const double r = 0.1;
  const CsejGrid c = embed_joints(js, r, res, res, 8);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const double x = pixel_x(i, res), y = pixel_y(j, res);
      bool near = false;
      for (const Vec3& p : pos) near = near || std::hypot(x - p.x, y - p.y) <= r;
      if (near) continue;
      for (float v : c.grid.pixel(i, j)) REQUIRE(v == 0.0f);
    }
  }
  // A joint placed exactly on a pixel center.
  JointSet one = js;
  one.joints[0].position = {pixel_x(40, res), pixel_y(70, res), 0.3};
  const CsejGrid c1 = embed_joints(one, r, res, res, 8);
  CHECK(std::fabs(c1.grid.at(40, 70, 0) - 2.0 * r) <= 1e-6);
}

TEST_CASE("swapping two joints swaps exactly their blocks") {
  const JointSet js = parse_joints(joints_json(identity_order(), default_positions()));
  JointSet swapped = js;
  std::swap(swapped.joints[3].position, swapped.joints[9].position);
  const CsejGrid a = embed_joints(js, 0.1, 48, 48, 4);
  const CsejGrid b = embed_joints(swapped, 0.1, 48, 48, 4);
  auto block_of = [](int k) {
    if (k == 3) return 9;
    if (k == 9) return 3;
    return k;
  };
  bool ok = true;
  for (int j = 0; j < 48; ++j) {
    for (int i = 0; i < 48; ++i) {
      for (int k = 0; k < 24; ++k) {
        for (int ch = 0; ch < 4; ++ch) {
          ok = ok && b.grid.at(i, j, k * 4 + ch) == a.grid.at(i, j, block_of(k) * 4 + ch);
        }
      }
    }
  }
  CHECK(ok);
}

TEST_CASE("depth translation keeps a0 and rotates (a1, b1) by pi dz") {
  const JointSet js = parse_joints(joints_json(identity_order(), default_positions()));
  JointSet moved = js;
  const double dz = 0.13;
  moved.joints[5].position.z += dz;
  const CsejGrid a = embed_joints(js, 0.1, 64, 64, 3);
  const CsejGrid b = embed_joints(moved, 0.1, 64, 64, 3);
  const double ca = std::cos(std::numbers::pi * dz), sa = std::sin(std::numbers::pi * dz);
  int checked = 0;
  for (int j = 0; j < 64; ++j) {
    for (int i = 0; i < 64; ++i) {
      const double a0 = a.grid.at(i, j, 15);
      if (a0 == 0.0) continue;
      CHECK(b.grid.at(i, j, 15) == doctest::Approx(a0).epsilon(1e-6));
      const double a1 = a.grid.at(i, j, 16), b1 = a.grid.at(i, j, 17);
      // Shifting by dz multiplies a1 + i b1 by exp(i pi dz) in the a1 - i b1
      // convention: a1' = a1 cos - b1 sin, b1' = a1 sin + b1 cos.
      CHECK(b.grid.at(i, j, 16) == doctest::Approx(a1 * ca - b1 * sa).epsilon(1e-5));
      CHECK(b.grid.at(i, j, 17) == doctest::Approx(a1 * sa + b1 * ca).epsilon(1e-5));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("embedding is deterministic") {
  const JointSet js = parse_joints(joints_json(identity_order(), default_positions()));
  CHECK(embed_joints(js, 0.1, 32, 32, 8).grid == embed_joints(js, 0.1, 32, 32, 8).grid);
}

TEST_CASE("metric joints and radius conversion") {
  NormalizedFrame frame;
  frame.scale = 0.5;
  frame.offset = {1, 2, 3};
  CHECK(normalized_radius(0.10, frame) == doctest::Approx(0.05));
  JointSet metric = parse_joints(joints_json(identity_order(), default_positions(), "metric"));
  CHECK(metric.frame == "metric");
  CHECK_THROWS_AS(embed_joints(metric, 0.1, 8, 8, 8), GeometryError);
  const JointSet n = to_normalized(metric, frame);
  CHECK(n.frame == "normalized");
  CHECK(n.joints[0].position.y == doctest::Approx((default_positions()[0].y - 2) * 0.5));
}

TEST_CASE("condition concatenation") {
  const JointSet js = parse_joints(joints_json(identity_order(), default_positions()));
  const CsejGrid c = embed_joints(js, 0.1, 16, 16, 8);
  const ConditionGrid none = concat_condition(c, std::nullopt);
  CHECK(none.grid == c.grid);
  REQUIRE(none.blocks.size() == 1);

  Image iuv(16, 16, 3);
  iuv.at(5, 6)[2] = 200;
  const ConditionGrid with = concat_condition(c, iuv);
  CHECK(with.grid.channels() == 195);
  CHECK(with.grid.at(5, 6, 194) == 200.0f);
  CHECK(with.grid.at(5, 6, 7) == c.grid.at(5, 6, 7));
  REQUIRE(with.blocks.size() == 2);
  CHECK(with.blocks[1].first == 192);
  CHECK(with.blocks[1].count == 3);

  CHECK_THROWS_AS(concat_condition(c, Image(8, 8, 3)), FormatError);
}

}  // TEST_SUITE
