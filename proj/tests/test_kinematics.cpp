#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

#include "helpers.hpp"
#include "pdik/kinematics.hpp"

namespace {

// Independent oracle: explicit 4x4 homogeneous products with a hand-rolled
// axis-angle rotation.
std::array<std::array<double, 4>, 4> mat4_mul(const std::array<std::array<double, 4>, 4>& a,
                                              const std::array<std::array<double, 4>, 4>& b) {
  std::array<std::array<double, 4>, 4> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::array<std::array<double, 4>, 4> rodrigues4(const pdik::Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
  const double x = axis.x(), y = axis.y(), z = axis.z();
  return {{{x * x * v + c, x * y * v - z * s, x * z * v + y * s, 0.0},
           {x * y * v + z * s, y * y * v + c, y * z * v - x * s, 0.0},
           {x * z * v - y * s, y * z * v + x * s, z * z * v + c, 0.0},
           {0.0, 0.0, 0.0, 1.0}}};
}

std::array<std::array<double, 4>, 4> translation4(const pdik::Vec3& t) {
  return {{{1, 0, 0, t.x()}, {0, 1, 0, t.y()}, {0, 0, 1, t.z()}, {0, 0, 0, 1}}};
}

pdik::Vec3 oracle_frame_position(const pdik::RobotModel& model, const pdik::JointVector& q,
                                 const std::string& frame_name) {
  const int fi = model.frame_index(frame_name);
  const pdik::FrameSpec& frame = model.frames[fi];
  std::array<std::array<double, 4>, 4> t = translation4(pdik::Vec3::Zero());
  std::vector<int> chain;
  for (int j = frame.parent_joint; j >= 0; j = model.joints[j].parent) chain.push_back(j);
  std::reverse(chain.begin(), chain.end());
  for (int j : chain) {
    const pdik::JointSpec& spec = model.joints[j];
    std::array<std::array<double, 4>, 4> fixed = translation4(spec.origin_translation);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) fixed[r][c] = spec.origin_rotation(r, c);
    t = mat4_mul(t, fixed);
    t = mat4_mul(t, rodrigues4(spec.axis, q[j]));
  }
  t = mat4_mul(t, translation4(frame.offset));
  return {t[0][3], t[1][3], t[2][3]};
}

}  // namespace

TEST_CASE("planar 2R forward kinematics matches the geometry") {
  const pdik::RobotModel model = testutil::planar_2r();
  pdik::JointVector q(2);
  q << 0.0, 0.0;
  auto poses = pdik::forward_kinematics(model, q);
  REQUIRE(poses.at("end").translation.isApprox(pdik::Vec3(0.6, 0.0, 0.0), 1e-15));

  q << M_PI_2, 0.0;
  poses = pdik::forward_kinematics(model, q);
  REQUIRE((poses.at("end").translation - pdik::Vec3(0.0, 0.6, 0.0)).norm() < 1e-12);
}

TEST_CASE("7-DoF poses match an explicit homogeneous-transform chain") {
  const pdik::RobotModel model = testutil::chain_7dof();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const pdik::JointVector q = testutil::random_q(model, rng);
    const auto poses = pdik::forward_kinematics(model, q);
    for (const std::string frame : {"tip", "mid"}) {
      const pdik::Vec3 expect = oracle_frame_position(model, q, frame);
      REQUIRE((poses.at(frame).translation - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("planar Jacobian at zero configuration") {
  const pdik::RobotModel model = testutil::planar_2r();
  pdik::JointVector q = pdik::JointVector::Zero(2);
  const pdik::MatX jac = pdik::point_jacobian(model, q, "end");
  REQUIRE(jac.rows() == 3);
  REQUIRE(jac(0, 0) == 0.0);
  REQUIRE(jac(0, 1) == 0.0);
  REQUIRE(jac(1, 0) == Catch::Approx(0.6).margin(1e-15));
  REQUIRE(jac(1, 1) == Catch::Approx(0.3).margin(1e-15));
  REQUIRE(jac.row(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Jacobians agree with central finite differences") {
  std::mt19937_64 rng(11);
  for (const pdik::RobotModel& model :
       {testutil::planar_2r(), testutil::chain_7dof(), testutil::desk_model()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const pdik::JointVector q = testutil::random_q(model, rng);
      for (const pdik::FrameSpec& f : model.frames) {
        const pdik::MatX jac = pdik::point_jacobian(model, q, f.name);
        const pdik::MatX fd = testutil::fd_jacobian(model, q, f.name);
        REQUIRE((jac - fd).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

TEST_CASE("columns outside the ancestor chain are exactly zero") {
  const pdik::RobotModel model = testutil::chain_7dof();
  std::mt19937_64 rng(3);
  const pdik::JointVector q = testutil::random_q(model, rng);
  const pdik::MatX jac = pdik::point_jacobian(model, q, "mid");  // chain a1..a4
  for (int j = 4; j < 7; ++j) REQUIRE(jac.col(j).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a base-bound frame has a zero Jacobian") {
  pdik::RobotModel model = testutil::planar_2r();
  model.frames.push_back({"fixed", -1, pdik::Vec3(0.1, 0.2, 0.3)});
  pdik::JointVector q(2);
  q << 0.4, -0.7;
  const pdik::MatX jac = pdik::point_jacobian(model, q, "fixed");
  REQUIRE(jac.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(pdik::forward_kinematics(model, q).at("fixed").translation ==
          pdik::Vec3(0.1, 0.2, 0.3));
}

TEST_CASE("rotations stay orthonormal and results are deterministic") {
  const pdik::RobotModel model = testutil::desk_model();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const pdik::JointVector q = testutil::random_q(model, rng);
    const auto poses = pdik::forward_kinematics(model, q);
    for (const auto& [name, pose] : poses) REQUIRE(pdik::rotation_defect(pose.rotation) < 1e-9);
    const auto again = pdik::forward_kinematics(model, q);
    for (const auto& [name, pose] : poses) {
      REQUIRE(pose.translation == again.at(name).translation);
      REQUIRE(pose.rotation == again.at(name).rotation);
    }
    const pdik::MatX j1 = pdik::point_jacobian(model, q, "hand_r");
    const pdik::MatX j2 = pdik::point_jacobian(model, q, "hand_r");
    REQUIRE(j1 == j2);
  }
}

TEST_CASE("smallest singular value") {
  pdik::MatX j(3, 2);
  j << 1, 0, 0, 1, 0, 0;
  REQUIRE(pdik::min_singular_value(j) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(pdik::min_singular_value(pdik::MatX::Zero(3, 5)) == 0.0);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    pdik::MatX m(3, 7);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 7; ++c) m(r, c) = gauss(rng);
    REQUIRE(pdik::min_singular_value(m) ==
            Catch::Approx(testutil::jacobi_min_singular_value(m)).margin(1e-10));
  }
}

TEST_CASE("dimension mismatches are reported") {
  const pdik::RobotModel model = testutil::planar_2r();
  REQUIRE_THROWS_AS(pdik::forward_kinematics(model, pdik::JointVector::Zero(3)), pdik::Error);
  REQUIRE_THROWS_AS(pdik::point_jacobian(model, pdik::JointVector::Zero(2), "nope"),
                    pdik::Error);
}
