#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "pdik/filter.hpp"

namespace {

pdik::Keypoint sample_at(const pdik::Vec3& p, double conf = 1.0, int body = 0,
                         const std::string& id = "hand_l") {
  pdik::Keypoint kp;
  kp.body_id = body;
  kp.point_id = id;
  kp.position = p;
  kp.confidence = conf;
  return kp;
}

pdik::FilterState initialized_at(const pdik::Vec3& p) {
  pdik::FilterState s;
  s.last = p;
  s.initialized = true;
  return s;
}

}  // namespace

TEST_CASE("filter branches follow the three-case rule") {
  pdik::FilterParams params;  // alpha 0.4, lambda 0.05, tau 0.3

  SECTION("jump branch") {
    auto [state, out] = pdik::filter_step(initialized_at(pdik::Vec3::Zero()),
                                          sample_at({1, 0, 0}), params);
    REQUIRE(out.isApprox(pdik::Vec3(0.05, 0, 0), 1e-14));
    REQUIRE(state.last == out);
  }
  SECTION("nominal branch") {
    auto [state, out] = pdik::filter_step(initialized_at(pdik::Vec3::Zero()),
                                          sample_at({0.1, 0, 0}), params);
    REQUIRE(out.isApprox(pdik::Vec3(0.04, 0, 0), 1e-14));
  }
  SECTION("invalid branch holds, state unchanged") {
    const pdik::FilterState before = initialized_at({0.2, 0.1, 0});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto [state, out] = pdik::filter_step(before, sample_at({nan, 0, 0}), params);
    REQUIRE(out == before.last);
    REQUIRE(state.last == before.last);

    auto [state2, out2] = pdik::filter_step(before, sample_at({0.3, 0, 0}, 0.2), params);
    REQUIRE(out2 == before.last);  // low confidence
  }
  SECTION("distance exactly tau takes the nominal branch") {
    auto [state, out] = pdik::filter_step(initialized_at(pdik::Vec3::Zero()),
                                          sample_at({0.3, 0, 0}), params);
    REQUIRE(out.isApprox(pdik::Vec3(0.4 * 0.3, 0, 0), 1e-14));
  }
  SECTION("first valid sample initializes directly") {
    pdik::FilterState fresh;
    auto [state, out] = pdik::filter_step(fresh, sample_at({0.7, -0.2, 1.0}), params);
    REQUIRE(state.initialized);
    REQUIRE(out == pdik::Vec3(0.7, -0.2, 1.0));
  }
}

TEST_CASE("outputs stay inside any ball containing the inputs") {
  pdik::FilterParams params;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const pdik::Vec3 center(unif(rng), unif(rng), unif(rng));
    const double radius = 0.05 + std::abs(unif(rng));
    pdik::FilterState state = initialized_at(center);
    for (int step = 0; step < 20; ++step) {
      pdik::Vec3 dir(unif(rng), unif(rng), unif(rng));
      if (dir.norm() > 1e-12) dir = dir.normalized() * radius * std::abs(unif(rng));
      auto [next, out] = pdik::filter_step(state, sample_at(center + dir), params);
      state = next;
      REQUIRE((out - center).norm() <= radius + 1e-12);
    }
  }
}

TEST_CASE("runs of invalid samples leave the value constant") {
  pdik::FilterParams params;
  pdik::FilterState state = initialized_at({0.4, 0.5, 0.6});
  const pdik::Vec3 held = state.last;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 10; ++i) {
    auto [next, out] =
        pdik::filter_step(state, sample_at(i % 2 ? pdik::Vec3(nan, 0, 0) : pdik::Vec3(9, 9, 9),
                                           i % 2 ? 1.0 : 0.0),
                          params);
    state = next;
    REQUIRE(out == held);
  }
}

TEST_CASE("body selection follows the nearest-anchor rule") {
  pdik::FilterParams params;  // body_switch_max 0.5

  SECTION("closest of two bodies wins") {
    pdik::FilterState state = initialized_at({0, 0, 1});
    state.last_body = 7;
    const std::vector<std::vector<pdik::Keypoint>> bodies = {
        {sample_at({0.05, 0, 1}, 1.0, 1, "torso")},
        {sample_at({0.8, 0, 1}, 1.0, 2, "torso")}};
    REQUIRE(pdik::select_body(bodies, state, params) == 1);
  }
  SECTION("single body within range") {
    pdik::FilterState state = initialized_at({0, 0, 1});
    const std::vector<std::vector<pdik::Keypoint>> bodies = {
        {sample_at({0.1, 0.2, 1}, 1.0, 4, "torso")}};
    REQUIRE(pdik::select_body(bodies, state, params) == 4);
  }
  SECTION("everything beyond body_switch_max is rejected") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
      pdik::FilterState state = initialized_at({unif(rng), unif(rng), unif(rng)});
      std::vector<std::vector<pdik::Keypoint>> bodies;
      double best = std::numeric_limits<double>::infinity();
      int best_id = -1;
      for (int b = 0; b < 4; ++b) {
        const pdik::Vec3 p(unif(rng), unif(rng), unif(rng));
        bodies.push_back({sample_at(p, 1.0, b, "torso")});
        const double d = (p - state.last).norm();  // linear scan oracle
        if (d < best) {
          best = d;
          best_id = b;
        }
      }
      const auto got = pdik::select_body(bodies, state, params);
      if (best > params.body_switch_max) {
        REQUIRE(!got.has_value());
      } else {
        REQUIRE(got == best_id);
      }
    }
  }
  SECTION("first call picks the body closest to the origin") {
    pdik::FilterState fresh;
    const std::vector<std::vector<pdik::Keypoint>> bodies = {
        {sample_at({2.0, 0, 0}, 1.0, 1, "torso")}, {sample_at({0.5, 0, 0}, 1.0, 2, "torso")}};
    REQUIRE(pdik::select_body(bodies, fresh, params) == 2);
  }
}

TEST_CASE("tracking never switches between well-separated bodies") {
  pdik::FilterParams params;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  pdik::FilterState state = initialized_at({0, 0, 1});
  state.last_body = 0;
  for (int step = 0; step < 100; ++step) {
    const pdik::Vec3 tracked(jitter(rng), jitter(rng), 1 + jitter(rng));
    const pdik::Vec3 other(2 + jitter(rng), jitter(rng), 1 + jitter(rng));
    const std::vector<std::vector<pdik::Keypoint>> bodies = {
        {sample_at(tracked, 1.0, 0, "torso")}, {sample_at(other, 1.0, 1, "torso")}};
    const auto got = pdik::select_body(bodies, state, params);
    REQUIRE(got == 0);
    auto [next, out] = pdik::filter_step(state, bodies[0][0], params);
    state = next;
  }
}

TEST_CASE("command scaling") {
  SECTION("direct substitution") {
    pdik::ScaleSpec spec{0.8, pdik::Vec3::Zero(), {0.1, 0, 0.2}};
    REQUIRE(pdik::scale_command({0.5, 0, 0}, spec).isApprox(pdik::Vec3(0.5, 0, 0.2), 1e-15));
  }
  SECTION("identity at the anchor") {
    pdik::ScaleSpec spec{1.0, {0.3, 0.4, 0.5}, {1, 2, 3}};
    REQUIRE(pdik::scale_command({0.3, 0.4, 0.5}, spec) == pdik::Vec3(1, 2, 3));
  }
  SECTION("componentwise arithmetic") {
    pdik::ScaleSpec spec{0.5, {0.1, 0.1, 0.1}, pdik::Vec3::Zero()};
    REQUIRE(pdik::scale_command({0.2, 0.4, -0.2}, spec)
                .isApprox(pdik::Vec3(0.05, 0.15, -0.15), 1e-14));
  }
}
