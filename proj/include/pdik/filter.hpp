#ifndef PDIK_FILTER_HPP_
#define PDIK_FILTER_HPP_

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdik/model.hpp"

namespace pdik {

/// One streamed 3-D keypoint sample.
struct Keypoint {
  int body_id = 0;
  std::string point_id;
  Vec3 position = Vec3::Zero();
  double confidence = 1.0;  ///< in [0,1]
  double timestamp = 0.0;   ///< seconds
};

/// Per-keypoint filter memory.
struct FilterState {
  Vec3 last = Vec3::Zero();  ///< filtered value from the previous step
  bool initialized = false;
  int last_body = -1;  ///< currently tracked demonstrator
};

/// Low-pass filter parameters with jump/confidence gating.
struct FilterParams {
  double alpha_jr = 0.4;        ///< nominal mixing coefficient, in (0,1]
  double lambda_jr = 0.05;      ///< mixing coefficient during jump rejection, < alpha_jr
  double tau_jr = 0.3;          ///< jump threshold, meters
  double conf_min = 0.5;        ///< samples below this confidence are invalid
  double body_switch_max = 0.5; ///< max anchor travel before a body is rejected, meters
};

inline bool keypoint_valid(const Keypoint& sample, const FilterParams& params) {
  return sample.position.allFinite() && sample.confidence >= params.conf_min;
}

/**
 * @brief One step of the robustified low-pass filter.
 *
 * Three cases: hold the previous value on an invalid sample, blend with
 * lambda_jr on a jump beyond tau_jr, blend with alpha_jr otherwise. The first
 * valid sample initializes the state directly. A distance of exactly tau_jr
 * takes the nominal branch.
 */
inline std::pair<FilterState, Vec3> filter_step(FilterState state, const Keypoint& sample,
                                                const FilterParams& params) {
  if (!keypoint_valid(sample, params)) return {state, state.last};
  if (!state.initialized) {
    state.last = sample.position;
    state.initialized = true;
    return {state, state.last};
  }
  const double dist = (sample.position - state.last).norm();
  const double mix = dist > params.tau_jr ? params.lambda_jr : params.alpha_jr;
  state.last = mix * sample.position + (1.0 - mix) * state.last;
  return {state, state.last};
}

/**
 * @brief Picks the tracked demonstrator among candidate bodies.
 *
 * Each body is represented by its anchor keypoint (point_id == anchor_id).
 * The body whose anchor is closest to the previously tracked anchor wins;
 * candidates farther than body_switch_max are rejected. The first call picks
 * the body closest to the sensor origin.
 */
inline std::optional<int> select_body(const std::vector<std::vector<Keypoint>>& bodies,
                                      const FilterState& state, const FilterParams& params,
                                      const std::string& anchor_id = "torso") {
  const Vec3 ref = state.initialized ? state.last : Vec3::Zero();
  std::optional<int> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& body : bodies) {
    for (const Keypoint& kp : body) {
      if (kp.point_id != anchor_id || !keypoint_valid(kp, params)) continue;
      const double d = (kp.position - ref).norm();
      if (d < best_dist) {
        best_dist = d;
        best = kp.body_id;
      }
      break;
    }
  }
  if (state.initialized && best && best_dist > params.body_switch_max) return std::nullopt;
  return best;
}

/// Maps a human keypoint into the robot task frame.
struct ScaleSpec {
  double beta = 1.0;              ///< per-target scale factor, > 0
  Vec3 anchor_human = Vec3::Zero();  ///< skeleton body anchor p_c
  Vec3 anchor_robot = Vec3::Zero();  ///< robot-side anchor x_c, meters
};

inline Vec3 scale_command(const Vec3& p, const ScaleSpec& spec) {
  return spec.beta * (p - spec.anchor_human) + spec.anchor_robot;
}

}  // namespace pdik

#endif  // PDIK_FILTER_HPP_
