#ifndef PDIK_CBF_HPP_
#define PDIK_CBF_HPP_

#include <string>
#include <vector>

#include "pdik/kinematics.hpp"
#include "pdik/model.hpp"

namespace pdik {

/// One linearized barrier constraint: gradient^T dq >= bound, bound = -gamma*h.
struct CbfRow {
  VecX gradient;  ///< n-vector, d h / d q
  double bound = 0.0;
  double h = 0.0;  ///< barrier value at the linearization point
};

namespace detail {

struct CbfGeometry {
  Vec3 point;    ///< tracked frame position
  Vec3 center;   ///< sphere center
  double rho;    ///< combined radius: sphere + limb + margin
  int frame_joint;
  int sphere_joint;
};

inline CbfGeometry cbf_geometry(const RobotModel& model, const FkCache& fk, const CbfPair& pair) {
  const FrameSpec& frame = model.frames[model.frame_index(pair.tracked_frame)];
  const CollisionSphere& sphere = model.spheres[model.sphere_index(pair.sphere)];
  CbfGeometry g;
  g.point = attached_point(fk, frame.parent_joint, frame.offset);
  g.center = attached_point(fk, sphere.parent_joint, sphere.offset);
  g.rho = sphere.radius + pair.limb_radius + pair.margin;
  g.frame_joint = frame.parent_joint;
  g.sphere_joint = sphere.parent_joint;
  return g;
}

}  // namespace detail

/// Barrier value h = |x - c|^2 - rho^2; nonnegative means safe.
inline double cbf_value(const RobotModel& model, const FkCache& fk, const CbfPair& pair) {
  const auto g = detail::cbf_geometry(model, fk, pair);
  return (g.point - g.center).squaredNorm() - g.rho * g.rho;
}

inline double cbf_value(const RobotModel& model, const JointVector& q, const CbfPair& pair) {
  return cbf_value(model, compute_fk(model, q), pair);
}

/**
 * @brief Gradient of the barrier: 2 (x - c)^T (J_x - J_c).
 *
 * A base-anchored sphere has J_c = 0. When the tracked point coincides with
 * the center the gradient is exactly zero.
 */
inline VecX cbf_gradient(const RobotModel& model, const FkCache& fk, const CbfPair& pair) {
  const auto g = detail::cbf_geometry(model, fk, pair);
  const MatX j_point = point_jacobian(model, fk, g.frame_joint, g.point);
  const Vec3 diff = g.point - g.center;
  if (g.sphere_joint < 0) return 2.0 * (diff.transpose() * j_point).transpose();
  const MatX j_center = point_jacobian(model, fk, g.sphere_joint, g.center);
  return 2.0 * ((j_point - j_center).transpose() * diff);
}

inline VecX cbf_gradient(const RobotModel& model, const JointVector& q, const CbfPair& pair) {
  return cbf_gradient(model, compute_fk(model, q), pair);
}

/// Builds one constraint row per pair, ordered as the pairs; bound = -gamma*h.
inline std::vector<CbfRow> build_cbf_rows(const RobotModel& model, const FkCache& fk,
                                          const std::vector<CbfPair>& pairs, double gamma) {
  if (!(gamma > 0.0)) throw Error("build_cbf_rows: gamma must be positive");
  std::vector<CbfRow> rows;
  rows.reserve(pairs.size());
  for (const CbfPair& pair : pairs) {
    CbfRow row;
    row.h = cbf_value(model, fk, pair);
    row.gradient = cbf_gradient(model, fk, pair);
    row.bound = -gamma * row.h;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<CbfRow> build_cbf_rows(const RobotModel& model, const JointVector& q,
                                          const std::vector<CbfPair>& pairs, double gamma) {
  return build_cbf_rows(model, compute_fk(model, q), pairs, gamma);
}

}  // namespace pdik

#endif  // PDIK_CBF_HPP_
