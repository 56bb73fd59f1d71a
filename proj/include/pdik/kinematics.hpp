#ifndef PDIK_KINEMATICS_HPP_
#define PDIK_KINEMATICS_HPP_

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <map>
#include <string>
#include <vector>

#include "pdik/model.hpp"

namespace pdik {

/**
 * @brief World-frame quantities of every joint at a fixed configuration.
 *
 * joint_origin[i] is the point on joint i's rotation axis, joint_axis[i] the
 * world axis direction, joint_rotation[i] the orientation of the child link.
 */
struct FkCache {
  std::vector<Mat3> joint_rotation;
  std::vector<Vec3> joint_origin;
  std::vector<Vec3> joint_axis;
};

/// Successive rigid transforms in topological order.
inline FkCache compute_fk(const RobotModel& model, const JointVector& q) {
  check_dimension(model, q);
  const int n = model.dof();
  FkCache fk;
  fk.joint_rotation.resize(n);
  fk.joint_origin.resize(n);
  fk.joint_axis.resize(n);
  for (int i = 0; i < n; ++i) {
    const JointSpec& j = model.joints[i];
    Mat3 parent_r = Mat3::Identity();
    Vec3 parent_p = Vec3::Zero();
    if (j.parent >= 0) {
      parent_r = fk.joint_rotation[j.parent];
      parent_p = fk.joint_origin[j.parent];
    }
    const Mat3 pre_r = parent_r * j.origin_rotation;
    const Vec3 pre_p = parent_p + parent_r * j.origin_translation;
    fk.joint_origin[i] = pre_p;
    fk.joint_axis[i] = pre_r * j.axis;
    fk.joint_rotation[i] = pre_r * Eigen::AngleAxisd(q[i], j.axis).toRotationMatrix();
  }
  return fk;
}

/// World position of a point given in joint-local coordinates (-1 = base).
inline Vec3 attached_point(const FkCache& fk, int parent_joint, const Vec3& offset) {
  if (parent_joint < 0) return offset;
  return fk.joint_origin[parent_joint] + fk.joint_rotation[parent_joint] * offset;
}

/// World pose of a named frame.
inline Pose frame_pose(const RobotModel& model, const FkCache& fk, int frame_idx) {
  const FrameSpec& f = model.frames[frame_idx];
  if (f.parent_joint < 0) return {Mat3::Identity(), f.offset};
  return {fk.joint_rotation[f.parent_joint], attached_point(fk, f.parent_joint, f.offset)};
}

/// World pose of every named frame; deterministic in (model, q).
inline std::map<std::string, Pose> forward_kinematics(const RobotModel& model,
                                                      const JointVector& q) {
  const FkCache fk = compute_fk(model, q);
  std::map<std::string, Pose> out;
  for (int i = 0; i < static_cast<int>(model.frames.size()); ++i)
    out[model.frames[i].name] = frame_pose(model, fk, i);
  return out;
}

/**
 * @brief Position Jacobian of a world point attached below a joint.
 *
 * Columns of joints outside the ancestor chain of parent_joint are exactly
 * zero. A base-attached point yields the zero matrix.
 */
inline MatX point_jacobian(const RobotModel& model, const FkCache& fk, int parent_joint,
                           const Vec3& world_point) {
  MatX jac = MatX::Zero(3, model.dof());
  for (int j = parent_joint; j >= 0; j = model.joints[j].parent)
    jac.col(j) = fk.joint_axis[j].cross(world_point - fk.joint_origin[j]);
  return jac;
}

/// Position Jacobian of a named frame's origin w.r.t. all actuated joints.
inline MatX point_jacobian(const RobotModel& model, const JointVector& q,
                           const std::string& frame) {
  const int fi = model.frame_index(frame);
  const FkCache fk = compute_fk(model, q);
  const FrameSpec& f = model.frames[fi];
  return point_jacobian(model, fk, f.parent_joint, attached_point(fk, f.parent_joint, f.offset));
}

/// Smallest singular value of a task Jacobian.
inline double min_singular_value(const MatX& jac) {
  if (jac.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatX> svd(jac);
  return svd.singularValues().tail(1)(0);
}

}  // namespace pdik

#endif  // PDIK_KINEMATICS_HPP_
