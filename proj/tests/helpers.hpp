#ifndef PDIK_TESTS_HELPERS_HPP_
#define PDIK_TESTS_HELPERS_HPP_

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "pdik/kinematics.hpp"
#include "pdik/model_io.hpp"

namespace testutil {

inline const char* planar_2r_text() {
  return R"(
joint { name = j1, parent = base, axis = [0,0,1], origin_xyz = [0,0,0],   limits = [-3.1,3.1], vel_limit = 10.0 }
joint { name = j2, parent = j1,   axis = [0,0,1], origin_xyz = [0.3,0,0], limits = [-3.1,3.1], vel_limit = 10.0 }
frame { name = end, parent_joint = j2, offset_xyz = [0.3,0,0] }
)";
}

inline pdik::RobotModel planar_2r() { return pdik::load_model(planar_2r_text()); }

/// Spatial 7-DoF chain with mixed axes and offsets; tip and mid frames.
inline pdik::RobotModel chain_7dof() {
  return pdik::load_model(R"(
joint { name = a1, parent = base, axis = [0,0,1], origin_xyz = [0,0,0.10],      limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a2, parent = a1,   axis = [0,1,0], origin_xyz = [0.05,0,0.08],   limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a3, parent = a2,   axis = [1,0,0], origin_xyz = [0.12,0.02,0],   limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a4, parent = a3,   axis = [0,1,0], origin_xyz = [0.15,0,-0.03],  limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a5, parent = a4,   axis = [0,0,1], origin_xyz = [0.10,0,0.02],   limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a6, parent = a5,   axis = [0,1,0], origin_xyz = [0.08,-0.01,0],  limits = [-2.8,2.8], vel_limit = 3.0 }
joint { name = a7, parent = a6,   axis = [1,0,0], origin_xyz = [0.06,0,0],      limits = [-2.8,2.8], vel_limit = 3.0 }
frame { name = tip, parent_joint = a7, offset_xyz = [0.05,0,0.02] }
frame { name = mid, parent_joint = a4, offset_xyz = [0.03,0.01,0] }
)");
}

inline pdik::RobotModel desk_model() {
  return pdik::load_model_file(std::string(PDIK_SOURCE_DIR) + "/models/desk_dual_arm.model");
}

inline pdik::JointVector random_q(const pdik::RobotModel& model, std::mt19937_64& rng) {
  pdik::JointVector q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    std::uniform_real_distribution<double> dist(model.joints[i].q_min, model.joints[i].q_max);
    q[i] = dist(rng);
  }
  return q;
}

/// Central finite differences of a frame position; independent of the
/// analytic Jacobian path.
inline pdik::MatX fd_jacobian(const pdik::RobotModel& model, const pdik::JointVector& q,
                              const std::string& frame, double step = 1e-6) {
  pdik::MatX jac(3, model.dof());
  for (int j = 0; j < model.dof(); ++j) {
    pdik::JointVector lo = q, hi = q;
    lo[j] -= step;
    hi[j] += step;
    const pdik::Vec3 x_lo = pdik::forward_kinematics(model, lo).at(frame).translation;
    const pdik::Vec3 x_hi = pdik::forward_kinematics(model, hi).at(frame).translation;
    jac.col(j) = (x_hi - x_lo) / (2.0 * step);
  }
  return jac;
}

/// Smallest singular value by cyclic Jacobi diagonalization of J Jᵀ.
inline double jacobi_min_singular_value(const pdik::MatX& jac) {
  const int r = static_cast<int>(std::min(jac.rows(), jac.cols()));
  pdik::MatX gram = jac.rows() <= jac.cols() ? pdik::MatX(jac * jac.transpose())
                                             : pdik::MatX(jac.transpose() * jac);
  const int n = static_cast<int>(gram.rows());
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q2 = p + 1; q2 < n; ++q2) off = std::max(off, std::abs(gram(p, q2)));
    if (off < 1e-15) break;
    for (int p = 0; p < n; ++p) {
      for (int q2 = p + 1; q2 < n; ++q2) {
        if (std::abs(gram(p, q2)) < 1e-18) continue;
        const double theta = 0.5 * std::atan2(2.0 * gram(p, q2), gram(q2, q2) - gram(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int i = 0; i < n; ++i) {
          const double gp = gram(i, p), gq = gram(i, q2);
          gram(i, p) = c * gp - s * gq;
          gram(i, q2) = s * gp + c * gq;
        }
        for (int i = 0; i < n; ++i) {
          const double gp = gram(p, i), gq = gram(q2, i);
          gram(p, i) = c * gp - s * gq;
          gram(q2, i) = s * gp + c * gq;
        }
      }
    }
  }
  double min_ev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i) min_ev = std::min(min_ev, gram(i, i));
  return std::sqrt(std::max(0.0, min_ev));
}

/// Analytic planar 2R inverse kinematics (elbow-up / elbow-down branches);
/// returns false when the target is out of reach.
inline bool planar_2r_ik(double l1, double l2, const pdik::Vec3& target, bool elbow_up,
                         double& q1, double& q2) {
  const double d2 = target.x() * target.x() + target.y() * target.y();
  const double c2 = (d2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  if (c2 < -1.0 || c2 > 1.0) return false;
  q2 = std::acos(c2);
  if (!elbow_up) q2 = -q2;
  q1 = std::atan2(target.y(), target.x()) -
       std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
  return true;
}

}  // namespace testutil

#endif  // PDIK_TESTS_HELPERS_HPP_
