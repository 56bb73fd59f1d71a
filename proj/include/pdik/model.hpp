#ifndef PDIK_MODEL_HPP_
#define PDIK_MODEL_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdik {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Joint configuration or increment over the model's actuated joints.
using JointVector = Eigen::VectorXd;

/// Error type for model loading and kinematic queries.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Rigid transform (rotation + translation, meters).
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  Pose compose(const Pose& child) const {
    return {rotation * child.rotation, rotation * child.translation + translation};
  }
};

/// Deviation of R from a proper rotation: max of |R^T R - I|_inf and |det(R) - 1|.
inline double rotation_defect(const Mat3& r) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = std::abs(r.determinant() - 1.0);
  return std::max(ortho, det);
}

/// One revolute joint of the kinematic tree.
struct JointSpec {
  std::string name;
  int parent = -1;                    ///< parent joint index, -1 for the fixed base
  Vec3 axis = Vec3::UnitZ();          ///< unit rotation axis in the joint frame
  Mat3 origin_rotation = Mat3::Identity();
  Vec3 origin_translation = Vec3::Zero();  ///< fixed offset from the parent frame, meters
  double q_min = 0.0;
  double q_max = 0.0;
  double velocity_limit = 0.0;        ///< rad/s
};

/// Named point frame rigidly attached to a joint (or the base).
struct FrameSpec {
  std::string name;
  int parent_joint = -1;
  Vec3 offset = Vec3::Zero();  ///< meters, in the parent joint frame
};

/// Bounding sphere used by the self-collision barriers.
struct CollisionSphere {
  std::string name;
  int parent_joint = -1;
  Vec3 offset = Vec3::Zero();
  double radius = 0.0;  ///< meters
};

/// Pairing of a tracked frame with a sphere it must stay clear of.
struct CbfPair {
  std::string tracked_frame;
  std::string sphere;
  double limb_radius = 0.0;  ///< thickness of the tracked limb, meters
  double margin = 0.0;       ///< extra clearance, meters
};

/**
 * @brief Kinematic tree of a fixed-base upper body.
 *
 * Joints are stored in topological order (every parent index precedes its
 * children). The model is immutable after load and safe to share across
 * concurrent evaluators.
 */
struct RobotModel {
  std::vector<JointSpec> joints;
  std::vector<FrameSpec> frames;
  std::vector<CollisionSphere> spheres;
  std::vector<CbfPair> cbf_pairs;

  int dof() const { return static_cast<int>(joints.size()); }

  int joint_index(const std::string& name) const {
    for (int i = 0; i < dof(); ++i)
      if (joints[i].name == name) return i;
    throw Error("unknown joint '" + name + "'");
  }

  int frame_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(frames.size()); ++i)
      if (frames[i].name == name) return i;
    throw Error("unknown frame '" + name + "'");
  }

  int sphere_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(spheres.size()); ++i)
      if (spheres[i].name == name) return i;
    throw Error("unknown sphere '" + name + "'");
  }

  VecX lower_limits() const {
    VecX lo(dof());
    for (int i = 0; i < dof(); ++i) lo[i] = joints[i].q_min;
    return lo;
  }

  VecX upper_limits() const {
    VecX hi(dof());
    for (int i = 0; i < dof(); ++i) hi[i] = joints[i].q_max;
    return hi;
  }

  VecX velocity_limits() const {
    VecX v(dof());
    for (int i = 0; i < dof(); ++i) v[i] = joints[i].velocity_limit;
    return v;
  }

  /// Zero configuration clamped into the joint limits.
  JointVector home() const {
    JointVector q = JointVector::Zero(dof());
    for (int i = 0; i < dof(); ++i)
      q[i] = std::clamp(0.0, joints[i].q_min, joints[i].q_max);
    return q;
  }

  bool within_limits(const JointVector& q, double tol = 0.0) const {
    for (int i = 0; i < dof(); ++i)
      if (q[i] < joints[i].q_min - tol || q[i] > joints[i].q_max + tol) return false;
    return true;
  }

  /// Checks all structural invariants; throws Error on the first violation.
  void validate() const {
    if (dof() < 1) throw Error("model has no joints");
    for (int i = 0; i < dof(); ++i) {
      const JointSpec& j = joints[i];
      if (j.parent >= i)
        throw Error("joint '" + j.name + "': parent index " + std::to_string(j.parent) +
                    " must precede joint index " + std::to_string(i));
      if (j.parent < -1) throw Error("joint '" + j.name + "': bad parent index");
      if (std::abs(j.axis.norm() - 1.0) > 1e-9)
        throw Error("joint '" + j.name + "': axis is not unit length");
      if (!(j.q_min < j.q_max))
        throw Error("joint '" + j.name + "': requires q_min < q_max");
      if (!(j.velocity_limit > 0.0))
        throw Error("joint '" + j.name + "': requires velocity_limit > 0");
      if (!j.origin_translation.allFinite() || !j.origin_rotation.allFinite())
        throw Error("joint '" + j.name + "': non-finite origin");
      if (rotation_defect(j.origin_rotation) > 1e-9)
        throw Error("joint '" + j.name + "': origin rotation is not orthonormal");
    }
    for (const FrameSpec& f : frames) {
      if (f.parent_joint < -1 || f.parent_joint >= dof())
        throw Error("frame '" + f.name + "': parent joint out of range");
      if (!f.offset.allFinite()) throw Error("frame '" + f.name + "': non-finite offset");
    }
    for (const CollisionSphere& s : spheres) {
      if (s.parent_joint < -1 || s.parent_joint >= dof())
        throw Error("sphere '" + s.name + "': parent joint out of range");
      if (!(s.radius > 0.0)) throw Error("sphere '" + s.name + "': requires radius > 0");
    }
    for (const CbfPair& p : cbf_pairs) {
      const CollisionSphere& s = spheres[sphere_index(p.sphere)];
      frame_index(p.tracked_frame);
      if (p.limb_radius < 0.0 || p.margin < 0.0)
        throw Error("cbf_pair '" + p.tracked_frame + "/" + p.sphere +
                    "': limb_radius and margin must be nonnegative");
      if (!(s.radius + p.limb_radius + p.margin > 0.0))
        throw Error("cbf_pair '" + p.tracked_frame + "/" + p.sphere +
                    "': combined radius must be positive");
    }
  }
};

inline void check_dimension(const RobotModel& model, const JointVector& q) {
  if (q.size() != model.dof())
    throw Error("joint vector has dimension " + std::to_string(q.size()) +
                ", model expects " + std::to_string(model.dof()));
}

}  // namespace pdik

#endif  // PDIK_MODEL_HPP_
