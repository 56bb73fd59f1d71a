#ifndef PDIK_BASELINES_HPP_
#define PDIK_BASELINES_HPP_

#include <cmath>
#include <vector>

#include "pdik/retarget.hpp"

namespace pdik {

/// Settings of the sequential Gauss-Newton baseline.
struct SqpSettings {
  int max_outer_iter = 100;
  double armijo_c = 1e-4;    ///< sufficient-decrease constant
  double backtrack = 0.5;    ///< step shrink factor, in (0,1)
  double t_min = 1e-4;       ///< smallest line-search step
  double grad_tol = 1e-7;    ///< convergence tolerance on the objective gradient
  double step_tol = 1e-10;   ///< convergence tolerance on the subproblem step
  double trust_radius = 0.5; ///< per-iteration increment box, rad
  double w_q = 1e-6;         ///< regularization weight toward q_ref
  VecX q_ref;                ///< empty: regularize toward the start configuration
  double gamma = 0.5;
  bool use_cbf = true;
  QpSettings qp = QpSettings::accurate();
};

struct GlobalIkResult {
  JointVector q_star;
  double f_final = 0.0;
  int iterations = 0;  ///< accepted updates
  bool converged = false;
};

/// Regularized tracking objective F = 1/2 |x(q)-x_d|^2_Wx + 1/2 w_q |q-q_ref|^2.
inline double objective_F(const RobotModel& model, const JointVector& q, const TaskSpec& task,
                          const JointVector& q_ref, double w_q) {
  check_dimension(model, q);
  const FkCache fk = compute_fk(model, q);
  double f = 0.0;
  for (const TaskTarget& t : task.targets) {
    const FrameSpec& frame = model.frames[model.frame_index(t.frame)];
    const Vec3 err = t.x_d - attached_point(fk, frame.parent_joint, frame.offset);
    f += 0.5 * err.dot(t.weight.cwiseProduct(err));
  }
  const VecX dq = q - q_ref;
  f += 0.5 * w_q * dq.squaredNorm();
  return f;
}

/**
 * @brief Global IK by sequential Gauss-Newton steps with Armijo backtracking.
 *
 * Each outer iteration solves the constrained local QP (joint limits as hard
 * constraints, barrier rows included, trust box on the increment) and line
 * searches the objective F along the step. F never increases across accepted
 * iterates.
 */
inline GlobalIkResult global_ik_sqp(const RobotModel& model, const TaskSpec& task,
                                    const JointVector& q0, const SqpSettings& settings) {
  check_dimension(model, q0);
  task.validate(model);
  if (!model.within_limits(q0, 1e-12)) throw Error("global_ik_sqp: q0 outside joint limits");
  const VecX q_ref = settings.q_ref.size() == model.dof() ? settings.q_ref : q0;
  const int n = model.dof();
  const int n_targets = static_cast<int>(task.targets.size());
  const VecX q_lo = model.lower_limits();
  const VecX q_hi = model.upper_limits();
  const VecX wx = task.weight_diag();

  GlobalIkResult out;
  out.q_star = q0;
  out.f_final = objective_F(model, out.q_star, task, q_ref, settings.w_q);

  QpSolution warm;
  bool have_warm = false;

  for (int iter = 0; iter < settings.max_outer_iter; ++iter) {
    const FkCache fk = compute_fk(model, out.q_star);
    MatX jac(3 * n_targets, n);
    VecX e(3 * n_targets);
    for (int t = 0; t < n_targets; ++t) {
      const FrameSpec& f = model.frames[model.frame_index(task.targets[t].frame)];
      const Vec3 x_now = attached_point(fk, f.parent_joint, f.offset);
      e.segment<3>(3 * t) = task.targets[t].x_d - x_now;
      jac.middleRows(3 * t, 3) = point_jacobian(model, fk, f.parent_joint, x_now);
    }
    const VecX grad = -jac.transpose() * wx.cwiseProduct(e) +
                      settings.w_q * (out.q_star - q_ref);
    if (grad.cwiseAbs().maxCoeff() < settings.grad_tol) {
      out.converged = true;
      break;
    }

    std::vector<CbfRow> cbf;
    if (settings.use_cbf && !model.cbf_pairs.empty())
      cbf = build_cbf_rows(model, fk, model.cbf_pairs, settings.gamma);

    const VecX trust_lo = VecX::Constant(n, -settings.trust_radius);
    const VecX trust_hi = VecX::Constant(n, settings.trust_radius);
    const VecX wq_diag = VecX::Constant(n, std::max(settings.w_q, 1e-9));
    QpProblem qp = build_candidate_qp(jac, e, wx, wq_diag, cbf, trust_lo, trust_hi,
                                      q_lo - out.q_star, q_hi - out.q_star);
    qp.g = grad;  // exact gradient of F, including the q_ref pull
    const QpSolution sol = solve(qp, settings.qp, have_warm ? &warm : nullptr);
    warm = sol;
    have_warm = true;
    if (sol.status == QpStatus::infeasible) throw Error("global_ik_sqp: subproblem infeasible");

    VecX dq = sol.z.cwiseMax(trust_lo.cwiseMax(q_lo - out.q_star))
                  .cwiseMin(trust_hi.cwiseMin(q_hi - out.q_star));
    if (dq.cwiseAbs().maxCoeff() < settings.step_tol) {
      out.converged = true;
      break;
    }
    const double slope = grad.dot(dq);
    if (slope >= 0.0) break;  // numerically no descent direction left

    double t = 1.0;
    bool accepted = false;
    while (t >= settings.t_min) {
      const JointVector q_try = out.q_star + t * dq;
      const double f_try = objective_F(model, q_try, task, q_ref, settings.w_q);
      if (f_try <= out.f_final + settings.armijo_c * t * slope) {
        out.q_star = q_try;
        out.f_final = f_try;
        accepted = true;
        break;
      }
      t *= settings.backtrack;
    }
    if (!accepted) break;
    ++out.iterations;
  }
  return out;
}

enum class SingleShotMode { monolithic, distributed };

/**
 * @brief One differential IK step without continuation or certificate.
 *
 * Identical to control_step with a single alpha = 1 candidate and the
 * certificate disabled; monolithic mode overrides the segmentation with one
 * whole-body segment.
 */
inline StepResult single_shot_step(const RobotModel& model, const JointVector& q,
                                   const TaskSpec& task, SingleShotMode mode,
                                   ControlConfig config, WarmStartCache* warm = nullptr) {
  config.grid = ContinuationGrid::deterministic(1);
  config.certificate.enabled = false;
  if (mode == SingleShotMode::monolithic) config.segments = SegmentEmbedding::single(model.dof());
  return control_step(model, q, task, config, warm);
}

}  // namespace pdik

#endif  // PDIK_BASELINES_HPP_
