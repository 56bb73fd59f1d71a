#ifndef PDIK_RETARGET_HPP_
#define PDIK_RETARGET_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdik/cbf.hpp"
#include "pdik/kinematics.hpp"
#include "pdik/model.hpp"
#include "pdik/qp.hpp"

namespace pdik {

/// One 3-D position target with its weight block.
struct TaskTarget {
  std::string frame;
  Vec3 x_d = Vec3::Zero();
  Vec3 weight = Vec3::Ones();
};

/// Set of position targets; task dimension is 3 per target.
struct TaskSpec {
  std::vector<TaskTarget> targets;

  int dim() const { return 3 * static_cast<int>(targets.size()); }

  VecX desired_stack() const {
    VecX x(dim());
    for (size_t t = 0; t < targets.size(); ++t) x.segment<3>(3 * t) = targets[t].x_d;
    return x;
  }

  VecX weight_diag() const {
    VecX w(dim());
    for (size_t t = 0; t < targets.size(); ++t) w.segment<3>(3 * t) = targets[t].weight;
    return w;
  }

  void validate(const RobotModel& model) const {
    for (const TaskTarget& t : targets) {
      model.frame_index(t.frame);
      if (!(t.weight.minCoeff() > 0.0))
        throw Error("task target '" + t.frame + "': weights must be positive");
    }
  }
};

/// Continuation parameters alpha_j in [0,1], sorted ascending.
struct ContinuationGrid {
  enum class Mode { deterministic_grid, uniform_random };

  Mode mode = Mode::deterministic_grid;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }

  /// alpha_j = j/K for j = 1..K.
  static ContinuationGrid deterministic(int k) {
    if (k < 1) throw Error("continuation grid needs K >= 1");
    ContinuationGrid g;
    g.mode = Mode::deterministic_grid;
    g.values.resize(k);
    for (int j = 1; j <= k; ++j) g.values[j - 1] = static_cast<double>(j) / k;
    return g;
  }

  /// K samples from Unif[0,1], sorted ascending.
  static ContinuationGrid uniform_random(int k, std::mt19937_64& rng) {
    if (k < 1) throw Error("continuation grid needs K >= 1");
    ContinuationGrid g;
    g.mode = Mode::uniform_random;
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    g.values.resize(k);
    for (double& v : g.values) v = dist(rng);
    std::sort(g.values.begin(), g.values.end());
    return g;
  }

  void validate() const {
    if (values.empty()) throw Error("continuation grid is empty");
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0.0 || values[i] > 1.0) throw Error("grid value outside [0,1]");
      if (i > 0 && values[i] < values[i - 1]) throw Error("grid values must ascend");
    }
  }
};

/// Progress certificate thresholds.
struct CertificateParams {
  double eta = 5e-4;    ///< required predicted decrease
  double eps_q = 1e-4;  ///< minimum update norm while far from the goal, rad
  double eps_v = 1e-6;  ///< goal-proximity threshold on V
  VecX weight_diag;     ///< Lyapunov weight; empty reuses the task weights
  bool enabled = true;
};

/// What to apply when no candidate passes the certificate.
enum class FallbackMode {
  hold,           ///< keep the pose; conservative
  min_predicted,  ///< apply the feasible candidate with smallest predicted V, if it decreases V
};

/// Per-limb decomposition of the joint vector; overlapping joints are averaged.
struct SegmentEmbedding {
  std::vector<std::vector<int>> segments;

  static SegmentEmbedding single(int dof) {
    SegmentEmbedding e;
    e.segments.emplace_back(dof);
    for (int i = 0; i < dof; ++i) e.segments[0][i] = i;
    return e;
  }

  /// Joints claimed by more than one segment.
  std::vector<int> overlap(int dof) const {
    std::vector<int> count(dof, 0);
    for (const auto& seg : segments)
      for (int j : seg) ++count[j];
    std::vector<int> out;
    for (int j = 0; j < dof; ++j)
      if (count[j] > 1) out.push_back(j);
    return out;
  }

  void validate(int dof) const {
    if (segments.empty()) throw Error("segment embedding is empty");
    for (const auto& seg : segments) {
      if (seg.empty()) throw Error("segment with no joints");
      std::vector<bool> seen(dof, false);
      for (int j : seg) {
        if (j < 0 || j >= dof) throw Error("segment joint index out of range");
        if (seen[j]) throw Error("segment repeats joint " + std::to_string(j));
        seen[j] = true;
      }
    }
  }
};

/// Diagnostics of one continuation candidate.
struct CandidateDiag {
  double alpha = 0.0;
  bool solved = false;    ///< solver returned an iterate (not infeasible)
  bool feasible = false;  ///< constraints hold within tolerance
  bool accepted = false;
  double v_pred = 0.0;
  double dq_norm = 0.0;
  QpStatus status = QpStatus::max_iter_reached;
};

/// Per-segment outcome of one control step.
struct SegmentReport {
  std::vector<CandidateDiag> candidates;  ///< ordered by alpha ascending
  std::optional<int> selected;            ///< certified selection (index into candidates)
  std::optional<int> fallback;            ///< applied without certificate
  std::optional<int> applied;             ///< candidate actually applied after composition checks
  double v_before = 0.0;
};

struct StepResult {
  JointVector q_next;
  JointVector dq;
  std::optional<double> selected_alpha;  ///< smallest applied alpha among certified segments
  double v_before = 0.0;
  double v_after = 0.0;
  std::vector<SegmentReport> segments;
  bool no_certified_candidate = false;  ///< some segment held its pose
  bool qp_inexact = false;              ///< an applied candidate hit the iteration cap
  bool cbf_active = false;              ///< a barrier row was tight at the applied step
  bool cbf_fallback = false;            ///< composition re-check forced the common smallest alpha
};

/// Everything control_step needs besides the model, configuration and task.
struct ControlConfig {
  ContinuationGrid grid = ContinuationGrid::deterministic(64);
  CertificateParams certificate;
  double gamma = 0.5;  ///< barrier decay rate per step
  double w_q = 1e-2;   ///< increment regularization weight (W_q = w_q I)
  double dt = 0.01;    ///< seconds; increment bounds are +/- velocity_limit * dt
  SegmentEmbedding segments;  ///< empty => one monolithic segment
  QpSettings solver = QpSettings::batch();
  FallbackMode fallback = FallbackMode::hold;
  double feas_tol = 1e-4;  ///< constraint tolerance for inexact candidates
};

/// Warm-start memory across control steps, one slot per (segment, candidate).
struct WarmStartCache {
  std::vector<std::vector<QpSolution>> slots;
};

// ---------------------------------------------------------------------------
// Elementary operations
// ---------------------------------------------------------------------------

/// Displacements alpha_j * (x_d - x_now), one per grid value.
inline std::vector<VecX> continuation_targets(const VecX& x_now, const VecX& x_d,
                                              const ContinuationGrid& grid) {
  if (x_now.size() != x_d.size()) throw Error("continuation_targets: dimension mismatch");
  const VecX e = x_d - x_now;
  std::vector<VecX> out;
  out.reserve(grid.values.size());
  for (double a : grid.values) out.push_back(a * e);
  return out;
}

/// V = 1/2 e^T W e.
inline double lyapunov_value(const VecX& e, const VecX& w_diag) {
  if (e.size() != w_diag.size()) throw Error("lyapunov_value: dimension mismatch");
  return 0.5 * e.dot(w_diag.cwiseProduct(e));
}

/// Predicted value after the step: 1/2 (e - J dq)^T W (e - J dq).
inline double predicted_lyapunov(const VecX& e, const MatX& jac, const VecX& dq,
                                 const VecX& w_diag) {
  if (jac.rows() != e.size() || jac.cols() != dq.size())
    throw Error("predicted_lyapunov: dimension mismatch");
  const VecX e_next = e - jac * dq;
  return lyapunov_value(e_next, w_diag);
}

/// Acceptance test: feasible, predicted progress of at least eta, and a
/// non-stagnant update norm whenever V is still above eps_v.
inline bool certify(bool feasible, const VecX& dq, double v, double v_pred,
                    const CertificateParams& params) {
  if (!feasible) return false;
  if (!(v_pred <= v - params.eta)) return false;
  if (v > params.eps_v && dq.norm() < params.eps_q) return false;
  return true;
}

/// Largest-alpha rule: max index with accepted = true.
inline std::optional<int> select_candidate(const std::vector<CandidateDiag>& candidates) {
  for (int i = static_cast<int>(candidates.size()) - 1; i >= 0; --i)
    if (candidates[i].accepted) return i;
  return std::nullopt;
}

/// Drops each row to the segment's columns; rows with no influence on the
/// segment are omitted.
inline std::vector<CbfRow> restrict_cbf_rows(const std::vector<CbfRow>& rows,
                                             const std::vector<int>& joints) {
  std::vector<CbfRow> out;
  for (const CbfRow& row : rows) {
    CbfRow r;
    r.gradient.resize(joints.size());
    for (size_t i = 0; i < joints.size(); ++i) r.gradient[i] = row.gradient[joints[i]];
    if (r.gradient.cwiseAbs().maxCoeff() == 0.0) continue;
    r.bound = row.bound;
    r.h = row.h;
    out.push_back(std::move(r));
  }
  return out;
}

/**
 * @brief Assembles one candidate QP.
 *
 * H = JᵀW_xJ + W_q, g = -JᵀW_x d. Constraint rows stack the barrier rows
 * (one-sided), the increment box, and the position box, in that order.
 */
inline QpProblem build_candidate_qp(const MatX& jac, const VecX& displacement,
                                    const VecX& wx_diag, const VecX& wq_diag,
                                    const std::vector<CbfRow>& cbf_rows, const VecX& dq_lower,
                                    const VecX& dq_upper, const VecX& pos_lower,
                                    const VecX& pos_upper) {
  const int d = static_cast<int>(jac.cols());
  if (displacement.size() != jac.rows() || wx_diag.size() != jac.rows() ||
      wq_diag.size() != d || dq_lower.size() != d || dq_upper.size() != d ||
      pos_lower.size() != d || pos_upper.size() != d)
    throw Error("build_candidate_qp: dimension mismatch");
  QpProblem qp;
  const MatX jw = wx_diag.asDiagonal() * jac;
  qp.H = jac.transpose() * jw;
  qp.H += MatX(wq_diag.asDiagonal());
  qp.g = -jw.transpose() * displacement;
  const int nc = static_cast<int>(cbf_rows.size());
  qp.A.resize(nc + 2 * d, d);
  qp.lower.resize(nc + 2 * d);
  qp.upper.resize(nc + 2 * d);
  for (int i = 0; i < nc; ++i) {
    qp.A.row(i) = cbf_rows[i].gradient.transpose();
    qp.lower[i] = cbf_rows[i].bound;
    qp.upper[i] = kInf;
  }
  qp.A.block(nc, 0, d, d) = MatX::Identity(d, d);
  qp.lower.segment(nc, d) = dq_lower;
  qp.upper.segment(nc, d) = dq_upper;
  qp.A.block(nc + d, 0, d, d) = MatX::Identity(d, d);
  qp.lower.segment(nc + d, d) = pos_lower;
  qp.upper.segment(nc + d, d) = pos_upper;
  return qp;
}

/// Composes per-segment updates; overlap joints take the mean of their segments.
inline JointVector compose_segments(const std::vector<VecX>& segment_dq,
                                    const SegmentEmbedding& embedding, int dof) {
  if (segment_dq.size() != embedding.segments.size())
    throw Error("compose_segments: segment count mismatch");
  JointVector dq = JointVector::Zero(dof);
  VecX count = VecX::Zero(dof);
  for (size_t s = 0; s < segment_dq.size(); ++s) {
    const auto& joints = embedding.segments[s];
    if (segment_dq[s].size() != static_cast<int>(joints.size()))
      throw Error("compose_segments: segment dimension mismatch");
    for (size_t i = 0; i < joints.size(); ++i) {
      dq[joints[i]] += segment_dq[s][i];
      count[joints[i]] += 1.0;
    }
  }
  for (int j = 0; j < dof; ++j)
    if (count[j] > 1.0) dq[j] /= count[j];
  return dq;
}

// ---------------------------------------------------------------------------
// Full control step
// ---------------------------------------------------------------------------

namespace detail {

struct SegmentData {
  std::vector<int> joints;
  std::vector<int> target_rows;  // row offsets into the stacked task (3 per target)
  MatX jac;                      // task rows x segment joints
  VecX e;
  VecX wx;      // task weights on this segment's rows
  VecX w_lyap;  // certificate weights on this segment's rows
  std::vector<CbfRow> cbf;
  VecX dq_lower, dq_upper, pos_lower, pos_upper;
  VecX box_lower, box_upper;  // elementwise intersection of the two boxes
};

inline int owning_segment(const SegmentEmbedding& embedding, int joint) {
  for (size_t s = 0; s < embedding.segments.size(); ++s)
    for (int j : embedding.segments[s])
      if (j == joint) return static_cast<int>(s);
  return -1;
}

}  // namespace detail

/**
 * @brief One retargeting control step.
 *
 * Evaluates the continuation family per segment in a shared-matrix batch,
 * certifies each candidate against the segment's final-goal Lyapunov value,
 * applies the largest certified alpha, and composes segments with overlap
 * averaging. The composed step is re-checked against the full-model barrier
 * rows; on violation every segment falls back to the smallest applied alpha,
 * and if the violation persists the step holds.
 */
inline StepResult control_step(const RobotModel& model, const JointVector& q,
                               const TaskSpec& task, const ControlConfig& config,
                               WarmStartCache* warm = nullptr) {
  check_dimension(model, q);
  task.validate(model);
  config.grid.validate();
  const int n = model.dof();
  const SegmentEmbedding embedding =
      config.segments.segments.empty() ? SegmentEmbedding::single(n) : config.segments;
  embedding.validate(n);

  const FkCache fk = compute_fk(model, q);
  const int n_targets = static_cast<int>(task.targets.size());

  // Stacked task data at q.
  VecX e_full(task.dim());
  std::vector<MatX> target_jac(n_targets);
  for (int t = 0; t < n_targets; ++t) {
    const int fi = model.frame_index(task.targets[t].frame);
    const FrameSpec& f = model.frames[fi];
    const Vec3 x_now = attached_point(fk, f.parent_joint, f.offset);
    e_full.segment<3>(3 * t) = task.targets[t].x_d - x_now;
    target_jac[t] = point_jacobian(model, fk, f.parent_joint, x_now);
  }
  const VecX wx_full = task.weight_diag();
  const VecX w_lyap_full = config.certificate.weight_diag.size() == task.dim()
                               ? config.certificate.weight_diag
                               : wx_full;

  const std::vector<CbfRow> cbf_full = build_cbf_rows(model, fk, model.cbf_pairs, config.gamma);

  const VecX q_lo = model.lower_limits();
  const VecX q_hi = model.upper_limits();
  const VecX vel = model.velocity_limits();

  // Assign each target to the first segment containing its frame's parent joint.
  const int n_seg = static_cast<int>(embedding.segments.size());
  std::vector<detail::SegmentData> segs(n_seg);
  for (int s = 0; s < n_seg; ++s) segs[s].joints = embedding.segments[s];
  for (int t = 0; t < n_targets; ++t) {
    const FrameSpec& f = model.frames[model.frame_index(task.targets[t].frame)];
    if (f.parent_joint < 0) continue;  // base-fixed target cannot move
    const int s = detail::owning_segment(embedding, f.parent_joint);
    if (s < 0)
      throw Error("task frame '" + f.name + "' is not covered by any segment");
    segs[s].target_rows.push_back(3 * t);
  }

  for (auto& sd : segs) {
    const int d = static_cast<int>(sd.joints.size());
    const int rows = 3 * static_cast<int>(sd.target_rows.size());
    sd.jac.resize(rows, d);
    sd.e.resize(rows);
    sd.wx.resize(rows);
    sd.w_lyap.resize(rows);
    for (size_t ti = 0; ti < sd.target_rows.size(); ++ti) {
      const int r0 = sd.target_rows[ti];
      for (int c = 0; c < d; ++c)
        sd.jac.block(3 * ti, c, 3, 1) = target_jac[r0 / 3].col(sd.joints[c]);
      sd.e.segment<3>(3 * ti) = e_full.segment<3>(r0);
      sd.wx.segment<3>(3 * ti) = wx_full.segment<3>(r0);
      sd.w_lyap.segment<3>(3 * ti) = w_lyap_full.segment<3>(r0);
    }
    sd.cbf = restrict_cbf_rows(cbf_full, sd.joints);
    sd.dq_lower.resize(d);
    sd.dq_upper.resize(d);
    sd.pos_lower.resize(d);
    sd.pos_upper.resize(d);
    for (int c = 0; c < d; ++c) {
      const int j = sd.joints[c];
      sd.dq_upper[c] = vel[j] * config.dt;
      sd.dq_lower[c] = -sd.dq_upper[c];
      sd.pos_lower[c] = q_lo[j] - q[j];
      sd.pos_upper[c] = q_hi[j] - q[j];
    }
    sd.box_lower = sd.dq_lower.cwiseMax(sd.pos_lower);
    sd.box_upper = sd.dq_upper.cwiseMin(sd.pos_upper);
  }

  if (warm && (warm->slots.size() != static_cast<size_t>(n_seg) ||
               (n_seg > 0 && warm->slots[0].size() != config.grid.values.size())))
    warm->slots.assign(n_seg, std::vector<QpSolution>(config.grid.values.size()));

  StepResult result;
  result.segments.resize(n_seg);
  result.v_before = lyapunov_value(e_full, w_lyap_full);

  const int n_cand = config.grid.size();
  std::vector<std::vector<VecX>> seg_solutions(n_seg);

  for (int s = 0; s < n_seg; ++s) {
    detail::SegmentData& sd = segs[s];
    SegmentReport& report = result.segments[s];
    report.v_before = lyapunov_value(sd.e, sd.w_lyap);

    // Shared H and A: only g varies across the alpha family.
    std::vector<QpProblem> family;
    family.reserve(n_cand);
    const VecX wq = VecX::Constant(sd.joints.size(), config.w_q);
    for (int c = 0; c < n_cand; ++c)
      family.push_back(build_candidate_qp(sd.jac, config.grid.values[c] * sd.e, sd.wx, wq,
                                          sd.cbf, sd.dq_lower, sd.dq_upper, sd.pos_lower,
                                          sd.pos_upper));
    const std::vector<QpSolution> sols =
        warm ? solve_batch(family, config.solver, &warm->slots[s])
             : solve_batch(family, config.solver);
    if (warm) warm->slots[s] = sols;

    report.candidates.resize(n_cand);
    seg_solutions[s].resize(n_cand);
    for (int c = 0; c < n_cand; ++c) {
      CandidateDiag& diag = report.candidates[c];
      diag.alpha = config.grid.values[c];
      diag.status = sols[c].status;
      diag.solved = sols[c].status != QpStatus::infeasible;
      VecX dq = diag.solved ? sols[c].z : VecX::Zero(sd.joints.size());
      // Box rows are enforced exactly; the solver leaves tolerance-level slop.
      dq = dq.cwiseMax(sd.box_lower).cwiseMin(sd.box_upper);
      seg_solutions[s][c] = dq;
      diag.feasible =
          diag.solved && constraint_violation(family[c], dq) <= config.feas_tol;
      diag.v_pred = predicted_lyapunov(sd.e, sd.jac, dq, sd.w_lyap);
      diag.dq_norm = dq.norm();
      diag.accepted = config.certificate.enabled
                          ? certify(diag.feasible, dq, report.v_before, diag.v_pred,
                                    config.certificate)
                          : diag.feasible;
    }

    report.selected = select_candidate(report.candidates);
    if (report.selected) {
      report.applied = report.selected;
    } else if (config.fallback == FallbackMode::min_predicted) {
      int best = -1;
      for (int c = 0; c < n_cand; ++c) {
        if (!report.candidates[c].feasible) continue;
        if (best < 0 || report.candidates[c].v_pred < report.candidates[best].v_pred) best = c;
      }
      if (best >= 0 && report.candidates[best].v_pred < report.v_before) {
        report.fallback = best;
        report.applied = best;
      }
    }
  }

  // Compose, re-check the full-model barrier rows, and fall back if needed.
  const auto compose_at = [&](const std::vector<std::optional<int>>& picks) {
    std::vector<VecX> parts(n_seg);
    for (int s = 0; s < n_seg; ++s)
      parts[s] = picks[s] ? seg_solutions[s][*picks[s]]
                          : VecX::Zero(segs[s].joints.size());
    return compose_segments(parts, embedding, n);
  };
  const auto cbf_ok = [&](const JointVector& dq) {
    for (const CbfRow& row : cbf_full)
      if (row.gradient.dot(dq) < row.bound - config.feas_tol) return false;
    return true;
  };

  std::vector<std::optional<int>> picks(n_seg);
  for (int s = 0; s < n_seg; ++s) picks[s] = result.segments[s].applied;
  JointVector dq = compose_at(picks);

  if (!cbf_ok(dq)) {
    int min_idx = -1;
    for (int s = 0; s < n_seg; ++s)
      if (picks[s] && (min_idx < 0 || *picks[s] < min_idx)) min_idx = *picks[s];
    std::vector<std::optional<int>> retry(n_seg);
    for (int s = 0; s < n_seg; ++s) {
      if (!picks[s]) continue;
      const CandidateDiag& c = result.segments[s].candidates[min_idx];
      retry[s] = (c.solved && c.feasible) ? std::optional<int>(min_idx) : std::nullopt;
    }
    result.cbf_fallback = true;
    dq = compose_at(retry);
    if (!cbf_ok(dq)) {
      for (auto& p : retry) p.reset();
      dq = JointVector::Zero(n);
    }
    picks = retry;
    for (int s = 0; s < n_seg; ++s) result.segments[s].applied = picks[s];
  }

  for (int s = 0; s < n_seg; ++s) {
    if (!picks[s]) {
      result.no_certified_candidate = true;
      continue;
    }
    if (result.segments[s].candidates[*picks[s]].status == QpStatus::max_iter_reached)
      result.qp_inexact = true;
  }

  for (const CbfRow& row : cbf_full) {
    if (row.gradient.dot(dq) <= row.bound + 1e-7 &&
        (row.gradient.cwiseAbs().maxCoeff() > 0.0 || row.h < 0.0)) {
      result.cbf_active = true;
      break;
    }
  }
  if (result.cbf_fallback) result.cbf_active = true;

  std::optional<double> selected_alpha;
  for (int s = 0; s < n_seg; ++s) {
    if (!result.segments[s].selected || !picks[s]) continue;
    const double a = config.grid.values[*picks[s]];
    if (!selected_alpha || a < *selected_alpha) selected_alpha = a;
  }
  result.selected_alpha = selected_alpha;

  result.dq = dq;
  result.q_next = q + dq;
  FkCache fk_next = compute_fk(model, result.q_next);
  VecX e_next(task.dim());
  for (int t = 0; t < n_targets; ++t) {
    const FrameSpec& f = model.frames[model.frame_index(task.targets[t].frame)];
    e_next.segment<3>(3 * t) =
        task.targets[t].x_d - attached_point(fk_next, f.parent_joint, f.offset);
  }
  result.v_after = lyapunov_value(e_next, w_lyap_full);
  return result;
}

/// Stateful wrapper holding the configuration, pose and warm-start memory.
class RetargetController {
 public:
  RetargetController(const RobotModel& model, ControlConfig config, JointVector q0)
      : model_(&model), config_(std::move(config)), q_(std::move(q0)) {
    check_dimension(model, q_);
  }

  const JointVector& q() const { return q_; }
  const ControlConfig& config() const { return config_; }
  ControlConfig& config() { return config_; }

  StepResult step(const TaskSpec& task) {
    StepResult r = control_step(*model_, q_, task, config_, &warm_);
    q_ = r.q_next;
    return r;
  }

 private:
  const RobotModel* model_;
  ControlConfig config_;
  JointVector q_;
  WarmStartCache warm_;
};

}  // namespace pdik

#endif  // PDIK_RETARGET_HPP_
