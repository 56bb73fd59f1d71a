#ifndef PDIK_BENCH_HPP_
#define PDIK_BENCH_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdik/baselines.hpp"
#include "pdik/retarget.hpp"
#include "pdik/trajectory.hpp"

namespace pdik {

enum class Method {
  global_sqp,
  monolithic_qp,
  distributed_qp,
  parallel_dist_nocert,
  parallel_mono_cert,
  parallel_dist_cert,
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::global_sqp: return "global-sqp";
    case Method::monolithic_qp: return "mono";
    case Method::distributed_qp: return "dist";
    case Method::parallel_dist_nocert: return "pdist-nocert";
    case Method::parallel_mono_cert: return "pmono-cert";
    case Method::parallel_dist_cert: return "pdist-cert";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  for (Method m : {Method::global_sqp, Method::monolithic_qp, Method::distributed_qp,
                   Method::parallel_dist_nocert, Method::parallel_mono_cert,
                   Method::parallel_dist_cert})
    if (s == method_name(m)) return m;
  return std::nullopt;
}

enum class TargetGen { random_reachable, near_cbf_boundary, replay_file };

struct TrialConfig {
  std::uint64_t seed = 0;
  int horizon = 50;
  Method method = Method::parallel_dist_cert;
  int batch_k = 64;
  double eta = 5e-4;
  TargetGen target_generator = TargetGen::random_reachable;
  std::string replay_path;
  double dt = 0.05;  ///< seconds per control step
};

struct TrialMetrics {
  double mean_error = 0.0;   ///< meters, averaged hand error over the horizon
  double final_error = 0.0;  ///< meters, at the last step
  double solve_time_per_step = 0.0;  ///< seconds
  bool self_collision = false;
  bool singularity = false;
  bool stagnation = false;
};

// ---------------------------------------------------------------------------
// Violation detectors
// ---------------------------------------------------------------------------

/// True iff some joint stays within tol of a limit with |dq| < tol for at
/// least `window` consecutive steps.
inline bool detect_stagnation(const std::vector<JointVector>& q_hist,
                              const std::vector<JointVector>& dq_hist, const VecX& lower,
                              const VecX& upper, int window, double tol) {
  const size_t steps = std::min(q_hist.size(), dq_hist.size());
  if (steps == 0) return false;
  const int n = static_cast<int>(lower.size());
  for (int j = 0; j < n; ++j) {
    int run = 0;
    for (size_t t = 0; t < steps; ++t) {
      const bool at_limit =
          q_hist[t][j] >= upper[j] - tol || q_hist[t][j] <= lower[j] + tol;
      const bool still = std::abs(dq_hist[t][j]) < tol;
      if (at_limit && still) {
        if (++run >= window) return true;
      } else {
        run = 0;
      }
    }
  }
  return false;
}

/// True iff any barrier value went negative at any executed step (h = 0 is safe).
inline bool detect_collision(const std::vector<std::vector<double>>& h_hist) {
  for (const auto& step : h_hist)
    for (double h : step)
      if (h < 0.0) return true;
  return false;
}

/// True iff the task Jacobian's smallest singular value drops below threshold.
inline bool detect_singularity(const std::vector<MatX>& jac_hist, double threshold) {
  for (const MatX& jac : jac_hist)
    if (min_singular_value(jac) < threshold) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Structural wiring derived from the model
// ---------------------------------------------------------------------------

/// Task frames and segmentation inferred from the kinematic tree: frames bound
/// to leaf joints are the tracked hands, and each hand's ancestor chain forms
/// one segment (shared ancestors overlap).
struct BenchSetup {
  std::vector<std::string> task_frames;
  SegmentEmbedding segments;
  JointVector q0;
};

inline BenchSetup derive_setup(const RobotModel& model) {
  const int n = model.dof();
  std::vector<bool> has_child(n, false);
  for (const JointSpec& j : model.joints)
    if (j.parent >= 0) has_child[j.parent] = true;

  BenchSetup setup;
  setup.q0 = model.home();
  for (const FrameSpec& f : model.frames) {
    if (f.parent_joint < 0 || has_child[f.parent_joint]) continue;
    setup.task_frames.push_back(f.name);
    std::vector<int> chain;
    for (int j = f.parent_joint; j >= 0; j = model.joints[j].parent) chain.push_back(j);
    std::sort(chain.begin(), chain.end());
    bool duplicate = false;
    for (const auto& seg : setup.segments.segments) duplicate |= seg == chain;
    if (!duplicate) setup.segments.segments.push_back(std::move(chain));
  }
  if (setup.task_frames.empty()) throw Error("model has no frame on a leaf joint");
  return setup;
}

// ---------------------------------------------------------------------------
// Target generation
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kTargetSpeed = 0.5;        // m/s cap on target motion
constexpr int kWaypointSteps = 12;          // steps between waypoint redraws
constexpr double kBoundaryBand = 0.02;      // +/- band around the barrier surface, m

struct TargetWalk {
  Vec3 pos;
  Vec3 waypoint;
  int since_redraw = 0;
};

class TargetGenerator {
 public:
  TargetGenerator(const RobotModel& model, const BenchSetup& setup, const TrialConfig& cfg,
                  std::mt19937_64& rng)
      : model_(&model), setup_(&setup), cfg_(&cfg), rng_(&rng) {
    const FkCache fk = compute_fk(model, setup.q0);
    for (const std::string& name : setup.task_frames) {
      const FrameSpec& f = model.frames[model.frame_index(name)];
      TargetWalk w;
      w.pos = attached_point(fk, f.parent_joint, f.offset);
      w.waypoint = w.pos;
      walks_.push_back(w);
      home_side_.push_back(w.pos.y());
      sphere_center_.push_back(Vec3::Zero());
    }
    for (size_t i = 0; i < model.spheres.size(); ++i)
      sphere_home_.push_back(attached_point(fk, model.spheres[i].parent_joint,
                                            model.spheres[i].offset));
    if (cfg.target_generator == TargetGen::replay_file) load_replay();
    for (size_t i = 0; i < walks_.size(); ++i) redraw(i);
  }

  /// Targets for the step at time t = step * dt.
  std::vector<Vec3> advance(int step) {
    std::vector<Vec3> out(walks_.size());
    if (cfg_->target_generator == TargetGen::replay_file) {
      const double t = step * cfg_->dt;
      for (size_t i = 0; i < walks_.size(); ++i) out[i] = replay_at(i, t);
      return out;
    }
    for (size_t i = 0; i < walks_.size(); ++i) {
      TargetWalk& w = walks_[i];
      if (++w.since_redraw >= kWaypointSteps) redraw(i);
      const Vec3 delta = w.waypoint - w.pos;
      const double max_travel = kTargetSpeed * cfg_->dt;
      w.pos += delta.norm() <= max_travel ? delta : Vec3(delta.normalized() * max_travel);
      out[i] = w.pos;
    }
    return out;
  }

 private:
  void redraw(size_t i) {
    walks_[i].since_redraw = 0;
    if (cfg_->target_generator == TargetGen::replay_file) return;
    if (cfg_->target_generator == TargetGen::near_cbf_boundary && !model_->spheres.empty()) {
      walks_[i].waypoint = boundary_point(i);
      return;
    }
    walks_[i].waypoint = reachable_point();
  }

  Vec3 reachable_point() {
    VecX q(model_->dof());
    for (int j = 0; j < model_->dof(); ++j) {
      std::uniform_real_distribution<double> dist(model_->joints[j].q_min,
                                                  model_->joints[j].q_max);
      q[j] = dist(*rng_);
    }
    const FkCache fk = compute_fk(*model_, q);
    std::uniform_int_distribution<size_t> pick(0, setup_->task_frames.size() - 1);
    const FrameSpec& f =
        model_->frames[model_->frame_index(setup_->task_frames[pick(*rng_)])];
    return attached_point(fk, f.parent_joint, f.offset);
  }

  Vec3 boundary_point(size_t i) {
    std::uniform_int_distribution<size_t> pick(0, model_->spheres.size() - 1);
    const size_t si = pick(*rng_);
    const CollisionSphere& sphere = model_->spheres[si];
    double rho = sphere.radius + 0.06;
    for (const CbfPair& p : model_->cbf_pairs)
      if (p.sphere == sphere.name && p.tracked_frame == setup_->task_frames[i])
        rho = sphere.radius + p.limb_radius + p.margin;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 u(gauss(*rng_), gauss(*rng_), gauss(*rng_));
    if (u.norm() < 1e-9) u = Vec3::UnitX();
    u.normalize();
    // Keep each hand on its own side of the body.
    if (std::abs(home_side_[i]) > 0.02 && u.y() * home_side_[i] < 0.0) u.y() = -u.y();
    std::uniform_real_distribution<double> band(-kBoundaryBand, kBoundaryBand);
    return sphere_home_[si] + (rho + band(*rng_)) * u;
  }

  void load_replay() {
    std::ifstream in(cfg_->replay_path);
    if (!in) throw Error("cannot open replay file '" + cfg_->replay_path + "'");
    std::string line;
    int line_no = 0;
    bool header = false;
    replay_.assign(walks_.size(), {});
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        header = true;
        continue;  // t,frame,x,y,z
      }
      const auto cells = detail::split_csv_line(line);
      if (cells.size() != 5)
        throw Error("replay line " + std::to_string(line_no) + ": expected t,frame,x,y,z");
      const double t = detail::parse_csv_double(cells[0], line_no);
      const std::string& frame = cells[1];
      bool found = false;
      for (size_t i = 0; i < setup_->task_frames.size(); ++i) {
        if (setup_->task_frames[i] != frame) continue;
        replay_[i].emplace_back(t, Vec3(detail::parse_csv_double(cells[2], line_no),
                                        detail::parse_csv_double(cells[3], line_no),
                                        detail::parse_csv_double(cells[4], line_no)));
        found = true;
      }
      if (!found)
        throw Error("replay line " + std::to_string(line_no) + ": unknown task frame '" +
                    frame + "'");
    }
  }

  Vec3 replay_at(size_t i, double t) const {
    Vec3 value = walks_[i].pos;
    for (const auto& [rt, p] : replay_[i]) {
      if (rt > t) break;
      value = p;
    }
    return value;
  }

  const RobotModel* model_;
  const BenchSetup* setup_;
  const TrialConfig* cfg_;
  std::mt19937_64* rng_;
  std::vector<TargetWalk> walks_;
  std::vector<double> home_side_;
  std::vector<Vec3> sphere_center_;
  std::vector<Vec3> sphere_home_;
  std::vector<std::vector<std::pair<double, Vec3>>> replay_;
};

inline ControlConfig method_control_config(const RobotModel& model, const BenchSetup& setup,
                                           const TrialConfig& cfg) {
  ControlConfig cc;
  cc.dt = cfg.dt;
  cc.solver = QpSettings::batch();
  cc.certificate.eta = cfg.eta;
  cc.fallback = FallbackMode::hold;
  switch (cfg.method) {
    case Method::monolithic_qp:
    case Method::distributed_qp:
      cc.grid = ContinuationGrid::deterministic(1);
      cc.certificate.enabled = false;
      break;
    case Method::parallel_dist_nocert:
      cc.grid = ContinuationGrid::deterministic(cfg.batch_k);
      cc.certificate.enabled = false;
      break;
    case Method::parallel_mono_cert:
    case Method::parallel_dist_cert:
      cc.grid = ContinuationGrid::deterministic(cfg.batch_k);
      cc.certificate.enabled = true;
      break;
    case Method::global_sqp:
      break;
  }
  const bool monolithic =
      cfg.method == Method::monolithic_qp || cfg.method == Method::parallel_mono_cert;
  cc.segments = monolithic ? SegmentEmbedding::single(model.dof()) : setup.segments;
  return cc;
}

}  // namespace detail

/// Called once per executed step with the controller diagnostics.
using StepObserver = std::function<void(int step, const StepResult&)>;

/**
 * @brief One closed-loop tracking trial; deterministic given the seed.
 *
 * Hand targets move along seeded piecewise-linear waypoints (optionally biased
 * to the barrier surfaces, or replayed from file); the configured method is
 * stepped for `horizon` steps and the violation detectors are evaluated on
 * the executed history.
 */
inline TrialMetrics run_trial(const RobotModel& model, const TrialConfig& config,
                              const StepObserver& observer = {}) {
  if (config.horizon < 1) throw Error("run_trial: horizon must be >= 1");
  const BenchSetup setup = derive_setup(model);
  std::mt19937_64 rng(config.seed);
  detail::TargetGenerator targets(model, setup, config, rng);

  JointVector q = setup.q0;
  const ControlConfig cc = detail::method_control_config(model, setup, config);
  WarmStartCache warm;

  SqpSettings sqp;
  sqp.max_outer_iter = 30;
  sqp.trust_radius = 0.3;
  sqp.w_q = 1e-4;
  sqp.q_ref = setup.q0;

  std::vector<JointVector> q_hist, dq_hist;
  std::vector<std::vector<double>> h_hist;
  std::vector<MatX> jac_hist;
  double err_sum = 0.0, err_last = 0.0, time_sum = 0.0;

  for (int step = 0; step < config.horizon; ++step) {
    const std::vector<Vec3> goals = targets.advance(step);
    TaskSpec task;
    for (size_t i = 0; i < goals.size(); ++i)
      task.targets.push_back({setup.task_frames[i], goals[i], Vec3::Ones()});

    const auto t0 = std::chrono::steady_clock::now();
    JointVector q_next;
    if (config.method == Method::global_sqp) {
      q_next = global_ik_sqp(model, task, q, sqp).q_star;
    } else {
      const StepResult r = control_step(model, q, task, cc, &warm);
      q_next = r.q_next;
      if (observer) observer(step, r);
    }
    time_sum += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    dq_hist.push_back(q_next - q);
    q = q_next;
    q_hist.push_back(q);

    const FkCache fk = compute_fk(model, q);
    std::vector<double> h_now;
    for (const CbfPair& p : model.cbf_pairs) h_now.push_back(cbf_value(model, fk, p));
    h_hist.push_back(std::move(h_now));

    MatX jac(3 * static_cast<int>(goals.size()), model.dof());
    double err = 0.0;
    for (size_t i = 0; i < goals.size(); ++i) {
      const FrameSpec& f = model.frames[model.frame_index(setup.task_frames[i])];
      const Vec3 x = attached_point(fk, f.parent_joint, f.offset);
      err += (goals[i] - x).norm();
      jac.middleRows(3 * i, 3) = point_jacobian(model, fk, f.parent_joint, x);
    }
    err /= static_cast<double>(goals.size());
    jac_hist.push_back(std::move(jac));
    err_sum += err;
    err_last = err;
  }

  TrialMetrics m;
  m.mean_error = err_sum / config.horizon;
  m.final_error = err_last;
  m.solve_time_per_step = time_sum / config.horizon;
  m.self_collision = detect_collision(h_hist);
  m.singularity = detect_singularity(jac_hist, 1e-3);
  m.stagnation = detect_stagnation(q_hist, dq_hist, model.lower_limits(),
                                   model.upper_limits(), 5, 1e-3);
  return m;
}

// ---------------------------------------------------------------------------
// Ablation protocol
// ---------------------------------------------------------------------------

struct AblationVariant {
  Method method = Method::parallel_dist_cert;
  int batch_k = 1;
  double eta = 5e-4;
};

struct AblationRow {
  AblationVariant variant;
  int trials = 0;
  double solve_ms_mean = 0.0, solve_ms_std = 0.0;
  double mean_err_mean = 0.0, mean_err_std = 0.0;   // meters
  double final_err_mean = 0.0, final_err_std = 0.0; // meters
  int collisions = 0, singularities = 0, stagnations = 0;
  std::vector<TrialMetrics> per_trial;
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  return {mean, std::sqrt(var)};
}

}  // namespace detail

/// Runs `trials` paired-seed trials per variant (trial i reuses seed base+i
/// across every variant) and aggregates the Table-style columns.
inline std::vector<AblationRow> run_ablation(const RobotModel& model, int trials,
                                             const std::vector<AblationVariant>& variants,
                                             std::uint64_t base_seed = 1,
                                             TargetGen generator = TargetGen::near_cbf_boundary,
                                             double dt = 0.05, int horizon = 50) {
  std::vector<AblationRow> rows;
  for (const AblationVariant& v : variants) {
    AblationRow row;
    row.variant = v;
    row.trials = trials;
    std::vector<double> solve_ms, mean_err, final_err;
    for (int i = 0; i < trials; ++i) {
      TrialConfig cfg;
      cfg.seed = base_seed + static_cast<std::uint64_t>(i);
      cfg.method = v.method;
      cfg.batch_k = v.batch_k;
      cfg.eta = v.eta;
      cfg.target_generator = generator;
      cfg.dt = dt;
      cfg.horizon = horizon;
      const TrialMetrics m = run_trial(model, cfg);
      row.per_trial.push_back(m);
      solve_ms.push_back(m.solve_time_per_step * 1e3);
      mean_err.push_back(m.mean_error);
      final_err.push_back(m.final_error);
      row.collisions += m.self_collision;
      row.singularities += m.singularity;
      row.stagnations += m.stagnation;
    }
    std::tie(row.solve_ms_mean, row.solve_ms_std) = detail::mean_std(solve_ms);
    std::tie(row.mean_err_mean, row.mean_err_std) = detail::mean_std(mean_err);
    std::tie(row.final_err_mean, row.final_err_std) = detail::mean_std(final_err);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string ablation_markdown(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "| Method | Batch K | eta | Solve Time [ms] | Mean Err [mm] | Final Err [mm] "
     << "| Self Collision | Singularity | Stagnation |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  const auto fmt = [](double mean, double std) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << mean << " ± " << std;
    return s.str();
  };
  for (const AblationRow& r : rows) {
    const bool cert = r.variant.method == Method::parallel_mono_cert ||
                      r.variant.method == Method::parallel_dist_cert;
    os << "| " << method_name(r.variant.method) << " | " << r.variant.batch_k << " | ";
    if (cert)
      os << r.variant.eta;
    else
      os << "--";
    os << " | " << fmt(r.solve_ms_mean, r.solve_ms_std) << " | "
       << fmt(r.mean_err_mean * 1e3, r.mean_err_std * 1e3) << " | "
       << fmt(r.final_err_mean * 1e3, r.final_err_std * 1e3) << " | " << r.collisions << "/"
       << r.trials << " | " << r.singularities << "/" << r.trials << " | " << r.stagnations
       << "/" << r.trials << " |\n";
  }
  return os.str();
}

inline std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "method,batch_k,eta,solve_ms_mean,solve_ms_std,mean_err_m_mean,mean_err_m_std,"
     << "final_err_m_mean,final_err_m_std,collisions,singularities,stagnations,trials\n";
  for (const AblationRow& r : rows)
    os << method_name(r.variant.method) << ',' << r.variant.batch_k << ',' << r.variant.eta
       << ',' << r.solve_ms_mean << ',' << r.solve_ms_std << ',' << r.mean_err_mean << ','
       << r.mean_err_std << ',' << r.final_err_mean << ',' << r.final_err_std << ','
       << r.collisions << ',' << r.singularities << ',' << r.stagnations << ',' << r.trials
       << '\n';
  return os.str();
}

/// One row per trial, timing excluded from the deterministic columns.
inline std::string trials_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "method,batch_k,eta,trial,mean_error_m,final_error_m,solve_time_s,"
     << "self_collision,singularity,stagnation\n";
  for (const AblationRow& r : rows)
    for (size_t i = 0; i < r.per_trial.size(); ++i) {
      const TrialMetrics& m = r.per_trial[i];
      os << method_name(r.variant.method) << ',' << r.variant.batch_k << ',' << r.variant.eta
         << ',' << i << ',' << m.mean_error << ',' << m.final_error << ','
         << m.solve_time_per_step << ',' << m.self_collision << ',' << m.singularity << ','
         << m.stagnation << '\n';
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// Escape-probability Monte Carlo
// ---------------------------------------------------------------------------

struct EscapeMcConfig {
  double p = 0.1;  ///< synthetic per-candidate escape probability, in (0,1)
  std::vector<int> k_values = {1, 4, 16, 64};
  int trials = 100000;
  std::uint64_t seed = 0;
};

struct EscapeMcRow {
  int k = 0;
  double empirical = 0.0;
  double predicted = 0.0;  ///< 1 - (1-p)^K
};

/// Simulates K independent Bernoulli(p) candidate escapes per trial and
/// reports the frequency of at least one success next to the closed form.
inline std::vector<EscapeMcRow> escape_mc(const EscapeMcConfig& config) {
  if (!(config.p > 0.0 && config.p < 1.0)) throw Error("escape_mc: p must lie in (0,1)");
  if (config.trials < 1) throw Error("escape_mc: trials must be >= 1");
  std::vector<EscapeMcRow> rows;
  for (int k : config.k_values) {
    if (k < 1) throw Error("escape_mc: K must be >= 1");
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long hits = 0;
    for (int t = 0; t < config.trials; ++t) {
      bool any = false;
      for (int j = 0; j < k && !any; ++j) any = unif(rng) < config.p;
      hits += any;
    }
    EscapeMcRow row;
    row.k = k;
    row.empirical = static_cast<double>(hits) / config.trials;
    row.predicted = 1.0 - std::pow(1.0 - config.p, k);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Compute-coverage accounting
// ---------------------------------------------------------------------------

struct CoverageReport {
  double budget_sec = 0.0;
  double cost_whole_sec = 0.0;    ///< one whole-body candidate
  double cost_segments_sec = 0.0; ///< one candidate across every segment
  int k_whole = 0;
  int k_dist = 0;
};

/// Measures candidates-evaluated-per-budget for the monolithic and the
/// distributed decompositions of the same step data.
inline CoverageReport measure_coverage(const RobotModel& model, double budget_sec = 4e-3,
                                       int reps = 200) {
  const BenchSetup setup = derive_setup(model);
  const FkCache fk = compute_fk(model, setup.q0);
  TaskSpec task;
  for (const std::string& name : setup.task_frames) {
    const FrameSpec& f = model.frames[model.frame_index(name)];
    task.targets.push_back({name, attached_point(fk, f.parent_joint, f.offset) + Vec3(0.05, 0.02, 0.03),
                            Vec3::Ones()});
  }
  ControlConfig mono;
  mono.grid = ContinuationGrid::deterministic(1);
  mono.segments = SegmentEmbedding::single(model.dof());
  mono.solver = QpSettings::batch();
  ControlConfig dist = mono;
  dist.segments = setup.segments;

  const auto time_steps = [&](const ControlConfig& cc) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) control_step(model, setup.q0, task, cc);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
  };
  time_steps(mono);  // warm up caches
  CoverageReport report;
  report.budget_sec = budget_sec;
  report.cost_whole_sec = time_steps(mono);
  report.cost_segments_sec = time_steps(dist);
  report.k_whole = static_cast<int>(budget_sec / report.cost_whole_sec);
  report.k_dist = static_cast<int>(budget_sec / report.cost_segments_sec);
  return report;
}

}  // namespace pdik

#endif  // PDIK_BENCH_HPP_
