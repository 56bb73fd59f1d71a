#ifndef PDIK_QP_HPP_
#define PDIK_QP_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <thread>
#include <vector>

#include "pdik/model.hpp"

namespace pdik {

constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * @brief Convex QP in the form  min ½ zᵀHz + gᵀz  s.t.  lower ≤ A z ≤ upper.
 *
 * H must be symmetric positive definite. One-sided rows use ±inf bounds.
 */
struct QpProblem {
  MatX H;
  VecX g;
  MatX A;
  VecX lower;
  VecX upper;

  int dim() const { return static_cast<int>(H.rows()); }
  int rows() const { return static_cast<int>(A.rows()); }

  void validate() const {
    if (H.rows() != H.cols() || g.size() != H.rows())
      throw Error("qp: inconsistent H/g dimensions");
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw Error("qp: H is not symmetric");
    if (A.rows() != lower.size() || A.rows() != upper.size() ||
        (A.rows() > 0 && A.cols() != H.rows()))
      throw Error("qp: inconsistent constraint dimensions");
    for (int i = 0; i < rows(); ++i)
      if (!(lower[i] <= upper[i])) throw Error("qp: lower > upper in row " + std::to_string(i));
  }
};

/// Operator-splitting solver settings. The defaults are the residual-tolerance
/// regime (max_iter 500, eps 1e-5); batch() is the fixed-budget regime used
/// for parallel candidate evaluation (max_iter 50).
struct QpSettings {
  int max_iter = 500;
  double rho = 50.0;    ///< penalty
  double sigma = 1e-6;  ///< Tikhonov regularization
  double eps_abs = 1e-5;
  double eps_rel = 1e-5;
  bool warm_start = true;

  static QpSettings accurate() { return {}; }
  static QpSettings batch() {
    QpSettings s;
    s.max_iter = 50;
    return s;
  }
};

enum class QpStatus { solved, max_iter_reached, infeasible };

struct QpSolution {
  VecX z;
  QpStatus status = QpStatus::max_iter_reached;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  VecX dual;   ///< constraint multipliers, kept for warm starts
  VecX slack;  ///< projected A z, kept for warm starts
};

namespace detail {

// Unscaled two-block ADMM with slack splitting and projection onto
// [lower, upper]; the (H + sigma I + rho AᵀA) factorization may be shared
// across problems that differ only in g.
inline QpSolution admm_solve(const QpProblem& p, const QpSettings& s,
                             const QpSolution* warm, const Eigen::LDLT<MatX>* cached) {
  const int m = p.dim();
  const int k = p.rows();

  QpSolution out;
  if (k == 0) {
    Eigen::LDLT<MatX> ldlt(p.H);
    out.z = ldlt.solve(-p.g);
    out.status = QpStatus::solved;
    out.dual_residual = (p.H * out.z + p.g).cwiseAbs().maxCoeff();
    out.dual = VecX();
    out.slack = VecX();
    return out;
  }

  Eigen::LDLT<MatX> local;
  const Eigen::LDLT<MatX>* kkt = cached;
  if (!kkt) {
    local.compute(p.H + s.sigma * MatX::Identity(m, m) + s.rho * (p.A.transpose() * p.A));
    kkt = &local;
  }

  VecX z = VecX::Zero(m);
  VecX y = VecX::Zero(k);
  VecX w(k);
  for (int i = 0; i < k; ++i) w[i] = std::clamp(0.0, p.lower[i], p.upper[i]);
  if (s.warm_start && warm && warm->z.size() == m && warm->dual.size() == k &&
      warm->slack.size() == k) {
    z = warm->z;
    y = warm->dual;
    w = warm->slack;
  }

  VecX rhs(m), az(k);
  double prev_primal = kInf;
  int stall = 0;

  for (int it = 1; it <= s.max_iter; ++it) {
    rhs.noalias() = s.sigma * z - p.g;
    rhs.noalias() += p.A.transpose() * (s.rho * w - y);
    z = kkt->solve(rhs);
    az.noalias() = p.A * z;
    w = (az + y / s.rho).cwiseMax(p.lower).cwiseMin(p.upper);
    y.noalias() += s.rho * (az - w);

    const double r_prim = (az - w).cwiseAbs().maxCoeff();
    const double r_dual =
        (p.H * z + p.g + p.A.transpose() * y).cwiseAbs().maxCoeff();
    out.iterations = it;
    out.primal_residual = r_prim;
    out.dual_residual = r_dual;

    const double scale_prim = std::max(az.cwiseAbs().maxCoeff(), w.cwiseAbs().maxCoeff());
    const double scale_dual = std::max({(p.H * z).cwiseAbs().maxCoeff(),
                                        p.g.cwiseAbs().maxCoeff(),
                                        (p.A.transpose() * y).cwiseAbs().maxCoeff()});
    if (r_prim <= s.eps_abs + s.eps_rel * scale_prim &&
        r_dual <= s.eps_abs + s.eps_rel * scale_dual) {
      out.status = QpStatus::solved;
      break;
    }

    // Divergence heuristic: primal residual refuses to shrink well above tolerance.
    if (r_prim >= prev_primal - 1e-16 && r_prim > 1e2 * s.eps_abs) {
      if (++stall >= 20) {
        out.status = QpStatus::infeasible;
        break;
      }
    } else {
      stall = 0;
    }
    prev_primal = r_prim;
    out.status = QpStatus::max_iter_reached;
  }

  out.z = z;
  out.dual = y;
  out.slack = w;
  return out;
}

}  // namespace detail

/// Solves one QP; an optional previous solution warm-starts the iteration.
inline QpSolution solve(const QpProblem& problem, const QpSettings& settings,
                        const QpSolution* warm = nullptr) {
  problem.validate();
  return detail::admm_solve(problem, settings, warm, nullptr);
}

/**
 * @brief Solves a family of QPs sharing dimensions.
 *
 * Results are elementwise identical to calling solve() per problem, in order.
 * When every problem shares the same H and A (the continuation case, where
 * only g varies), the factorization is computed once. Evaluation may use
 * several threads; the output does not depend on the schedule.
 */
inline std::vector<QpSolution> solve_batch(const std::vector<QpProblem>& problems,
                                           const QpSettings& settings,
                                           const std::vector<QpSolution>* warms = nullptr) {
  std::vector<QpSolution> results(problems.size());
  if (problems.empty()) return results;
  const int m = problems[0].dim();
  const int k = problems[0].rows();
  for (const QpProblem& p : problems) {
    p.validate();
    if (p.dim() != m || p.rows() != k) throw Error("solve_batch: heterogeneous dimensions");
  }
  if (warms && warms->size() != problems.size())
    throw Error("solve_batch: warm-start count mismatch");

  bool shared = k > 0;
  for (size_t i = 1; shared && i < problems.size(); ++i)
    shared = (problems[i].H.array() == problems[0].H.array()).all() &&
             (problems[i].A.array() == problems[0].A.array()).all();

  Eigen::LDLT<MatX> cached;
  if (shared)
    cached.compute(problems[0].H + settings.sigma * MatX::Identity(m, m) +
                   settings.rho * (problems[0].A.transpose() * problems[0].A));

  const auto run = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      results[i] = detail::admm_solve(problems[i], settings,
                                      warms ? &(*warms)[i] : nullptr,
                                      shared ? &cached : nullptr);
  };

  const size_t n_threads =
      std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (problems.size() < 16 || n_threads < 2) {
    run(0, problems.size());
    return results;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (problems.size() + n_threads - 1) / n_threads;
  for (size_t t = 0; t < n_threads; ++t) {
    const size_t begin = t * chunk;
    const size_t end = std::min(problems.size(), begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return results;
}

/// Worst violation of the problem's constraints at z (0 when all satisfied).
inline double constraint_violation(const QpProblem& problem, const VecX& z) {
  if (problem.rows() == 0) return 0.0;
  const VecX az = problem.A * z;
  double v = 0.0;
  for (int i = 0; i < problem.rows(); ++i)
    v = std::max({v, problem.lower[i] - az[i], az[i] - problem.upper[i]});
  return v;
}

}  // namespace pdik

#endif  // PDIK_QP_HPP_
