#ifndef PDIK_QP_REFERENCE_HPP_
#define PDIK_QP_REFERENCE_HPP_

#include <Eigen/Dense>
#include <Eigen/LU>

#include <vector>

#include "pdik/qp.hpp"

namespace pdik {

/**
 * @brief Exact KKT solution by active-set enumeration.
 *
 * Enumerates candidate active sets in order of increasing cardinality, solves
 * the equality-constrained KKT system for each, and returns the first point
 * that is primal and dual feasible. For a strictly convex QP that point is
 * the unique global minimizer. Intended as a test oracle; limited to
 * dim <= 16 and 20 constraint rows.
 */
inline QpSolution reference_solve(const QpProblem& problem) {
  problem.validate();
  const int m = problem.dim();
  const int k = problem.rows();
  if (m > 16 || k > 20) throw Error("reference_solve: size exceeded (m <= 16, k <= 20)");

  constexpr double kTol = 1e-8;
  QpSolution out;
  out.status = QpStatus::infeasible;
  out.z = VecX::Zero(m);
  out.dual = VecX::Zero(k);
  out.slack = VecX::Zero(k);
  int tried = 0;

  // Sides a row can be active on: 0 = lower, 1 = upper, 2 = pinned (l == u).
  std::vector<std::vector<int>> sides(k);
  for (int i = 0; i < k; ++i) {
    if (problem.lower[i] == problem.upper[i]) {
      sides[i] = {2};
    } else {
      if (problem.lower[i] > -kInf) sides[i].push_back(0);
      if (problem.upper[i] < kInf) sides[i].push_back(1);
    }
  }

  const auto feasible = [&](const VecX& z) {
    const VecX az = problem.A * z;
    for (int i = 0; i < k; ++i)
      if (az[i] < problem.lower[i] - kTol || az[i] > problem.upper[i] + kTol) return false;
    return true;
  };

  // Tests one (subset, side assignment); fills `out` and returns true on a
  // KKT-consistent point.
  const auto try_active_set = [&](const std::vector<int>& subset,
                                  const std::vector<int>& side) {
    const int s = static_cast<int>(subset.size());
    ++tried;
    MatX kkt = MatX::Zero(m + s, m + s);
    VecX rhs(m + s);
    kkt.topLeftCorner(m, m) = problem.H;
    rhs.head(m) = -problem.g;
    for (int r = 0; r < s; ++r) {
      const int row = subset[r];
      kkt.block(m + r, 0, 1, m) = problem.A.row(row);
      kkt.block(0, m + r, m, 1) = problem.A.row(row).transpose();
      rhs[m + r] = side[r] == 0 ? problem.lower[row] : problem.upper[row];
    }
    Eigen::FullPivLU<MatX> lu(kkt);
    if (!lu.isInvertible()) return false;
    const VecX sol = lu.solve(rhs);
    const VecX z = sol.head(m);
    for (int r = 0; r < s; ++r) {
      const double nu = sol[m + r];
      if (side[r] == 0 && nu > kTol) return false;   // lower-active needs nu <= 0
      if (side[r] == 1 && nu < -kTol) return false;  // upper-active needs nu >= 0
    }
    if (!feasible(z)) return false;
    out.z = z;
    out.dual = VecX::Zero(k);
    for (int r = 0; r < s; ++r) out.dual[subset[r]] = sol[m + r];
    out.slack = (problem.A * z).cwiseMax(problem.lower).cwiseMin(problem.upper);
    out.status = QpStatus::solved;
    return true;
  };

  const int max_card = std::min(m, k);
  for (int card = 0; card <= max_card; ++card) {
    // Lexicographic combinations of `card` rows out of k.
    std::vector<int> subset(card);
    for (int i = 0; i < card; ++i) subset[i] = i;
    while (true) {
      // Product of admissible sides over the chosen rows.
      std::vector<int> choice(card, 0);
      bool sides_ok = true;
      for (int i = 0; i < card; ++i)
        if (sides[subset[i]].empty()) sides_ok = false;
      if (sides_ok) {
        while (true) {
          std::vector<int> side(card);
          for (int i = 0; i < card; ++i) side[i] = sides[subset[i]][choice[i]];
          if (try_active_set(subset, side)) {
            out.iterations = tried;
            return out;
          }
          int pos = card - 1;
          while (pos >= 0 &&
                 choice[pos] + 1 >= static_cast<int>(sides[subset[pos]].size())) {
            choice[pos] = 0;
            --pos;
          }
          if (pos < 0) break;
          ++choice[pos];
        }
      }
      if (card == 0) break;
      int pos = card - 1;
      while (pos >= 0 && subset[pos] == k - card + pos) --pos;
      if (pos < 0) break;
      ++subset[pos];
      for (int i = pos + 1; i < card; ++i) subset[i] = subset[i - 1] + 1;
    }
  }
  out.iterations = tried;
  return out;  // no KKT-consistent active set: infeasible
}

}  // namespace pdik

#endif  // PDIK_QP_REFERENCE_HPP_
