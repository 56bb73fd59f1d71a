#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pdik/qp.hpp"
#include "pdik/qp_reference.hpp"

namespace {

pdik::QpProblem random_spd_problem(std::mt19937_64& rng, int m, int k) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> gap(0.05, 0.8);
  pdik::MatX mat(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) mat(r, c) = gauss(rng);
  pdik::QpProblem p;
  p.H = mat.transpose() * mat + pdik::MatX::Identity(m, m);
  p.H = 0.5 * (p.H + p.H.transpose());
  p.g.resize(m);
  for (int r = 0; r < m; ++r) p.g[r] = 2.0 * gauss(rng);
  p.A.resize(k, m);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < m; ++c) p.A(r, c) = gauss(rng);
  pdik::VecX z0(m);
  for (int r = 0; r < m; ++r) z0[r] = 0.5 * gauss(rng);
  const pdik::VecX az = p.A * z0;
  p.lower.resize(k);
  p.upper.resize(k);
  std::uniform_real_distribution<double> side(0.0, 1.0);
  for (int r = 0; r < k; ++r) {
    p.lower[r] = az[r] - gap(rng);
    p.upper[r] = az[r] + gap(rng);
    if (side(rng) < 0.15) p.lower[r] = -pdik::kInf;
    if (side(rng) < 0.15) p.upper[r] = pdik::kInf;
  }
  return p;
}

}  // namespace

TEST_CASE("clipped scalar optimum") {
  pdik::QpProblem p;
  p.H = pdik::MatX::Constant(1, 1, 1.0);
  p.g = pdik::VecX::Constant(1, -1.0);
  p.A = pdik::MatX::Constant(1, 1, 1.0);
  p.lower = pdik::VecX::Constant(1, 0.0);
  p.upper = pdik::VecX::Constant(1, 0.5);

  const pdik::QpSolution sol = pdik::solve(p, pdik::QpSettings::accurate());
  REQUIRE(sol.status == pdik::QpStatus::solved);
  REQUIRE(sol.z[0] == Catch::Approx(0.5).margin(1e-6));

  const pdik::QpSolution ref = pdik::reference_solve(p);
  REQUIRE(ref.status == pdik::QpStatus::solved);
  REQUIRE(ref.z[0] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("unconstrained identity cost sits at the origin") {
  pdik::QpProblem p;
  p.H = pdik::MatX::Identity(3, 3);
  p.g = pdik::VecX::Zero(3);
  p.A.resize(0, 3);
  p.lower.resize(0);
  p.upper.resize(0);
  const pdik::QpSolution sol = pdik::solve(p, pdik::QpSettings::accurate());
  REQUIRE(sol.status == pdik::QpStatus::solved);
  REQUIRE(sol.z.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random problems match the active-set enumeration oracle") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> m_dist(2, 10), k_dist(1, 12);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const pdik::QpProblem p = random_spd_problem(rng, m_dist(rng), k_dist(rng));
    const pdik::QpSolution ref = pdik::reference_solve(p);
    REQUIRE(ref.status == pdik::QpStatus::solved);  // feasible at z0 per construction
    const pdik::QpSolution sol = pdik::solve(p, pdik::QpSettings::accurate());
    REQUIRE(sol.status == pdik::QpStatus::solved);
    REQUIRE((sol.z - ref.z).cwiseAbs().maxCoeff() <= 1e-4);
    REQUIRE(pdik::constraint_violation(p, sol.z) <= 1e-6);
    ++solved;
  }
  REQUIRE(solved == 120);
}

TEST_CASE("warm starts rarely iterate longer than cold starts") {
  std::mt19937_64 rng(202);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int wins = 0, total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    pdik::QpProblem p = random_spd_problem(rng, 6, 8);
    const pdik::QpSolution cold = pdik::solve(p, pdik::QpSettings::accurate());
    if (cold.status != pdik::QpStatus::solved) continue;
    pdik::QpProblem perturbed = p;
    for (int i = 0; i < perturbed.g.size(); ++i) perturbed.g[i] += 1e-3 * gauss(rng) / 3.0;
    const pdik::QpSolution warm = pdik::solve(perturbed, pdik::QpSettings::accurate(), &cold);
    const pdik::QpSolution fresh = pdik::solve(perturbed, pdik::QpSettings::accurate());
    ++total;
    wins += warm.iterations <= fresh.iterations;
  }
  REQUIRE(total >= 50);
  REQUIRE(static_cast<double>(wins) / total >= 0.9);
}

TEST_CASE("batch results are identical to one-by-one solves") {
  std::mt19937_64 rng(303);

  SECTION("batch of one") {
    const pdik::QpProblem p = random_spd_problem(rng, 5, 6);
    const auto batch = pdik::solve_batch({p}, pdik::QpSettings::batch());
    const auto single = pdik::solve(p, pdik::QpSettings::batch());
    REQUIRE(batch.size() == 1);
    REQUIRE(batch[0].iterations == single.iterations);
    REQUIRE(batch[0].z == single.z);
  }
  SECTION("replicated problem yields identical solutions") {
    const pdik::QpProblem p = random_spd_problem(rng, 5, 6);
    const std::vector<pdik::QpProblem> problems(32, p);
    const auto batch = pdik::solve_batch(problems, pdik::QpSettings::batch());
    for (const auto& sol : batch) {
      REQUIRE(sol.z == batch[0].z);
      REQUIRE(sol.iterations == batch[0].iterations);
    }
  }
  SECTION("256 random problems match individual solves") {
    std::vector<pdik::QpProblem> problems;
    for (int i = 0; i < 256; ++i) problems.push_back(random_spd_problem(rng, 6, 8));
    const auto batch = pdik::solve_batch(problems, pdik::QpSettings::batch());
    for (int i = 0; i < 256; ++i) {
      const auto single = pdik::solve(problems[i], pdik::QpSettings::batch());
      REQUIRE(batch[i].iterations == single.iterations);
      REQUIRE((batch[i].z - single.z).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SECTION("heterogeneous dimensions are rejected") {
    std::vector<pdik::QpProblem> problems = {random_spd_problem(rng, 5, 6),
                                             random_spd_problem(rng, 6, 6)};
    REQUIRE_THROWS_AS(pdik::solve_batch(problems, pdik::QpSettings::batch()), pdik::Error);
  }
}

TEST_CASE("infeasible rows are flagged by the divergence heuristic") {
  pdik::QpProblem p;
  p.H = pdik::MatX::Identity(1, 1);
  p.g = pdik::VecX::Zero(1);
  p.A.resize(2, 1);
  p.A << 1.0, 1.0;
  p.lower.resize(2);
  p.upper.resize(2);
  p.lower << 1.0, -pdik::kInf;
  p.upper << pdik::kInf, -1.0;

  const pdik::QpSolution sol = pdik::solve(p, pdik::QpSettings::accurate());
  REQUIRE(sol.status == pdik::QpStatus::infeasible);
  REQUIRE(pdik::reference_solve(p).status == pdik::QpStatus::infeasible);
}

TEST_CASE("problem validation") {
  pdik::QpProblem p;
  p.H = pdik::MatX::Identity(2, 2);
  p.H(0, 1) = 0.5;  // asymmetric
  p.g = pdik::VecX::Zero(2);
  p.A.resize(0, 2);
  p.lower.resize(0);
  p.upper.resize(0);
  REQUIRE_THROWS_AS(pdik::solve(p, pdik::QpSettings::accurate()), pdik::Error);
  p.H(0, 1) = 0.0;
  p.A = pdik::MatX::Identity(2, 2);
  p.lower = pdik::VecX::Constant(2, 1.0);
  p.upper = pdik::VecX::Constant(2, -1.0);
  REQUIRE_THROWS_AS(pdik::solve(p, pdik::QpSettings::accurate()), pdik::Error);
}

TEST_CASE("reference solver rejects oversized problems") {
  std::mt19937_64 rng(404);
  const pdik::QpProblem p = random_spd_problem(rng, 17, 4);
  REQUIRE_THROWS_AS(pdik::reference_solve(p), pdik::Error);
}
