#include <doctest.h>

#include <cmath>

#include "rydmf/meanfield.hpp"
#include "rydmf/obe.hpp"
#include "rydmf/presets.hpp"

using namespace rydmf;

namespace {

SchemeParams cs_resonant() {
  SchemeParams p = presets::cesium_eit();
  p.delta1 = mhz_to_angular(4.0);
  return p;
}

Cloud random_cloud(std::size_t n, double radius, double c6_mhz, std::uint64_t seed) {
  CloudGeometry g;
  g.n_atoms = n;
  g.radius = radius;
  g.r_min = 1.0;
  g.seed = seed;
  return Cloud::sample(g, mhz_to_angular(c6_mhz));
}

}  // namespace

TEST_CASE("shift sums") {
  Eigen::MatrixXd v(2, 2);
  v << 0, 3, 3, 0;
  const std::vector<double> zero = {0, 0};
  CHECK(compute_shifts(v, zero) == std::vector<double>{0, 0});
  const std::vector<double> one = {0, 1};
  CHECK(compute_shifts(v, one) == std::vector<double>{3, 0});

  const Cloud cloud = random_cloud(12, 6.0, 500.0, 4);
  const std::vector<double> c(12, 0.2);
  const auto s = compute_shifts(cloud.potentials, c);
  for (Eigen::Index i = 0; i < 12; ++i) {
    CHECK(s[i] == doctest::Approx(0.2 * cloud.potentials.row(i).sum()));
    CHECK(s[i] >= 0.0);
  }
}

TEST_CASE("decoupled atoms converge on iteration 2") {
  const Cloud cloud = random_cloud(10, 6.0, 0.0, 1);
  const SchemeParams p = cs_resonant();
  const MeanFieldResult r = self_consistent_solve(p, cloud, SolverConfig{});
  CHECK(r.state.converged);
  CHECK(r.state.iteration == 2);
  CHECK(r.state.residual < 1e-6);
  const DensityMatrix single = steady_state(p, 0.0);
  for (const auto& a : r.atoms) CHECK((a.matrix() - single.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a single atom ignores C6") {
  const Cloud cloud = Cloud::from_positions({Vec3{0, 0, 0}}, mhz_to_angular(1e6));
  const SchemeParams p = cs_resonant();
  const MeanFieldResult r = self_consistent_solve(p, cloud, SolverConfig{});
  CHECK(r.state.converged);
  CHECK((r.atoms[0].matrix() - steady_state(p, 0.0).matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetric pair matches a scalar bisection root") {
  const SchemeParams p = cs_resonant();
  for (double v_over_omega3 : {0.3, 1.0, 3.0}) {
    const double v12 = v_over_omega3 * p.omega3;
    const auto g = [&](double x) { return steady_state(p, v12 * x).population(4) - x; };
    double lo = 0.0, hi = 1.0;
    REQUIRE(g(lo) > 0.0);
    REQUIRE(g(hi) < 0.0);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);

    SolverConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 5000;
    const Cloud pair = Cloud::from_positions({Vec3{0, 0, 0}, Vec3{1, 0, 0}}, v12);
    const MeanFieldResult r = self_consistent_solve(p, pair, cfg);
    REQUIRE(r.state.converged);
    CHECK(std::abs(r.atoms[0].population(4) - root) <= 1e-6);
    CHECK(std::abs(r.atoms[1].population(4) - root) <= 1e-6);
  }
}

TEST_CASE("state invariants and self-consistency") {
  const Cloud cloud = random_cloud(15, 5.0, 2e4, 8);
  const SchemeParams p = cs_resonant();
  SolverConfig cfg;
  const MeanFieldResult r = self_consistent_solve(p, cloud, cfg);
  REQUIRE(r.state.converged);
  const auto shifts = compute_shifts(cloud.potentials, r.state.rho44);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(r.state.shifts[i] == shifts[i]);
    CHECK(r.state.rho44[i] >= -1e-9);
    CHECK(r.state.rho44[i] <= 1 + 1e-9);
  }
  // One more undamped sweep from the returned populations barely moves them.
  std::vector<double> rho44;
  for (const auto& a : r.atoms) rho44.push_back(a.population(4));
  const auto s2 = compute_shifts(cloud.potentials, rho44);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(std::abs(steady_state(p, s2[i]).population(4) - rho44[i]) < cfg.tolerance / cfg.damping);
  }
  CHECK(r.state.residual_history.size() == static_cast<std::size_t>(r.state.iteration - 1));
}

TEST_CASE("damping does not change the fixed point") {
  // Weak enough coupling for the undamped iteration to contract.
  const Cloud cloud = random_cloud(15, 5.0, 2.0, 21);
  const SchemeParams p = cs_resonant();
  SolverConfig a, b;
  a.damping = 0.3;
  b.damping = 1.0;
  a.max_iterations = b.max_iterations = 5000;
  const auto ra = self_consistent_solve(p, cloud, a);
  const auto rb = self_consistent_solve(p, cloud, b);
  REQUIRE(ra.state.converged);
  REQUIRE(rb.state.converged);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((ra.atoms[i].matrix() - rb.atoms[i].matrix()).cwiseAbs().maxCoeff() <= 10 * a.tolerance);
  }
}

TEST_CASE("initial guesses reach the same fixed point") {
  const Cloud cloud = random_cloud(8, 4.0, 1e4, 3);
  const SchemeParams p = cs_resonant();
  SolverConfig base;
  base.tolerance = 1e-10;
  base.max_iterations = 5000;
  SolverConfig zeros = base;
  zeros.initial_guess = InitialGuess::zeros;
  SolverConfig given = base;
  given.initial_guess = InitialGuess::provided;
  given.provided.assign(8, 0.003);
  const auto r0 = self_consistent_solve(p, cloud, base);
  const auto r1 = self_consistent_solve(p, cloud, zeros);
  const auto r2 = self_consistent_solve(p, cloud, given);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(r1.state.rho44[i] == doctest::Approx(r0.state.rho44[i]).epsilon(1e-6));
    CHECK(r2.state.rho44[i] == doctest::Approx(r0.state.rho44[i]).epsilon(1e-6));
  }
  given.provided.assign(3, 0.0);
  CHECK_THROWS_AS(self_consistent_solve(p, cloud, given), ConfigError);
}

TEST_CASE("relabeling atoms permutes the result") {
  const Cloud cloud = random_cloud(9, 4.0, 1e4, 12);
  std::vector<Vec3> reversed(cloud.positions.rbegin(), cloud.positions.rend());
  const Cloud flipped = Cloud::from_positions(reversed, mhz_to_angular(1e4));
  const SchemeParams p = cs_resonant();
  const auto a = self_consistent_solve(p, cloud, SolverConfig{});
  const auto b = self_consistent_solve(p, flipped, SolverConfig{});
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(a.state.rho44[i] == doctest::Approx(b.state.rho44[8 - i]).epsilon(1e-12));
  }
}

TEST_CASE("non-convergence is reported, not thrown") {
  const Cloud cloud = random_cloud(10, 3.0, 1e5, 2);
  SolverConfig cfg;
  cfg.max_iterations = 3;
  const auto r = self_consistent_solve(cs_resonant(), cloud, cfg);
  CHECK_FALSE(r.state.converged);
  CHECK(r.state.iteration == 3);
  CHECK(r.state.residual >= cfg.tolerance);
  CHECK(r.state.residual_history.size() == 2);
}

TEST_CASE("solver configuration and inner failures") {
  SolverConfig bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.damping = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.damping = 0.5;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  SchemeParams p = cs_resonant();
  p.omega3 = 0.0;
  const Cloud cloud = random_cloud(3, 3.0, 1.0, 1);
  try {
    self_consistent_solve(p, cloud, SolverConfig{});
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("atom 0") != std::string::npos);
  }
}
