#include "gl/spectrum.hpp"

#include "gl/minimize.hpp"

#include <doctest.h>

#include <cmath>

using namespace gl;

TEST_CASE("coercivity trend recovers a synthetic power law exactly") {
  // rho(kappa) = kappa^2  =>  rho_inv = kappa^-2, fitted alpha = 2
  std::vector<std::pair<double, double>> pts;
  for (double k : {2.0, 4.0, 8.0, 16.0}) pts.emplace_back(k, 1.0 / (k * k));
  CHECK(coercivity_trend(pts) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("coercivity trend on published reference data lands near 3.7") {
  const std::vector<std::pair<double, double>> pts = {{8.0, 1.7124e-02},
                                                      {12.0, 1.2444e-02},
                                                      {16.0, 1.1930e-03},
                                                      {20.0, 4.0621e-05},
                                                      {32.0, 3.8279e-04}};
  const double alpha = coercivity_trend(pts);
  CHECK(alpha == doctest::Approx(3.713).epsilon(1e-3));
  CHECK(alpha >= 3.0);
  CHECK(alpha <= 5.5);
}

TEST_CASE("coercivity trend rejects degenerate inputs") {
  CHECK_THROWS(coercivity_trend({{8.0, 1e-2}}));
  CHECK_THROWS(coercivity_trend({{8.0, 1e-2}, {8.0, 2e-2}}));
}

TEST_CASE("spectrum at a small converged minimizer exposes the gauge mode") {
  MinimizeConfig cfg;
  cfg.space = SpaceKind::fine_fem;
  cfg.kappa = 4.0;
  cfg.coarse_k = 2;
  cfg.fine_k = 4;
  cfg.delta = 1e-14;
  const ProblemSetup setup = setup_problem(cfg);
  const MinimizeResult res = minimize(setup.ctx, cfg);
  const SpectrumReport rep = spectrum_at(setup.ctx, res.u, 4, 1e-8);
  REQUIRE(rep.l2_converged);
  REQUIRE(rep.h1k_converged);
  CHECK(rep.kappa == 4.0);
  // gauge mode: near-zero first eigenvalue, eigenvector parallel to iu
  CHECK(std::abs(rep.l2_eigs[0]) <= 1e-6 * std::abs(rep.l2_eigs[1]));
  CHECK(rep.zero_mode_overlap >= 0.999);
  // remaining eigenvalues positive at a strict minimizer
  CHECK(rep.l2_eigs[1] > 0.0);
  CHECK(rep.h1k_eigs[1] > 0.0);
  // rho_inv is the smallest non-gauge eigenvalue of the H1k pencil
  CHECK(rep.rho_inv >= rep.h1k_eigs[0] - 1e-14);
  CHECK(rep.rho_inv <= rep.h1k_eigs[1] + 1e-14);
  // eigenvalues ascend
  for (int i = 1; i < rep.l2_eigs.size(); ++i) CHECK(rep.l2_eigs[i] >= rep.l2_eigs[i - 1]);
  for (int i = 1; i < rep.h1k_eigs.size(); ++i) CHECK(rep.h1k_eigs[i] >= rep.h1k_eigs[i - 1]);
}

TEST_CASE("report overload forwards kappa/rho pairs") {
  SpectrumReport a, b;
  a.kappa = 2.0;
  a.rho_inv = 1.0 / 4.0;
  b.kappa = 8.0;
  b.rho_inv = 1.0 / 64.0;
  CHECK(coercivity_trend(std::vector<SpectrumReport>{a, b}) == doctest::Approx(2.0).epsilon(1e-12));
}
