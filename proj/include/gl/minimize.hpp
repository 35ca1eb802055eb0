#pragma once

#include "gl/energy.hpp"
#include "gl/lodspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gl {

enum class SpaceKind { fine_fem, coarse_fem, lod };

struct LineSearchParams {
  double initial_step = 1.0;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
};

struct MinimizeConfig {
  SpaceKind space = SpaceKind::fine_fem;
  double kappa = 8.0;
  double beta = 0.0;
  int ell = 4;
  int coarse_k = 3;
  int fine_k = 7;
  double delta = 1e-10;  // energy-difference stopping tolerance
  long max_iters = 200000;
  std::uint64_t seed = 1;
  LineSearchParams step;
};

enum class StopReason { tolerance, max_iters };

struct MinimizeResult {
  ComplexField u;       // active-space coefficients
  ComplexField u_fine;  // fine-mesh representation
  double energy = 0.0;
  long iters = 0;
  std::vector<double> energy_trace;  // strictly nonincreasing
  StopReason stop_reason = StopReason::tolerance;
  double residual = 0.0;  // final dual norm of E'
};

/// Deterministic seeded initial state: a 64-bit linear congruential
/// generator (Knuth constants) mapped to [-1,1) per component, with the
/// nodal modulus clamped to 1.
ComplexField initial_guess(const std::string& space_id, Eigen::Index n, std::uint64_t seed);

/// Preconditioned (Sobolev) gradient descent with backtracking line search:
/// v <- v - tau G^-1 E'(v), G the active-space H1_kappa Gram. Stops when the
/// energy difference of consecutive accepted iterates drops below delta.
/// Minimizes the energy in the space of ctx. If start is non-null it is used
/// as the initial iterate (its space id must match the minimization space);
/// otherwise the deterministic pseudo-random guess for cfg.seed is used.
MinimizeResult minimize(const EnergyContext& ctx, const MinimizeConfig& cfg,
                        const ComplexField* start = nullptr);

/// Multiplies u by alpha/|alpha| with alpha the complex L2 overlap of the
/// reference with u, so that Im(ref, u) = 0 and Re(ref, u) >= 0.
ComplexField align_phase(const ComplexField& u, const ComplexField& reference,
                         const FormOperator& mass);

/// Complex L2 inner product integral of a * conj(b) under the given mass.
std::pair<double, double> complex_l2_inner(const ComplexField& a, const ComplexField& b,
                                           const FormOperator& mass);

/// Fully assembled problem for one configuration (hierarchy, context in the
/// requested space, optional LOD space).
struct ProblemSetup {
  std::shared_ptr<const MeshHierarchy> mh;
  MagneticPotential A;
  EnergyContext ctx;
  std::optional<LodSpace> lod;
};

ProblemSetup setup_problem(const MinimizeConfig& cfg, const MagneticPotential& A);
ProblemSetup setup_problem(const MinimizeConfig& cfg);

/// Convenience driver: setup + minimize.
MinimizeResult run_minimize(const MinimizeConfig& cfg);

}  // namespace gl
