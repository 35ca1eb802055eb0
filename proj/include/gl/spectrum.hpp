#pragma once

#include "gl/energy.hpp"

#include <vector>

namespace gl {

struct SpectrumReport {
  double kappa = 0.0;
  Eigen::VectorXd l2_eigs;   // pencil (E''(u), mass), ascending
  Eigen::VectorXd h1k_eigs;  // pencil (E''(u), H1_kappa Gram), ascending
  double rho_inv = 0.0;      // coercivity constant: smallest non-gauge h1k eigenvalue
  double zero_mode_overlap = 0.0;  // |(v_1, i u)_L2| / (|v_1| |u|)
  bool l2_converged = false;
  bool h1k_converged = false;
};

/// Smallest-eigenvalue diagnostics of E''(u) at a converged minimizer.
/// k counts reported eigenvalues per pencil (default 6: five plus a guard).
SpectrumReport spectrum_at(const EnergyContext& ctx, const ComplexField& u, int k = 6,
                           double tol = 1e-8);

/// Least-squares exponent alpha of rho(kappa) ~ kappa^alpha from reports
/// with distinct kappa values.
double coercivity_trend(const std::vector<std::pair<double, double>>& kappa_rho_inv);
double coercivity_trend(const std::vector<SpectrumReport>& reports);

}  // namespace gl
