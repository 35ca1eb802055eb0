#pragma once

#include "gl/lodspace.hpp"
#include "gl/operators.hpp"

#include <string>
#include <vector>

namespace gl {

struct ErrorRecord {
  double kappa = 0, beta = 0;
  int ell = 0;
  double coarse_h = 0, fine_h = 0;
  double err_h1k = 0, err_l2 = 0, err_best = 0;
  double energy = 0, energy_ref = 0;
  long iters = 0;
  std::string space;
};

/// H1_kappa norm of the difference of two (phase-aligned) fine fields.
double error_h1k(const ComplexField& u, const ComplexField& ref, const FormOperator& gram);

/// Coefficients of the H1_kappa-orthogonal projection of ref onto the span
/// of the corrected basis (and its i-rotations).
ComplexField best_approximation(const LodSpace& space, const ComplexField& ref,
                                const FormOperator& gram);

/// Residual of the H1_kappa-orthogonal projection of ref onto the span of
/// the corrected basis (and its i-rotations).
double best_approximation_error(const LodSpace& space, const ComplexField& ref,
                                const FormOperator& gram);

/// Least-squares slope of log err vs log h.
double fit_rate(const std::vector<std::pair<double, double>>& h_err);

/// Decay rate r in err ~ C exp(-r ell): negated slope of log err vs ell.
double fit_decay(const std::vector<std::pair<double, double>>& ell_err);

}  // namespace gl
