#pragma once

#include "gl/operators.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <memory>
#include <string>
#include <vector>

namespace gl {

/// Diagonally preconditioned CG on a block operator. Throws with the
/// attained residual on breakdown/non-convergence.
Eigen::VectorXd solve_spd(const FormOperator& op, const Eigen::VectorXd& rhs,
                          double tol = 1e-11, int max_iters = -1);

Eigen::VectorXd pcg(const SpMat& A, const Eigen::VectorXd& b, double tol = 1e-11,
                    int max_iters = -1);

/// Cached direct factorization of an SPD block operator (reused across
/// many solves inside iterative drivers).
class SpdFactor {
 public:
  explicit SpdFactor(const FormOperator& op);
  explicit SpdFactor(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  ComplexField solve(const ComplexField& rhs) const;

 private:
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  Eigen::Index n_ = 0;
};

/// Patch saddle-point system: A symmetric (patch-restricted a_beta blocks),
/// C the coarse-hat L2 constraint rows, one or more loads.
struct SaddleSystem {
  SpMat A;
  SpMat C;  // full row rank after pre-filtering
  std::vector<Eigen::VectorXd> rhs;
  std::string label;  // named in error messages
  // Set when the primal unknowns are stacked (re; im) halves, A commutes with
  // the quarter-turn rotation (re, im) -> (-im, re), and constraint rows come
  // in adjacent pairs: row 2k tests the real half, row 2k+1 the imaginary
  // half, with identical coefficients. The solver then computes only the even
  // columns of A^-1 C^T and derives the odd ones by rotation.
  bool complex_pairs = false;
};

/// Primal parts of the KKT solutions; enforces constraint residual <= 1e-10
/// and stationarity residual <= 1e-9.
std::vector<Eigen::VectorXd> solve_saddle(const SaddleSystem& sys);

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // G-orthonormal columns
  bool converged = false;
  int iterations = 0;
};

/// k algebraically smallest eigenpairs of the pencil (H, G) by block inverse
/// iteration with G-orthonormalization and Rayleigh-Ritz. Shift 0; falls back
/// to -1e-8 if H is (near-)singular.
EigResult eig_smallest(const FormOperator& Hop, const FormOperator& Gop, int k, double tol);

}  // namespace gl
