#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>

#include "gl/field.hpp"

namespace gl {

using SpMat = Eigen::SparseMatrix<double>;

enum class FormKind { mass, stiffness, a_beta, h1k_gram, hessian, coarse_fine_mass, generic };

/// Sparse real 2x2-block matrix acting on split (re, im) coefficients:
///   [yr; yi] = [[rr, ri], [ir, ii]] [xr; xi].
/// Complex-sesquilinear forms have rr = ii = S, ri = -K, ir = K with S
/// symmetric and K skew; the Hessian additionally carries symmetric
/// re/im coupling and uses the general layout.
struct FormOperator {
  FormKind kind = FormKind::generic;
  SpMat rr, ri, ir, ii;
  double kappa = 0.0, beta = 0.0;

  Eigen::Index rows() const { return rr.rows(); }
  Eigen::Index cols() const { return rr.cols(); }

  void apply(const Eigen::VectorXd& xr, const Eigen::VectorXd& xi, Eigen::VectorXd& yr,
             Eigen::VectorXd& yi) const {
    yr = rr * xr + ri * xi;
    yi = ir * xr + ii * xi;
  }

  ComplexField apply(const ComplexField& x) const {
    ComplexField y;
    y.space_id = x.space_id;
    apply(x.re, x.im, y.re, y.im);
    return y;
  }

  /// Real bilinear form b(v, w) = [vr; vi]^T M [wr; wi].
  double form(const ComplexField& v, const ComplexField& w) const {
    const ComplexField mw = apply(w);
    return v.re.dot(mw.re) + v.im.dot(mw.im);
  }

  /// Full 2N x 2N real matrix (re block first).
  SpMat full_matrix() const;
};

FormOperator make_sk_operator(FormKind kind, SpMat S, SpMat K);
FormOperator make_diag_operator(FormKind kind, SpMat S);

/// Real-valued magnetic vector potential A with div A = 0, A.n = 0.
struct MagneticPotential {
  std::function<Eigen::Vector2d(double, double)> eval;
  double sup_norm = 0.0;
};

/// A(x,y) = sqrt(2) (sin(pi x) cos(pi y), -cos(pi x) sin(pi y)).
MagneticPotential default_potential();
MagneticPotential zero_potential();

/// Complex-linear map from active-space coefficients to fine-space
/// coefficients: fine = (Mre + i Mim) * (c_re + i c_im). Identity when
/// both blocks are empty; real maps (prolongation) have Mim = 0.
struct SpaceMap {
  SpMat mre, mim;
  std::string from_id, to_id;

  bool is_identity() const { return mre.size() == 0; }
  bool has_im() const { return mim.size() != 0; }
  Eigen::Index fine_dim() const { return mre.rows(); }
  Eigen::Index active_dim() const { return mre.cols(); }

  ComplexField to_fine(const ComplexField& c) const {
    if (is_identity()) return c;
    ComplexField f(to_id, mre.rows());
    if (has_im()) {
      f.re = mre * c.re - mim * c.im;
      f.im = mim * c.re + mre * c.im;
    } else {
      f.re = mre * c.re;
      f.im = mre * c.im;
    }
    return f;
  }

  /// Real transpose applied to a fine load vector.
  ComplexField pullback(const ComplexField& g) const {
    if (is_identity()) return g;
    ComplexField a(from_id, mre.cols());
    if (has_im()) {
      a.re = mre.transpose() * g.re + mim.transpose() * g.im;
      a.im = -(mim.transpose() * g.re) + mre.transpose() * g.im;
    } else {
      a.re = mre.transpose() * g.re;
      a.im = mre.transpose() * g.im;
    }
    return a;
  }
};

SpaceMap identity_map(std::string space_id);

/// Galerkin restriction M^T F M of a fine operator to the mapped space.
FormOperator restrict_operator(const SpaceMap& map, const FormOperator& fine_op);

}  // namespace gl
