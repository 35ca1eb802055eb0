#include "gl/linsolve.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gl {

namespace {

Eigen::VectorXd block_apply(const FormOperator& op, const Eigen::VectorXd& x) {
  const Eigen::Index n = op.rows();
  Eigen::VectorXd y(2 * n);
  Eigen::VectorXd yr, yi;
  op.apply(x.head(n), x.tail(n), yr, yi);
  y << yr, yi;
  return y;
}

Eigen::VectorXd block_diagonal(const FormOperator& op) {
  const Eigen::Index n = op.rows();
  Eigen::VectorXd d(2 * n);
  d.head(n) = op.rr.diagonal();
  d.tail(n) = op.ii.diagonal();
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    if (d[i] <= 0) d[i] = 1.0;
  return d;
}

}  // namespace

Eigen::VectorXd solve_spd(const FormOperator& op, const Eigen::VectorXd& rhs, double tol,
                          int max_iters) {
  if (rhs.size() != 2 * op.rows()) throw std::invalid_argument("solve_spd: rhs size mismatch");
  const Eigen::Index n = rhs.size();
  if (max_iters < 0) max_iters = static_cast<int>(10 * n) + 100;
  const Eigen::VectorXd dinv = block_diagonal(op).cwiseInverse();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  const double bnorm = rhs.norm();
  if (bnorm == 0) return x;
  Eigen::VectorXd z = dinv.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iters; ++it) {
    if (r.norm() <= tol * bnorm) return x;
    const Eigen::VectorXd Ap = block_apply(op, p);
    const double pAp = p.dot(Ap);
    if (pAp <= 0) break;  // breakdown: operator not SPD along p
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = dinv.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  if (r.norm() <= tol * bnorm) return x;
  std::ostringstream msg;
  msg << "solve_spd: CG did not converge, attained relative residual " << r.norm() / bnorm;
  throw std::runtime_error(msg.str());
}

Eigen::VectorXd pcg(const SpMat& A, const Eigen::VectorXd& b, double tol, int max_iters) {
  FormOperator op;
  op.rr = A;
  op.ii = A;
  op.ri = SpMat(A.rows(), A.cols());
  op.ir = SpMat(A.rows(), A.cols());
  Eigen::VectorXd rhs(2 * A.rows());
  rhs << b, Eigen::VectorXd::Zero(A.rows());
  return solve_spd(op, rhs, tol, max_iters).head(A.rows());
}

SpdFactor::SpdFactor(const FormOperator& op) : n_(2 * op.rows()) {
  ldlt_.compute(op.full_matrix());
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("SpdFactor: factorization failed");
}

SpdFactor::SpdFactor(const SpMat& A) : n_(A.rows()) {
  ldlt_.compute(A);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("SpdFactor: factorization failed");
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("SpdFactor: rhs size mismatch");
  return ldlt_.solve(rhs);
}

ComplexField SpdFactor::solve(const ComplexField& rhs) const {
  Eigen::VectorXd b(2 * rhs.size());
  b << rhs.re, rhs.im;
  const Eigen::VectorXd x = solve(b);
  return {rhs.space_id, x.head(rhs.size()), x.tail(rhs.size())};
}

std::vector<Eigen::VectorXd> solve_saddle(const SaddleSystem& sys) {
  const Eigen::Index n = sys.A.rows();
  const Eigen::Index m = sys.C.rows();

  // Null-space solve by range-space (Schur complement) elimination: the
  // patch form A is positive definite, so w = A^-1 (b - C^T lambda) with
  // lambda = (C A^-1 C^T)^-1 C A^-1 b. Much cheaper than factorizing the
  // indefinite KKT matrix when m << n.
  Eigen::SimplicialLDLT<SpMat> ldlt(sys.A);
  if (ldlt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "solve_saddle: singular primal factorization (" << sys.label << ", " << n
        << " primal dofs, " << m << " constraints)";
    throw std::runtime_error(msg.str());
  }

  const bool pairs = sys.complex_pairs && m > 0 && m % 2 == 0 && n % 2 == 0;
  const Eigen::Index nh = n / 2, mh = m / 2;

  Eigen::MatrixXd X;  // A^-1 C^T (even columns only in complex_pairs mode)
  Eigen::LLT<Eigen::MatrixXd> schur;
  if (m > 0) {
    Eigen::MatrixXd S;
    if (pairs) {
      Eigen::MatrixXd Ct(n, mh);
      const SpMat CtS = sys.C.transpose();
      for (Eigen::Index k = 0; k < mh; ++k) Ct.col(k) = CtS.col(2 * k);
      X = ldlt.solve(Ct);
      // S columns: even = C * X_k, odd = C * R X_k with R the quarter turn;
      // paired constraint rows give (C R x)_{2j} = -(C x)_{2j+1} and
      // (C R x)_{2j+1} = (C x)_{2j}.
      const Eigen::MatrixXd CX = sys.C * X;
      S.resize(m, m);
      for (Eigen::Index k = 0; k < mh; ++k)
        for (Eigen::Index j = 0; j < mh; ++j) {
          S(2 * j, 2 * k) = CX(2 * j, k);
          S(2 * j + 1, 2 * k) = CX(2 * j + 1, k);
          S(2 * j, 2 * k + 1) = -CX(2 * j + 1, k);
          S(2 * j + 1, 2 * k + 1) = CX(2 * j, k);
        }
    } else {
      X = ldlt.solve(Eigen::MatrixXd(sys.C.transpose()));
      S = sys.C * X;
    }
    schur.compute(0.5 * (S + S.transpose()));
    if (schur.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "solve_saddle: rank-deficient constraint block (" << sys.label << ", " << m
          << " constraints)";
      throw std::runtime_error(msg.str());
    }
  }

  std::vector<Eigen::VectorXd> out;
  out.reserve(sys.rhs.size());
  for (const auto& b : sys.rhs) {
    Eigen::VectorXd w = ldlt.solve(b);
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    if (m > 0) {
      lambda = schur.solve(sys.C * w);
      if (pairs) {
        Eigen::VectorXd le(mh), lo(mh);
        for (Eigen::Index k = 0; k < mh; ++k) {
          le[k] = lambda[2 * k];
          lo[k] = lambda[2 * k + 1];
        }
        const auto Xr = X.topRows(nh), Xi = X.bottomRows(nh);
        w.head(nh) -= Xr * le - Xi * lo;
        w.tail(nh) -= Xi * le + Xr * lo;
      } else {
        w -= X * lambda;
      }
    }
    const double scale = std::max(1.0, b.norm());
    const double cres = m > 0 ? (sys.C * w).lpNorm<Eigen::Infinity>() : 0.0;
    const double sres = (sys.A * w + sys.C.transpose() * lambda - b).norm() / scale;
    if (cres > 1e-10 || sres > 1e-9) {
      std::ostringstream msg;
      msg << "solve_saddle: poor solve quality (" << sys.label << "): constraint residual "
          << cres << ", stationarity residual " << sres;
      throw std::runtime_error(msg.str());
    }
    out.push_back(w);
  }
  return out;
}

EigResult eig_smallest(const FormOperator& Hop, const FormOperator& Gop, int k, double tol) {
  if (k < 1) throw std::invalid_argument("eig_smallest: k must be >= 1");
  const SpMat H = Hop.full_matrix();
  const SpMat G = Gop.full_matrix();
  const Eigen::Index n = H.rows();
  const int p = std::min<Eigen::Index>(k + 4, n);

  auto factor = std::make_unique<Eigen::SparseLU<SpMat>>();
  factor->compute(H);
  bool ok = factor->info() == Eigen::Success;
  if (ok) {
    // Probe the factorization; a near-singular H gives an unusable solve.
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd x = factor->solve(b);
    ok = x.allFinite() && (H * x - b).norm() <= 1e-6 * b.norm();
  }
  if (!ok) {
    const SpMat Hs = H + 1e-8 * G;
    factor = std::make_unique<Eigen::SparseLU<SpMat>>();
    factor->compute(Hs);
    if (factor->info() != Eigen::Success)
      throw std::runtime_error("eig_smallest: shifted factorization failed");
  }

  // Deterministic pseudo-random start block.
  Eigen::MatrixXd X(n, p);
  uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      X(i, j) = static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }

  EigResult res;
  const int max_iters = 1000;
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::MatrixXd Y(n, p);
    const Eigen::MatrixXd GX = G * X;
    for (int j = 0; j < p; ++j) Y.col(j) = factor->solve(GX.col(j));

    // G-orthonormalize by modified Gram-Schmidt with reorthogonalization.
    // Inverse iteration on a (near-)singular H collapses the block towards
    // the kernel, so breakdown columns are refilled with fresh randomness.
    Eigen::MatrixXd GQ(n, p);
    for (int j = 0; j < p; ++j) {
      Eigen::VectorXd y = Y.col(j);
      bool done_col = false;
      for (int attempt = 0; attempt < 4 && !done_col; ++attempt) {
        for (int pass = 0; pass < 2; ++pass)
          for (int i = 0; i < j; ++i) y -= GQ.col(i).dot(y) * Y.col(i);
        Eigen::VectorXd gy = G * y;
        const double nrm2 = y.dot(gy);
        if (std::isfinite(nrm2) && nrm2 > 1e-28) {
          const double nrm = std::sqrt(nrm2);
          Y.col(j) = y / nrm;
          GQ.col(j) = gy / nrm;
          done_col = true;
        } else {
          for (Eigen::Index i = 0; i < n; ++i) {
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            y[i] = static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
          }
        }
      }
      if (!done_col) throw std::runtime_error("eig_smallest: lost rank in orthonormalization");
    }

    // Rayleigh-Ritz in the G-orthonormal basis.
    const Eigen::MatrixXd HY = H * Y;
    Eigen::MatrixXd Hp = Y.transpose() * HY;
    Hp = 0.5 * (Hp + Hp.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hp);
    X = Y * es.eigenvectors();

    res.iterations = it;
    res.values = es.eigenvalues().head(k);
    bool done = true;
    for (int j = 0; j < k && done; ++j) {
      const Eigen::VectorXd r = H * X.col(j) - es.eigenvalues()[j] * (G * X.col(j));
      done = r.norm() <= tol;
    }
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.vectors = X.leftCols(k);
  return res;
}

}  // namespace gl
