#include "gl/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gl {

SpMat FormOperator::full_matrix() const {
  const Eigen::Index r = rr.rows(), c = rr.cols();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(rr.nonZeros() + ri.nonZeros() + ir.nonZeros() + ii.nonZeros());
  auto add = [&](const SpMat& m, Eigen::Index ro, Eigen::Index co) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        trip.emplace_back(ro + it.row(), co + it.col(), it.value());
  };
  add(rr, 0, 0);
  add(ri, 0, c);
  add(ir, r, 0);
  add(ii, r, c);
  SpMat full(2 * r, 2 * c);
  full.setFromTriplets(trip.begin(), trip.end());
  return full;
}

FormOperator make_sk_operator(FormKind kind, SpMat S, SpMat K) {
  FormOperator op;
  op.kind = kind;
  op.rr = S;
  op.ii = std::move(S);
  op.ir = K;
  op.ri = SpMat(-std::move(K));
  return op;
}

FormOperator make_diag_operator(FormKind kind, SpMat S) {
  FormOperator op;
  op.kind = kind;
  op.rr = S;
  op.ii = std::move(S);
  op.ri = SpMat(op.rr.rows(), op.rr.cols());
  op.ir = SpMat(op.rr.rows(), op.rr.cols());
  return op;
}

MagneticPotential default_potential() {
  MagneticPotential A;
  const double pi = std::acos(-1.0);
  const double s2 = std::sqrt(2.0);
  A.eval = [pi, s2](double x, double y) {
    return Eigen::Vector2d(s2 * std::sin(pi * x) * std::cos(pi * y),
                           -s2 * std::cos(pi * x) * std::sin(pi * y));
  };
  A.sup_norm = s2;
  return A;
}

MagneticPotential zero_potential() {
  MagneticPotential A;
  A.eval = [](double, double) { return Eigen::Vector2d::Zero().eval(); };
  A.sup_norm = 0.0;
  return A;
}

SpaceMap identity_map(std::string space_id) {
  SpaceMap m;
  m.from_id = space_id;
  m.to_id = std::move(space_id);
  return m;
}

FormOperator restrict_operator(const SpaceMap& map, const FormOperator& fine_op) {
  if (map.is_identity()) return fine_op;
  if (fine_op.rows() != map.fine_dim() || fine_op.cols() != map.fine_dim())
    throw std::invalid_argument("restrict_operator: dimension mismatch");
  const SpMat& Br = map.mre;
  FormOperator out;
  out.kind = fine_op.kind;
  out.kappa = fine_op.kappa;
  out.beta = fine_op.beta;
  if (!map.has_im()) {
    out.rr = Br.transpose() * fine_op.rr * Br;
    out.ri = Br.transpose() * fine_op.ri * Br;
    out.ir = Br.transpose() * fine_op.ir * Br;
    out.ii = Br.transpose() * fine_op.ii * Br;
    return out;
  }
  const SpMat& Bi = map.mim;
  const SpMat F11Br = fine_op.rr * Br, F11Bi = fine_op.rr * Bi;
  const SpMat F12Br = fine_op.ri * Br, F12Bi = fine_op.ri * Bi;
  const SpMat F21Br = fine_op.ir * Br, F21Bi = fine_op.ir * Bi;
  const SpMat F22Br = fine_op.ii * Br, F22Bi = fine_op.ii * Bi;
  const SpMat BrT = Br.transpose(), BiT = Bi.transpose();
  out.rr = BrT * F11Br + BrT * F12Bi + BiT * F21Br + BiT * F22Bi;
  out.ri = SpMat(-(BrT * F11Bi)) + BrT * F12Br - BiT * F21Bi + BiT * F22Br;
  out.ir = SpMat(-(BiT * F11Br)) - BiT * F12Bi + BrT * F21Br + BrT * F22Bi;
  out.ii = BiT * F11Bi - BiT * F12Br - BrT * F21Bi + BrT * F22Br;
  return out;
}

}  // namespace gl
