#include "gl/spectrum.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gl {

SpectrumReport spectrum_at(const EnergyContext& ctx, const ComplexField& u, int k, double tol) {
  const FormOperator H = hessian_operator(ctx, u);

  SpectrumReport rep;
  rep.kappa = ctx.kappa;

  const EigResult l2 = eig_smallest(H, ctx.active_mass, k, tol);
  rep.l2_eigs = l2.values;
  rep.l2_converged = l2.converged;

  const EigResult h1k = eig_smallest(H, ctx.active_h1k, k, tol);
  rep.h1k_eigs = h1k.values;
  rep.h1k_converged = h1k.converged;

  const ComplexField iu = u.rotated();
  const double unorm = std::sqrt(ctx.active_mass.form(iu, iu));
  auto overlap_with_gauge = [&](const Eigen::VectorXd& col) {
    const Eigen::Index n = u.size();
    const ComplexField v(u.space_id, col.head(n), col.tail(n));
    const Eigen::VectorXd Mr = ctx.active_mass.rr * iu.re;
    const Eigen::VectorXd Mi = ctx.active_mass.rr * iu.im;
    const double re = v.re.dot(Mr) + v.im.dot(Mi);
    const double im = v.im.dot(Mr) - v.re.dot(Mi);
    const double vnorm = std::sqrt(ctx.active_mass.form(v, v));
    return std::hypot(re, im) / (vnorm * unorm);
  };
  rep.zero_mode_overlap = overlap_with_gauge(l2.vectors.col(0));

  // The gauge mode i*u is identified by overlap, not by eigenvalue size, so
  // a near-degenerate second eigenvalue is not mistaken for a zero mode.
  int gauge_index = 0;
  double best = -1.0;
  for (int j = 0; j < h1k.values.size(); ++j) {
    const double o = overlap_with_gauge(h1k.vectors.col(j));
    if (o > best) {
      best = o;
      gauge_index = j;
    }
  }
  rep.rho_inv = (gauge_index == 0) ? rep.h1k_eigs[1] : rep.h1k_eigs[0];
  return rep;
}

double coercivity_trend(const std::vector<std::pair<double, double>>& kappa_rho_inv) {
  std::set<double> distinct;
  for (const auto& [kap, _] : kappa_rho_inv) distinct.insert(kap);
  if (distinct.size() < 2)
    throw std::invalid_argument("coercivity_trend: need at least 2 distinct kappa values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(kappa_rho_inv.size());
  for (const auto& [kap, rho_inv] : kappa_rho_inv) {
    const double x = std::log(kap);
    const double y = std::log(1.0 / rho_inv);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double coercivity_trend(const std::vector<SpectrumReport>& reports) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(reports.size());
  for (const auto& r : reports) pairs.emplace_back(r.kappa, r.rho_inv);
  return coercivity_trend(pairs);
}

}  // namespace gl
