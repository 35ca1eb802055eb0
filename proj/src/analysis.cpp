#include "gl/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace gl {

double error_h1k(const ComplexField& u, const ComplexField& ref, const FormOperator& gram) {
  if (u.size() != ref.size() || u.size() != gram.rows())
    throw std::invalid_argument("error_h1k: space mismatch");
  const ComplexField d = u - ref;
  return std::sqrt(std::max(0.0, gram.form(d, d)));
}

ComplexField best_approximation(const LodSpace& space, const ComplexField& ref,
                                const FormOperator& gram) {
  if (ref.size() != gram.rows() || ref.size() != space.basis_re.rows())
    throw std::invalid_argument("best_approximation: space mismatch");
  const SpaceMap map = space.map();
  const FormOperator coarse_gram = restrict_operator(map, gram);
  const ComplexField rhs = map.pullback(gram.apply(ref));
  SpdFactor factor(coarse_gram);
  return factor.solve(rhs);
}

double best_approximation_error(const LodSpace& space, const ComplexField& ref,
                                const FormOperator& gram) {
  const ComplexField coeff = best_approximation(space, ref, gram);
  const ComplexField proj = space.map().to_fine(coeff);
  return error_h1k(proj, ref, gram);
}

namespace {

double ls_slope(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) throw std::invalid_argument("rate fit: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xy.size());
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("rate fit: degenerate abscissae");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

double fit_rate(const std::vector<std::pair<double, double>>& h_err) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(h_err.size());
  for (const auto& [h, err] : h_err) {
    if (h <= 0 || err <= 0) throw std::invalid_argument("fit_rate: entries must be positive");
    pts.emplace_back(std::log(h), std::log(err));
  }
  return ls_slope(pts);
}

double fit_decay(const std::vector<std::pair<double, double>>& ell_err) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(ell_err.size());
  for (const auto& [ell, err] : ell_err) {
    if (err <= 0) throw std::invalid_argument("fit_decay: errors must be positive");
    pts.emplace_back(ell, std::log(err));
  }
  return -ls_slope(pts);
}

}  // namespace gl
