#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gl {

/// Quadrature on the reference triangle. Weights sum to 1/2 (the reference
/// area); an integral over a physical triangle T is 2|T| * sum w_q f(x_q).
struct QuadratureRule {
  int degree = 0;  // declared polynomial exactness
  std::vector<Eigen::Vector3d> points;  // barycentric
  std::vector<double> weights;
};

/// 3-point edge-midpoint rule, exact for degree 2.
QuadratureRule quad_degree2();

/// 6-point rule, exact for degree 4.
QuadratureRule quad_degree4();

}  // namespace gl
