#include "gl/quadrature.hpp"

namespace gl {

QuadratureRule quad_degree2() {
  QuadratureRule q;
  q.degree = 2;
  q.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  q.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return q;
}

QuadratureRule quad_degree4() {
  // Dunavant order-4 rule, weights normalized to sum to 1/2.
  QuadratureRule q;
  q.degree = 4;
  const double a1 = 0.816847572980459, b1 = 0.091576213509771;
  const double a2 = 0.108103018168070, b2 = 0.445948490915965;
  const double w1 = 0.109951743655322 / 2.0;
  const double w2 = 0.223381589678011 / 2.0;
  q.points = {{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
              {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
  q.weights = {w1, w1, w1, w2, w2, w2};
  return q;
}

}  // namespace gl
