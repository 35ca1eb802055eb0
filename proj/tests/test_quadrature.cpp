#include "gl/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace gl;

namespace {

// integral over the reference triangle of lambda1^a lambda2^b lambda3^c
double exact_monomial(int a, int b, int c) {
  auto fact = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
}

double quad_monomial(const QuadratureRule& q, int a, int b, int c) {
  double s = 0;
  for (size_t i = 0; i < q.points.size(); ++i)
    s += q.weights[i] * std::pow(q.points[i][0], a) * std::pow(q.points[i][1], b) *
         std::pow(q.points[i][2], c);
  return s;
}

}  // namespace

TEST_CASE("weights sum to the reference area") {
  for (const QuadratureRule& q : {quad_degree2(), quad_degree4()}) {
    double w = 0;
    for (double wi : q.weights) w += wi;
    CHECK(w == doctest::Approx(0.5).epsilon(1e-14));
    for (const auto& p : q.points) {
      CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(p.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("degree-2 rule integrates quadratics exactly") {
  const QuadratureRule q = quad_degree2();
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b) {
      const int c = 2 - a - b;
      CHECK(quad_monomial(q, a, b, c) == doctest::Approx(exact_monomial(a, b, c)).epsilon(1e-14));
    }
  CHECK(quad_monomial(q, 1, 0, 0) == doctest::Approx(exact_monomial(1, 0, 0)).epsilon(1e-14));
  CHECK(quad_monomial(q, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("degree-4 rule integrates all quartic monomials exactly") {
  const QuadratureRule q = quad_degree4();
  for (int total = 0; total <= 4; ++total)
    for (int a = 0; a <= total; ++a)
      for (int b = 0; a + b <= total; ++b) {
        const int c = total - a - b;
        CHECK(quad_monomial(q, a, b, c) ==
              doctest::Approx(exact_monomial(a, b, c)).epsilon(1e-13));
      }
}

TEST_CASE("degree-4 rule is not exact at degree 6") {
  const QuadratureRule q = quad_degree4();
  CHECK(std::abs(quad_monomial(q, 6, 0, 0) - exact_monomial(6, 0, 0)) > 1e-8);
}
