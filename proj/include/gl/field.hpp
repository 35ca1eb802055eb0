#pragma once

#include <Eigen/Dense>

#include <string>

namespace gl {

/// Complex-valued P1 function stored as split real coefficient blocks.
struct ComplexField {
  std::string space_id;  // e.g. "fine:7", "coarse:3", "lod:3/7"
  Eigen::VectorXd re, im;

  ComplexField() = default;
  ComplexField(std::string sid, Eigen::Index n)
      : space_id(std::move(sid)), re(Eigen::VectorXd::Zero(n)), im(Eigen::VectorXd::Zero(n)) {}
  ComplexField(std::string sid, Eigen::VectorXd r, Eigen::VectorXd i)
      : space_id(std::move(sid)), re(std::move(r)), im(std::move(i)) {}

  Eigen::Index size() const { return re.size(); }

  /// i * v, i.e. (re, im) -> (-im, re).
  ComplexField rotated() const { return {space_id, -im, re}; }

  ComplexField operator+(const ComplexField& o) const { return {space_id, re + o.re, im + o.im}; }
  ComplexField operator-(const ComplexField& o) const { return {space_id, re - o.re, im - o.im}; }
  ComplexField operator*(double a) const { return {space_id, a * re, a * im}; }

  /// Multiply by the complex scalar c + i s.
  ComplexField phase_multiplied(double c, double s) const {
    return {space_id, c * re - s * im, s * re + c * im};
  }

  double modulus_at(Eigen::Index z) const { return std::hypot(re[z], im[z]); }
  double max_modulus() const {
    double m = 0;
    for (Eigen::Index z = 0; z < size(); ++z) m = std::max(m, modulus_at(z));
    return m;
  }
};

}  // namespace gl
