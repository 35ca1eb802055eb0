#include "gl/energy.hpp"

#include <stdexcept>

namespace gl {

namespace {

ComplexField fine_representation(const EnergyContext& ctx, const ComplexField& v) {
  if (ctx.map.is_identity()) {
    if (v.size() != ctx.mh->fine().num_vertices())
      throw std::invalid_argument("energy: field does not match the fine space");
    return v;
  }
  if (v.size() != ctx.map.active_dim())
    throw std::invalid_argument("energy: field does not match the active space");
  return ctx.map.to_fine(v);
}

}  // namespace

EnergyContext make_context(std::shared_ptr<const MeshHierarchy> mh, const MagneticPotential& A,
                           double kappa, SpaceMap map) {
  EnergyContext ctx;
  ctx.mh = std::move(mh);
  ctx.A = A;
  ctx.kappa = kappa;
  ctx.quad = quad_degree4();
  ctx.a0_fine = assemble_abeta(ctx.mh->fine(), A, kappa, 0.0, ctx.quad);
  ctx.fine_mass = assemble_mass(ctx.mh->fine());
  ctx.fine_h1k = assemble_h1k_gram(ctx.mh->fine(), kappa);
  ctx.map = std::move(map);
  ctx.active_mass = restrict_operator(ctx.map, ctx.fine_mass);
  ctx.active_h1k = restrict_operator(ctx.map, ctx.fine_h1k);
  ctx.active_mass_factor = std::make_shared<SpdFactor>(ctx.active_mass);
  return ctx;
}

double energy(const EnergyContext& ctx, const ComplexField& v) {
  const ComplexField V = fine_representation(ctx, v);
  const double quadratic = 0.5 * ctx.a0_fine.form(V, V);

  const TriMesh& fm = ctx.mh->fine();
  const double two_area = 2.0 * fm.element_area();
  double quartic = 0.0;
  for (int e = 0; e < fm.num_elements(); ++e) {
    const auto& t = fm.triangles[e];
    for (size_t q = 0; q < ctx.quad.points.size(); ++q) {
      const auto& lam = ctx.quad.points[q];
      const double a = lam[0] * V.re[t[0]] + lam[1] * V.re[t[1]] + lam[2] * V.re[t[2]];
      const double b = lam[0] * V.im[t[0]] + lam[1] * V.im[t[1]] + lam[2] * V.im[t[2]];
      const double d = a * a + b * b - 1.0;
      quartic += ctx.quad.weights[q] * two_area * d * d;
    }
  }
  return quadratic + 0.25 * quartic;
}

ComplexField gradient(const EnergyContext& ctx, const ComplexField& v) {
  const ComplexField V = fine_representation(ctx, v);
  ComplexField g = ctx.a0_fine.apply(V);

  const TriMesh& fm = ctx.mh->fine();
  const double two_area = 2.0 * fm.element_area();
  for (int e = 0; e < fm.num_elements(); ++e) {
    const auto& t = fm.triangles[e];
    for (size_t q = 0; q < ctx.quad.points.size(); ++q) {
      const auto& lam = ctx.quad.points[q];
      const double a = lam[0] * V.re[t[0]] + lam[1] * V.re[t[1]] + lam[2] * V.re[t[2]];
      const double b = lam[0] * V.im[t[0]] + lam[1] * V.im[t[1]] + lam[2] * V.im[t[2]];
      const double c = ctx.quad.weights[q] * two_area * (a * a + b * b - 1.0);
      for (int i = 0; i < 3; ++i) {
        g.re[t[i]] += c * a * lam[i];
        g.im[t[i]] += c * b * lam[i];
      }
    }
  }
  return ctx.map.pullback(g);
}

FormOperator hessian_operator(const EnergyContext& ctx, const ComplexField& v) {
  const ComplexField V = fine_representation(ctx, v);
  const TriMesh& fm = ctx.mh->fine();
  const int nv = fm.num_vertices();
  const double two_area = 2.0 * fm.element_area();

  // Reaction blocks of (|v|^2-1) z + v^2 z* + |v|^2 z:
  //   [[3a^2 + b^2 - 1, 2ab], [2ab, a^2 + 3b^2 - 1]], all symmetric.
  std::vector<Eigen::Triplet<double>> trr, tri, tii;
  trr.reserve(9 * fm.num_elements());
  tri.reserve(9 * fm.num_elements());
  tii.reserve(9 * fm.num_elements());
  for (int e = 0; e < fm.num_elements(); ++e) {
    const auto& t = fm.triangles[e];
    Eigen::Matrix3d Drr = Eigen::Matrix3d::Zero(), Dri = Eigen::Matrix3d::Zero(),
                    Dii = Eigen::Matrix3d::Zero();
    for (size_t q = 0; q < ctx.quad.points.size(); ++q) {
      const auto& lam = ctx.quad.points[q];
      const double w = ctx.quad.weights[q] * two_area;
      const double a = lam[0] * V.re[t[0]] + lam[1] * V.re[t[1]] + lam[2] * V.re[t[2]];
      const double b = lam[0] * V.im[t[0]] + lam[1] * V.im[t[1]] + lam[2] * V.im[t[2]];
      const double crr = 3 * a * a + b * b - 1.0;
      const double cri = 2 * a * b;
      const double cii = a * a + 3 * b * b - 1.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double ll = w * lam[i] * lam[j];
          Drr(i, j) += crr * ll;
          Dri(i, j) += cri * ll;
          Dii(i, j) += cii * ll;
        }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        trr.emplace_back(t[i], t[j], Drr(i, j));
        tri.emplace_back(t[i], t[j], Dri(i, j));
        tii.emplace_back(t[i], t[j], Dii(i, j));
      }
  }
  SpMat Drr(nv, nv), Dri(nv, nv), Dii(nv, nv);
  Drr.setFromTriplets(trr.begin(), trr.end());
  Dri.setFromTriplets(tri.begin(), tri.end());
  Dii.setFromTriplets(tii.begin(), tii.end());

  FormOperator H;
  H.kind = FormKind::hessian;
  H.kappa = ctx.kappa;
  H.rr = ctx.a0_fine.rr + Drr;
  H.ri = ctx.a0_fine.ri + Dri;
  H.ir = ctx.a0_fine.ir + Dri;
  H.ii = ctx.a0_fine.ii + Dii;
  return restrict_operator(ctx.map, H);
}

double gle_residual(const EnergyContext& ctx, const ComplexField& v) {
  const ComplexField g = gradient(ctx, v);
  const ComplexField r = ctx.active_mass_factor->solve(g);
  return std::sqrt(std::max(0.0, g.re.dot(r.re) + g.im.dot(r.im)));
}

}  // namespace gl
