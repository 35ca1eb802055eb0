#include "gl/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace gl {

namespace {

struct ElementGeometry {
  std::array<Vec2, 3> p;
  std::array<Vec2, 3> grad;  // gradients of the barycentric hats
  double area;
};

ElementGeometry geometry(const TriMesh& mesh, int e) {
  ElementGeometry g;
  g.p = mesh.coords(e);
  const Vec2 d1 = g.p[1] - g.p[0], d2 = g.p[2] - g.p[0];
  const double det = d1.x() * d2.y() - d1.y() * d2.x();
  g.area = 0.5 * std::abs(det);
  // grad lambda_1, lambda_2 from the inverse Jacobian; lambda_0 = 1 - l1 - l2.
  g.grad[1] = Vec2(d2.y(), -d2.x()) / det;
  g.grad[2] = Vec2(-d1.y(), d1.x()) / det;
  g.grad[0] = -g.grad[1] - g.grad[2];
  return g;
}

Vec2 physical_point(const ElementGeometry& g, const Eigen::Vector3d& lam) {
  return lam[0] * g.p[0] + lam[1] * g.p[1] + lam[2] * g.p[2];
}

}  // namespace

FormOperator assemble_mass(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto g = geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(t[i], t[j], g.area / 12.0 * (i == j ? 2.0 : 1.0));
  }
  SpMat S(nv, nv);
  S.setFromTriplets(trip.begin(), trip.end());
  auto op = make_diag_operator(FormKind::mass, std::move(S));
  return op;
}

FormOperator assemble_stiffness(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto g = geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(t[i], t[j], g.area * g.grad[i].dot(g.grad[j]));
  }
  SpMat S(nv, nv);
  S.setFromTriplets(trip.begin(), trip.end());
  return make_diag_operator(FormKind::stiffness, std::move(S));
}

static FormOperator assemble_abeta_impl(const TriMesh& mesh, const MagneticPotential& A,
                                        double kappa, double beta, const QuadratureRule& quad,
                                        const std::vector<int>* elements) {
  if (kappa <= 0) throw std::invalid_argument("assemble_abeta: kappa must be positive");
  if (quad.degree < 4) throw std::invalid_argument("assemble_abeta: quadrature degree >= 4 required");
  const int nv = mesh.num_vertices();
  const double ik2 = 1.0 / (kappa * kappa);
  const double ik = 1.0 / kappa;
  std::vector<Eigen::Triplet<double>> ts, tk;
  const int ne = elements ? static_cast<int>(elements->size()) : mesh.num_elements();
  ts.reserve(9 * ne);
  tk.reserve(9 * ne);
  for (int ee = 0; ee < ne; ++ee) {
    const int e = elements ? (*elements)[ee] : ee;
    const auto g = geometry(mesh, e);
    const auto& t = mesh.triangles[e];
    Eigen::Matrix3d Sl = Eigen::Matrix3d::Zero(), Kl = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Sl(i, j) = ik2 * g.area * g.grad[i].dot(g.grad[j]);
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const auto& lam = quad.points[q];
      const double w = quad.weights[q] * 2.0 * g.area;
      const Vec2 x = physical_point(g, lam);
      const Vec2 a = A.eval(x.x(), x.y());
      const double a2b = a.squaredNorm() + beta;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Sl(i, j) += w * a2b * lam[i] * lam[j];
          Kl(i, j) += w * ik * a.dot(lam[j] * g.grad[i] - lam[i] * g.grad[j]);
        }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        ts.emplace_back(t[i], t[j], Sl(i, j));
        tk.emplace_back(t[i], t[j], Kl(i, j));
      }
  }
  SpMat S(nv, nv), K(nv, nv);
  S.setFromTriplets(ts.begin(), ts.end());
  K.setFromTriplets(tk.begin(), tk.end());
  auto op = make_sk_operator(FormKind::a_beta, std::move(S), std::move(K));
  op.kappa = kappa;
  op.beta = beta;
  return op;
}

FormOperator assemble_abeta(const TriMesh& mesh, const MagneticPotential& A, double kappa,
                            double beta, const QuadratureRule& quad) {
  return assemble_abeta_impl(mesh, A, kappa, beta, quad, nullptr);
}

FormOperator assemble_abeta_sub(const TriMesh& mesh, const MagneticPotential& A, double kappa,
                                double beta, const QuadratureRule& quad,
                                const std::vector<int>& elements) {
  return assemble_abeta_impl(mesh, A, kappa, beta, quad, &elements);
}

FormOperator assemble_h1k_gram(const TriMesh& mesh, double kappa) {
  if (kappa <= 0) throw std::invalid_argument("assemble_h1k_gram: kappa must be positive");
  const auto mass = assemble_mass(mesh);
  const auto stiff = assemble_stiffness(mesh);
  SpMat S = mass.rr + (1.0 / (kappa * kappa)) * stiff.rr;
  auto op = make_diag_operator(FormKind::h1k_gram, std::move(S));
  op.kappa = kappa;
  return op;
}

FormOperator assemble_coarse_fine_mass(const MeshHierarchy& mh) {
  const TriMesh& cm = mh.coarse();
  const TriMesh& fm = mh.fine();
  const auto quad = quad_degree2();  // product of two linears, exact
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * fm.num_elements());
  for (int e = 0; e < fm.num_elements(); ++e) {
    const auto g = geometry(fm, e);
    const auto& tf = fm.triangles[e];
    const int ce = mh.fine_to_coarse_element[e];
    const auto& tc = cm.triangles[ce];
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * 2.0 * g.area;
      const Vec2 x = physical_point(g, quad.points[q]);
      const Eigen::Vector3d lamc = cm.barycentric(ce, x);
      for (int zi = 0; zi < 3; ++zi)
        for (int j = 0; j < 3; ++j)
          trip.emplace_back(tc[zi], tf[j], w * lamc[zi] * quad.points[q][j]);
    }
  }
  SpMat B(cm.num_vertices(), fm.num_vertices());
  B.setFromTriplets(trip.begin(), trip.end());
  B.prune(0.0);
  return make_diag_operator(FormKind::coarse_fine_mass, std::move(B));
}

SpMat prolongation_matrix(const MeshHierarchy& mh) {
  const TriMesh& cm = mh.coarse();
  const TriMesh& fm = mh.fine();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * fm.num_vertices());
  for (int v = 0; v < fm.num_vertices(); ++v) {
    const Vec2 x = fm.vertices[v];
    const int ce = cm.locate(x);
    const Eigen::Vector3d lam = cm.barycentric(ce, x);
    for (int i = 0; i < 3; ++i)
      if (std::abs(lam[i]) > 1e-14) trip.emplace_back(v, cm.triangles[ce][i], lam[i]);
  }
  SpMat P(fm.num_vertices(), cm.num_vertices());
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

std::string coarse_space_id(const MeshHierarchy& mh) {
  return "coarse:" + std::to_string(mh.coarse_k());
}
std::string fine_space_id(const MeshHierarchy& mh) {
  return "fine:" + std::to_string(mh.fine_k());
}

ComplexField prolongate(const MeshHierarchy& mh, const ComplexField& v_coarse) {
  if (v_coarse.size() != mh.coarse().num_vertices() || v_coarse.space_id != coarse_space_id(mh))
    throw std::invalid_argument("prolongate: field does not live on the coarse space");
  const SpMat P = prolongation_matrix(mh);
  return {fine_space_id(mh), P * v_coarse.re, P * v_coarse.im};
}

ComplexField l2_project_coarse(const MeshHierarchy& mh, const ComplexField& v_fine) {
  if (v_fine.size() != mh.fine().num_vertices())
    throw std::invalid_argument("l2_project_coarse: field does not live on the fine space");
  const auto B = assemble_coarse_fine_mass(mh);
  const auto Mc = assemble_mass(mh.coarse());
  Eigen::SimplicialLDLT<SpMat> solver(Mc.rr);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("l2_project_coarse: coarse mass factorization failed");
  ComplexField out(coarse_space_id(mh), Mc.rr.rows());
  out.re = solver.solve(B.rr * v_fine.re);
  out.im = solver.solve(B.rr * v_fine.im);
  return out;
}

}  // namespace gl
