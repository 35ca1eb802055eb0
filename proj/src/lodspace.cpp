#include "gl/lodspace.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gl {

namespace {

struct CorrectorWorkspace {
  const MeshHierarchy& mh;
  const MagneticPotential& A;
  double kappa, beta;
  QuadratureRule quad;
  FormOperator abeta;  // global fine a_beta
  SpMat Bt;            // fine x coarse, transpose of the coarse-fine mass
  SpMat P;             // prolongation

  CorrectorWorkspace(const MeshHierarchy& mh_, const MagneticPotential& A_, double kappa_,
                     double beta_)
      : mh(mh_), A(A_), kappa(kappa_), beta(beta_), quad(quad_degree4()) {
    abeta = assemble_abeta(mh.fine(), A, kappa, beta, quad);
    Bt = assemble_coarse_fine_mass(mh).rr.transpose();
    P = prolongation_matrix(mh);
  }
};

struct PatchSystem {
  std::vector<int> interior;             // global fine vertex ids, sorted
  std::unordered_map<int, int> local_of;  // fine vertex -> local index
  SaddleSystem sys;
};

SpMat extract_submatrix(const SpMat& M, const std::vector<int>& dofs,
                        const std::unordered_map<int, int>& local_of) {
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t jl = 0; jl < dofs.size(); ++jl) {
    for (SpMat::InnerIterator it(M, dofs[jl]); it; ++it) {
      const auto hit = local_of.find(static_cast<int>(it.row()));
      if (hit != local_of.end()) trip.emplace_back(hit->second, jl, it.value());
    }
  }
  SpMat out(dofs.size(), dofs.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

PatchSystem build_patch_system(const CorrectorWorkspace& ws, const Patch& p) {
  PatchSystem ps;
  ps.interior = p.fine_interior_vertices;
  const int np = static_cast<int>(ps.interior.size());
  ps.local_of.reserve(np);
  for (int l = 0; l < np; ++l) ps.local_of.emplace(ps.interior[l], l);

  const SpMat S = extract_submatrix(ws.abeta.rr, ps.interior, ps.local_of);
  const SpMat K = extract_submatrix(ws.abeta.ir, ps.interior, ps.local_of);

  std::vector<Eigen::Triplet<double>> ta;
  ta.reserve(2 * S.nonZeros() + 2 * K.nonZeros());
  for (int k = 0; k < S.outerSize(); ++k)
    for (SpMat::InnerIterator it(S, k); it; ++it) {
      ta.emplace_back(it.row(), it.col(), it.value());
      ta.emplace_back(np + it.row(), np + it.col(), it.value());
    }
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it) {
      ta.emplace_back(np + it.row(), it.col(), it.value());
      ta.emplace_back(it.row(), np + it.col(), -it.value());
    }
  ps.sys.A.resize(2 * np, 2 * np);
  ps.sys.A.setFromTriplets(ta.begin(), ta.end());

  // Constraint rows: active coarse hats tested against patch-interior fine
  // dofs, per block; rows that are empty after restriction are dropped.
  std::vector<Eigen::Triplet<double>> tc;
  int m = 0;
  for (int z : p.coarse_vertices_active) {
    std::vector<std::pair<int, double>> row;
    for (SpMat::InnerIterator it(ws.Bt, z); it; ++it) {
      const auto hit = ps.local_of.find(static_cast<int>(it.row()));
      if (hit != ps.local_of.end()) row.emplace_back(hit->second, it.value());
    }
    if (row.empty()) continue;
    for (const auto& [col, val] : row) {
      tc.emplace_back(m, col, val);
      tc.emplace_back(m + 1, np + col, val);
    }
    m += 2;
  }
  ps.sys.C.resize(m, 2 * np);
  ps.sys.C.setFromTriplets(tc.begin(), tc.end());
  // stacked (re; im) primal halves, paired constraint rows, rotation-commuting A
  ps.sys.complex_pairs = true;

  std::ostringstream label;
  label << "patch T=" << p.center_element << " ell=" << p.ell;
  ps.sys.label = label.str();
  return ps;
}

/// Load vector of a_{beta,T}(v, .) restricted to patch-interior test dofs,
/// for v the prolongated coarse hat of vertex z (real component).
Eigen::VectorXd element_load(const CorrectorWorkspace& ws, const FormOperator& abeta_T,
                             const PatchSystem& ps, int z) {
  const Eigen::VectorXd hat = ws.P.col(z);
  const Eigen::VectorXd yr = abeta_T.rr * hat;
  const Eigen::VectorXd yi = abeta_T.ir * hat;
  const int np = static_cast<int>(ps.interior.size());
  Eigen::VectorXd b(2 * np);
  for (int l = 0; l < np; ++l) {
    b[l] = yr[ps.interior[l]];
    b[np + l] = yi[ps.interior[l]];
  }
  return b;
}

ComplexField expand_solution(const MeshHierarchy& mh, const PatchSystem& ps,
                             const Eigen::VectorXd& w) {
  const int np = static_cast<int>(ps.interior.size());
  ComplexField f(fine_space_id(mh), mh.fine().num_vertices());
  for (int l = 0; l < np; ++l) {
    f.re[ps.interior[l]] = w[l];
    f.im[ps.interior[l]] = w[np + l];
  }
  return f;
}

FormOperator element_abeta(const CorrectorWorkspace& ws, int T) {
  return assemble_abeta_sub(ws.mh.fine(), ws.A, ws.kappa, ws.beta, ws.quad,
                            ws.mh.coarse_children_fine[T]);
}

}  // namespace

std::string LodSpace::space_id() const {
  std::ostringstream os;
  os << "lod:" << mh->coarse_k() << "/" << mh->fine_k() << ":ell=" << ell;
  return os.str();
}

SpaceMap LodSpace::map() const {
  SpaceMap m;
  m.mre = basis_re;
  m.mim = basis_im;
  m.from_id = space_id();
  m.to_id = fine_space_id(*mh);
  return m;
}

ElementCorrectors element_corrector(const MeshHierarchy& mh, const MagneticPotential& A,
                                    double kappa, double beta, int T, int ell) {
  CorrectorWorkspace ws(mh, A, kappa, beta);
  const Patch p = make_patch(mh, T, ell);
  PatchSystem ps = build_patch_system(ws, p);
  const FormOperator abeta_T = element_abeta(ws, T);
  ElementCorrectors out;
  for (int i = 0; i < 3; ++i) {
    out.coarse_vertices[i] = mh.coarse().triangles[T][i];
    ps.sys.rhs.push_back(element_load(ws, abeta_T, ps, out.coarse_vertices[i]));
  }
  const auto sols = solve_saddle(ps.sys);
  for (int i = 0; i < 3; ++i) out.fields[i] = expand_solution(mh, ps, sols[i]);
  return out;
}

LodSpace build_lod_space(std::shared_ptr<const MeshHierarchy> mh, const MagneticPotential& A,
                         double kappa, double beta, int ell) {
  if (ell < 1) throw std::invalid_argument("build_lod_space: ell must be >= 1");
  CorrectorWorkspace ws(*mh, A, kappa, beta);
  const int nT = mh->coarse().num_elements();
  const int nc = mh->coarse().num_vertices();
  const int nf = mh->fine().num_vertices();

  // Group elements by patch shape: identical coarse-element sets share one
  // KKT factorization (all saturated patches collapse into a single group).
  std::vector<Patch> patches;
  patches.reserve(nT);
  std::map<std::vector<int>, std::vector<int>> groups;
  for (int T = 0; T < nT; ++T) {
    patches.push_back(make_patch(*mh, T, ell));
    groups[patches[T].coarse_elements].push_back(T);
  }

  // Corrector contributions per element, filled group by group.
  std::vector<ElementCorrectors> contrib(nT);
  for (const auto& [shape, members] : groups) {
    PatchSystem ps = build_patch_system(ws, patches[members.front()]);
    for (int T : members) {
      const FormOperator abeta_T = element_abeta(ws, T);
      for (int i = 0; i < 3; ++i) {
        contrib[T].coarse_vertices[i] = mh->coarse().triangles[T][i];
        ps.sys.rhs.push_back(element_load(ws, abeta_T, ps, contrib[T].coarse_vertices[i]));
      }
    }
    const auto sols = solve_saddle(ps.sys);
    size_t s = 0;
    for (int T : members)
      for (int i = 0; i < 3; ++i) contrib[T].fields[i] = expand_solution(*mh, ps, sols[s++]);
  }

  LodSpace space;
  space.mh = mh;
  space.kappa = kappa;
  space.beta = beta;
  space.ell = ell;
  space.corrector_energy = Eigen::VectorXd::Zero(nT);

  // psi_z = P phi_z - sum over elements containing z of C_{T,ell} phi_z.
  std::vector<Eigen::VectorXd> col_re(nc), col_im(nc);
  for (int z = 0; z < nc; ++z) {
    col_re[z] = Eigen::VectorXd::Zero(nf);
    col_im[z] = Eigen::VectorXd::Zero(nf);
  }
  for (int z = 0; z < nc; ++z) col_re[z] += ws.P.col(z);
  for (int T = 0; T < nT; ++T) {
    for (int i = 0; i < 3; ++i) {
      const int z = contrib[T].coarse_vertices[i];
      col_re[z] -= contrib[T].fields[i].re;
      col_im[z] -= contrib[T].fields[i].im;
      const ComplexField& c = contrib[T].fields[i];
      space.corrector_energy[T] += ws.abeta.form(c, c);
    }
  }

  std::vector<Eigen::Triplet<double>> tr, ti;
  for (int z = 0; z < nc; ++z)
    for (int v = 0; v < nf; ++v) {
      if (col_re[z][v] != 0.0) tr.emplace_back(v, z, col_re[z][v]);
      if (col_im[z][v] != 0.0) ti.emplace_back(v, z, col_im[z][v]);
    }
  space.basis_re.resize(nf, nc);
  space.basis_re.setFromTriplets(tr.begin(), tr.end());
  space.basis_im.resize(nf, nc);
  space.basis_im.setFromTriplets(ti.begin(), ti.end());
  return space;
}

std::vector<std::pair<int, double>> corrector_decay_profile(const MeshHierarchy& mh,
                                                            const MagneticPotential& A,
                                                            double kappa, double beta, int T,
                                                            int ell_max) {
  if (ell_max < 1) throw std::invalid_argument("corrector_decay_profile: ell_max must be >= 1");
  CorrectorWorkspace ws(mh, A, kappa, beta);
  const Patch p = make_patch(mh, T, ell_max);
  PatchSystem ps = build_patch_system(ws, p);
  const FormOperator abeta_T = element_abeta(ws, T);

  // Load for the constant-1 input (zero exactly when A = 0 and beta = 0).
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mh.fine().num_vertices());
  const Eigen::VectorXd yr = abeta_T.rr * ones;
  const Eigen::VectorXd yi = abeta_T.ir * ones;
  const int np = static_cast<int>(ps.interior.size());
  Eigen::VectorXd b(2 * np);
  for (int l = 0; l < np; ++l) {
    b[l] = yr[ps.interior[l]];
    b[np + l] = yi[ps.interior[l]];
  }
  ps.sys.rhs.push_back(b);
  const ComplexField w = expand_solution(mh, ps, solve_saddle(ps.sys).front());

  std::vector<std::pair<int, double>> profile;
  std::vector<int> inside = {T};
  for (int ell = 0; ell < ell_max; ++ell) {
    std::vector<int> outside_fine;
    std::vector<char> in(mh.coarse().num_elements(), 0);
    for (int e : inside) in[e] = 1;
    for (int ce = 0; ce < mh.coarse().num_elements(); ++ce)
      if (!in[ce])
        for (int fe : mh.coarse_children_fine[ce]) outside_fine.push_back(fe);
    double tail = 0.0;
    if (!outside_fine.empty()) {
      const SpMat S_out =
          assemble_abeta_sub(mh.fine(), A, kappa, beta, ws.quad, outside_fine).rr;
      tail = w.re.dot(S_out * w.re) + w.im.dot(S_out * w.im);
    }
    profile.emplace_back(ell, tail);
    inside = layer_closure(mh.coarse(), inside);
  }
  return profile;
}

FormOperator coarse_operator(const LodSpace& space, const FormOperator& fine_op) {
  if (fine_op.rows() != space.mh->fine().num_vertices())
    throw std::invalid_argument("coarse_operator: fine operator dimension mismatch");
  return restrict_operator(space.map(), fine_op);
}

}  // namespace gl
