#pragma once

#include "gl/assembly.hpp"
#include "gl/linsolve.hpp"
#include "gl/mesh.hpp"
#include "gl/operators.hpp"

#include <array>
#include <memory>
#include <utility>
#include <vector>

namespace gl {

/// Coarse space with corrected basis: per coarse vertex z the fine-space
/// field psi_z = phi_z - C_ell phi_z, stored as sparse columns. The basis
/// for i*phi_z is i*psi_z (the complex structure of SpaceMap), never stored.
struct LodSpace {
  std::shared_ptr<const MeshHierarchy> mh;
  double kappa = 0.0;
  double beta = 0.0;
  int ell = 0;
  SpMat basis_re, basis_im;          // fine dofs x coarse vertices
  Eigen::VectorXd corrector_energy;  // per coarse element, patch a_beta energy

  int dim() const { return static_cast<int>(basis_re.cols()); }
  std::string space_id() const;
  SpaceMap map() const;
};

/// Correctors C_{T,ell} phi_z for the three coarse hats of element T,
/// supported in N^ell(T), zero on the patch boundary, pi_h-orthogonal to
/// every active coarse hat.
struct ElementCorrectors {
  std::array<int, 3> coarse_vertices;
  std::array<ComplexField, 3> fields;  // fine-space coefficients
};

ElementCorrectors element_corrector(const MeshHierarchy& mh, const MagneticPotential& A,
                                    double kappa, double beta, int T, int ell);

LodSpace build_lod_space(std::shared_ptr<const MeshHierarchy> mh, const MagneticPotential& A,
                         double kappa, double beta, int ell);

/// Tail energies of a near-ideal corrector (computed at ell_max) outside
/// N^ell(T) for ell = 0..ell_max-1. Input function is the constant 1; the
/// tail is the S-block energy, monotone nonincreasing in ell.
std::vector<std::pair<int, double>> corrector_decay_profile(const MeshHierarchy& mh,
                                                            const MagneticPotential& A,
                                                            double kappa, double beta, int T,
                                                            int ell_max);

/// Galerkin restriction of a fine operator to the corrected basis.
FormOperator coarse_operator(const LodSpace& space, const FormOperator& fine_op);

}  // namespace gl
