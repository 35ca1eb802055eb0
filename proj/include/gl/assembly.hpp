#pragma once

#include "gl/mesh.hpp"
#include "gl/operators.hpp"
#include "gl/quadrature.hpp"

#include <vector>

namespace gl {

/// Standard P1 mass matrix (closed form, exact). K = 0.
FormOperator assemble_mass(const TriMesh& mesh);

/// P1 stiffness matrix (closed form, exact). K = 0.
FormOperator assemble_stiffness(const TriMesh& mesh);

/// Magnetic form a_beta(v,w) = (i/k grad v + A v, i/k grad w + A w) + beta (v,w).
/// S = k^-2 stiffness + mass weighted by |A|^2 + beta; K = k^-1 cross term.
/// Requires quad exactness >= 4 and kappa > 0.
FormOperator assemble_abeta(const TriMesh& mesh, const MagneticPotential& A, double kappa,
                            double beta, const QuadratureRule& quad);

/// Same form subassembled over a subset of elements only (element-local
/// right-hand sides of corrector problems).
FormOperator assemble_abeta_sub(const TriMesh& mesh, const MagneticPotential& A, double kappa,
                                double beta, const QuadratureRule& quad,
                                const std::vector<int>& elements);

/// Gram matrix of the kappa-weighted H1 norm: S = mass + k^-2 stiffness.
FormOperator assemble_h1k_gram(const TriMesh& mesh, double kappa);

/// Rectangular B[z,j] = integral of coarse hat z times fine hat j (exact).
FormOperator assemble_coarse_fine_mass(const MeshHierarchy& mh);

/// Nodal prolongation matrix from coarse to fine vertices (exact nesting).
SpMat prolongation_matrix(const MeshHierarchy& mh);

ComplexField prolongate(const MeshHierarchy& mh, const ComplexField& v_coarse);

/// L2 projection onto the coarse space: solves the coarse mass system.
ComplexField l2_project_coarse(const MeshHierarchy& mh, const ComplexField& v_fine);

std::string coarse_space_id(const MeshHierarchy& mh);
std::string fine_space_id(const MeshHierarchy& mh);

}  // namespace gl
