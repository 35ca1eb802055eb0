#pragma once

#include "gl/assembly.hpp"
#include "gl/linsolve.hpp"
#include "gl/mesh.hpp"
#include "gl/operators.hpp"

#include <memory>

namespace gl {

/// Everything needed to evaluate E, E' and E'' for fields of one active
/// space (fine FEM, coarse FEM through prolongation, or LOD through the
/// corrected basis). All integrals are taken on the fine mesh.
struct EnergyContext {
  std::shared_ptr<const MeshHierarchy> mh;
  MagneticPotential A;
  double kappa = 1.0;
  QuadratureRule quad;       // degree-4: quartic terms of P1 fields are exact
  FormOperator a0_fine;      // a_beta with beta = 0 on the fine mesh
  FormOperator fine_mass;
  FormOperator fine_h1k;
  SpaceMap map;              // active space -> fine coefficients
  FormOperator active_mass;  // restriction of fine_mass (residual dual norms)
  FormOperator active_h1k;   // restriction of fine_h1k (descent preconditioner)
  std::shared_ptr<SpdFactor> active_mass_factor;
};

EnergyContext make_context(std::shared_ptr<const MeshHierarchy> mh, const MagneticPotential& A,
                           double kappa, SpaceMap map);

/// E(v) = 1/2 a_0(V,V) + 1/4 integral (|V|^2 - 1)^2, V the fine representation.
double energy(const EnergyContext& ctx, const ComplexField& v);

/// Coefficients of the load <E'(v), .> restricted to the active space.
ComplexField gradient(const EnergyContext& ctx, const ComplexField& v);

/// Symmetric block operator of <E''(v)., .> on the active space.
FormOperator hessian_operator(const EnergyContext& ctx, const ComplexField& v);

/// Mass-solve weighted dual norm of E'(v); zero iff v is a discrete
/// critical point.
double gle_residual(const EnergyContext& ctx, const ComplexField& v);

}  // namespace gl
