#include "gl/minimize.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gl {

ComplexField initial_guess(const std::string& space_id, Eigen::Index n, std::uint64_t seed) {
  ComplexField v(space_id, n);
  std::uint64_t s = seed;
  auto next_unit = [&s]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  for (Eigen::Index z = 0; z < n; ++z) {
    double a = next_unit();
    double b = next_unit();
    const double r = std::hypot(a, b);
    if (r > 1.0) {
      a /= r;
      b /= r;
    }
    v.re[z] = a;
    v.im[z] = b;
  }
  return v;
}

MinimizeResult minimize(const EnergyContext& ctx, const MinimizeConfig& cfg,
                        const ComplexField* start) {
  if (cfg.delta <= 0 || cfg.max_iters < 1)
    throw std::invalid_argument("minimize: delta must be positive, max_iters >= 1");
  const Eigen::Index n =
      ctx.map.is_identity() ? ctx.mh->fine().num_vertices() : ctx.map.active_dim();
  const std::string sid = ctx.map.is_identity() ? fine_space_id(*ctx.mh) : ctx.map.from_id;
  if (start && start->re.size() != n)
    throw std::invalid_argument("minimize: start iterate has wrong dimension");

  const SpdFactor gram(ctx.active_h1k);

  MinimizeResult res;
  ComplexField v = start ? ComplexField(sid, start->re, start->im) : initial_guess(sid, n, cfg.seed);
  double E = energy(ctx, v);
  res.energy_trace.push_back(E);
  res.stop_reason = StopReason::max_iters;

  for (long it = 0; it < cfg.max_iters; ++it) {
    const ComplexField g = gradient(ctx, v);
    const ComplexField d = gram.solve(g);
    const double slope = g.re.dot(d.re) + g.im.dot(d.im);

    double tau = cfg.step.initial_step;
    ComplexField trial;
    double E_trial = 0.0;
    bool accepted = false;
    while (tau > 1e-18) {
      trial = v - d * tau;
      E_trial = energy(ctx, trial);
      if (E_trial <= E - cfg.step.sufficient_decrease * tau * slope) {
        accepted = true;
        break;
      }
      tau *= cfg.step.backtrack;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "minimize: line search step underflow at iteration " << it << " (energy " << E
          << ", slope " << slope << ")";
      throw std::runtime_error(msg.str());
    }
    v = std::move(trial);
    res.energy_trace.push_back(E_trial);
    res.iters = it + 1;
    const double dE = E - E_trial;
    E = E_trial;
    if (std::abs(dE) < cfg.delta) {
      res.stop_reason = StopReason::tolerance;
      break;
    }
  }

  res.u = std::move(v);
  res.u_fine = ctx.map.to_fine(res.u);
  res.energy = E;
  res.residual = gle_residual(ctx, res.u);
  return res;
}

std::pair<double, double> complex_l2_inner(const ComplexField& a, const ComplexField& b,
                                           const FormOperator& mass) {
  // integral a * conj(b) = (ar.M.br + ai.M.bi) + i (ai.M.br - ar.M.bi)
  const Eigen::VectorXd Mbr = mass.rr * b.re;
  const Eigen::VectorXd Mbi = mass.rr * b.im;
  return {a.re.dot(Mbr) + a.im.dot(Mbi), a.im.dot(Mbr) - a.re.dot(Mbi)};
}

ComplexField align_phase(const ComplexField& u, const ComplexField& reference,
                         const FormOperator& mass) {
  if (u.size() != reference.size())
    throw std::invalid_argument("align_phase: fields live on different spaces");
  const auto [ar, ai] = complex_l2_inner(reference, u, mass);
  const double mod = std::hypot(ar, ai);
  if (mod == 0.0)
    throw std::runtime_error("align_phase: zero overlap, phase alignment undefined");
  return u.phase_multiplied(ar / mod, ai / mod);
}

ProblemSetup setup_problem(const MinimizeConfig& cfg, const MagneticPotential& A) {
  auto mh = std::make_shared<const MeshHierarchy>(build_hierarchy(cfg.coarse_k, cfg.fine_k));
  SpaceMap map;
  std::optional<LodSpace> lod;
  switch (cfg.space) {
    case SpaceKind::fine_fem:
      map = identity_map(fine_space_id(*mh));
      break;
    case SpaceKind::coarse_fem:
      map.mre = prolongation_matrix(*mh);
      map.from_id = coarse_space_id(*mh);
      map.to_id = fine_space_id(*mh);
      break;
    case SpaceKind::lod:
      lod = build_lod_space(mh, A, cfg.kappa, cfg.beta, cfg.ell);
      map = lod->map();
      break;
  }
  ProblemSetup ps{mh, A, make_context(mh, A, cfg.kappa, std::move(map)), std::move(lod)};
  return ps;
}

ProblemSetup setup_problem(const MinimizeConfig& cfg) {
  return setup_problem(cfg, default_potential());
}

MinimizeResult run_minimize(const MinimizeConfig& cfg) {
  const ProblemSetup ps = setup_problem(cfg);
  return minimize(ps.ctx, cfg);
}

}  // namespace gl
