// Experiment harness: minimization, convergence / decay / spectrum sweeps,
// best-approximation studies and field export around the gl library.

#include "gl/analysis.hpp"
#include "gl/assembly.hpp"
#include "gl/energy.hpp"
#include "gl/fieldfile.hpp"
#include "gl/lodspace.hpp"
#include "gl/minimize.hpp"
#include "gl/spectrum.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace gl;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_comment(const json& cfg) {
  const std::string dump = cfg.dump();
  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a(dump)));
  return "# config-hash=" + std::string(hex) + " config=" + dump;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

struct SweepConfig {
  std::vector<double> kappas{8.0};
  std::vector<double> betas{0.0};
  std::vector<int> ells{4};
  std::vector<int> coarse_ks{3};
  int fine_k = 7;
  std::vector<std::uint64_t> seeds{1};
  std::int64_t ref_seed = -1;  // seed of the fine reference; -1: first sweep seed
  double delta = 1e-10;
  std::vector<std::string> spaces{"lod"};
  std::string out;

  std::uint64_t reference_seed() const {
    return ref_seed >= 0 ? static_cast<std::uint64_t>(ref_seed) : seeds.front();
  }

  json to_json() const {
    return json{{"kappas", kappas},   {"betas", betas},   {"ells", ells},
                {"coarse_ks", coarse_ks}, {"fine_k", fine_k}, {"seeds", seeds},
                {"delta", delta},     {"spaces", spaces},
                {"ref_seed", ref_seed}};
  }

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
    json j = json::parse(in);
    if (j.contains("kappas")) kappas = j["kappas"].get<std::vector<double>>();
    if (j.contains("betas")) betas = j["betas"].get<std::vector<double>>();
    if (j.contains("ells")) ells = j["ells"].get<std::vector<int>>();
    if (j.contains("coarse_ks")) coarse_ks = j["coarse_ks"].get<std::vector<int>>();
    if (j.contains("fine_k")) fine_k = j["fine_k"].get<int>();
    if (j.contains("seeds")) seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("delta")) delta = j["delta"].get<double>();
    if (j.contains("ref_seed")) ref_seed = j["ref_seed"].get<std::int64_t>();
    if (j.contains("spaces")) spaces = j["spaces"].get<std::vector<std::string>>();
    if (j.contains("out")) out = j["out"].get<std::string>();
  }

  void validate() const {
    if (kappas.empty()) throw CLI::ValidationError("config", "kappas must be nonempty");
    for (double k : kappas)
      if (k <= 0) throw CLI::ValidationError("config", "kappa must be positive");
    for (double b : betas)
      if (b < 0) throw CLI::ValidationError("config", "beta must be nonnegative");
    for (int l : ells)
      if (l < 1) throw CLI::ValidationError("config", "ell must be >= 1");
    for (int ck : coarse_ks)
      if (ck >= fine_k) throw CLI::ValidationError("config", "fine_k must exceed every coarse_k");
  }
};

// Per-process caches so sweeps reuse hierarchies, corrector solves and
// reference minimizers across grid points.
struct Caches {
  std::map<std::pair<int, int>, std::shared_ptr<MeshHierarchy>> hierarchies;
  std::map<std::string, LodSpace> lod_spaces;
  std::map<std::string, MinimizeResult> fem_refs;

  std::shared_ptr<MeshHierarchy> mh(int coarse_k, int fine_k) {
    auto key = std::make_pair(coarse_k, fine_k);
    auto it = hierarchies.find(key);
    if (it == hierarchies.end())
      it = hierarchies.emplace(key, std::make_shared<MeshHierarchy>(build_hierarchy(coarse_k, fine_k)))
               .first;
    return it->second;
  }

  const LodSpace& lod(const std::shared_ptr<MeshHierarchy>& h, const MagneticPotential& A,
                      double kappa, double beta, int ell) {
    std::ostringstream key;
    key << h->coarse_k() << '/' << h->fine_k() << '/' << kappa << '/' << beta << '/' << ell;
    auto it = lod_spaces.find(key.str());
    if (it == lod_spaces.end())
      it = lod_spaces.emplace(key.str(), build_lod_space(h, A, kappa, beta, ell)).first;
    return it->second;
  }

  const MinimizeResult& fem_reference(double kappa, int fine_k, std::uint64_t seed, double delta) {
    std::ostringstream key;
    key << kappa << '/' << fine_k << '/' << seed << '/' << delta;
    auto it = fem_refs.find(key.str());
    if (it == fem_refs.end()) {
      MinimizeConfig cfg;
      cfg.space = SpaceKind::fine_fem;
      cfg.kappa = kappa;
      cfg.coarse_k = fine_k - 1;
      cfg.fine_k = fine_k;
      cfg.seed = seed;
      cfg.delta = delta;
      it = fem_refs.emplace(key.str(), run_minimize(cfg)).first;
    }
    return it->second;
  }
};

SpaceKind parse_space(const std::string& s) {
  if (s == "fem" || s == "fine") return SpaceKind::fine_fem;
  if (s == "coarse") return SpaceKind::coarse_fem;
  if (s == "lod") return SpaceKind::lod;
  throw CLI::ValidationError("--space", "unknown space '" + s + "'");
}

int cmd_minimize(double kappa, double beta, int ell, int coarse_k, int fine_k,
                 std::uint64_t seed, double delta, const std::string& space,
                 const std::string& out) {
  MinimizeConfig cfg;
  cfg.space = parse_space(space);
  cfg.kappa = kappa;
  cfg.beta = beta;
  cfg.ell = ell;
  cfg.coarse_k = coarse_k;
  cfg.fine_k = fine_k;
  cfg.seed = seed;
  cfg.delta = delta;
  const MinimizeResult res = run_minimize(cfg);
  std::printf("space=%s kappa=%s beta=%s energy=%s iters=%ld residual=%s\n", space.c_str(),
              fmt(kappa).c_str(), fmt(beta).c_str(), fmt(res.energy).c_str(), res.iters,
              fmt(res.residual).c_str());
  if (!out.empty()) {
    FieldFile f;
    f.mesh_level = static_cast<std::uint32_t>(fine_k);
    f.metadata = json{{"kappa", kappa},   {"beta", beta}, {"ell", ell},
                      {"space", space},   {"seed", seed}, {"energy", res.energy},
                      {"coarse_k", coarse_k}, {"fine_k", fine_k}};
    f.field = res.u_fine;
    write_field_file(out, f);
  }
  return 0;
}

int cmd_convergence(const SweepConfig& sc) {
  sc.validate();
  Caches cache;
  const MagneticPotential A = default_potential();
  std::ostringstream csv;
  csv << config_comment(sc.to_json()) << '\n';
  csv << "space,kappa,beta,ell,coarse_h,fine_h,seed,err_h1k,err_l2,err_best,energy,iters,status\n";
  for (double kappa : sc.kappas)
    for (std::uint64_t seed : sc.seeds) {
      const MinimizeResult& ref = cache.fem_reference(kappa, sc.fine_k, sc.reference_seed(), sc.delta);
      auto mh_ref = cache.mh(sc.fine_k - 1, sc.fine_k);
      const FormOperator gram = assemble_h1k_gram(mh_ref->fine(), kappa);
      const FormOperator mass = assemble_mass(mh_ref->fine());
      for (const std::string& space : sc.spaces)
        for (double beta : sc.betas)
          for (int ell : sc.ells)
            for (int ck : sc.coarse_ks) {
              auto mh = cache.mh(ck, sc.fine_k);
              std::string status = "ok";
              double eh = 0, el = 0, eb = 0, en = 0;
              long iters = 0;
              try {
                MinimizeConfig cfg;
                cfg.kappa = kappa;
                cfg.beta = beta;
                cfg.ell = ell;
                cfg.coarse_k = ck;
                cfg.fine_k = sc.fine_k;
                cfg.seed = seed;
                cfg.delta = sc.delta;
                EnergyContext ctx;
                if (space == "lod") {
                  cfg.space = SpaceKind::lod;
                  const LodSpace& lod = cache.lod(mh, A, kappa, beta, ell);
                  ctx = make_context(mh, A, kappa, lod.map());
                  eb = best_approximation_error(lod, ref.u_fine, gram);
                } else {
                  cfg.space = SpaceKind::coarse_fem;
                  SpaceMap pm;
                  pm.mre = prolongation_matrix(*mh);
                  pm.from_id = coarse_space_id(*mh);
                  pm.to_id = fine_space_id(*mh);
                  ctx = make_context(mh, A, kappa, pm);
                }
                MinimizeResult res = minimize(ctx, cfg);
                ComplexField aligned = align_phase(res.u_fine, ref.u_fine, mass);
                eh = error_h1k(aligned, ref.u_fine, gram);
                el = error_h1k(aligned, ref.u_fine, mass);
                en = res.energy;
                iters = res.iters;
              } catch (const std::exception& e) {
                status = e.what();
                for (char& c : status)
                  if (c == ',' || c == '\n') c = ';';
              }
              csv << space << ',' << fmt(kappa) << ',' << fmt(beta) << ',' << ell << ','
                  << fmt(1.0 / (1 << ck)) << ',' << fmt(1.0 / (1 << sc.fine_k)) << ',' << seed
                  << ',' << fmt(eh) << ',' << fmt(el) << ',' << fmt(eb) << ',' << fmt(en) << ','
                  << iters << ',' << status << '\n';
            }
    }
  write_text(sc.out, csv.str());
  return 0;
}

int cmd_decay(const SweepConfig& sc) {
  sc.validate();
  Caches cache;
  const MagneticPotential A = default_potential();
  std::ostringstream csv;
  csv << config_comment(sc.to_json()) << '\n';
  csv << "kappa,beta,coarse_h,fine_h,ell,eps_h1k\n";
  int ell_max = 1;
  for (int l : sc.ells) ell_max = std::max(ell_max, l);
  const int ell_ref = ell_max + 5;
  for (double kappa : sc.kappas)
    for (double beta : sc.betas)
      for (int ck : sc.coarse_ks) {
        auto mh = cache.mh(ck, sc.fine_k);
        const FormOperator gram = assemble_h1k_gram(mh->fine(), kappa);
        const FormOperator mass = assemble_mass(mh->fine());
        MinimizeConfig cfg;
        cfg.space = SpaceKind::lod;
        cfg.kappa = kappa;
        cfg.beta = beta;
        cfg.coarse_k = ck;
        cfg.fine_k = sc.fine_k;
        cfg.seed = sc.seeds.front();
        cfg.delta = sc.delta;
        auto solve_at = [&](int ell) {
          const LodSpace& lod = cache.lod(mh, A, kappa, beta, ell);
          EnergyContext ctx = make_context(mh, A, kappa, lod.map());
          MinimizeConfig c = cfg;
          c.ell = ell;
          return minimize(ctx, c);
        };
        const MinimizeResult ref = solve_at(ell_ref);
        std::vector<std::pair<double, double>> rows;
        for (int ell : sc.ells) {
          if (ell >= ell_ref) continue;
          const MinimizeResult res = solve_at(ell);
          const ComplexField aligned = align_phase(res.u_fine, ref.u_fine, mass);
          const double eps = error_h1k(aligned, ref.u_fine, gram);
          rows.emplace_back(ell, eps);
          csv << fmt(kappa) << ',' << fmt(beta) << ',' << fmt(1.0 / (1 << ck)) << ','
              << fmt(1.0 / (1 << sc.fine_k)) << ',' << ell << ',' << fmt(eps) << '\n';
        }
        if (rows.size() >= 2) csv << "# fitted-rate=" << fmt(fit_decay(rows)) << '\n';
      }
  write_text(sc.out, csv.str());
  return 0;
}

int cmd_spectrum(const SweepConfig& sc, int k_eigs) {
  sc.validate();
  Caches cache;
  std::ostringstream csv;
  csv << config_comment(sc.to_json()) << '\n';
  csv << "kappa,energy";
  for (int i = 1; i <= k_eigs; ++i) csv << ",lambda_" << i;
  for (int i = 1; i <= k_eigs; ++i) csv << ",mu_" << i;
  csv << ",rho_inv,zero_mode_overlap,converged\n";
  std::vector<std::pair<double, double>> trend;
  for (double kappa : sc.kappas) {
    const MinimizeResult& ref = cache.fem_reference(kappa, sc.fine_k, sc.reference_seed(), sc.delta);
    auto mh = cache.mh(sc.fine_k - 1, sc.fine_k);
    EnergyContext ctx = make_context(mh, default_potential(), kappa,
                                     identity_map(fine_space_id(*mh)));
    const SpectrumReport rep = spectrum_at(ctx, ref.u_fine, k_eigs);
    csv << fmt(kappa) << ',' << fmt(ref.energy);
    for (int i = 0; i < k_eigs; ++i) csv << ',' << fmt(rep.l2_eigs[i]);
    for (int i = 0; i < k_eigs; ++i) csv << ',' << fmt(rep.h1k_eigs[i]);
    csv << ',' << fmt(rep.rho_inv) << ',' << fmt(rep.zero_mode_overlap) << ','
        << (rep.l2_converged && rep.h1k_converged ? 1 : 0) << '\n';
    trend.emplace_back(kappa, rep.rho_inv);
  }
  if (trend.size() >= 2) csv << "# trend-alpha=" << fmt(coercivity_trend(trend)) << '\n';
  write_text(sc.out, csv.str());
  return 0;
}

int cmd_best_approx(const SweepConfig& sc) {
  sc.validate();
  Caches cache;
  const MagneticPotential A = default_potential();
  std::ostringstream csv;
  csv << config_comment(sc.to_json()) << '\n';
  csv << "kappa,beta,ell,coarse_h,fine_h,err_best\n";
  for (double kappa : sc.kappas) {
    const MinimizeResult& ref = cache.fem_reference(kappa, sc.fine_k, sc.reference_seed(), sc.delta);
    auto mh_ref = cache.mh(sc.fine_k - 1, sc.fine_k);
    const FormOperator gram = assemble_h1k_gram(mh_ref->fine(), kappa);
    for (double beta : sc.betas)
      for (int ell : sc.ells)
        for (int ck : sc.coarse_ks) {
          auto mh = cache.mh(ck, sc.fine_k);
          const LodSpace& lod = cache.lod(mh, A, kappa, beta, ell);
          const double eb = best_approximation_error(lod, ref.u_fine, gram);
          csv << fmt(kappa) << ',' << fmt(beta) << ',' << ell << ',' << fmt(1.0 / (1 << ck))
              << ',' << fmt(1.0 / (1 << sc.fine_k)) << ',' << fmt(eb) << '\n';
        }
  }
  write_text(sc.out, csv.str());
  return 0;
}

int cmd_export_field(const std::string& in, const std::string& out, int n) {
  if (n < 2) throw CLI::ValidationError("--n", "grid size must be >= 2");
  const FieldFile f = read_field_file(in);
  const TriMesh mesh = build_structured_mesh(static_cast<int>(f.mesh_level));
  if (mesh.num_vertices() != f.field.size())
    throw std::runtime_error("field size does not match mesh level in header");
  std::ostringstream csv;
  csv << config_comment(json{{"in", in}, {"n", n}, {"metadata", f.metadata}}) << '\n';
  csv << "x,y,abs_u\n";
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 x(double(i) / (n - 1), double(j) / (n - 1));
      const int e = mesh.locate(x);
      const Eigen::Vector3d lam = mesh.barycentric(e, x);
      double re = 0, im = 0;
      for (int v = 0; v < 3; ++v) {
        re += lam[v] * f.field.re[mesh.triangles[e][v]];
        im += lam[v] * f.field.im[mesh.triangles[e][v]];
      }
      csv << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(std::hypot(re, im)) << '\n';
    }
  write_text(out, csv.str());
  return 0;
}

void add_sweep_flags(CLI::App* app, SweepConfig& sc, std::string& config_path) {
  app->add_option("--config", config_path, "JSON config file (flags override values)");
  app->add_option("--kappas", sc.kappas, "Ginzburg-Landau parameters");
  app->add_option("--betas", sc.betas, "stabilization parameters");
  app->add_option("--ells", sc.ells, "localization radii");
  app->add_option("--coarse-ks", sc.coarse_ks, "coarse levels (h = 2^-k)");
  app->add_option("--fine-k", sc.fine_k, "fine reference level");
  app->add_option("--seeds", sc.seeds, "initial-guess seeds");
  app->add_option("--delta", sc.delta, "energy stopping tolerance");
  app->add_option("--ref-seed", sc.ref_seed, "seed of the fine reference minimizer");
  app->add_option("--spaces", sc.spaces, "spaces to sweep: lod, coarse");
  app->add_option("--out,-o", sc.out, "output CSV path ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ginzburg-Landau minimization experiments (P1 FEM and LOD spaces)"};
  app.require_subcommand(1);

  // minimize
  auto* mz = app.add_subcommand("minimize", "compute one minimizer");
  double kappa = 0, beta = 0, delta = 1e-10;
  int ell = 4, coarse_k = 3, fine_k = 7;
  std::uint64_t seed = 1;
  std::string space = "fem", out_field;
  mz->add_option("--kappa", kappa, "Ginzburg-Landau parameter")->required();
  mz->add_option("--beta", beta, "stabilization parameter");
  mz->add_option("--ell", ell, "localization radius");
  mz->add_option("--coarse-k", coarse_k, "coarse level");
  mz->add_option("--fine-k", fine_k, "fine level");
  mz->add_option("--seed", seed, "initial-guess seed");
  mz->add_option("--delta", delta, "energy stopping tolerance");
  mz->add_option("--space", space, "fem | coarse | lod");
  mz->add_option("--out,-o", out_field, "output field file");

  SweepConfig conv_sc, decay_sc, spec_sc, best_sc;
  std::string conv_cfg, decay_cfg, spec_cfg, best_cfg;
  auto* cv = app.add_subcommand("convergence", "coarse-mesh error sweep against a fine reference");
  add_sweep_flags(cv, conv_sc, conv_cfg);
  auto* dc = app.add_subcommand("decay", "localization-radius error sweep");
  add_sweep_flags(dc, decay_sc, decay_cfg);
  auto* sp = app.add_subcommand("spectrum", "Hessian spectrum at fine minimizers");
  int k_eigs = 5;
  add_sweep_flags(sp, spec_sc, spec_cfg);
  sp->add_option("--k", k_eigs, "eigenvalues per pencil");
  auto* ba = app.add_subcommand("best-approx", "best-approximation errors of corrected spaces");
  add_sweep_flags(ba, best_sc, best_cfg);

  auto* ef = app.add_subcommand("export-field", "sample |u| on a uniform grid");
  std::string ef_in, ef_out;
  int ef_n = 256;
  ef->add_option("--in,-i", ef_in, "input field file")->required();
  ef->add_option("--out,-o", ef_out, "output CSV path ('-' for stdout)");
  ef->add_option("--n", ef_n, "grid points per side");

  try {
    // Config files are parsed first so explicit flags override their values.
    app.parse(argc, argv);
    auto load_cfg = [&](CLI::App* sub, SweepConfig& sc, const std::string& path,
                        int /*argc*/) {
      if (path.empty()) return;
      SweepConfig base;
      base.load(path);
      // Fields the user did not pass take the file's values.
      auto keep = [&](const char* name) { return sub->get_option(name)->count() > 0; };
      if (!keep("--kappas")) sc.kappas = base.kappas;
      if (!keep("--betas")) sc.betas = base.betas;
      if (!keep("--ells")) sc.ells = base.ells;
      if (!keep("--coarse-ks")) sc.coarse_ks = base.coarse_ks;
      if (!keep("--fine-k")) sc.fine_k = base.fine_k;
      if (!keep("--seeds")) sc.seeds = base.seeds;
      if (!keep("--delta")) sc.delta = base.delta;
      if (!keep("--ref-seed")) sc.ref_seed = base.ref_seed;
      if (!keep("--spaces")) sc.spaces = base.spaces;
      if (!keep("--out") && !base.out.empty()) sc.out = base.out;
    };
    load_cfg(cv, conv_sc, conv_cfg, argc);
    load_cfg(dc, decay_sc, decay_cfg, argc);
    load_cfg(sp, spec_sc, spec_cfg, argc);
    load_cfg(ba, best_sc, best_cfg, argc);

    if (mz->parsed())
      return cmd_minimize(kappa, beta, ell, coarse_k, fine_k, seed, delta, space, out_field);
    if (cv->parsed()) return cmd_convergence(conv_sc);
    if (dc->parsed()) return cmd_decay(decay_sc);
    if (sp->parsed()) return cmd_spectrum(spec_sc, k_eigs);
    if (ba->parsed()) return cmd_best_approx(best_sc);
    if (ef->parsed()) return cmd_export_field(ef_in, ef_out, ef_n);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
