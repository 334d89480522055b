// wellpose: command-line front end.
//
// Exit codes: 0 ok, 1 property failure, 2 usage/instance error,
// 3 internal invariant breach, 4 budget exhaustion.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wellpose/wellpose.hpp"

namespace fs = std::filesystem;
using namespace wellpose;
using io::json;

namespace {

enum Exit { ok = 0, property_failure = 1, usage = 2, invariant = 3, budget = 4 };

struct RunConfig {
  std::string instance;
  std::string out = ".";
  double eps = 0.0;
  std::vector<double> eps_grid;
  std::vector<double> delta_grid;
  std::uint64_t seed = 0;
  std::optional<double> mesh;
  std::optional<std::size_t> n_target;
  std::optional<double> eps_total;
  std::size_t x_steps = 999;
  std::size_t p_steps = 100;
  bool inject_fault = false;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InstanceError("cannot write " + path.string());
  f << text;
}

fs::path out_dir(const RunConfig& c) {
  fs::path d(c.out);
  fs::create_directories(d);
  return d;
}

int cmd_vime(const RunConfig& c) {
  if (!(c.eps > 0.0 && c.eps < 0.5)) {
    std::cerr << "vime: --eps must lie in (0, 1/2)\n";
    return usage;
  }
  const ParametricFamily fam = vime_family(c.x_steps, c.p_steps);
  const SelectionGapReport rep = no_continuous_selection_demo(fam, c.eps);
  const fs::path dir = out_dir(c);
  write_file(dir / "vime_claims.json", io::to_json(rep).dump(2) + "\n");
  std::string table = "p,left_max,right_min,middle_count\n";
  const double kp = static_cast<double>(c.p_steps), kx = static_cast<double>(c.x_steps);
  for (const auto& row : rep.rows) {
    table += io::format_double(static_cast<double>(row.p) / kp) + ',';
    table += (row.left_max ? io::format_double(static_cast<double>(*row.left_max) / kx) : std::string()) + ',';
    table += (row.right_min ? io::format_double(static_cast<double>(*row.right_min) / kx) : std::string()) + ',';
    table += std::to_string(row.middle_count) + '\n';
  }
  write_file(dir / "vime_gap.csv", table);
  std::cout << "Omega_{f_0}(eps) in [0,1/3]: " << (rep.f0_in_left ? "PASS" : "FAIL") << '\n'
            << "Omega_{f_1}(eps) in [2/3,1]: " << (rep.f1_in_right ? "PASS" : "FAIL") << '\n'
            << "Omega_{f_p}(eps) misses (1/3,2/3): " << (rep.middle_empty ? "PASS" : "FAIL") << '\n';
  return rep.all_hold() ? ok : property_failure;
}

int cmd_modulus(const RunConfig& c) {
  const ParametricFamily fam = io::family_from_json(io::load_json_file(c.instance));
  std::vector<double> grid = c.eps_grid;
  if (grid.empty()) {
    grid = geometric_grid(1.0, 16);
    std::reverse(grid.begin(), grid.end());
  }
  const fs::path dir = out_dir(c);
  for (std::size_t p = 0; p < fam.param_count(); ++p) {
    const ModulusCurve curve = wellposedness_modulus(fam.member(p), grid);
    write_file(dir / ("modulus_p" + std::to_string(p) + ".csv"), io::modulus_csv(curve));
  }
  std::cout << "wrote " << fam.param_count() << " modulus curves\n";
  return ok;
}

int cmd_perturb(const RunConfig& c) {
  if (!(c.eps > 0.0)) {
    std::cerr << "perturb: --eps must be positive\n";
    return usage;
  }
  const json j = io::load_json_file(c.instance);
  const SpaceRef space = io::space_from_json(io::detail::get<json>(j, "space"));
  const ObjectiveFunction f = io::objective_from_json(space, io::detail::get<json>(j, "f"));
  const PerturbationFunction g =
      j.contains("g") ? io::perturbation_from_json(space, j.at("g")) : PerturbationFunction::zero(space);
  const DensityStepResult step = buc_density_step(f, g, c.eps);
  // replay from the emitted g' alone
  const double diam_replay = diam(argmin_set(f + step.g_prime, step.delta));
  const double moved_replay = sup_distance(step.g_prime, g);
  if (diam_replay != step.achieved_diam || moved_replay > c.eps || !(step.achieved_diam <= c.eps) || c.inject_fault) {
    std::cerr << "perturb: replay mismatch\n";
    return invariant;
  }
  write_file(out_dir(c) / "perturb.json", io::to_json(step).dump(2) + "\n");
  std::cout << "anchor " << step.anchor << ", delta " << io::format_double(step.delta) << ", diam "
            << io::format_double(step.achieved_diam) << '\n';
  return ok;
}

int cmd_steckin(const RunConfig& c) {
  const json j = io::load_json_file(c.instance);
  const Seminorm base = io::seminorm_from_json(io::detail::get<json>(j, "base"));
  const Seminorm nu0 = j.contains("nu0") ? io::seminorm_from_json(j.at("nu0")) : base;
  const ConvexBody body = io::body_from_json(io::detail::get<json>(j, "body"));
  const auto W = io::detail::get<std::vector<std::vector<double>>>(j, "witnesses");
  const double mesh = c.mesh.value_or(io::detail::get_or<double>(j, "mesh", 1e-3));
  const double eps_total = c.eps_total.value_or(io::detail::get_or<double>(j, "eps_total", 0.3));
  const std::size_t n_target = c.n_target.value_or(io::detail::get_or<std::size_t>(j, "n_target", 5));
  std::vector<double> delta_grid = c.delta_grid;
  if (delta_grid.empty()) delta_grid = io::detail::get_or<std::vector<double>>(j, "delta_grid", {});
  if (body.dim() != base.dim() || nu0.dim() != base.dim()) throw InstanceError("steckin: dimension mismatch");

  const NormedSetting setting = NormedSetting::make(base, mesh);
  const RenormReport rep = baire_renorm(nu0, body, W, eps_total, n_target, setting, delta_grid);
  const fs::path dir = out_dir(c);
  write_file(dir / "ledger.json", io::to_json(rep).dump(2) + "\n");
  if (rep.status == RenormStatus::budget_exhausted) {
    std::cerr << "steckin: budget exhausted: " << rep.message << '\n';
    return budget;
  }
  // replay every emitted modulus against a fresh evaluation of the final norm
  for (std::size_t w = 0; w < W.size(); ++w) {
    const PointModulus& pm = rep.moduli[w];
    const ProjectionReport again = metric_projection(rep.nu_final, body, W[w], pm.projection.delta_grid, setting);
    if (again.diam_values != pm.projection.diam_values || !pm.ok) throw InvariantError("steckin: modulus replay mismatch");
    write_file(dir / ("modulus_w" + std::to_string(w) + ".csv"), io::projection_csv(pm.projection));
  }
  if (!(rep.move_bound <= eps_total)) throw InvariantError("steckin: total move exceeds eps_total");
  write_file(dir / "nu_final.json", io::seminorm_to_json(rep.nu_final).dump(2) + "\n");
  std::cout << "well-posed at " << W.size() << " witnesses; move <= " << io::format_double(rep.move_bound)
            << ", a_nu >= " << io::format_double(rep.a_final.lower) << '\n';
  return ok;
}

int cmd_verify(const RunConfig& c) {
  if (!c.instance.empty()) {
    // any instance kind: the file must at least parse as one of them
    const json j = io::load_json_file(c.instance);
    if (j.contains("kind")) (void)io::family_from_json(j);
    else if (j.contains("body")) (void)io::body_from_json(j.at("body"));
    else if (j.contains("space")) (void)io::space_from_json(j.at("space"));
    else throw InstanceError("verify: unrecognized instance");
  }
  const SuiteReport rep = run_invariant_suite(c.seed, c.inject_fault);
  for (const auto& chk : rep.checks)
    std::cout << (chk.pass ? "PASS " : "FAIL ") << chk.name << (chk.detail.empty() ? "" : ": " + chk.detail) << '\n';
  json out = json::array();
  for (const auto& chk : rep.checks) out.push_back({{"name", chk.name}, {"pass", chk.pass}, {"detail", chk.detail}});
  write_file(out_dir(c) / "verify.json", out.dump(2) + "\n");
  return rep.all_pass() ? ok : property_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wellpose: well-posedness certificates and renorming experiments"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for sampling");
  };

  auto* vime = app.add_subcommand("vime", "three-piece family: set claims and gap table");
  vime->add_option("--eps", cfg.eps, "eps in (0, 1/2)")->required();
  vime->add_option("--steps", cfg.x_steps, "x grid steps");
  vime->add_option("--p-steps", cfg.p_steps, "parameter grid steps");
  add_common(vime);

  auto* modulus = app.add_subcommand("modulus", "per-parameter modulus curves as CSV");
  modulus->add_option("--instance", cfg.instance, "family JSON")->required();
  modulus->add_option("--eps-grid", cfg.eps_grid, "increasing eps grid")->delimiter(',');
  add_common(modulus);

  auto* perturb = app.add_subcommand("perturb", "one density step, replay-verified");
  perturb->add_option("--instance", cfg.instance, "objective JSON")->required();
  perturb->add_option("--eps", cfg.eps, "eps > 0")->required();
  perturb->add_flag("--inject-fault", cfg.inject_fault, "test hook: force a replay mismatch");
  add_common(perturb);

  auto* steckin = app.add_subcommand("steckin", "iterated renorming over a witness set");
  steckin->add_option("--instance", cfg.instance, "setting JSON")->required();
  steckin->add_option("--delta-grid", cfg.delta_grid, "decreasing delta grid")->delimiter(',');
  steckin->add_option("--mesh", cfg.mesh, "sphere mesh target");
  steckin->add_option("--n-target", cfg.n_target, "diameter target 1/n");
  steckin->add_option("--eps-total", cfg.eps_total, "total move budget");
  add_common(steckin);

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--instance", cfg.instance, "optional instance to validate");
  verify->add_flag("--inject-fault", cfg.inject_fault, "test hook: add a false claim");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*vime) return cmd_vime(cfg);
    if (*modulus) return cmd_modulus(cfg);
    if (*perturb) return cmd_perturb(cfg);
    if (*steckin) return cmd_steckin(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return invariant;
  } catch (const InstanceError& e) {
    std::cerr << "instance error: " << e.what() << '\n';
    return usage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return invariant;
  }
  return usage;
}
