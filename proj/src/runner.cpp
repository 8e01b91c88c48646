#include "absentia/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "absentia/hardy.hpp"
#include "absentia/identities.hpp"

namespace absentia {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json budget_json(const Budget& b) {
  return json{{"a1", b.a1}, {"a2", b.a2}, {"b", b.b},   {"b1", b.b1},
              {"b2", b.b2}, {"b3", b.b3}, {"b4", b.b4}, {"b5", b.b5},
              {"b6", b.b6}, {"epsilon", b.epsilon},     {"d", b.d},
              {"beta", b.beta}};
}

json certificate_json(const CertificationRun& run, const PolarGrid& grid) {
  json j;
  j["theorem_id"] = run.report.theorem_id;
  j["constants"] = budget_json(run.report.constants);
  j["budget_value"] = run.report.budget_value;
  j["margin"] = run.report.margin;
  j["verdict"] = verdict_name(run.report.verdict);
  json diag;
  diag["grid"] = {{"n_r", grid.n_r()},       {"n_theta", grid.n_theta()},
                  {"r_min", grid.r_min()},   {"r_max", grid.r_max()},
                  {"grading", grid.grading()}};
  json sweep = json::array();
  for (const SweepEntry& e : run.sweep)
    sweep.push_back(json{{"r_max", e.r_max},
                         {"n_r", e.n_r},
                         {"constants", budget_json(e.constants)},
                         {"converged", e.converged}});
  diag["sweep"] = sweep;
  diag["drift"] = json(run.drift);
  diag["provenance"] = json(run.provenance);
  diag["sweep_stable"] = run.sweep_stable;
  if (run.pointwise.applicable || !run.pointwise.note.empty()) {
    diag["pointwise"] = {{"applicable", run.pointwise.applicable},
                         {"sign", run.pointwise.sign},
                         {"note", run.pointwise.note}};
    json sups;
    for (const auto& [k, v] : run.pointwise.sups)
      sups[k] = std::isfinite(v) ? json(v) : json("inf");
    diag["pointwise"]["sups"] = sups;
  }
  if (run.theorem == TheoremId::nsa) {
    diag["obvious"] = {{"route", run.obvious.route},
                       {"holds", run.obvious.holds},
                       {"remark_pointwise", run.obvious.remark_pointwise},
                       {"variational_sup", run.obvious.variational_sup},
                       {"note", run.obvious.note}};
  }
  json solves;
  for (const auto& [name, s] : run.solver_diag)
    solves[name] = {{"value", s.value},
                    {"b_value", s.b_value},
                    {"iterations", s.iterations},
                    {"converged", s.converged},
                    {"residual", s.residual},
                    {"seed", s.seed}};
  diag["solves"] = solves;
  diag["notes"] = run.notes;
  j["diagnostics"] = diag;
  return j;
}

json run_certify_section(const ScenarioConfig& cfg, const SolveOptions& opts) {
  const RadialFieldProfile profile = build_field_profile(cfg.field);
  const std::optional<AngularFluxDensity> alpha = build_alpha(cfg.field);
  const PotentialModel pot =
      build_potential(cfg.potential, cfg.certify.decomposition);
  auto make_grid = [&](double r) { return build_grid(cfg.grid, cfg.field, r); };

  CertificationRun run = run_certification(
      cfg.certify.theorem, alpha ? nullptr : &profile,
      alpha ? &*alpha : nullptr, pot, make_grid, cfg.certify.sweep_radii, opts,
      cfg.certify.epsilon, cfg.certify.d);

  const PolarGrid grid = make_grid(cfg.certify.sweep_radii.back());
  json j = json::array();
  json cert = certificate_json(run, grid);
  cert["diagnostics"]["decomposition"] =
      resolved_decomposition(cfg.potential, cfg.certify.decomposition);
  j.push_back(cert);
  return j;
}

json run_spectrum_section(const ScenarioConfig& cfg, const SolveOptions& opts,
                          const RunOptions& ropts, json& csv_tables) {
  if (cfg.potential.im_type != ReType::none)
    throw std::runtime_error(
        "spectrum: complex V is not admitted for spectral search; the "
        "non-self-adjoint case is covered by budget certification only");
  const PotentialModel pot =
      build_potential(cfg.potential, cfg.certify.decomposition);
  const std::vector<double>& radii = cfg.certify.sweep_radii;

  json table = json::array();
  auto solve_at = [&](double r_max) {
    const PolarGrid grid = build_grid(cfg.grid, cfg.field, r_max);
    const VectorPotentialField a = build_vector_potential(cfg.field);
    const HermitianForm dir = assemble_dirichlet_form(a, grid);
    const WeightMass vmass = assemble_weight(
        [&](const Point& p) { return pot.re(p.r); }, grid, false);
    const HermitianForm h = hamiltonian_form(dir, vmass);
    const WeightMass mass = lumped_mass(grid);
    SpectralResult res = smallest_eigs(h, &mass, opts);
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
      table.push_back(json{{"r_max", r_max},
                           {"index", i},
                           {"eigenvalue", res.eigenvalues[i]},
                           {"residual", res.residual_norms[i]}});
    if (ropts.dump_matrix) {
      std::ostringstream name;
      name << "hamiltonian_rmax" << r_max << ".mtx";
      std::ofstream mtx(std::filesystem::path(ropts.out_dir) / name.str());
      h.write_matrix_market(mtx);
    }
    RadiusSample s;
    s.r_max = r_max;
    s.converged = res.converged;
    if (!res.eigenvalues.empty()) {
      s.lambda1 = res.eigenvalues.front();
      s.residual = res.residual_norms.front();
      s.participation_radius = participation_radius(res.eigenvectors.front());
    }
    return s;
  };

  json j;
  if (radii.size() >= 3) {
    StabilizationResult stab = stabilization_probe(solve_at, radii);
    json samples = json::array();
    for (const RadiusSample& s : stab.samples)
      samples.push_back(json{{"r_max", s.r_max},
                             {"lambda1", s.lambda1},
                             {"residual", s.residual},
                             {"participation_radius", s.participation_radius},
                             {"converged", s.converged}});
    j["stabilization"] = {
        {"samples", samples},
        {"verdict", stab.verdict == StabilizationVerdict::genuine ? "genuine"
                    : stab.verdict == StabilizationVerdict::artifact
                        ? "artifact"
                        : "withheld"},
        {"note", stab.note}};
  } else {
    for (double r : radii) solve_at(r);
    j["stabilization"] = {{"note", "needs >= 3 sweep radii"}};
  }
  j["eigenvalues"] = table;
  csv_tables["eigenvalues.csv"] = table;
  return j;
}

json probe_json(const HardyProbeResult& p) {
  return json{{"inequality_id", hardy_id_name(p.id)},
              {"computed_constant", p.computed_constant},
              {"reference_bound", p.reference_bound},
              {"tol_mesh", p.tol_mesh},
              {"satisfied", p.satisfied},
              {"skipped", p.skipped},
              {"converged", p.converged},
              {"truncation_raises_min", p.truncation_raises_min},
              {"note", p.note},
              {"grid", {{"n_r", p.n_r},
                        {"n_theta", p.n_theta},
                        {"r_min", p.r_min},
                        {"r_max", p.r_max},
                        {"grading", p.grading}}}};
}

json run_hardy_section(const ScenarioConfig& cfg, const SolveOptions& opts,
                       json& csv_tables) {
  HardyOptions hopts;
  hopts.solve = opts;
  json probes = json::array();

  if (cfg.field.type == FieldType::ab) {
    const AngularFluxDensity alpha = *build_alpha(cfg.field);
    const PolarGrid grid = build_grid(cfg.grid, cfg.field);
    if (alpha.flux_distance() > 0.0)
      probes.push_back(probe_json(ab_probe(alpha, grid, hopts)));
    probes.push_back(probe_json(ab_weighted_probe(alpha, grid, hopts)));
    HardyProbeResult circ;
    circ.id = HardyId::circle;
    circ.computed_constant = circle_eigenvalue(alpha, 256);
    circ.reference_bound =
        alpha.flux_distance() * alpha.flux_distance();
    circ.tol_mesh = 0.0;
    circ.satisfied = std::abs(circ.computed_constant - circ.reference_bound) <=
                     1e-6;
    probes.push_back(probe_json(circ));
  } else {
    const RadialFieldProfile field = build_field_profile(cfg.field);
    const PolarGrid grid = build_grid(cfg.grid, cfg.field);
    probes.push_back(probe_json(lw_probe(field, grid, hopts)));
    probes.push_back(probe_json(ck_probe(field, grid, CkWeight::log_weight, hopts)));
    probes.push_back(probe_json(ck_probe(field, grid, CkWeight::plain_weight, hopts)));
    const PolarGrid disk(0.0, 1.0, cfg.grid.n_r, cfg.grid.n_theta, 2.0);
    probes.push_back(probe_json(hp_disk_probe(1.0, disk, hopts)));
    const PolarGrid wide(0.0, cfg.grid.r_max, cfg.grid.n_r,
                         std::min(cfg.grid.n_theta, 32), 2.0);
    probes.push_back(probe_json(weighted_classical_probe(2, &wide, hopts)));
  }

  json table = json::array();
  for (const json& p : probes)
    table.push_back(json{{"probe_id", p["inequality_id"]},
                         {"constant", p["computed_constant"]},
                         {"bound", p["reference_bound"]}});
  csv_tables["hardy.csv"] = table;
  return probes;
}

json residual_json(const IdentityResidual& r) {
  json terms = json::array();
  for (const IdentityTerm& t : r.terms)
    terms.push_back(json{{"name", t.name}, {"value", t.value}});
  return json{{"identity", r.identity},
              {"terms", terms},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"abs_residual", r.abs_residual},
              {"rel_residual", r.rel_residual},
              {"n_quad", r.n_quad}};
}

json run_identities_section(const ScenarioConfig&) {
  json out = json::array();
  const RadialQuadrature fine(4096);
  struct Case {
    std::string name;
    ManufacturedEigenpair pair;
  };
  const std::vector<Case> cases = {
      {"oscillator", ManufacturedEigenpair(gaussian_profile(),
                                           RadialFieldProfile::zero(), 0.0)},
      {"magnetic_b0.5", ManufacturedEigenpair(
                            gaussian_profile(), RadialFieldProfile::constant(0.5),
                            0.0)},
      {"angular_m1", ManufacturedEigenpair(gaussian_profile(1.0, 1),
                                           RadialFieldProfile::zero(), 0.0)}};

  for (const Case& c : cases) {
    json jc;
    jc["pair"] = c.name;
    jc["lambda"] = c.pair.lambda();
    jc["angular_momentum"] = c.pair.m();
    jc["equation_residual"] = c.pair.max_equation_residual(8.0);
    json rs = json::array();
    rs.push_back(residual_json(residual_G1(c.pair, G1Choice::one(), fine)));
    rs.push_back(residual_json(residual_G1(c.pair, G1Choice::radial_r(), fine)));
    rs.push_back(residual_json(residual_G2(c.pair, G1Choice::radial_r(), fine)));
    rs.push_back(residual_json(residual_G3(c.pair, fine)));
    for (auto choice : {DecompChoice::all_v1, DecompChoice::all_v2, DecompChoice::split}) {
      const PotentialModel dec = decompose(c.pair, choice, 1.0);
      IdentityResidual r = residual_crucial_ss(c.pair, dec, fine);
      r.identity += choice == DecompChoice::all_v1   ? "[all_v1]"
                    : choice == DecompChoice::all_v2 ? "[all_v2]"
                                                     : "[split@1]";
      rs.push_back(residual_json(r));
    }
    jc["residuals"] = rs;

    // refinement orders for the G1(one) residual
    ConvergenceStudy st = refinement_study(
        [&](const RadialQuadrature& q) {
          return residual_G1(c.pair, G1Choice::one(), q);
        },
        {512, 1024, 2048, 4096});
    jc["g1_refinement"] = {{"ns", st.ns},
                          {"residuals", st.residuals},
                          {"orders", st.orders}};
    out.push_back(jc);
  }

  // complex-lambda bracket, reported quantities only (no residual contract)
  const ManufacturedEigenpair osc(gaussian_profile(), RadialFieldProfile::zero(), 0.0);
  json bracket = json::array();
  for (const IdentityTerm& t :
       bracket_terms_report(osc, cplx(4.0, 1.0), fine))
    bracket.push_back(json{{"name", t.name}, {"value", t.value}});
  json result;
  result["pairs"] = out;
  result["complex_lambda_bracket"] = {{"lambda", {4.0, 1.0}},
                                      {"terms", bracket}};
  return result;
}

}  // namespace

json build_report(Command cmd, const ScenarioConfig& cfg_in,
                  const RunOptions& opts) {
  const Clock::time_point t0 = Clock::now();
  ScenarioConfig cfg = cfg_in;
  if (opts.seed_override) cfg.solver.seed = *opts.seed_override;
  const SolveOptions sopts = solve_options(cfg.solver);

  json report;
  report["schema_version"] = cfg.schema_version;
  report["toolkit_version"] = kToolkitVersion;
  report["command"] = command_name(cmd);
  report["seed"] = cfg.solver.seed;
  json scenario;
  for (const auto& [k, v] : cfg.echo()) scenario[k] = v;
  report["scenario"] = scenario;

  json timings;
  json csv_tables;
  const bool all = cmd == Command::all;

  if (all || cmd == Command::certify) {
    const Clock::time_point t = Clock::now();
    report["certificates"] = run_certify_section(cfg, sopts);
    timings["certify_s"] = seconds_since(t);
  }
  if (all || cmd == Command::spectrum) {
    const Clock::time_point t = Clock::now();
    RunOptions ro = opts;
    if (ro.out_dir.empty()) ro.out_dir = cfg.output.dir;
    report["spectra"] = run_spectrum_section(cfg, sopts, ro, csv_tables);
    timings["spectrum_s"] = seconds_since(t);
  }
  if (all || cmd == Command::hardy) {
    const Clock::time_point t = Clock::now();
    report["hardy_probes"] = run_hardy_section(cfg, sopts, csv_tables);
    timings["hardy_s"] = seconds_since(t);
  }
  if (all || cmd == Command::identities) {
    const Clock::time_point t = Clock::now();
    report["identity_residuals"] = run_identities_section(cfg);
    timings["identities_s"] = seconds_since(t);
  }

  report["csv_tables"] = csv_tables;
  timings["total_s"] = seconds_since(t0);
  report["timings"] = timings;
  return report;
}

std::string write_outputs(const json& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);

  if (report.contains("csv_tables")) {
    for (const auto& [name, rows] : report["csv_tables"].items()) {
      std::ofstream csv(base / name, std::ios::binary);
      if (!rows.empty()) {
        std::string header;
        for (const auto& [col, _] : rows.front().items())
          header += (header.empty() ? "" : ",") + col;
        csv << header << "\n";
        for (const json& row : rows) {
          std::string line;
          for (const auto& [_, val] : row.items()) {
            if (!line.empty()) line += ",";
            line += val.is_string() ? val.get<std::string>() : val.dump();
          }
          csv << line << "\n";
        }
      }
    }
  }

  const fs::path path = base / "report.json";
  std::ofstream out(path, std::ios::binary);
  out << report.dump(2) << "\n";
  return path.string();
}

void print_summary(const json& report, std::ostream& os) {
  os << "absentia " << report["toolkit_version"].get<std::string>() << "  command="
     << report["command"].get<std::string>() << "  seed=" << report["seed"] << "\n";
  if (report.contains("certificates"))
    for (const json& c : report["certificates"]) {
      os << "certificate " << c["theorem_id"].get<std::string>()
         << ": verdict=" << c["verdict"].get<std::string>()
         << " budget=" << c["budget_value"] << " margin=" << c["margin"] << "\n";
      const json& cons = c["constants"];
      os << "  constants: b=" << cons["b"] << " b1=" << cons["b1"]
         << " b2=" << cons["b2"] << " b3=" << cons["b3"] << " b4=" << cons["b4"]
         << " a2=" << cons["a2"] << "\n";
    }
  if (report.contains("spectra") && report["spectra"].contains("stabilization")) {
    const json& st = report["spectra"]["stabilization"];
    if (st.contains("verdict"))
      os << "stabilization: " << st["verdict"].get<std::string>() << " ("
         << st["note"].get<std::string>() << ")\n";
  }
  if (report.contains("hardy_probes"))
    for (const json& p : report["hardy_probes"])
      os << "hardy " << p["inequality_id"].get<std::string>() << ": constant="
         << p["computed_constant"] << " bound=" << p["reference_bound"]
         << (p["satisfied"].get<bool>() ? " ok" : " VIOLATED") << "\n";
  if (report.contains("identity_residuals"))
    for (const json& pr : report["identity_residuals"]["pairs"])
      for (const json& r : pr["residuals"])
        os << "identity " << pr["pair"].get<std::string>() << " "
           << r["identity"].get<std::string>()
           << ": rel_residual=" << r["rel_residual"] << "\n";
}

}  // namespace absentia
