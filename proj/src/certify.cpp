#include "absentia/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace absentia {

namespace {

constexpr double kStrict = 1e-9;  // budget < 1 as budget <= 1 - kStrict
constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_unit_range(double c) { return c >= 0.0 && c < 1.0; }

double constant_from(const SubordinationConstant& s) { return s.b_value; }

SubordinationConstant solve_weight(const std::function<double(const Point&)>& w,
                                   const HermitianForm& form,
                                   const SolveOptions& opts) {
  return sup_rayleigh(assemble_weight(w, form.grid(), true), form, opts);
}

void require_range(const std::string& name, double c, CertificateReport& rep,
                   bool& ok) {
  if (!in_unit_range(c)) {
    ok = false;
    std::ostringstream os;
    os << name << " = " << c << " outside [0, 1)";
    rep.notes.push_back(os.str());
  }
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::not_certified: return "not_certified";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "?";
}

std::string theorem_name(TheoremId t) {
  switch (t) {
    case TheoremId::thm1: return "Thm1";
    case TheoremId::multi: return "Thm2_budget";
    case TheoremId::nsa: return "Thm3_nsa";
    case TheoremId::robust: return "Thm4_robust";
    case TheoremId::ab: return "Thm5_AB";
  }
  return "?";
}

Budget constants_thm1(const VectorPotentialField& a,
                      const RadialFieldProfile& field, const PotentialModel& v,
                      const PolarGrid& grid, const SolveOptions& opts,
                      std::map<std::string, SubordinationConstant>* diag) {
  const HermitianForm form = assemble_dirichlet_form(a, grid);
  Budget out;
  auto run = [&](const char* name, const std::function<double(const Point&)>& w) {
    SubordinationConstant s = solve_weight(w, form, opts);
    if (diag) (*diag)[name] = s;
    return constant_from(s);
  };
  out.b = run("b", [&](const Point& p) { return v.w_v_minus(p.r); });
  out.b1 = run("b1", [&](const Point& p) {
    const double bb = field(p.r);
    return 4.0 * p.r * p.r * bb * bb;
  });
  out.b2 = run("b2", [&](const Point& p) { return v.w_dr_rv1_plus(p.r); });
  out.b3 = run("b3", [&](const Point& p) { return v.w_abs_v2(p.r); });
  out.b4 = run("b4", [&](const Point& p) { return v.w_4r2_v2sq(p.r); });
  return out;
}

Budget constants_nsa(const VectorPotentialField& a,
                     const RadialFieldProfile& field, const PotentialModel& v,
                     const PolarGrid& grid, const SolveOptions& opts,
                     std::map<std::string, SubordinationConstant>* diag) {
  Budget out = constants_thm1(a, field, v, grid, opts, diag);
  const HermitianForm form = assemble_dirichlet_form(a, grid);
  auto run = [&](const char* name, const std::function<double(const Point&)>& w) {
    SubordinationConstant s = solve_weight(w, form, opts);
    if (diag) (*diag)[name] = s;
    return constant_from(s);
  };
  out.a1 = run("a1", [&](const Point& p) { return v.w_v_minus(p.r); });
  out.a2 = run("a2", [&](const Point& p) { return v.w_abs_im(p.r); });
  // the display of the fifth condition prints 4 r^2 |Im V| while the Schwarz
  // step uses 4 r^2 |Im V|^2; both are computed and the stricter (larger)
  // value drives the verdict
  const double b5_sq =
      run("b5_schwarz", [&](const Point& p) { return v.w_4r2_imsq(p.r); });
  const double b5_disp =
      run("b5_display", [&](const Point& p) { return v.w_4r2_im(p.r); });
  out.b5 = std::max(b5_sq, b5_disp);
  out.b6 = run("b6", [&](const Point& p) { return v.w_r2_reminus_sq(p.r); });
  return out;
}

CertificateReport check_budget_thm1(const Budget& budget) {
  CertificateReport rep;
  rep.theorem_id = theorem_name(TheoremId::thm1);
  rep.constants = budget;
  rep.budget_value = budget.b1 + budget.b2 * budget.b2 +
                     budget.b3 * budget.b3 + budget.b4;
  rep.margin = 1.0 - rep.budget_value;
  bool ok = rep.budget_value <= 1.0 - kStrict;
  if (!ok) rep.notes.push_back("budget b1 + b2^2 + b3^2 + b4 not < 1");
  require_range("b", budget.b, rep, ok);
  require_range("b1", budget.b1, rep, ok);
  require_range("b2", budget.b2, rep, ok);
  require_range("b3", budget.b3, rep, ok);
  require_range("b4", budget.b4, rep, ok);
  rep.verdict = ok ? Verdict::certified : Verdict::not_certified;
  return rep;
}

CertificateReport check_budget_multi(int d, const Budget& budget) {
  if (d < 1) throw std::invalid_argument("check_budget_multi: d must be >= 1");
  CertificateReport rep;
  rep.theorem_id = theorem_name(TheoremId::multi);
  rep.constants = budget;
  rep.constants.d = d;
  rep.budget_value = budget.b1 + budget.b2 * budget.b2 +
                     (d - 1) * budget.b3 * budget.b3 + budget.b4;
  rep.margin = 1.0 - rep.budget_value;
  bool ok = rep.budget_value <= 1.0 - kStrict;
  if (!ok)
    rep.notes.push_back("budget b1 + b2^2 + (d-1) b3^2 + b4 not < 1");
  require_range("b", budget.b, rep, ok);
  require_range("b1", budget.b1, rep, ok);
  require_range("b2", budget.b2, rep, ok);
  require_range("b3", budget.b3, rep, ok);
  require_range("b4", budget.b4, rep, ok);
  rep.verdict = ok ? Verdict::certified : Verdict::not_certified;
  return rep;
}

ObviousCheck check_obvious_condition(const VectorPotentialField& a,
                                     const PotentialModel& v,
                                     const PolarGrid& grid,
                                     const SolveOptions& opts) {
  ObviousCheck out;
  out.rev_plus_pointwise = true;
  out.remark_pointwise = true;
  for (int idx : grid.interior_nodes()) {
    const double r = grid.point(idx).r;
    const double bound = 1.0 / (4.0 * r * r);
    if (v.re_plus(r) < bound) out.rev_plus_pointwise = false;
    if (v.re(r) < bound) out.remark_pointwise = false;
    if (!out.rev_plus_pointwise && !out.remark_pointwise) break;
  }
  if (out.rev_plus_pointwise) {
    out.holds = true;
    out.route = "pointwise_shortcut";
    out.note =
        "Re V_+ >= 1/(4r^2) at all weighted nodes; note that such potentials "
        "are not in L^1(R^2) at infinity, the check proceeds on the truncated "
        "domain";
    return out;
  }
  // variational route: sup of 1/(2r) against int r |grad_A psi|^2 + r ReV_+
  const HermitianForm grad_r =
      assemble_dirichlet_form(a, grid, [](double r) { return r; });
  const WeightMass vplus = assemble_weight(
      [&](const Point& p) { return p.r * v.re_plus(p.r); }, grid, true);
  const HermitianForm form = hamiltonian_form(grad_r, vplus);
  const WeightMass half_over_r = assemble_weight(
      [](const Point& p) { return 0.5 / p.r; }, grid, true);
  SubordinationConstant s = sup_rayleigh(half_over_r, form, opts);
  out.variational_sup = s.value;
  out.variational_holds = s.converged && s.value <= 1.0;
  out.holds = out.variational_holds;
  out.route = out.holds ? "variational" : "fails";
  if (!s.converged) out.note = "variational solve did not converge";
  return out;
}

CertificateReport check_budget_nsa(const Budget& budget,
                                   const ObviousCheck& obvious) {
  CertificateReport rep;
  rep.theorem_id = theorem_name(TheoremId::nsa);
  rep.constants = budget;
  Budget b = budget;
  if (obvious.remark_pointwise) {
    b.b5 = 0.0;
    b.b6 = 0.0;
    rep.notes.push_back(
        "Re V >= 1/(4r^2) pointwise: last-line conditions dropped, b5 = b6 = 0");
    rep.constants = b;
  }
  rep.budget_value = b.b1 + b.b2 * b.b2 + b.b3 * b.b3 + b.b4 + b.b5 + b.b6 * b.a2;
  rep.margin = 1.0 - rep.budget_value;
  bool ok = rep.budget_value <= 1.0 - kStrict;
  if (!ok)
    rep.notes.push_back("budget b1 + b2^2 + b3^2 + b4 + b5 + b6 a2 not < 1");
  if (!obvious.holds && !obvious.remark_pointwise) {
    ok = false;
    rep.notes.push_back("precondition on the bracket fails");
  }
  require_range("a1", b.a1, rep, ok);
  require_range("a2", b.a2, rep, ok);
  require_range("b1", b.b1, rep, ok);
  require_range("b2", b.b2, rep, ok);
  require_range("b3", b.b3, rep, ok);
  require_range("b4", b.b4, rep, ok);
  require_range("b5", b.b5, rep, ok);
  require_range("b6", b.b6, rep, ok);
  rep.verdict = ok ? Verdict::certified : Verdict::not_certified;
  return rep;
}

CertificateReport check_budget_robust(Budget budget,
                                      std::optional<double> epsilon) {
  CertificateReport rep;
  rep.theorem_id = theorem_name(TheoremId::robust);
  double eps;
  if (epsilon) {
    eps = *epsilon;
  } else if (budget.a2 > 0.0) {
    eps = std::clamp(0.5 * std::sqrt(17.0) * budget.a2, 1e-9, 1.0 - kStrict);
    rep.notes.push_back("epsilon auto-chosen as (sqrt(17)/2) a2");
  } else {
    eps = 1e-6;
    rep.notes.push_back("a2 = 0: epsilon set to 1e-6");
  }
  budget.epsilon = eps;
  rep.constants = budget;
  bool ok = true;
  if (!(eps > 0.0 && eps < 1.0)) {
    ok = false;
    rep.notes.push_back("epsilon outside (0, 1)");
  }
  const double penalty =
      eps > 0.0 ? 17.0 * budget.a2 * budget.a2 / eps + 4.0 * eps : kInf;
  rep.budget_value = budget.b1 + budget.b2 * budget.b2 + budget.b3 * budget.b3 +
                     budget.b4 + budget.b5 + budget.b6 * budget.a2 + penalty;
  rep.margin = 1.0 - rep.budget_value;
  if (!(rep.budget_value <= 1.0 - kStrict)) {
    ok = false;
    rep.notes.push_back("robust budget not < 1");
  }
  require_range("a1", budget.a1, rep, ok);
  require_range("a2", budget.a2, rep, ok);
  require_range("b1", budget.b1, rep, ok);
  require_range("b2", budget.b2, rep, ok);
  require_range("b3", budget.b3, rep, ok);
  require_range("b4", budget.b4, rep, ok);
  require_range("b5", budget.b5, rep, ok);
  require_range("b6", budget.b6, rep, ok);
  rep.verdict = ok ? Verdict::certified : Verdict::not_certified;
  return rep;
}

CertificateReport check_budget_ab(double beta, Budget budget,
                                  std::optional<double> epsilon) {
  CertificateReport rep;
  rep.theorem_id = theorem_name(TheoremId::ab);
  rep.constants = budget;
  rep.constants.beta = beta;
  if (!(beta > 0.0)) {
    rep.verdict = Verdict::inapplicable;
    rep.notes.push_back("beta = 0: flux is an integer, theorem inapplicable");
    return rep;
  }
  if (budget.b1 != 0.0)
    rep.notes.push_back(
        "field term interpreted as zero for the AB potential; b1 ignored");
  double eps;
  if (epsilon) {
    eps = *epsilon;
  } else if (budget.a2 > 0.0) {
    eps = std::clamp(budget.a2 / beta, 1e-9, 1.0 - kStrict);
    rep.notes.push_back("epsilon auto-chosen as a2/beta");
  } else {
    eps = 1e-6;
    rep.notes.push_back("a2 = 0: epsilon set to 1e-6");
  }
  rep.constants.epsilon = eps;
  bool ok = true;
  if (!(eps > 0.0 && eps < 1.0)) {
    ok = false;
    rep.notes.push_back("epsilon outside (0, 1)");
  }
  const double gap = 0.25 - beta * beta;
  rep.budget_value = budget.b2 * budget.b2 + budget.b3 * budget.b3 + budget.b4 +
                     budget.b5 + budget.b6 * budget.a2 + gap * eps +
                     gap * budget.a2 * budget.a2 / (beta * beta * eps);
  rep.margin = 1.0 - rep.budget_value;
  if (!(rep.budget_value <= 1.0 - kStrict)) {
    ok = false;
    rep.notes.push_back("AB budget not < 1");
  }
  require_range("a1", budget.a1, rep, ok);
  require_range("a2", budget.a2, rep, ok);
  require_range("b2", budget.b2, rep, ok);
  require_range("b3", budget.b3, rep, ok);
  require_range("b4", budget.b4, rep, ok);
  require_range("b5", budget.b5, rep, ok);
  require_range("b6", budget.b6, rep, ok);
  rep.verdict = ok ? Verdict::certified : Verdict::not_certified;
  return rep;
}

PointwiseBounds pointwise_sufficient(const RadialFieldProfile& field,
                                     const PotentialModel& v,
                                     const PolarGrid& grid) {
  PointwiseBounds out;
  // sample radii: grid levels plus a dense sweep of each field piece,
  // endpoints nudged inward so one-sided values of step fields are seen
  std::set<double> radii;
  for (int k = 0; k < grid.n_levels(); ++k) radii.insert(grid.level_radius(k));
  for (const PolyPiece& p : field.pieces()) {
    const double hi = std::isfinite(p.hi) ? p.hi : grid.r_max();
    for (int i = 0; i <= 256; ++i) {
      double r = p.lo + (hi - p.lo) * i / 256.0;
      r = std::min(std::max(r, p.lo + 1e-12), hi - 1e-12);
      radii.insert(r);
    }
  }

  struct Named {
    const char* name;
    std::function<double(double)> numer;
  };
  const std::vector<Named> weights = {
      {"b", [&](double r) { return v.w_v_minus(r); }},
      {"b1", [&](double r) { const double bb = field(r); return 4 * r * r * bb * bb; }},
      {"b2", [&](double r) { return v.w_dr_rv1_plus(r); }},
      {"b3", [&](double r) { return v.w_abs_v2(r); }},
      {"b4", [&](double r) { return v.w_4r2_v2sq(r); }}};

  double best_score = kInf;
  int best_sign = +1;
  std::map<std::string, double> best_sups;
  for (int sign : {+1, -1}) {
    std::map<std::string, double> sups;
    double score = 0.0;
    for (const Named& w : weights) {
      double sup = 0.0;
      for (double r : radii) {
        const double num = w.numer(r);
        if (num <= 0.0) continue;
        const double den = sign * field(r);
        if (den <= 0.0) {
          sup = kInf;
          break;
        }
        sup = std::max(sup, num / den);
      }
      sups[w.name] = sup;
      score = std::max(score, sup);
    }
    if (score < best_score) {
      best_score = score;
      best_sign = sign;
      best_sups = sups;
    }
  }

  out.sign = best_sign;
  out.sups = best_sups;
  out.applicable = std::isfinite(best_score);
  out.bounds.b = std::sqrt(best_sups["b"]);
  out.bounds.b1 = std::sqrt(best_sups["b1"]);
  out.bounds.b2 = std::sqrt(best_sups["b2"]);
  out.bounds.b3 = std::sqrt(best_sups["b3"]);
  out.bounds.b4 = std::sqrt(best_sups["b4"]);
  if (!out.applicable)
    out.note =
        "a weight is positive where the signed field is not; pointwise route "
        "inapplicable (variational route still available)";
  return out;
}

namespace {

struct NamedConst {
  const char* name;
  double Budget::*member;
};

const std::vector<NamedConst> kThm1Consts = {
    {"b", &Budget::b},   {"b1", &Budget::b1}, {"b2", &Budget::b2},
    {"b3", &Budget::b3}, {"b4", &Budget::b4}};
const std::vector<NamedConst> kNsaExtra = {
    {"a1", &Budget::a1}, {"a2", &Budget::a2}, {"b5", &Budget::b5},
    {"b6", &Budget::b6}};

}  // namespace

CertificationRun run_certification(
    TheoremId theorem, const RadialFieldProfile* field,
    const AngularFluxDensity* alpha, const PotentialModel& v,
    const std::function<PolarGrid(double)>& make_grid,
    const std::vector<double>& sweep_radii, const SolveOptions& opts,
    std::optional<double> epsilon, int d) {
  if (sweep_radii.empty())
    throw std::invalid_argument("run_certification: empty sweep");
  if (theorem == TheoremId::ab && !alpha)
    throw std::invalid_argument("run_certification: AB theorem needs alpha");
  if (theorem != TheoremId::ab && !field)
    throw std::invalid_argument("run_certification: missing field profile");

  CertificationRun run;
  run.theorem = theorem;
  const bool nsa_constants = theorem == TheoremId::nsa ||
                             theorem == TheoremId::robust ||
                             theorem == TheoremId::ab;
  const RadialFieldProfile zero_field;  // AB: the B weight is zero
  const RadialFieldProfile& bfield = field ? *field : zero_field;

  std::vector<NamedConst> tracked = kThm1Consts;
  if (nsa_constants)
    tracked.insert(tracked.end(), kNsaExtra.begin(), kNsaExtra.end());

  std::vector<PolarGrid> grids;
  grids.reserve(sweep_radii.size());
  for (double r : sweep_radii) grids.push_back(make_grid(r));

  for (std::size_t i = 0; i < grids.size(); ++i) {
    const PolarGrid& g = grids[i];
    const VectorPotentialField a =
        alpha ? ab_potential(*alpha) : transverse_gauge(bfield);
    std::map<std::string, SubordinationConstant> diag;
    SweepEntry entry;
    entry.r_max = g.r_max();
    entry.n_r = g.n_r();
    entry.constants = nsa_constants
                          ? constants_nsa(a, bfield, v, g, opts, &diag)
                          : constants_thm1(a, bfield, v, g, opts, &diag);
    for (const auto& [name, s] : diag) entry.converged &= s.converged;
    if (i + 1 == grids.size()) run.solver_diag = std::move(diag);
    run.sweep.push_back(entry);
  }

  // drift of each constant over the last doubling of the sweep
  const Budget& last = run.sweep.back().constants;
  const Budget& prev = run.sweep.size() > 1
                           ? run.sweep[run.sweep.size() - 2].constants
                           : run.sweep.back().constants;
  for (const NamedConst& c : tracked) {
    const double now = last.*(c.member), before = prev.*(c.member);
    run.drift[c.name] =
        now <= 1e-12 ? 0.0 : std::abs(now - before) / std::max(now, 1e-300);
  }

  // pointwise route (transverse fields only; AB has no field term)
  if (!alpha) run.pointwise = pointwise_sufficient(bfield, v, grids.back());

  // per-constant certified value: pointwise bounds are truncation-free;
  // variational values must have stabilized in r_max
  run.certified = last;
  bool variational_needed = false;
  for (const NamedConst& c : kThm1Consts) {
    const double pw = run.pointwise.applicable
                          ? run.pointwise.bounds.*(c.member)
                          : kInf;
    const double var = last.*(c.member);
    if (run.pointwise.applicable && std::isfinite(pw)) {
      run.certified.*(c.member) = pw;
      run.provenance[c.name] = "pointwise";
    } else {
      run.provenance[c.name] = "variational";
      if (var > 1e-12) variational_needed = true;
    }
  }
  if (nsa_constants)
    for (const NamedConst& c : kNsaExtra) {
      run.provenance[c.name] = "variational";
      if (last.*(c.member) > 1e-12) variational_needed = true;
    }

  run.sweep_stable = true;
  if (variational_needed) {
    if (run.sweep.size() < 2) {
      run.sweep_stable = false;
      run.notes.push_back("single-radius sweep cannot establish stability");
    }
    for (const NamedConst& c : tracked) {
      if (run.provenance[c.name] != "variational") continue;
      if (run.drift[c.name] > 0.01) {
        run.sweep_stable = false;
        run.notes.push_back("variational constant " + std::string(c.name) +
                            " drifts by more than 1% over the last doubling");
      }
    }
  }
  for (const SweepEntry& e : run.sweep)
    if (!e.converged) {
      run.sweep_stable = false;
      run.notes.push_back("a constant solve did not converge");
      break;
    }

  // final budget check
  switch (theorem) {
    case TheoremId::thm1:
      run.report = check_budget_thm1(run.certified);
      break;
    case TheoremId::multi:
      run.report = check_budget_multi(d, run.certified);
      break;
    case TheoremId::nsa: {
      const VectorPotentialField a =
          alpha ? ab_potential(*alpha) : transverse_gauge(bfield);
      run.obvious = check_obvious_condition(a, v, grids.back(), opts);
      run.report = check_budget_nsa(run.certified, run.obvious);
      break;
    }
    case TheoremId::robust:
      run.report = check_budget_robust(run.certified, epsilon);
      break;
    case TheoremId::ab:
      run.report = check_budget_ab(alpha->flux_distance(), run.certified, epsilon);
      break;
  }
  if (!run.sweep_stable && run.report.verdict == Verdict::certified) {
    run.report.verdict = Verdict::not_certified;
    run.report.notes.push_back(
        "downgraded: variational constants not stabilized across the r_max "
        "sweep (conservative certification)");
  }
  run.notes.insert(run.notes.end(), run.report.notes.begin(),
                   run.report.notes.end());
  return run;
}

}  // namespace absentia
