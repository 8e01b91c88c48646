#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absentia/eigensolve.hpp"

namespace absentia {

/// Subordination constants entering the budget inequalities. An infinity
/// marks a pointwise route that failed (numerator positive off the field
/// support).
struct Budget {
  double a1 = 0, a2 = 0;
  double b = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  double epsilon = 0;
  int d = 2;
  double beta = 0;
};

enum class Verdict { certified, not_certified, inapplicable };

std::string verdict_name(Verdict v);

struct CertificateReport {
  std::string theorem_id;
  Budget constants;
  double budget_value = 0.0;
  double margin = 0.0;  // 1 - budget_value
  Verdict verdict = Verdict::not_certified;
  std::vector<std::string> notes;
};

/// Variational constants of Theorem 1: each is sqrt of the optimal constant
/// of one weight against the magnetic Dirichlet form on the given grid.
/// Per-constant solver diagnostics are appended to `diag` when supplied.
Budget constants_thm1(const VectorPotentialField& a,
                      const RadialFieldProfile& field, const PotentialModel& v,
                      const PolarGrid& grid, const SolveOptions& opts,
                      std::map<std::string, SubordinationConstant>* diag = nullptr);

/// Adds the complex-potential constants a1, a2, b5, b6. b5 is computed for
/// both printed weights (4 r^2 |Im V| and 4 r^2 |Im V|^2); the larger drives
/// the verdict and both land in `diag`.
Budget constants_nsa(const VectorPotentialField& a,
                     const RadialFieldProfile& field, const PotentialModel& v,
                     const PolarGrid& grid, const SolveOptions& opts,
                     std::map<std::string, SubordinationConstant>* diag = nullptr);

/// Budget checks (pure arithmetic). Strict inequalities are implemented as
/// budget <= 1 - 1e-9 to avoid float-equality verdicts.
CertificateReport check_budget_thm1(const Budget& budget);
CertificateReport check_budget_multi(int d, const Budget& budget);

struct ObviousCheck {
  bool rev_plus_pointwise = false;   // Re V_+ >= 1/(4 r^2) at all nodes
  bool remark_pointwise = false;     // Re V   >= 1/(4 r^2) at all nodes
  bool variational_holds = false;    // sup of 1/(2r) against the weighted form <= 1
  bool holds = false;                // any route succeeded
  double variational_sup = 0.0;
  std::string route;                 // "pointwise_shortcut" | "variational" | "fails"
  std::string note;
};

/// The non-negativity condition on the bracket: (1/2) int |psi|^2/r <=
/// int r |grad_A psi|^2 + int r Re V_+ |psi|^2, via the pointwise shortcut
/// when available, otherwise variationally.
ObviousCheck check_obvious_condition(const VectorPotentialField& a,
                                     const PotentialModel& v,
                                     const PolarGrid& grid,
                                     const SolveOptions& opts);

CertificateReport check_budget_nsa(const Budget& budget, const ObviousCheck& obvious);

/// epsilon, when absent, is chosen as (sqrt(17)/2) a2 (the minimizer of
/// 17 a2^2/eps + 4 eps), clamped to (0, 1); a2 = 0 falls back to 1e-6.
CertificateReport check_budget_robust(Budget budget, std::optional<double> epsilon);

/// AB budget at flux distance beta; b1 is absent (the field term is
/// interpreted as zero). Auto epsilon = a2/beta, clamped to (0, 1).
CertificateReport check_budget_ab(double beta, Budget budget,
                                  std::optional<double> epsilon);

struct PointwiseBounds {
  bool applicable = false;
  int sign = +1;
  Budget bounds;  // entries may be +inf when a ratio is unbounded
  std::map<std::string, double> sups;  // squared constants per weight
  std::string note;
};

/// Upper bounds for the Theorem 1 constants from the pointwise sufficient
/// conditions (each weight <= +-const^2 * B). Ratios are sampled on the grid
/// levels plus a dense per-piece sampling of the field profile, and the sign
/// minimizing the worst ratio is selected.
PointwiseBounds pointwise_sufficient(const RadialFieldProfile& field,
                                     const PotentialModel& v,
                                     const PolarGrid& grid);

enum class TheoremId { thm1, multi, nsa, robust, ab };

std::string theorem_name(TheoremId t);

struct SweepEntry {
  double r_max = 0.0;
  int n_r = 0;
  Budget constants;
  bool converged = true;
};

/// Full certification of one scenario: variational constants over the
/// r_max sweep with drift gating, pointwise bounds where applicable, and
/// the final budget verdict. Pointwise bounds are truncation-free and are
/// preferred per constant; variational values require the sweep drift over
/// the last doubling to stay within 1% to count as certified bounds.
struct CertificationRun {
  TheoremId theorem = TheoremId::thm1;
  std::vector<SweepEntry> sweep;
  std::map<std::string, double> drift;
  std::map<std::string, std::string> provenance;
  PointwiseBounds pointwise;
  ObviousCheck obvious;
  Budget certified;
  bool sweep_stable = true;
  CertificateReport report;
  std::map<std::string, SubordinationConstant> solver_diag;
  std::vector<std::string> notes;
};

CertificationRun run_certification(
    TheoremId theorem, const RadialFieldProfile* field,
    const AngularFluxDensity* alpha, const PotentialModel& v,
    const std::function<PolarGrid(double)>& make_grid,
    const std::vector<double>& sweep_radii, const SolveOptions& opts,
    std::optional<double> epsilon = {}, int d = 2);

}  // namespace absentia
