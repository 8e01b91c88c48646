#include "absentia/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace absentia {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest(const std::string& key, const std::vector<std::string>& valid) {
  std::string best;
  int dist = std::numeric_limits<int>::max();
  for (const std::string& v : valid) {
    const int d = levenshtein(key, v);
    if (d < dist) {
      dist = d;
      best = v;
    }
  }
  return best;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::map<std::string, std::vector<std::string>> kValidKeys = {
    {"field", {"type", "b0", "r0", "sigma", "alpha_mean", "alpha_cos1", "alpha_sin1"}},
    {"potential", {"re_type", "depth", "radius", "im_type", "im_depth", "im_radius"}},
    {"grid", {"n_r", "n_theta", "r_max", "r_min", "grading"}},
    {"solver", {"tol", "max_iter", "seed", "k"}},
    {"certify", {"theorem", "d", "decomposition", "epsilon", "sweep_radii"}},
    {"output", {"dir"}}};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(origin, line, "key '" + key + "': not a number: '" + v + "'");
  }
}

long to_int(const std::string& origin, int line, const std::string& key,
            const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(origin, line, "key '" + key + "': not an integer: '" + v + "'");
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "certify") return Command::certify;
  if (name == "spectrum") return Command::spectrum;
  if (name == "hardy") return Command::hardy;
  if (name == "identities") return Command::identities;
  if (name == "all") return Command::all;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::certify: return "certify";
    case Command::spectrum: return "spectrum";
    case Command::hardy: return "hardy";
    case Command::identities: return "identities";
    case Command::all: return "all";
  }
  return "?";
}

ScenarioConfig parse_config_text(const std::string& text,
                                 const std::string& origin) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  bool epsilon_seen = false;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!kValidKeys.count(section)) {
        std::vector<std::string> names;
        for (const auto& [k, v] : kValidKeys) names.push_back(k);
        fail(origin, line, "unknown section '" + section + "'; nearest is '" +
                               nearest(section, names) + "'");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    if (section.empty()) fail(origin, line, "key outside any [section]");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const std::vector<std::string>& valid = kValidKeys.at(section);
    if (std::find(valid.begin(), valid.end(), key) == valid.end())
      fail(origin, line, "unknown key '" + section + "." + key +
                             "'; nearest valid key is '" + section + "." +
                             nearest(key, valid) + "'");

    if (section == "field") {
      if (key == "type") {
        if (val == "none") cfg.field.type = FieldType::none;
        else if (val == "step") cfg.field.type = FieldType::step;
        else if (val == "constant") cfg.field.type = FieldType::constant;
        else if (val == "gaussian_poly") cfg.field.type = FieldType::gaussian_poly;
        else if (val == "ab") cfg.field.type = FieldType::ab;
        else fail(origin, line, "field.type must be none|step|constant|gaussian_poly|ab");
      } else if (key == "b0") cfg.field.b0 = to_double(origin, line, key, val);
      else if (key == "r0") cfg.field.r0 = to_double(origin, line, key, val);
      else if (key == "sigma") cfg.field.sigma = to_double(origin, line, key, val);
      else if (key == "alpha_mean") cfg.field.alpha_mean = to_double(origin, line, key, val);
      else if (key == "alpha_cos1") cfg.field.alpha_cos1 = to_double(origin, line, key, val);
      else if (key == "alpha_sin1") cfg.field.alpha_sin1 = to_double(origin, line, key, val);
    } else if (section == "potential") {
      auto re_of = [&](const std::string& v) {
        if (v == "none") return ReType::none;
        if (v == "well") return ReType::well;
        fail(origin, line, "potential type must be none|well");
      };
      if (key == "re_type") cfg.potential.re_type = re_of(val);
      else if (key == "im_type") cfg.potential.im_type = re_of(val);
      else if (key == "depth") cfg.potential.depth = to_double(origin, line, key, val);
      else if (key == "radius") cfg.potential.radius = to_double(origin, line, key, val);
      else if (key == "im_depth") cfg.potential.im_depth = to_double(origin, line, key, val);
      else if (key == "im_radius") cfg.potential.im_radius = to_double(origin, line, key, val);
    } else if (section == "grid") {
      if (key == "n_r") cfg.grid.n_r = static_cast<int>(to_int(origin, line, key, val));
      else if (key == "n_theta") cfg.grid.n_theta = static_cast<int>(to_int(origin, line, key, val));
      else if (key == "r_max") cfg.grid.r_max = to_double(origin, line, key, val);
      else if (key == "r_min") cfg.grid.r_min = to_double(origin, line, key, val);
      else if (key == "grading") cfg.grid.grading = to_double(origin, line, key, val);
    } else if (section == "solver") {
      if (key == "tol") cfg.solver.tol = to_double(origin, line, key, val);
      else if (key == "max_iter") cfg.solver.max_iter = static_cast<int>(to_int(origin, line, key, val));
      else if (key == "seed") cfg.solver.seed = static_cast<std::uint64_t>(to_int(origin, line, key, val));
      else if (key == "k") cfg.solver.k = static_cast<int>(to_int(origin, line, key, val));
    } else if (section == "certify") {
      if (key == "theorem") {
        if (val == "thm1") cfg.certify.theorem = TheoremId::thm1;
        else if (val == "multi") cfg.certify.theorem = TheoremId::multi;
        else if (val == "nsa") cfg.certify.theorem = TheoremId::nsa;
        else if (val == "robust") cfg.certify.theorem = TheoremId::robust;
        else if (val == "ab") cfg.certify.theorem = TheoremId::ab;
        else fail(origin, line, "certify.theorem must be thm1|multi|nsa|robust|ab");
      } else if (key == "d") cfg.certify.d = static_cast<int>(to_int(origin, line, key, val));
      else if (key == "decomposition") {
        if (val == "auto") cfg.certify.decomposition = Decomposition::automatic;
        else if (val == "all_v1") cfg.certify.decomposition = Decomposition::all_v1;
        else if (val == "all_v2") cfg.certify.decomposition = Decomposition::all_v2;
        else fail(origin, line, "certify.decomposition must be auto|all_v1|all_v2");
      } else if (key == "epsilon") {
        cfg.certify.epsilon = to_double(origin, line, key, val);
        epsilon_seen = true;
      } else if (key == "sweep_radii") {
        cfg.certify.sweep_radii.clear();
        std::istringstream vs(val);
        double r;
        while (vs >> r) cfg.certify.sweep_radii.push_back(r);
        if (cfg.certify.sweep_radii.empty())
          fail(origin, line, "sweep_radii: expected a space-separated list");
      }
    } else if (section == "output") {
      if (key == "dir") cfg.output.dir = val;
    }
  }
  (void)epsilon_seen;

  // range validation
  auto range_fail = [&](const std::string& msg) { throw ConfigError(origin + ": " + msg); };
  if (cfg.grid.n_r < 4) range_fail("grid.n_r must be >= 4");
  if (cfg.grid.n_theta < 8 || cfg.grid.n_theta % 2)
    range_fail("grid.n_theta must be even and >= 8");
  if (!(cfg.grid.r_max > 0)) range_fail("grid.r_max must be > 0");
  if (cfg.grid.r_min < 0 || cfg.grid.r_min >= cfg.grid.r_max)
    range_fail("grid.r_min must satisfy 0 <= r_min < r_max");
  if (!(cfg.grid.grading >= 1.0)) range_fail("grid.grading must be >= 1");
  if (!(cfg.solver.tol > 0)) range_fail("solver.tol must be > 0");
  if (cfg.solver.max_iter < 1) range_fail("solver.max_iter must be >= 1");
  if (cfg.solver.k < 1) range_fail("solver.k must be >= 1");
  if (cfg.certify.d < 1) range_fail("certify.d must be >= 1");
  if (cfg.certify.epsilon && !(*cfg.certify.epsilon > 0 && *cfg.certify.epsilon < 1))
    range_fail("certify.epsilon must lie in (0, 1)");
  if (!std::is_sorted(cfg.certify.sweep_radii.begin(), cfg.certify.sweep_radii.end()))
    range_fail("certify.sweep_radii must be increasing");
  for (double r : cfg.certify.sweep_radii)
    if (!(r > 0)) range_fail("certify.sweep_radii must be positive");
  if (cfg.field.type == FieldType::step && !(cfg.field.r0 > 0))
    range_fail("field.r0 must be > 0");
  if (cfg.field.type == FieldType::gaussian_poly && !(cfg.field.sigma > 0))
    range_fail("field.sigma must be > 0");
  if (cfg.potential.re_type == ReType::well && !(cfg.potential.radius > 0))
    range_fail("potential.radius must be > 0");

  return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::echo() const {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  std::vector<std::pair<std::string, std::string>> kv;
  const char* ft[] = {"none", "step", "constant", "gaussian_poly", "ab"};
  kv.emplace_back("field.type", ft[static_cast<int>(field.type)]);
  kv.emplace_back("field.b0", num(field.b0));
  kv.emplace_back("field.r0", num(field.r0));
  kv.emplace_back("field.sigma", num(field.sigma));
  kv.emplace_back("field.alpha_mean", num(field.alpha_mean));
  kv.emplace_back("field.alpha_cos1", num(field.alpha_cos1));
  kv.emplace_back("field.alpha_sin1", num(field.alpha_sin1));
  const char* rt[] = {"none", "well"};
  kv.emplace_back("potential.re_type", rt[static_cast<int>(potential.re_type)]);
  kv.emplace_back("potential.depth", num(potential.depth));
  kv.emplace_back("potential.radius", num(potential.radius));
  kv.emplace_back("potential.im_type", rt[static_cast<int>(potential.im_type)]);
  kv.emplace_back("potential.im_depth", num(potential.im_depth));
  kv.emplace_back("potential.im_radius", num(potential.im_radius));
  kv.emplace_back("grid.n_r", std::to_string(grid.n_r));
  kv.emplace_back("grid.n_theta", std::to_string(grid.n_theta));
  kv.emplace_back("grid.r_max", num(grid.r_max));
  kv.emplace_back("grid.r_min", num(grid.r_min));
  kv.emplace_back("grid.grading", num(grid.grading));
  kv.emplace_back("solver.tol", num(solver.tol));
  kv.emplace_back("solver.max_iter", std::to_string(solver.max_iter));
  kv.emplace_back("solver.seed", std::to_string(solver.seed));
  kv.emplace_back("solver.k", std::to_string(solver.k));
  kv.emplace_back("certify.theorem", theorem_name(certify.theorem));
  kv.emplace_back("certify.d", std::to_string(certify.d));
  const char* dc[] = {"auto", "all_v1", "all_v2"};
  kv.emplace_back("certify.decomposition", dc[static_cast<int>(certify.decomposition)]);
  kv.emplace_back("certify.epsilon", certify.epsilon ? num(*certify.epsilon) : "auto");
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < certify.sweep_radii.size(); ++i)
      os << (i ? " " : "") << certify.sweep_radii[i];
    kv.emplace_back("certify.sweep_radii", os.str());
  }
  kv.emplace_back("output.dir", output.dir);
  return kv;
}

RadialFieldProfile build_field_profile(const FieldSpec& f) {
  switch (f.type) {
    case FieldType::none:
    case FieldType::ab:
      return RadialFieldProfile::zero();
    case FieldType::step:
      return RadialFieldProfile::step(f.b0, f.r0);
    case FieldType::constant:
      return RadialFieldProfile::constant(f.b0);
    case FieldType::gaussian_poly:
      return RadialFieldProfile::gaussian_poly(f.b0, f.sigma);
  }
  throw std::logic_error("build_field_profile");
}

std::optional<AngularFluxDensity> build_alpha(const FieldSpec& f) {
  if (f.type != FieldType::ab) return std::nullopt;
  std::vector<double> c, s;
  if (f.alpha_cos1 != 0.0 || f.alpha_sin1 != 0.0) {
    c = {f.alpha_cos1};
    s = {f.alpha_sin1};
  }
  return AngularFluxDensity(f.alpha_mean, c, s);
}

VectorPotentialField build_vector_potential(const FieldSpec& f) {
  if (f.type == FieldType::ab) return ab_potential(*build_alpha(f));
  return transverse_gauge(build_field_profile(f));
}

std::string resolved_decomposition(const PotentialSpec& p, Decomposition d) {
  if (p.re_type == ReType::none) return "none";
  if (d == Decomposition::all_v1) return "all_v1";
  if (d == Decomposition::all_v2) return "all_v2";
  return "all_v2 (auto: well edge is not W^{1,1})";
}

PotentialModel build_potential(const PotentialSpec& p, Decomposition d) {
  RadialFn im;
  if (p.im_type == ReType::well) {
    const double dep = p.im_depth, rad = p.im_radius;
    im = [dep, rad](double r) { return r <= rad ? dep : 0.0; };
  }
  if (p.re_type == ReType::none) {
    if (!im) return PotentialModel::zero();
    return PotentialModel({}, {}, im);
  }
  const bool as_v2 = d != Decomposition::all_v1;
  return well_potential(p.depth, p.radius, as_v2, im);
}

PolarGrid build_grid(const GridSpec& g, const FieldSpec& f,
                     double r_max_override) {
  const double r_max = r_max_override > 0.0 ? r_max_override : g.r_max;
  double r_min = g.r_min;
  if (f.type == FieldType::ab && r_min == 0.0) r_min = r_max * 1e-3;
  int n_r = g.n_r;
  if (r_max_override > 0.0) {
    n_r = std::max(16, static_cast<int>(std::lround(
                           g.n_r * std::sqrt(r_max / g.r_max))));
  }
  return PolarGrid(r_min, r_max, n_r, g.n_theta, g.grading);
}

SolveOptions solve_options(const SolverSpec& s) {
  SolveOptions o;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  o.seed = s.seed;
  o.k = s.k;
  return o;
}

}  // namespace absentia
