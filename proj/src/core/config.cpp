#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "oracle.hpp"

namespace polyjump {

const char* to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::convergence: return "convergence";
    case Command::jumps: return "jumps";
    case Command::tv: return "tv";
    case Command::altcaf: return "altcaf";
    case Command::validate_lemma23: return "validate-lemma23";
  }
  return "?";
}

Curve CurveSpec::build() const {
  switch (kind) {
    case CurveKind::circle: return Curve::circle(center, radius);
    case CurveKind::ellipse: return Curve::ellipse(center, a, b);
    case CurveKind::fourier_star: return Curve::fourier_star(center, r0, modes);
  }
  return Curve::circle(center, radius);
}

SurfaceDensity DensitySpec::build() const {
  return cosine ? SurfaceDensity::cosine_mode(mean, amplitude, k) : SurfaceDensity::constant(value);
}

double RunConfig::max_error_threshold() const {
  if (thr.max_error > 0.0) return thr.max_error;
  return m == 1 ? 2e-3 : m == 2 ? 5e-3 : 1e-2;
}

double RunConfig::jump_threshold() const {
  if (thr.jump_median > 0.0) return thr.jump_median;
  return m == 1 ? 0.05 : 0.10;
}

double RunConfig::mass_threshold() const {
  if (thr.mass_rel > 0.0) return thr.mass_rel;
  return method == Method::regularized ? 1e-2 : 1e-8;
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.tol = tol;
  o.maxiter = maxiter;
  o.workers = workers;
  o.solver = solver;
  o.regularized_width_cells = regularized_width;
  o.samples_per_cell = samples_per_cell;
  o.measure_fft_plan = !deterministic;
  return o;
}

Problem RunConfig::problem() const {
  Problem pb;
  pb.box = box;
  pb.curve = curve.build();
  pb.q = density.build();
  pb.m = m;
  pb.method = method;
  pb.opt = solve_options();
  switch (bc.source) {
    case BcSource::zero: break;
    case BcSource::oracle: {
      const RadialSolution ex = radial_polyharmonic_exact(m, density.value, curve.radius, bc.oracle);
      RadialSolution shifted = ex;
      shifted.center = curve.center;
      pb.bcs = shifted.boundary_list();
      break;
    }
    case BcSource::polynomial:
      for (const auto& c : bc.poly)
        pb.bcs.push_back([c](Vec2 p) {
          return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y;
        });
      break;
  }
  return pb;
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::config_error, key + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Allowed keys per section.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"command", "out", "workers", "deterministic", "export_fields"}},
      {"domain", {"x0", "x1", "y0", "y1"}},
      {"grid", {"n"}},
      {"problem",
       {"m", "method", "baseline", "solver", "tol", "maxiter", "regularized_width", "samples_per_cell", "probes"}},
      {"curve", {"kind", "center", "radius", "a", "b", "r0", "modes"}},
      {"density", {"kind", "value", "mean", "amplitude", "k"}},
      {"bc", {"source", "values", "level0", "level1", "level2", "level3"}},
      {"altcaf", {"u0", "rho_min", "rho_max", "step"}},
      {"lemma23", {"bumps", "seed", "bump_radius", "pairs"}},
      {"tv", {"components", "mode", "tube_cells"}},
      {"assert",
       {"max_error", "accuracy_n", "min_order", "baseline_max_order", "jump_median", "tangential_ratio",
        "regularity_from_n", "reg_off_lo", "reg_off_hi", "reg_cross_lo", "reg_cross_hi", "tv_fraction",
        "tv_jump_rel", "tv_step_rel", "mass_rel", "ac_el", "ac_stationary", "ac_continuity",
        "expect_free_boundary", "lemma_order"}},
  };
  return s;
}

class Table {
 public:
  void add(const std::string& key, const std::string& value, const std::string& name, int line) {
    if (!values_.emplace(key, value).second) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "duplicate key (line %d)", line);
      fail(name, buf);
    }
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string* get(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, std::string> values_;
};

double to_double(const std::string& key, const std::string& v) {
  if (v.empty()) fail(key, "empty value");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) fail(key, "not a finite number: '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  if (v.empty()) fail(key, "empty value");
  char* end = nullptr;
  errno = 0;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) fail(key, "not an integer: '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v[0] == '-') fail(key, "not an unsigned integer: '" + v + "'");
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) fail(key, "not an unsigned integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Table> t) : tables_(std::move(t)) {}

  const std::string* raw(const std::string& sec, const std::string& key) const {
    auto it = tables_.find(sec);
    return it == tables_.end() ? nullptr : it->second.get(key);
  }
  bool has(const std::string& sec, const std::string& key) const { return raw(sec, key) != nullptr; }

  double real(const std::string& sec, const std::string& key, double def) {
    const std::string name = sec + "." + key;
    const double x = has(sec, key) ? to_double(name, *raw(sec, key)) : def;
    resolved[name] = fmt_double(x);
    return x;
  }
  long integer(const std::string& sec, const std::string& key, long def) {
    const std::string name = sec + "." + key;
    const long x = has(sec, key) ? to_long(name, *raw(sec, key)) : def;
    resolved[name] = std::to_string(x);
    return x;
  }
  bool boolean(const std::string& sec, const std::string& key, bool def) {
    const std::string name = sec + "." + key;
    const bool x = has(sec, key) ? to_bool(name, *raw(sec, key)) : def;
    resolved[name] = x ? "true" : "false";
    return x;
  }
  std::string word(const std::string& sec, const std::string& key, const std::string& def,
                   const std::vector<std::string>& allowed = {}) {
    const std::string name = sec + "." + key;
    const std::string x = has(sec, key) ? *raw(sec, key) : def;
    if (!allowed.empty()) {
      bool ok = false;
      std::string list;
      for (const auto& a : allowed) {
        ok = ok || a == x;
        list += (list.empty() ? "" : " | ") + a;
      }
      if (!ok) fail(name, "'" + x + "' is not one of " + list);
    }
    resolved[name] = x;
    return x;
  }
  std::vector<double> reals(const std::string& sec, const std::string& key, const std::vector<double>& def) {
    const std::string name = sec + "." + key;
    std::vector<double> out;
    if (has(sec, key)) {
      for (const auto& item : split_list(*raw(sec, key))) out.push_back(to_double(name, item));
    } else {
      out = def;
    }
    std::string r;
    for (double x : out) r += (r.empty() ? "" : ", ") + fmt_double(x);
    resolved[name] = r;
    return out;
  }
  std::vector<long> integers(const std::string& sec, const std::string& key, const std::vector<long>& def) {
    const std::string name = sec + "." + key;
    std::vector<long> out;
    if (has(sec, key)) {
      for (const auto& item : split_list(*raw(sec, key))) out.push_back(to_long(name, item));
    } else {
      out = def;
    }
    std::string r;
    for (long x : out) r += (r.empty() ? "" : ", ") + std::to_string(x);
    resolved[name] = r;
    return out;
  }
  std::vector<std::string> words(const std::string& sec, const std::string& key, const std::vector<std::string>& def) {
    const std::string name = sec + "." + key;
    std::vector<std::string> out = has(sec, key) ? split_list(*raw(sec, key)) : def;
    std::string r;
    for (const auto& x : out) {
      if (x.empty()) fail(name, "empty list item");
      r += (r.empty() ? "" : ", ") + x;
    }
    resolved[name] = r;
    return out;
  }

  std::map<std::string, std::string> resolved;

 private:
  std::map<std::string, Table> tables_;
};

std::map<std::string, Table> tokenize(const std::string& text) {
  std::map<std::string, Table> tables;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    char where[32];
    std::snprintf(where, sizeof where, "line %d", lineno);
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail(section, std::string("unknown section (") + where + ")");
      tables[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(key, std::string("key outside of any section (") + where + ")");
    const std::string name = section + "." + key;
    if (key.empty()) fail(where, "empty key");
    if (!schema().at(section).count(key)) fail(name, std::string("unknown key (") + where + ")");
    tables[section].add(key, value, name, lineno);
  }
  return tables;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& command) {
  Reader r(tokenize(text));
  RunConfig c;

  const std::vector<std::string> commands{"solve", "convergence", "jumps", "tv", "altcaf", "validate-lemma23"};
  if (!command.empty() && std::find(commands.begin(), commands.end(), command) == commands.end())
    fail("run.command", "'" + command + "' is not a command");
  const std::string cmd = command.empty() ? r.word("run", "command", "", commands) : command;
  r.resolved["run.command"] = cmd;
  if (cmd == "solve") c.command = Command::solve;
  else if (cmd == "convergence") c.command = Command::convergence;
  else if (cmd == "jumps") c.command = Command::jumps;
  else if (cmd == "tv") c.command = Command::tv;
  else if (cmd == "altcaf") c.command = Command::altcaf;
  else c.command = Command::validate_lemma23;

  c.out = r.word("run", "out", "out");
  if (c.out.empty()) fail("run.out", "empty output directory");
  c.workers = static_cast<int>(r.integer("run", "workers", 1));
  if (c.workers < 1 || c.workers > 256) fail("run.workers", "must be in 1..256");
  c.deterministic = r.boolean("run", "deterministic", true);
  c.export_fields = r.boolean("run", "export_fields", true);

  c.box.x0 = r.real("domain", "x0", -1.0);
  c.box.x1 = r.real("domain", "x1", 1.0);
  c.box.y0 = r.real("domain", "y0", -1.0);
  c.box.y1 = r.real("domain", "y1", 1.0);
  const double wx = c.box.x1 - c.box.x0, wy = c.box.y1 - c.box.y0;
  if (!(wx > 0.0)) fail("domain.x1", "must exceed domain.x0");
  if (!(wy > 0.0)) fail("domain.y1", "must exceed domain.y0");
  if (std::abs(wx - wy) > 1e-12 * std::max(wx, wy)) fail("domain.y1", "domain must be square (equal x and y extent)");

  const std::vector<long> default_grids =
      c.command == Command::validate_lemma23 ? std::vector<long>{65, 129, 257}
      : c.command == Command::convergence    ? std::vector<long>{65, 129, 257, 513}
                                             : std::vector<long>{129};
  c.grids.clear();
  for (long n : r.integers("grid", "n", default_grids)) {
    if (n < 17 || n > 4097) fail("grid.n", "each size must be in 17..4097");
    if (!c.grids.empty() && n <= c.grids.back()) fail("grid.n", "sizes must be strictly increasing");
    c.grids.push_back(static_cast<int>(n));
  }
  if (c.grids.empty()) fail("grid.n", "needs at least one size");
  if ((c.command == Command::convergence || c.command == Command::validate_lemma23) && c.grids.size() < 3)
    fail("grid.n", "an order fit needs at least 3 grid sizes");

  c.m = static_cast<int>(r.integer("problem", "m", c.command == Command::tv ? 2 : 1));
  if (c.m < 1 || c.m > 4) fail("problem.m", "order must be in 1..4");
  const std::string method =
      r.word("problem", "method", "corrector", {"corrector", "direct-measure", "regularized"});
  c.method = method == "corrector"        ? Method::corrector
             : method == "direct-measure" ? Method::direct_measure
                                          : Method::regularized;
  c.baseline = r.word("problem", "baseline", "none", {"none", "corrector", "direct-measure", "regularized"});
  if (c.baseline == method) fail("problem.baseline", "must differ from problem.method");
  c.solver = r.word("problem", "solver", "cg", {"cg", "fft"}) == "cg" ? LinearSolver::cg : LinearSolver::fft;
  c.tol = r.real("problem", "tol", 0.0);
  if (c.tol != 0.0 && (c.tol < 1e-12 || c.tol > 1e-4)) fail("problem.tol", "must be 0 (default) or in [1e-12, 1e-4]");
  c.maxiter = static_cast<int>(r.integer("problem", "maxiter", 0));
  if (c.maxiter < 0) fail("problem.maxiter", "must be >= 0");
  c.regularized_width = r.real("problem", "regularized_width", 2.0);
  if (!(c.regularized_width > 0.0)) fail("problem.regularized_width", "must be positive");
  c.samples_per_cell = static_cast<int>(r.integer("problem", "samples_per_cell", 8));
  if (c.samples_per_cell < 1 || c.samples_per_cell > 256) fail("problem.samples_per_cell", "must be in 1..256");
  c.probes = static_cast<int>(r.integer("problem", "probes", 64));
  if (c.probes < 8 || c.probes > 100000) fail("problem.probes", "must be in 8..100000");

  const std::string kind = r.word("curve", "kind", "circle", {"circle", "ellipse", "fourier-star"});
  const std::vector<double> center = r.reals("curve", "center", {0.0, 0.0});
  if (center.size() != 2) fail("curve.center", "expected two numbers x, y");
  c.curve.center = {center[0], center[1]};
  if (kind == "circle") {
    c.curve.kind = CurveKind::circle;
    c.curve.radius = r.real("curve", "radius", 0.5);
    if (!(c.curve.radius > 0.0)) fail("curve.radius", "must be positive");
  } else if (kind == "ellipse") {
    c.curve.kind = CurveKind::ellipse;
    c.curve.a = r.real("curve", "a", 0.6);
    c.curve.b = r.real("curve", "b", 0.4);
    if (!(c.curve.a > 0.0)) fail("curve.a", "must be positive");
    if (!(c.curve.b > 0.0)) fail("curve.b", "must be positive");
  } else {
    c.curve.kind = CurveKind::fourier_star;
    c.curve.r0 = r.real("curve", "r0", 0.5);
    if (!(c.curve.r0 > 0.0)) fail("curve.r0", "must be positive");
    for (const auto& item : r.words("curve", "modes", {"3:0.06"})) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail("curve.modes", "expected k:amplitude pairs, got '" + item + "'");
      const long k = to_long("curve.modes", trim(item.substr(0, colon)));
      const double amp = to_double("curve.modes", trim(item.substr(colon + 1)));
      if (k < 1 || k > 64) fail("curve.modes", "mode number must be in 1..64");
      c.curve.modes.push_back({static_cast<int>(k), amp});
    }
  }
  for (const char* k : {"radius", "a", "b", "r0", "modes"}) {
    const bool used = (kind == "circle" && std::string(k) == "radius") ||
                      (kind == "ellipse" && (std::string(k) == "a" || std::string(k) == "b")) ||
                      (kind == "fourier-star" && (std::string(k) == "r0" || std::string(k) == "modes"));
    if (!used && r.has("curve", k)) fail(std::string("curve.") + k, "not used by curve kind '" + kind + "'");
  }

  const std::string dkind = r.word("density", "kind", "constant", {"constant", "cosine"});
  c.density.cosine = dkind == "cosine";
  if (c.density.cosine) {
    if (r.has("density", "value")) fail("density.value", "not used by density kind 'cosine'");
    c.density.mean = r.real("density", "mean", 1.0);
    c.density.amplitude = r.real("density", "amplitude", 0.5);
    c.density.k = static_cast<int>(r.integer("density", "k", 1));
    if (c.density.k < 0 || c.density.k > 64) fail("density.k", "must be in 0..64");
  } else {
    for (const char* k : {"mean", "amplitude", "k"})
      if (r.has("density", k)) fail(std::string("density.") + k, "not used by density kind 'constant'");
    c.density.value = r.real("density", "value", 1.0);
  }

  const std::string src = r.word("bc", "source", "zero", {"zero", "oracle", "polynomial"});
  c.bc.source = src == "zero" ? BcSource::zero : src == "oracle" ? BcSource::oracle : BcSource::polynomial;
  if (c.bc.source == BcSource::oracle) {
    if (c.curve.kind != CurveKind::circle) fail("bc.source", "oracle data needs curve.kind = circle");
    if (c.density.cosine) fail("bc.source", "oracle data needs density.kind = constant");
    c.bc.oracle = r.reals("bc", "values", std::vector<double>(c.m, 0.0));
    if (static_cast<int>(c.bc.oracle.size()) != c.m) fail("bc.values", "needs one value per level (problem.m)");
  } else if (r.has("bc", "values")) {
    fail("bc.values", "only used with bc.source = oracle");
  }
  for (int j = 0; j < 4; ++j) {
    const std::string key = "level" + std::to_string(j);
    if (c.bc.source == BcSource::polynomial && j < c.m) {
      const std::vector<double> co = r.reals("bc", key, {0, 0, 0, 0, 0, 0});
      if (co.size() != 6) fail("bc." + key, "expected 6 coefficients c, cx, cy, cxx, cxy, cyy");
      c.bc.poly.push_back({co[0], co[1], co[2], co[3], co[4], co[5]});
    } else if (r.has("bc", key)) {
      fail("bc." + key, "only used with bc.source = polynomial and level < problem.m");
    }
  }

  c.u0 = r.real("altcaf", "u0", 0.07);
  if (!(c.u0 > 0.0)) fail("altcaf.u0", "must be positive");
  c.rho_min = r.real("altcaf", "rho_min", 0.05);
  c.rho_max = r.real("altcaf", "rho_max", 0.95);
  c.rho_step = r.real("altcaf", "step", 0.002);
  if (c.rho_min < 0.05) fail("altcaf.rho_min", "must be >= 0.05");
  if (c.rho_max > 0.95 || !(c.rho_max > c.rho_min)) fail("altcaf.rho_max", "must be in (rho_min, 0.95]");
  if (!(c.rho_step > 0.0) || c.rho_step > c.rho_max - c.rho_min) fail("altcaf.step", "must be in (0, rho_max - rho_min]");

  c.bumps = static_cast<int>(r.integer("lemma23", "bumps", 3));
  if (c.bumps < 1 || c.bumps > 64) fail("lemma23.bumps", "must be in 1..64");
  if (r.has("lemma23", "seed")) c.seed = to_u64("lemma23.seed", *r.raw("lemma23", "seed"));
  c.bump_radius = r.real("lemma23", "bump_radius", 0.0);
  if (c.bump_radius < 0.0) fail("lemma23.bump_radius", "must be positive (0 selects 0.9 tube radius)");
  c.pairs.clear();
  for (const auto& p : r.words("lemma23", "pairs", {"11", "12", "22"})) {
    if (p.size() != 2 || (p[0] != '1' && p[0] != '2') || (p[1] != '1' && p[1] != '2'))
      fail("lemma23.pairs", "expected index pairs like 11, 12, 22; got '" + p + "'");
    c.pairs.push_back({p[0] - '0', p[1] - '0'});
  }

  c.tv_mode = r.word("tv", "mode", "gradient", {"gradient", "step"});
  c.tube_cells = r.real("tv", "tube_cells", 3.0);
  if (!(c.tube_cells > 0.0)) fail("tv.tube_cells", "must be positive");
  const int comp_order = 2 * c.m - 2;
  c.tv_components = r.words("tv", "components", comp_order == 2 ? std::vector<std::string>{"xx", "xy", "yy"}
                                                 : comp_order == 0 ? std::vector<std::string>{"u"}
                                                                   : std::vector<std::string>{std::string(comp_order, 'x')});
  for (const auto& comp : c.tv_components) {
    if (comp == "u" && comp_order == 0) continue;
    if (static_cast<int>(comp.size()) != comp_order || comp.find_first_not_of("xy") != std::string::npos)
      fail("tv.components", "'" + comp + "' is not a derivative of order 2m - 2 written in x and y");
  }

  Thresholds& t = c.thr;
  t.max_error = r.real("assert", "max_error", 0.0);
  t.accuracy_n = static_cast<int>(r.integer("assert", "accuracy_n", 257));
  t.min_order = r.real("assert", "min_order", 1.8);
  t.baseline_max_order = r.real("assert", "baseline_max_order", 1.5);
  t.jump_median = r.real("assert", "jump_median", 0.0);
  t.tangential_ratio = r.real("assert", "tangential_ratio", 0.10);
  t.regularity_from_n = static_cast<int>(r.integer("assert", "regularity_from_n", 129));
  t.reg_off_lo = r.real("assert", "reg_off_lo", 0.8);
  t.reg_off_hi = r.real("assert", "reg_off_hi", 1.2);
  t.reg_cross_lo = r.real("assert", "reg_cross_lo", 1.6);
  t.reg_cross_hi = r.real("assert", "reg_cross_hi", 2.4);
  t.tv_fraction = r.real("assert", "tv_fraction", 0.6);
  t.tv_jump_rel = r.real("assert", "tv_jump_rel", 0.25);
  t.tv_step_rel = r.real("assert", "tv_step_rel", 0.05);
  t.mass_rel = r.real("assert", "mass_rel", 0.0);
  t.ac_el = r.real("assert", "ac_el", 1e-6);
  t.ac_stationary = r.real("assert", "ac_stationary", 1e-4);
  t.ac_continuity = r.real("assert", "ac_continuity", 1e-10);
  t.expect_free_boundary = r.word("assert", "expect_free_boundary", "any", {"any", "true", "false"});
  t.lemma_order = r.real("assert", "lemma_order", 1.5);
  if (t.max_error < 0.0) fail("assert.max_error", "must be >= 0");
  if (t.jump_median < 0.0) fail("assert.jump_median", "must be >= 0");
  if (t.reg_off_lo > t.reg_off_hi) fail("assert.reg_off_hi", "must be >= reg_off_lo");
  if (t.reg_cross_lo > t.reg_cross_hi) fail("assert.reg_cross_hi", "must be >= reg_cross_lo");

  // Geometry: the curve must be valid and sit strictly inside the domain.
  Curve curve = Curve::circle({0.0, 0.0}, 0.5);
  try {
    curve = c.curve.build();
  } catch (const Error& e) {
    fail("curve.kind", e.what());
  }
  const double eps = tube_radius(curve, c.box);  // throws InterfaceTouchesBoundary
  const bool needs_solve = c.command != Command::altcaf && c.command != Command::validate_lemma23 &&
                           !(c.command == Command::tv && c.tv_mode == "step");
  if (needs_solve) {
    for (int n : c.grids) {
      const double h = wx / (n - 1);
      const bool regularized = c.method == Method::regularized || c.baseline == "regularized";
      if (regularized && c.regularized_width * h > 0.5 * eps) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "kernel width %.4g at n = %d exceeds half the tube radius %.4g",
                      c.regularized_width * h, n, eps);
        fail("problem.regularized_width", buf);
      }
      if (eps < 2.0 * h) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "tube radius %.4g is under two cells at n = %d", eps, n);
        fail("grid.n", buf);
      }
    }
  }
  if (c.bump_radius == 0.0) {
    c.bump_radius = 0.9 * eps;
    r.resolved["lemma23.bump_radius"] = fmt_double(c.bump_radius);
  }
  if (c.command == Command::validate_lemma23 && c.bump_radius > 0.9 * eps * (1.0 + 1e-12)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "bump radius must be <= 0.9 tube radius = %.6g", 0.9 * eps);
    fail("lemma23.bump_radius", buf);
  }
  if (c.command == Command::convergence && c.bc.source != BcSource::oracle)
    fail("bc.source", "convergence measures errors against the radial solution; needs bc.source = oracle");

  c.resolved = std::move(r.resolved);
  c.resolved["lemma23.seed"] = std::to_string(c.seed);
  return c;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::config_error, "run.config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace polyjump
