// Acceptance checks 1-8. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "altcaf.hpp"
#include "analysis.hpp"
#include "assembly.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "oracle.hpp"
#include "run.hpp"
#include "solve.hpp"

using namespace polyjump;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace tol {
// 1
constexpr double kLemmaOrder = 1.5;
constexpr double kLemmaSeconds = 60.0;
// 2
constexpr double kModelError = 2e-3;
constexpr double kModelOrder = 1.8;
constexpr double kBaselineOrder = 1.5;
constexpr double kModelSeconds = 300.0;
// 3
constexpr double kGradJump = 0.05;
constexpr int kMinProbes = 32;
// 4
constexpr double kOffLo = 0.8, kOffHi = 1.2;
constexpr double kCrossLo = 1.6, kCrossHi = 2.4;
constexpr double kThirdJump = 0.10;
// 5
constexpr double kTriError = 1e-2;
constexpr double kFifthJump = 0.10;
constexpr double kWeakResidual = 1e-7;
constexpr double kContinuity = 1e-10;
// 6
constexpr double kTubeShare = 0.6;
constexpr double kJumpPart = 0.25;
// 7
constexpr double kElRelative = 1e-6;
constexpr double kStationary = 1e-4;
constexpr double kC2Gap = 1e-10;
constexpr double kAltCafSeconds = 30.0;
// 8
constexpr double kWorkerAgreement = 1e-12;
}  // namespace tol

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed += (failed.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double max_error(const GridField& f, const RadialSolution& ex, int level) {
  double worst = 0.0;
  for (int j = 1; j < f.grid.n - 1; ++j)
    for (int i = 1; i < f.grid.n - 1; ++i) worst = std::max(worst, std::abs(f(i, j) - ex.at(level, f.grid.node(i, j))));
  return worst;
}

Problem oracle_problem(int m) {
  Problem pb;
  pb.m = m;
  const RadialSolution ex = radial_polyharmonic_exact(m, 1.0, 0.5, std::vector<double>(m, 0.0));
  pb.bcs = ex.boundary_list();
  return pb;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const Curve curve = Curve::circle({0.0, 0.0}, 0.5);
  const SurfaceDensity q = SurfaceDensity::cosine_mode(1.0, 0.5, 1);
  const Rect box;
  const double eps = tube_radius(curve, box);
  const double radius = 0.9 * eps;
  std::mt19937_64 gen(20240601);
  const auto u01 = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Bump> bumps;
  for (int b = 0; b < 3; ++b) {
    const double t = Curve::period * u01();
    const double s = (2.0 * u01() - 1.0) * 0.1 * radius;
    bumps.push_back(Bump{curve.point(t) + s * curve.normal(t), radius, 1.0});
  }
  const int pairs[3][2] = {{1, 1}, {1, 2}, {2, 2}};
  double worst = INFINITY;
  bool monotone = true;
  for (const auto& pr : pairs)
    for (const Bump& b : bumps) {
      std::vector<double> res, hs;
      for (int n : {65, 129, 257}) {
        const double h = 2.0 / (n - 1);
        res.push_back(validate_hessian_identity(curve, q, eps, b, pr[0], pr[1], h).residual);
        hs.push_back(h);
      }
      worst = std::min(worst, convergence_order(res, hs));
      monotone = monotone && res[0] > res[1] && res[1] > res[2];
    }
  const double secs = since(t0);
  o.detail << "min order " << fmt(worst) << " over 3 pairs x 3 bumps, " << fmt(secs) << " s";
  o.require(monotone, "residual decreases under refinement");
  o.require(worst >= tol::kLemmaOrder, "order >= " + fmt(tol::kLemmaOrder));
  o.require(secs < tol::kLemmaSeconds, "runtime < 60 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const RadialSolution ex = radial_poisson_exact(1.0, 0.5, 0.0);
  const std::vector<int> grids{65, 129, 257, 513};
  std::vector<double> hs, e_cor, e_reg;
  double e257 = NAN;
  for (int n : grids) {
    Problem pb = oracle_problem(1);
    const ProblemRun cor = solve_problem(pb, n);
    pb.method = Method::regularized;
    const ProblemRun reg = solve_problem(pb, n);
    hs.push_back(cor.cache.grid.h);
    e_cor.push_back(max_error(cor.solution.u(), ex, 0));
    e_reg.push_back(max_error(reg.solution.u(), ex, 0));
    if (n == 257) e257 = e_cor.back();
  }
  const double p = convergence_order(e_cor, hs), p_reg = convergence_order(e_reg, hs);
  const double secs = since(t0);
  o.detail << "error(257) " << fmt(e257) << ", order " << fmt(p) << ", regularized order " << fmt(p_reg) << ", "
           << fmt(secs) << " s";
  o.require(e257 <= tol::kModelError, "error <= 2e-3");
  o.require(p >= tol::kModelOrder, "order >= 1.8");
  o.require(p_reg <= tol::kBaselineOrder, "regularized order <= 1.5");
  o.require(secs < tol::kModelSeconds, "runtime < 5 min");
  return o;
}

Outcome criterion3() {
  Outcome o;
  // constant pre-check against the radial solution
  const RadialSolution ex = radial_poisson_exact(1.0, 0.5, 0.0);
  o.require(std::abs(ex.jump(0, 1) + 1.0) < 1e-12, "radial gradient jump = -Q");
  const std::vector<std::pair<std::string, Curve>> curves{
      {"circle", Curve::circle({0.0, 0.0}, 0.5)},
      {"ellipse", Curve::ellipse({0.0, 0.0}, 0.6, 0.4)},
      {"star", Curve::fourier_star({0.0, 0.0}, 0.5, {{3, 0.06}})}};
  const std::vector<std::pair<std::string, SurfaceDensity>> densities{
      {"Q=1", SurfaceDensity::constant(1.0)}, {"Q=1+cos/2", SurfaceDensity::cosine_mode(1.0, 0.5, 1)}};
  double worst = 0.0;
  int fewest = 1 << 30;
  for (const auto& [cn, c] : curves)
    for (const auto& [qn, q] : densities) {
      Problem pb;
      pb.curve = c;
      pb.q = q;
      const ProblemRun run = solve_problem(pb, 513);
      const JumpReport r = jump_scan(run.solution, run.cache, c, q, 64);
      worst = std::max(worst, r.median_error);
      fewest = std::min(fewest, r.valid);
      o.require(r.median_error <= tol::kGradJump && r.valid >= tol::kMinProbes, cn + " " + qn);
    }
  o.detail << "worst median " << fmt(worst) << " over 6 cases, fewest valid probes " << fewest;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Problem pb = oracle_problem(2);
  const RegularitySweep s = regularity_sweep(pb, {129, 257, 513});
  o.detail << "off ratios";
  for (double r : s.off_ratios) {
    o.detail << " " << fmt(r);
    o.require(r >= tol::kOffLo && r <= tol::kOffHi, "off ratio in [0.8, 1.2]");
  }
  o.detail << ", cross ratios";
  for (double r : s.cross_ratios) {
    o.detail << " " << fmt(r);
    o.require(r >= tol::kCrossLo && r <= tol::kCrossHi, "cross ratio in [1.6, 2.4]");
  }
  const RadialSolution ex = radial_polyharmonic_exact(2, 1.0, 0.5, {0.0, 0.0});
  o.require(std::abs(ex.jump(0, 3) - 1.0) < 1e-10, "radial third-derivative jump = +Q");
  const ProblemRun run = solve_problem(pb, 513);
  const JumpReport r = jump_scan(run.solution, run.cache, pb.curve, pb.q, 64);
  o.detail << ", third-derivative jump median " << fmt(r.median_error);
  o.require(r.median_error <= tol::kThirdJump && r.valid >= tol::kMinProbes, "jump median <= 10%");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const RadialSolution ex = radial_polyharmonic_exact(3, 1.0, 0.5, {0.0, 0.0, 0.0});
  double weak = 0.0;
  for (const RadialBump& b : {RadialBump{0.5, 0.2, 1.0}, RadialBump{0.45, 0.3, 1.0}, RadialBump{0.6, 0.15, 1.0},
                              RadialBump{0.0, 0.7, 1.0}, RadialBump{0.55, 0.4, 1.0}})
    weak = std::max(weak, weakform_residual(ex, b));
  double gap = 0.0;
  for (int k = 0; k <= 4; ++k) gap = std::max(gap, std::abs(ex.jump(0, k)));
  o.require(std::abs(ex.jump(0, 5) + 1.0) < 1e-9, "radial fifth-derivative jump = -Q");
  o.require(weak <= tol::kWeakResidual, "weak-form residual <= 1e-7");
  o.require(gap <= tol::kContinuity, "continuity through order 4");

  const Problem pb = oracle_problem(3);
  const ProblemRun r257 = solve_problem(pb, 257);
  const double e = max_error(r257.solution.u(), ex, 0);
  o.require(e <= tol::kTriError, "error <= 1e-2");
  const ProblemRun r513 = solve_problem(pb, 513);
  const JumpReport j = jump_scan(r513.solution, r513.cache, pb.curve, pb.q, 64);
  o.require(j.median_error <= tol::kFifthJump && j.valid >= tol::kMinProbes, "jump median <= 10%");
  o.detail << "error(257) " << fmt(e) << ", fifth-derivative jump median " << fmt(j.median_error)
           << ", weak residual " << fmt(weak) << ", continuity gap " << fmt(gap);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Problem pb = oracle_problem(2);
  const ProblemRun run = solve_problem(pb, 513);
  const std::vector<std::pair<std::string, std::pair<int, int>>> comps{{"xx", {2, 0}}, {"xy", {1, 1}}, {"yy", {0, 2}}};
  for (const auto& [name, a] : comps) {
    const int ax = a.first, ay = a.second;
    const GridField f = central_derivative(run.solution.u(), ax, ay);
    const Curve& c = pb.curve;
    const DensityFn density = [&c, &pb, ax, ay](double t) {
      const Vec2 nu = c.normal(t);
      return predicted_jump(2, pb.q, c, t) * std::pow(nu.x, ax) * std::pow(nu.y, ay);
    };
    const TVReport tv = tv_profile(f, run.cache, c, density, 256, 3.0);
    const double rel = std::abs(tv.jump_part - tv.predicted) / std::abs(tv.predicted);
    o.detail << (name == "xx" ? "" : "; ") << name << ": tube share " << fmt(tv.fraction) << ", jump part rel "
             << fmt(rel);
    o.require(tv.fraction >= tol::kTubeShare, name + " tube share >= 0.6");
    o.require(rel <= tol::kJumpPart, name + " jump part within 25%");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  const EnergyScan scan = energy_scan(0.07);
  const RadialAltCafSolution& s = scan.best;
  o.require(s.has_free_boundary && s.rho > 0.0 && s.rho < 1.0, "interior minimizer");
  o.require(s.energy < std::numbers::pi, "E < pi");
  const ELReport el = verify_euler_lagrange(s);
  const AltCafRegularity reg = altcaf_regularity_report(s);
  o.require(el.el_relative <= tol::kElRelative, "EL jump law 1e-6");
  o.require(std::abs(el.dE_drho) <= tol::kStationary * s.energy, "stationarity 1e-4 E");
  o.require(reg.c0_gap <= tol::kC2Gap && reg.c1_gap <= tol::kC2Gap && reg.c2_gap <= tol::kC2Gap,
            "u, u', u'' continuous");
  o.require(std::abs(reg.u3_jump) > 0.0 && std::isfinite(reg.sup_u3), "bounded u''' with a jump");
  o.require(reg.zero_crossings == 1, "single zero crossing");
  const double secs = since(t0);
  o.require(secs < tol::kAltCafSeconds, "runtime < 30 s");
  o.detail << "rho* " << fmt(s.rho) << ", E " << fmt(s.energy) << ", EL rel " << fmt(el.el_relative) << ", dE/drho "
           << fmt(el.dE_drho) << ", C2 gap " << fmt(reg.c2_gap) << ", [u'''] " << fmt(reg.u3_jump) << ", "
           << fmt(secs) << " s";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Largest relative difference between numeric cells of two CSV files; -1 if
// the files differ in shape or in a non-numeric cell.
double csv_distance(const std::string& a, const std::string& b) {
  const auto la = split(a, '\n'), lb = split(b, '\n');
  if (la.size() != lb.size()) return -1.0;
  double worst = 0.0;
  for (std::size_t r = 0; r < la.size(); ++r) {
    const auto ca = split(la[r], ','), cb = split(lb[r], ',');
    if (ca.size() != cb.size()) return -1.0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
      if (ca[k] == cb[k]) continue;
      char* ea = nullptr;
      char* eb = nullptr;
      const double x = std::strtod(ca[k].c_str(), &ea), y = std::strtod(cb[k].c_str(), &eb);
      if (*ea || *eb) return -1.0;
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::max(std::abs(x), std::abs(y))));
    }
  }
  return worst;
}

Outcome criterion8() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "polyjump_acceptance_det";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string shape =
      "[curve]\nkind = fourier-star\nr0 = 0.5\nmodes = 3:0.06\n"
      "[density]\nkind = cosine\nmean = 1\namplitude = 0.5\nk = 1\n";
  const std::vector<std::pair<std::string, std::string>> cases{
      {"solve", "[run]\ncommand = solve\nexport_fields = true\n[grid]\nn = 65, 129\n[problem]\nm = 2\n" + shape},
      {"jumps", "[run]\ncommand = jumps\n[grid]\nn = 129\n[problem]\nm = 2\nprobes = 32\n" + shape +
                    "[assert]\njump_median = 1\ntangential_ratio = 10\n"}};
  std::ostringstream log, err;
  int files = 0;
  bool identical = true, exits = true;
  double worst = 0.0;
  for (const auto& [name, text] : cases) {
    const fs::path cfg = root / (name + ".ini");
    std::ofstream(cfg) << text;
    const auto run_with = [&](const std::string& tag, int workers) {
      RunOverrides ov;
      ov.out = (root / (name + "_" + tag)).string();
      ov.workers = workers;
      return run_config_file(cfg.string(), ov, log, err);
    };
    exits = exits && run_with("a", 1) == 0 && run_with("b", 1) == 0 && run_with("c", 4) == 0;
    for (const auto& entry : fs::directory_iterator(root / (name + "_a"))) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const std::string a = slurp(entry.path());
      const std::string b = slurp(root / (name + "_b") / entry.path().filename());
      const std::string c = slurp(root / (name + "_c") / entry.path().filename());
      identical = identical && a == b;
      const double d = csv_distance(a, c);
      worst = d < 0.0 ? INFINITY : std::max(worst, d);
    }
  }
  o.require(exits, "runs exit 0");
  o.require(files >= 5, "CSV outputs present");
  o.require(identical, "single-worker CSVs bit-identical");
  o.require(worst <= tol::kWorkerAgreement, "4-worker CSVs within 1e-12");
  o.detail << files << " CSV files, single-worker identical: " << (identical ? "yes" : "no")
           << ", 4-worker max rel diff " << fmt(worst);
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8};
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = all[k]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %d: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, o.detail.str().c_str(),
                o.failed.empty() ? "" : " | failed: ", o.failed.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed;
}
