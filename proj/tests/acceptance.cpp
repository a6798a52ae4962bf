// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime caps are fixed below.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hypercount/graph.hpp"
#include "hypercount/hyperbolic.hpp"
#include "hypercount/lab.hpp"
#include "hypercount/realization.hpp"
#include "hypercount/surface.hpp"
#include "oracles.hpp"

using namespace hypercount;
using hyperbolic::kPi;
using hyperbolic::kTwoPi;
using hyperbolic::Point;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const surface::SurfaceGroup& genus2() {
  static const surface::SurfaceGroup s(2);
  return s;
}

// Every experiment run here, kept for the determinism pass.
std::vector<std::pair<lab::ExperimentConfig, std::string>> g_runs;

std::vector<lab::ReportRow> run(lab::ExperimentConfig c) {
  c.timing = false;
  auto res = lab::run_experiment(c);
  g_runs.emplace_back(c, lab::format_report(res.rows, "csv"));
  return res.rows;
}

lab::ExperimentConfig config(lab::Kind kind, double L = 0.0) {
  lab::ExperimentConfig c;
  c.kind = kind;
  c.L = L;
  return c;
}

Point random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), r(0.0, radius);
  return hyperbolic::exp_map(Point::reference(), ang(rng), r(rng));
}

// ---------------------------------------------------------------------------

using Vec3 = std::array<double, 3>;

double minkowski(const Vec3& x, const Vec3& y) { return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

// Loop defect built in the hyperboloid: x at distance d from the axis of a
// boost of length ell, directions read in an orthonormal frame at x.
double hyperboloid_defect(double d, double ell) {
  const Vec3 x{std::cosh(d), std::sinh(d), 0.0};
  auto boost = [](const Vec3& v, double t) {
    return Vec3{std::cosh(t) * v[0] + std::sinh(t) * v[2], v[1], std::sinh(t) * v[0] + std::cosh(t) * v[2]};
  };
  const Vec3 fwd = boost(x, ell), bwd = boost(x, -ell);
  const Vec3 e1{std::sinh(d), std::cosh(d), 0.0}, e2{0.0, 0.0, 1.0};
  const double a = std::atan2(minkowski(fwd, e2), minkowski(fwd, e1));
  const double b = std::atan2(-minkowski(bwd, e2), -minkowski(bwd, e1));
  return std::abs(std::remainder(a - b, kTwoPi));
}

Verdict geometry() {
  Verdict v;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), len(1e-3, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_point(rng, 6.0);
    const double a = ang(rng), t = len(rng);
    const auto lg = hyperbolic::log_map(p, hyperbolic::exp_map(p, a, t));
    worst = std::max({worst, std::abs(lg.length - t), std::abs(std::remainder(lg.direction.angle - a, kTwoPi))});
  }
  v.check(worst <= 1e-9, "exp/log " + fmt("%.2e", worst));
  double slack = 1.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_point(rng, 6.0), q = random_point(rng, 6.0), r = random_point(rng, 6.0);
    slack = std::min(slack, hyperbolic::dist(p, q) + hyperbolic::dist(q, r) - hyperbolic::dist(p, r));
  }
  v.check(slack >= -1e-10, "triangle slack " + fmt("%.2e", slack));
  std::uniform_real_distribution<double> dd(0.0, 3.0), ll(0.1, 8.0);
  double defect = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double d = dd(rng), ell = ll(rng);
    defect = std::max(defect, std::abs(hyperbolic::angle_defect_of_loop(d, ell) - hyperboloid_defect(d, ell)));
  }
  v.check(defect <= 1e-9, "angle defect " + fmt("%.2e", defect));
  return v;
}

Verdict surface_construction() {
  Verdict v;
  const surface::SurfaceGroup s(2);
  const double rel = s.evaluate(s.relator()).distance_to_identity();
  v.check(rel <= 1e-9, "relator " + fmt("%.2e", rel));
  v.check(std::abs(s.area() - 4.0 * kPi) <= 1e-9, "area " + fmt("%.12f", s.area()));
  v.check(s.unit_tangent_volume() == 8.0 * kPi * kPi, "vol(T1) " + fmt("%.12f", s.unit_tangent_volume()));
  return v;
}

Verdict delsarte() {
  Verdict v;
  const auto rows = run(config(lab::Kind::Delsarte, 10.0));
  v.check(rows[0].ratio >= 0.80 && rows[0].ratio <= 1.25, "L=10 ratio " + fmt("%.4f", rows[0].ratio));
  const auto& s = genus2();
  const auto got = surface::enumerate_orbit(s, s.base_point(), s.base_point(), 6.0).size();
  const auto k7 = oracle::orbit_oracle(s, 7, 6.0), k8 = oracle::orbit_oracle(s, 8, 6.0);
  v.check(got == k8 && k7 == k8, "L=6 " + std::to_string(got) + " vs word search " + std::to_string(k8));
  return v;
}

Verdict sectors() {
  Verdict v;
  auto c = config(lab::Kind::Sectors, 10.0);
  c.h = 1.0;
  c.sector_i = c.sector_j = kPi;
  const auto rows = run(c);
  v.check(rows[0].ratio >= 0.75 && rows[0].ratio <= 1.30, "L=10 ratio " + fmt("%.4f", rows[0].ratio));
  const auto& s = genus2();
  const surface::Sector I{0.0, kPi}, J{0.0, kPi};
  std::set<surface::Word> got;
  for (const auto& a : surface::enumerate_sector_arcs(s, s.base_point(), I, s.base_point(), J, 6.0, 1.0))
    got.insert(a.element.word);
  const auto want = oracle::sector_oracle(s, s.base_point(), I, s.base_point(), J, 6.0, 1.0);
  v.check(got == want && !got.empty(), "L=6 " + std::to_string(got.size()) + " vs filter " + std::to_string(want.size()));
  return v;
}

Verdict huber() {
  Verdict v;
  const auto rows = run(config(lab::Kind::Huber, 10.0));
  for (const auto& r : rows) {
    const std::string q = r.params["quantity"];
    if (q == "primitive") v.check(r.ratio >= 0.75 && r.ratio <= 1.30, "L=10 primitive ratio " + fmt("%.4f", r.ratio));
    if (q == "primitive_fraction") v.check(r.measured >= 0.95, "primitive fraction " + fmt("%.4f", r.measured));
  }
  const auto& s = genus2();
  std::set<surface::Word> got;
  for (const auto& k : surface::enumerate_conjugacy_classes(s, 6.0)) got.insert(k.cyclic_word);
  const auto k7 = oracle::class_oracle(s, 7, 6.0), k8 = oracle::class_oracle(s, 8, 6.0);
  v.check(got == k8 && k7 == k8, "L=6 " + std::to_string(got.size()) + " vs word search " + std::to_string(k8.size()));
  return v;
}

Verdict hexagon() {
  Verdict v;
  auto c = config(lab::Kind::Hexagon);
  c.epsilon = 0.01;
  const auto rows = run(c);
  v.check(std::abs(rows[0].ratio - 1.0) <= 0.01, "diameter/eps " + fmt("%.6f", rows[0].measured));
  v.check(std::abs(rows[1].ratio - 1.0) <= 0.02, "area/eps^2 " + fmt("%.6f", rows[1].measured));
  return v;
}

Verdict census() {
  Verdict v;
  for (int g : {1, 2}) {
    auto c = config(lab::Kind::Census);
    c.genus = g;
    run(c);
    const auto cen = graph::fat_census(g);
    const graph::Rational want = g == 1 ? graph::Rational(1, 6) : graph::Rational(35, 6);
    bool entries_ok = true;
    for (const auto& e : cen.entries)
      entries_ok = entries_ok && graph::boundary_count(e.graph) == 1 && graph::genus_of_fat(e.graph) == g;
    v.check(cen.weighted_sum == want, "g=" + std::to_string(g) + " sum " + cen.weighted_sum.str());
    v.check(entries_ok, "g=" + std::to_string(g) + " " + std::to_string(cen.entries.size()) + " one-boundary entries");
  }
  return v;
}

// ---------------------------------------------------------------------------

double length_at(const realization::MarkedRepresentation& rep, const std::vector<Point>& p) {
  return realization::Realization(genus2(), rep, p).total_length();
}

std::vector<Point> random_positions(std::mt19937_64& rng, int n, double radius) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back(random_point(rng, radius));
  return out;
}

Verdict minimizer() {
  Verdict v;
  const auto& s = genus2();
  std::mt19937_64 rng(108);
  // 80 theta, 60 dumbbell, 60 on a genus-2 fat graph. Spanning-tree words
  // rarely give a critical component on the last, so edge words are drawn.
  const std::vector<std::pair<graph::Graph, int>> plan{
      {graph::Graph::theta(), 80}, {graph::Graph::dumbbell(), 60}, {lab::genus_fat_graph(2).graph(), 60}};
  double grad = 0.0, angle = 0.0, spread = 0.0, fd_err = 0.0, second = 1e300;
  int components = 0;
  for (const auto& [g, n] : plan) {
    const bool edge_words = g.vertex_count() > 2;
    for (int i = 0; i < n; ++i, ++components) {
      const auto sc = lab::sample_critical(s, g, rng, edge_words);
      const realization::Realization crit(s, sc.rep, sc.result.lifts);
      const auto report = realization::criticality_report(crit);
      grad = std::max(grad, report.gradient_norm);
      angle = std::max(angle, report.max_angle_deviation);
      for (int k = 0; k < 5; ++k) {
        const auto other = realization::minimize_to_critical(s, sc.rep, random_positions(rng, g.vertex_count(), 1.0));
        if (other.status != realization::MinimizeStatus::Critical) {
          spread = 1e300;
          continue;
        }
        for (int w = 0; w < g.vertex_count(); ++w) {
          const auto rel = s.evaluate(s.dehn_reduce(surface::inverse(sc.result.lifts[w].frame) + other.lifts[w].frame));
          spread = std::max(spread, hyperbolic::dist(sc.result.lifts[w].local, hyperbolic::apply(rel, other.lifts[w].local)));
        }
      }
      // Gradient and convexity away from the critical point.
      const auto pos = random_positions(rng, g.vertex_count(), 1.5);
      const auto gr = realization::gradient(realization::Realization(s, sc.rep, pos));
      double num = 0.0, den = 0.0;
      for (int w = 0; w < g.vertex_count(); ++w) {
        double fd[2];
        for (int k = 0; k < 2; ++k) {
          auto plus = pos, minus = pos;
          plus[w] = hyperbolic::exp_map(pos[w], k * kPi / 2.0, 1e-5);
          minus[w] = hyperbolic::exp_map(pos[w], k * kPi / 2.0 + kPi, 1e-5);
          fd[k] = (length_at(sc.rep, plus) - length_at(sc.rep, minus)) / 2e-5;
        }
        num += std::pow(fd[0] - gr[w].vx, 2) + std::pow(fd[1] - gr[w].vy, 2);
        den += std::pow(gr[w].vx, 2) + std::pow(gr[w].vy, 2);
      }
      fd_err = std::max(fd_err, std::sqrt(num / den));
      const auto other = random_positions(rng, g.vertex_count(), 1.5);
      std::vector<double> f;
      for (int k = 0; k <= 10; ++k) {
        std::vector<Point> mid;
        for (int w = 0; w < g.vertex_count(); ++w) {
          const double d = hyperbolic::dist(pos[w], other[w]);
          mid.push_back(d < 1e-12 ? pos[w]
                                  : hyperbolic::exp_map(hyperbolic::log_map(pos[w], other[w]).direction, k * d / 10.0));
        }
        f.push_back(length_at(sc.rep, mid));
      }
      for (int k = 1; k < 10; ++k) second = std::min(second, f[k - 1] - 2.0 * f[k] + f[k + 1]);
    }
  }
  v.check(components == 200, std::to_string(components) + " components");
  v.check(grad <= 1e-9, "gradient " + fmt("%.2e", grad));
  v.check(angle <= 1e-6, "angles " + fmt("%.2e", angle));
  v.check(spread <= 1e-7, "5-start spread " + fmt("%.2e", spread));
  v.check(fd_err <= 1e-6, "finite differences " + fmt("%.2e", fd_err));
  v.check(second >= -1e-8, "second differences " + fmt("%.2e", second));
  return v;
}

Verdict lambda_audit() {
  Verdict v;
  auto c = config(lab::Kind::LambdaAudit);
  c.genus_fat = 1;
  c.samples = 100;
  c.min_edge = 8.0;
  c.seed = 9;
  const auto rows = run(c);
  int good = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    const double e = std::abs(r.measured - r.predicted);
    good += e <= 0.01;
    worst = std::max(worst, e);
  }
  v.check(rows.size() == 100 && good >= 99,
          std::to_string(good) + "/" + std::to_string(rows.size()) + " within 0.01, worst " + fmt("%.2e", worst));
  return v;
}

Verdict fat_fraction() {
  Verdict v;
  auto c = config(lab::Kind::FatFraction);
  c.samples = 2000;
  c.seed = 10;
  const auto rows = run(c);
  v.check(rows[0].measured >= 0.20 && rows[0].measured <= 0.30, "fraction " + fmt("%.4f", rows[0].measured));
  return v;
}

Verdict critical_count() {
  Verdict v;
  auto c = config(lab::Kind::CriticalCount, 8.0);
  c.graph = "theta";
  for (const auto& r : run(c))
    if (r.params["count"] == "raw")
      v.check(r.ratio >= 0.4 && r.ratio <= 2.0,
              "L=8 raw " + fmt("%.0f", r.measured) + " ratio " + fmt("%.4f", r.ratio));
  auto o = config(lab::Kind::OracleCheck, 5.0);
  o.graph = "theta";
  bool equal = true;
  for (const auto& r : run(o)) equal = equal && r.measured == r.predicted && r.measured > 0;
  v.check(equal, "L=5 pruned equals unpruned");
  return v;
}

Verdict determinism() {
  Verdict v;
  const auto first = g_runs;
  int identical = 0;
  for (const auto& [c0, text] : first) {
    bool same = true;
    for (int threads : {1, 2, 8}) {
      auto c = c0;
      c.threads = threads;
      c.timing = false;
      same = same && lab::format_report(lab::run_experiment(c).rows, "csv") == text;
    }
    identical += same;
    if (!same) v.check(false, std::string(lab::kind_name(c0.kind)) + " differs");
  }
  v.check(identical == static_cast<int>(first.size()),
          std::to_string(identical) + "/" + std::to_string(first.size()) + " reports identical over reruns at 1, 2, 8 threads");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double max_seconds;
    std::function<Verdict()> f;
  };
  const std::vector<Criterion> criteria{
      {1, "geometry", 5, geometry},
      {2, "surface", 1, surface_construction},
      {3, "delsarte", 60, delsarte},
      {4, "sectors", 120, sectors},
      {5, "huber", 120, huber},
      {6, "hexagon", 10, hexagon},
      {7, "census", 30, census},
      {8, "minimizer", 60, minimizer},
      {9, "lambda-audit", 60, lambda_audit},
      {10, "fat-fraction", 300, fat_fraction},
      {11, "critical-count", 600, critical_count},
      {12, "determinism", 1e9, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.f();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.max_seconds) v.check(false, "runtime over " + fmt("%.0f s", c.max_seconds));
    failed += !v.pass;
    std::printf("criterion %2d %-15s %s  %s (%.1f s)\n", c.id, c.name, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
