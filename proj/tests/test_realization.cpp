#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "hypercount/lab.hpp"
#include "hypercount/realization.hpp"

using namespace hypercount;
using namespace hypercount::realization;
using hyperbolic::kPi;
using hyperbolic::kTwoPi;

namespace {

const SurfaceGroup& genus2() {
  static const SurfaceGroup s(2);
  return s;
}

std::vector<Point> random_positions(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), r(0.0, radius);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back(hyperbolic::exp_map(Point::reference(), ang(rng), r(rng)));
  return out;
}

double length_at(const SurfaceGroup& s, const MarkedRepresentation& rep, const std::vector<Point>& p) {
  return Realization(s, rep, p).total_length();
}

// Positions moved t of the way along the geodesics from a to b.
std::vector<Point> interpolate(const std::vector<Point>& a, const std::vector<Point>& b, double t) {
  std::vector<Point> out;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const double d = hyperbolic::dist(a[v], b[v]);
    out.push_back(d < 1e-12 ? a[v] : hyperbolic::exp_map(hyperbolic::log_map(a[v], b[v]).direction, t * d));
  }
  return out;
}

std::vector<Graph> test_graphs() {
  return {Graph::theta(), Graph::dumbbell(), lab::genus_fat_graph(2).graph()};
}

}  // namespace

TEST(Realization, GradientMatchesFiniteDifferences) {
  const auto& s = genus2();
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (const auto& g : test_graphs()) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto rep = lab::random_representation(s, g, rng);
      const auto pos = random_positions(rng, g.vertex_count(), 1.5);
      const Realization r(s, rep, pos);
      const auto grad = gradient(r);
      const double step = 1e-5;
      double num = 0.0, den = 0.0;
      for (int v = 0; v < g.vertex_count(); ++v) {
        double fd[2];
        for (int k = 0; k < 2; ++k) {
          auto plus = pos, minus = pos;
          plus[v] = hyperbolic::exp_map(pos[v], k * kPi / 2.0, step);
          minus[v] = hyperbolic::exp_map(pos[v], k * kPi / 2.0 + kPi, step);
          fd[k] = (length_at(s, rep, plus) - length_at(s, rep, minus)) / (2.0 * step);
        }
        num += std::pow(fd[0] - grad[v].vx, 2) + std::pow(fd[1] - grad[v].vy, 2);
        den += std::pow(grad[v].vx, 2) + std::pow(grad[v].vy, 2);
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Realization, LengthIsConvexAlongGeodesicInterpolation) {
  const auto& s = genus2();
  std::mt19937_64 rng(32);
  int strict = 0, total = 0;
  for (const auto& g : test_graphs()) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto rep = lab::random_representation(s, g, rng);
      const auto a = random_positions(rng, g.vertex_count(), 2.0), b = random_positions(rng, g.vertex_count(), 2.0);
      std::vector<double> f;
      for (int k = 0; k <= 20; ++k) f.push_back(length_at(s, rep, interpolate(a, b, k / 20.0)));
      double min_second = 1e300;
      for (int k = 1; k < 20; ++k) min_second = std::min(min_second, f[k - 1] - 2.0 * f[k] + f[k + 1]);
      EXPECT_GE(min_second, -1e-8);
      strict += min_second > 0.0;
      ++total;
    }
  }
  // Random images are not close to a single geodesic.
  EXPECT_EQ(strict, total);
}

TEST(Realization, CriticalPointIsUniqueAndGlobalMinimum) {
  const auto& s = genus2();
  std::mt19937_64 rng(33);
  for (const auto& g : test_graphs()) {
    // Spanning-tree words rarely give a critical component on the genus-2
    // graph; edge words do.
    const bool edge_words = g.vertex_count() > 2;
    for (int trial = 0; trial < 4; ++trial) {
      const auto sc = lab::sample_critical(s, g, rng, edge_words);
      const auto& ref = sc.result;
      const auto crit = Realization(s, sc.rep, ref.lifts);
      const auto report = criticality_report(crit);
      EXPECT_LE(report.gradient_norm, 1e-9);
      EXPECT_LE(report.max_angle_deviation, 1e-6);
      for (int k = 0; k < 5; ++k) {
        const auto other =
            minimize_to_critical(s, sc.rep, random_positions(rng, g.vertex_count(), 1.0));
        ASSERT_EQ(other.status, MinimizeStatus::Critical) << other.reason;
        // Lifts sit far out; compare them through the relative frame word.
        for (int v = 0; v < g.vertex_count(); ++v) {
          const auto rel = s.evaluate(s.dehn_reduce(inverse(ref.lifts[v].frame) + other.lifts[v].frame));
          EXPECT_LE(hyperbolic::dist(ref.lifts[v].local, hyperbolic::apply(rel, other.lifts[v].local)), 1e-7);
        }
        EXPECT_NEAR(other.length, ref.length, 1e-7);
      }
      for (int k = 0; k < 100; ++k) {
        const double l = length_at(s, sc.rep, random_positions(rng, g.vertex_count(), 3.0));
        EXPECT_GE(l, ref.length - 1e-9);
      }
    }
  }
}

TEST(Realization, AbelianImageIsDegenerate) {
  const auto& s = genus2();
  const Graph g = Graph::theta();
  MarkedRepresentation rep{g, bfs_spanning_tree(g, 0), std::vector<Word>(g.edge_count())};
  std::vector<Word> words{"ab", "abab"};
  for (int e = 0, k = 0; e < g.edge_count(); ++e)
    if (!rep.tree[e]) rep.holonomy[e] = words[k++];
  EXPECT_TRUE(abelian_image(s, rep));
  const auto res = minimize_to_critical(s, rep, default_start(g, s.base_point()));
  EXPECT_EQ(res.status, MinimizeStatus::Degenerate);
  words = {"ab", "c"};
  for (int e = 0, k = 0; e < g.edge_count(); ++e)
    if (!rep.tree[e]) rep.holonomy[e] = words[k++];
  EXPECT_FALSE(abelian_image(s, rep));
}

TEST(Realization, LambdaBoundaryIsNullHomologousAndReverses) {
  const auto& s = genus2();
  std::mt19937_64 rng(34);
  for (int genus_fat : {1, 2}) {
    const auto fx = lab::genus_fat_graph(genus_fat);
    for (int trial = 0; trial < 5; ++trial) {
      const auto sc = lab::sample_critical(s, fx.graph(), rng, false);
      const Realization r(s, sc.rep, sc.result.lifts);
      const auto b = lambda_boundary(s, fx, r);
      EXPECT_EQ(s.abelianize(b.word), std::vector<int>(4, 0));
      const auto rb = lambda_boundary(s, fx.reversed(), r);
      EXPECT_EQ(rb.klass.cyclic_word, s.conjugacy_class(inverse(b.word)).cyclic_word);
      EXPECT_NEAR(rb.length, b.length, 1e-8);
    }
  }
}

TEST(Realization, ExactlyOneFatStructureIsCompatible) {
  const auto& s = genus2();
  std::mt19937_64 rng(35);
  const Graph g = Graph::theta();
  for (int trial = 0; trial < 20; ++trial) {
    const auto sc = lab::sample_critical(s, g, rng, false);
    const Realization r(s, sc.rep, sc.result.lifts);
    int compatible = 0;
    for (int mask = 0; mask < 4; ++mask) {
      std::vector<int> sigma(6);
      for (int v = 0; v < 2; ++v)
        for (int i = 0; i < 3; ++i)
          sigma[3 * v + i] = 3 * v + ((mask >> v) & 1 ? (i + 2) % 3 : (i + 1) % 3);
      const bool ok = is_fat_compatible(graph::FatGraph(g.pairing(), sigma), r);
      compatible += ok;
    }
    EXPECT_EQ(compatible, 1);
  }
}

TEST(Realization, SectorVolumeAgainstGrid) {
  // Triples of directions with all pairwise unoriented angles within eps of
  // 2pi/3; the first direction is fixed at 0 and contributes 2pi.
  const double eps = 0.2;
  const int n = 4000;
  const double cell = kTwoPi / n;
  std::size_t hits = 0;
  auto ok = [&](double a) { return std::abs(std::abs(std::remainder(a, kTwoPi)) - kTwoPi / 3.0) <= eps; };
  for (int i = 0; i < n; ++i) {
    const double t2 = (i + 0.5) * cell;
    if (!ok(t2)) continue;
    for (int j = 0; j < n; ++j) {
      const double t3 = (j + 0.5) * cell;
      hits += ok(t3) && ok(t3 - t2);
    }
  }
  const double grid = kTwoPi * static_cast<double>(hits) * cell * cell;
  EXPECT_NEAR(grid, fixed_vertex_sector_volume(eps, 1), 0.01 * grid);
  EXPECT_NEAR(fixed_vertex_sector_volume(eps, 2), std::pow(12.0 * kPi * eps * eps, 2), 1e-15);
}

TEST(Realization, BoxPredictionFollowsFromSectorCounts) {
  const double vol = 4.0 * kPi, eps = 0.01;
  for (int chi : {-1, -2}) {
    const int V = -2 * chi, E = -3 * chi;
    std::vector<double> lower(E, 3.0);
    lower[0] = 4.5;
    const double h = 0.7;
    double norm = 0.0;
    for (double l : lower) norm += l;
    // Per-edge sector counts with the eps-critical volume at each vertex,
    // integrated over the vertex positions, divided by the hexagon area per
    // vertex.
    const double eps_critical = fixed_vertex_sector_volume(eps, V) / std::pow(4.0 * kPi, E) *
                                std::pow(std::expm1(h), E) * std::exp(norm) / std::pow(vol, E) * std::pow(vol, V);
    const double oracle = eps_critical / std::pow(2.0 / std::sqrt(3.0) * eps * eps, V);
    EXPECT_NEAR(box_count_prediction(chi, lower, h, vol) / oracle, 1.0, 1e-12);
  }
}

TEST(Realization, CountPredictionIntegratesBoxDensity) {
  // Box density for theta integrated over the simplex sum L_e <= L:
  // density * (e^L (L^2/2 - L + 1) - 1).
  const double vol = 4.0 * kPi;
  const double density = box_count_prediction(-1, {1.0, 1.0, 1.0}, 1e-6, vol) / std::pow(std::expm1(1e-6), 3) /
                         std::exp(3.0);
  for (double L : {50.0, 200.0}) {
    const double exact = density * (std::exp(L) * (L * L / 2.0 - L + 1.0) - 1.0);
    const double pred = critical_count_prediction(-1, L, 2.0 * kPi * vol);
    EXPECT_NEAR(pred / exact, 1.0, 2.5 / L);
  }
  EXPECT_NEAR(critical_count_prediction(-1, 8.0, 8.0 * kPi * kPi), 4077.46, 0.01);
  EXPECT_NEAR(kappa(1), 3.0 * std::log(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(kappa(1), 0.863046, 1e-6);
  EXPECT_NEAR(kappa(2), 9.0 * std::log(4.0 / 3.0), 1e-15);
}

TEST(Realization, PrunedMatchesBruteForceAtFive) {
  const auto& s = genus2();
  for (const auto& g : {Graph::theta(), Graph::dumbbell()}) {
    const auto pruned = enumerate_critical(s, g, 5.0);
    const auto brute = enumerate_critical_brute_force(s, g, 5.0);
    EXPECT_EQ(pruned.raw_count, brute.raw_count);
    EXPECT_EQ(pruned.quotient_count, brute.quotient_count);
    for (const auto& b : brute.components) {
      bool found = false;
      for (const auto& p : pruned.components)
        if (std::abs(p.length - b.length) < 1e-6 && equivalent_components(s, p, b)) {
          found = true;
          break;
        }
      EXPECT_TRUE(found) << "length " << b.length;
    }
    for (const auto& p : pruned.components) EXPECT_LE(p.length, 5.0);
  }
}

TEST(Realization, NothingBelowTheCycleBound) {
  // Each of the three cycles of theta has length at least the systole and
  // together they cover every edge twice.
  const auto& s = genus2();
  const auto res = enumerate_critical(s, Graph::theta(), 3.0);
  EXPECT_EQ(res.raw_count, 0u);
  EXPECT_TRUE(res.components.empty());
}

TEST(Realization, EnumerationIsThreadInvariant) {
  const auto& s = genus2();
  const auto g = Graph::theta();
  EnumerateOptions opt;
  opt.threads = 1;
  const auto one = enumerate_critical(s, g, 5.5, opt);
  for (int threads : {2, 8}) {
    opt.threads = threads;
    const auto other = enumerate_critical(s, g, 5.5, opt);
    ASSERT_EQ(other.components.size(), one.components.size());
    for (std::size_t i = 0; i < one.components.size(); ++i) {
      EXPECT_EQ(other.components[i].rep.holonomy, one.components[i].rep.holonomy);
      EXPECT_EQ(other.components[i].length, one.components[i].length);
      EXPECT_EQ(other.components[i].orbit, one.components[i].orbit);
    }
    EXPECT_EQ(other.quotient_count, one.quotient_count);
  }
}
