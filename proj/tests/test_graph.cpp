#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "hypercount/graph.hpp"

using namespace hypercount::graph;

namespace {

// Faces of the trivalent fat graph with sigma rotating each vertex triple,
// traced as h -> sigma(pairing(h)).
int face_count(const std::vector<int>& pairing) {
  const int n = static_cast<int>(pairing.size());
  std::vector<char> seen(n, 0);
  int faces = 0;
  for (int h = 0; h < n; ++h) {
    if (seen[h]) continue;
    ++faces;
    for (int x = h; !seen[x];) {
      seen[x] = 1;
      const int y = pairing[x];
      x = 3 * (y / 3) + (y % 3 + 1) % 3;
    }
  }
  return faces;
}

// Number of perfect matchings of 3V half-edges whose fat graph has one face.
std::uint64_t one_face_pairings(int V) {
  const int n = 3 * V;
  std::vector<int> p(n, -1);
  std::uint64_t count = 0;
  std::function<void()> rec = [&] {
    int i = 0;
    while (i < n && p[i] >= 0) ++i;
    if (i == n) {
      count += face_count(p) == 1;
      return;
    }
    for (int j = i + 1; j < n; ++j) {
      if (p[j] >= 0) continue;
      p[i] = j;
      p[j] = i;
      rec();
      p[i] = p[j] = -1;
    }
  };
  rec();
  return count;
}

// Fat automorphisms of a trivalent fat graph by trying every vertex
// permutation and rotation.
int brute_force_fat_automorphisms(const FatGraph& x) {
  const auto& pairing = x.graph().pairing();
  const int V = x.graph().vertex_count();
  std::vector<int> perm(V);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    for (int code = 0, total = static_cast<int>(std::pow(3, V)); code < total; ++code) {
      std::vector<int> rot(V);
      for (int v = 0, c = code; v < V; ++v, c /= 3) rot[v] = c % 3;
      auto map = [&](int h) { return 3 * perm[h / 3] + (h % 3 + rot[h / 3]) % 3; };
      bool ok = true;
      for (int h = 0; h < 3 * V && ok; ++h) ok = map(pairing[h]) == pairing[map(h)];
      count += ok;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

const FatCensus& census2() {
  static const FatCensus c = fat_census(2);
  return c;
}

}  // namespace

TEST(Graph, ThetaAndDumbbell) {
  const auto theta = Graph::theta(), dumbbell = Graph::dumbbell();
  for (const auto& g : {theta, dumbbell}) {
    EXPECT_TRUE(g.trivalent_p());
    EXPECT_TRUE(g.connected());
    EXPECT_EQ(g.euler_characteristic(), -1);
    EXPECT_EQ(g.first_betti_number(), 2);
  }
  EXPECT_EQ(graph_automorphisms(theta).size(), 12u);
  EXPECT_EQ(graph_automorphisms(dumbbell).size(), 8u);
  EXPECT_EQ(simple_cycles(theta).size(), 3u);
  EXPECT_EQ(simple_cycles(dumbbell).size(), 2u);
  EXPECT_NE(graph_canonical_code(theta), graph_canonical_code(dumbbell));
}

TEST(Graph, FatStructuresOnTheta) {
  // The two fat structures of theta up to reversal: one face or three.
  std::set<int> counts;
  for (const auto& pairing : {std::vector<int>{3, 4, 5, 0, 1, 2}, std::vector<int>{3, 5, 4, 0, 2, 1}}) {
    const auto x = FatGraph::trivalent(pairing);
    const int F = boundary_count(x);
    counts.insert(F);
    const auto& g = x.graph();
    EXPECT_EQ(g.vertex_count() - g.edge_count() + F, 2 - 2 * genus_of_fat(x));
    EXPECT_EQ(F, face_count(pairing));
  }
  EXPECT_EQ(counts, (std::set<int>{1, 3}));
}

TEST(Graph, DumbbellIsPlanarForEveryCyclicOrder) {
  // Half-edges 0 and 3 form the bridge; loops at 1-2 and 4-5. A loop at a
  // trivalent vertex bounds a face whichever way the vertex is ordered.
  const auto x = FatGraph::trivalent({3, 2, 1, 0, 5, 4});
  EXPECT_EQ(boundary_count(x), 3);
  EXPECT_EQ(genus_of_fat(x), 0);
  EXPECT_EQ(boundary_count(x.reversed()), 3);
  EXPECT_EQ(face_count({3, 2, 1, 0, 5, 4}), 3);
}

TEST(Graph, ReversalPreservesFaceCount) {
  const auto& census = census2();
  for (const auto& e : census.entries) {
    const auto r = e.graph.reversed();
    EXPECT_EQ(boundary_count(r), boundary_count(e.graph));
    EXPECT_EQ(genus_of_fat(r), genus_of_fat(e.graph));
  }
}

TEST(Graph, BoundaryWordUsesEachEdgeTwice) {
  for (int g : {1, 2}) {
    for (const auto& e : (g == 1 ? fat_census(1) : census2()).entries) {
      const auto word = boundary_word(e.graph);
      const auto& gr = e.graph.graph();
      ASSERT_EQ(static_cast<int>(word.size()), gr.half_edge_count());
      std::vector<int> per_edge(gr.edge_count(), 0);
      std::vector<char> seen(gr.half_edge_count(), 0);
      for (std::size_t i = 0; i < word.size(); ++i) {
        const int h = word[i];
        EXPECT_FALSE(seen[h]);
        seen[h] = 1;
        ++per_edge[gr.edge_of(h)];
        // Consecutive half-edges chain through vertices.
        const int next = word[(i + 1) % word.size()];
        EXPECT_EQ(gr.vertex_of(gr.opposite(h)), gr.vertex_of(next));
        EXPECT_EQ(e.graph.next_on_boundary(h), next);
      }
      for (int c : per_edge) EXPECT_EQ(c, 2);
    }
  }
}

TEST(Graph, CensusGenusOne) {
  const auto c = fat_census(1);
  EXPECT_EQ(c.weighted_sum, Rational(1, 6));
  EXPECT_EQ(c.weighted_sum.str(), "1/6");
  EXPECT_EQ(c.labeled_count, one_face_pairings(2));
  EXPECT_EQ(c.labeled_weight, c.weighted_sum);
  for (const auto& e : c.entries) {
    EXPECT_EQ(boundary_count(e.graph), 1);
    EXPECT_EQ(genus_of_fat(e.graph), 1);
  }
}

TEST(Graph, CensusGenusTwoAgainstBruteForce) {
  const auto& c = census2();
  EXPECT_EQ(c.weighted_sum, Rational(35, 6));
  EXPECT_EQ(c.labeled_count, one_face_pairings(6));
  EXPECT_EQ(c.labeled_weight, c.weighted_sum);
  const std::int64_t group = factorial(6) * 729;
  std::int64_t orbit_total = 0;
  std::set<std::vector<int>> codes;
  for (const auto& e : c.entries) {
    EXPECT_EQ(boundary_count(e.graph), 1);
    EXPECT_EQ(genus_of_fat(e.graph), 2);
    const auto& g = e.graph.graph();
    EXPECT_EQ(g.vertex_count() - g.edge_count() + 1, 2 - 2 * 2);
    EXPECT_EQ(e.automorphisms, brute_force_fat_automorphisms(e.graph));
    EXPECT_EQ(e.automorphisms, fat_automorphism_count(e.graph));
    orbit_total += group / e.automorphisms;
    codes.insert(fat_canonical_code(e.graph));
  }
  // Orbits of the relabeling group partition the labeled one-face graphs.
  EXPECT_EQ(static_cast<std::uint64_t>(orbit_total), c.labeled_count);
  EXPECT_EQ(codes.size(), c.entries.size());
}

TEST(Graph, CanonicalCodeIsRelabelingInvariant) {
  const auto& c = census2();
  std::vector<int> perm{3, 0, 5, 1, 4, 2};
  for (const auto& e : c.entries) {
    const auto& pairing = e.graph.graph().pairing();
    auto map = [&](int h) { return 3 * perm[h / 3] + (h % 3 + 1) % 3; };
    std::vector<int> q(pairing.size());
    for (std::size_t h = 0; h < pairing.size(); ++h) q[map(static_cast<int>(h))] = map(pairing[h]);
    EXPECT_EQ(fat_canonical_code(FatGraph::trivalent(q)), fat_canonical_code(e.graph));
  }
}

TEST(Graph, GraphCensusIsIsomorphFree) {
  const auto one = graph_census(-1);
  EXPECT_EQ(one.size(), 2u);
  const auto two = graph_census(-2);
  std::set<std::vector<int>> codes;
  for (const auto& g : two) {
    EXPECT_TRUE(g.connected());
    EXPECT_EQ(g.euler_characteristic(), -2);
    codes.insert(graph_canonical_code(g));
  }
  EXPECT_EQ(codes.size(), two.size());
  EXPECT_GE(two.size(), 2u);
}

TEST(Graph, FileRoundTrip) {
  for (const auto& e : census2().entries) {
    const auto text = write_graph_text(e.graph);
    const auto back = parse_graph_text(text);
    ASSERT_TRUE(back.has_cyclic);
    EXPECT_EQ(fat_canonical_code(back.fat), fat_canonical_code(e.graph));
    EXPECT_EQ(back.fat.sigma(), e.graph.sigma());
  }
  const auto path = std::filesystem::temp_directory_path() / "hypercount_graph_test.yaml";
  {
    std::ofstream out(path);
    out << "half_edges: 6\npairing: [3, 4, 5, 0, 1, 2]\n";
  }
  const auto f = read_graph_file(path.string());
  EXPECT_FALSE(f.has_cyclic);
  EXPECT_EQ(graph_canonical_code(f.graph), graph_canonical_code(Graph::theta()));
  std::filesystem::remove(path);
}

TEST(Graph, MalformedFilesAreRejected) {
  EXPECT_ANY_THROW(parse_graph_text("half_edges: 4\npairing: [1, 0, 2, 3]\n"));
  EXPECT_ANY_THROW(parse_graph_text("half_edges: 6\npairing: [3, 4, 5, 0, 1]\n"));
  EXPECT_ANY_THROW(parse_graph_text("pairing: [1, 0]\ncyclic: [0, 0]\n"));
  EXPECT_ANY_THROW(read_graph_file("/nonexistent/graph.yaml"));
}
