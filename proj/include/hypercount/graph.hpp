#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypercount::graph {

// Graph on half-edges: pairing is a fixed-point-free involution, vertex_of
// partitions the half-edges into vertices 0..V-1.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<int> pairing, std::vector<int> vertex_of);
  // Vertex v owns half-edges 3v, 3v+1, 3v+2.
  static Graph trivalent(std::vector<int> pairing);
  static Graph theta();
  static Graph dumbbell();

  int half_edge_count() const { return static_cast<int>(pairing_.size()); }
  int vertex_count() const { return static_cast<int>(at_vertex_.size()); }
  int edge_count() const { return half_edge_count() / 2; }
  int euler_characteristic() const { return vertex_count() - edge_count(); }
  int first_betti_number() const { return 1 - euler_characteristic(); }

  int opposite(int h) const { return pairing_[h]; }
  int vertex_of(int h) const { return vertex_of_[h]; }
  const std::vector<int>& half_edges_at(int v) const { return at_vertex_[v]; }
  const std::vector<int>& pairing() const { return pairing_; }
  const std::vector<int>& vertex_map() const { return vertex_of_; }

  // Edge e consists of half-edges tail_half(e) < head_half(e); it runs from
  // vertex_of(tail_half) to vertex_of(head_half).
  int edge_of(int h) const { return edge_of_[h]; }
  int tail_half(int e) const { return edge_halves_[2 * e]; }
  int head_half(int e) const { return edge_halves_[2 * e + 1]; }
  int tail(int e) const { return vertex_of(tail_half(e)); }
  int head(int e) const { return vertex_of(head_half(e)); }
  bool is_tail(int h) const { return h < pairing_[h]; }
  bool is_loop(int e) const { return tail(e) == head(e); }

  bool connected() const;
  bool trivalent_p() const;

 private:
  std::vector<int> pairing_;
  std::vector<int> vertex_of_;
  std::vector<std::vector<int>> at_vertex_;
  std::vector<int> edge_of_;
  std::vector<int> edge_halves_;
};

// Graph with a cyclic order sigma at each vertex; the cycles of sigma are
// exactly the vertices.
class FatGraph {
 public:
  FatGraph() = default;
  FatGraph(std::vector<int> pairing, std::vector<int> sigma);
  // Trivalent, sigma rotates (3v, 3v+1, 3v+2).
  static FatGraph trivalent(std::vector<int> pairing);

  const Graph& graph() const { return graph_; }
  const std::vector<int>& sigma() const { return sigma_; }
  int next_around_vertex(int h) const { return sigma_[h]; }
  // Successor along a boundary component.
  int next_on_boundary(int h) const { return sigma_[graph_.opposite(h)]; }
  FatGraph reversed() const;  // sigma inverted

 private:
  Graph graph_;
  std::vector<int> sigma_;
};

// Faces as sequences of half-edges h, next(h), ...; each half-edge h stands
// for its edge traversed from vertex_of(h).
std::vector<std::vector<int>> boundary_cycles(const FatGraph& x);
int boundary_count(const FatGraph& x);
int genus_of_fat(const FatGraph& x);
// The face of a one-boundary fat graph, starting at the smallest half-edge.
std::vector<int> boundary_word(const FatGraph& x);
int fat_automorphism_count(const FatGraph& x);
// Half-edge permutations commuting with the pairing and preserving vertices.
std::vector<std::vector<int>> graph_automorphisms(const Graph& g);
// Canonical code; equal codes iff isomorphic.
std::vector<int> fat_canonical_code(const FatGraph& x);
std::vector<int> graph_canonical_code(const Graph& g);

// Simple cycle as a closed walk: half-edge h_i is traversed from
// vertex_of(h_i) to vertex_of(opposite(h_i)) = vertex_of(h_{i+1}).
struct Cycle {
  std::vector<int> walk;
  std::vector<int> edge_use;  // 0/1 per edge
};
// Every simple cycle once (loops and multi-edge 2-cycles included), in a
// fixed order, each walked from its smallest vertex.
std::vector<Cycle> simple_cycles(const Graph& g);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  Rational operator+(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct CensusEntry {
  FatGraph graph;
  int automorphisms = 1;
};
struct FatCensus {
  int genus = 0;
  std::vector<CensusEntry> entries;
  Rational weighted_sum;              // sum of 1/|Aut|
  std::uint64_t labeled_count = 0;    // one-face pairings with sigma fixed
  Rational labeled_weight;            // labeled_count / (3^V V!)
};
// One-boundary trivalent fat graphs of genus g (V = 4g - 2) up to isomorphism.
FatCensus fat_census(int genus);
// Connected trivalent graphs of Euler characteristic chi up to isomorphism.
std::vector<Graph> graph_census(int chi);

// Graph files: "half_edges: N", "pairing: [...]", optional "cyclic: [...]"
// (sigma; its cycles are the vertices), optional "vertex_of: [...]" for bare
// graphs (default: consecutive triples).
struct GraphFile {
  Graph graph;
  bool has_cyclic = false;
  FatGraph fat;
};
GraphFile read_graph_file(const std::string& path);
GraphFile parse_graph_text(const std::string& text);
std::string write_graph_text(const FatGraph& x);

}  // namespace hypercount::graph
