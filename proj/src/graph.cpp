#include "hypercount/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hypercount::graph {

namespace {

void check_pairing(const std::vector<int>& pairing) {
  const int n = static_cast<int>(pairing.size());
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("half-edge count must be positive and even");
  for (int h = 0; h < n; ++h) {
    const int o = pairing[h];
    if (o < 0 || o >= n) throw std::invalid_argument("pairing index out of range at half-edge " + std::to_string(h));
    if (o == h) throw std::invalid_argument("pairing has a fixed point at half-edge " + std::to_string(h));
    if (pairing[o] != h) throw std::invalid_argument("pairing is not an involution at half-edge " + std::to_string(h));
  }
}

}  // namespace

Graph::Graph(std::vector<int> pairing, std::vector<int> vertex_of)
    : pairing_(std::move(pairing)), vertex_of_(std::move(vertex_of)) {
  check_pairing(pairing_);
  const int n = half_edge_count();
  if (static_cast<int>(vertex_of_.size()) != n) throw std::invalid_argument("vertex_of has the wrong length");
  int vmax = -1;
  for (int h = 0; h < n; ++h) {
    if (vertex_of_[h] < 0) throw std::invalid_argument("negative vertex at half-edge " + std::to_string(h));
    vmax = std::max(vmax, vertex_of_[h]);
  }
  at_vertex_.assign(vmax + 1, {});
  for (int h = 0; h < n; ++h) at_vertex_[vertex_of_[h]].push_back(h);
  for (int v = 0; v <= vmax; ++v)
    if (at_vertex_[v].empty()) throw std::invalid_argument("vertex " + std::to_string(v) + " has no half-edges");
  edge_of_.assign(n, -1);
  for (int h = 0; h < n; ++h) {
    if (h < pairing_[h]) {
      edge_of_[h] = edge_of_[pairing_[h]] = static_cast<int>(edge_halves_.size() / 2);
      edge_halves_.push_back(h);
      edge_halves_.push_back(pairing_[h]);
    }
  }
}

Graph Graph::trivalent(std::vector<int> pairing) {
  if (pairing.size() % 3 != 0) throw std::invalid_argument("trivalent graphs need 3V half-edges");
  std::vector<int> vertex_of(pairing.size());
  for (std::size_t h = 0; h < pairing.size(); ++h) vertex_of[h] = static_cast<int>(h / 3);
  return Graph(std::move(pairing), std::move(vertex_of));
}

Graph Graph::theta() { return trivalent({3, 4, 5, 0, 1, 2}); }
Graph Graph::dumbbell() { return trivalent({1, 0, 3, 2, 5, 4}); }

bool Graph::connected() const {
  std::vector<char> seen(vertex_count(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int h : at_vertex_[v]) {
      const int w = vertex_of(opposite(h));
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == vertex_count();
}

bool Graph::trivalent_p() const {
  return std::all_of(at_vertex_.begin(), at_vertex_.end(), [](const auto& hs) { return hs.size() == 3; });
}

FatGraph::FatGraph(std::vector<int> pairing, std::vector<int> sigma) : sigma_(std::move(sigma)) {
  const int n = static_cast<int>(pairing.size());
  if (static_cast<int>(sigma_.size()) != n) throw std::invalid_argument("cyclic has the wrong length");
  std::vector<int> vertex_of(n, -1);
  std::vector<char> hit(n, 0);
  for (int h = 0; h < n; ++h) {
    if (sigma_[h] < 0 || sigma_[h] >= n) throw std::invalid_argument("cyclic index out of range at half-edge " + std::to_string(h));
    if (hit[sigma_[h]]) throw std::invalid_argument("cyclic is not a permutation at half-edge " + std::to_string(h));
    hit[sigma_[h]] = 1;
  }
  int v = 0;
  for (int h = 0; h < n; ++h) {
    if (vertex_of[h] >= 0) continue;
    for (int x = h; vertex_of[x] < 0; x = sigma_[x]) vertex_of[x] = v;
    ++v;
  }
  graph_ = Graph(std::move(pairing), std::move(vertex_of));
}

FatGraph FatGraph::trivalent(std::vector<int> pairing) {
  std::vector<int> sigma(pairing.size());
  for (std::size_t h = 0; h < pairing.size(); ++h) sigma[h] = static_cast<int>(3 * (h / 3) + (h + 1) % 3);
  return FatGraph(std::move(pairing), std::move(sigma));
}

FatGraph FatGraph::reversed() const {
  std::vector<int> inv(sigma_.size());
  for (std::size_t h = 0; h < sigma_.size(); ++h) inv[sigma_[h]] = static_cast<int>(h);
  return FatGraph(graph_.pairing(), std::move(inv));
}

std::vector<std::vector<int>> boundary_cycles(const FatGraph& x) {
  const int n = x.graph().half_edge_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> out;
  for (int h = 0; h < n; ++h) {
    if (seen[h]) continue;
    std::vector<int> cyc;
    for (int y = h; !seen[y]; y = x.next_on_boundary(y)) {
      seen[y] = 1;
      cyc.push_back(y);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

int boundary_count(const FatGraph& x) { return static_cast<int>(boundary_cycles(x).size()); }

int genus_of_fat(const FatGraph& x) {
  const int twice = 2 - x.graph().euler_characteristic() - boundary_count(x);
  if (twice < 0 || twice % 2 != 0) throw std::logic_error("inconsistent fat graph");
  return twice / 2;
}

std::vector<int> boundary_word(const FatGraph& x) {
  auto cycles = boundary_cycles(x);
  if (cycles.size() != 1) throw std::invalid_argument("boundary_word needs a one-boundary fat graph");
  return cycles.front();
}

namespace {

// Relabel half-edges in breadth-first order from start, following sigma then
// the pairing. Returns the code (sigma, pairing in new labels), or an empty
// vector when the traversal does not reach every half-edge.
std::vector<int> traversal_code(const std::vector<int>& sigma, const std::vector<int>& pairing, int start) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> label(n, -1), order;
  order.reserve(n);
  label[start] = 0;
  order.push_back(start);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int y : {sigma[order[i]], pairing[order[i]]}) {
      if (label[y] < 0) {
        label[y] = static_cast<int>(order.size());
        order.push_back(y);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return {};
  std::vector<int> code(2 * n);
  for (int i = 0; i < n; ++i) {
    code[2 * i] = label[sigma[order[i]]];
    code[2 * i + 1] = label[pairing[order[i]]];
  }
  return code;
}

}  // namespace

std::vector<int> fat_canonical_code(const FatGraph& x) {
  std::vector<int> best;
  for (int h = 0; h < x.graph().half_edge_count(); ++h) {
    auto code = traversal_code(x.sigma(), x.graph().pairing(), h);
    if (code.empty()) throw std::invalid_argument("fat_canonical_code needs a connected fat graph");
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

int fat_automorphism_count(const FatGraph& x) {
  const int n = x.graph().half_edge_count();
  const auto base = traversal_code(x.sigma(), x.graph().pairing(), 0);
  if (base.empty()) throw std::invalid_argument("fat_automorphism_count needs a connected fat graph");
  int count = 0;
  for (int h = 0; h < n; ++h)
    if (traversal_code(x.sigma(), x.graph().pairing(), h) == base) ++count;
  return count;
}

std::vector<std::vector<int>> graph_automorphisms(const Graph& g) {
  const int n = g.half_edge_count(), V = g.vertex_count();
  std::vector<std::vector<int>> out;
  std::vector<int> phi(n, -1);
  std::vector<char> vused(V, 0);
  // Vertex by vertex: pick an image vertex and a bijection of half-edges,
  // checking the pairing against everything assigned so far.
  auto rec = [&](auto&& self, int v) -> void {
    if (v == V) {
      out.push_back(phi);
      return;
    }
    const auto& src = g.half_edges_at(v);
    for (int w = 0; w < V; ++w) {
      if (vused[w] || g.half_edges_at(w).size() != src.size()) continue;
      std::vector<int> dst = g.half_edges_at(w);
      std::sort(dst.begin(), dst.end());
      vused[w] = 1;
      do {
        for (std::size_t i = 0; i < src.size(); ++i) phi[src[i]] = dst[i];
        bool ok = true;
        for (int h : src) {
          const int o = g.opposite(h);
          if (phi[o] >= 0 && phi[o] != g.opposite(phi[h])) ok = false;
        }
        if (ok) self(self, v + 1);
      } while (std::next_permutation(dst.begin(), dst.end()));
      for (int h : src) phi[h] = -1;
      vused[w] = 0;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> graph_canonical_code(const Graph& g) {
  const int V = g.vertex_count();
  std::vector<std::vector<int>> adj(V, std::vector<int>(V, 0));
  for (int e = 0; e < g.edge_count(); ++e) {
    ++adj[g.tail(e)][g.head(e)];
    if (!g.is_loop(e)) ++adj[g.head(e)][g.tail(e)];
  }
  std::vector<int> perm(V);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    std::vector<int> code;
    code.reserve(V * V);
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) code.push_back(adj[perm[i]][perm[j]]);
    if (best.empty() || code < best) best = std::move(code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Cycle> simple_cycles(const Graph& g) {
  const int E = g.edge_count();
  if (E > 24) throw std::invalid_argument("simple_cycles supports at most 24 edges");
  std::vector<Cycle> out;
  for (std::uint32_t mask = 1; mask < (1u << E); ++mask) {
    std::vector<int> degree(g.vertex_count(), 0);
    for (int e = 0; e < E; ++e) {
      if (!(mask >> e & 1)) continue;
      ++degree[g.tail(e)];
      ++degree[g.head(e)];
    }
    if (std::any_of(degree.begin(), degree.end(), [](int d) { return d != 0 && d != 2; })) continue;
    int start = 0;
    while (degree[start] == 0) ++start;
    // Walk the cycle; degree 2 everywhere makes it a union of cycles, so
    // the walk must use every chosen edge.
    Cycle c;
    c.edge_use.assign(E, 0);
    std::vector<char> used(E, 0);
    int v = start, count = 0;
    do {
      int next = -1;
      for (int h : g.half_edges_at(v)) {
        const int e = g.edge_of(h);
        if ((mask >> e & 1) && !used[e]) {
          next = h;
          break;
        }
      }
      if (next < 0) break;
      used[g.edge_of(next)] = 1;
      c.edge_use[g.edge_of(next)] = 1;
      c.walk.push_back(next);
      ++count;
      v = g.vertex_of(g.opposite(next));
    } while (v != start || count == 0);
    if (count != std::popcount(mask) || v != start) continue;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace hypercount::graph
