#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hypercount/graph.hpp"

namespace hypercount::graph {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = n / (g == 0 ? 1 : g);
  den = d / (g == 0 ? 1 : g);
}

Rational Rational::operator+(const Rational& o) const {
  const std::int64_t g = std::gcd(den, o.den);
  return Rational(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

namespace {

// Calls f(pairing) for every perfect matching of n half-edges.
template <class F>
void for_each_matching(int n, F&& f) {
  std::vector<int> pairing(n, -1);
  auto rec = [&](auto&& self) -> void {
    int first = 0;
    while (first < n && pairing[first] >= 0) ++first;
    if (first == n) {
      f(pairing);
      return;
    }
    for (int j = first + 1; j < n; ++j) {
      if (pairing[j] >= 0) continue;
      pairing[first] = j;
      pairing[j] = first;
      self(self);
      pairing[first] = pairing[j] = -1;
    }
  };
  rec(rec);
}

int trivalent_face_count(const std::vector<int>& pairing, std::vector<char>& seen) {
  const int n = static_cast<int>(pairing.size());
  std::fill(seen.begin(), seen.end(), 0);
  int faces = 0;
  for (int h = 0; h < n; ++h) {
    if (seen[h]) continue;
    ++faces;
    for (int y = h; !seen[y];) {
      seen[y] = 1;
      const int o = pairing[y];
      y = 3 * (o / 3) + (o % 3 + 1) % 3;
    }
  }
  return faces;
}


// Canonical code of a trivalent fat graph with sigma = consecutive triples,
// as in fat_canonical_code but without allocations and with early exit.
std::string trivalent_code(const std::vector<int>& pairing) {
  const int n = static_cast<int>(pairing.size());
  std::string best(2 * n, '\0'), code(2 * n, '\0');
  bool have = false;
  int label[64], order[64];
  for (int start = 0; start < n; ++start) {
    std::fill(label, label + n, -1);
    int count = 1;
    label[start] = 0;
    order[0] = start;
    int cmp = have ? 0 : -1;
    for (int i = 0; i < n && cmp <= 0; ++i) {
      const int x = order[i];
      const int s = 3 * (x / 3) + (x % 3 + 1) % 3, p = pairing[x];
      if (label[s] < 0) {
        label[s] = count;
        order[count++] = s;
      }
      if (label[p] < 0) {
        label[p] = count;
        order[count++] = p;
      }
      code[2 * i] = static_cast<char>(label[s]);
      code[2 * i + 1] = static_cast<char>(label[p]);
      for (int k = 2 * i; k < 2 * i + 2 && cmp == 0; ++k)
        if (code[k] != best[k]) cmp = code[k] < best[k] ? -1 : 1;
    }
    if (cmp < 0) {
      best = code;
      have = true;
    }
  }
  return best;
}


// Calls f(pairing) for every pairing of n = 3V half-edges whose trivalent
// fat graph (sigma = consecutive triples) has a single boundary. Boundary
// paths are tracked as chains so that any face closing early prunes.
template <class F>
void for_each_one_face_pairing(int n, F&& f) {
  std::vector<int> pairing(n, -1), start_of(n), end_of(n);
  for (int h = 0; h < n; ++h) start_of[h] = end_of[h] = h;
  auto succ = [](int x) { return 3 * (x / 3) + (x % 3 + 1) % 3; };
  int links = 0;
  struct Undo {
    int sa, old_end, ec, old_start;
  };
  // Adds boundary link a -> c; returns false if a face closes too early.
  auto link = [&](int a, int c, Undo& u) {
    const int sa = start_of[a], ec = end_of[c];
    u = {sa, end_of[sa], ec, start_of[ec]};
    ++links;
    if (sa == c) return links == n;
    end_of[sa] = ec;
    start_of[ec] = sa;
    return true;
  };
  auto unlink = [&](const Undo& u) {
    --links;
    end_of[u.sa] = u.old_end;
    start_of[u.ec] = u.old_start;
  };
  auto rec = [&](auto&& self, int first) -> void {
    while (first < n && pairing[first] >= 0) ++first;
    if (first == n) {
      f(pairing);
      return;
    }
    for (int j = first + 1; j < n; ++j) {
      if (pairing[j] >= 0) continue;
      pairing[first] = j;
      pairing[j] = first;
      Undo u1, u2;
      if (link(first, succ(j), u1)) {
        if (link(j, succ(first), u2)) self(self, first + 1);
        unlink(u2);
      }
      unlink(u1);
      pairing[first] = pairing[j] = -1;
    }
  };
  rec(rec, 0);
}

}  // namespace

FatCensus fat_census(int genus) {
  if (genus < 1 || genus > 2) throw std::invalid_argument("fat_census supports genus 1 and 2");
  const int V = 4 * genus - 2;
  const int n = 3 * V;
  FatCensus out;
  out.genus = genus;
  std::map<std::string, std::vector<int>> classes;
  std::vector<char> seen(n);
  for_each_one_face_pairing(n, [&](const std::vector<int>& pairing) {
    if (trivalent_face_count(pairing, seen) != 1) throw std::logic_error("face tracking disagrees with face count");
    ++out.labeled_count;
    classes.try_emplace(trivalent_code(pairing), pairing);
  });
  std::int64_t group = 1;
  for (int v = 1; v <= V; ++v) group *= 3 * v;
  out.labeled_weight = Rational(static_cast<std::int64_t>(out.labeled_count), group);
  out.weighted_sum = Rational(0, 1);
  for (auto& [code, pairing] : classes) {
    FatGraph x = FatGraph::trivalent(pairing);
    const int aut = fat_automorphism_count(x);
    out.weighted_sum = out.weighted_sum + Rational(1, aut);
    out.entries.push_back({std::move(x), aut});
  }
  return out;
}

std::vector<Graph> graph_census(int chi) {
  if (chi > -1 || chi < -2) throw std::invalid_argument("graph_census supports chi = -1 and -2");
  const int n = -6 * chi;
  std::map<std::vector<int>, Graph> classes;
  for_each_matching(n, [&](const std::vector<int>& pairing) {
    Graph g = Graph::trivalent(pairing);
    if (!g.connected()) return;
    classes.try_emplace(graph_canonical_code(g), std::move(g));
  });
  std::vector<Graph> out;
  for (auto& [code, g] : classes) out.push_back(std::move(g));
  return out;
}

}  // namespace hypercount::graph
