#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hypercount/detail/lp.hpp"
#include "hypercount/detail/parallel.hpp"
#include "hypercount/realization.hpp"

namespace hypercount::realization {

namespace {

using Clock = std::chrono::steady_clock;
using graph::Cycle;

constexpr double kLpSlack = 1e-9;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Word safe_normal_form(const SurfaceGroup& s, const Word& w) {
  try {
    return s.normal_form(w);
  } catch (const std::runtime_error&) {
    return s.dehn_reduce(w);
  }
}

// Edge multiplicities of the closed walk root -> tail(e) in the tree, across
// e, then head(e) -> root in the tree.
std::vector<double> based_loop_use(const Graph& g, const std::vector<char>& tree, int root, int e) {
  const int V = g.vertex_count();
  std::vector<int> parent_edge(V, -1), parent(V, -1);
  std::vector<char> seen(V, 0);
  std::deque<int> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int h : g.half_edges_at(v)) {
      const int f = g.edge_of(h), w = g.vertex_of(g.opposite(h));
      if (!tree[f] || seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      parent_edge[w] = f;
      queue.push_back(w);
    }
  }
  std::vector<double> use(g.edge_count(), 0.0);
  use[e] += 1.0;
  for (int v : {g.tail(e), g.head(e)})
    for (; v != root; v = parent[v]) use[parent_edge[v]] += 1.0;
  return use;
}

std::vector<double> to_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Closed-walk holonomy of a cycle from per-edge matrices (identity on tree
// edges).
Isometry cycle_holonomy(const Graph& g, const Cycle& c, const std::vector<Isometry>& m) {
  Isometry out;
  for (int h : c.walk) {
    const int e = g.edge_of(h);
    out = out * (g.is_tail(h) ? m[e] : m[e].inverse());
  }
  return out;
}

// Minimum total length of edge lengths l >= 0 with m_c . l >= lengths[c] for
// the given cycles plus extra rows A l <= b; infinity when infeasible.
double min_total(const std::vector<std::vector<double>>& use, const std::vector<double>& lengths,
                 const std::vector<std::vector<double>>& A, const std::vector<double>& b, int E) {
  std::vector<std::vector<double>> rows = A;
  std::vector<double> rhs = b;
  for (std::size_t i = 0; i < use.size(); ++i) {
    std::vector<double> r(E);
    for (int e = 0; e < E; ++e) r[e] = -use[i][e];
    rows.push_back(std::move(r));
    rhs.push_back(-lengths[i]);
  }
  const auto res = detail::lp_maximize(std::vector<double>(E, -1.0), rows, rhs);
  if (res.status != detail::LpResult::Status::Optimal) return std::numeric_limits<double>::infinity();
  return -res.value;
}

double max_linear(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b) {
  const auto res = detail::lp_maximize(c, A, b);
  if (res.status == detail::LpResult::Status::Infeasible) return -std::numeric_limits<double>::infinity();
  if (res.status == detail::LpResult::Status::Unbounded) throw std::logic_error("unbounded length program");
  return res.value;
}

struct Job {
  MarkedRepresentation rep;
  std::vector<Point> start;
};

// Graph, tree and cycle data shared by both enumerators.
struct Setup {
  const SurfaceGroup& s;
  const Graph& x;
  double L;
  int E;
  std::vector<Cycle> cycles;
  std::vector<std::vector<double>> use;  // per cycle
  std::vector<char> canonical_tree;

  Setup(const SurfaceGroup& s_, const Graph& x_, double L_) : s(s_), x(x_), L(L_), E(x_.edge_count()) {
    if (!x.trivalent_p() || !x.connected()) throw std::invalid_argument("graph must be trivalent and connected");
    if (!(L >= 0.0)) throw std::invalid_argument("length bound must be nonnegative");
    cycles = graph::simple_cycles(x);
    for (const auto& c : cycles) use.push_back(to_double(c.edge_use));
    canonical_tree = bfs_spanning_tree(x, 0);
  }
};

// Representation in the canonical frame (bfs tree from vertex 0, first
// lift inside the fundamental polygon).
CriticalComponent canonical_component(const SurfaceGroup& s, const MarkedRepresentation& rep,
                                      const std::vector<Point>& positions, const std::vector<char>& tree) {
  Gauged g = regauge(s, rep, positions, tree, 0);
  const auto located = s.locate(g.positions[0]);
  if (!located.first.empty()) g = conjugate(s, g, located.first);
  for (std::size_t e = 0; e < g.rep.holonomy.size(); ++e)
    if (!g.rep.tree[e]) g.rep.holonomy[e] = safe_normal_form(s, g.rep.holonomy[e]);
  CriticalComponent out;
  const Realization r(s, g.rep, g.positions);
  out.edge_lengths = r.edge_lengths();
  out.length = std::accumulate(out.edge_lengths.begin(), out.edge_lengths.end(), 0.0);
  out.rep = std::move(g.rep);
  out.positions = std::move(g.positions);
  return out;
}

// Image of a component under a half-edge automorphism pi of the graph.
std::pair<MarkedRepresentation, std::vector<Point>> transform(const CriticalComponent& c,
                                                              const std::vector<int>& pi) {
  const Graph& g = c.rep.graph;
  MarkedRepresentation rep{g, std::vector<char>(g.edge_count(), 0), std::vector<Word>(g.edge_count())};
  std::vector<Point> pos(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const int t = pi[g.tail_half(e)];
    const int f = g.edge_of(t);
    rep.tree[f] = c.rep.tree[e];
    rep.holonomy[f] = g.is_tail(t) ? c.rep.holonomy[e] : inverse(c.rep.holonomy[e]);
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int h = g.half_edges_at(v).front();
    pos[g.vertex_of(pi[h])] = c.positions[v];
  }
  return {std::move(rep), std::move(pos)};
}

bool same_lengths(const CriticalComponent& a, const CriticalComponent& b, double tol) {
  for (std::size_t e = 0; e < a.edge_lengths.size(); ++e)
    if (std::abs(a.edge_lengths[e] - b.edge_lengths[e]) > tol) return false;
  return true;
}

// Index of accepted components by total length.
class ComponentIndex {
 public:
  explicit ComponentIndex(const SurfaceGroup& s) : s_(s) {}
  int find(const CriticalComponent& c, const std::vector<CriticalComponent>& all) const {
    const double window = 1e-6 * static_cast<double>(c.edge_lengths.size());
    for (auto it = by_length_.lower_bound(c.length - window);
         it != by_length_.end() && it->first <= c.length + window; ++it)
      if (equivalent_components(s_, all[it->second], c)) return it->second;
    return -1;
  }
  void add(double length, int index) { by_length_.emplace(length, index); }

 private:
  const SurfaceGroup& s_;
  std::multimap<double, int> by_length_;
};

CriticalEnumeration finish(const Setup& st, const std::vector<Job>& jobs, std::size_t candidates,
                           const EnumerateOptions& opt, bool require_domain) {
  const SurfaceGroup& s = st.s;
  std::vector<MinimizeResult> results(jobs.size());
  detail::parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    results[i] = minimize_to_critical(s, jobs[i].rep, jobs[i].start, opt.minimize);
  });
  CriticalEnumeration out;
  out.candidates = candidates;
  out.minimized = jobs.size();
  std::vector<CriticalComponent> found;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = results[i];
    if (r.status == MinimizeStatus::NotConverged) ++out.not_converged;
    if (r.status != MinimizeStatus::Critical || r.length > st.L) continue;
    if (require_domain && s.domain_distance_lower_bound(r.positions[0]) > 1e-9) continue;
    found.push_back(canonical_component(s, jobs[i].rep, r.positions, st.canonical_tree));
  }
  std::stable_sort(found.begin(), found.end(), [](const CriticalComponent& a, const CriticalComponent& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.rep.holonomy < b.rep.holonomy;
  });
  ComponentIndex index(s);
  for (auto& c : found) {
    if (index.find(c, out.components) >= 0) continue;
    index.add(c.length, static_cast<int>(out.components.size()));
    out.components.push_back(std::move(c));
  }
  out.raw_count = out.components.size();

  // Orbits under graph automorphisms.
  const auto autos = graph::graph_automorphisms(st.x);
  std::vector<int> parent(out.components.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < out.components.size(); ++i) {
    for (const auto& pi : autos) {
      auto [rep, pos] = transform(out.components[i], pi);
      const CriticalComponent image = canonical_component(s, rep, pos, st.canonical_tree);
      const int j = index.find(image, out.components);
      if (j < 0) {
        out.automorphism_closed = false;
        continue;
      }
      const int a = root(static_cast<int>(i)), b = root(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<int, int> orbit_ids;
  for (std::size_t i = 0; i < out.components.size(); ++i) {
    const int r = root(static_cast<int>(i));
    const auto it = orbit_ids.emplace(r, static_cast<int>(orbit_ids.size())).first;
    out.components[i].orbit = it->second;
  }
  out.quotient_count = orbit_ids.size();
  return out;
}

}  // namespace

bool equivalent_components(const SurfaceGroup& s, const CriticalComponent& a, const CriticalComponent& b) {
  if (a.rep.graph.pairing() != b.rep.graph.pairing() || a.rep.tree != b.rep.tree) return false;
  if (!same_lengths(a, b, 1e-6)) return false;
  for (const auto& t : surface::enumerate_orbit(s, a.positions[0], b.positions[0], 1e-5)) {
    const Word& w = t.element.word;
    const Word wi = inverse(w);
    bool all = true;
    for (std::size_t e = 0; e < a.rep.holonomy.size() && all; ++e)
      if (!a.rep.tree[e]) all = s.equal(w + b.rep.holonomy[e] + wi, a.rep.holonomy[e]);
    if (all) return true;
  }
  return false;
}

CriticalEnumeration enumerate_critical(const SurfaceGroup& s, const Graph& x, double L, const EnumerateOptions& opt) {
  const auto t0 = Clock::now();
  const Setup st(s, x, L);
  const int E = st.E;
  const double delta = opt.cell_radius;

  struct ClassJob {
    int anchor;
    surface::ConjugacyClass klass;
  };
  struct AnchorData {
    std::vector<char> tree;
    int root = 0;
    int closing = -1;        // edge carrying the anchor holonomy
    bool closing_tail = true;
    std::vector<int> others;  // remaining non-tree edges in assignment order
    std::vector<std::vector<double>> loop_use;  // per other edge
    std::vector<std::vector<double>> rows;      // anchor-minimality and total length
    std::vector<double> rhs;
    std::vector<int> ready;  // per cycle: depth after which it is determined
  };
  std::vector<AnchorData> anchors(st.cycles.size());
  std::vector<ClassJob> class_jobs;
  for (std::size_t a = 0; a < st.cycles.size(); ++a) {
    AnchorData& ad = anchors[a];
    const Cycle& c = st.cycles[a];
    ad.root = x.vertex_of(c.walk.front());
    ad.closing = x.edge_of(c.walk.back());
    ad.closing_tail = x.is_tail(c.walk.back());
    std::vector<int> path;
    for (std::size_t i = 0; i + 1 < c.walk.size(); ++i) path.push_back(x.edge_of(c.walk[i]));
    ad.tree = spanning_tree_containing(x, path, ad.root);
    for (int e = 0; e < E; ++e)
      if (!ad.tree[e] && e != ad.closing) {
        ad.others.push_back(e);
        ad.loop_use.push_back(based_loop_use(x, ad.tree, ad.root, e));
      }
    ad.rows.push_back(std::vector<double>(E, 1.0));
    ad.rhs.push_back(L);
    for (std::size_t b = 0; b < st.cycles.size(); ++b) {
      if (b == a) continue;
      std::vector<double> r(E);
      for (int e = 0; e < E; ++e) r[e] = st.use[a][e] - st.use[b][e];
      ad.rows.push_back(std::move(r));
      ad.rhs.push_back(0.0);
    }
    for (const auto& cyc : st.cycles) {
      int depth = 0;
      for (int e = 0; e < E; ++e) {
        if (!cyc.edge_use[e]) continue;
        const auto it = std::find(ad.others.begin(), ad.others.end(), e);
        if (it != ad.others.end()) depth = std::max(depth, static_cast<int>(it - ad.others.begin()) + 1);
      }
      ad.ready.push_back(depth);
    }
    const double top = max_linear(st.use[a], ad.rows, ad.rhs);
    if (!(top > 0.0)) continue;
    for (auto& k : surface::enumerate_conjugacy_classes(s, top + kLpSlack, opt.budget))
      class_jobs.push_back({static_cast<int>(a), std::move(k)});
  }

  // Candidate tuples per (anchor, class), merged in job order.
  std::vector<std::vector<Job>> per_job(class_jobs.size());
  std::vector<std::size_t> per_job_candidates(class_jobs.size(), 0);
  detail::parallel_for(class_jobs.size(), opt.threads, [&](std::size_t ji) {
    if (seconds_since(t0) > opt.budget.max_seconds)
      throw surface::BudgetExceeded("critical enumeration exceeded its time budget", 0);
    const AnchorData& ad = anchors[class_jobs[ji].anchor];
    const auto& klass = class_jobs[ji].klass;
    const int a = class_jobs[ji].anchor;
    const double lA = klass.translation_length;
    std::vector<std::vector<double>> rows = ad.rows;
    std::vector<double> rhs = ad.rhs;
    rows.push_back(st.use[a]);
    for (auto& v : rows.back()) v = -v;
    rhs.push_back(-lA);
    const double lam_star = max_linear(st.use[a], rows, rhs);
    if (!std::isfinite(lam_star)) return;
    std::vector<double> lam(ad.others.size()), cap(st.cycles.size());
    for (std::size_t j = 0; j < ad.others.size(); ++j) lam[j] = max_linear(ad.loop_use[j], rows, rhs);
    for (std::size_t c = 0; c < st.cycles.size(); ++c) cap[c] = max_linear(st.use[c], rows, rhs);

    const Word W = klass.cyclic_word;
    const Isometry M = s.evaluate(W);
    const Isometry frame = hyperbolic::axis_frame(M);
    const double l0 = lA / klass.power;
    const double ratio = std::sinh(lam_star / 2.0) / std::sinh(lA / 2.0);
    const double tmax = ratio > 1.0 ? std::acosh(ratio) : 0.0;

    std::vector<Isometry> mats(E);
    MarkedRepresentation rep{x, ad.tree, std::vector<Word>(E)};
    rep.holonomy[ad.closing] = ad.closing_tail ? W : inverse(W);
    mats[ad.closing] = s.evaluate(rep.holonomy[ad.closing]);
    std::map<std::string, Job> survivors;

    const int nt = std::max(1, static_cast<int>(std::ceil(2.0 * tmax / delta)));
    const double ht = 2.0 * tmax / nt;
    for (int i = 0; i < nt; ++i) {
      const double ta = -tmax + i * ht, tb = ta + ht;
      const double tc = 0.5 * (ta + tb), tm = std::max(std::abs(ta), std::abs(tb));
      const int ns = std::max(1, static_cast<int>(std::ceil(l0 * std::cosh(tm) / delta)));
      const double hs = l0 / ns;
      const double rho = 0.5 * ht + 0.5 * hs * std::cosh(tm);
      for (int k = 0; k < ns; ++k) {
        const Point c = hyperbolic::fermi_point(frame, (k + 0.5) * hs, tc);
        std::vector<std::vector<surface::OrbitPoint>> lists(ad.others.size());
        for (std::size_t j = 0; j < ad.others.size(); ++j) {
          for (auto& op : surface::enumerate_orbit(s, c, c, lam[j] + 2.0 * rho, opt.budget))
            if (hyperbolic::translation_length(op.element.matrix) <= lam[j] + kLpSlack)
              lists[j].push_back(std::move(op));
        }
        // Depth-first assignment of the remaining non-tree edges.
        std::vector<double> determined_len;
        std::vector<std::vector<double>> determined_use;
        auto check_ready = [&](int depth) {
          bool fresh = false;
          for (std::size_t cy = 0; cy < st.cycles.size(); ++cy) {
            if (ad.ready[cy] != depth) continue;
            const double lc = hyperbolic::translation_length(cycle_holonomy(x, st.cycles[cy], mats));
            if (lc > cap[cy] + kLpSlack) return false;
            determined_len.push_back(lc);
            determined_use.push_back(st.use[cy]);
            fresh = true;
          }
          return !fresh || min_total(determined_use, determined_len, ad.rows, ad.rhs, E) <= L + kLpSlack;
        };
        auto rec = [&](auto&& self, std::size_t depth) -> void {
          const std::size_t mark = determined_len.size();
          const bool ok = check_ready(static_cast<int>(depth));
          if (ok && depth == ad.others.size()) {
            ++per_job_candidates[ji];
            std::string key;
            for (int e = 0; e < E; ++e)
              if (!ad.tree[e]) key += safe_normal_form(s, rep.holonomy[e]) + "|";
            if (!survivors.count(key)) {
              std::vector<Point> start = default_start(x, c);
              start[ad.root] = c;
              survivors.emplace(std::move(key), Job{rep, std::move(start)});
            }
          } else if (ok) {
            const int e = ad.others[depth];
            for (const auto& op : lists[depth]) {
              rep.holonomy[e] = op.element.word;
              mats[e] = op.element.matrix;
              self(self, depth + 1);
            }
            rep.holonomy[e].clear();
            mats[e] = Isometry();
          }
          determined_len.resize(mark);
          determined_use.resize(mark);
        };
        rec(rec, 0);
      }
    }
    for (auto& [key, job] : survivors) per_job[ji].push_back(std::move(job));
  });

  std::vector<Job> jobs;
  std::size_t candidates = 0;
  for (std::size_t ji = 0; ji < per_job.size(); ++ji) {
    candidates += per_job_candidates[ji];
    for (auto& job : per_job[ji]) jobs.push_back(std::move(job));
  }
  if (seconds_since(t0) > opt.budget.max_seconds)
    throw surface::BudgetExceeded("critical enumeration exceeded its time budget", 0);
  return finish(st, jobs, candidates, opt, false);
}

CriticalEnumeration enumerate_critical_brute_force(const SurfaceGroup& s, const Graph& x, double L,
                                                   const EnumerateOptions& opt) {
  const Setup st(s, x, L);
  const int E = st.E;
  if (x.first_betti_number() != 2) throw std::invalid_argument("brute-force enumeration needs a rank-2 graph");
  std::vector<int> free_edges;
  for (int e = 0; e < E; ++e)
    if (!st.canonical_tree[e]) free_edges.push_back(e);
  const Point b = s.base_point();
  std::vector<surface::OrbitPoint> pool;
  for (auto& op : surface::enumerate_orbit(s, b, b, L + 2.0 * s.circumradius(), opt.budget))
    if (!op.element.word.empty() && hyperbolic::translation_length(op.element.matrix) <= L + kLpSlack)
      pool.push_back(std::move(op));

  const std::vector<std::vector<double>> rows{std::vector<double>(E, 1.0)};
  const std::vector<double> rhs{L};
  std::vector<Job> jobs;
  std::size_t candidates = 0;
  std::vector<Isometry> mats(E);
  std::vector<double> lens(st.cycles.size());
  for (const auto& p : pool) {
    for (const auto& q : pool) {
      mats[free_edges[0]] = p.element.matrix;
      mats[free_edges[1]] = q.element.matrix;
      bool ok = true;
      for (std::size_t c = 0; c < st.cycles.size() && ok; ++c) {
        lens[c] = hyperbolic::translation_length(cycle_holonomy(x, st.cycles[c], mats));
        ok = lens[c] <= L + kLpSlack;
      }
      if (!ok || min_total(st.use, lens, rows, rhs, E) > L + kLpSlack) continue;
      ++candidates;
      MarkedRepresentation rep{x, st.canonical_tree, std::vector<Word>(E)};
      rep.holonomy[free_edges[0]] = p.element.word;
      rep.holonomy[free_edges[1]] = q.element.word;
      jobs.push_back({std::move(rep), default_start(x, b)});
    }
  }
  return finish(st, jobs, candidates, opt, true);
}

}  // namespace hypercount::realization
