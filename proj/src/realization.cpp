#include "hypercount/realization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace hypercount::realization {

using hyperbolic::kPi;
using hyperbolic::kTwoPi;

std::vector<char> bfs_spanning_tree(const Graph& g, int root) {
  return spanning_tree_containing(g, {}, root);
}

std::vector<char> spanning_tree_containing(const Graph& g, const std::vector<int>& edges, int root) {
  const int V = g.vertex_count();
  std::vector<int> comp(V);
  for (int v = 0; v < V; ++v) comp[v] = v;
  auto find = [&](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  std::vector<char> tree(g.edge_count(), 0);
  for (int e : edges) {
    const int a = find(g.tail(e)), b = find(g.head(e));
    if (a == b) throw std::invalid_argument("prescribed tree edges contain a cycle");
    comp[a] = b;
    tree[e] = 1;
  }
  std::vector<char> seen(V, 0);
  std::deque<int> queue{root};
  seen[root] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int h : g.half_edges_at(v)) {
      const int e = g.edge_of(h);
      const int w = g.vertex_of(g.opposite(h));
      if (tree[e] && !seen[w]) {
        seen[w] = 1;
        queue.push_front(w);
      }
    }
    for (int h : g.half_edges_at(v)) {
      const int e = g.edge_of(h);
      const int w = g.vertex_of(g.opposite(h));
      if (seen[w]) continue;
      const int a = find(v), b = find(w);
      if (a == b) continue;
      comp[a] = b;
      tree[e] = 1;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  if (std::count(tree.begin(), tree.end(), 1) != V - 1) throw std::invalid_argument("graph is not connected");
  return tree;
}

Gauged regauge(const SurfaceGroup& s, const MarkedRepresentation& rep, const std::vector<Point>& positions,
               const std::vector<char>& tree, int root) {
  const Graph& g = rep.graph;
  const int V = g.vertex_count();
  std::vector<Word> k(V);
  std::vector<char> done(V, 0);
  done[root] = 1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int h : g.half_edges_at(v)) {
      const int e = g.edge_of(h);
      if (!tree[e]) continue;
      const int w = g.vertex_of(g.opposite(h));
      if (done[w]) continue;
      const Word& ge = rep.holonomy[e];
      k[w] = s.dehn_reduce(k[v] + (g.is_tail(h) ? ge : inverse(ge)));
      done[w] = 1;
      queue.push_back(w);
    }
  }
  Gauged out;
  out.rep.graph = g;
  out.rep.tree = tree;
  out.rep.holonomy.assign(g.edge_count(), Word());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (tree[e]) continue;
    out.rep.holonomy[e] = s.dehn_reduce(k[g.tail(e)] + rep.holonomy[e] + inverse(k[g.head(e)]));
  }
  out.positions.resize(V);
  for (int v = 0; v < V; ++v) out.positions[v] = hyperbolic::apply(s.evaluate(k[v]), positions[v]);
  return out;
}

Gauged conjugate(const SurfaceGroup& s, const Gauged& x, const Word& t) {
  Gauged out = x;
  const Word ti = inverse(t);
  const Isometry m = s.evaluate(ti);
  for (std::size_t e = 0; e < out.rep.holonomy.size(); ++e)
    if (!out.rep.tree[e]) out.rep.holonomy[e] = s.dehn_reduce(ti + x.rep.holonomy[e] + t);
  for (auto& p : out.positions) p = hyperbolic::apply(m, p);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Lift> to_lifts(const SurfaceGroup& s, const std::vector<Point>& positions) {
  std::vector<Lift> out;
  out.reserve(positions.size());
  for (const auto& p : positions) {
    auto [h, q] = s.locate(p);
    out.push_back({std::move(h), q});
  }
  return out;
}

std::vector<Point> to_points(const SurfaceGroup& s, const std::vector<Lift>& lifts) {
  std::vector<Point> out;
  out.reserve(lifts.size());
  for (const auto& l : lifts) out.push_back(hyperbolic::apply(s.evaluate(l.frame), l.local));
  return out;
}

Realization::Realization(const SurfaceGroup& s, MarkedRepresentation rep, std::vector<Lift> lifts)
    : s_(&s), rep_(std::move(rep)) {
  const Graph& g = rep_.graph;
  if (static_cast<int>(rep_.tree.size()) != g.edge_count() ||
      static_cast<int>(rep_.holonomy.size()) != g.edge_count())
    throw std::invalid_argument("representation does not match the graph");
  matrices_.reserve(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (rep_.tree[e] && !rep_.holonomy[e].empty()) throw std::invalid_argument("tree edge with holonomy");
    matrices_.push_back(s.evaluate(rep_.holonomy[e]));
  }
  set_lifts(std::move(lifts));
}

Realization::Realization(const SurfaceGroup& s, MarkedRepresentation rep, std::vector<Point> positions)
    : Realization(s, std::move(rep), to_lifts(s, positions)) {}

void Realization::set_positions(std::vector<Point> p) {
  if (static_cast<int>(p.size()) != graph().vertex_count()) throw std::invalid_argument("one position per vertex");
  set_lifts(to_lifts(*s_, p));
}

void Realization::set_lifts(std::vector<Lift> l) {
  const Graph& g = graph();
  if (static_cast<int>(l.size()) != g.vertex_count()) throw std::invalid_argument("one lift per vertex");
  lifts_ = std::move(l);
  frames_.clear();
  for (const auto& x : lifts_) frames_.push_back(s_->evaluate(x.frame));
  positions_ = to_points(*s_, lifts_);
  local_.clear();
  for (int e = 0; e < g.edge_count(); ++e)
    local_.push_back(
        s_->evaluate(s_->dehn_reduce(inverse(lifts_[g.tail(e)].frame) + rep_.holonomy[e] + lifts_[g.head(e)].frame)));
}

Isometry Realization::half_edge_isometry(int h) const {
  const int e = graph().edge_of(h);
  return graph().is_tail(h) ? matrices_[e] : matrices_[e].inverse();
}

double Realization::edge_length(int e) const {
  const Graph& g = graph();
  return hyperbolic::dist(lifts_[g.tail(e)].local, hyperbolic::apply(local_[e], lifts_[g.head(e)].local));
}

std::vector<double> Realization::edge_lengths() const {
  std::vector<double> out(graph().edge_count());
  for (int e = 0; e < graph().edge_count(); ++e) out[e] = edge_length(e);
  return out;
}

double Realization::total_length() const {
  double sum = 0.0;
  for (int e = 0; e < graph().edge_count(); ++e) sum += edge_length(e);
  return sum;
}

UnitTangent Realization::tangent(int h) const {
  const Graph& g = graph();
  const int v = g.vertex_of(h), e = g.edge_of(h);
  const Isometry m = g.is_tail(h) ? local_[e] : local_[e].inverse();
  const Point& p = lifts_[v].local;
  const Point q = hyperbolic::apply(m, lifts_[g.vertex_of(g.opposite(h))].local);
  UnitTangent t = hyperbolic::apply(frames_[v], hyperbolic::log_map(p, q).direction);
  t.base = positions_[v];
  return t;
}

double length(const Realization& r) { return r.total_length(); }

std::vector<TangentVector> gradient(const Realization& r) {
  const Graph& g = r.graph();
  std::vector<TangentVector> out(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    out[v].base = r.positions()[v];
    for (int h : g.half_edges_at(v)) {
      const double th = r.tangent(h).angle;
      out[v].vx -= std::cos(th);
      out[v].vy -= std::sin(th);
    }
  }
  return out;
}

double gradient_norm(const std::vector<TangentVector>& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, v.norm());
  return m;
}

const char* to_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::Critical: return "critical";
    case MinimizeStatus::Degenerate: return "degenerate";
    case MinimizeStatus::NotConverged: return "not-converged";
  }
  return "?";
}

bool abelian_image(const SurfaceGroup& s, const MarkedRepresentation& rep) {
  std::vector<Word> gens;
  for (std::size_t e = 0; e < rep.holonomy.size(); ++e) {
    if (rep.tree[e]) continue;
    Word w = s.dehn_reduce(rep.holonomy[e]);
    if (!w.empty()) gens.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!s.equal(gens[i] + gens[j], gens[j] + gens[i])) return false;
  return true;
}

std::vector<Point> default_start(const Graph& g, const Point& center) {
  std::vector<Point> out;
  const int V = g.vertex_count();
  for (int v = 0; v < V; ++v) out.push_back(hyperbolic::exp_map(center, kTwoPi * v / V, 1.0));
  return out;
}

namespace {

// Length, gradient and degeneracy measures of a fixed representation at
// varying positions.
struct Objective {
  const SurfaceGroup& s;
  const Graph& g;
  std::vector<Word> word;      // per edge, in the working frames
  std::vector<Word> frame;     // per vertex: true lift = frame[v] * working position
  std::vector<Isometry> half;  // per half-edge
  std::vector<double> angle;   // per half-edge, last evaluation
  std::vector<double> lengths;
  std::vector<char> tied;        // per edge: collapsed, its ends move together
  std::vector<int> root;         // per vertex: representative of its cluster of tied vertices
  std::vector<Isometry> to_root; // per vertex: working frame to the root's frame

  Objective(const SurfaceGroup& group, const MarkedRepresentation& rep)
      : s(group), g(rep.graph), word(rep.holonomy), frame(rep.graph.vertex_count()) {
    half.resize(g.half_edge_count());
    angle.resize(g.half_edge_count());
    lengths.resize(g.edge_count());
    tied.assign(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) refresh(e);
    clusters();
  }

  void refresh(int e) {
    const Isometry m = s.evaluate(word[e]);
    half[g.tail_half(e)] = m;
    half[g.head_half(e)] = m.inverse();
  }

  bool any_tied() const { return std::find(tied.begin(), tied.end(), 1) != tied.end(); }

  // Tied edges form a forest. Each tree is rooted at its smallest vertex and
  // the edge isometries are composed out to the other members.
  void clusters() {
    const int V = g.vertex_count();
    root.assign(V, -1);
    to_root.assign(V, Isometry{});
    for (int r = 0; r < V; ++r) {
      if (root[r] >= 0) continue;
      root[r] = r;
      std::vector<int> stack{r};
      while (!stack.empty()) {
        const int w = stack.back();
        stack.pop_back();
        for (int h : g.half_edges_at(w)) {
          if (!tied[g.edge_of(h)]) continue;
          const int x = g.vertex_of(g.opposite(h));
          if (root[x] >= 0) continue;
          root[x] = r;
          to_root[x] = to_root[w] * half[h];
          stack.push_back(x);
        }
      }
    }
  }

  // Places every tied vertex on its root's image.
  void sync(std::vector<Point>& p) const {
    for (int v = 0; v < g.vertex_count(); ++v)
      if (root[v] != v) p[v] = hyperbolic::apply(to_root[v].inverse(), p[root[v]]);
  }

  // Angle added to a tangent at v when it is carried into the root's frame.
  double rotation(const std::vector<Point>& p, int v) const {
    return root[v] == v ? 0.0 : hyperbolic::apply(to_root[v], UnitTangent{p[v], 0.0}).angle;
  }

  double value(const std::vector<Point>& p) {
    double sum = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
      const int h = g.tail_half(e);
      lengths[e] = hyperbolic::dist(p[g.tail(e)], hyperbolic::apply(half[h], p[g.head(e)]));
      sum += lengths[e];
    }
    return sum;
  }
  double min_edge() const {
    double m = std::numeric_limits<double>::infinity();
    for (int e = 0; e < g.edge_count(); ++e)
      if (!tied[e]) m = std::min(m, lengths[e]);
    return m;
  }

  // Requires value() at the same positions and no collapsed untied edge.
  // Gradients of tied vertices are carried to their root, which alone moves.
  std::vector<TangentVector> grad(const std::vector<Point>& p) {
    std::vector<TangentVector> out(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) out[v].base = p[v];
    for (int h = 0; h < g.half_edge_count(); ++h) {
      if (tied[g.edge_of(h)]) continue;
      const int v = g.vertex_of(h);
      const Point q = hyperbolic::apply(half[h], p[g.vertex_of(g.opposite(h))]);
      angle[h] = hyperbolic::log_map(p[v], q).direction.angle;
      out[v].vx -= std::cos(angle[h]);
      out[v].vy -= std::sin(angle[h]);
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (root[v] == v) continue;
      const double rot = rotation(p, v), c = std::cos(rot), sn = std::sin(rot);
      auto& r = out[root[v]];
      r.vx += c * out[v].vx - sn * out[v].vy;
      r.vy += sn * out[v].vx + c * out[v].vy;
      out[v].vx = out[v].vy = 0.0;
    }
    return out;
  }

  // T_A - T_B in the frame of e's tail. A and B are the vertices moving with
  // the tail and with the head: the two sides of e in its tree if e is tied,
  // the two clusters otherwise. T sums the unit tangents of the untied edges
  // other than e. Pulling A and B apart shortens those at rate |T_A - T_B|
  // and lengthens e at rate 2. Needs grad() at p.
  std::pair<double, double> split(const std::vector<Point>& p, int e) const {
    const int u = g.tail(e), v = g.head(e);
    std::vector<char> side(g.vertex_count(), 0);
    auto flood = [&](int start, char mark) {
      std::vector<int> stack{start};
      side[start] = mark;
      while (!stack.empty()) {
        const int w = stack.back();
        stack.pop_back();
        for (int h : g.half_edges_at(w)) {
          const int f = g.edge_of(h);
          const int x = g.vertex_of(g.opposite(h));
          if (tied[f] && f != e && !side[x]) {
            side[x] = mark;
            stack.push_back(x);
          }
        }
      }
    };
    flood(u, 1);
    flood(v, 2);
    const double off_a = -rotation(p, u);
    const double off_b = tied[e] ? off_a
                                 : hyperbolic::apply(half[g.tail_half(e)], UnitTangent{p[v], 0.0}).angle -
                                       rotation(p, v);
    double dx = 0.0, dy = 0.0;
    for (int h = 0; h < g.half_edge_count(); ++h) {
      const int f = g.edge_of(h), w = g.vertex_of(h);
      if (tied[f] || f == e || !side[w]) continue;
      const double a = angle[h] + rotation(p, w) + (side[w] == 1 ? off_a : off_b);
      const double sign = side[w] == 1 ? 1.0 : -1.0;
      dx += sign * std::cos(a);
      dy += sign * std::sin(a);
    }
    return {dx, dy};
  }

  // Moves vertex v back into the fundamental domain by a group element; the
  // edge words absorb it exactly, so matrices never carry the distance of a
  // lift from the base point. Call clusters() afterwards.
  bool recenter(std::vector<Point>& p, int v) {
    auto [h, q] = s.locate(p[v]);
    if (h.empty()) return false;
    frame[v] = s.dehn_reduce(frame[v] + h);
    const Word hinv = inverse(h);
    for (int e = 0; e < g.edge_count(); ++e) {
      if (g.tail(e) != v && g.head(e) != v) continue;
      if (g.tail(e) == v) word[e] = hinv + word[e];
      if (g.head(e) == v) word[e] += h;
      word[e] = s.dehn_reduce(word[e]);
      refresh(e);
    }
    p[v] = q;
    return true;
  }

  // A short untied edge between distinct clusters whose collapse is locally
  // length-minimizing, |T_A - T_B| < 2. Descent cannot settle on that kink,
  // so it is detected.
  int collapse_is_downhill(const std::vector<Point>& p, double short_edge, double margin) const {
    for (int e = 0; e < g.edge_count(); ++e) {
      if (lengths[e] >= short_edge || g.is_loop(e) || tied[e] || root[g.tail(e)] == root[g.head(e)]) continue;
      const auto [dx, dy] = split(p, e);
      if (std::hypot(dx, dy) < 2.0 - margin) return e;
    }
    return -1;
  }

  // Largest |sin| of the angle between two tangents at a common vertex;
  // near zero when every vertex's tangents lie on one line.
  double non_collinearity() const {
    double m = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto& hs = g.half_edges_at(v);
      for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
          if (tied[g.edge_of(hs[i])] || tied[g.edge_of(hs[j])]) continue;
          m = std::max(m, std::abs(std::sin(angle[hs[i]] - angle[hs[j]])));
        }
    }
    return m;
  }
};

double squared_norm(const std::vector<TangentVector>& g) {
  double s = 0.0;
  for (const auto& v : g) s += v.vx * v.vx + v.vy * v.vy;
  return s;
}

std::vector<Point> step(const std::vector<Point>& p, const std::vector<TangentVector>& grad, double alpha) {
  std::vector<Point> out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v)
    out[v] = hyperbolic::exp_map(TangentVector{p[v], -alpha * grad[v].vx, -alpha * grad[v].vy});
  return out;
}

}  // namespace

// Descent in the working frames of obj; positions in and out are working positions.
static MinimizeResult descend(Objective& obj, std::vector<Point> p, const MinimizeOptions& opt) {
  MinimizeResult out;
  out.positions = p;
  double f = obj.value(p);
  if (obj.min_edge() < opt.min_edge_length) {
    out.status = MinimizeStatus::Degenerate;
    out.reason = "collapsed edge";
    out.length = f;
    return out;
  }
  std::vector<TangentVector> grad = obj.grad(p);
  double alpha = 1.0;
  int collinear_run = 0, ties = 0;
  const auto reevaluate = [&] {
    obj.sync(p);
    f = obj.value(p);
    grad = obj.grad(p);
    alpha = 1.0;
  };
  for (int it = 0;; ++it) {
    bool moved = false;
    for (std::size_t v = 0; v < p.size(); ++v)
      if (obj.s.domain_distance_lower_bound(p[v]) > 0.25) moved |= obj.recenter(p, static_cast<int>(v));
    if (moved) {
      obj.clusters();
      obj.sync(p);
      f = obj.value(p);
      grad = obj.grad(p);
    }
    for (int e = 0; e < obj.g.edge_count(); ++e) {
      if (!obj.tied[e]) continue;
      const auto [dx, dy] = obj.split(p, e);
      if (std::hypot(dx, dy) <= 2.0 + 1e-9) continue;
      // Release the edge and move its two sides apart through their new roots.
      const int V = obj.g.vertex_count(), u = obj.g.tail(e), v = obj.g.head(e);
      std::vector<double> old_rot(V);
      for (int w = 0; w < V; ++w) old_rot[w] = obj.rotation(p, w);
      const double phi = std::atan2(dy, dx) + old_rot[u], apart = 1e-5;
      obj.tied[e] = 0;
      obj.clusters();
      const int ra = obj.root[u], rb = obj.root[v];
      p[ra] = hyperbolic::exp_map(p[ra], phi - old_rot[ra], apart);
      p[rb] = hyperbolic::exp_map(p[rb], phi + kPi - old_rot[rb], apart);
      reevaluate();
      break;
    }
    const double gn = gradient_norm(grad);
    out.iterations = it;
    out.gradient_norm = gn;
    out.length = f;
    out.positions = p;
    const bool tied = obj.any_tied();
    if (gn <= (tied ? std::max(opt.gradient_tolerance, 1e-8) : opt.gradient_tolerance)) {
      if (tied) {
        // Stationary with an edge collapsed: by convexity the infimum sits on
        // the boundary of the component.
        out.status = MinimizeStatus::Degenerate;
        out.reason = "collapsed edge";
      } else {
        out.status = MinimizeStatus::Critical;
      }
      return out;
    }
    if (const int e = obj.collapse_is_downhill(p, 10.0 * opt.min_edge_length, 1e-4); e >= 0) {
      if (++ties > 50 * obj.g.edge_count()) {
        out.status = MinimizeStatus::Degenerate;
        out.reason = "collapsing edge";
        return out;
      }
      // Descend with the edge held collapsed; it is released once splitting
      // becomes downhill.
      obj.tied[e] = 1;
      obj.clusters();
      reevaluate();
      continue;
    }
    collinear_run = obj.non_collinearity() < 1e-6 ? collinear_run + 1 : 0;
    if (collinear_run >= 1000) {
      out.status = MinimizeStatus::Degenerate;
      out.reason = "collinear tangents";
      return out;
    }
    if (it >= opt.max_iterations) {
      out.reason = "iteration cap";
      return out;
    }
    const double g2 = squared_norm(grad);
    // Below this the change in length is lost in rounding; a step is then
    // judged by whether it shrinks the gradient.
    const double noise = 1e-11 * std::max(1.0, f);
    alpha = std::min(1.0, 2.0 * alpha);
    bool accepted = false;
    for (; alpha > 1e-16; alpha *= 0.5) {
      std::vector<Point> trial = step(p, grad, alpha);
      obj.sync(trial);
      const double ft = obj.value(trial);
      const double decrease = 0.5 * alpha * g2;
      if (obj.min_edge() < opt.min_edge_length) {
        if (ft <= f - decrease) {
          out.status = MinimizeStatus::Degenerate;
          out.reason = "collapsed edge";
          out.positions = trial;
          out.length = ft;
          return out;
        }
        continue;
      }
      if (decrease > noise) {
        if (ft <= f - decrease) {
          p = std::move(trial);
          f = ft;
          grad = obj.grad(p);
          accepted = true;
          break;
        }
        continue;
      }
      if (ft <= f + noise) {
        auto gt = obj.grad(trial);
        if (squared_norm(gt) < g2) {
          p = std::move(trial);
          f = ft;
          grad = std::move(gt);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      obj.value(p);
      obj.grad(p);
      if (obj.non_collinearity() < 1e-6) {
        out.status = MinimizeStatus::Degenerate;
        out.reason = "collinear tangents";
      } else {
        out.reason = "line search stalled";
      }
      return out;
    }
  }
}

MinimizeResult minimize_to_critical(const SurfaceGroup& s, const MarkedRepresentation& rep,
                                    std::vector<Point> start, const MinimizeOptions& opt) {
  const Graph& g = rep.graph;
  if (!g.trivalent_p() || !g.connected()) throw std::invalid_argument("minimizer needs a connected trivalent graph");
  if (abelian_image(s, rep)) {
    MinimizeResult out;
    out.lifts = to_lifts(s, start);
    out.positions = std::move(start);
    out.status = MinimizeStatus::Degenerate;
    out.reason = "abelian image";
    return out;
  }
  Objective obj(s, rep);
  for (std::size_t v = 0; v < start.size(); ++v) obj.recenter(start, static_cast<int>(v));
  MinimizeResult out = descend(obj, std::move(start), opt);
  for (std::size_t v = 0; v < out.positions.size(); ++v) out.lifts.push_back({obj.frame[v], out.positions[v]});
  out.positions = to_points(s, out.lifts);
  return out;
}

CriticalityReport criticality_report(const Realization& r) {
  const Graph& g = r.graph();
  CriticalityReport out;
  out.min_edge_length = std::numeric_limits<double>::infinity();
  for (double l : r.edge_lengths()) out.min_edge_length = std::min(out.min_edge_length, l);
  if (out.min_edge_length < 1e-9) throw std::domain_error("degenerate edge");
  out.gradient_norm = gradient_norm(gradient(r));
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& hs = g.half_edges_at(v);
    std::array<double, 3> a{};
    for (int i = 0; i < 3 && i < static_cast<int>(hs.size()); ++i) {
      a[i] = hyperbolic::angle_between(r.tangent(hs[i]), r.tangent(hs[(i + 1) % hs.size()]));
      out.max_angle_deviation = std::max(out.max_angle_deviation, std::abs(a[i] - kTwoPi / 3.0));
    }
    out.angles.push_back(a);
  }
  return out;
}

BoundaryImage lambda_boundary(const SurfaceGroup& s, const FatGraph& x, const Realization& r) {
  if (x.graph().pairing() != r.graph().pairing()) throw std::invalid_argument("fat graph does not match realization");
  if (graph::boundary_count(x) != 1) throw std::invalid_argument("fat graph has more than one boundary");
  const Graph& g = r.graph();
  BoundaryImage out;
  for (int h : graph::boundary_word(x)) {
    const Word& w = r.rep().holonomy[g.edge_of(h)];
    out.word += g.is_tail(h) ? w : inverse(w);
  }
  out.word = s.dehn_reduce(out.word);
  if (s.cyclic_dehn_reduce(out.word).empty()) throw std::domain_error("boundary maps to the identity");
  out.klass = s.conjugacy_class(out.word);
  out.length = out.klass.translation_length;
  return out;
}

bool is_fat_compatible(const FatGraph& x, const Realization& r) {
  if (x.graph().pairing() != r.graph().pairing()) throw std::invalid_argument("fat graph does not match realization");
  const Graph& g = r.graph();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int h0 = g.half_edges_at(v).front();
    const int h1 = x.next_around_vertex(h0), h2 = x.next_around_vertex(h1);
    const double t0 = r.tangent(h0).angle;
    const double d1 = hyperbolic::wrap_angle(r.tangent(h1).angle - t0);
    const double d2 = hyperbolic::wrap_angle(r.tangent(h2).angle - t0);
    const double gaps[3] = {d1, d2, std::abs(d1 - d2)};
    for (double gap : gaps)
      if (gap < 1e-9 || kTwoPi - gap < 1e-9) throw DegenerateTangents("coincident tangents at a vertex");
    if (d1 > d2) return false;
  }
  return true;
}

double fixed_vertex_sector_volume(double eps, int vertices) {
  return std::pow(12.0 * kPi * eps * eps, vertices);
}

double box_count_prediction(int chi, const std::vector<double>& lower, double h, double vol_sigma) {
  double norm = 0.0;
  for (double l : lower) {
    if (!(l > 0.0)) throw std::invalid_argument("box corners must be positive");
    norm += l;
  }
  const double c = chi;
  return std::pow(2.0, 4.0 * c) * std::pow(3.0, -3.0 * c) * std::pow(kPi, c) *
         std::pow(std::expm1(h), -3.0 * c) * std::exp(norm) * std::pow(vol_sigma, c);
}

double critical_count_coefficient(int chi, double vol_unit_tangent) {
  double fact = 1.0;
  for (int k = 2; k <= -3 * chi - 1; ++k) fact *= k;
  return std::pow(2.0 / 3.0, 3.0 * chi) * std::pow(vol_unit_tangent, chi) / fact;
}

double critical_count_prediction(int chi, double L, double vol_unit_tangent) {
  return critical_count_coefficient(chi, vol_unit_tangent) * std::pow(L, -3.0 * chi - 1.0) * std::exp(L);
}

double kappa(int genus) { return 3.0 * (2.0 * genus - 1.0) * std::log(4.0 / 3.0); }

}  // namespace hypercount::realization
