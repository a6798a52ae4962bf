#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "hypercount/detail/tile_walk.hpp"
#include "hypercount/surface.hpp"

namespace hypercount::surface {

namespace detail {

namespace {

constexpr double kCell = 2.0;  // orbit centers are > 4 apart on the hyperboloid

std::uint64_t cell_key(double x, double y) {
  const auto cx = static_cast<std::int64_t>(std::floor(x / kCell));
  const auto cy = static_cast<std::int64_t>(std::floor(y / kCell));
  return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
}

}  // namespace

std::array<double, 3> image_of_reference(const Isometry& h) {
  const double a = h.a(), b = h.b(), c = h.c(), d = h.d();
  const double ab = a * a + b * b, cd = c * c + d * d;
  return {(ab + cd) / 2.0, (ab - cd) / 2.0, a * c + b * d};
}

TileWalk::TileWalk(const SurfaceGroup& s, const Point& x0, double radius, const EnumerationBudget& budget,
                   const Accept& accept, const Visit& visit)
    : s_(s) {
  const auto start_time = std::chrono::steady_clock::now();
  const int sides = s.side_count();
  std::vector<Isometry> step(sides);
  for (int k = 0; k < sides; ++k) step[k] = s.letter(s.side_letter(k));
  const double sinh_r = std::sinh(radius + 1e-9);

  auto [w0, inside] = s.locate(x0);
  (void)inside;
  root_word_ = w0;
  tiles_.push_back({s.evaluate(w0), -1, 0, 0});
  std::unordered_map<std::uint64_t, int> cells;
  {
    const auto c = image_of_reference(tiles_[0].matrix);
    cells.emplace(cell_key(c[1], c[2]), 0);
  }

  for (std::size_t idx = 0; idx < tiles_.size(); ++idx) {
    const Tile t = tiles_[idx];
    visit(static_cast<int>(idx), t.matrix);
    for (int k = 0; k < sides; ++k) {
      const char c = s.side_letter(k);
      if (t.parent >= 0 && c == inverse_letter(t.letter)) continue;
      const Isometry m = t.matrix * step[k];
      const auto q = hyperbolic::apply(m.inverse(), x0).hyperboloid();
      bool near = true;
      for (int j = 0; j < sides && near; ++j) near = s.side_excess(j, q) <= sinh_r;
      if (!near || !accept(m)) continue;

      const auto ctr = image_of_reference(m);
      const double tol = 1e-7 * (1.0 + ctr[0]);
      int found = -1;
      for (double dx : {-tol, tol}) {
        for (double dy : {-tol, tol}) {
          auto it = cells.find(cell_key(ctr[1] + dx, ctr[2] + dy));
          if (it != cells.end()) found = it->second;
        }
      }
      if (found >= 0) {
        const auto other = image_of_reference(tiles_[found].matrix);
        if (std::abs(other[1] - ctr[1]) > 1e3 * tol || std::abs(other[2] - ctr[2]) > 1e3 * tol)
          throw std::logic_error("two tiles share a hash cell");
        if (!same_element(found, static_cast<int>(idx), c))
          throw std::logic_error("distinct elements with coincident tiles");
        continue;
      }
      tiles_.push_back({m, static_cast<int>(idx), t.depth + 1, c});
      cells.emplace(cell_key(ctr[1], ctr[2]), static_cast<int>(tiles_.size() - 1));
      if (tiles_.size() > budget.max_elements)
        throw BudgetExceeded("orbit enumeration exceeded the element budget", tiles_.size());
    }
    if ((idx & 1023) == 0) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
      if (secs > budget.max_seconds) throw BudgetExceeded("orbit enumeration exceeded the time budget", idx);
    }
  }
}

Word TileWalk::path_letters(int from_ancestor, int index) const {
  Word out;
  while (index != from_ancestor) {
    out += tiles_[index].letter;
    index = tiles_[index].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Word TileWalk::word(int index) const { return s_.dehn_reduce(root_word_ + path_letters(0, index)); }

bool TileWalk::same_element(int existing, int parent, char letter) const {
  int a = existing, b = parent;
  while (tiles_[a].depth > tiles_[b].depth) a = tiles_[a].parent;
  while (tiles_[b].depth > tiles_[a].depth) b = tiles_[b].parent;
  while (a != b) {
    a = tiles_[a].parent;
    b = tiles_[b].parent;
  }
  const Word u = path_letters(a, existing);
  const Word v = path_letters(a, parent) + letter;
  return s_.dehn_reduce(u + inverse(v)).empty();
}

}  // namespace detail

namespace {

bool orbit_less(const OrbitPoint& x, const OrbitPoint& y) {
  if (x.distance != y.distance) return x.distance < y.distance;
  return x.element.word < y.element.word;
}

}  // namespace

std::vector<OrbitPoint> enumerate_orbit(const SurfaceGroup& s, const Point& x0, const Point& y0, double L,
                                        const EnumerationBudget& budget) {
  if (!(L >= 0.0) || !std::isfinite(L)) throw std::invalid_argument("enumerate_orbit needs L >= 0");
  const auto [u_word, y_in] = s.locate(y0);
  const Isometry u_inv = s.evaluate(u_word).inverse();
  struct Hit {
    int tile;
    double distance;
  };
  std::vector<Hit> hits;
  detail::TileWalk walk(
      s, x0, L, budget, [](const Isometry&) { return true; },
      [&](int idx, const Isometry& h) {
        const double d = hyperbolic::dist(x0, hyperbolic::apply(h, y_in));
        if (d <= L) hits.push_back({idx, d});
      });
  std::vector<OrbitPoint> out;
  out.reserve(hits.size());
  const Word u_inv_word = inverse(u_word);
  for (const Hit& hit : hits) {
    Word w = s.dehn_reduce(walk.word(hit.tile) + u_inv_word);
    out.push_back({{std::move(w), (walk.tiles()[hit.tile].matrix * u_inv).renormalized()}, hit.distance});
  }
  std::sort(out.begin(), out.end(), orbit_less);
  return out;
}

bool Sector::contains(double angle) const {
  if (width >= hyperbolic::kTwoPi) return true;
  return hyperbolic::wrap_angle(angle - start) <= width;
}

std::vector<SectorArc> enumerate_sector_arcs(const SurfaceGroup& s, const Point& x0, const Sector& I,
                                             const Point& y0, const Sector& J, double L, double h,
                                             const EnumerationBudget& budget) {
  if (!(I.width > 0.0) || !(J.width > 0.0)) throw std::invalid_argument("sectors must have positive width");
  if (!(L >= 0.0) || !(h > 0.0)) throw std::invalid_argument("enumerate_sector_arcs needs L >= 0, h > 0");
  const double top = L + h;
  const double R = s.circumradius();
  const auto [u_word, y_in] = s.locate(y0);
  const Isometry u_inv = s.evaluate(u_word).inverse();

  // A tile meeting the arc lies in a ball of radius R about its center; keep
  // tiles whose ball can meet the cone of directions I.
  auto cone = [&](const Isometry& m) {
    const Point c = hyperbolic::apply(m, Point::reference());
    const double r = hyperbolic::dist(x0, c);
    if (r <= R || I.width >= hyperbolic::kTwoPi) return true;
    const double half = std::asin(std::min(1.0, std::sinh(R) / std::sinh(r)));
    const double theta = hyperbolic::log_map(x0, c).direction.angle;
    const double off = hyperbolic::wrap_angle(theta - I.start);
    if (off <= I.width) return true;
    const double gap = std::min(off - I.width, hyperbolic::kTwoPi - off);
    return gap <= half + 1e-9;
  };

  struct Hit {
    int tile;
    double length, a0, a1;
  };
  std::vector<Hit> hits;
  detail::TileWalk walk(s, x0, top, budget, cone, [&](int idx, const Isometry& m) {
    const Point end = hyperbolic::apply(m, y_in);
    const double d = hyperbolic::dist(x0, end);
    if (!(d > L && d <= top)) return;
    const double a0 = hyperbolic::log_map(x0, end).direction.angle;
    if (!I.contains(a0)) return;
    const Isometry g = m * u_inv;
    const double a1 = hyperbolic::apply(g.inverse(), hyperbolic::arrival_direction(x0, end)).angle;
    if (!J.contains(a1)) return;
    hits.push_back({idx, d, a0, a1});
  });
  std::vector<SectorArc> out;
  const Word u_inv_word = inverse(u_word);
  for (const Hit& hit : hits) {
    Word w = s.dehn_reduce(walk.word(hit.tile) + u_inv_word);
    out.push_back({{std::move(w), (walk.tiles()[hit.tile].matrix * u_inv).renormalized()}, hit.length, hit.a0, hit.a1});
  }
  std::sort(out.begin(), out.end(), [](const SectorArc& x, const SectorArc& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.element.word < y.element.word;
  });
  return out;
}

std::vector<ConjugacyClass> enumerate_conjugacy_classes(const SurfaceGroup& s, double L,
                                                        const EnumerationBudget& budget) {
  if (!(L >= 0.0) || !std::isfinite(L)) throw std::invalid_argument("enumerate_conjugacy_classes needs L >= 0");
  const double cosh_R = std::cosh(s.circumradius());
  const double radius = 2.0 * std::asinh(cosh_R * std::sinh(L / 2.0));
  std::vector<int> keep;
  detail::TileWalk walk(
      s, s.base_point(), radius, budget, [](const Isometry&) { return true; },
      [&](int idx, const Isometry& g) {
        const double ell = hyperbolic::translation_length(g);
        if (ell <= 1e-9 || ell > L) return;
        // sinh(d(b, g b)/2) = cosh(dist(b, axis)) sinh(ell/2)
        const double d = hyperbolic::dist(Point::reference(), hyperbolic::apply(g, Point::reference()));
        if (std::sinh(d / 2.0) / std::sinh(ell / 2.0) <= cosh_R * (1.0 + 1e-12)) keep.push_back(idx);
      });
  std::unordered_map<Word, ConjugacyClass> classes;
  for (int idx : keep) {
    ConjugacyClass c = s.conjugacy_class(walk.word(idx));
    if (c.translation_length <= L) classes.emplace(c.cyclic_word, std::move(c));
  }
  std::vector<ConjugacyClass> out;
  out.reserve(classes.size());
  for (auto& [w, c] : classes) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const ConjugacyClass& x, const ConjugacyClass& y) {
    if (x.translation_length != y.translation_length) return x.translation_length < y.translation_length;
    return x.cyclic_word < y.cyclic_word;
  });
  return out;
}

std::optional<Word> find_conjugator(const SurfaceGroup& s, const Word& u, const Word& v) {
  const Isometry mu = s.evaluate(u), mv = s.evaluate(v);
  const double lu = hyperbolic::translation_length(mu), lv = hyperbolic::translation_length(mv);
  if (std::abs(lu - lv) > 1e-7 * std::max(1.0, lu)) return std::nullopt;
  if (lu < 1e-9) {
    if (s.dehn_reduce(u).empty() && s.dehn_reduce(v).empty()) return Word();
    return std::nullopt;
  }
  auto nearest_on_axis = [&](const Isometry& frame, double shift) {
    const auto q = hyperbolic::apply(frame.inverse(), Point::reference()).model();
    return hyperbolic::apply(frame, Point::from_model({0.0, std::abs(q) * std::exp(shift)}));
  };
  const Point pu = nearest_on_axis(hyperbolic::axis_frame(mu), 0.0);
  const Point mid = nearest_on_axis(hyperbolic::axis_frame(mv), lv / 2.0);
  for (const OrbitPoint& t : enumerate_orbit(s, mid, pu, lv / 2.0 + 1e-6)) {
    const Isometry test = t.element.matrix * mu * t.element.matrix.inverse() * mv.inverse();
    if (test.distance_to_identity() > 1e-6 * (1.0 + std::exp(lv))) continue;
    if (s.dehn_reduce(t.element.word + u + inverse(t.element.word) + inverse(v)).empty()) return t.element.word;
  }
  return std::nullopt;
}

}  // namespace hypercount::surface
