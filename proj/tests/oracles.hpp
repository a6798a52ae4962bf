// Word-search oracles shared by the surface tests and the acceptance run.
#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hypercount/surface.hpp"

namespace oracle {

using hypercount::hyperbolic::Isometry;
using hypercount::surface::inverse_letter;
using hypercount::surface::SurfaceGroup;
using hypercount::surface::Word;

inline const std::string kLetters = "abcdABCD";

// Every freely reduced word of length <= K, with its matrix.
inline void for_each_word(const SurfaceGroup& s, int K, const std::function<void(const Word&, const Isometry&)>& f) {
  Word w;
  std::function<void(const Isometry&)> rec = [&](const Isometry& m) {
    f(w, m);
    if (static_cast<int>(w.size()) == K) return;
    for (char c : kLetters) {
      if (!w.empty() && w.back() == inverse_letter(c)) continue;
      w.push_back(c);
      rec(m * s.letter(c));
      w.pop_back();
    }
  };
  rec(Isometry());
}

// Distinct orbit points within L of the base point reached by words of
// length <= K.
inline std::size_t orbit_oracle(const SurfaceGroup& s, int K, double L) {
  std::vector<std::pair<double, hypercount::hyperbolic::Point>> hits;
  const auto o = s.base_point();
  for_each_word(s, K, [&](const Word&, const Isometry& m) {
    const auto p = hypercount::hyperbolic::apply(m, o);
    const double d = hypercount::hyperbolic::dist(o, p);
    if (d <= L) hits.emplace_back(d, p);
  });
  std::sort(hits.begin(), hits.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<hypercount::hyperbolic::Point> distinct;
  std::size_t first_near = 0;
  std::vector<double> dists;
  for (const auto& [d, p] : hits) {
    while (first_near < dists.size() && dists[first_near] < d - 1e-6) ++first_near;
    bool dup = false;
    for (std::size_t i = first_near; i < distinct.size() && !dup; ++i) dup = hypercount::hyperbolic::dist(distinct[i], p) < 1e-6;
    if (!dup) {
      distinct.push_back(p);
      dists.push_back(d);
    }
  }
  return distinct.size();
}

// Canonical cyclic words of all nontrivial classes with translation length
// <= L among cyclically reduced words of length <= K.
inline std::set<Word> class_oracle(const SurfaceGroup& s, int K, double L) {
  std::set<Word> out;
  for_each_word(s, K, [&](const Word& w, const Isometry& m) {
    if (w.empty() || w.front() == inverse_letter(w.back())) return;
    const double ell = hypercount::hyperbolic::translation_length(m);
    if (ell > L + 1e-9) return;
    const auto c = s.conjugacy_class(w);
    if (!c.cyclic_word.empty() && c.translation_length <= L) out.insert(c.cyclic_word);
  });
  return out;
}

// Words of orbit elements whose arc from x0 to g y0 has length in (L, L+h]
// and leaves and arrives in the sectors, read off the plain orbit.
inline std::set<Word> sector_oracle(const SurfaceGroup& s, const hypercount::hyperbolic::Point& x0,
                                    const hypercount::surface::Sector& I, const hypercount::hyperbolic::Point& y0,
                                    const hypercount::surface::Sector& J, double L, double h) {
  namespace hy = hypercount::hyperbolic;
  std::set<Word> out;
  for (const auto& p : hypercount::surface::enumerate_orbit(s, x0, y0, L + h)) {
    if (p.distance <= L) continue;
    const auto gy = hy::apply(p.element.matrix, y0);
    const double a0 = hy::log_map(x0, gy).direction.angle;
    const double a1 = hy::apply(p.element.matrix.inverse(), hy::arrival_direction(x0, gy)).angle;
    if (I.contains(a0) && J.contains(a1)) out.insert(p.element.word);
  }
  return out;
}

}  // namespace oracle
