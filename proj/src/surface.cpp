#include "hypercount/surface.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace hypercount::surface {

namespace {

using hyperbolic::kPi;
using hyperbolic::kTwoPi;

constexpr std::size_t kClosureLimit = 1u << 16;

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

// Rotation of the 4g-gon side k onto side j composed with the reflection
// translation: maps side j onto side i, D onto the neighbor across side i.
Isometry side_pairing(double inradius, int n, int i, int j) {
  const double phi_i = kTwoPi * i / n, phi_j = kTwoPi * j / n;
  return Isometry::rotation(phi_i) * Isometry::translation(0.0, 2.0 * inradius) *
         Isometry::rotation(kPi - phi_j);
}

double minkowski(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  return -p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
}

}  // namespace

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (char& c : out) c = inverse_letter(c);
  return out;
}

std::string pretty(const Word& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty()) out += ' ';
    const int g = (is_lower(c) ? c - 'a' : c - 'A');
    out += (g % 2 == 0) ? 'a' : 'b';
    out += std::to_string(g / 2 + 1);
    if (!is_lower(c)) out += "^-1";
  }
  return out;
}

bool is_proper_power(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    if (std::equal(w.begin() + p, w.end(), w.begin())) return true;
  }
  return false;
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word r = w.substr(i) + w.substr(0, i);
    if (r < best) best = std::move(r);
  }
  return best;
}

SurfaceGroup::SurfaceGroup(int genus) : genus_(genus) {
  if (genus < 2 || genus > 13) throw std::invalid_argument("genus must be in [2, 13]");
  const int n = 4 * genus;
  const double vertex_angle = kTwoPi / n;
  inradius_ = std::acosh(std::cos(vertex_angle / 2.0) / std::sin(kPi / n));
  circumradius_ = std::acosh(1.0 / (std::tan(kPi / n) * std::tan(vertex_angle / 2.0)));

  side_letters_.assign(n, 0);
  for (int m = 0; m < genus; ++m) {
    const char a = static_cast<char>('a' + 2 * m), b = static_cast<char>('a' + 2 * m + 1);
    generators_.push_back(side_pairing(inradius_, n, 4 * m, 4 * m + 2));
    generators_.push_back(side_pairing(inradius_, n, 4 * m + 3, 4 * m + 1));
    side_letters_[4 * m] = a;
    side_letters_[4 * m + 2] = inverse_letter(a);
    side_letters_[4 * m + 3] = b;
    side_letters_[4 * m + 1] = inverse_letter(b);
    relator_ += a;
    relator_ += b;
    relator_ += inverse_letter(a);
    relator_ += inverse_letter(b);
  }

  const auto base = Point::reference().hyperboloid();
  const double norm = std::sqrt(2.0 * (std::cosh(2.0 * inradius_) - 1.0));
  for (int k = 0; k < n; ++k) {
    const auto nb = hyperbolic::apply(letter(side_letters_[k]), Point::reference()).hyperboloid();
    side_normals_.push_back({(nb[0] - base[0]) / norm, (nb[1] - base[1]) / norm, (nb[2] - base[2]) / norm});
  }

  for (auto& row : pair_) row.fill(-1);
  for (const Word& r : {relator_, inverse(relator_)}) {
    for (int i = 0; i < n; ++i) {
      const Word rot = r.substr(i) + r.substr(0, i);
      auto& slot = pair_[static_cast<unsigned char>(rot[0])][static_cast<unsigned char>(rot[1])];
      if (slot != -1) throw std::logic_error("relator pieces longer than one letter");
      slot = static_cast<short>(symmetrized_.size());
      symmetrized_.push_back(rot);
    }
  }
}

Isometry SurfaceGroup::letter(char c) const {
  const int g = is_lower(c) ? c - 'a' : c - 'A';
  if (g < 0 || g >= rank()) throw std::invalid_argument(std::string("bad letter '") + c + "'");
  return is_lower(c) ? generators_[g] : generators_[g].inverse();
}

Isometry SurfaceGroup::evaluate(const Word& w) const {
  Isometry m;
  for (char c : w) m = m * letter(c);
  return m.renormalized();
}

GroupElement SurfaceGroup::element(const Word& w) const {
  Word r = dehn_reduce(w);
  Isometry m = evaluate(r);
  return {std::move(r), m};
}

double SurfaceGroup::area() const { return 4.0 * kPi * (genus_ - 1); }
double SurfaceGroup::unit_tangent_volume() const { return kTwoPi * area(); }

std::vector<Point> SurfaceGroup::polygon_vertices() const {
  std::vector<Point> out;
  const int n = side_count();
  for (int k = 0; k < n; ++k)
    out.push_back(hyperbolic::exp_map(Point::reference(), kTwoPi * k / n + kPi / n, circumradius_));
  return out;
}

double SurfaceGroup::side_excess(int k, const std::array<double, 3>& q) const {
  return minkowski(q, side_normals_[k]);
}

double SurfaceGroup::domain_distance_lower_bound(const Point& q) const {
  const auto h = q.hyperboloid();
  double best = 0.0;
  for (int k = 0; k < side_count(); ++k) best = std::max(best, side_excess(k, h));
  return std::asinh(best);
}

std::pair<Word, Point> SurfaceGroup::locate(const Point& p) const {
  Word h;
  Point q = p;
  for (int guard = 0; guard < 100000; ++guard) {
    const auto qh = q.hyperboloid();
    int best = -1;
    double excess = 1e-12;
    for (int k = 0; k < side_count(); ++k) {
      const double e = side_excess(k, qh);
      if (e > excess) {
        excess = e;
        best = k;
      }
    }
    if (best < 0) return {dehn_reduce(h), q};
    q = hyperbolic::apply(letter(side_letters_[best]).inverse(), q);
    h += side_letters_[best];
  }
  throw std::logic_error("locate did not terminate");
}

void SurfaceGroup::validate(const Word& w) const {
  for (char c : w) {
    const int g = is_lower(c) ? c - 'a' : c - 'A';
    if (!std::isalpha(static_cast<unsigned char>(c)) || g < 0 || g >= rank())
      throw std::invalid_argument("word has letters outside the generating set: " + w);
  }
}

Word SurfaceGroup::free_reduce(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == inverse_letter(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

Word SurfaceGroup::cyclic_free_reduce(const Word& w) const {
  Word s = free_reduce(w);
  std::size_t lo = 0, hi = s.size();
  while (hi - lo >= 2 && s[lo] == inverse_letter(s[hi - 1])) {
    ++lo;
    --hi;
  }
  return s.substr(lo, hi - lo);
}

SurfaceGroup::Match SurfaceGroup::match_at(const Word& w, std::size_t i, bool cyclic) const {
  const std::size_t n = w.size();
  if (n < 2 || (!cyclic && i + 1 >= n)) return {};
  const short rot = pair_[static_cast<unsigned char>(w[i])][static_cast<unsigned char>(w[(i + 1) % n])];
  if (rot < 0) return {};
  const Word& r = symmetrized_[rot];
  const std::size_t limit = std::min<std::size_t>(r.size(), cyclic ? n : n - i);
  std::size_t m = 2;
  while (m < limit && w[(i + m) % n] == r[m]) ++m;
  return {rot, static_cast<int>(m)};
}

Word SurfaceGroup::dehn_reduce(const Word& w) const {
  validate(w);
  const int full = 4 * genus_;
  Word s = free_reduce(w);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const Match mt = match_at(s, i, false);
      if (2 * mt.length <= full) continue;
      const Word rep = inverse(symmetrized_[mt.rotation].substr(mt.length));
      s = free_reduce(s.substr(0, i) + rep + s.substr(i + mt.length));
      changed = true;
      break;
    }
  }
  return s;
}

Word SurfaceGroup::cyclic_dehn_reduce(const Word& w) const {
  validate(w);
  const int full = 4 * genus_;
  Word s = cyclic_free_reduce(w);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Match mt = match_at(s, i, true);
      if (2 * mt.length <= full) continue;
      const Word t = s.substr(i) + s.substr(0, i);
      s = cyclic_free_reduce(inverse(symmetrized_[mt.rotation].substr(mt.length)) + t.substr(mt.length));
      changed = true;
      break;
    }
  }
  return s;
}

Word SurfaceGroup::normal_form(const Word& w) const {
  const int full = 4 * genus_;
  Word start = dehn_reduce(w);
restart:
  std::unordered_set<Word> seen{start};
  std::vector<Word> queue{start};
  Word best = start;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const Word u = queue[qi];
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      const Match mt = match_at(u, i, false);
      if (mt.length == 0) continue;
      if (2 * mt.length > full) {
        start = dehn_reduce(u);
        goto restart;
      }
      if (2 * mt.length < full) continue;
      Word v = u.substr(0, i) + inverse(symmetrized_[mt.rotation].substr(mt.length)) + u.substr(i + mt.length);
      Word fv = free_reduce(v);
      if (fv.size() < u.size()) {
        start = dehn_reduce(fv);
        goto restart;
      }
      if (seen.insert(v).second) {
        if (seen.size() > kClosureLimit) throw std::runtime_error("normal form closure too large");
        if (v < best) best = v;
        queue.push_back(std::move(v));
      }
    }
  }
  return best;
}

bool SurfaceGroup::equal(const Word& u, const Word& v) const {
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
  return dehn_reduce(u.substr(k) + inverse(v.substr(k))).empty();
}

ConjugacyClass SurfaceGroup::conjugacy_class(const Word& w) const {
  const int full = 4 * genus_;
  Word start = cyclic_dehn_reduce(w);
  ConjugacyClass out;
  out.homology = abelianize(w);
  if (start.empty()) return out;
restart:
  std::unordered_set<Word> seen{least_rotation(start)};
  std::vector<Word> queue{*seen.begin()};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const Word u = queue[qi];
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Match mt = match_at(u, i, true);
      if (mt.length == 0) continue;
      if (2 * mt.length > full) {
        start = cyclic_dehn_reduce(u);
        goto restart;
      }
      if (2 * mt.length < full) continue;
      const Word t = u.substr(i) + u.substr(0, i);
      Word v = inverse(symmetrized_[mt.rotation].substr(mt.length)) + t.substr(mt.length);
      Word fv = cyclic_free_reduce(v);
      if (fv.size() < u.size()) {
        start = cyclic_dehn_reduce(fv);
        goto restart;
      }
      Word key = least_rotation(v);
      if (seen.insert(key).second) {
        if (seen.size() > kClosureLimit) throw std::runtime_error("conjugacy closure too large");
        queue.push_back(std::move(key));
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  out.cyclic_word = queue.front();
  out.translation_length = hyperbolic::translation_length(evaluate(out.cyclic_word));
  out.primitive = true;
  out.root = out.cyclic_word;
  for (const Word& u : queue) {
    if (!is_proper_power(u)) continue;
    std::size_t p = 1;
    while (u.size() % p != 0 || !std::equal(u.begin() + p, u.end(), u.begin())) ++p;
    out.primitive = false;
    out.root = u.substr(0, p);
    out.power = static_cast<int>(u.size() / p);
    break;
  }
  return out;
}

std::vector<int> SurfaceGroup::abelianize(const Word& w) const {
  validate(w);
  std::vector<int> h(rank(), 0);
  for (char c : w) {
    if (is_lower(c))
      ++h[c - 'a'];
    else
      --h[c - 'A'];
  }
  return h;
}

SurfaceGroup build_surface(int genus) { return SurfaceGroup(genus); }
Word reduce_word(const SurfaceGroup& s, const Word& w) { return s.dehn_reduce(w); }
ConjugacyClass conjugacy_normal_form(const SurfaceGroup& s, const Word& w) { return s.conjugacy_class(w); }
double translation_length(const SurfaceGroup& s, const ConjugacyClass& c) {
  return hyperbolic::translation_length(s.evaluate(c.cyclic_word));
}
std::vector<int> abelianize(const SurfaceGroup& s, const Word& w) { return s.abelianize(w); }

}  // namespace hypercount::surface
