#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercount/hyperbolic.hpp"

namespace hypercount::surface {

using hyperbolic::Isometry;
using hyperbolic::Point;

// Words over the generators a1 b1 a2 b2 ... written as the letters
// 'a', 'b', 'c', 'd', ...; the inverse of a generator is its uppercase.
using Word = std::string;

Word inverse(const Word& w);
inline char inverse_letter(char c) { return static_cast<char>(c ^ 0x20); }
std::string pretty(const Word& w);  // a1 b1 A1 ... form

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t produced)
      : std::runtime_error(what), produced_(produced) {}
  std::size_t produced() const { return produced_; }

 private:
  std::size_t produced_;
};

struct EnumerationBudget {
  std::size_t max_elements = 10'000'000;
  double max_seconds = 600.0;
};

struct GroupElement {
  Word word;  // freely reduced and Dehn-reduced
  Isometry matrix;
};

struct ConjugacyClass {
  Word cyclic_word;  // least rotation over all cyclically geodesic representatives
  double translation_length = 0.0;
  bool primitive = false;
  std::vector<int> homology;
  Word root;      // primitive root word (equals cyclic_word when primitive)
  int power = 1;  // cyclic_word is conjugate to root^power
};

// Genus-g surface group from the regular 4g-gon with vertex angles 2pi/(4g).
class SurfaceGroup {
 public:
  explicit SurfaceGroup(int genus);

  int genus() const { return genus_; }
  int rank() const { return 2 * genus_; }
  const Word& relator() const { return relator_; }

  Isometry letter(char c) const;
  Isometry evaluate(const Word& w) const;
  GroupElement element(const Word& w) const;

  Point base_point() const { return Point::reference(); }
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  double area() const;
  double unit_tangent_volume() const;
  std::vector<Point> polygon_vertices() const;
  double systole_bound() const { return 2.0 * inradius_; }

  // Side k of the fundamental polygon D is crossed into side_neighbor(k) D.
  int side_count() const { return 4 * genus_; }
  char side_letter(int k) const { return side_letters_[k]; }
  // sinh of the signed distance from q past the bisector carrying side k.
  double side_excess(int k, const std::array<double, 3>& q_hyperboloid) const;
  // Lower bound on d(q, D); exact when q is inside or beyond a single side.
  double domain_distance_lower_bound(const Point& q) const;
  // Returns (h, q) with p = h q and q in D.
  std::pair<Word, Point> locate(const Point& p) const;

  // Word problem.
  Word free_reduce(const Word& w) const;
  Word cyclic_free_reduce(const Word& w) const;
  Word dehn_reduce(const Word& w) const;
  Word cyclic_dehn_reduce(const Word& w) const;
  Word normal_form(const Word& w) const;
  bool equal(const Word& u, const Word& v) const;
  ConjugacyClass conjugacy_class(const Word& w) const;
  std::vector<int> abelianize(const Word& w) const;

 private:
  struct Match {
    int rotation = -1;
    int length = 0;
  };
  Match match_at(const Word& w, std::size_t i, bool cyclic) const;
  void validate(const Word& w) const;

  int genus_;
  double inradius_ = 0.0;
  double circumradius_ = 0.0;
  Word relator_;
  std::vector<Isometry> generators_;
  std::vector<char> side_letters_;
  std::vector<std::array<double, 3>> side_normals_;
  std::vector<Word> symmetrized_;                 // rotations of relator^{+-1}
  std::array<std::array<short, 128>, 128> pair_;  // first two letters -> rotation
};

SurfaceGroup build_surface(int genus);
Word reduce_word(const SurfaceGroup& s, const Word& w);
ConjugacyClass conjugacy_normal_form(const SurfaceGroup& s, const Word& w);
double translation_length(const SurfaceGroup& s, const ConjugacyClass& c);
std::vector<int> abelianize(const SurfaceGroup& s, const Word& w);

bool is_proper_power(const Word& w);
Word least_rotation(const Word& w);

// Exact conjugacy test through a geometric conjugator search confirmed on
// words. Returns t with t u t^-1 = v.
std::optional<Word> find_conjugator(const SurfaceGroup& s, const Word& u, const Word& v);

struct OrbitPoint {
  GroupElement element;
  double distance = 0.0;
};
// All g with d(x0, g y0) <= L, each once, ordered by (distance, word).
std::vector<OrbitPoint> enumerate_orbit(const SurfaceGroup& s, const Point& x0, const Point& y0,
                                        double L, const EnumerationBudget& budget = {});

// Arc of directions [start, start + width] at a point, counterclockwise.
struct Sector {
  double start = 0.0;
  double width = 0.0;
  bool contains(double angle) const;
};

struct SectorArc {
  GroupElement element;
  double length = 0.0;
  double initial_angle = 0.0;   // at x0
  double terminal_angle = 0.0;  // arrival at g y0 pulled back to y0
};
// Geodesic arcs from x0 to g y0 with length in (L, L + h], leaving x0 in I
// and arriving (pulled back to y0) in J.
std::vector<SectorArc> enumerate_sector_arcs(const SurfaceGroup& s, const Point& x0, const Sector& I,
                                             const Point& y0, const Sector& J, double L, double h,
                                             const EnumerationBudget& budget = {});

// Conjugacy classes of nontrivial elements with translation length <= L,
// ordered by (length, cyclic word).
std::vector<ConjugacyClass> enumerate_conjugacy_classes(const SurfaceGroup& s, double L,
                                                        const EnumerationBudget& budget = {});

}  // namespace hypercount::surface
