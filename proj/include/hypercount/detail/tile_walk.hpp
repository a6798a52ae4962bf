#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "hypercount/surface.hpp"

namespace hypercount::surface::detail {

// Breadth-first walk over the tiles hD of the tiling by the fundamental
// polygon, restricted to tiles that come within a radius of a point.
class TileWalk {
 public:
  struct Tile {
    Isometry matrix;
    int parent = -1;
    int depth = 0;
    char letter = 0;
  };
  using Accept = std::function<bool(const Isometry&)>;
  using Visit = std::function<void(int index, const Isometry&)>;

  TileWalk(const SurfaceGroup& s, const Point& x0, double radius, const EnumerationBudget& budget,
           const Accept& accept, const Visit& visit);

  Word word(int index) const;
  const std::vector<Tile>& tiles() const { return tiles_; }

 private:
  bool same_element(int existing, int parent, char letter) const;
  Word path_letters(int from_ancestor, int index) const;

  const SurfaceGroup& s_;
  Word root_word_;
  std::vector<Tile> tiles_;
};

// Hyperboloid coordinates of h(reference point).
std::array<double, 3> image_of_reference(const Isometry& h);

}  // namespace hypercount::surface::detail
