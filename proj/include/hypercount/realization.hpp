#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercount/graph.hpp"
#include "hypercount/hyperbolic.hpp"
#include "hypercount/surface.hpp"

namespace hypercount::realization {

using graph::FatGraph;
using graph::Graph;
using hyperbolic::Isometry;
using hyperbolic::Point;
using hyperbolic::TangentVector;
using hyperbolic::UnitTangent;
using surface::SurfaceGroup;
using surface::inverse;
using surface::Word;

// Homotopy class of a map X -> Sigma: a spanning tree with trivial holonomy
// and one word per edge. The lifted edge e runs from P_tail(e) to
// holonomy[e] P_head(e).
struct MarkedRepresentation {
  Graph graph;
  std::vector<char> tree;      // per edge
  std::vector<Word> holonomy;  // per edge; empty on tree edges
};

// Breadth-first spanning tree from root, edges scanned in index order.
std::vector<char> bfs_spanning_tree(const Graph& g, int root);
// Tree containing the given edges (which must span a forest) first.
std::vector<char> spanning_tree_containing(const Graph& g, const std::vector<int>& edges, int root);

// Re-express a representation (with vertex lifts) in the frame of another
// spanning tree rooted at root; the root keeps its lift.
struct Gauged {
  MarkedRepresentation rep;
  std::vector<Point> positions;
};
Gauged regauge(const SurfaceGroup& s, const MarkedRepresentation& rep, const std::vector<Point>& positions,
               const std::vector<char>& tree, int root);
// Conjugate everything by t^-1: holonomy t^-1 g t, positions t^-1 P.
Gauged conjugate(const SurfaceGroup& s, const Gauged& x, const Word& t);

// A vertex lift held as frame * local with frame a group element and local
// in the fundamental domain. Lifts far from the base point lose precision as
// plain points; in this form they do not.
struct Lift {
  Word frame;
  Point local;
};
std::vector<Lift> to_lifts(const SurfaceGroup& s, const std::vector<Point>& positions);
std::vector<Point> to_points(const SurfaceGroup& s, const std::vector<Lift>& lifts);

class Realization {
 public:
  Realization(const SurfaceGroup& s, MarkedRepresentation rep, std::vector<Point> positions);
  Realization(const SurfaceGroup& s, MarkedRepresentation rep, std::vector<Lift> lifts);

  const MarkedRepresentation& rep() const { return rep_; }
  const Graph& graph() const { return rep_.graph; }
  const std::vector<Point>& positions() const { return positions_; }
  const std::vector<Lift>& lifts() const { return lifts_; }
  void set_positions(std::vector<Point> p);
  void set_lifts(std::vector<Lift> l);
  const Isometry& edge_isometry(int e) const { return matrices_[e]; }
  // Holonomy isometry of half-edge h (edge inverse when h is a head half).
  Isometry half_edge_isometry(int h) const;

  double edge_length(int e) const;
  std::vector<double> edge_lengths() const;
  double total_length() const;
  // Unit tangent at vertex_of(h) along the lifted edge of h.
  UnitTangent tangent(int h) const;

 private:
  const SurfaceGroup* s_;
  MarkedRepresentation rep_;
  std::vector<Point> positions_;
  std::vector<Lift> lifts_;
  std::vector<Isometry> frames_;    // per vertex, evaluated lift frames
  std::vector<Isometry> matrices_;  // per edge, holonomy
  std::vector<Isometry> local_;     // per edge, between local points
};

double length(const Realization& r);
// Per-vertex gradient of length, frame components at each vertex.
std::vector<TangentVector> gradient(const Realization& r);
double gradient_norm(const std::vector<TangentVector>& g);  // max over vertices

enum class MinimizeStatus { Critical, Degenerate, NotConverged };
const char* to_string(MinimizeStatus s);

struct MinimizeOptions {
  double gradient_tolerance = 1e-10;
  double min_edge_length = 1e-7;
  int max_iterations = 100000;
};

struct MinimizeResult {
  MinimizeStatus status = MinimizeStatus::NotConverged;
  std::vector<Point> positions;
  std::vector<Lift> lifts;  // the same positions at full precision
  double length = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::string reason;
};

// True when the holonomy of all non-tree edges generates an abelian group
// (decided on words).
bool abelian_image(const SurfaceGroup& s, const MarkedRepresentation& rep);

std::vector<Point> default_start(const Graph& g, const Point& center);
MinimizeResult minimize_to_critical(const SurfaceGroup& s, const MarkedRepresentation& rep,
                                    std::vector<Point> start, const MinimizeOptions& opt = {});

struct CriticalityReport {
  std::vector<std::array<double, 3>> angles;  // per vertex, consecutive pairs
  double max_angle_deviation = 0.0;           // from 2pi/3
  double gradient_norm = 0.0;
  double min_edge_length = 0.0;
};
CriticalityReport criticality_report(const Realization& r);

// Boundary curve of a one-boundary fat graph under a realization.
struct BoundaryImage {
  Word word;
  surface::ConjugacyClass klass;
  double length = 0.0;
};
BoundaryImage lambda_boundary(const SurfaceGroup& s, const FatGraph& x, const Realization& r);

class DegenerateTangents : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
// Counterclockwise order of the edge directions at each vertex matches the
// cyclic order of the fat structure.
bool is_fat_compatible(const FatGraph& x, const Realization& r);

double fixed_vertex_sector_volume(double eps, int vertices);
// Predicted count of critical realizations with lengths in the box
// prod (L_e, L_e + h].
double box_count_prediction(int chi, const std::vector<double>& lower, double h, double vol_sigma);
// Leading coefficient c with |critical realizations of length <= L| ~ c L^{-3chi-1} e^L.
double critical_count_coefficient(int chi, double vol_unit_tangent);
double critical_count_prediction(int chi, double L, double vol_unit_tangent);
// -3 chi log(4/3) for a one-boundary graph of genus g (chi = 1 - 2g).
double kappa(int genus);

// ---------------------------------------------------------------------------
// Enumeration of critical realizations.

struct CriticalComponent {
  MarkedRepresentation rep;  // canonical frame: bfs tree from vertex 0
  std::vector<Point> positions;
  std::vector<double> edge_lengths;
  double length = 0.0;
  int orbit = -1;  // automorphism orbit id
};

struct EnumerateOptions {
  int threads = 1;
  double cell_radius = 0.5;
  surface::EnumerationBudget budget{};
  MinimizeOptions minimize{};
};

struct CriticalEnumeration {
  std::vector<CriticalComponent> components;  // raw: up to conjugation only
  std::size_t raw_count = 0;
  std::size_t quotient_count = 0;  // up to graph automorphisms as well
  std::size_t candidates = 0;      // tuples passing the length program
  std::size_t minimized = 0;       // distinct tuples minimized
  std::size_t not_converged = 0;   // minimizations that hit the iteration cap
  bool automorphism_closed = true;
};

CriticalEnumeration enumerate_critical(const SurfaceGroup& s, const Graph& x, double L,
                                       const EnumerateOptions& opt = {});

// Brute-force reference for two-loop graphs (rank 2): every pair of
// holonomies with displacement at most L + 2R from the base point, filtered
// only by the cycle inequality, each minimized.
CriticalEnumeration enumerate_critical_brute_force(const SurfaceGroup& s, const Graph& x, double L,
                                                   const EnumerateOptions& opt = {});

// Exact equivalence (simultaneous conjugation) of two canonical-frame
// components; returns true and confirms on words.
bool equivalent_components(const SurfaceGroup& s, const CriticalComponent& a, const CriticalComponent& b);

}  // namespace hypercount::realization
