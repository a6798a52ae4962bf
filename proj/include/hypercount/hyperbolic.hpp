#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace hypercount::hyperbolic {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class DegenerateDirection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A point of the hyperbolic plane. The model is an implementation detail;
// construct points through reference(), exp_map() or isometries.
class Point {
 public:
  Point() = default;
  static Point reference() { return Point(); }

  // Low-level model access, used by the surface and tests only.
  static Point from_model(std::complex<double> z);
  std::complex<double> model() const { return z_; }

  // Coordinates on the hyperboloid -t^2 + x^2 + y^2 = -1, t > 0.
  std::array<double, 3> hyperboloid() const;

 private:
  explicit Point(std::complex<double> z) : z_(z) {}
  std::complex<double> z_{0.0, 1.0};
};

// A unit tangent vector. The angle is measured in an orthonormal frame that
// is parallel across the whole model, so angles at a common base compare
// directly.
struct UnitTangent {
  Point base;
  double angle = 0.0;

  UnitTangent reversed() const;
  UnitTangent rotated(double by) const;
};

// Tangent vector given by frame components (vx, vy) at base.
struct TangentVector {
  Point base;
  double vx = 0.0;
  double vy = 0.0;
  double norm() const;
};

double wrap_angle(double a);  // into [0, 2pi)

// Orientation-preserving isometry, stored as an SL(2,R) matrix.
class Isometry {
 public:
  Isometry() = default;
  Isometry(double a, double b, double c, double d);

  static Isometry identity() { return Isometry(); }
  // Rotation by angle phi about the reference point.
  static Isometry rotation(double phi);
  // Translation by distance t along the geodesic through the reference point
  // in frame direction angle.
  static Isometry translation(double angle, double t);

  Isometry operator*(const Isometry& o) const;
  Isometry inverse() const { return Isometry(d_, -b_, -c_, a_, ops_); }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double trace() const { return a_ + d_; }
  double determinant() const { return a_ * d_ - b_ * c_; }

  Isometry renormalized() const;
  // Max entrywise distance to +I or -I, whichever is nearer.
  double distance_to_identity() const;

 private:
  Isometry(double a, double b, double c, double d, std::uint32_t ops)
      : a_(a), b_(b), c_(c), d_(d), ops_(ops) {}
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
  std::uint32_t ops_ = 0;  // compositions since last renormalization
};

Point apply(const Isometry& g, const Point& p);
UnitTangent apply(const Isometry& g, const UnitTangent& v);

double dist(const Point& p, const Point& q);
double cosh_dist(const Point& p, const Point& q);

// Unoriented angle in [0, pi]. Bases must agree to 1e-9.
double angle_between(const UnitTangent& u, const UnitTangent& v);

Point exp_map(const Point& p, double angle, double t);
Point exp_map(const UnitTangent& v, double t);
Point exp_map(const TangentVector& v);

struct LogResult {
  UnitTangent direction;
  double length = 0.0;
};
// Throws DegenerateDirection when d(p, q) < 1e-12.
LogResult log_map(const Point& p, const Point& q);

// Unit tangent at q of the geodesic arriving from p.
UnitTangent arrival_direction(const Point& p, const Point& q);

// 2 acosh(|tr|/2), zero for elliptic and parabolic elements.
double translation_length(const Isometry& g);

// Isometry taking the imaginary geodesic (reference point, direction pi/2)
// onto the axis of a hyperbolic g, reference point mapped onto the axis.
Isometry axis_frame(const Isometry& g);
// Point with Fermi coordinates (s along the axis, t signed distance off it).
Point fermi_point(const Isometry& frame, double s, double t);

// Boundary point of the plane.
struct IdealPoint {
  double x = 0.0;
  bool at_infinity = false;
  static IdealPoint finite(double x) { return {x, false}; }
  static IdealPoint infinity() { return {0.0, true}; }
};

struct IdealTriangle {
  std::array<IdealPoint, 3> vertices;
  static IdealTriangle standard();  // 0, 1, infinity
};

UnitTangent direction_to_ideal(const Point& p, const IdealPoint& xi);
// Unoriented angles between the tripod vectors: (v0,v1), (v1,v2), (v2,v0).
std::array<double, 3> tripod_angles(const Point& p, const IdealTriangle& tri);
bool inside(const Point& p, const IdealTriangle& tri);
Point center(const IdealTriangle& tri);
// Distance from p to the side opposite vertex k.
double side_distance(const Point& p, const IdealTriangle& tri, int k);
double dist_to_geodesic(const Point& p, const IdealPoint& u, const IdealPoint& v);

// Region T(eps) of points whose tripod angles are all within eps of 2pi/3,
// tested side by side through sinh d(p, side) = cot(theta/2).
bool in_thin_hexagon(const Point& p, const IdealTriangle& tri, double eps);
// Same region, tested directly on the tripod angles.
bool in_thin_hexagon_by_angles(const Point& p, const IdealTriangle& tri, double eps);

struct HexagonStats {
  double epsilon = 0.0;
  double diameter = 0.0;
  double area = 0.0;
  double vertex_gap = 0.0;  // mean distance between consecutive corners
};
HexagonStats hexagon_stats(double eps, int directions = 2880);

// Angle between the outgoing direction at x and the arrival direction at
// g(x) pulled back by g, for x at distance d from the axis of a hyperbolic
// g with translation length ell.
double angle_defect_of_loop(double d, double ell);

}  // namespace hypercount::hyperbolic
