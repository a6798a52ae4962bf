#include "hypercount/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hypercount::hyperbolic {

namespace {

using cplx = std::complex<double>;

constexpr std::uint32_t kRenormalizeEvery = 32;

// Direction at i (frame angle) of a point w of the model, via the disk
// picture centered at i.
double direction_at_i(cplx w) {
  const cplx zeta = (w - cplx(0, 1)) / (w + cplx(0, 1));
  return wrap_angle(std::arg(zeta) + kPi / 2.0);
}

cplx to_local(const Point& base, cplx w) {
  const cplx z = base.model();
  return (w - z.real()) / z.imag();
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Point Point::from_model(std::complex<double> z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("point outside the model");
  return Point(z);
}

std::array<double, 3> Point::hyperboloid() const {
  const double x = z_.real(), y = z_.imag();
  const double r2 = x * x + y * y;
  return {(r2 + 1.0) / (2.0 * y), (r2 - 1.0) / (2.0 * y), x / y};
}

UnitTangent UnitTangent::reversed() const { return {base, wrap_angle(angle + kPi)}; }
UnitTangent UnitTangent::rotated(double by) const { return {base, wrap_angle(angle + by)}; }

double TangentVector::norm() const { return std::hypot(vx, vy); }

Isometry::Isometry(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  const double det = determinant();
  if (!(det > 0.0)) throw std::invalid_argument("isometry needs positive determinant");
  if (std::abs(det - 1.0) > 1e-15) *this = renormalized();
}

Isometry Isometry::rotation(double phi) {
  const double c = std::cos(phi / 2.0), s = std::sin(phi / 2.0);
  return Isometry(c, s, -s, c);
}

Isometry Isometry::translation(double angle, double t) {
  const Isometry r = rotation(angle - kPi / 2.0);
  const Isometry up(std::exp(t / 2.0), 0.0, 0.0, std::exp(-t / 2.0));
  return r * up * r.inverse();
}

Isometry Isometry::operator*(const Isometry& o) const {
  Isometry m(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
             c_ * o.b_ + d_ * o.d_, ops_ + o.ops_ + 1);
  if (m.ops_ >= kRenormalizeEvery) m = m.renormalized();
  return m;
}

Isometry Isometry::renormalized() const {
  // With large entries the computed determinant is mostly rounding error;
  // rescaling by it would do more harm than the drift it corrects.
  const double scale = std::abs(a_ * d_) + std::abs(b_ * c_);
  const double det = determinant();
  if (scale > 1e6 || !(det > 0.0)) return Isometry(a_, b_, c_, d_, 0);
  const double s = std::sqrt(det);
  return Isometry(a_ / s, b_ / s, c_ / s, d_ / s, 0);
}

double Isometry::distance_to_identity() const {
  auto gap = [&](double sign) {
    return std::max({std::abs(a_ - sign), std::abs(b_), std::abs(c_), std::abs(d_ - sign)});
  };
  return std::min(gap(1.0), gap(-1.0));
}

Point apply(const Isometry& g, const Point& p) {
  const cplx z = p.model();
  const cplx num = g.a() * z + g.b(), den = g.c() * z + g.d();
  // Imaginary part as y / |cz + d|^2 (unit determinant), which stays
  // positive where the complex quotient would cancel.
  const double n = std::norm(den);
  return Point::from_model(cplx((num * std::conj(den)).real() / n, z.imag() / n));
}

UnitTangent apply(const Isometry& g, const UnitTangent& v) {
  const cplx z = v.base.model();
  const cplx den = g.c() * z + g.d();
  return {apply(g, v.base), wrap_angle(v.angle - 2.0 * std::arg(den))};
}

double dist(const Point& p, const Point& q) {
  const cplx z = p.model(), w = q.model();
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

double cosh_dist(const Point& p, const Point& q) {
  const cplx z = p.model(), w = q.model();
  return 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
}

double angle_between(const UnitTangent& u, const UnitTangent& v) {
  if (dist(u.base, v.base) > 1e-9) throw std::invalid_argument("tangents at different points");
  return std::abs(std::remainder(u.angle - v.angle, kTwoPi));
}

Point exp_map(const Point& p, double angle, double t) {
  if (t == 0.0) return p;
  const Isometry r = Isometry::rotation(angle - kPi / 2.0);
  const cplx w = apply(r, Point::from_model(cplx(0.0, std::exp(t)))).model();
  const cplx z = p.model();
  return Point::from_model(z.real() + z.imag() * w);
}

Point exp_map(const UnitTangent& v, double t) { return exp_map(v.base, v.angle, t); }

Point exp_map(const TangentVector& v) {
  const double n = v.norm();
  if (n == 0.0) return v.base;
  return exp_map(v.base, std::atan2(v.vy, v.vx), n);
}

LogResult log_map(const Point& p, const Point& q) {
  const double d = dist(p, q);
  if (d < 1e-12) throw DegenerateDirection("log_map of coincident points");
  return {{p, direction_at_i(to_local(p, q.model()))}, d};
}

UnitTangent arrival_direction(const Point& p, const Point& q) {
  return log_map(q, p).direction.reversed();
}

double translation_length(const Isometry& g) {
  const double t = std::abs(g.trace()) / 2.0;
  return t <= 1.0 ? 0.0 : 2.0 * std::acosh(t);
}

Isometry axis_frame(const Isometry& g) {
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const double tr = a + d;
  if (std::abs(tr) <= 2.0) throw std::invalid_argument("axis_frame needs a hyperbolic element");
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(c) < 1e-15 * scale) {
    const double x0 = b / (d - a);
    return Isometry(1.0, x0, 0.0, 1.0);
  }
  const double root = std::sqrt(tr * tr - 4.0);
  double xp = (a - d + root) / (2.0 * c);
  double xm = (a - d - root) / (2.0 * c);
  if (xp < xm) std::swap(xp, xm);
  // 0 -> xm, infinity -> xp
  return Isometry(xp, xm, 1.0, 1.0);
}

Point fermi_point(const Isometry& frame, double s, double t) {
  const double es = std::exp(s);
  return apply(frame, Point::from_model(cplx(es * std::tanh(t), es / std::cosh(t))));
}

IdealTriangle IdealTriangle::standard() {
  return {{IdealPoint::finite(0.0), IdealPoint::finite(1.0), IdealPoint::infinity()}};
}

UnitTangent direction_to_ideal(const Point& p, const IdealPoint& xi) {
  if (xi.at_infinity) return {p, kPi / 2.0};
  const cplx w = to_local(p, cplx(xi.x, 0.0));
  const cplx zeta = (w - cplx(0, 1)) / (w + cplx(0, 1));
  return {p, wrap_angle(std::arg(zeta) + kPi / 2.0)};
}

std::array<double, 3> tripod_angles(const Point& p, const IdealTriangle& tri) {
  std::array<UnitTangent, 3> v;
  for (int k = 0; k < 3; ++k) v[k] = direction_to_ideal(p, tri.vertices[k]);
  return {angle_between(v[0], v[1]), angle_between(v[1], v[2]), angle_between(v[2], v[0])};
}

bool inside(const Point& p, const IdealTriangle& tri) {
  const auto a = tripod_angles(p, tri);
  return std::abs(a[0] + a[1] + a[2] - kTwoPi) < 1e-9;
}

Point center(const IdealTriangle& tri) {
  // Projective vectors (u, v) with xi = u / v.
  std::array<std::array<double, 2>, 3> pv;
  for (int k = 0; k < 3; ++k) {
    const auto& xi = tri.vertices[k];
    pv[k] = xi.at_infinity ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{xi.x, 1.0};
  }
  // M(0) = xi0, M(infinity) = xi2, M(sign) = xi1 where sign is chosen to
  // make M orientation preserving; the center of (0, sign, infinity) is
  // sign/2 + i sqrt(3)/2.
  const auto& [u0, v0] = pv[0];
  const auto& [u1, v1] = pv[1];
  const auto& [u2, v2] = pv[2];
  for (double sign : {1.0, -1.0}) {
    // sign * alpha * (u2, v2) + beta * (u0, v0) = (u1, v1)
    const double det = sign * (u2 * v0 - u0 * v2);
    if (det == 0.0) throw std::invalid_argument("degenerate ideal triangle");
    const double alpha = (u1 * v0 - u0 * v1) / det;
    const double beta = sign * (u2 * v1 - u1 * v2) / det;
    const double a = alpha * u2, b = beta * u0, c = alpha * v2, d = beta * v0;
    const double m = a * d - b * c;
    if (m > 0.0) {
      const Isometry g(a, b, c, d);
      return apply(g, Point::from_model(cplx(sign / 2.0, std::sqrt(3.0) / 2.0)));
    }
  }
  throw std::invalid_argument("degenerate ideal triangle");
}

double dist_to_geodesic(const Point& p, const IdealPoint& u, const IdealPoint& v) {
  if (u.at_infinity && v.at_infinity) throw std::invalid_argument("degenerate geodesic");
  const cplx z = p.model();
  if (u.at_infinity || v.at_infinity) {
    const double x0 = u.at_infinity ? v.x : u.x;
    return std::asinh(std::abs(z.real() - x0) / z.imag());
  }
  const cplx w = (z - u.x) / (z - v.x);
  return std::asinh(std::abs(w.real()) / std::abs(w.imag()));
}

double side_distance(const Point& p, const IdealTriangle& tri, int k) {
  return dist_to_geodesic(p, tri.vertices[(k + 1) % 3], tri.vertices[(k + 2) % 3]);
}

bool in_thin_hexagon(const Point& p, const IdealTriangle& tri, double eps) {
  if (!inside(p, tri)) return false;
  const double lo = 1.0 / std::tan(kPi / 3.0 + eps / 2.0);
  const double hi = 1.0 / std::tan(kPi / 3.0 - eps / 2.0);
  for (int k = 0; k < 3; ++k) {
    const double s = std::sinh(side_distance(p, tri, k));
    if (s < lo || s > hi) return false;
  }
  return true;
}

bool in_thin_hexagon_by_angles(const Point& p, const IdealTriangle& tri, double eps) {
  if (!inside(p, tri)) return false;
  for (double a : tripod_angles(p, tri))
    if (std::abs(a - 2.0 * kPi / 3.0) > eps) return false;
  return true;
}

HexagonStats hexagon_stats(double eps, int directions) {
  if (!(eps > 0.0) || eps >= kPi / 3.0) throw std::invalid_argument("hexagon_stats needs 0 < eps < pi/3");
  if (directions < 60) throw std::invalid_argument("too few directions");
  const IdealTriangle tri = IdealTriangle::standard();
  const Point c = center(tri);
  const int n = directions;
  // Boundary distance from the center in direction phi (the region is
  // star-shaped about c).
  auto radius_at = [&](double phi) {
    double lo = 0.0, hi = eps;
    while (in_thin_hexagon(exp_map(c, phi, hi), tri, eps)) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (in_thin_hexagon(exp_map(c, phi, mid), tri, eps) ? lo : hi) = mid;
    }
    return lo;
  };
  std::vector<double> radius(n);
  for (int i = 0; i < n; ++i) radius[i] = radius_at(kTwoPi * i / n);

  HexagonStats out;
  out.epsilon = eps;
  for (double r : radius) out.area += std::cosh(r) - 1.0;
  out.area *= kTwoPi / n;

  // Corners are the local maxima of the radius; each is refined by a
  // golden-section search between its sampled neighbours. The region is
  // convex, so the diameter is attained between two corners.
  std::vector<Point> corners;
  const double step = kTwoPi / n, golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < n; ++i) {
    const double prev = radius[(i + n - 1) % n], next = radius[(i + 1) % n];
    if (!(radius[i] >= prev && radius[i] > next)) continue;
    double a = kTwoPi * i / n - step, b = kTwoPi * i / n + step;
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = radius_at(x1), f2 = radius_at(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + golden * (b - a);
        f2 = radius_at(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - golden * (b - a);
        f1 = radius_at(x1);
      }
    }
    const double phi = 0.5 * (a + b);
    corners.push_back(exp_map(c, phi, radius_at(phi)));
  }
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j)
      out.diameter = std::max(out.diameter, dist(corners[i], corners[j]));
  if (corners.size() >= 2) {
    double sum = 0.0;
    for (std::size_t k = 0; k < corners.size(); ++k) sum += dist(corners[k], corners[(k + 1) % corners.size()]);
    out.vertex_gap = sum / static_cast<double>(corners.size());
  }
  return out;
}

double angle_defect_of_loop(double d, double ell) {
  if (d < 0.0 || ell < 0.0) throw std::invalid_argument("angle_defect_of_loop needs d, ell >= 0");
  return 2.0 * std::atan(std::sinh(d) * std::tanh(ell / 2.0));
}

}  // namespace hypercount::hyperbolic
