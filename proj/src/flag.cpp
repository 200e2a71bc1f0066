#include "flagsurge/flag.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "flagsurge/error.hpp"

namespace flagsurge {

namespace {

constexpr double kSignTol = 1e-9;
constexpr double kZeroTol = 1e-12;
constexpr double kDriftTol = 1e-12;

Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  if (!(len > 0.0) || !std::isfinite(len)) throw Error(ErrorKind::ZeroVector, "cannot normalize a zero vector");
  return (1.0 / len) * v;
}

// Unit vector orthogonal to `axis` and `u`, completing a frame of axis^perp.
Vec3 complement(const Vec3& axis, const Vec3& u) { return normalized(cross(axis, u)); }

}  // namespace

Vec3 canonical(const Vec3& v) {
  Vec3 u = normalized(v);
  for (double c : u) {
    if (std::abs(c) > kSignTol) {
      if (c < 0.0) u = -1.0 * u;
      break;
    }
  }
  for (double& c : u) c += 0.0;  // no negative zeros
  return u;
}

ProjPoint ProjPoint::from(const Vec3& v) {
  if (norm(v) <= kZeroTol) throw Error(ErrorKind::ZeroVector, "point has zero homogeneous coordinates");
  return ProjPoint{canonical(v)};
}

ProjLine ProjLine::from(const Vec3& n) {
  if (norm(n) <= kZeroTol) throw Error(ErrorKind::ZeroVector, "line has zero normal");
  return ProjLine{canonical(n)};
}

Flag make_flag(const Vec3& p, const Vec3& n) {
  const double np = norm(p), nn = norm(n);
  if (np <= kZeroTol || nn <= kZeroTol) throw Error(ErrorKind::ZeroVector, "flag input vector is zero");
  const double c = std::abs(dot(p, n)) / (np * nn);
  if (c > kIncidenceTol) throw Error(ErrorKind::NonIncident, "|<p,n>| = " + std::to_string(c));
  return reproject(p, n);
}

Flag reproject(const Vec3& p, const Vec3& n) {
  const Vec3 pu = canonical(p);
  Vec3 nu = normalized(n);
  const double drift = dot(nu, pu);
  if (std::abs(drift) > kDriftTol) nu = normalized(nu - drift * pu);
  return Flag{ProjPoint{pu}, ProjLine{canonical(nu)}};
}

double incidence(const Flag& x) { return std::abs(dot(x.p.v, x.d.n)); }

double flag_distance(const Flag& x, const Flag& y) {
  return proj_angle(x.p.v, y.p.v) + proj_angle(x.d.n, y.d.n);
}

bool same_flag(const Flag& x, const Flag& y, double tol) { return flag_distance(x, y) <= tol; }

SampledSet alpha_circle(const Flag& x, std::size_t m) {
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "circle sampling needs m >= 3");
  const Vec3 u = x.d.n;
  const Vec3 w = complement(x.p.v, u);
  SampledSet out;
  out.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double th = std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    out.points.push_back(reproject(x.p.v, std::cos(th) * u + std::sin(th) * w));
  }
  out.resolution = std::numbers::pi / static_cast<double>(m);
  return out;
}

SampledSet beta_circle(const Flag& x, std::size_t m) {
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "circle sampling needs m >= 3");
  const Vec3 u = x.p.v;
  const Vec3 w = complement(x.d.n, u);
  SampledSet out;
  out.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double th = std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    out.points.push_back(reproject(std::cos(th) * u + std::sin(th) * w, x.d.n));
  }
  out.resolution = std::numbers::pi / static_cast<double>(m);
  return out;
}

SampledSet bouquet(const Flag& x, std::size_t m) {
  SampledSet out = alpha_circle(x, m);
  const SampledSet b = beta_circle(x, m);
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  return out;
}

double distance_to_alpha_circle(const Flag& z, const Flag& x) {
  return proj_angle(z.p.v, x.p.v) + std::asin(std::min(1.0, std::abs(dot(z.d.n, x.p.v))));
}

double distance_to_beta_circle(const Flag& z, const Flag& x) {
  return proj_angle(z.d.n, x.d.n) + std::asin(std::min(1.0, std::abs(dot(z.p.v, x.d.n))));
}

double distance_to_bouquet(const Flag& z, const Flag& x) {
  return std::min(distance_to_alpha_circle(z, x), distance_to_beta_circle(z, x));
}

Tube Tube::make(const Flag& center, double r_alpha, double r_beta) {
  const double half_pi = std::numbers::pi / 2.0;
  if (!(r_alpha > 0.0 && r_alpha < half_pi && r_beta > 0.0 && r_beta < half_pi))
    throw Error(ErrorKind::InvalidTube,
                "radii must lie in (0, pi/2), got " + std::to_string(r_alpha) + ", " + std::to_string(r_beta));
  return Tube{center, r_alpha, r_beta};
}

double tube_depth(const Tube& t, const Flag& x) {
  return std::max(t.r_alpha - proj_angle(x.p.v, t.center.p.v), t.r_beta - proj_angle(x.d.n, t.center.d.n));
}

bool tube_contains(const Tube& t, const Flag& x) { return tube_depth(t, x) > 0.0; }

double tube_level(const Tube& t, const Flag& x) {
  return std::min(proj_angle(x.p.v, t.center.p.v) / t.r_alpha, proj_angle(x.d.n, t.center.d.n) / t.r_beta);
}

bool tubes_disjoint(const Tube& a, const Tube& b) {
  const double half_pi = std::numbers::pi / 2.0;
  if (proj_angle(a.center.p.v, b.center.p.v) < a.r_alpha + b.r_alpha) return false;
  if (proj_angle(a.center.d.n, b.center.d.n) < a.r_beta + b.r_beta) return false;
  // A point near one center can lie on a line near the other only if the two
  // discs reach a pair of orthogonal directions.
  if (proj_angle(a.center.p.v, b.center.d.n) + a.r_alpha + b.r_beta > half_pi) return false;
  if (proj_angle(b.center.p.v, a.center.d.n) + b.r_alpha + a.r_beta > half_pi) return false;
  return true;
}

Tube shrink(const Tube& t, double delta) { return Tube::make(t.center, t.r_alpha - delta, t.r_beta - delta); }

std::string to_string(const Flag& x) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g | %.17g, %.17g, %.17g)", x.p.v[0], x.p.v[1], x.p.v[2], x.d.n[0],
                x.d.n[1], x.d.n[2]);
  return buf;
}

}  // namespace flagsurge
