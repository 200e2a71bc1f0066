#include "flagsurge/sampling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "flagsurge/error.hpp"
#include "flagsurge/parallel.hpp"

namespace flagsurge {

namespace {

constexpr double kPi = std::numbers::pi;

struct Frame {
  Vec3 u, w;
};

// Orthonormal basis of axis^perp.
Frame frame_of(const Vec3& axis) {
  const std::size_t k = std::abs(axis[0]) < 0.6 ? 0 : (std::abs(axis[1]) < 0.6 ? 1 : 2);
  Vec3 u = cross(axis, unit(k));
  u = (1.0 / norm(u)) * u;
  return {u, cross(axis, u)};
}

// Unit vector whose |cosine| with `axis` equals t.
Vec3 at_cosine(Rng& rng, const Vec3& axis, double t) {
  const Frame f = frame_of(axis);
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  return t * axis + (s * std::cos(phi)) * f.u + (s * std::sin(phi)) * f.w;
}

// Directions n orthogonal to p with |<n, d>| <= k form an arc family of
// angular fraction `fraction` of the projective circle p^perp.
struct Arc {
  Frame frame;
  double theta0 = 0.0;
  double psi_min = 0.0;
  double fraction = 1.0;
};

Arc arc_of(const Vec3& p, const Vec3& d, double k) {
  Arc arc{frame_of(p)};
  const double a = dot(arc.frame.u, d), b = dot(arc.frame.w, d);
  const double r = std::hypot(a, b);
  arc.theta0 = std::atan2(b, a);
  if (r > k) {
    arc.psi_min = std::acos(std::clamp(k / r, 0.0, 1.0));
    arc.fraction = std::max(0.0, (kPi - 2.0 * arc.psi_min) / kPi);
  }
  return arc;
}

Vec3 draw_on_arc(Rng& rng, const Arc& arc) {
  const double psi = rng.uniform(arc.psi_min, kPi - arc.psi_min);
  const double th = arc.theta0 + psi;
  return std::cos(th) * arc.frame.u + std::sin(th) * arc.frame.w;
}

Flag oriented(bool dual, const Vec3& first, const Vec3& second) {
  return dual ? reproject(second, first) : reproject(first, second);
}

// Uniform flag with angle(first, a) >= min_a and angle(second, b) >= min_b,
// where (first, second) = (point, normal), or (normal, point) when dual.
std::optional<Flag> try_outside(Rng& rng, const Vec3& a, const Vec3& b, double min_a, double min_b, bool dual) {
  const Vec3 first = at_cosine(rng, a, rng.uniform(0.0, std::cos(min_a)));
  const Arc arc = arc_of(first, b, std::cos(min_b));
  if (arc.fraction <= 0.0 || rng.uniform() >= arc.fraction) return std::nullopt;
  return oriented(dual, first, draw_on_arc(rng, arc));
}

SampledSet finish(std::vector<Flag> pts, const std::function<Flag(Rng&)>& draw, std::uint64_t seed) {
  SampledSet out;
  out.resolution = estimate_resolution(pts, draw, seed ^ 0x9e3779b97f4a7c15ULL);
  out.points = std::move(pts);
  return out;
}

std::size_t draw_budget(std::size_t m, std::size_t max_draws) { return max_draws ? max_draws : 1000 * m + 10000; }

std::vector<Flag> collect(std::size_t m, std::size_t budget, const std::function<std::optional<Flag>(Rng&)>& attempt,
                          Rng& rng, const char* what) {
  std::vector<Flag> pts;
  pts.reserve(m);
  for (std::size_t draws = 0; pts.size() < m; ++draws) {
    if (draws >= budget) throw Error(ErrorKind::EmptyRegion, std::string("no admissible flags found for ") + what);
    if (auto x = attempt(rng)) pts.push_back(*x);
  }
  return pts;
}

}  // namespace

Vec3 Rng::unit_vector() {
  for (;;) {
    const Vec3 v{normal(), normal(), normal()};
    const double len = norm(v);
    if (len > 1e-8) return (1.0 / len) * v;
  }
}

Flag Rng::flag() {
  const Vec3 p = unit_vector();
  const Frame f = frame_of(p);
  const double th = uniform(0.0, kPi);
  return reproject(p, std::cos(th) * f.u + std::sin(th) * f.w);
}

SampledSet sample_uniform(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Flag> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) pts.push_back(rng.flag());
  return finish(std::move(pts), [](Rng& r) { return r.flag(); }, seed);
}

double estimate_resolution(const std::vector<Flag>& points, const std::function<Flag(Rng&)>& draw,
                           std::uint64_t seed, std::size_t probes) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  Rng rng(seed);
  std::vector<Flag> probe(probes);
  for (auto& x : probe) x = draw(rng);
  std::vector<double> nearest(probes, std::numeric_limits<double>::infinity());
  parallel_for(probes, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Flag& y : points) best = std::min(best, flag_distance(probe[i], y));
    nearest[i] = best;
  });
  double worst = 0.0;
  for (double d : nearest) worst = std::max(worst, d);
  return worst;
}

SampledSet tube_complement_sample(const Tube& t, std::size_t m, double margin, std::uint64_t seed) {
  if (margin < 0.0) throw Error(ErrorKind::InvalidArgument, "margin must be non-negative");
  const double min_a = t.r_alpha + margin, min_b = t.r_beta + margin;
  if (min_a > kPi / 2.0 || min_b > kPi / 2.0)
    throw Error(ErrorKind::EmptyRegion, "tube radii plus margin exceed pi/2");
  const Vec3 cp = t.center.p.v, cn = t.center.d.n;
  auto attempt = [&](Rng& r) { return try_outside(r, cp, cn, min_a, min_b, false); };
  auto draw = [&](Rng& r) {
    for (;;)
      if (auto x = attempt(r)) return *x;
  };
  Rng rng(seed);
  auto pts = collect(m, draw_budget(m, 0), attempt, rng, "tube complement");
  return finish(std::move(pts), draw, seed);
}

SampledSet tube_interior_sample(const Tube& t, std::size_t m, double margin, std::uint64_t seed) {
  const double ra = t.r_alpha - margin, rb = t.r_beta - margin;
  if (ra <= 0.0 && rb <= 0.0) throw Error(ErrorKind::EmptyRegion, "margin exceeds both tube radii");
  const double va = ra > 0.0 ? 1.0 - std::cos(ra) : 0.0;
  const double vb = rb > 0.0 ? 1.0 - std::cos(rb) : 0.0;
  const Vec3 cp = t.center.p.v, cn = t.center.d.n;
  auto attempt = [&](Rng& r) -> std::optional<Flag> {
    const bool dual = r.uniform(0.0, va + vb) >= va;
    const Vec3 axis = dual ? cn : cp;
    const Vec3 first = at_cosine(r, axis, r.uniform(std::cos(dual ? rb : ra), 1.0));
    const Frame f = frame_of(first);
    const double th = r.uniform(0.0, kPi);
    const Flag x = oriented(dual, first, std::cos(th) * f.u + std::sin(th) * f.w);
    // Flags lying in both fibered pieces would be drawn twice as often.
    const bool in_a = ra > 0.0 && proj_angle(x.p.v, cp) < ra;
    const bool in_b = rb > 0.0 && proj_angle(x.d.n, cn) < rb;
    if (in_a && in_b && r.uniform() < 0.5) return std::nullopt;
    return x;
  };
  auto draw = [&](Rng& r) {
    for (;;)
      if (auto x = attempt(r)) return *x;
  };
  Rng rng(seed);
  auto pts = collect(m, draw_budget(m, 0), attempt, rng, "tube interior");
  return finish(std::move(pts), draw, seed);
}

SampledSet tube_boundary_sample(const Tube& t, std::size_t m, std::uint64_t seed) {
  const Vec3 cp = t.center.p.v, cn = t.center.d.n;
  auto attempt = [&](Rng& r) -> std::optional<Flag> {
    const bool dual = r.uniform() < 0.5;
    const Vec3 axis = dual ? cn : cp, other = dual ? cp : cn;
    const double on = dual ? t.r_beta : t.r_alpha, off = dual ? t.r_alpha : t.r_beta;
    const Vec3 first = at_cosine(r, axis, std::cos(on));
    const Arc arc = arc_of(first, other, std::cos(off));
    if (arc.fraction <= 0.0 || r.uniform() >= arc.fraction) return std::nullopt;
    return oriented(dual, first, draw_on_arc(r, arc));
  };
  auto draw = [&](Rng& r) {
    for (;;)
      if (auto x = attempt(r)) return *x;
  };
  Rng rng(seed);
  auto pts = collect(m, draw_budget(m, 0), attempt, rng, "tube boundary");
  return finish(std::move(pts), draw, seed);
}

SampledSet sample_where(std::size_t m, std::uint64_t seed, const FlagPredicate& keep, std::size_t max_draws) {
  auto attempt = [&](Rng& r) -> std::optional<Flag> {
    const Flag x = r.flag();
    if (!keep(x)) return std::nullopt;
    return x;
  };
  auto draw = [&](Rng& r) {
    for (;;)
      if (auto x = attempt(r)) return *x;
  };
  Rng rng(seed);
  auto pts = collect(m, draw_budget(m, max_draws), attempt, rng, "predicate region");
  return finish(std::move(pts), draw, seed);
}

SampledSet farthest_point_subsample(const SampledSet& s, std::size_t m) {
  if (s.size() <= m) return s;
  SampledSet out;
  if (m == 0) return out;
  std::vector<double> gap(s.size(), std::numeric_limits<double>::infinity());
  std::size_t pick = 0;
  double last_gap = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    out.points.push_back(s.points[pick]);
    std::size_t next = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      gap[i] = std::min(gap[i], flag_distance(s.points[i], s.points[pick]));
      if (gap[i] > far) {
        far = gap[i];
        next = i;
      }
    }
    pick = next;
    last_gap = far;
  }
  // Every dropped point is within last_gap of a kept one.
  out.resolution = s.resolution ? std::optional<double>(*s.resolution + last_gap) : std::nullopt;
  return out;
}

SampledSet unite(const SampledSet& a, const SampledSet& b) {
  SampledSet out = a;
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  if (a.resolution && b.resolution)
    out.resolution = std::max(*a.resolution, *b.resolution);
  else
    out.resolution.reset();
  return out;
}

}  // namespace flagsurge
