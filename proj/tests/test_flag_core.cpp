#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "flagsurge/error.hpp"
#include "flagsurge/flag.hpp"
#include "flagsurge/io.hpp"
#include "flagsurge/sampling.hpp"
#include "support.hpp"

using namespace flagsurge;

namespace {

const double pi = std::numbers::pi;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

Flag e1e2() { return make_flag(unit(0), unit(2)); }
Flag e3e2e3() { return make_flag(unit(2), unit(0)); }

}  // namespace

TEST_CASE("make_flag canonical representatives") {
  const Flag x = make_flag({-2, 0, 0}, {0, 0, -5});
  CHECK(x.p.v == Vec3{1, 0, 0});
  CHECK(x.d.n == Vec3{0, 0, 1});
  const Flag y = e3e2e3();
  CHECK(y.p.v == Vec3{0, 0, 1});
  CHECK(y.d.n == Vec3{1, 0, 0});
  CHECK(kind_of([] { make_flag(unit(0), unit(0)); }) == ErrorKind::NonIncident);
  CHECK(kind_of([] { make_flag({0, 0, 0}, unit(0)); }) == ErrorKind::ZeroVector);
  CHECK(kind_of([] { ProjLine::from({0, 0, 0}); }) == ErrorKind::ZeroVector);
}

TEST_CASE("canonical has no negative zero") {
  const Vec3 v = canonical({0.0, -0.0, -3.0});
  CHECK_FALSE(std::signbit(v[0]));
  CHECK_FALSE(std::signbit(v[1]));
  CHECK(v[2] == 1.0);
}

TEST_CASE("flag_distance examples") {
  CHECK(flag_distance(e1e2(), e1e2()) == 0.0);
  CHECK(flag_distance(e1e2(), e3e2e3()) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(flag_distance(e1e2(), make_flag(unit(0), unit(1))) == doctest::Approx(pi / 2).epsilon(1e-14));
}

TEST_CASE("metric axioms and incidence on random flags") {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const Flag a = r.flag(), b = r.flag(), c = r.flag();
    REQUIRE(incidence(a) <= 1e-9);
    CHECK(flag_distance(a, b) == flag_distance(b, a));
    CHECK(flag_distance(a, c) <= flag_distance(a, b) + flag_distance(b, c) + 1e-12);
    CHECK(flag_distance(a, a) <= 1e-9);
  }
}

TEST_CASE("alpha and beta circles") {
  const Flag x = e1e2();
  const SampledSet a = alpha_circle(x, 16);
  CHECK(a.size() == 16);
  CHECK(*a.resolution == doctest::Approx(pi / 16));
  for (const Flag& y : a.points) {
    CHECK(y.p.v == x.p.v);
    CHECK(incidence(y) <= 1e-12);
  }
  double near = 1e9;
  for (const Flag& y : a.points) near = std::min(near, flag_distance(y, make_flag(unit(0), unit(1))));
  CHECK(near <= *a.resolution);

  const SampledSet b = beta_circle(x, 16);
  for (const Flag& y : b.points) CHECK(y.d.n == x.d.n);
  near = 1e9;
  for (const Flag& y : b.points) near = std::min(near, flag_distance(y, make_flag(unit(1), unit(2))));
  CHECK(near <= *b.resolution);

  // Three samples: lines at 0, pi/3, 2pi/3 about the point, so pairwise pi/3.
  const SampledSet three = alpha_circle(x, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(flag_distance(three.points[i], three.points[j]) >= pi / 6);

  CHECK(kind_of([&] { alpha_circle(x, 2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("circles meet only at the base flag") {
  Rng r(2);
  for (int t = 0; t < 20; ++t) {
    const Flag x = r.flag();
    const SampledSet a = alpha_circle(x, 24), b = beta_circle(x, 24);
    double best = 1e9;
    for (std::size_t i = 1; i < a.size(); ++i)
      for (std::size_t j = 1; j < b.size(); ++j) best = std::min(best, flag_distance(a.points[i], b.points[j]));
    CHECK(best > 0.0);
  }
}

TEST_CASE("bouquet contains both circles and its center") {
  const Flag x = make_flag({1, 2, 3}, {1, 1, -1});
  const SampledSet b = bouquet(x, 12);
  CHECK(b.size() == 24);
  double near = 1e9;
  for (const Flag& y : b.points) near = std::min(near, flag_distance(x, y));
  CHECK(near <= *b.resolution);
}

TEST_CASE("analytic bouquet distance agrees with dense circle samples") {
  Rng r(3);
  for (int t = 0; t < 200; ++t) {
    const Flag z = r.flag(), x = r.flag();
    const double exact = distance_to_bouquet(z, x);
    const double sampled = support::sampled_bouquet_distance(z, x, 4000);
    CHECK(exact <= sampled + 1e-12);
    CHECK(sampled - exact <= pi / 4000 + 1e-9);
  }
}

TEST_CASE("tube membership") {
  const Tube t = Tube::make(e1e2(), 0.1, 0.1);
  CHECK(tube_contains(t, t.center));
  CHECK_FALSE(tube_contains(t, e3e2e3()));
  for (std::size_t m : {3u, 17u, 64u})
    for (const Flag& y : bouquet(t.center, m).points) CHECK(tube_contains(t, y));
  CHECK(kind_of([] { Tube::make(make_flag(unit(0), unit(2)), 0.0, 0.1); }) == ErrorKind::InvalidTube);
  CHECK(kind_of([] { Tube::make(make_flag(unit(0), unit(2)), 0.1, 1.6); }) == ErrorKind::InvalidTube);
}

TEST_CASE("exact tube disjointness agrees with sampling") {
  Rng r(4);
  int agree = 0, disjoint = 0;
  for (int t = 0; t < 60; ++t) {
    const Tube a = Tube::make(r.flag(), r.uniform(0.05, 0.5), r.uniform(0.05, 0.5));
    const Tube b = Tube::make(r.flag(), r.uniform(0.05, 0.5), r.uniform(0.05, 0.5));
    const bool exact = tubes_disjoint(a, b);
    // Any sampled point of a inside b refutes disjointness.
    bool hit = false;
    for (const Flag& y : tube_interior_sample(a, 3000, 0.0, 100 + t).points)
      if (tube_contains(b, y)) {
        hit = true;
        break;
      }
    if (exact) {
      CHECK_FALSE(hit);
      ++disjoint;
    }
    if (hit == !exact) ++agree;
  }
  CHECK(disjoint > 0);
  CHECK(agree >= 50);
}

TEST_CASE("complement, interior and boundary samples") {
  const Tube t = Tube::make(make_flag({1, 1, 0}, {0, 0, 1}), 0.3, 0.2);
  const SampledSet c = tube_complement_sample(t, 2000, 0.05, 9);
  CHECK(c.size() == 2000);
  for (const Flag& y : c.points) CHECK(tube_depth(t, y) <= -0.05);
  const SampledSet in = tube_interior_sample(t, 2000, 0.0, 9);
  for (const Flag& y : in.points) CHECK(tube_contains(t, y));
  const SampledSet bd = tube_boundary_sample(t, 2000, 9);
  for (const Flag& y : bd.points) CHECK(std::abs(tube_depth(t, y)) <= 1e-12);
  CHECK(bd.resolution.has_value());

  const Tube tiny = Tube::make(e1e2(), 1e-3, 1e-3);
  CHECK_FALSE(tube_complement_sample(tiny, 10, 0.0, 1).empty());
  CHECK(kind_of([&] { tube_complement_sample(Tube::make(e1e2(), 1.5, 0.1), 10, 0.1, 1); }) == ErrorKind::EmptyRegion);
}

TEST_CASE("complement sampling is uniform on the complement") {
  // Rejection from the uniform distribution is the oracle: compare the
  // fraction of points in a probe tube.
  const Tube t = Tube::make(e1e2(), 0.4, 0.3);
  const Tube probe = Tube::make(make_flag({1, 0, 1}, {1, 0, -1}), 0.5, 0.5);
  const SampledSet direct = tube_complement_sample(t, 20000, 0.0, 5);
  const SampledSet oracle = sample_where(20000, 6, [&](const Flag& x) { return !tube_contains(t, x); });
  auto frac = [&](const SampledSet& s) {
    double k = 0;
    for (const Flag& y : s.points) k += tube_contains(probe, y);
    return k / static_cast<double>(s.size());
  };
  CHECK(std::abs(frac(direct) - frac(oracle)) < 0.02);
}

TEST_CASE("sampling is deterministic and resolution shrinks with m") {
  const SampledSet a = sample_uniform(500, 42), b = sample_uniform(500, 42);
  CHECK(format_csv(a.points) == format_csv(b.points));
  const double r1 = *sample_uniform(200, 1).resolution;
  const double r2 = *sample_uniform(5000, 1).resolution;
  CHECK(r2 < r1);
}

TEST_CASE("farthest point subsample") {
  const SampledSet s = sample_uniform(1000, 8);
  const SampledSet f = farthest_point_subsample(s, 100);
  CHECK(f.size() == 100);
  CHECK(farthest_point_subsample(s, 2000).size() == 1000);
}

TEST_CASE("csv round trip") {
  const SampledSet s = sample_uniform(100, 3);
  const std::vector<Flag> back = parse_csv(format_csv(s.points));
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(same_flag(back[i], s.points[i], 1e-15));
  CHECK(format_csv(s.points).rfind("px,py,pz,nx,ny,nz\n", 0) == 0);
  CHECK(kind_of([] { parse_csv("px,py,pz,nx,ny,nz\n1,0,0,0,0\n"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_csv("1,0,0,1,0,0\n"); }) == ErrorKind::NonIncident);
}
