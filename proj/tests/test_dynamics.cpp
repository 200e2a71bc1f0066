#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "flagsurge/dynamics.hpp"
#include "flagsurge/error.hpp"
#include "support.hpp"

using namespace flagsurge;

namespace {

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

SampledSet one(const Flag& x) { return SampledSet{{x}, 0.0}; }

}  // namespace

TEST_CASE("hausdorff") {
  const SampledSet a = sample_uniform(50, 1), b = sample_uniform(70, 2);
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff(a, b) == hausdorff(b, a));
  CHECK(directed_hausdorff(SampledSet{{a.points[3], a.points[7]}, {}}, a) == 0.0);
  CHECK(directed_hausdorff(one(e1e2()), one(e3e2e3())) == doctest::Approx(std::numbers::pi));

  // 2 x 1 distance matrix.
  const Flag p = e1e2(), q = make_flag(unit(0), unit(1)), r = e3e2e3();
  const SampledSet two{{p, q}, {}};
  const double expect = std::max(flag_distance(p, r), flag_distance(q, r));
  CHECK(hausdorff(two, one(r)) == doctest::Approx(expect));

  // Brute-force oracle.
  double worst = 0.0;
  for (const Flag& x : a.points) {
    double best = 1e9;
    for (const Flag& y : b.points) best = std::min(best, flag_distance(x, y));
    worst = std::max(worst, best);
  }
  CHECK(directed_hausdorff(a, b) == worst);
  CHECK(kind_of([&] { directed_hausdorff(SampledSet{}, a); }) == ErrorKind::EmptySet);
}

TEST_CASE("hausdorff on clustered samples matches the brute-force oracle") {
  const Tube t = Tube::make(e3e2e3(), 0.3, 0.2);
  const SampledSet a = tube_boundary_sample(t, 1500, 1), b = tube_interior_sample(t, 1200, 0.0, 2);
  auto brute = [](const SampledSet& x, const SampledSet& y) {
    double worst = 0.0;
    for (const Flag& p : x.points) {
      double best = 1e9;
      for (const Flag& q : y.points) best = std::min(best, flag_distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  CHECK(directed_hausdorff(a, b) == brute(a, b));
  CHECK(directed_hausdorff(b, a) == brute(b, a));
}

TEST_CASE("iterate_set") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const SampledSet k = sample_uniform(100, 3);
  const SampledSet same = iterate_set(g, k, 0);
  CHECK(hausdorff(same, k) == 0.0);
  CHECK(iterate_set(g, k, 7).size() == k.size());
  CHECK_FALSE(iterate_set(g, k, 7).resolution.has_value());
  CHECK(same_flag(iterate_set(g, one(e1e2()), 12).points[0], e1e2(), 1e-12));
}

TEST_CASE("attraction certificate for diag(4,2,1)") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const SpectralData s = classify(g);
  const SampledSet k =
      sample_where(1000, 4, [&](const Flag& x) { return distance_to_bouquet(x, s.x_minus) >= 0.2; });
  const AttractionReport rep = attraction_certificate(g, k, 1e-3, 64);
  REQUIRE(rep.converged);
  MESSAGE("n_star = " << rep.n_star);
  CHECK(rep.n_star <= 64);
  CHECK(rep.residuals.back().second < 1e-3);
  // Eventually non-increasing.
  std::size_t n0 = rep.residuals.size() - 1;
  while (n0 > 0 && rep.residuals[n0 - 1].second >= rep.residuals[n0].second) --n0;
  CHECK(n0 <= rep.n_star);

  CHECK(attraction_certificate(g, one(s.x_plus), 1e-3, 10).n_star == 0);
  CHECK(kind_of([&] { attraction_certificate(g, one(s.x_minus), 1e-3, 10); }) == ErrorKind::TooCloseToRepeller);
  CHECK(kind_of([&] { attraction_certificate(g, SampledSet{}, 1e-3, 10); }) == ErrorKind::EmptySet);
  CHECK(kind_of([&] { attraction_certificate(GroupElem::identity(), k, 1e-3, 10); }) == ErrorKind::NotLoxodromic);
  CHECK_FALSE(attraction_certificate(g, k, 1e-3, 2).converged);
}

TEST_CASE("attraction of the inverse targets the repelling bouquet") {
  const GroupElem g = GroupElem::from_rows({3, 1, 0, 0, 1.5, 0.5, 0.2, 0, 0.4});
  const SpectralData s = classify(g);
  REQUIRE(s.loxodromic());
  const SampledSet k = sample_where(200, 5, [&](const Flag& x) {
    return distance_to_bouquet(x, s.x_minus) >= 0.2 && distance_to_bouquet(x, s.x_plus) >= 0.2;
  });
  const GroupElem inv = g.inverse();
  const AttractionReport fwd = attraction_certificate(g, k, 1e-4, 200);
  const AttractionReport bwd = attraction_certificate(inv, k, 1e-4, 200);
  CHECK(fwd.converged);
  CHECK(bwd.converged);
  // Independent check of the targets.
  for (const Flag& x : k.points) {
    CHECK(distance_to_bouquet(act(power(g, static_cast<std::int64_t>(fwd.n_star)), x), s.x_plus) < 1e-4);
    CHECK(distance_to_bouquet(act(power(inv, static_cast<std::int64_t>(bwd.n_star)), x), s.x_minus) < 1e-4);
  }
}

TEST_CASE("coverage certificate") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const SpectralData s = classify(g);
  const Tube p = Tube::make(s.x_minus, 0.3, 0.3);
  const CoverageReport at = coverage_certificate(g, p, one(s.x_minus), 0);
  CHECK(at.complete());
  CHECK(at.max_steps_used == 0);

  const SampledSet targets = sample_uniform(1000, 6);
  const CoverageReport rep = coverage_certificate(g, p, targets, 128, 0.1);
  CHECK(rep.complete());
  CHECK(rep.targets_total + rep.excluded.size() == 1000);
  MESSAGE("max steps " << rep.max_steps_used);
  // Independent replay of the reported step bound.
  for (const Flag& z : targets.points) {
    if (distance_to_bouquet(z, s.x_plus) < 0.1) continue;
    bool reached = false;
    for (std::int64_t n = 0; n <= static_cast<std::int64_t>(rep.max_steps_used) && !reached; ++n)
      reached = tube_contains(p, act(power(g, -n), z));
    CHECK(reached);
  }

  const CoverageReport on = coverage_certificate(g, p, one(s.x_plus), 128, 0.1);
  CHECK(on.excluded.size() == 1);
  CHECK(on.targets_total == 0);

  const CoverageReport none = coverage_certificate(g, p, targets, 0, 0.1);
  CHECK_FALSE(none.complete());
  CHECK_FALSE(none.failures.empty());

  CHECK(kind_of([&] { coverage_certificate(g, Tube::make(s.x_plus, 0.3, 0.3), targets, 5); }) == ErrorKind::BadTube);
}

TEST_CASE("hausdorff under g is bounded by the measured Lipschitz constant") {
  Rng r(7);
  const GroupElem g = support::random_elem(r);
  const SampledSet a = sample_uniform(40, 8), b = sample_uniform(40, 9);
  const double lip = lipschitz_on_pairs(g, a, b);
  MESSAGE("measured Lipschitz bound " << lip);
  CHECK(lip > 0.0);
  CHECK(hausdorff(transform_set(g, a), transform_set(g, b)) <= lip * hausdorff(a, b) + 1e-12);
}
