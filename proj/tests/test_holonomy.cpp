#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flagsurge/error.hpp"
#include "flagsurge/holonomy.hpp"
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

// Plain five-fold loop over every coefficient vector.
double brute_min_positive(const std::array<double, 4>& e, int N) {
  double best = 1.0;
  for (int j = -N; j <= N; ++j)
    for (int k = -N; k <= N; ++k)
      for (int l = -N; l <= N; ++l)
        for (int m = -N; m <= N; ++m) {
          const double x = j * e[0] + k * e[1] + l * e[2] + m * e[3];
          for (int n = -N; n <= N; ++n) {
            const double v = std::abs(x + n);
            if (v > 1e-12 && v < best) best = v;
          }
        }
  return best;
}

double value_of(const std::array<double, 4>& e, const std::array<std::int64_t, 5>& c) {
  return std::abs(c[0] * e[0] + c[1] * e[1] + c[2] * e[2] + c[3] * e[3] + static_cast<double>(c[4]));
}

}  // namespace

TEST_CASE("cyclic holonomy") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  CHECK(is_identity(cyclic_holonomy(0, g)));
  CHECK(pgl_distance(cyclic_holonomy(3, g), GroupElem::diag(64, 8, 1)) < 1e-15);
  CHECK(pgl_distance(cyclic_holonomy(-1, g), g.inverse()) < 1e-15);
  CHECK(pgl_distance(cyclic_holonomy(2, g) * cyclic_holonomy(5, g), cyclic_holonomy(7, g)) < 1e-12);
}

TEST_CASE("surface words") {
  CHECK(SurfaceWord::parse("a1 a1^-1").letters.empty());
  CHECK(SurfaceWord::parse("a1, b2'") == SurfaceWord::parse("a1 b2^-1"));
  CHECK(to_string(SurfaceWord::parse("b1 a2^(-1)")) == "b1 a2^-1");
  CHECK(to_string(SurfaceWord{}) == "e");
  const SurfaceWord w = SurfaceWord::parse("a1 b1 a2");
  CHECK((w * inverse(w)).letters.empty());
  CHECK(surface_relator().letters.size() == 8);
  CHECK(kind_of([] { SurfaceWord::parse("a1 c3"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("deformed representation") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const DeformedRep rep = DeformedRep::make(g, {0.3, -0.2, 0.7, 0.11});
  // a1 -> g^s1, b1 -> g^t1, so a1 b1 -> g^(s1 + t1).
  CHECK(deformed_exponent(rep, SurfaceWord::parse("a1 b1"), 0) == doctest::Approx(1.0));
  CHECK(deformed_exponent(rep, SurfaceWord::parse("a2 b2^-1"), 2) == doctest::Approx(2.0 - 0.2 - 0.11));
  CHECK(pgl_distance(eval_deformed(rep, SurfaceWord::parse("a1"), 0), one_param_power(g, 0.3)) < 1e-12);
  CHECK(pgl_distance(eval_deformed(rep, SurfaceWord{}, 2), GroupElem::diag(16, 4, 1)) < 1e-12);

  // The relator goes to the identity, and the map is a homomorphism.
  CHECK(deformed_exponent(rep, surface_relator(), 0) == 0.0);
  CHECK(is_identity(eval_deformed(rep, surface_relator(), 0), 1e-12));
  const std::vector<std::string> words{"a1", "b1 a2", "b2^-1 a1 a1", "a2 b1^-1 b2", ""};
  for (const auto& u : words)
    for (const auto& v : words) {
      const SurfaceWord a = SurfaceWord::parse(u), b = SurfaceWord::parse(v);
      CHECK(pgl_distance(eval_deformed(rep, a * b, 3), eval_deformed(rep, a, 1) * eval_deformed(rep, b, 2)) < 1e-10);
    }
  CHECK(kind_of([] { DeformedRep::make(GroupElem::diag(4, -2, 1), {}); }) == ErrorKind::NotPositiveLoxodromic);
}

TEST_CASE("density against the exhaustive oracle, N = 1") {
  const std::array<double, 4> e{0.37, -0.21, 0.05, 0.613};
  const DensityResult r = density_check(e, 1, 1e-3);
  CHECK(r.min_positive == doctest::Approx(brute_min_positive(e, 1)).epsilon(1e-12));
  CHECK(value_of(e, r.coefficients) == doctest::Approx(r.min_positive).epsilon(1e-12));
  for (auto c : r.coefficients) CHECK(std::abs(c) <= 1);
}

TEST_CASE("density against the exhaustive oracle, random small cases") {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    const std::array<double, 4> e{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const int N = 1 + t % 4;
    const DensityResult r = density_check(e, N, 1e-3);
    CHECK(r.min_positive == doctest::Approx(brute_min_positive(e, N)).epsilon(1e-10));
    CHECK(value_of(e, r.coefficients) == doctest::Approx(r.min_positive).epsilon(1e-10));
  }
}

TEST_CASE("split search agrees with the exhaustive oracle") {
  Rng rng(5);
  for (int t = 0; t < 3; ++t) {
    const std::array<double, 4> e{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                                  rng.uniform(-0.2, 0.2)};
    const DensityResult r = density_check(e, 16, 1e-3);
    const double oracle = brute_min_positive(e, 16);
    CHECK(r.min_positive == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(value_of(e, r.coefficients) == doctest::Approx(r.min_positive).epsilon(1e-9));
    for (auto c : r.coefficients) CHECK(std::abs(c) <= 16);
  }
}

TEST_CASE("irrational single weight") {
  const double s = std::sqrt(2.0) / 10.0;
  const DensityResult r = density_check({s, 0, 0, 0}, 100, 1e-2);
  double oracle = 1.0;
  for (int j = -100; j <= 100; ++j)
    for (int n = -100; n <= 100; ++n) {
      const double v = std::abs(j * s + n);
      if (v > 1e-12) oracle = std::min(oracle, v);
    }
  CHECK(r.min_positive == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(r.dense_at_scale);
  MESSAGE("min positive " << r.min_positive << " at j = " << r.coefficients[0] << ", n = " << r.coefficients[4]);
}

TEST_CASE("rational and zero weights") {
  const DensityResult z = density_check({0, 0, 0, 0}, 10, 1e-3);
  CHECK(z.min_positive == 1.0);
  CHECK_FALSE(z.dense_at_scale);
  const DensityResult half = density_check({0.5, 0.25, 0, 0}, 20, 1e-3);
  CHECK(half.min_positive == doctest::Approx(0.25));
  CHECK_FALSE(half.dense_at_scale);
  CHECK(kind_of([] { density_check({0.1, 0, 0, 0}, 0, 1e-3); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { density_check({0.1, 0, 0, 0}, 5, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("density is monotone in N") {
  const std::array<double, 4> e{0.1234567, 0.0271828, 0.0314159, 0.0577215};
  double prev = 1.0;
  for (std::size_t N : {1u, 2u, 4u, 8u, 12u, 20u}) {
    const double v = density_check(e, N, 1e-3).min_positive;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("trace invariants") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const DeformedRep rep = DeformedRep::make(g, {0.5, 0, 0, 0});
  const std::vector<double> none = trace_invariants(rep, 0);
  REQUIRE(none.size() == 1);
  CHECK(none[0] == doctest::Approx(3.0));

  // det-one representative diag(2, 1, 1/2): trace of its x-th power.
  const std::vector<double> tr = trace_invariants(rep, 1);
  std::vector<double> oracle;
  for (double x : {0.0, 0.5, 1.0, 1.5}) oracle.push_back(std::pow(2.0, x) + 1.0 + std::pow(2.0, -x));
  REQUIRE(tr.size() == oracle.size());
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr[i] == doctest::Approx(oracle[i]).epsilon(1e-12));

  // Conjugation invariance.
  Rng r(6);
  const GroupElem h = support::random_elem(r);
  const std::array<double, 4> e{0.1, 0.2, 0.3, 0.4};
  const auto a = trace_invariants(DeformedRep::make(g, e), 1);
  const auto b = trace_invariants(DeformedRep::make(h * g * h.inverse(), e), 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-8));

  const auto c = trace_invariants(DeformedRep::make(g, {std::sqrt(2.0) / 10, 0, 0, 0}), 1);
  CHECK(c != a);
}

TEST_CASE("covering parity") {
  CHECK(covering_parity(SurfaceWord::parse("a1 a2")) == 0);
  CHECK(covering_parity(SurfaceWord::parse("b1")) == 1);
  CHECK(covering_parity(SurfaceWord::parse("b1 b2^-1 a1")) == 0);
  CHECK(covering_parity(surface_relator()) == 0);
  const SurfaceWord u = SurfaceWord::parse("b1 a2"), v = SurfaceWord::parse("b2 b1 a1");
  CHECK(covering_parity(u * v) == (covering_parity(u) + covering_parity(v)) % 2);
}

TEST_CASE("surjectivity obstruction") {
  const GroupElem g = GroupElem::diag(4, 2, 1);
  const SpectralData s = classify(g);
  const Tube p = Tube::make(s.x_minus, 0.3, 0.3);
  SampledSet probe = unite(sample_uniform(2000, 1), unite(bouquet(s.x_minus, 64), bouquet(s.x_plus, 64)));
  probe.resolution.reset();
  const ObstructionReport full = surjectivity_obstruction(g, probe, p, 128, 1000, 2);
  CHECK(full.verdict == Verdict::surjective_at_scale);
  CHECK(full.coverage.complete());
  CHECK(to_string(full.verdict) == "surjective_at_scale");

  const ObstructionReport cut = surjectivity_obstruction(g, probe, p, 0, 1000, 2);
  CHECK(cut.verdict == Verdict::not_established);
  CHECK_FALSE(cut.coverage.failures.empty());

  // An image that stays away from both bouquets.
  const SampledSet kleinian = sample_where(2000, 3, [&](const Flag& x) {
    return distance_to_bouquet(x, s.x_minus) > 0.3 && distance_to_bouquet(x, s.x_plus) > 0.3;
  });
  CHECK(kind_of([&] { surjectivity_obstruction(g, kleinian, p, 128); }) == ErrorKind::MissingBouquetSamples);
  CHECK(kind_of([&] { surjectivity_obstruction(g, SampledSet{}, p, 128); }) == ErrorKind::MissingBouquetSamples);
}
