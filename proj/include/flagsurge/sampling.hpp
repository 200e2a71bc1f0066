#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "flagsurge/flag.hpp"

namespace flagsurge {

inline constexpr std::uint64_t kDefaultSeed = 20240517;

/// Seeded source of random flags; uniform means invariant under O(3).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Vec3 unit_vector();
  Flag flag();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

using FlagPredicate = std::function<bool(const Flag&)>;

SampledSet sample_uniform(std::size_t m, std::uint64_t seed);

/// Monte-Carlo covering radius of `points` inside the region described by
/// `in_region`: the largest nearest-sample distance over `probes` fresh draws.
double estimate_resolution(const std::vector<Flag>& points, const std::function<Flag(Rng&)>& draw,
                           std::uint64_t seed, std::size_t probes = 256);

/// Uniform sample of {x : angle(x.p, c.p) >= r_alpha + margin and
/// angle(x.d, c.d) >= r_beta + margin}. Throws EmptyRegion when a bound
/// exceeds pi/2.
SampledSet tube_complement_sample(const Tube& t, std::size_t m, double margin,
                                  std::uint64_t seed = kDefaultSeed);

/// Uniform sample of flags at depth >= margin inside t.
SampledSet tube_interior_sample(const Tube& t, std::size_t m, double margin = 0.0,
                                std::uint64_t seed = kDefaultSeed);

/// Sample of the boundary of t (depth exactly zero).
SampledSet tube_boundary_sample(const Tube& t, std::size_t m, std::uint64_t seed = kDefaultSeed);

/// Rejection sample of m uniform flags satisfying `keep`. Throws EmptyRegion
/// when fewer than m are found within max_draws draws.
SampledSet sample_where(std::size_t m, std::uint64_t seed, const FlagPredicate& keep,
                        std::size_t max_draws = 0);

/// Greedy farthest-point subsample down to at most m points, starting from
/// the first point; deterministic.
SampledSet farthest_point_subsample(const SampledSet& s, std::size_t m);

SampledSet unite(const SampledSet& a, const SampledSet& b);

}  // namespace flagsurge
