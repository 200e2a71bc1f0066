#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "flagsurge/flag.hpp"
#include "flagsurge/group.hpp"

namespace flagsurge {

double directed_hausdorff(const SampledSet& a, const SampledSet& b);
double hausdorff(const SampledSet& a, const SampledSet& b);

/// Pointwise image under g^n; the resolution becomes unknown.
SampledSet iterate_set(const GroupElem& g, const SampledSet& k, std::int64_t n);
SampledSet transform_set(const GroupElem& g, const SampledSet& k);

/// Analytic distance from z to the bouquet of `center`.
inline double bouquet_distance(const Flag& z, const Flag& center) { return distance_to_bouquet(z, center); }

struct AttractionReport {
  std::size_t n_star = 0;
  /// (n, sup over K of the distance from g^n x to the attractive bouquet).
  std::vector<std::pair<std::size_t, double>> residuals;
  bool converged = false;
};

inline constexpr double kRepellerTol = 1e-6;

/// Least n <= n_max with sup_K dist(g^n x, B+(g)) < eps. Throws NotLoxodromic,
/// EmptySet, or TooCloseToRepeller when a point of K is within 1e-6 of B-(g).
/// Running out of iterations is reported through converged = false.
AttractionReport attraction_certificate(const GroupElem& g, const SampledSet& k, double eps, std::size_t n_max);

struct CoverageReport {
  std::size_t targets_total = 0;
  std::size_t targets_reached = 0;
  std::size_t max_steps_used = 0;
  std::vector<Flag> failures;
  /// Targets closer than the margin to B+(g); not counted in targets_total.
  std::vector<Flag> excluded;

  bool complete() const { return failures.empty() && targets_reached == targets_total; }
};

/// For every target at distance >= margin from B+(g), searches the least
/// n <= n_max with g^-n z inside the tube. Throws BadTube when the tube misses
/// a sampled point of B-(g).
CoverageReport coverage_certificate(const GroupElem& g, const Tube& tube, const SampledSet& targets,
                                    std::size_t n_max, double margin = 0.1);

/// Largest ratio d(g a, g b) / d(a, b) over all pairs of A x B with d(a,b) > 0.
double lipschitz_on_pairs(const GroupElem& g, const SampledSet& a, const SampledSet& b);

}  // namespace flagsurge
