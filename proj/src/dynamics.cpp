#include "flagsurge/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "flagsurge/error.hpp"
#include "flagsurge/parallel.hpp"

namespace flagsurge {

double directed_hausdorff(const SampledSet& a, const SampledSet& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "Hausdorff distance of an empty sample");
  // Early break against the running maximum; the point angle alone is a lower
  // bound on the distance.
  std::atomic<double> running{0.0};
  std::vector<double> nearest(a.size());
  parallel_for(a.size(), [&](std::size_t i) {
    const Flag& x = a.points[i];
    double best = std::numeric_limits<double>::infinity();
    double cos_best = -1.0;
    for (const Flag& y : b.points) {
      if (std::abs(dot(x.p.v, y.p.v)) < cos_best) continue;
      const double d = flag_distance(x, y);
      if (d < best) {
        best = d;
        cos_best = std::cos(best) - 1e-12;
        if (best < running.load(std::memory_order_relaxed)) break;
      }
    }
    nearest[i] = best;
    double cur = running.load(std::memory_order_relaxed);
    while (best > cur && !running.compare_exchange_weak(cur, best, std::memory_order_relaxed)) {
    }
  });
  return *std::max_element(nearest.begin(), nearest.end());
}

double hausdorff(const SampledSet& a, const SampledSet& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

SampledSet transform_set(const GroupElem& g, const SampledSet& k) {
  SampledSet out;
  out.points.resize(k.size());
  parallel_for(k.size(), [&](std::size_t i) { out.points[i] = act(g, k.points[i]); });
  return out;
}

SampledSet iterate_set(const GroupElem& g, const SampledSet& k, std::int64_t n) {
  if (n == 0) return k;
  return transform_set(power(g, n), k);
}

AttractionReport attraction_certificate(const GroupElem& g, const SampledSet& k, double eps, std::size_t n_max) {
  if (k.empty()) throw Error(ErrorKind::EmptySet, "attraction certificate needs a nonempty sample");
  const SpectralData s = classify(g);
  if (!s.loxodromic()) throw Error(ErrorKind::NotLoxodromic, "attraction needs a loxodromic element");

  std::vector<double> to_repeller(k.size());
  parallel_for(k.size(), [&](std::size_t i) { to_repeller[i] = distance_to_bouquet(k.points[i], s.x_minus); });
  for (std::size_t i = 0; i < k.size(); ++i)
    if (to_repeller[i] < kRepellerTol)
      throw Error(ErrorKind::TooCloseToRepeller,
                  "sample " + std::to_string(i) + " at distance " + std::to_string(to_repeller[i]) + " from B-");

  AttractionReport report;
  std::vector<Flag> current = k.points;
  std::vector<double> dist(k.size());
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      // g^n from repeated squaring keeps the error independent of the path length.
      const GroupElem gn = power(g, static_cast<std::int64_t>(n));
      parallel_for(k.size(), [&](std::size_t i) { current[i] = act(gn, k.points[i]); });
    }
    parallel_for(k.size(), [&](std::size_t i) { dist[i] = distance_to_bouquet(current[i], s.x_plus); });
    const double sup = *std::max_element(dist.begin(), dist.end());
    report.residuals.emplace_back(n, sup);
    if (sup < eps) {
      report.n_star = n;
      report.converged = true;
      return report;
    }
  }
  report.n_star = n_max;
  return report;
}

CoverageReport coverage_certificate(const GroupElem& g, const Tube& tube, const SampledSet& targets,
                                    std::size_t n_max, double margin) {
  const SpectralData s = classify(g);
  if (!s.loxodromic()) throw Error(ErrorKind::NotLoxodromic, "coverage needs a loxodromic element");
  for (const Flag& b : bouquet(s.x_minus, 64).points)
    if (!tube_contains(tube, b)) throw Error(ErrorKind::BadTube, "tube does not contain the repelling bouquet");

  const GroupElem inv = g.inverse();
  std::vector<long> steps(targets.size(), -1);
  std::vector<char> kept(targets.size(), 0);
  parallel_for(targets.size(), [&](std::size_t i) {
    const Flag& z = targets.points[i];
    if (distance_to_bouquet(z, s.x_plus) < margin) return;
    kept[i] = 1;
    Flag y = z;
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (n > 0) y = act(inv, y);
      if (tube_contains(tube, y)) {
        steps[i] = static_cast<long>(n);
        return;
      }
    }
  });

  CoverageReport report;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!kept[i]) {
      report.excluded.push_back(targets.points[i]);
      continue;
    }
    ++report.targets_total;
    if (steps[i] >= 0) {
      ++report.targets_reached;
      report.max_steps_used = std::max(report.max_steps_used, static_cast<std::size_t>(steps[i]));
    } else {
      report.failures.push_back(targets.points[i]);
    }
  }
  return report;
}

double lipschitz_on_pairs(const GroupElem& g, const SampledSet& a, const SampledSet& b) {
  const SampledSet ga = transform_set(g, a), gb = transform_set(g, b);
  std::vector<double> best(a.size(), 0.0);
  parallel_for(a.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = flag_distance(a.points[i], b.points[j]);
      if (d > 0.0) best[i] = std::max(best[i], flag_distance(ga.points[i], gb.points[j]) / d);
    }
  });
  return best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
}

}  // namespace flagsurge
