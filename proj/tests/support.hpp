#pragma once

#include <cmath>
#include <cstdint>

#include "flagsurge/flag.hpp"
#include "flagsurge/group.hpp"
#include "flagsurge/sampling.hpp"

namespace support {

using namespace flagsurge;

inline Mat3 random_matrix(Rng& r) {
  for (;;) {
    Mat3 m;
    for (double& x : m.a) x = r.normal();
    if (std::abs(det(m)) > 0.05 * std::pow(frobenius(m), 3)) return m;
  }
}

inline GroupElem random_elem(Rng& r) { return GroupElem::from_matrix(random_matrix(r)); }

inline Mat3 rotation(const Vec3& axis, double angle) {
  const double n = norm(axis);
  const Vec3 a{axis[0] / n, axis[1] / n, axis[2] / n};
  const Mat3 k{{0, -a[2], a[1], a[2], 0, -a[0], -a[1], a[0], 0}};
  return Mat3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

/// Attracting flag by plain iteration of the point and the dual line, with
/// renormalization at every step.
inline Flag iterate_to_attractor(const Mat3& m, const Flag& start, int steps) {
  const Mat3 d = transpose(adjugate(m));
  Vec3 p = start.p.v, n = start.d.n;
  for (int i = 0; i < steps; ++i) {
    p = m * p;
    n = d * n;
    p = (1.0 / norm(p)) * p;
    n = (1.0 / norm(n)) * n;
  }
  return reproject(p, n);
}

/// Sampled-circle distance from z to the bouquet of x.
inline double sampled_bouquet_distance(const Flag& z, const Flag& x, std::size_t m) {
  double best = 1e9;
  for (const Flag& b : bouquet(x, m).points) best = std::min(best, flag_distance(z, b));
  return best;
}

}  // namespace support
