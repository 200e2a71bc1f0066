#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flagsurge/linalg.hpp"

namespace flagsurge {

/// Canonical representative of a line through the origin: unit length, first
/// coordinate with |v_i| > 1e-9 positive.
Vec3 canonical(const Vec3& v);

/// Point of RP^2 in homogeneous coordinates.
struct ProjPoint {
  Vec3 v{1.0, 0.0, 0.0};

  /// Throws ZeroVector for a numerically zero input.
  static ProjPoint from(const Vec3& v);
};

/// Line of RP^2 given by its normal covector.
struct ProjLine {
  Vec3 n{0.0, 0.0, 1.0};

  static ProjLine from(const Vec3& n);
};

/// Pointed projective line (p, D) with p on D.
struct Flag {
  ProjPoint p;
  ProjLine d;
};

inline constexpr double kIncidenceTol = 1e-9;

/// Builds a canonical flag from a point and a line normal.
/// Throws ZeroVector or NonIncident.
Flag make_flag(const Vec3& p, const Vec3& n);

/// Canonical flag from vectors known to be (nearly) incident; the normal is
/// re-orthogonalized against p when the drift exceeds 1e-12.
Flag reproject(const Vec3& p, const Vec3& n);

double incidence(const Flag& x);

/// Sum-of-angles metric on X.
double flag_distance(const Flag& x, const Flag& y);

bool same_flag(const Flag& x, const Flag& y, double tol = 1e-9);

/// "(px, py, pz | nx, ny, nz)" at full precision.
std::string to_string(const Flag& x);

/// Finite sample of a subset of X. A missing resolution means the sample was
/// transported by a map and no longer has a known covering radius.
struct SampledSet {
  std::vector<Flag> points;
  std::optional<double> resolution;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Lines through x.p, sampled at m equal angular steps starting at x.
SampledSet alpha_circle(const Flag& x, std::size_t m);
/// Points on x.d, sampled at m equal angular steps starting at x.
SampledSet beta_circle(const Flag& x, std::size_t m);
/// Union of both circles (2m points; x appears twice).
SampledSet bouquet(const Flag& x, std::size_t m);

/// Closed-form distance from z to C_alpha(x).
double distance_to_alpha_circle(const Flag& z, const Flag& x);
/// Closed-form distance from z to C_beta(x).
double distance_to_beta_circle(const Flag& z, const Flag& x);
double distance_to_bouquet(const Flag& z, const Flag& x);

/// Fibered handlebody neighbourhood of the bouquet of `center`: all flags whose
/// point is within r_alpha of center.p or whose line is within r_beta of center.d.
struct Tube {
  Flag center;
  double r_alpha = 0.1;
  double r_beta = 0.1;

  /// Throws InvalidTube unless both radii lie in (0, pi/2).
  static Tube make(const Flag& center, double r_alpha, double r_beta);
};

bool tube_contains(const Tube& t, const Flag& x);

/// Signed depth of x inside t: positive inside, zero on the boundary,
/// negative outside (then its magnitude is the clearance).
double tube_depth(const Tube& t, const Flag& x);

/// min(angle_p / r_alpha, angle_d / r_beta); below 1 exactly inside the tube.
double tube_level(const Tube& t, const Flag& x);

/// Exact disjointness test for two open tubes.
bool tubes_disjoint(const Tube& a, const Tube& b);

/// Tube whose radii are shrunk (or grown, for negative delta) by delta.
Tube shrink(const Tube& t, double delta);

}  // namespace flagsurge
