#include "flagsurge/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "flagsurge/error.hpp"

namespace flagsurge {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kResidualTol = 1e-6;

}  // namespace

Mat3 normalize_projective(const Mat3& m) {
  const double f = frobenius(m);
  if (!(f > 0.0) || !std::isfinite(f)) throw Error(ErrorKind::Singular, "zero or non-finite matrix");
  Mat3 r = (1.0 / f) * m;
  for (double x : r.a) {
    if (std::abs(x) > 1e-9) {
      if (x < 0.0) r = -1.0 * r;
      break;
    }
  }
  return r;
}

GroupElem::GroupElem(const Mat3& m, const Mat3& dual, int)
    : m_(normalize_projective(m)), dual_(normalize_projective(dual)) {}

GroupElem GroupElem::from_matrix(const Mat3& m) {
  const Mat3 n = normalize_projective(m);
  if (std::abs(det(n)) <= kSingularTol)
    throw Error(ErrorKind::Singular, "normalized determinant " + std::to_string(det(n)));
  return GroupElem(n, transpose(adjugate(n)), 0);
}

GroupElem GroupElem::identity() { return GroupElem(Mat3::identity(), Mat3::identity(), 0); }

GroupElem GroupElem::from_pair(const Mat3& m, const Mat3& inverse_transpose) {
  return GroupElem(m, inverse_transpose, 0);
}

GroupElem GroupElem::inverse() const { return GroupElem(transpose(dual_), transpose(m_), 0); }

GroupElem operator*(const GroupElem& a, const GroupElem& b) {
  return GroupElem(a.m_ * b.m_, a.dual_ * b.dual_, 0);
}

double pgl_distance(const GroupElem& a, const GroupElem& b) {
  const Mat3 neg = -1.0 * b.matrix();
  return std::min(max_abs_diff(a.matrix(), b.matrix()), max_abs_diff(a.matrix(), neg));
}

bool is_identity(const GroupElem& g, double tol) { return pgl_distance(g, GroupElem::identity()) <= tol; }

GroupElem theta(const GroupElem& g) { return GroupElem::from_pair(g.dual(), g.matrix()); }

GroupElem power(const GroupElem& g, std::int64_t n) {
  GroupElem base = n < 0 ? g.inverse() : g;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  GroupElem acc = GroupElem::identity();
  while (e > 0) {
    if (e & 1U) acc = acc * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return acc;
}

Flag act(const GroupElem& g, const Flag& x) { return reproject(g.matrix() * x.p.v, g.dual() * x.d.n); }

Flag kappa(const Flag& x) { return Flag{ProjPoint{x.d.n}, ProjLine{x.p.v}}; }

ExtElem kappa_elem() { return ExtElem{GroupElem::identity(), true}; }

ExtElem ext_compose(const ExtElem& a, const ExtElem& b) {
  // kappa^sa g kappa^sb h = kappa^(sa+sb) Theta^sb(g) h, using kappa g = Theta(g) kappa.
  const GroupElem left = b.swap ? theta(a.g) : a.g;
  return ExtElem{left * b.g, a.swap != b.swap};
}

ExtElem ext_inverse(const ExtElem& a) {
  // (kappa g)^-1 = g^-1 kappa = kappa Theta(g^-1).
  if (!a.swap) return ExtElem{a.g.inverse(), false};
  return ExtElem{theta(a.g.inverse()), true};
}

Flag ext_act(const ExtElem& a, const Flag& x) {
  const Flag y = act(a.g, x);
  return a.swap ? kappa(y) : y;
}

bool is_identity(const ExtElem& a, double tol) { return !a.swap && is_identity(a.g, tol); }

ExtElem antiflag_involution(const GroupElem& g) {
  return ext_compose(ext_compose(ExtElem{g.inverse(), false}, kappa_elem()), ExtElem{g, false});
}

namespace {

struct Cubic {
  double c2, c1, c0;  // lambda^3 + c2 lambda^2 + c1 lambda + c0
  double operator()(double x) const { return ((x + c2) * x + c1) * x + c0; }
  double slope(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }
};

double polish(const Cubic& p, double x) {
  for (int i = 0; i < 3; ++i) {
    const double d = p.slope(x);
    if (d == 0.0) break;
    const double step = p(x) / d;
    if (!std::isfinite(step)) break;
    x -= step;
  }
  return x;
}

// Three real roots, or false when the discriminant admits a complex pair or
// a triple root.
bool real_roots(const Cubic& p, std::array<double, 3>& roots) {
  const double q = (3.0 * p.c1 - p.c2 * p.c2) / 9.0;
  const double r = (9.0 * p.c2 * p.c1 - 27.0 * p.c0 - 2.0 * p.c2 * p.c2 * p.c2) / 54.0;
  if (q >= 0.0) return false;
  const double disc = q * q * q + r * r;
  if (disc > 0.0) return false;
  const double th = std::acos(std::clamp(r / std::sqrt(-q * q * q), -1.0, 1.0));
  const double s = 2.0 * std::sqrt(-q);
  for (int k = 0; k < 3; ++k)
    roots[k] = polish(p, s * std::cos((th + 2.0 * std::numbers::pi * k) / 3.0) - p.c2 / 3.0);
  return true;
}

Vec3 solve(const Mat3& a, const Vec3& b) {
  const double d = det(a);
  if (d == 0.0 || !std::isfinite(d)) return b;
  return (1.0 / d) * (adjugate(a) * b);
}

Vec3 eigenvector(const Mat3& m, double lambda) {
  const Mat3 shifted = m - lambda * Mat3::identity();
  const Vec3 r0 = shifted.row(0), r1 = shifted.row(1), r2 = shifted.row(2);
  Vec3 best = cross(r0, r1);
  for (const Vec3& c : {cross(r1, r2), cross(r2, r0)})
    if (norm(c) > norm(best)) best = c;
  if (norm(best) == 0.0) best = {1.0, 0.0, 0.0};
  Vec3 v = (1.0 / norm(best)) * best;
  // Inverse iteration with a slightly perturbed shift.
  const double delta = 1e-10 * std::max(std::abs(lambda), 1e-300);
  const Mat3 near = m - (lambda + delta) * Mat3::identity();
  for (int i = 0; i < 2; ++i) {
    const Vec3 w = solve(near, v);
    const double len = norm(w);
    if (!(len > 0.0) || !std::isfinite(len)) break;
    v = (1.0 / len) * w;
  }
  return v;
}

}  // namespace

SpectralData classify(const GroupElem& g) {
  const Mat3& m = g.matrix();
  const double c1 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                    m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const Cubic poly{-trace(m), c1, -det(m)};
  SpectralData out;
  std::array<double, 3> roots{};
  if (!real_roots(poly, roots)) return out;
  std::sort(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  out.eigenvalues = roots;
  const double a = std::abs(roots[0]), b = std::abs(roots[1]), c = std::abs(roots[2]);
  if (!(c > 0.0) || a - b < kLoxodromyGap * a || b - c < kLoxodromyGap * b) return out;

  std::array<Vec3, 3> vecs;
  for (int i = 0; i < 3; ++i) {
    vecs[i] = eigenvector(m, roots[i]);
    const double residual = norm(m * vecs[i] - roots[i] * vecs[i]);
    if (residual > kResidualTol)
      throw Error(ErrorKind::IllConditioned, "eigenvector residual " + std::to_string(residual));
  }
  out.kind = SpectralKind::loxodromic;
  out.p_plus = ProjPoint{canonical(vecs[0])};
  out.p_pm = ProjPoint{canonical(vecs[1])};
  out.p_minus = ProjPoint{canonical(vecs[2])};
  out.x_plus = reproject(vecs[0], cross(vecs[0], vecs[1]));
  out.x_minus = reproject(vecs[2], cross(vecs[2], vecs[1]));
  return out;
}

bool is_positive_loxodromic(const SpectralData& s) {
  if (!s.loxodromic()) return false;
  const auto& e = s.eigenvalues;
  return (e[0] > 0.0 && e[1] > 0.0 && e[2] > 0.0) || (e[0] < 0.0 && e[1] < 0.0 && e[2] < 0.0);
}

GroupElem one_param_power(const GroupElem& g, double t) { return one_param_power(g, classify(g), t); }

GroupElem one_param_power(const GroupElem& g, const SpectralData& s, double t) {
  (void)g;
  if (!is_positive_loxodromic(s))
    throw Error(ErrorKind::NotPositiveLoxodromic, "real powers need three same-sign real eigenvalues");
  const Mat3 v = Mat3::from_columns(s.p_plus.v, s.p_pm.v, s.p_minus.v);
  const Mat3 vinv = transpose(adjugate(v));  // inverse up to the factor det(v)
  const Mat3 vinv_rows = transpose(vinv);    // adj(v)
  std::array<double, 3> logs{};
  for (int i = 0; i < 3; ++i) logs[i] = t * std::log(std::abs(s.eigenvalues[i]));
  const double top = *std::max_element(logs.begin(), logs.end());
  const double bottom = *std::min_element(logs.begin(), logs.end());
  const Mat3 up = Mat3::diag(std::exp(logs[0] - top), std::exp(logs[1] - top), std::exp(logs[2] - top));
  const Mat3 down =
      Mat3::diag(std::exp(bottom - logs[0]), std::exp(bottom - logs[1]), std::exp(bottom - logs[2]));
  // g^t = V D V^-1 and its inverse transpose V^-T D^-1 V^T.
  return GroupElem::from_pair(v * up * vinv_rows, vinv * down * transpose(v));
}

}  // namespace flagsurge
