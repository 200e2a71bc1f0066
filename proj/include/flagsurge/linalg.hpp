#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace flagsurge {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Vec3 unit(std::size_t i) {
  Vec3 e{0.0, 0.0, 0.0};
  e[i] = 1.0;
  return e;
}

/// Projective angle between the lines spanned by u and v, in [0, pi/2].
/// atan2 form of arccos(|<u,v>|/(|u||v|)), accurate for nearly parallel inputs.
inline double proj_angle(const Vec3& u, const Vec3& v) {
  return std::atan2(norm(cross(u, v)), std::abs(dot(u, v)));
}

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

  static Mat3 identity() { return diag(1.0, 1.0, 1.0); }
  static Mat3 diag(double x, double y, double z) { return Mat3{{x, 0, 0, 0, y, 0, 0, 0, z}}; }
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3{{c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]}};
  }

  Vec3 column(std::size_t j) const { return {a[j], a[3 + j], a[6 + j]}; }
  Vec3 row(std::size_t i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
};

inline Mat3 operator*(const Mat3& x, const Mat3& y) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
  return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2], m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
          m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

inline Mat3 operator*(double s, Mat3 m) {
  for (double& x : m.a) x *= s;
  return m;
}

inline Mat3 operator+(Mat3 x, const Mat3& y) {
  for (std::size_t i = 0; i < 9; ++i) x.a[i] += y.a[i];
  return x;
}

inline Mat3 operator-(Mat3 x, const Mat3& y) {
  for (std::size_t i = 0; i < 9; ++i) x.a[i] -= y.a[i];
  return x;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t(i, j) = m(j, i);
  return t;
}

inline double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

inline double det(const Mat3& m) { return dot(m.row(0), cross(m.row(1), m.row(2))); }

inline double frobenius(const Mat3& m) {
  double s = 0.0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

/// Transposed cofactor matrix; adj(m) * m = det(m) * I.
inline Mat3 adjugate(const Mat3& m) {
  const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
  return Mat3::from_columns(cross(r1, r2), cross(r2, r0), cross(r0, r1));
}

inline double max_abs_diff(const Mat3& x, const Mat3& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

}  // namespace flagsurge
