#pragma once

#include <array>
#include <cstdint>

#include "flagsurge/flag.hpp"

namespace flagsurge {

/// Element of PGL(3,R). Both the matrix and its inverse transpose are kept,
/// each scaled to unit Frobenius norm with a deterministic sign, so that
/// products, inverses and the duality twist never invert an ill-conditioned
/// matrix (long powers of loxodromic elements are nearly rank one).
class GroupElem {
 public:
  GroupElem() : GroupElem(identity()) {}

  /// Throws Singular when the normalized determinant is at most 1e-12.
  static GroupElem from_matrix(const Mat3& m);
  static GroupElem from_rows(const std::array<double, 9>& rows) { return from_matrix(Mat3{rows}); }
  static GroupElem identity();
  static GroupElem diag(double a, double b, double c) { return from_matrix(Mat3::diag(a, b, c)); }

  /// Unchecked construction from a matrix and its inverse transpose (any scale).
  static GroupElem from_pair(const Mat3& m, const Mat3& inverse_transpose);

  const Mat3& matrix() const { return m_; }
  /// Normalized inverse transpose.
  const Mat3& dual() const { return dual_; }

  GroupElem inverse() const;

  friend GroupElem operator*(const GroupElem& a, const GroupElem& b);

 private:
  GroupElem(const Mat3& m, const Mat3& dual, int);
  Mat3 m_;
  Mat3 dual_;
};

/// Unit-Frobenius representative with the first entry above 1e-9 in
/// magnitude made positive.
Mat3 normalize_projective(const Mat3& m);

/// Distance between projective classes of normalized matrices, insensitive to
/// the sign of the representative.
double pgl_distance(const GroupElem& a, const GroupElem& b);
bool is_identity(const GroupElem& g, double tol = 1e-10);

/// g -> transpose(g)^-1.
GroupElem theta(const GroupElem& g);

/// g^n by repeated squaring with renormalization; negative n uses the inverse.
GroupElem power(const GroupElem& g, std::int64_t n);

/// Point by g, line normal by the inverse transpose of g.
Flag act(const GroupElem& g, const Flag& x);

/// Standard involution (p, D) -> (D^perp, p^perp).
Flag kappa(const Flag& x);

/// Element of the group generated by PGL(3,R) and kappa: kappa^swap o g.
struct ExtElem {
  GroupElem g;
  bool swap = false;
};

ExtElem kappa_elem();
ExtElem ext_compose(const ExtElem& a, const ExtElem& b);
ExtElem ext_inverse(const ExtElem& a);
Flag ext_act(const ExtElem& a, const Flag& x);
bool is_identity(const ExtElem& a, double tol = 1e-10);

/// g^-1 o kappa o g.
ExtElem antiflag_involution(const GroupElem& g);

enum class SpectralKind { loxodromic, non_loxodromic };

struct SpectralData {
  SpectralKind kind = SpectralKind::non_loxodromic;
  /// Real eigenvalues of the normalized representative ordered by decreasing
  /// absolute value (meaningful only when loxodromic).
  std::array<double, 3> eigenvalues{};
  Flag x_plus;
  Flag x_minus;
  ProjPoint p_plus;
  ProjPoint p_pm;
  ProjPoint p_minus;

  bool loxodromic() const { return kind == SpectralKind::loxodromic; }
};

/// Relative gap between consecutive absolute eigenvalues below which the
/// spectrum is reported as non-loxodromic.
inline constexpr double kLoxodromyGap = 1e-9;

/// Eigenvalues from the characteristic cubic (trigonometric Cardano form),
/// Newton-polished; eigenvectors by inverse iteration. Throws IllConditioned
/// when an eigenvector residual exceeds 1e-6.
SpectralData classify(const GroupElem& g);

/// Loxodromic with all three eigenvalues of the same sign.
bool is_positive_loxodromic(const SpectralData& s);

/// g^t on the eigenbasis. Throws NotPositiveLoxodromic.
GroupElem one_param_power(const GroupElem& g, double t);
GroupElem one_param_power(const GroupElem& g, const SpectralData& spectrum, double t);

}  // namespace flagsurge
