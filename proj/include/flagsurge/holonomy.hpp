#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "flagsurge/dynamics.hpp"
#include "flagsurge/group.hpp"
#include "flagsurge/sampling.hpp"

namespace flagsurge {

/// Holonomy of the cyclic quotient: (lambda, n) -> g^n.
GroupElem cyclic_holonomy(std::int64_t n, const GroupElem& g);

enum class SurfaceGen { a1, b1, a2, b2 };

struct SurfaceLetter {
  SurfaceGen gen = SurfaceGen::a1;
  int sign = 1;

  friend bool operator==(const SurfaceLetter&, const SurfaceLetter&) = default;
};

/// Freely reduced word in the standard genus-two generators.
struct SurfaceWord {
  std::vector<SurfaceLetter> letters;

  /// Reduces on construction.
  static SurfaceWord from(std::vector<SurfaceLetter> letters);
  /// Tokens "a1", "b2^-1", ... separated by spaces or commas. Throws InvalidArgument.
  static SurfaceWord parse(const std::string& text);

  friend bool operator==(const SurfaceWord&, const SurfaceWord&) = default;
};

SurfaceWord operator*(const SurfaceWord& a, const SurfaceWord& b);
SurfaceWord inverse(const SurfaceWord& w);
std::string to_string(const SurfaceWord& w);
/// [a1,b1][a2,b2]
SurfaceWord surface_relator();

/// a_i -> g^{s_i}, b_i -> g^{t_i}, central generator -> g.
struct DeformedRep {
  GroupElem base;
  SpectralData spectrum;
  std::array<double, 4> eps{};  // s1, s2, t1, t2

  /// Throws NotPositiveLoxodromic.
  static DeformedRep make(const GroupElem& base, const std::array<double, 4>& eps);
  double weight(SurfaceGen g) const;
};

/// Real exponent sum_i sign_i weight_i + n, accumulated with compensation.
double deformed_exponent(const DeformedRep& rep, const SurfaceWord& w, std::int64_t n);
GroupElem eval_deformed(const DeformedRep& rep, const SurfaceWord& w, std::int64_t n);

struct DensityResult {
  bool dense_at_scale = false;
  double min_positive = 1.0;
  /// Coefficients (j, k, l, m, n) realizing min_positive.
  std::array<std::int64_t, 5> coefficients{0, 0, 0, 0, 1};
};

/// Least positive |j s1 + k s2 + l t1 + m t2 + n| over integer coefficients
/// bounded by N; values below 1e-12 count as exact relations and are skipped.
DensityResult density_check(const std::array<double, 4>& eps, std::size_t N, double tol);

/// Distinct exponents j s1 + k s2 + l t1 + m t2 + n with coefficients bounded by N.
std::vector<double> exponent_set(const std::array<double, 4>& eps, std::size_t N);

/// Traces of the determinant-one representatives of g^x over exponent_set,
/// deduplicated at 1e-9 and sorted.
std::vector<double> trace_invariants(const DeformedRep& rep, std::size_t N);

/// Image in Z/2 of the covering given by a_i -> 0, b_i -> 1.
int covering_parity(const SurfaceWord& w);

enum class Verdict { surjective_at_scale, not_established };

std::string to_string(Verdict v);

struct ObstructionReport {
  Verdict verdict = Verdict::not_established;
  CoverageReport coverage;
  double bouquet_probe_gap = 0.0;  // largest distance from a bouquet sample to the probe
};

/// Checks that the probe sees both bouquets of g, then that every target off
/// B+(g) is pulled into P by some g^-n, n <= n_max. Throws MissingBouquetSamples.
ObstructionReport surjectivity_obstruction(const GroupElem& hol_lox, const SampledSet& image_probe, const Tube& p,
                                           std::size_t n_max, std::size_t targets = 1000,
                                           std::uint64_t seed = kDefaultSeed, double margin = 0.1);

}  // namespace flagsurge
