#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flagsurge/flag.hpp"
#include "flagsurge/group.hpp"
#include "flagsurge/sampling.hpp"

namespace flagsurge {

struct TubePair {
  Tube minus;
  Tube plus;
};

/// Loxodromic generators g_i with handlebodies (H-_i, H+_i) such that g_i
/// maps the exterior of H-_i into H+_i.
struct SchottkyConfig {
  std::vector<GroupElem> generators;
  std::vector<TubePair> pairs;
  double margin = 0.05;

  /// Throws InvalidArgument when the lengths differ or margin <= 0.
  static SchottkyConfig make(std::vector<GroupElem> generators, std::vector<TubePair> pairs, double margin);

  std::size_t rank() const { return generators.size(); }
  std::vector<Tube> tubes() const;
};

struct Letter {
  std::size_t index = 0;
  int sign = 1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word in the generators.
struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const Word&, const Word&) = default;
};

Word reduce_word(const Word& w);
Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
std::string to_string(const Word& w);

/// Product of the letters from left to right. Throws IndexOutOfRange.
GroupElem word_image(const Word& w, const std::vector<GroupElem>& generators);
inline GroupElem word_image(const Word& w, const SchottkyConfig& cfg) { return word_image(w, cfg.generators); }

/// Every reduced word of length <= max_len over `rank` generators, by
/// increasing length, in lexicographic letter order; starts with the empty word.
std::vector<Word> reduced_words(std::size_t rank, std::size_t max_len);

/// Worst margins observed while certifying.
struct PingPongCertificate {
  double disjointness_clearance = 0.0;  // least exterior clearance between distinct tubes
  double forward_depth = 0.0;           // least depth of g_i(X \ H-_i) inside H+_i
  double backward_depth = 0.0;          // least depth of g_i^-1(X \ H+_i) inside H-_i
  std::size_t samples = 0;
  std::uint64_t fingerprint = 0;

  double worst_margin() const;
};

struct PingPongViolation {
  enum class Stage { disjointness, forward, backward };
  Stage stage = Stage::disjointness;
  std::size_t first = 0;   // tube index (disjointness) or generator index
  std::size_t second = 0;  // other tube index for disjointness
  Flag witness;
  double value = 0.0;

  std::string describe() const;
};

using PingPongOutcome = std::variant<PingPongCertificate, PingPongViolation>;

inline bool certified(const PingPongOutcome& o) { return std::holds_alternative<PingPongCertificate>(o); }

std::uint64_t fingerprint(const SchottkyConfig& cfg);

/// Ping-pong on m-point samples: (a) the 2d tubes are pairwise disjoint with
/// clearance >= margin; (b) g_i sends the exterior of H-_i (boundary included)
/// to depth >= margin in H+_i, and g_i^-1 does the same from H+_i to H-_i.
/// Throws NotLoxodromic.
PingPongOutcome certify_ping_pong(const SchottkyConfig& cfg, std::size_t m, std::uint64_t seed = kDefaultSeed);

/// Outside every tube (exterior clearance > 0).
bool in_tube_complement(const SchottkyConfig& cfg, const Flag& x);

/// True when x lies in the exact fundamental domain
/// X \ U_i (Int H-_i  u  g_i(X \ Int H-_i)), which contains the complement of
/// all tubes.
bool in_fundamental_domain(const SchottkyConfig& cfg, const Flag& x);

struct Reduction {
  /// Letters applied, so that word_image(word) maps the input to `representative`.
  Word word;
  Flag representative;
  /// Sigma x R coordinate of the input for rank one with positive spectrum.
  std::optional<double> flow_time;
};

/// Greedy ping-pong reduction into the fundamental domain; throws
/// NoTermination (with the partial word in the message) after n_max moves.
Reduction fundamental_domain_reduce(const Flag& z, const SchottkyConfig& cfg, std::size_t n_max);

/// Time t with g^-t(z) on the boundary of h_minus: crossing of the flow line
/// located by integer stepping from 0 and bisection.
double flow_time(const GroupElem& g, const Tube& h_minus, const Flag& z);

/// Orbit of the generators' attracting and repelling bouquets under reduced
/// words of length <= depth, farthest-point subsampled to at most m points.
/// Throws CertificateRequired unless `outcome` certifies this configuration.
SampledSet limit_set(const SchottkyConfig& cfg, const PingPongOutcome& outcome, std::size_t depth, std::size_t m,
                     std::size_t bouquet_m = 32);

struct FreenessReport {
  std::size_t words = 0;     // reduced words of length <= L
  std::size_t elements = 0;  // distinct nontrivial w^-1 u checked
  std::size_t samples = 0;
  bool ok = true;
  Word u, w;
  Flag witness;
};

/// Translates u(D), w(D) of the tube complement D by distinct reduced words of
/// length <= max_len must be disjoint on an m-point sample of D.
FreenessReport freeness_check(const SchottkyConfig& cfg, std::size_t max_len, std::size_t m,
                              std::uint64_t seed = kDefaultSeed);

}  // namespace flagsurge
