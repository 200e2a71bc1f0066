#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flagsurge/error.hpp"
#include "flagsurge/group.hpp"
#include "flagsurge/sampling.hpp"
#include "flagsurge/schottky.hpp"

namespace flagsurge {

/// Gluing data of the handlebody exchange: phi = g^-n o kappa o g^n swaps the
/// inner handlebody H1 with the exterior of H2 and preserves the shell between.
struct GluingData {
  GroupElem g;
  std::size_t n = 0;
  ExtElem phi;
  /// Smallest tube (centered like h2) containing the sampled image
  /// phi(X \ Int H2), grown by the fitting slack.
  Tube h1;
  Tube h2;
  /// Least depth of phi(X \ Int H2) inside H2 on the search sample.
  double margin = 0.0;
};

/// g^-n o kappa o g^n as an extended element (matrix transpose(g^n) g^n).
ExtElem gluing_involution(const GroupElem& g, std::size_t n);

/// Exact inner handlebody H1^n = X \ phi^-1(Int H2).
bool in_inner_handlebody(const GluingData& gd, const Flag& x);

/// Open region U = {x : level(x) < level(phi x)} (levels relative to H2);
/// phi exchanges U and the exterior of its closure, and H1 c U c H2.
bool in_glue_region(const GluingData& gd, const Flag& x);

/// Gluing data for a fixed exponent n on m interior and m boundary samples of X \ Int H2.
GluingData gluing_data(const GroupElem& g, const Tube& h2, std::size_t n, std::size_t m,
                       std::uint64_t seed = kDefaultSeed, double fit_slack = 0.01);

/// Least n in [1, n_max] with phi_n(X \ Int H2) strictly inside H2 on an
/// m-point sample. Throws NotLoxodromic, CenterMismatch (x_-(g) differs from
/// the tube center by more than 1e-8), BadTube, or NoExponentFound.
GluingData surgery_exponent(const GroupElem& g, const Tube& h2, std::size_t m, std::size_t n_max,
                            std::uint64_t seed = kDefaultSeed, double fit_slack = 0.01);

struct GluingReport {
  /// Condition k (1..4) passed.
  std::array<bool, 4> passed{};
  /// (1) least depth of phi(X \ Int H2) in H2, (2) largest involution defect,
  /// (3) largest boundary defect, (4) largest shell defect.
  std::array<double, 4> value{};
  double h1_depth = 0.0;       // least depth of the image inside the fitted H1
  double boundary_hausdorff = 0.0;
  double boundary_resolution = 0.0;
  std::size_t shell_samples = 0;
  std::optional<int> failed;  // first failing condition
  Flag witness;

  bool ok() const { return !failed.has_value(); }
  /// Throws ConditionFailed naming the condition and witness.
  void require() const;
};

/// Sample-scale check of the four exchange conditions:
/// (1) H1 c Int H2, (2) phi(H1) = X \ Int H2, (3) phi(dH1) = dH2,
/// (4) phi(H2 \ Int H1) = H2 \ Int H1.
GluingReport verify_gluing(const GluingData& gd, std::size_t m, std::uint64_t seed = kDefaultSeed);

struct CombinedGroup {
  std::vector<GroupElem> gens1;
  /// Images gamma* = (c^-1 phi2) gamma (c^-1 phi2)^-1 of the second group's generators.
  std::vector<GroupElem> gens2_conj;
  GluingData gluing;
  GroupElem conjugator;
  SchottkyConfig cfg1;
  SchottkyConfig cfg2;
  /// c^-1 o phi2 = phi1 o c^-1, an anti-flag morphism.
  ExtElem attach;
};

/// Conjugate c cfg c^-1 of a configuration by an orthogonal c (tubes move
/// rigidly with c). Throws InvalidArgument for a non-orthogonal c.
SchottkyConfig conjugate_config(const SchottkyConfig& cfg, const GroupElem& c);

/// Throws InvalidArgument for non-involutive gluing data, SwapParityError when
/// a conjugated generator is not a flag morphism.
CombinedGroup combine_free_product(const SchottkyConfig& cfg1, const SchottkyConfig& cfg2, const GluingData& gd,
                                   const GroupElem& conjugator);

/// A syllable is a nontrivial reduced word in one factor's generators.
struct Syllable {
  int factor = 1;  // 1 or 2
  Word word;
};

struct ProductWord {
  std::vector<Syllable> syllables;
};

std::string to_string(const ProductWord& w);
GroupElem product_image(const ProductWord& w, const CombinedGroup& cg);
/// Acts letter by letter, rightmost first.
Flag product_act(const ProductWord& w, const CombinedGroup& cg, const Flag& x);
/// Free-product reduction: merges adjacent syllables of one factor, drops trivial ones.
ProductWord reduce_product(const ProductWord& w);
ProductWord inverse_product(const ProductWord& w);
ProductWord concat_product(const ProductWord& a, const ProductWord& b);

/// Alternating words of at most `depth` syllables, each of length <= syllable_len.
std::vector<ProductWord> alternating_words(const CombinedGroup& cg, std::size_t depth, std::size_t syllable_len);

struct TreeReport {
  std::size_t words = 0;
  std::size_t regions = 0;
  std::size_t checks = 0;
  bool ok = true;
  ProductWord w, w_prime;
  int region = 0, region_prime = 0;  // 1: translate of D1', 2: of the attached copy D2*
  Flag witness;

  void require() const;
};

/// The translates w(D1') and w(D2*) over alternating words w must be pairwise
/// disjoint, where D1' = D1 \ closure(U1) and D2* = (c^-1 phi2)(D2 \ closure(U2)).
TreeReport tree_disjointness_check(const CombinedGroup& cg, std::size_t depth, std::size_t m,
                                   std::uint64_t seed = kDefaultSeed, std::size_t syllable_len = 1);

}  // namespace flagsurge
