#include "flagsurge/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "flagsurge/dynamics.hpp"
#include "flagsurge/parallel.hpp"

namespace flagsurge {

namespace {

constexpr double kCenterTol = 1e-8;
constexpr double kInvolutionTol = 1e-9;
constexpr double kBoundaryTol = 1e-9;
constexpr double kMinRadius = 1e-6;
constexpr double kLevelGap = 0.01;

std::vector<Flag> image(const ExtElem& e, const std::vector<Flag>& pts) {
  std::vector<Flag> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = ext_act(e, pts[i]); });
  return out;
}

std::vector<double> depths(const Tube& t, const std::vector<Flag>& pts) {
  std::vector<double> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = tube_depth(t, pts[i]); });
  return out;
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

// Smallest tube about h2.center containing every point, each point being
// covered by the alpha disc or the beta disc, with radii kept below h2's.
Tube fit_inner_tube(const Tube& h2, const std::vector<Flag>& pts, double slack) {
  const std::size_t n = pts.size();
  std::vector<std::pair<double, double>> ab(n);
  for (std::size_t i = 0; i < n; ++i)
    ab[i] = {proj_angle(pts[i].p.v, h2.center.p.v), proj_angle(pts[i].d.n, h2.center.d.n)};
  std::sort(ab.begin(), ab.end());
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = std::max(suffix[k + 1], ab[k].second);

  double best = std::numeric_limits<double>::infinity();
  double ra = 0.0, rb = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = k > 0 ? ab[k - 1].first : 0.0;
    const double b = suffix[k];
    if (a + slack >= h2.r_alpha || b + slack >= h2.r_beta) continue;
    if (a + b < best) {
      best = a + b;
      ra = a;
      rb = b;
    }
  }
  if (!std::isfinite(best)) return Tube{h2.center, 0.999 * h2.r_alpha, 0.999 * h2.r_beta};
  return Tube{h2.center, std::max(ra + slack, kMinRadius), std::max(rb + slack, kMinRadius)};
}

// X \ Int H2 sampled in its interior and on its boundary, where the image
// comes closest to dH2.
SampledSet exterior_sample(const Tube& h2, std::size_t m, std::uint64_t seed) {
  return unite(tube_complement_sample(h2, m, 0.0, seed), tube_boundary_sample(h2, m, seed + 3));
}

void check_target(const GroupElem& g, const Tube& h2) {
  const SpectralData s = classify(g);
  if (!s.loxodromic()) throw Error(ErrorKind::NotLoxodromic, "gluing element is not loxodromic");
  const double off = flag_distance(s.x_minus, h2.center);
  if (off > kCenterTol) {
    std::ostringstream os;
    os << "repelling flag " << to_string(s.x_minus) << " is " << off << " from the tube center";
    throw Error(ErrorKind::CenterMismatch, os.str());
  }
  for (const Flag& b : bouquet(s.x_minus, 64).points)
    if (!tube_contains(h2, b)) throw Error(ErrorKind::BadTube, "tube does not contain the repelling bouquet");
}

GluingData assemble(const GroupElem& g, const Tube& h2, std::size_t n, const std::vector<Flag>& images,
                    double margin, double fit_slack) {
  GluingData gd;
  gd.g = g;
  gd.n = n;
  gd.phi = gluing_involution(g, n);
  gd.h2 = h2;
  gd.margin = margin;
  const double slack = margin > 0.0 ? std::min(fit_slack, 0.5 * margin) : fit_slack;
  gd.h1 = fit_inner_tube(h2, images, slack);
  return gd;
}

}  // namespace

ExtElem gluing_involution(const GroupElem& g, std::size_t n) {
  return antiflag_involution(power(g, static_cast<std::int64_t>(n)));
}

bool in_inner_handlebody(const GluingData& gd, const Flag& x) { return !tube_contains(gd.h2, ext_act(gd.phi, x)); }

bool in_glue_region(const GluingData& gd, const Flag& x) {
  return tube_level(gd.h2, x) < tube_level(gd.h2, ext_act(gd.phi, x));
}

GluingData gluing_data(const GroupElem& g, const Tube& h2, std::size_t n, std::size_t m, std::uint64_t seed,
                       double fit_slack) {
  const SampledSet s = exterior_sample(h2, m, seed);
  const std::vector<Flag> y = image(gluing_involution(g, n), s.points);
  const std::vector<double> d = depths(h2, y);
  const double margin = d.empty() ? 0.0 : d[argmin(d)];
  return assemble(g, h2, n, y, margin, fit_slack);
}

GluingData surgery_exponent(const GroupElem& g, const Tube& h2, std::size_t m, std::size_t n_max, std::uint64_t seed,
                            double fit_slack) {
  check_target(g, h2);
  const SampledSet s = exterior_sample(h2, m, seed);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::vector<Flag> y = image(gluing_involution(g, n), s.points);
    const std::vector<double> d = depths(h2, y);
    const double margin = d[argmin(d)];
    if (margin > 0.0) return assemble(g, h2, n, y, margin, fit_slack);
  }
  throw Error(ErrorKind::NoExponentFound, "no exponent up to " + std::to_string(n_max) + " maps the exterior inside");
}

void GluingReport::require() const {
  if (ok()) return;
  const int k = *failed;
  std::ostringstream os;
  os << "condition " << k << " fails (value " << value[static_cast<std::size_t>(k - 1)] << ") at "
     << to_string(witness);
  throw Error(ErrorKind::ConditionFailed, os.str());
}

GluingReport verify_gluing(const GluingData& gd, std::size_t m, std::uint64_t seed) {
  GluingReport r;
  const ExtElem& phi = gd.phi;
  auto fail = [&](int k, const Flag& w) {
    if (!r.failed) {
      r.failed = k;
      r.witness = w;
    }
  };

  // (1) the sampled H1 = phi(X \ Int H2) lies inside Int H2 and the fitted tube.
  const SampledSet ext = exterior_sample(gd.h2, m, seed);
  const std::vector<Flag> y = image(phi, ext.points);
  const std::vector<double> d2 = depths(gd.h2, y);
  const std::vector<double> d1 = depths(gd.h1, y);
  const std::size_t i2 = argmin(d2), i1 = argmin(d1);
  r.value[0] = d2[i2];
  r.h1_depth = d1[i1];
  const bool nested = gd.h1.r_alpha < gd.h2.r_alpha && gd.h1.r_beta < gd.h2.r_beta;
  r.passed[0] = r.value[0] > 0.0 && r.h1_depth > 0.0 && nested;
  if (!r.passed[0]) fail(1, r.value[0] <= 0.0 ? ext.points[i2] : ext.points[i1]);

  // (2) phi(H1) lands in the closure of X \ Int H2 and recovers the exterior sample.
  std::vector<double> defect(y.size());
  parallel_for(y.size(), [&](std::size_t i) {
    const Flag back = ext_act(phi, y[i]);
    defect[i] = std::max(flag_distance(back, ext.points[i]), tube_depth(gd.h2, back));
  });
  const std::size_t j2 = y.empty() ? 0 : static_cast<std::size_t>(std::max_element(defect.begin(), defect.end()) -
                                                                   defect.begin());
  r.value[1] = y.empty() ? 0.0 : defect[j2];
  r.passed[1] = r.value[1] <= kInvolutionTol;
  if (!r.passed[1]) fail(2, ext.points[j2]);

  // (3) boundaries correspond: phi(dH2) is the boundary of H1 and maps back onto dH2.
  const SampledSet bd = tube_boundary_sample(gd.h2, m, seed + 7);
  const SampledSet bd1{image(phi, bd.points), std::nullopt};
  const SampledSet back{image(phi, bd1.points), std::nullopt};
  double worst = 0.0;
  std::size_t jw = 0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    const double e = std::abs(tube_depth(gd.h2, back.points[i]));
    const double inside = tube_depth(gd.h2, bd1.points[i]) > 0.0 ? 0.0 : 1.0;
    if (std::max(e, inside) > worst) {
      worst = std::max(e, inside);
      jw = i;
    }
  }
  r.value[2] = worst;
  r.boundary_resolution = bd.resolution.value_or(0.0);
  r.boundary_hausdorff = bd.empty() ? 0.0 : hausdorff(back, bd);
  r.passed[2] = worst <= kBoundaryTol && r.boundary_hausdorff <= r.boundary_resolution;
  if (!r.passed[2] && !bd.empty()) fail(3, bd.points[jw]);

  // (4) the shell H2 \ Int H1 is preserved.
  const SampledSet in = tube_interior_sample(gd.h2, m, 0.0, seed + 11);
  const std::vector<Flag> z = image(phi, in.points);
  std::vector<double> shell_defect(z.size(), -1.0);
  parallel_for(z.size(), [&](std::size_t i) {
    if (!tube_contains(gd.h2, z[i])) return;  // x in H1
    const Flag zz = ext_act(phi, z[i]);
    shell_defect[i] = std::max(flag_distance(zz, in.points[i]), -tube_depth(gd.h2, zz));
  });
  double sw = 0.0;
  std::size_t js = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (shell_defect[i] < 0.0) continue;
    ++r.shell_samples;
    if (shell_defect[i] > sw) {
      sw = shell_defect[i];
      js = i;
    }
  }
  r.value[3] = sw;
  r.passed[3] = r.shell_samples > 0 && sw <= kInvolutionTol;
  if (!r.passed[3] && !in.empty()) fail(4, in.points[js]);
  return r;
}

SchottkyConfig conjugate_config(const SchottkyConfig& cfg, const GroupElem& c) {
  const Mat3& m = c.matrix();
  const Mat3 mmt = m * transpose(m);
  const double s = trace(mmt) / 3.0;
  if (max_abs_diff(mmt, s * Mat3::identity()) > 1e-9 * s)
    throw Error(ErrorKind::InvalidArgument, "conjugator is not orthogonal");
  const GroupElem c_inv = c.inverse();
  SchottkyConfig out = cfg;
  for (GroupElem& g : out.generators) g = c * g * c_inv;
  for (TubePair& p : out.pairs) {
    p.minus.center = act(c, p.minus.center);
    p.plus.center = act(c, p.plus.center);
  }
  return out;
}

CombinedGroup combine_free_product(const SchottkyConfig& cfg1, const SchottkyConfig& cfg2, const GluingData& gd,
                                   const GroupElem& conjugator) {
  if (!gd.phi.swap) throw Error(ErrorKind::InvalidArgument, "gluing map is not an anti-flag morphism");
  if (!is_identity(ext_compose(gd.phi, gd.phi), 1e-10))
    throw Error(ErrorKind::InvalidArgument, "gluing map is not involutive");
  const ExtElem c{conjugator, false};
  const ExtElem c_inv{conjugator.inverse(), false};
  const ExtElem phi2 = ext_compose(ext_compose(c, gd.phi), c_inv);
  const ExtElem attach = ext_compose(c_inv, phi2);
  const ExtElem attach_inv = ext_inverse(attach);

  CombinedGroup cg{cfg1.generators, {}, gd, conjugator, cfg1, cfg2, attach};
  for (std::size_t i = 0; i < cfg2.generators.size(); ++i) {
    const ExtElem star = ext_compose(ext_compose(attach, ExtElem{cfg2.generators[i], false}), attach_inv);
    if (star.swap)
      throw Error(ErrorKind::SwapParityError, "conjugate of generator " + std::to_string(i + 1) + " exchanges foliations");
    cg.gens2_conj.push_back(star.g);
  }
  return cg;
}

std::string to_string(const ProductWord& w) {
  if (w.syllables.empty()) return "e";
  std::string out;
  for (const Syllable& s : w.syllables) {
    for (const Letter& l : s.word.letters) {
      if (!out.empty()) out += ' ';
      out += (s.factor == 1 ? "g" : "h") + std::to_string(l.index + 1);
      if (l.sign < 0) out += "^-1";
    }
  }
  return out;
}

GroupElem product_image(const ProductWord& w, const CombinedGroup& cg) {
  GroupElem out = GroupElem::identity();
  for (const Syllable& s : w.syllables) out = out * word_image(s.word, s.factor == 1 ? cg.gens1 : cg.gens2_conj);
  return out;
}

Flag product_act(const ProductWord& w, const CombinedGroup& cg, const Flag& x) {
  Flag y = x;
  for (auto s = w.syllables.rbegin(); s != w.syllables.rend(); ++s) {
    const std::vector<GroupElem>& gens = s->factor == 1 ? cg.gens1 : cg.gens2_conj;
    for (auto l = s->word.letters.rbegin(); l != s->word.letters.rend(); ++l) {
      if (l->index >= gens.size()) throw Error(ErrorKind::IndexOutOfRange, "letter index out of range");
      y = act(l->sign > 0 ? gens[l->index] : gens[l->index].inverse(), y);
    }
  }
  return y;
}

ProductWord reduce_product(const ProductWord& w) {
  ProductWord out;
  for (const Syllable& s : w.syllables) {
    Word cur = reduce_word(s.word);
    if (!out.syllables.empty() && out.syllables.back().factor == s.factor) {
      cur = concat(out.syllables.back().word, cur);
      out.syllables.pop_back();
    }
    if (cur.empty()) continue;
    out.syllables.push_back(Syllable{s.factor, cur});
  }
  return out;
}

ProductWord inverse_product(const ProductWord& w) {
  ProductWord out;
  for (auto s = w.syllables.rbegin(); s != w.syllables.rend(); ++s)
    out.syllables.push_back(Syllable{s->factor, inverse_word(s->word)});
  return out;
}

ProductWord concat_product(const ProductWord& a, const ProductWord& b) {
  ProductWord out = a;
  out.syllables.insert(out.syllables.end(), b.syllables.begin(), b.syllables.end());
  return reduce_product(out);
}

std::vector<ProductWord> alternating_words(const CombinedGroup& cg, std::size_t depth, std::size_t syllable_len) {
  std::array<std::vector<Word>, 2> syl;
  const std::array<std::size_t, 2> rank{cg.gens1.size(), cg.gens2_conj.size()};
  for (std::size_t f = 0; f < 2; ++f) {
    if (rank[f] == 0) continue;
    for (Word& w : reduced_words(rank[f], syllable_len))
      if (!w.empty()) syl[f].push_back(std::move(w));
  }
  std::vector<ProductWord> out{ProductWord{}};
  std::vector<ProductWord> frontier{ProductWord{}};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<ProductWord> next;
    for (const ProductWord& w : frontier) {
      for (int f = 1; f <= 2; ++f) {
        if (!w.syllables.empty() && w.syllables.back().factor == f) continue;
        for (const Word& s : syl[static_cast<std::size_t>(f - 1)]) {
          ProductWord v = w;
          v.syllables.push_back(Syllable{f, s});
          next.push_back(std::move(v));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

void TreeReport::require() const {
  if (ok) return;
  std::ostringstream os;
  os << "translates by " << to_string(w) << " (region " << region << ") and " << to_string(w_prime) << " (region "
     << region_prime << ") meet at " << to_string(witness);
  throw Error(ErrorKind::DisjointnessViolation, os.str());
}

TreeReport tree_disjointness_check(const CombinedGroup& cg, std::size_t depth, std::size_t m, std::uint64_t seed,
                                   std::size_t syllable_len) {
  const GluingData& gd = cg.gluing;
  const ExtElem& phi = gd.phi;
  const ExtElem attach_inv = ext_inverse(cg.attach);
  const bool two = !cg.gens2_conj.empty();

  auto clearance = [](const SchottkyConfig& cfg, const Flag& x) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Tube& t : cfg.tubes()) worst = std::min(worst, -tube_depth(t, x));
    return worst;
  };
  // level gap > 0 means x lies outside the closure of U1.
  auto gap = [&](const Flag& x) { return tube_level(gd.h2, x) - tube_level(gd.h2, ext_act(phi, x)); };

  auto in_region1 = [&](const Flag& x) { return in_tube_complement(cg.cfg1, x) && gap(x) > 0.0; };
  auto in_region2 = [&](const Flag& x) {
    const Flag y = ext_act(attach_inv, x);
    return in_tube_complement(cg.cfg2, y) && gap(ext_act(ExtElem{cg.conjugator.inverse(), false}, y)) > 0.0;
  };

  std::vector<SampledSet> samples;
  samples.push_back(sample_where(m, seed, [&](const Flag& x) {
    return clearance(cg.cfg1, x) >= cg.cfg1.margin && gap(x) >= kLevelGap;
  }));
  if (two) {
    const GroupElem c_inv = cg.conjugator.inverse();
    SampledSet d2 = sample_where(m, seed + 1, [&](const Flag& y) {
      return clearance(cg.cfg2, y) >= cg.cfg2.margin && gap(act(c_inv, y)) >= kLevelGap;
    });
    samples.push_back(SampledSet{image(cg.attach, d2.points), std::nullopt});
  }

  const std::vector<ProductWord> words = alternating_words(cg, depth, syllable_len);

  struct Piece {
    std::size_t word;
    int region;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (int r = 1; r <= (two ? 2 : 1); ++r) pieces.push_back({i, r});

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < pieces.size(); ++a)
    for (std::size_t b = 0; b < pieces.size(); ++b)
      if (a != b) pairs.emplace_back(a, b);

  // Per pair, the first sample index whose translate lands in the other piece.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hit(pairs.size(), kNone);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const Piece& a = pieces[pairs[k].first];
    const Piece& b = pieces[pairs[k].second];
    const ProductWord v = concat_product(inverse_product(words[b.word]), words[a.word]);
    const SampledSet& src = samples[static_cast<std::size_t>(a.region - 1)];
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Flag x = product_act(v, cg, src.points[i]);
      if (b.region == 1 ? in_region1(x) : in_region2(x)) {
        hit[k] = i;
        return;
      }
    }
  });

  TreeReport rep;
  rep.words = words.size();
  rep.regions = samples.size();
  rep.checks = pairs.size();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (hit[k] == kNone) continue;
    const Piece& a = pieces[pairs[k].first];
    const Piece& b = pieces[pairs[k].second];
    rep.ok = false;
    rep.w = words[a.word];
    rep.w_prime = words[b.word];
    rep.region = a.region;
    rep.region_prime = b.region;
    rep.witness = product_act(words[a.word], cg, samples[static_cast<std::size_t>(a.region - 1)].points[hit[k]]);
    break;
  }
  return rep;
}

}  // namespace flagsurge
