#include "flagsurge/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "flagsurge/error.hpp"
#include "flagsurge/parallel.hpp"

namespace flagsurge {

namespace {

constexpr double kExactRelation = 1e-12;
constexpr double kTraceDedup = 1e-9;
constexpr double kBouquetProbeTol = 0.05;

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double circular_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double frac(double x) { return x - std::floor(x); }

struct Best {
  double value = 1.0;
  std::array<std::int64_t, 5> coeff{0, 0, 0, 0, 1};

  // Ties go to the smaller coefficient vector so results do not depend on
  // the enumeration order.
  void offer(double v, const std::array<std::int64_t, 5>& c) {
    if (!(v > kExactRelation)) return;
    if (v < value || (v == value && std::make_pair(weight(c), c) < std::make_pair(weight(coeff), coeff))) {
      value = v;
      coeff = c;
    }
  }

  static std::int64_t weight(const std::array<std::int64_t, 5>& c) {
    std::int64_t w = 0;
    for (auto x : c) w += x < 0 ? -x : x;
    return w;
  }
};

// Exhaustive over (j, k, l, m) with the best admissible n for each.
Best density_direct(const std::array<double, 4>& e, std::int64_t N) {
  const std::size_t side = static_cast<std::size_t>(2 * N + 1);
  std::vector<Best> per_j(side);
  parallel_for(side, [&](std::size_t ij) {
    const std::int64_t j = static_cast<std::int64_t>(ij) - N;
    Best best;
    for (std::int64_t k = -N; k <= N; ++k)
      for (std::int64_t l = -N; l <= N; ++l)
        for (std::int64_t m = -N; m <= N; ++m) {
          const double x = j * e[0] + k * e[1] + l * e[2] + m * e[3];
          const double r = std::clamp(-std::round(x), static_cast<double>(-N), static_cast<double>(N));
          for (double dn = -1.0; dn <= 1.0; dn += 1.0) {
            const double n = r + dn;
            if (n < -N || n > N) continue;
            best.offer(std::abs(x + n), {j, k, l, m, static_cast<std::int64_t>(n)});
          }
        }
    per_j[ij] = best;
  });
  Best best;
  for (const Best& b : per_j) best.offer(b.value, b.coeff);
  return best;
}

// Split as (j s1 + k s2) + (l t1 + m t2) and match fractional parts.
// Valid when the nearest integer to any sum is within [-N, N].
Best density_split(const std::array<double, 4>& e, std::int64_t N) {
  struct Half {
    double x;
    std::int64_t c0, c1;
  };
  std::vector<Half> a, b;
  for (std::int64_t u = -N; u <= N; ++u)
    for (std::int64_t v = -N; v <= N; ++v) {
      a.push_back({u * e[0] + v * e[1], u, v});
      b.push_back({u * e[2] + v * e[3], u, v});
    }
  // One entry per distinct fractional part, the lightest coefficients first.
  std::vector<std::tuple<double, std::int64_t, std::size_t>> order(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    order[i] = {frac(b[i].x), std::abs(b[i].c0) + std::abs(b[i].c1), i};
  std::sort(order.begin(), order.end());
  std::vector<std::pair<double, std::size_t>> fb;
  for (const auto& [f, w, i] : order)
    if (fb.empty() || f != fb.back().first) fb.emplace_back(f, i);

  std::vector<Best> per_a(a.size());
  parallel_for(a.size(), [&](std::size_t ia) {
    Best best;
    const double target = frac(-a[ia].x);
    auto consider = [&](std::size_t pos) {
      const Half& hb = b[fb[pos].second];
      const double x = a[ia].x + hb.x;
      const double n = -std::round(x);
      best.offer(std::abs(x + n), {a[ia].c0, a[ia].c1, hb.c0, hb.c1, static_cast<std::int64_t>(n)});
      return circular_gap(fb[pos].first, target);
    };
    const std::size_t len = fb.size();
    const std::size_t start =
        static_cast<std::size_t>(std::lower_bound(fb.begin(), fb.end(), std::make_pair(target, std::size_t{0})) -
                                 fb.begin());
    // Walk outward in both circular directions past exact relations.
    for (std::size_t step = 0; step < len; ++step) {
      if (consider((start + step) % len) > kExactRelation) break;
    }
    for (std::size_t step = 1; step <= len; ++step) {
      if (consider((start + len - step) % len) > kExactRelation) break;
    }
    per_a[ia] = best;
  });
  Best best;
  for (const Best& x : per_a) best.offer(x.value, x.coeff);
  return best;
}

SurfaceLetter parse_letter(const std::string& tok) {
  std::string t = tok;
  int sign = 1;
  for (const char* suffix : {"^-1", "^(-1)", "'"}) {
    const std::string s = suffix;
    if (t.size() > s.size() && t.compare(t.size() - s.size(), s.size(), s) == 0) {
      sign = -1;
      t.erase(t.size() - s.size());
      break;
    }
  }
  if (t == "a1") return {SurfaceGen::a1, sign};
  if (t == "b1") return {SurfaceGen::b1, sign};
  if (t == "a2") return {SurfaceGen::a2, sign};
  if (t == "b2") return {SurfaceGen::b2, sign};
  throw Error(ErrorKind::InvalidArgument, "unknown surface generator '" + tok + "'");
}

}  // namespace

GroupElem cyclic_holonomy(std::int64_t n, const GroupElem& g) { return power(g, n); }

SurfaceWord SurfaceWord::from(std::vector<SurfaceLetter> letters) {
  SurfaceWord out;
  for (const SurfaceLetter& l : letters) {
    if (!out.letters.empty() && out.letters.back().gen == l.gen && out.letters.back().sign == -l.sign)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

SurfaceWord SurfaceWord::parse(const std::string& text) {
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<SurfaceLetter> letters;
  std::string tok;
  while (in >> tok) letters.push_back(parse_letter(tok));
  return from(std::move(letters));
}

SurfaceWord operator*(const SurfaceWord& a, const SurfaceWord& b) {
  std::vector<SurfaceLetter> l = a.letters;
  l.insert(l.end(), b.letters.begin(), b.letters.end());
  return SurfaceWord::from(std::move(l));
}

SurfaceWord inverse(const SurfaceWord& w) {
  std::vector<SurfaceLetter> l(w.letters.rbegin(), w.letters.rend());
  for (SurfaceLetter& x : l) x.sign = -x.sign;
  return SurfaceWord{std::move(l)};
}

std::string to_string(const SurfaceWord& w) {
  if (w.letters.empty()) return "e";
  static const char* names[] = {"a1", "b1", "a2", "b2"};
  std::string out;
  for (const SurfaceLetter& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += names[static_cast<int>(l.gen)];
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

SurfaceWord surface_relator() { return SurfaceWord::parse("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1"); }

DeformedRep DeformedRep::make(const GroupElem& base, const std::array<double, 4>& eps) {
  const SpectralData s = classify(base);
  if (!is_positive_loxodromic(s))
    throw Error(ErrorKind::NotPositiveLoxodromic, "deformation base must be positive loxodromic");
  return DeformedRep{base, s, eps};
}

double DeformedRep::weight(SurfaceGen g) const {
  switch (g) {
    case SurfaceGen::a1:
      return eps[0];
    case SurfaceGen::a2:
      return eps[1];
    case SurfaceGen::b1:
      return eps[2];
    case SurfaceGen::b2:
      return eps[3];
  }
  return 0.0;
}

double deformed_exponent(const DeformedRep& rep, const SurfaceWord& w, std::int64_t n) {
  CompensatedSum s;
  for (const SurfaceLetter& l : w.letters) s.add(l.sign * rep.weight(l.gen));
  s.add(static_cast<double>(n));
  return s.value();
}

GroupElem eval_deformed(const DeformedRep& rep, const SurfaceWord& w, std::int64_t n) {
  return one_param_power(rep.base, rep.spectrum, deformed_exponent(rep, w, n));
}

DensityResult density_check(const std::array<double, 4>& eps, std::size_t N, double tol) {
  if (N == 0) throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  const auto n = static_cast<std::int64_t>(N);
  double spread = 0.0;
  for (double e : eps) spread = std::max(spread, std::abs(e));
  const double side = static_cast<double>(2 * n + 1);
  const bool split_valid = 4.0 * static_cast<double>(n) * spread + 0.5 <= static_cast<double>(n);
  const Best best = (split_valid && side * side * side * side > 1e6) ? density_split(eps, n) : density_direct(eps, n);
  return DensityResult{best.value < tol, best.value, best.coeff};
}

std::vector<double> exponent_set(const std::array<double, 4>& eps, std::size_t N) {
  const auto n = static_cast<std::int64_t>(N);
  std::vector<double> out;
  for (std::int64_t j = -n; j <= n; ++j)
    for (std::int64_t k = -n; k <= n; ++k)
      for (std::int64_t l = -n; l <= n; ++l)
        for (std::int64_t m = -n; m <= n; ++m)
          for (std::int64_t c = -n; c <= n; ++c) {
            CompensatedSum s;
            s.add(j * eps[0]);
            s.add(k * eps[1]);
            s.add(l * eps[2]);
            s.add(m * eps[3]);
            s.add(static_cast<double>(c));
            out.push_back(s.value());
          }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out)
    if (uniq.empty() || x - uniq.back() > kExactRelation) uniq.push_back(x);
  return uniq;
}

std::vector<double> trace_invariants(const DeformedRep& rep, std::size_t N) {
  if (!is_positive_loxodromic(rep.spectrum))
    throw Error(ErrorKind::NotPositiveLoxodromic, "deformation base must be positive loxodromic");
  std::array<double, 3> logs{};
  double mean = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    logs[i] = std::log(std::abs(rep.spectrum.eigenvalues[i]));
    mean += logs[i] / 3.0;
  }
  const std::vector<double> xs = exponent_set(rep.eps, N);
  std::vector<double> tr(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double t = 0.0;
    for (double l : logs) t += std::exp(xs[i] * (l - mean));
    tr[i] = t;
  }
  std::sort(tr.begin(), tr.end());
  std::vector<double> uniq;
  for (double t : tr)
    if (uniq.empty() || t - uniq.back() > kTraceDedup) uniq.push_back(t);
  return uniq;
}

int covering_parity(const SurfaceWord& w) {
  int b = 0;
  for (const SurfaceLetter& l : w.letters)
    if (l.gen == SurfaceGen::b1 || l.gen == SurfaceGen::b2) ++b;
  return b % 2;
}

std::string to_string(Verdict v) {
  return v == Verdict::surjective_at_scale ? "surjective_at_scale" : "not_established";
}

ObstructionReport surjectivity_obstruction(const GroupElem& hol_lox, const SampledSet& image_probe, const Tube& p,
                                           std::size_t n_max, std::size_t targets, std::uint64_t seed,
                                           double margin) {
  const SpectralData s = classify(hol_lox);
  if (!s.loxodromic()) throw Error(ErrorKind::NotLoxodromic, "holonomy element is not loxodromic");
  if (image_probe.empty()) throw Error(ErrorKind::MissingBouquetSamples, "empty image probe");

  const double tol = std::max(image_probe.resolution.value_or(0.0), kBouquetProbeTol);
  const SampledSet b = unite(bouquet(s.x_minus, 16), bouquet(s.x_plus, 16));
  std::vector<double> gap(b.size());
  parallel_for(b.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Flag& q : image_probe.points) best = std::min(best, flag_distance(b.points[i], q));
    gap[i] = best;
  });
  ObstructionReport r;
  r.bouquet_probe_gap = *std::max_element(gap.begin(), gap.end());
  if (r.bouquet_probe_gap > tol) {
    const std::size_t i = static_cast<std::size_t>(std::max_element(gap.begin(), gap.end()) - gap.begin());
    std::ostringstream os;
    os << "bouquet point " << to_string(b.points[i]) << " is " << r.bouquet_probe_gap << " from the probe";
    throw Error(ErrorKind::MissingBouquetSamples, os.str());
  }
  const SampledSet grid = sample_uniform(targets, seed);
  r.coverage = coverage_certificate(hol_lox, p, grid, n_max, margin);
  r.verdict = r.coverage.complete() ? Verdict::surjective_at_scale : Verdict::not_established;
  return r;
}

}  // namespace flagsurge
