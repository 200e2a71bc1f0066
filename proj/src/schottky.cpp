#include "flagsurge/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

#include "flagsurge/dynamics.hpp"
#include "flagsurge/error.hpp"
#include "flagsurge/parallel.hpp"

namespace flagsurge {

SchottkyConfig SchottkyConfig::make(std::vector<GroupElem> generators, std::vector<TubePair> pairs, double margin) {
  if (generators.size() != pairs.size())
    throw Error(ErrorKind::InvalidArgument, "generator and tube-pair counts differ");
  if (!(margin > 0.0)) throw Error(ErrorKind::InvalidArgument, "margin must be positive");
  return SchottkyConfig{std::move(generators), std::move(pairs), margin};
}

std::vector<Tube> SchottkyConfig::tubes() const {
  std::vector<Tube> out;
  for (const auto& p : pairs) {
    out.push_back(p.minus);
    out.push_back(p.plus);
  }
  return out;
}

Word reduce_word(const Word& w) {
  Word out;
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().index == l.index && out.letters.back().sign == -l.sign)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out.letters.push_back({it->index, -it->sign});
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return reduce_word(out);
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << 'g' << (w.letters[i].index + 1);
    if (w.letters[i].sign < 0) os << "^-1";
  }
  return os.str();
}

GroupElem word_image(const Word& w, const std::vector<GroupElem>& generators) {
  GroupElem acc = GroupElem::identity();
  for (const Letter& l : w.letters) {
    if (l.index >= generators.size())
      throw Error(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(l.index + 1));
    acc = acc * (l.sign < 0 ? generators[l.index].inverse() : generators[l.index]);
  }
  return acc;
}

std::vector<Word> reduced_words(std::size_t rank, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len && rank > 0; ++len) {
    const std::size_t end = out.size();
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t i = 0; i < rank; ++i) {
        for (int s : {1, -1}) {
          const Word& base = out[k];
          if (!base.empty() && base.letters.back().index == i && base.letters.back().sign == -s) continue;
          Word next = base;
          next.letters.push_back({i, s});
          out.push_back(std::move(next));
        }
      }
    }
    begin = end;
  }
  return out;
}

double PingPongCertificate::worst_margin() const {
  return std::min({disjointness_clearance, forward_depth, backward_depth});
}

std::string PingPongViolation::describe() const {
  std::ostringstream os;
  switch (stage) {
    case Stage::disjointness:
      os << "tubes " << first << " and " << second << " overlap (clearance " << value << ")";
      break;
    case Stage::forward:
      os << "g" << first + 1 << " maps an exterior point of H-" << first + 1 << " to depth " << value << " in H+"
         << first + 1;
      break;
    case Stage::backward:
      os << "g" << first + 1 << "^-1 maps an exterior point of H+" << first + 1 << " to depth " << value << " in H-"
         << first + 1;
      break;
  }
  return os.str();
}

std::uint64_t fingerprint(const SchottkyConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double x) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& g : cfg.generators)
    for (double x : g.matrix().a) mix(x);
  for (const Tube& t : cfg.tubes()) {
    for (double x : t.center.p.v) mix(x);
    for (double x : t.center.d.n) mix(x);
    mix(t.r_alpha);
    mix(t.r_beta);
  }
  mix(cfg.margin);
  return h;
}

namespace {

// Least value of f over the sample and the index attaining it (first on ties).
template <class F>
std::pair<double, std::size_t> worst_over(const std::vector<Flag>& pts, F f) {
  std::vector<double> v(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { v[i] = f(pts[i]); });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[arg]) arg = i;
  return {v.empty() ? std::numeric_limits<double>::infinity() : v[arg], arg};
}

std::vector<Flag> exterior_with_boundary(const Tube& t, std::size_t m, std::uint64_t seed) {
  std::vector<Flag> pts = tube_complement_sample(t, m, 0.0, seed).points;
  const auto edge = tube_boundary_sample(t, m, seed + 1).points;
  pts.insert(pts.end(), edge.begin(), edge.end());
  return pts;
}

}  // namespace

PingPongOutcome certify_ping_pong(const SchottkyConfig& cfg, std::size_t m, std::uint64_t seed) {
  for (std::size_t i = 0; i < cfg.rank(); ++i)
    if (!classify(cfg.generators[i]).loxodromic())
      throw Error(ErrorKind::NotLoxodromic, "generator g" + std::to_string(i + 1) + " is not loxodromic");

  PingPongCertificate cert;
  cert.disjointness_clearance = std::numeric_limits<double>::infinity();
  cert.forward_depth = std::numeric_limits<double>::infinity();
  cert.backward_depth = std::numeric_limits<double>::infinity();
  cert.fingerprint = fingerprint(cfg);

  const std::vector<Tube> tubes = cfg.tubes();
  for (std::size_t i = 0; i < tubes.size(); ++i) {
    const auto inside = tube_interior_sample(tubes[i], m, 0.0, seed + 17 * i).points;
    cert.samples += inside.size();
    for (std::size_t j = 0; j < tubes.size(); ++j) {
      if (i == j) continue;
      const auto [clear, at] = worst_over(inside, [&](const Flag& x) { return -tube_depth(tubes[j], x); });
      cert.disjointness_clearance = std::min(cert.disjointness_clearance, clear);
      if (clear < cfg.margin)
        return PingPongViolation{PingPongViolation::Stage::disjointness, i, j, inside[at], clear};
    }
  }

  for (std::size_t i = 0; i < cfg.rank(); ++i) {
    const GroupElem& g = cfg.generators[i];
    const GroupElem ginv = g.inverse();
    const TubePair& pair = cfg.pairs[i];

    const auto out_minus = exterior_with_boundary(pair.minus, m, seed + 1000 + 31 * i);
    cert.samples += out_minus.size();
    const auto [fwd, at_f] = worst_over(out_minus, [&](const Flag& x) { return tube_depth(pair.plus, act(g, x)); });
    cert.forward_depth = std::min(cert.forward_depth, fwd);
    if (fwd < cfg.margin) return PingPongViolation{PingPongViolation::Stage::forward, i, i, out_minus[at_f], fwd};

    const auto out_plus = exterior_with_boundary(pair.plus, m, seed + 2000 + 31 * i);
    cert.samples += out_plus.size();
    const auto [bwd, at_b] =
        worst_over(out_plus, [&](const Flag& x) { return tube_depth(pair.minus, act(ginv, x)); });
    cert.backward_depth = std::min(cert.backward_depth, bwd);
    if (bwd < cfg.margin) return PingPongViolation{PingPongViolation::Stage::backward, i, i, out_plus[at_b], bwd};
  }
  return cert;
}

bool in_tube_complement(const SchottkyConfig& cfg, const Flag& x) {
  for (const Tube& t : cfg.tubes())
    if (tube_depth(t, x) >= 0.0) return false;
  return true;
}

namespace {

// Candidate move out of a tube: the letter to apply and how deep x sits.
struct Move {
  Letter letter;
  double depth = -1.0;
};

std::optional<Move> best_move(const SchottkyConfig& cfg, const Flag& x) {
  std::optional<Move> best;
  for (std::size_t i = 0; i < cfg.rank(); ++i) {
    const TubePair& pair = cfg.pairs[i];
    const double in_minus = tube_depth(pair.minus, x);
    if (in_minus > 0.0 && (!best || in_minus > best->depth)) best = Move{{i, 1}, in_minus};
    // x lies in g_i(X \ Int H-_i) exactly when g_i^-1 x is not inside H-_i.
    const double in_plus = tube_depth(pair.plus, x);
    if (in_plus > 0.0 && tube_depth(pair.minus, act(cfg.generators[i].inverse(), x)) <= 0.0 &&
        (!best || in_plus > best->depth))
      best = Move{{i, -1}, in_plus};
  }
  return best;
}

}  // namespace

bool in_fundamental_domain(const SchottkyConfig& cfg, const Flag& x) { return !best_move(cfg, x).has_value(); }

Reduction fundamental_domain_reduce(const Flag& z, const SchottkyConfig& cfg, std::size_t n_max) {
  Reduction out;
  Flag x = z;
  for (std::size_t step = 0;; ++step) {
    const auto move = best_move(cfg, x);
    if (!move) break;
    if (step >= n_max)
      throw Error(ErrorKind::NoTermination, "partial word after " + std::to_string(n_max) + " moves: " +
                                                to_string(out.word));
    const GroupElem& g = cfg.generators[move->letter.index];
    x = act(move->letter.sign > 0 ? g : g.inverse(), x);
    out.word.letters.insert(out.word.letters.begin(), move->letter);
  }
  out.word = reduce_word(out.word);
  out.representative = x;
  if (cfg.rank() == 1) {
    const SpectralData s = classify(cfg.generators[0]);
    if (is_positive_loxodromic(s)) out.flow_time = flow_time(cfg.generators[0], cfg.pairs[0].minus, z);
  }
  return out;
}

double flow_time(const GroupElem& g, const Tube& h_minus, const Flag& z) {
  const SpectralData s = classify(g);
  auto depth_at = [&](double t) { return tube_depth(h_minus, act(one_param_power(g, s, -t), z)); };
  // Find integers k - 1, k with the flow line outside at k - 1 and inside at k.
  constexpr int kMaxSteps = 4096;
  long k = 0;
  if (depth_at(0.0) > 0.0) {
    int guard = 0;
    while (depth_at(static_cast<double>(k - 1)) > 0.0) {
      if (++guard > kMaxSteps) throw Error(ErrorKind::NoTermination, "flow line never leaves the tube");
      --k;
    }
  } else {
    int guard = 0;
    while (depth_at(static_cast<double>(k)) <= 0.0) {
      if (++guard > kMaxSteps) throw Error(ErrorKind::NoTermination, "flow line never enters the tube");
      ++k;
    }
  }
  double lo = static_cast<double>(k - 1), hi = static_cast<double>(k);
  for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (depth_at(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SampledSet limit_set(const SchottkyConfig& cfg, const PingPongOutcome& outcome, std::size_t depth, std::size_t m,
                     std::size_t bouquet_m) {
  const auto* cert = std::get_if<PingPongCertificate>(&outcome);
  if (!cert || cert->fingerprint != fingerprint(cfg))
    throw Error(ErrorKind::CertificateRequired, "limit sets need a ping-pong certificate for this configuration");
  std::vector<Flag> seeds;
  for (const auto& g : cfg.generators) {
    const SpectralData s = classify(g);
    for (const Flag& x : {s.x_plus, s.x_minus}) {
      const auto b = bouquet(x, bouquet_m).points;
      seeds.insert(seeds.end(), b.begin(), b.end());
    }
  }
  const std::vector<Word> words = reduced_words(cfg.rank(), depth);
  SampledSet all;
  all.points.resize(words.size() * seeds.size());
  parallel_for(words.size(), [&](std::size_t w) {
    const GroupElem h = word_image(words[w], cfg);
    for (std::size_t i = 0; i < seeds.size(); ++i) all.points[w * seeds.size() + i] = act(h, seeds[i]);
  });
  return farthest_point_subsample(all, m);
}

FreenessReport freeness_check(const SchottkyConfig& cfg, std::size_t max_len, std::size_t m, std::uint64_t seed) {
  FreenessReport report;
  const auto words = reduced_words(cfg.rank(), max_len);
  report.words = words.size();
  auto keep = [&](const Flag& x) {
    for (const Tube& t : cfg.tubes())
      if (-tube_depth(t, x) < cfg.margin) return false;
    return true;
  };
  const SampledSet sample = sample_where(m, seed, keep);
  report.samples = sample.size();

  // u(D) meets w(D) exactly when (w^-1 u)(D) meets D; check each element once.
  std::map<std::vector<std::pair<std::size_t, int>>, std::pair<std::size_t, std::size_t>> elements;
  for (std::size_t a = 0; a < words.size(); ++a) {
    for (std::size_t b = 0; b < words.size(); ++b) {
      if (a == b) continue;
      const Word v = concat(inverse_word(words[b]), words[a]);
      std::vector<std::pair<std::size_t, int>> key;
      for (const Letter& l : v.letters) key.emplace_back(l.index, l.sign);
      elements.try_emplace(std::move(key), a, b);
    }
  }
  report.elements = elements.size();
  for (const auto& [key, pair] : elements) {
    Word v;
    for (const auto& [i, s] : key) v.letters.push_back({i, s});
    const GroupElem h = word_image(v, cfg);
    std::vector<char> hit(sample.size(), 0);
    parallel_for(sample.size(), [&](std::size_t i) { hit[i] = in_tube_complement(cfg, act(h, sample.points[i])); });
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (hit[i]) {
        report.ok = false;
        report.u = words[pair.first];
        report.w = words[pair.second];
        report.witness = act(word_image(report.u, cfg), sample.points[i]);
        return report;
      }
    }
  }
  return report;
}

}  // namespace flagsurge
