#include "flagsurge/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>

#include "flagsurge/dynamics.hpp"
#include "flagsurge/error.hpp"
#include "flagsurge/holonomy.hpp"
#include "flagsurge/io.hpp"
#include "flagsurge/scene.hpp"
#include "flagsurge/schottky.hpp"
#include "flagsurge/surgery.hpp"

namespace flagsurge {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string verb;
  std::string scene;
  std::string out = "flagsurge_out";
  std::string matrix, tube, flag, input;
  std::int64_t n = 1;
  std::size_t n_max = 0;  // 0: verb default
  double eps = 1e-3;
  std::size_t depth = 0;  // 0: verb default
  std::size_t m = 0;      // 0: scene sampling.m
  std::size_t N = 0;
  double tol = 0.0;
  std::size_t trace_N = 0;
  std::vector<std::string> words;
};

struct Outcome {
  ReportLines report;
  int status = kExitOk;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string flag_text(const Flag& x) { return format_vec(x.p.v) + " | " + format_vec(x.d.n); }

std::string tube_text(const Tube& t) {
  return flag_text(t.center) + " ; r_alpha " + format_double(t.r_alpha) + " ; r_beta " + format_double(t.r_beta);
}

std::string matrix_text(const Mat3& m) {
  std::string out;
  for (std::size_t i = 0; i < 9; ++i) {
    if (i) out += i % 3 == 0 ? " ; " : " ";
    out += format_double(m.a[i]);
  }
  return out;
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t sample_count(const Options& o, const Scene& s) { return o.m ? o.m : s.m; }

Outcome cmd_classify(const Options& o, const Scene& s, const fs::path& dir) {
  const GroupElem& g = s.matrix(o.matrix);
  const SpectralData d = classify(g);
  Outcome r;
  r.report.emplace_back("MATRIX", matrix_text(g.matrix()));
  r.report.emplace_back("KIND", d.loxodromic() ? "loxodromic" : "non_loxodromic");
  if (d.loxodromic()) {
    r.report.emplace_back("EIGENVALUES", format_vec(d.eigenvalues));
    r.report.emplace_back("POSITIVE", yes_no(is_positive_loxodromic(d)));
    r.report.emplace_back("X_PLUS", flag_text(d.x_plus));
    r.report.emplace_back("X_MINUS", flag_text(d.x_minus));
    r.report.emplace_back("P_PM", format_vec(d.p_pm.v));
    write_csv(dir / "fixed_flags.csv", {d.x_plus, d.x_minus});
  }
  return r;
}

Outcome cmd_bouquet(const Options& o, const Scene& s, const fs::path& dir) {
  const Flag& x = s.flag(o.flag);
  const SampledSet b = bouquet(x, o.m ? o.m : s.bouquet_m);
  write_csv(dir / "bouquet.csv", b.points);
  write_ply(dir / "bouquet.ply", b.points);
  Outcome r;
  r.report.emplace_back("CENTER", flag_text(x));
  r.report.emplace_back("POINTS", std::to_string(b.size()));
  r.report.emplace_back("RESOLUTION", format_double(b.resolution.value_or(0.0)));
  return r;
}

SampledSet input_or_uniform(const Options& o, const Scene& s) {
  if (!o.input.empty()) return SampledSet{read_csv(o.input), std::nullopt};
  return sample_uniform(sample_count(o, s), s.require_seed());
}

Outcome cmd_iterate(const Options& o, const Scene& s, const fs::path& dir) {
  const GroupElem& g = s.matrix(o.matrix);
  const SampledSet k = input_or_uniform(o, s);
  const SampledSet img = iterate_set(g, k, o.n);
  write_csv(dir / "input.csv", k.points);
  write_csv(dir / "iterate.csv", img.points);
  write_ply(dir / "iterate.ply", img.points);
  Outcome r;
  r.report.emplace_back("POWER", std::to_string(o.n));
  r.report.emplace_back("POINTS", std::to_string(img.size()));
  r.report.emplace_back("HAUSDORFF_TO_INPUT", format_double(hausdorff(k, img)));
  return r;
}

Outcome cmd_attract(const Options& o, const Scene& s, const fs::path& dir) {
  const GroupElem& g = s.matrix(o.matrix);
  const SpectralData d = classify(g);
  if (!d.loxodromic()) throw Error(ErrorKind::NotLoxodromic, "attract needs a loxodromic element");
  const SampledSet k = sample_where(sample_count(o, s), s.require_seed(),
                                    [&](const Flag& x) { return distance_to_bouquet(x, d.x_minus) >= s.margin; });
  const AttractionReport a = attraction_certificate(g, k, o.eps, o.n_max ? o.n_max : 64);
  std::string csv = "n,residual\n";
  for (const auto& [n, res] : a.residuals) csv += std::to_string(n) + "," + format_double(res) + "\n";
  write_text(dir / "residual.csv", csv);
  write_csv(dir / "samples.csv", k.points);
  Outcome r;
  r.report.emplace_back("CONVERGED", yes_no(a.converged));
  r.report.emplace_back("N_STAR", std::to_string(a.n_star));
  r.report.emplace_back("FINAL_RESIDUAL", a.residuals.empty() ? "nan" : format_double(a.residuals.back().second));
  r.status = a.converged ? kExitOk : kExitViolation;
  return r;
}

Outcome cmd_coverage(const Options& o, const Scene& s, const fs::path& dir) {
  const GroupElem& g = s.matrix(o.matrix);
  const Tube& p = s.tube(o.tube);
  const SampledSet targets = sample_uniform(sample_count(o, s), s.require_seed());
  const CoverageReport c = coverage_certificate(g, p, targets, o.n_max ? o.n_max : 128, s.margin);
  write_csv(dir / "failures.csv", c.failures);
  Outcome r;
  r.report.emplace_back("TARGETS", std::to_string(c.targets_total));
  r.report.emplace_back("REACHED", std::to_string(c.targets_reached));
  r.report.emplace_back("EXCLUDED", std::to_string(c.excluded.size()));
  r.report.emplace_back("MAX_STEPS", std::to_string(c.max_steps_used));
  r.report.emplace_back("COMPLETE", yes_no(c.complete()));
  r.status = c.complete() ? kExitOk : kExitViolation;
  return r;
}

const SchottkyConfig& need_schottky(const Scene& s) {
  if (!s.schottky) throw Error(ErrorKind::SceneInvalid, "field 'schottky': section required");
  return *s.schottky;
}

void report_ping_pong(const PingPongOutcome& pp, Outcome& r) {
  if (const auto* c = std::get_if<PingPongCertificate>(&pp)) {
    r.report.emplace_back("CERTIFIED", "yes");
    r.report.emplace_back("DISJOINTNESS_CLEARANCE", format_double(c->disjointness_clearance));
    r.report.emplace_back("FORWARD_DEPTH", format_double(c->forward_depth));
    r.report.emplace_back("BACKWARD_DEPTH", format_double(c->backward_depth));
    r.report.emplace_back("SAMPLES", std::to_string(c->samples));
    r.report.emplace_back("FINGERPRINT", hex(c->fingerprint));
  } else {
    const auto& v = std::get<PingPongViolation>(pp);
    r.report.emplace_back("CERTIFIED", "no");
    r.report.emplace_back("VIOLATION", v.describe());
    r.report.emplace_back("WITNESS", flag_text(v.witness));
    r.status = kExitViolation;
  }
}

Outcome cmd_certify(const Options& o, const Scene& s, const fs::path& dir) {
  const SchottkyConfig& cfg = need_schottky(s);
  const PingPongOutcome pp = certify_ping_pong(cfg, sample_count(o, s), s.require_seed());
  Outcome r;
  r.report.emplace_back("RANK", std::to_string(cfg.rank()));
  report_ping_pong(pp, r);
  if (certified(pp) && o.depth > 0) {
    const FreenessReport f = freeness_check(cfg, o.depth, sample_count(o, s), s.require_seed());
    r.report.emplace_back("FREENESS_LENGTH", std::to_string(o.depth));
    r.report.emplace_back("FREENESS_ELEMENTS", std::to_string(f.elements));
    r.report.emplace_back("FREENESS", f.ok ? "pass" : "fail " + to_string(f.u) + " vs " + to_string(f.w));
    if (!f.ok) r.status = kExitViolation;
  }
  std::vector<Flag> centers;
  for (const Tube& t : cfg.tubes()) centers.push_back(t.center);
  write_csv(dir / "tube_centers.csv", centers);
  return r;
}

Outcome cmd_limit_set(const Options& o, const Scene& s, const fs::path& dir) {
  const SchottkyConfig& cfg = need_schottky(s);
  const PingPongOutcome pp = certify_ping_pong(cfg, sample_count(o, s), s.require_seed());
  Outcome r;
  report_ping_pong(pp, r);
  if (!certified(pp)) return r;
  const SampledSet ls = limit_set(cfg, pp, o.depth ? o.depth : 3, sample_count(o, s), s.bouquet_m);
  write_csv(dir / "limit_set.csv", ls.points);
  write_ply(dir / "limit_set.ply", ls.points);
  r.report.emplace_back("POINTS", std::to_string(ls.size()));
  r.report.emplace_back("RESOLUTION", ls.resolution ? format_double(*ls.resolution) : "unknown");
  return r;
}

GluingData search(const Options& o, const Scene& s) {
  if (!s.surgery) throw Error(ErrorKind::SceneInvalid, "field 'surgery': section required");
  const SurgeryScene& ss = *s.surgery;
  return surgery_exponent(ss.g, ss.h2, sample_count(o, s), o.n_max ? o.n_max : ss.n_max, s.require_seed(),
                          ss.fit_slack);
}

void report_gluing(const GluingData& gd, const GluingReport& v, Outcome& r) {
  r.report.emplace_back("EXPONENT", std::to_string(gd.n));
  r.report.emplace_back("MARGIN", format_double(gd.margin));
  r.report.emplace_back("H1", tube_text(gd.h1));
  r.report.emplace_back("H2", tube_text(gd.h2));
  r.report.emplace_back("PHI_MATRIX", matrix_text(gd.phi.g.matrix()));
  for (std::size_t k = 0; k < 4; ++k)
    r.report.emplace_back("CONDITION_" + std::to_string(k + 1),
                          std::string(v.passed[k] ? "pass" : "fail") + " " + format_double(v.value[k]));
  r.report.emplace_back("SHELL_SAMPLES", std::to_string(v.shell_samples));
  if (!v.ok()) {
    r.report.emplace_back("FAILED_CONDITION", std::to_string(*v.failed));
    r.report.emplace_back("WITNESS", flag_text(v.witness));
    r.status = kExitViolation;
  }
}

Outcome cmd_surgery(const Options& o, const Scene& s, const fs::path& dir) {
  const GluingData gd = search(o, s);
  const GluingReport v = verify_gluing(gd, sample_count(o, s), s.require_seed());
  Outcome r;
  report_gluing(gd, v, r);
  const SampledSet bd = tube_boundary_sample(gd.h1, sample_count(o, s), s.require_seed());
  write_csv(dir / "h1_boundary.csv", bd.points);
  write_ply(dir / "h1_boundary.ply", bd.points);
  return r;
}

Outcome cmd_combine(const Options& o, const Scene& s, const fs::path& dir) {
  const SchottkyConfig& cfg1 = need_schottky(s);
  if (!s.combine) throw Error(ErrorKind::SceneInvalid, "field 'combine': section required");
  const CombineScene& cs = *s.combine;
  if (!cs.second) throw Error(ErrorKind::SceneInvalid, "field 'combine.schottky2': section required");
  const GluingData gd = search(o, s);
  const CombinedGroup cg = combine_free_product(cfg1, *cs.second, gd, cs.conjugator);
  const std::size_t depth = o.depth ? o.depth : cs.depth;
  const TreeReport t = tree_disjointness_check(cg, depth, sample_count(o, s), s.require_seed(), cs.syllable_len);
  Outcome r;
  r.report.emplace_back("EXPONENT", std::to_string(gd.n));
  for (std::size_t i = 0; i < cg.gens1.size(); ++i)
    r.report.emplace_back("G" + std::to_string(i + 1), matrix_text(cg.gens1[i].matrix()));
  for (std::size_t i = 0; i < cg.gens2_conj.size(); ++i)
    r.report.emplace_back("H" + std::to_string(i + 1), matrix_text(cg.gens2_conj[i].matrix()));
  r.report.emplace_back("DEPTH", std::to_string(depth));
  r.report.emplace_back("WORDS", std::to_string(t.words));
  r.report.emplace_back("PAIRS_CHECKED", std::to_string(t.checks));
  r.report.emplace_back("DISJOINT", t.ok ? "pass" : "fail");
  if (!t.ok) {
    r.report.emplace_back("WORD", to_string(t.w) + " (region " + std::to_string(t.region) + ")");
    r.report.emplace_back("WORD_PRIME", to_string(t.w_prime) + " (region " + std::to_string(t.region_prime) + ")");
    r.report.emplace_back("WITNESS", flag_text(t.witness));
    r.status = kExitViolation;
  }
  write_text(dir / "combined.txt", format_report(r.report));
  return r;
}

Outcome cmd_deform(const Options& o, const Scene& s, const fs::path& dir) {
  if (!s.deform) throw Error(ErrorKind::SceneInvalid, "field 'deform': section required");
  const DeformScene& d = *s.deform;
  const DeformedRep rep = DeformedRep::make(d.base, d.eps);
  const DensityResult dr = density_check(d.eps, o.N ? o.N : d.N, o.tol > 0.0 ? o.tol : d.tol);
  const std::vector<double> tr = trace_invariants(rep, o.trace_N ? o.trace_N : d.trace_N);
  std::string csv = "trace\n";
  for (double t : tr) csv += format_double(t) + "\n";
  write_text(dir / "traces.csv", csv);
  Outcome r;
  r.report.emplace_back("MIN_POSITIVE", format_double(dr.min_positive));
  r.report.emplace_back("DENSE_AT_SCALE", dr.dense_at_scale ? "1" : "0");
  std::string coeff;
  for (auto c : dr.coefficients) coeff += (coeff.empty() ? "" : " ") + std::to_string(c);
  r.report.emplace_back("COEFFICIENTS", coeff);
  r.report.emplace_back("RELATOR_DEFECT",
                        format_double(pgl_distance(eval_deformed(rep, surface_relator(), 0), GroupElem::identity())));
  r.report.emplace_back("TRACE_COUNT", std::to_string(tr.size()));
  r.report.emplace_back("TRACE_DIGEST", hex(fnv(csv)));
  if (d.eps_alt) {
    const std::vector<double> alt = trace_invariants(DeformedRep::make(d.base, *d.eps_alt), o.trace_N ? o.trace_N : d.trace_N);
    bool same = alt.size() == tr.size();
    for (std::size_t i = 0; same && i < tr.size(); ++i) same = std::abs(alt[i] - tr[i]) <= 1e-9;
    r.report.emplace_back("TRACES_DISTINCT_FROM_ALT", yes_no(!same));
  }
  return r;
}

Outcome cmd_export(const Options& o, const Scene& s, const fs::path& dir) {
  std::vector<Flag> flags;
  for (const auto& [name, x] : s.flags) flags.push_back(x);
  write_csv(dir / "flags.csv", flags);
  write_ply(dir / "flags.ply", flags);
  Outcome r;
  r.report.emplace_back("FLAGS", std::to_string(flags.size()));
  if (!s.tubes.empty()) {
    const std::uint64_t seed = s.require_seed();
    for (const auto& [name, t] : s.tubes) {
      const SampledSet b = tube_boundary_sample(t, sample_count(o, s), seed);
      write_csv(dir / ("tube_" + name + ".csv"), b.points);
      write_ply(dir / ("tube_" + name + ".ply"), b.points);
    }
    r.report.emplace_back("TUBES", std::to_string(s.tubes.size()));
  }
  return r;
}

bool input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::SceneInvalid:
    case ErrorKind::ZeroVector:
    case ErrorKind::NonIncident:
    case ErrorKind::InvalidTube:
    case ErrorKind::Singular:
    case ErrorKind::InvalidArgument:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::EmptyRegion:
      return true;
    default:
      return false;
  }
}

nlohmann::ordered_json options_json(const Options& o) {
  nlohmann::ordered_json j;
  j["verb"] = o.verb;
  if (!o.matrix.empty()) j["matrix"] = o.matrix;
  if (!o.tube.empty()) j["tube"] = o.tube;
  if (!o.flag.empty()) j["flag"] = o.flag;
  if (!o.input.empty()) j["input"] = o.input;
  j["n"] = o.n;
  j["n_max"] = o.n_max;
  j["eps"] = o.eps;
  j["depth"] = o.depth;
  j["m"] = o.m;
  j["N"] = o.N;
  j["tol"] = o.tol;
  j["trace_N"] = o.trace_N;
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flag-space dynamics, Schottky certificates and flag surgery"};
  app.require_subcommand(1);
  Options o;

  using Handler = std::function<Outcome(const Options&, const Scene&, const fs::path&)>;
  const std::vector<std::tuple<std::string, std::string, Handler>> verbs = {
      {"classify", "spectral type and fixed flags of a matrix", cmd_classify},
      {"bouquet", "sample the alpha-beta bouquet of a flag", cmd_bouquet},
      {"iterate", "apply g^n to a sample", cmd_iterate},
      {"attract", "attraction certificate towards B+(g)", cmd_attract},
      {"coverage", "coverage certificate of a tube at B-(g)", cmd_coverage},
      {"certify-schottky", "ping-pong certificate of the schottky section", cmd_certify},
      {"limit-set", "sampled limit set of a certified configuration", cmd_limit_set},
      {"surgery-search", "least gluing exponent and the four exchange conditions", cmd_surgery},
      {"combine", "free-product combination and tree disjointness", cmd_combine},
      {"deform-check", "density and trace invariants of a deformation", cmd_deform},
      {"export", "write named flags and tube boundaries", cmd_export},
  };
  std::map<std::string, Handler> handlers;
  for (const auto& [name, help, h] : verbs) {
    handlers[name] = h;
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("scene", o.scene, "scene JSON file")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--matrix", o.matrix, "matrix name");
    sub->add_option("--tube", o.tube, "tube name");
    sub->add_option("--flag", o.flag, "flag name");
    sub->add_option("--input", o.input, "input CSV instead of a uniform sample");
    sub->add_option("--n", o.n, "power");
    sub->add_option("--n-max", o.n_max, "iteration bound");
    sub->add_option("--eps", o.eps, "attraction tolerance");
    sub->add_option("--depth", o.depth, "word depth");
    sub->add_option("-m,--samples", o.m, "sample count");
    sub->add_option("--N", o.N, "coefficient bound");
    sub->add_option("--tol", o.tol, "density tolerance");
    sub->add_option("--trace-N", o.trace_N, "coefficient bound for traces");
  }
  CLI::App* parity = app.add_subcommand("parity", "covering parity of a surface word");
  parity->add_option("word", o.words, "letters a1 b1 a2 b2, inverses as a1^-1")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  for (CLI::App* sub : app.get_subcommands()) o.verb = sub->get_name();

  try {
    if (o.verb == "parity") {
      std::string text;
      for (const auto& w : o.words) text += w + " ";
      out << covering_parity(SurfaceWord::parse(text)) << "\n";
      return kExitOk;
    }
    const Scene scene = load_scene(o.scene);
    const fs::path dir(o.out);
    fs::create_directories(dir);
    nlohmann::ordered_json resolved = scene.resolved;
    resolved["command"] = options_json(o);
    write_text(dir / "resolved.json", resolved.dump(2) + "\n");
    const Outcome r = handlers.at(o.verb)(o, scene, dir);
    const std::string text = format_report(r.report);
    write_text(dir / "report.txt", text);
    out << text;
    return r.status;
  } catch (const Error& e) {
    err << "flagsurge " << o.verb << ": " << e.what() << "\n";
    return input_error(e.kind()) ? kExitInput : kExitViolation;
  } catch (const fs::filesystem_error& e) {
    err << "flagsurge " << o.verb << ": " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace flagsurge
