#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "flagsurge/flag.hpp"
#include "flagsurge/group.hpp"
#include "flagsurge/schottky.hpp"

namespace flagsurge {

struct SurgeryScene {
  GroupElem g;
  Tube h2;
  std::size_t n_max = 32;
  double fit_slack = 0.01;
};

struct CombineScene {
  GroupElem conjugator;
  std::optional<SchottkyConfig> second;  // defaults to the conjugate of the first
  std::size_t depth = 2;
  std::size_t syllable_len = 1;
};

struct DeformScene {
  GroupElem base;
  std::array<double, 4> eps{};
  std::optional<std::array<double, 4>> eps_alt;
  std::size_t N = 50;
  double tol = 1e-3;
  std::size_t trace_N = 2;
};

struct Scene {
  std::optional<std::uint64_t> seed;
  std::size_t m = 1000;
  double margin = 0.1;
  std::size_t bouquet_m = 64;
  std::map<std::string, GroupElem> matrices;
  std::map<std::string, Tube> tubes;
  std::map<std::string, Flag> flags;
  std::optional<SchottkyConfig> schottky;
  std::optional<SurgeryScene> surgery;
  std::optional<CombineScene> combine;
  std::optional<DeformScene> deform;
  /// Input with every default filled in.
  nlohmann::ordered_json resolved;

  /// Named lookups; an empty name picks "g" (or the only entry). Throw SceneInvalid.
  const GroupElem& matrix(const std::string& name) const;
  const Tube& tube(const std::string& name) const;
  const Flag& flag(const std::string& name) const;
  std::uint64_t require_seed() const;
};

/// Throws SceneInvalid with a line/column or field-path diagnostic.
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& path);

}  // namespace flagsurge
