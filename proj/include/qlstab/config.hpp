#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlstab/evolution.hpp"
#include "qlstab/ground_state.hpp"
#include "qlstab/model.hpp"
#include "qlstab/stability.hpp"

namespace qlstab {

enum class Command { GroundState, Evolve, Stability, ScalingProbe };

const char* to_string(Command c) noexcept;
/// Throws ConfigError("command", ...) on an unknown name.
Command command_from_string(std::string_view name);

/// Flat run description. Every field maps to one config key.
struct RunConfig {
  Command command = Command::GroundState;

  ModelParams model;
  std::string potential_name = "zero";  // zero | harmonic | table
  std::string potential_table;          // path, for potential=table

  GridKind grid_kind = GridKind::Line;
  double L = 15.0;
  double Rmax = 8.0;
  std::size_t n = 1501;

  SolverOptions solver;

  double T = 10.0;
  double dt = 1e-3;
  std::size_t sample_every = 100;
  EvolutionOptions evolution;

  Perturbation perturbation;
  double C = 5.0;
  std::optional<DistanceNorm> norm;

  std::vector<double> xis{0.25, 0.5, 1.0, 2.0, 4.0};

  std::string out = "out";

  GridPtr make_grid() const;
};

using Override = std::pair<std::string, std::string>;

/// Parses key=value lines ('#' starts a comment), then applies the overrides in
/// order. Unknown keys, malformed values and violated invariants raise
/// ConfigError naming the offending key.
RunConfig parse_config(Command command, std::string_view text,
                       const std::vector<Override>& overrides = {});

/// Canonical key=value listing of the effective configuration (sorted keys,
/// round-trippable through parse_config).
std::string to_text(const RunConfig& cfg);

/// 64-bit FNV-1a of to_text(cfg), as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Two whitespace-separated columns (r, V) per line; '#' starts a comment.
Potential read_potential_table(const std::string& path);

}  // namespace qlstab
