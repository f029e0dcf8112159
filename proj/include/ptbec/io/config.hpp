#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ptbec/grid.hpp"
#include "ptbec/potential.hpp"

namespace ptbec::io {

enum class Mode { Spectrum, Stability, Evolve, Bloch };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

enum class InitialKind { Ground, Excited, BrokenPlus, BrokenMinus, Sphere };

enum class BrokenSeeding { Localized, Mode };

struct RunConfig {
  Mode mode = Mode::Spectrum;

  double grid_half_width = kDefaultHalfWidth;
  std::size_t grid_points = kDefaultPoints;

  PotentialParams potential;
  Nonlinearity nonlinearity = Nonlinearity::Standard;

  std::vector<double> gammas{0.0, 0.02, 0.04, 0.042};
  double n0a_min = -0.1;
  double n0a_max = 0.1;
  double n0a_step = 0.005;
  BrokenSeeding broken_seeding = BrokenSeeding::Localized;

  std::size_t bdg_modes = 6;
  double onset_window = 1e-4;

  double n0a = -0.05;  // interaction for evolve and bloch runs
  double t_final = 100.0;
  double dt = 1e-3;
  std::size_t sample_every = 100;
  double n0 = 1.0;
  InitialKind initial = InitialKind::Ground;
  double theta = 0.0;
  double phi = 0.0;
  /// Index into the BdG spectrum of the initial state; negative means no kick.
  int perturb_mode = -1;
  double epsilon = 1e-3;

  std::size_t bloch_starts = 16;
  bool bloch_backward = true;
  bool bloch_eigencurves = true;

  std::filesystem::path output_dir = "out";
  std::size_t workers = 0;  // 0 = available cores

  GridSpec grid() const { return GridSpec::symmetric(grid_half_width, grid_points); }
  SystemParams system(double gamma, double n0a_value) const;
  /// Throws UsageError naming the offending key.
  void validate() const;
};

/// One documented configuration key, settable from files and flags.
struct KeyInfo {
  std::string name;
  std::string help;
};

const std::vector<KeyInfo>& config_keys();

/// Sets one key from its textual value. Throws UsageError on unknown keys
/// or malformed values.
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);

/// Current value of a key in the same textual form set_key accepts.
std::string get_key(const RunConfig& cfg, std::string_view key);

/// Parses "key = value" lines; '#' starts a comment. Errors carry
/// "<source>:<line>:" prefixes.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source);

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace ptbec::io
