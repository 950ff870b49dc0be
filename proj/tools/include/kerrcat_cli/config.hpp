#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kerrcat/decoherence.hpp"
#include "kerrcat/model.hpp"

namespace kerrcat::cli {

/// A batch run read from a key=value file. Every field has a default, so an
/// empty file is a valid configuration of the default model.
struct RunConfig {
  ModelParams params;
  std::optional<DampingParams> damping;
  std::vector<double> times{0.0};  // lambda t; +inf selects the t -> infinity limit
  int grid_points = 401;
  std::optional<double> half_width;
  std::vector<double> sigmas{0.5};
  int x_points = 801;
  int phi_points = 64;
  int theta_points = 360;
  int kitten_p = 4;
  double scan_begin = 0.0;
  double scan_end = 0.7853981633974483;  // pi/4
  int scan_points = 0;                   // 0: 600 per pi of range
  double eps_trunc = 1e-12;
  int threads = 0;
  std::filesystem::path output_dir = "kerrcat_out";
  std::filesystem::path cache_dir;  // empty: no cache

  /// Sorted key=value lines of every field, numbers in round-trip form.
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
  void validate() const;
};

/// Real number: plain literal, "inf", or a multiple of pi such as "pi/8" or "3*pi/4".
double parse_real(const std::string& text);

/// Applies one key=value assignment. Throws InvalidArgument on unknown keys
/// or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses config text: one key=value per line, '#' starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Names of all accepted keys, for help output.
const std::vector<std::string>& config_keys();

std::string fnv1a_hex(const std::string& text);

}  // namespace kerrcat::cli
