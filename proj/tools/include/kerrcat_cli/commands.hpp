#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcat_cli/config.hpp"

namespace kerrcat::cli {

enum class Quantity { wigner, husimi, polarq, wehrl, negativity, rdist, negativity_r, tomogram, hs_scan };
enum class ReproTarget { table1, table2, fig1_negativities, fig7_negativities, kitten_times };

Quantity parse_quantity(const std::string& name);
ReproTarget parse_target(const std::string& name);
std::string quantity_name(Quantity q);
std::string target_name(ReproTarget t);

/// Density matrix of the configured state at lambda t, read from or written
/// to the cache when cfg.cache_dir is set. n_max < 0 uses the default truncation.
DensityMatrix state_at(const RunConfig& cfg, double lambda_t, int n_max = -1);

/// Writes the CSV artifacts for one quantity plus manifest.json into
/// cfg.output_dir and returns the manifest text.
std::string cmd_compute(Quantity q, const RunConfig& cfg);

/// One recomputed value. With relation "within" it passes when
/// |computed - reference| <= tolerance; with "below" when computed < reference.
struct ReproLine {
  std::string label;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string relation = "within";
  bool pass = false;
  std::string config_hash;
};

struct ReproOptions {
  int grid_points = 401;
  int threads = 0;
};

/// Recomputes the reference values of one target.
std::vector<ReproLine> reproduce(ReproTarget t, const ReproOptions& opt = {});

/// Human-readable report, one line per value plus a summary line.
std::string format_report(ReproTarget t, const std::vector<ReproLine>& lines);

/// Exit status for an exception escaping a command: 2 for configuration
/// errors, 3 for UnderResolvedGrid, 4 for DegenerateState, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace kerrcat::cli
