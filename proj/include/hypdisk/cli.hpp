#pragma once
// Command-line front end. Parsing and dispatch live in the library so that
// tests can drive the tool in-process.
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hypdisk::cli {

enum class Format { csv, json, obj };

struct RunConfig {
  std::string subcommand;
  std::filesystem::path out_dir = ".";
  Format format = Format::csv;
  std::uint64_t seed = 1;
  bool mesh = true;
  double mesh_h = 1.0 / 128;

  double radius = 0.0;
  double eta0 = 0.0;                 // pseudosphere
  std::optional<double> modulus;     // hyperboloid
  std::string calibration = "tof";   // hyperboloid: tof | max-radius
  std::optional<double> max_radius;  // hyperboloid, max-radius calibration
  int n = 0;                         // amsler, small-slopes

  double lambda = 0.0;  // minimax
  double p = 0.0;
  int grid_n = 0;
  bool continuation = false;

  std::vector<double> radii;  // sweep
  std::vector<int> ns{2, 3, 4, 5};
  std::vector<double> eta0s{1.94, 2.54, 2.92, 3.21};
  unsigned jobs = 0;  // 0: hardware concurrency
};

// Throws UsageError on malformed arguments or flags outside the module
// preconditions. Returns nullopt for --help/--version (text written to out).
std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out);
void validate(const RunConfig& config);
// 0 on success, 1 on numerical failure (error record on err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
// Whole pipeline; exit status 0, 1 or 2.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

const char* version();

}  // namespace hypdisk::cli
