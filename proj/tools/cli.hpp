#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "padtors/json_io.hpp"

namespace padtors::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kCertification = 2,
  kPrecision = 3,
};

struct RunConfig {
  std::uint32_t p = 5;
  int prec = kDefaultPrecision;
  int series_order = kDefaultSeriesOrder;
  bool trace = false;
  std::string output;

  int n_min = 4;
  int n_max = 12;
  int scan_n = 0;

  int terms = 8;

  std::string a4, a6;
  int max_order = 8;
  int disk_val = 0;
  int scan_depth = 3;

  std::string x, y;
};

Json cmd_counterexample(const RunConfig& cfg);
Json cmd_tate(const RunConfig& cfg);
Json cmd_torsion_scan(const RunConfig& cfg);
Json cmd_separation(const RunConfig& cfg);
Json cmd_ell_log(const RunConfig& cfg);

/// {"error":{"kind":...,"message":...,"exit_code":...}}
Json error_json(const std::string& kind, const std::string& message, int exit_code);

/// Parses argv, runs one subcommand and writes its JSON (or an error object) to out,
/// or to --output when given. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padtors::cli
