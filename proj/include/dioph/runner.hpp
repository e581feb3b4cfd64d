#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "dioph/numerics.hpp"

namespace dioph {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kPrecisionEnv = "DIOPH_PRECISION";

/// Precision from DIOPH_PRECISION, else 512 bits.
Precision default_precision();

/// One experiment run. `params` holds the command-specific keys with every
/// default filled in, so that to_json() is canonical.
struct Manifest {
  std::string command;
  uint64_t seed = 0;
  Precision precision = 0;
  std::string out_dir = ".";
  nlohmann::json params = nlohmann::json::object();

  /// Validates and normalizes; SchemaError on unknown commands or keys,
  /// missing required keys and wrongly typed values.
  static Manifest from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// fnv1a64 of the canonical dump.
  std::string hash() const;
};

Manifest load_manifest(const std::string& path);

struct RunOutcome {
  int exit_code = 0;
  size_t holds = 0, violated = 0, indeterminate = 0, errors = 0;
  std::vector<std::string> files;
  /// One line per notable event, for the console.
  std::vector<std::string> log;
};

/// Exit codes: 0 all holds / complete, 2 violations, 3 indeterminate left,
/// 4 error.
RunOutcome run(const Manifest& m);

/// Result file contents without the provenance header.
std::string strip_provenance(const std::string& file_text);

}  // namespace dioph
