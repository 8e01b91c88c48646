#pragma once

#include <string>

#include <json.hpp>

#include "absentia/scenario.hpp"

namespace absentia {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct RunOptions {
  std::string out_dir;  // empty: take from config
  std::optional<std::uint64_t> seed_override;
  bool dump_matrix = false;
};

/// Executes a command against a scenario and returns the full report.
/// Deterministic byte-for-byte for fixed config + seed + version, apart
/// from the isolated "timings" object.
nlohmann::ordered_json build_report(Command cmd, const ScenarioConfig& cfg,
                                    const RunOptions& opts);

/// Writes report.json plus the CSV tables the report carries; returns the
/// report path.
std::string write_outputs(const nlohmann::ordered_json& report,
                          const std::string& dir);

/// Plain-text summary (certificates and headline numbers) to the stream.
void print_summary(const nlohmann::ordered_json& report, std::ostream& os);

}  // namespace absentia
