#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nsstat {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// The verification batteries cmd_verify knows, in canonical report order.
const std::vector<std::string>& known_checks();

/// Splits a comma-separated list, trimming blanks and dropping empty tokens.
std::vector<std::string> split_csv(const std::string& text);

struct VerifyOptions {
    std::vector<std::string> checks;  ///< selection; see checks_given
    bool checks_given = false;  ///< --checks was present; an empty list is then a usage error
    std::optional<double> tol;  ///< overrides every per-check default tolerance
    std::string report_path;    ///< empty: report.json beside the measure file
};

/// Parses and validates the config, integrates the ensemble (one trajectory
/// level per requested dt refinement), and writes measure.json plus
/// manifest.json into the configured output directory. Identical config
/// bytes produce identical output bytes.
int cmd_run(const std::string& config_path);

/// Loads a measure file, runs the selected batteries, and writes the report
/// (also on failure). Exit 0 when every row passed, 1 when any failed.
int cmd_verify(const std::string& measure_path, const VerifyOptions& opts);

/// Renders the report's plot tables as CSV files or a single JSON file.
int cmd_report(const std::string& report_path, const std::string& format,
               const std::string& out_dir);

}  // namespace nsstat
