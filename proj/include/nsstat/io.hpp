#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsstat/checks.hpp"
#include "nsstat/cylinder.hpp"
#include "nsstat/measure.hpp"
#include "nsstat/pipeline.hpp"

namespace nsstat {

using Json = nlohmann::json;

/// Version string stamped into manifests and reports.
inline constexpr const char* kCodeVersion = "0.1.0";

/// Canonical text for every artifact this toolkit writes: sorted object
/// keys, two-space indent, shortest round-trip doubles, trailing newline.
/// Identical values therefore serialize to identical bytes.
std::string dump_canonical(const Json& j);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Reads a whole file; a missing or unreadable path is a runtime error.
std::string read_text_file(const std::string& path);

/// Writes bytes, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& bytes);

/// Shortest decimal text that parses back to exactly the same double; used
/// for every number in CSV output.
std::string format_double(double x);

/// Field record: {"lattice": {"lengths", "cutoff"}, "modes": [{"k", "c"}]}.
/// Every stored representative appears exactly once in lattice order; "c"
/// holds the three complex components as six reals (re, im per component).
Json field_to_json(const VelocityField& u);

/// Parses a field record and checks it against the ambient lattice; `where`
/// prefixes every complaint.
VelocityField field_from_json(const LatticePtr& lattice, const Json& j, const std::string& where);

/// Forcing record: {"kind": "zero"} or {"kind": "segments", "segments":
/// [{"t0", "t1", "field"}]}. A steady signal round-trips as one segment.
Json forcing_to_json(const ForcingSignal& f);
ForcingSignal forcing_from_json(const LatticePtr& lattice, const Interval& interval,
                                const Json& j, const std::string& where);

/// Trajectory record: a header (lattice, nu, grid, solver id) plus one
/// coefficient block per node; blocks list six reals per mode in the
/// header's lattice order, so wavevectors are not repeated per node.
Json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const LatticePtr& lattice, const Json& j,
                                const std::string& where);

/// Test-function record: {"radii", "profile": {"c0", "lin", "quad"},
/// "fields": [field records]}.
Json cyl_to_json(const CylindricalTestFunction& phi);
CylindricalTestFunction cyl_from_json(const LatticePtr& lattice, const Json& j,
                                      const std::string& where);

/// A trajectory measure persisted with everything verification needs: the
/// box, the forcing, shared atom weights, and one trajectory level per dt
/// refinement (level l re-integrates the same atoms at dt / 2^l).
struct MeasureFile {
    BoxParams box;
    Interval interval;
    ForcingSignal forcing;
    std::vector<TrajectoryMeasure> levels;
    std::vector<std::string> default_checks;  ///< verify's selection when --checks is absent
    double default_tol = 0.0;                 ///< 0 means "use per-check defaults"
    std::string label;
};

/// Measure record: {"weights", "levels"} plus the header fields above. Atom
/// entries are inline trajectory records or {"path": relative file} refs;
/// save_measure always writes inline, load resolves refs against the
/// measure file's directory.
Json measure_to_json(const MeasureFile& mf);
MeasureFile measure_from_json(const Json& j, const std::string& where,
                              const std::string& base_dir);
void save_measure(const std::string& path, const MeasureFile& mf);
MeasureFile load_measure(const std::string& path);

/// One row of the Liouville residual-vs-dt table.
struct ResidualRow {
    double dt = 0.0;
    std::string phi;
    double residual = 0.0;
};

/// Verification output: the row bundle plus the plot tables cmd_report
/// renders (mean energy and enstrophy per node, residual vs dt, weighted
/// Psi samples).
struct ReportFile {
    StatReport report;
    std::vector<double> times;
    std::vector<double> energy_series;
    std::vector<double> enstrophy_series;
    std::vector<ResidualRow> residual_vs_dt;
    std::vector<double> psi_times;
    std::vector<double> psi_samples;
    std::string label;
};

Json report_to_json(const ReportFile& rf);
ReportFile report_from_json(const Json& j, const std::string& where);
void save_report(const std::string& path, const ReportFile& rf);
ReportFile load_report(const std::string& path);

/// CSV renderings of the report tables; every number round-trips exactly.
std::string rows_csv(const StatReport& report);
std::string series_csv(const ReportFile& rf);
std::string residual_csv(const ReportFile& rf);
std::string psi_csv(const ReportFile& rf);

struct ManifestEntry {
    std::string file;  ///< path relative to the manifest
    std::string sha256;
    std::uint64_t bytes = 0;
};

/// Run provenance: the config digest, the code version, and the inventory
/// of produced files. Deliberately free of wall-clock data so a rerun of
/// the same config reproduces the manifest byte for byte.
struct RunManifest {
    std::string config_sha256;
    std::string code_version = kCodeVersion;
    std::string label;
    std::vector<ManifestEntry> outputs;
};

Json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j, const std::string& where);
void save_manifest(const std::string& path, const RunManifest& m);
RunManifest load_manifest(const std::string& path);

/// Parses text as JSON; a syntax error is an invalid_argument carrying
/// `where` and the parser's diagnosis.
Json parse_json(const std::string& text, const std::string& where);

}  // namespace nsstat
