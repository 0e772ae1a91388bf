#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsstat/io.hpp"
#include "nsstat/sampler.hpp"

namespace nsstat {

/// Schema-validated experiment description. All quantities are in the
/// nondimensional units of the equations: box periods fix the length unit,
/// viscosity carries length^2/time, and every time entry shares the time
/// unit. Generator specs (forcing, initial measure) stay as validated JSON
/// here and are resolved against the lattice by the builders below.
struct ExperimentConfig {
    BoxParams box;
    Interval interval;
    double dt = 0.0;
    int richardson_levels = 1;  ///< stored dt refinements: dt, dt/2, ...
    Json forcing_spec;
    Json measure_spec;
    std::optional<RadiiLadder> ladder;
    NonlinearMethod method = NonlinearMethod::Convolution;
    std::vector<std::string> verify_checks;  ///< default selection for cmd_verify
    double verify_tol = 0.0;                 ///< 0 means per-check defaults
    std::string output_directory;
    std::string label;

    /// Number of dt steps spanning the interval; exact by validation.
    int steps() const;
};

/// Parses and fully validates a config document, building every described
/// object once to surface deep errors early. Any violation throws an
/// invalid_argument whose message starts with the full field path, for
/// example "config.time.dt: must divide the interval length".
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Resolves a field generator spec: "unit_mode" (index, polarization,
/// optional phase and scale), "abc" (a, b, c, optional scale), or "modes"
/// (sparse list of lattice-representative wavevectors with six reals each).
VelocityField field_from_spec(const LatticePtr& lattice, const Json& spec,
                              const std::string& where);

/// Resolves a forcing spec: "zero", "steady" (one field), or "segments".
ForcingSignal forcing_from_spec(const LatticePtr& lattice, const Interval& interval,
                                const Json& spec, const std::string& where);

/// Resolves an initial-measure spec: "atoms" (explicit weighted fields) or
/// "gaussian" (the truncated-Gaussian sampler; seed mandatory).
PhaseMeasure initial_measure_from_spec(const LatticePtr& lattice, const Json& spec,
                                       const std::string& where);

}  // namespace nsstat
