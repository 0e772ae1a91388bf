#include "nsstat/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace nsstat {

namespace {

const Json& need(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(where + "." + key + ": missing field");
    return *it;
}

double need_number(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number()) throw std::invalid_argument(where + "." + key + ": expected a number");
    return v.get<double>();
}

int need_int(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_number_integer())
        throw std::invalid_argument(where + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string need_string(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_string()) throw std::invalid_argument(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

const Json& need_array(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = need(j, key, where);
    if (!v.is_array()) throw std::invalid_argument(where + "." + key + ": expected an array");
    return v;
}

double opt_number(const Json& j, const std::string& key, double fallback,
                  const std::string& where) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return need_number(j, key, where);
}

void allow_keys(const Json& j, std::initializer_list<const char*> keys,
                const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) throw std::invalid_argument(where + "." + item.key() + ": unknown field");
    }
}

}  // namespace

int ExperimentConfig::steps() const {
    return static_cast<int>(std::llround(interval.length() / dt));
}

VelocityField field_from_spec(const LatticePtr& lattice, const Json& spec,
                              const std::string& where) {
    std::string kind = need_string(spec, "kind", where);
    if (kind == "unit_mode") {
        allow_keys(spec, {"kind", "index", "polarization", "phase", "scale"}, where);
        int index = need_int(spec, "index", where);
        if (index < 0 || index >= lattice->mode_count())
            throw std::invalid_argument(where + ".index: mode index out of range, lattice has " +
                                        std::to_string(lattice->mode_count()) + " modes");
        int pol = need_int(spec, "polarization", where);
        if (pol != 0 && pol != 1)
            throw std::invalid_argument(where + ".polarization: must be 0 or 1");
        double phase = opt_number(spec, "phase", 0.0, where);
        double scale = opt_number(spec, "scale", 1.0, where);
        if (!std::isfinite(scale) || scale == 0.0)
            throw std::invalid_argument(where + ".scale: must be finite and nonzero");
        VelocityField u = unit_mode(lattice, index, pol, phase);
        if (scale != 1.0) u.scale(scale);
        return u;
    }
    if (kind == "abc") {
        allow_keys(spec, {"kind", "a", "b", "c", "scale"}, where);
        double a = need_number(spec, "a", where);
        double b = need_number(spec, "b", where);
        double c = need_number(spec, "c", where);
        double scale = opt_number(spec, "scale", 1.0, where);
        try {
            VelocityField u = abc_field(lattice, a, b, c);
            if (scale != 1.0) u.scale(scale);
            return u;
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    if (kind == "modes") {
        allow_keys(spec, {"kind", "modes"}, where);
        const Json& modes = need_array(spec, "modes", where);
        if (modes.empty()) throw std::invalid_argument(where + ".modes: no entries");
        std::vector<Vec3c> coeffs(lattice->mode_count(), Vec3c{});
        std::set<int> seen;
        for (size_t i = 0; i < modes.size(); ++i) {
            std::string entry = where + ".modes[" + std::to_string(i) + "]";
            allow_keys(modes[i], {"k", "c"}, entry);
            const Json& kj = need_array(modes[i], "k", entry);
            if (kj.size() != 3)
                throw std::invalid_argument(entry + ".k: expected three integers");
            std::array<int, 3> k{};
            for (int d = 0; d < 3; ++d) {
                if (!kj[d].is_number_integer())
                    throw std::invalid_argument(entry + ".k: expected three integers");
                k[d] = kj[d].get<int>();
            }
            int rep = lattice->rep_index(k);
            if (rep < 0)
                throw std::invalid_argument(entry + ".k: wavevector is outside the lattice");
            if (!WaveLattice::is_representative(k))
                throw std::invalid_argument(
                    entry + ".k: not the stored conjugate representative; negate the wavevector");
            if (!seen.insert(rep).second)
                throw std::invalid_argument(entry + ".k: duplicate wavevector");
            const Json& cj = need_array(modes[i], "c", entry);
            if (cj.size() != 6)
                throw std::invalid_argument(entry +
                                            ".c: expected six reals (re, im per component)");
            std::array<double, 6> flat{};
            for (int d = 0; d < 6; ++d) {
                if (!cj[d].is_number())
                    throw std::invalid_argument(entry + ".c: expected six reals");
                flat[d] = cj[d].get<double>();
            }
            for (int d = 0; d < 3; ++d)
                coeffs[rep][d] = Complex(flat[2 * d], flat[2 * d + 1]);
        }
        VelocityField u(lattice, std::move(coeffs));
        if (!u.finite()) throw std::invalid_argument(where + ".modes: non-finite coefficients");
        if (divergence_linf(u) > 1e-10 * (1.0 + coeff_linf(u)))
            throw std::invalid_argument(where +
                                        ".modes: field is not divergence-free; project the "
                                        "coefficients onto the plane normal to the wavevector");
        return u;
    }
    throw std::invalid_argument(where + ".kind: unknown field kind \"" + kind + "\"");
}

ForcingSignal forcing_from_spec(const LatticePtr& lattice, const Interval& interval,
                                const Json& spec, const std::string& where) {
    std::string kind = need_string(spec, "kind", where);
    if (kind == "zero") {
        allow_keys(spec, {"kind"}, where);
        return ForcingSignal::zero(lattice);
    }
    if (kind == "steady") {
        allow_keys(spec, {"kind", "field"}, where);
        return ForcingSignal::steady(
            field_from_spec(lattice, need(spec, "field", where), where + ".field"));
    }
    if (kind == "segments") {
        allow_keys(spec, {"kind", "segments"}, where);
        const Json& segs = need_array(spec, "segments", where);
        std::vector<ForcingSegment> parsed;
        parsed.reserve(segs.size());
        for (size_t i = 0; i < segs.size(); ++i) {
            std::string entry = where + ".segments[" + std::to_string(i) + "]";
            allow_keys(segs[i], {"t0", "t1", "field"}, entry);
            ForcingSegment seg;
            seg.t0 = need_number(segs[i], "t0", entry);
            seg.t1 = need_number(segs[i], "t1", entry);
            seg.field =
                field_from_spec(lattice, need(segs[i], "field", entry), entry + ".field");
            parsed.push_back(std::move(seg));
        }
        try {
            return make_forcing(std::move(parsed), interval);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    throw std::invalid_argument(where + ".kind: unknown forcing kind \"" + kind + "\"");
}

PhaseMeasure initial_measure_from_spec(const LatticePtr& lattice, const Json& spec,
                                       const std::string& where) {
    std::string kind = need_string(spec, "kind", where);
    if (kind == "atoms") {
        allow_keys(spec, {"kind", "atoms"}, where);
        const Json& atoms = need_array(spec, "atoms", where);
        if (atoms.empty()) throw std::invalid_argument(where + ".atoms: no entries");
        std::vector<VelocityField> fields;
        std::vector<double> weights;
        fields.reserve(atoms.size());
        weights.reserve(atoms.size());
        for (size_t i = 0; i < atoms.size(); ++i) {
            std::string entry = where + ".atoms[" + std::to_string(i) + "]";
            allow_keys(atoms[i], {"weight", "field"}, entry);
            weights.push_back(need_number(atoms[i], "weight", entry));
            fields.push_back(
                field_from_spec(lattice, need(atoms[i], "field", entry), entry + ".field"));
        }
        try {
            return make_phase_measure(std::move(fields), std::move(weights));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ".atoms: " + e.what());
        }
    }
    if (kind == "gaussian") {
        allow_keys(spec,
                   {"kind", "seed", "atom_count", "spectral_exponent", "variance_scale",
                    "radius_clamp"},
                   where);
        const Json& seed = need(spec, "seed", where);
        if (!seed.is_number_integer() || seed.get<double>() < 0)
            throw std::invalid_argument(where + ".seed: expected a nonnegative integer; "
                                        "sampling without a seed is not supported");
        SamplerSpec sampler;
        sampler.seed = seed.get<std::uint64_t>();
        sampler.atom_count = need_int(spec, "atom_count", where);
        sampler.spectral_exponent = opt_number(spec, "spectral_exponent", 2.0, where);
        sampler.variance_scale = opt_number(spec, "variance_scale", 1.0, where);
        sampler.radius_clamp = opt_number(spec, "radius_clamp", 0.0, where);
        try {
            sampler.validate();
            return sample_gaussian_measure(lattice, sampler);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    throw std::invalid_argument(where + ".kind: unknown initial-measure kind \"" + kind + "\"");
}

ExperimentConfig parse_config(const std::string& text) {
    Json j = parse_json(text, "config");
    allow_keys(j,
               {"box", "time", "forcing", "initial_measure", "ladder", "solver",
                "richardson_levels", "verify", "output"},
               "config");
    ExperimentConfig cfg;

    const Json& box = need(j, "box", "config");
    allow_keys(box, {"lengths", "cutoff", "viscosity"}, "config.box");
    const Json& lengths = need_array(box, "lengths", "config.box");
    if (lengths.size() != 3)
        throw std::invalid_argument("config.box.lengths: expected three box periods");
    for (int d = 0; d < 3; ++d) {
        if (!lengths[d].is_number())
            throw std::invalid_argument("config.box.lengths: expected three numbers");
        cfg.box.lengths[d] = lengths[d].get<double>();
    }
    cfg.box.cutoff = need_int(box, "cutoff", "config.box");
    cfg.box.viscosity = need_number(box, "viscosity", "config.box");
    try {
        cfg.box.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config.box: ") + e.what());
    }

    const Json& time = need(j, "time", "config");
    allow_keys(time, {"t0", "t1", "dt"}, "config.time");
    cfg.interval.t0 = need_number(time, "t0", "config.time");
    cfg.interval.t1 = need_number(time, "t1", "config.time");
    if (!(cfg.interval.t0 < cfg.interval.t1))
        throw std::invalid_argument("config.time.t1: must exceed t0");
    cfg.dt = need_number(time, "dt", "config.time");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("config.time.dt: must be positive");
    double length = cfg.interval.length();
    double steps = std::llround(length / cfg.dt);
    if (steps < 1.0 || std::abs(steps * cfg.dt - length) > 1e-9 * length)
        throw std::invalid_argument("config.time.dt: must divide the interval length t1 - t0");

    cfg.richardson_levels = 1;
    if (j.contains("richardson_levels")) {
        cfg.richardson_levels = need_int(j, "richardson_levels", "config");
        if (cfg.richardson_levels < 1 || cfg.richardson_levels > 6)
            throw std::invalid_argument("config.richardson_levels: must be between 1 and 6");
    }

    if (j.contains("solver")) {
        const Json& solver = need(j, "solver", "config");
        allow_keys(solver, {"nonlinear"}, "config.solver");
        std::string method = need_string(solver, "nonlinear", "config.solver");
        if (method == "convolution")
            cfg.method = NonlinearMethod::Convolution;
        else if (method == "pseudospectral")
            cfg.method = NonlinearMethod::Pseudospectral;
        else
            throw std::invalid_argument(
                "config.solver.nonlinear: expected \"convolution\" or \"pseudospectral\"");
    }

    if (j.contains("ladder")) {
        const Json& ladder = need_array(j, "ladder", "config");
        RadiiLadder parsed;
        for (size_t i = 0; i < ladder.size(); ++i) {
            if (!ladder[i].is_number())
                throw std::invalid_argument("config.ladder[" + std::to_string(i) +
                                            "]: expected a number");
            parsed.radii.push_back(ladder[i].get<double>());
        }
        try {
            parsed.validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("config.ladder: ") + e.what());
        }
        cfg.ladder = std::move(parsed);
    }

    if (j.contains("verify")) {
        const Json& verify = need(j, "verify", "config");
        allow_keys(verify, {"checks", "tol"}, "config.verify");
        const Json& checks = need_array(verify, "checks", "config.verify");
        for (size_t i = 0; i < checks.size(); ++i) {
            if (!checks[i].is_string())
                throw std::invalid_argument("config.verify.checks[" + std::to_string(i) +
                                            "]: expected a string");
            cfg.verify_checks.push_back(checks[i].get<std::string>());
        }
        cfg.verify_tol = opt_number(verify, "tol", 0.0, "config.verify");
        if (verify.contains("tol") && !(cfg.verify_tol > 0.0))
            throw std::invalid_argument("config.verify.tol: must be positive");
    }

    const Json& output = need(j, "output", "config");
    allow_keys(output, {"directory", "label"}, "config.output");
    cfg.output_directory = need_string(output, "directory", "config.output");
    if (cfg.output_directory.empty())
        throw std::invalid_argument("config.output.directory: must not be empty");
    cfg.label = output.contains("label") ? need_string(output, "label", "config.output") : "";

    // Resolve every generator once so deep violations surface at parse time
    // with their field paths; the run rebuilds from the retained specs.
    LatticePtr lattice = build_lattice(cfg.box);
    cfg.forcing_spec = need(j, "forcing", "config");
    forcing_from_spec(lattice, cfg.interval, cfg.forcing_spec, "config.forcing");
    cfg.measure_spec = need(j, "initial_measure", "config");
    initial_measure_from_spec(lattice, cfg.measure_spec, "config.initial_measure");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

}  // namespace nsstat
