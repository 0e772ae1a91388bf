#include "nsstat/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

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

std::vector<double> number_vector(const Json& arr, const std::string& where) {
    if (!arr.is_array()) throw std::invalid_argument(where + ": expected an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw std::invalid_argument(where + "[" + std::to_string(i) + "]: expected a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

Json lattice_to_json(const WaveLattice& lat) {
    return Json{{"lengths", lat.lengths()}, {"cutoff", lat.cutoff()}};
}

void check_lattice_descriptor(const WaveLattice& lat, const Json& j, const std::string& where) {
    const Json& lengths = need_array(j, "lengths", where);
    int cutoff = need_int(j, "cutoff", where);
    if (lengths.size() != 3)
        throw std::invalid_argument(where + ".lengths: expected three box periods");
    for (int d = 0; d < 3; ++d) {
        if (!lengths[d].is_number() || lengths[d].get<double>() != lat.lengths()[d])
            throw std::invalid_argument(where + ".lengths: lattice mismatch with the ambient box");
    }
    if (cutoff != lat.cutoff())
        throw std::invalid_argument(where + ".cutoff: lattice mismatch, file has " +
                                    std::to_string(cutoff) + ", ambient box has " +
                                    std::to_string(lat.cutoff()));
}

Json coeff_block(const VelocityField& u) {
    Json block = Json::array();
    for (int i = 0; i < u.mode_count(); ++i) {
        const Vec3c& c = u.mode(i);
        for (int d = 0; d < 3; ++d) {
            block.push_back(c[d].real());
            block.push_back(c[d].imag());
        }
    }
    return block;
}

std::vector<Vec3c> parse_coeff_block(const Json& block, int mode_count,
                                     const std::string& where) {
    if (!block.is_array() || static_cast<int>(block.size()) != 6 * mode_count)
        throw std::invalid_argument(where + ": expected " + std::to_string(6 * mode_count) +
                                    " coefficient entries");
    std::vector<double> flat = number_vector(block, where);
    std::vector<Vec3c> coeffs(mode_count);
    for (int i = 0; i < mode_count; ++i)
        for (int d = 0; d < 3; ++d)
            coeffs[i][d] = Complex(flat[6 * i + 2 * d], flat[6 * i + 2 * d + 1]);
    return coeffs;
}

void check_divergence(const VelocityField& u, const std::string& where) {
    if (divergence_linf(u) > 1e-10 * (1.0 + coeff_linf(u)))
        throw std::invalid_argument(where + ": field is not divergence-free");
}

TimeGrid grid_from_json(const Json& j, const std::string& where) {
    double t0 = need_number(j, "t0", where);
    double t1 = need_number(j, "t1", where);
    int steps = need_int(j, "steps", where);
    try {
        return TimeGrid(t0, t1, steps);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
}

Json grid_to_json(const TimeGrid& g) {
    return Json{{"t0", g.t0()}, {"t1", g.t1()}, {"steps", g.steps()}};
}

// Sentinel bounds used by ForcingSignal::steady; a steady signal round-trips
// through the "steady" kind so the sentinels never reach a file.
constexpr double kSteadyBound = 1e300;

}  // namespace

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("io: SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::runtime_error("io: failed reading " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& bytes) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw std::runtime_error("io: cannot create directory " + p.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) throw std::runtime_error("io: failed writing " + path);
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw std::runtime_error("io: double formatting failed");
    return std::string(buf.data(), p);
}

Json parse_json(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
}

Json field_to_json(const VelocityField& u) {
    const WaveLattice& lat = *u.lattice();
    Json modes = Json::array();
    for (int i = 0; i < lat.mode_count(); ++i) {
        const Vec3c& c = u.mode(i);
        modes.push_back(Json{{"k", lat.wavevector(i)},
                             {"c", {c[0].real(), c[0].imag(), c[1].real(), c[1].imag(),
                                    c[2].real(), c[2].imag()}}});
    }
    return Json{{"lattice", lattice_to_json(lat)}, {"modes", std::move(modes)}};
}

VelocityField field_from_json(const LatticePtr& lattice, const Json& j,
                              const std::string& where) {
    check_lattice_descriptor(*lattice, need(j, "lattice", where), where + ".lattice");
    const Json& modes = need_array(j, "modes", where);
    if (static_cast<int>(modes.size()) != lattice->mode_count())
        throw std::invalid_argument(where + ".modes: expected " +
                                    std::to_string(lattice->mode_count()) +
                                    " entries in lattice order");
    std::vector<Vec3c> coeffs(lattice->mode_count());
    for (int i = 0; i < lattice->mode_count(); ++i) {
        std::string entry = where + ".modes[" + std::to_string(i) + "]";
        const Json& k = need_array(modes[i], "k", entry);
        if (k.size() != 3 || k != Json(lattice->wavevector(i)))
            throw std::invalid_argument(entry + ".k: expected the lattice-order wavevector");
        const Json& c = need_array(modes[i], "c", entry);
        std::vector<double> flat = number_vector(c, entry + ".c");
        if (flat.size() != 6)
            throw std::invalid_argument(entry + ".c: expected six reals (re, im per component)");
        for (int d = 0; d < 3; ++d) coeffs[i][d] = Complex(flat[2 * d], flat[2 * d + 1]);
    }
    VelocityField u(lattice, std::move(coeffs));
    check_divergence(u, where);
    if (!u.finite()) throw std::invalid_argument(where + ": non-finite coefficients");
    return u;
}

Json forcing_to_json(const ForcingSignal& f) {
    if (f.is_zero()) return Json{{"kind", "zero"}};
    const auto& segs = f.segments();
    if (segs.size() == 1 && segs.front().t0 == -kSteadyBound && segs.front().t1 == kSteadyBound)
        return Json{{"kind", "steady"}, {"field", field_to_json(segs.front().field)}};
    Json out = Json::array();
    for (const auto& seg : segs)
        out.push_back(Json{{"t0", seg.t0}, {"t1", seg.t1}, {"field", field_to_json(seg.field)}});
    return Json{{"kind", "segments"}, {"segments", std::move(out)}};
}

ForcingSignal forcing_from_json(const LatticePtr& lattice, const Interval& interval,
                                const Json& j, const std::string& where) {
    std::string kind = need_string(j, "kind", where);
    if (kind == "zero") return ForcingSignal::zero(lattice);
    if (kind == "steady")
        return ForcingSignal::steady(field_from_json(lattice, need(j, "field", where),
                                                     where + ".field"));
    if (kind == "segments") {
        const Json& segs = need_array(j, "segments", where);
        std::vector<ForcingSegment> parsed;
        parsed.reserve(segs.size());
        for (size_t i = 0; i < segs.size(); ++i) {
            std::string entry = where + ".segments[" + std::to_string(i) + "]";
            ForcingSegment seg;
            seg.t0 = need_number(segs[i], "t0", entry);
            seg.t1 = need_number(segs[i], "t1", entry);
            seg.field = field_from_json(lattice, need(segs[i], "field", entry),
                                        entry + ".field");
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

Json trajectory_to_json(const Trajectory& traj) {
    Json nodes = Json::array();
    for (int i = 0; i < traj.node_count(); ++i) nodes.push_back(coeff_block(traj.state(i)));
    return Json{{"header", Json{{"lattice", lattice_to_json(*traj.lattice())},
                                {"nu", traj.meta().nu},
                                {"solver_id", traj.meta().solver_id},
                                {"grid", grid_to_json(traj.grid())}}},
                {"nodes", std::move(nodes)}};
}

Trajectory trajectory_from_json(const LatticePtr& lattice, const Json& j,
                                const std::string& where) {
    const Json& header = need(j, "header", where);
    check_lattice_descriptor(*lattice, need(header, "lattice", where + ".header"),
                             where + ".header.lattice");
    TimeGrid grid = grid_from_json(need(header, "grid", where + ".header"),
                                   where + ".header.grid");
    TrajectoryMeta meta;
    meta.nu = need_number(header, "nu", where + ".header");
    meta.solver_id = need_string(header, "solver_id", where + ".header");
    const Json& nodes = need_array(j, "nodes", where);
    if (static_cast<int>(nodes.size()) != grid.node_count())
        throw std::invalid_argument(where + ".nodes: expected " +
                                    std::to_string(grid.node_count()) + " coefficient blocks");
    std::vector<VelocityField> states;
    states.reserve(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        std::string entry = where + ".nodes[" + std::to_string(i) + "]";
        VelocityField u(lattice, parse_coeff_block(nodes[i], lattice->mode_count(), entry));
        check_divergence(u, entry);
        states.push_back(std::move(u));
    }
    try {
        return Trajectory(grid, std::move(states), std::move(meta));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
}

Json cyl_to_json(const CylindricalTestFunction& phi) {
    Json fields = Json::array();
    for (const auto& v : phi.fields()) fields.push_back(field_to_json(v));
    const QuadraticProfile& q = phi.profile();
    return Json{{"radii", phi.radii()},
                {"profile", Json{{"c0", q.c0}, {"lin", q.lin}, {"quad", q.quad}}},
                {"fields", std::move(fields)}};
}

CylindricalTestFunction cyl_from_json(const LatticePtr& lattice, const Json& j,
                                      const std::string& where) {
    std::vector<double> radii = number_vector(need_array(j, "radii", where), where + ".radii");
    const Json& prof = need(j, "profile", where);
    QuadraticProfile q;
    q.c0 = need_number(prof, "c0", where + ".profile");
    if (prof.contains("lin"))
        q.lin = number_vector(need_array(prof, "lin", where + ".profile"),
                              where + ".profile.lin");
    if (prof.contains("quad")) {
        const Json& rows = need_array(prof, "quad", where + ".profile");
        for (size_t r = 0; r < rows.size(); ++r)
            q.quad.push_back(number_vector(rows[r], where + ".profile.quad[" +
                                                        std::to_string(r) + "]"));
    }
    const Json& fields = need_array(j, "fields", where);
    std::vector<TestField> parsed;
    parsed.reserve(fields.size());
    for (size_t i = 0; i < fields.size(); ++i)
        parsed.push_back(field_from_json(lattice, fields[i],
                                         where + ".fields[" + std::to_string(i) + "]"));
    try {
        return CylindricalTestFunction(std::move(parsed), std::move(radii), std::move(q));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
}

Json measure_to_json(const MeasureFile& mf) {
    if (mf.levels.empty())
        throw std::invalid_argument("measure_to_json: no trajectory levels to serialize");
    Json levels = Json::array();
    for (const auto& level : mf.levels) {
        Json atoms = Json::array();
        for (const auto& traj : level.atoms()) atoms.push_back(trajectory_to_json(traj));
        levels.push_back(Json{{"grid", grid_to_json(level.grid())}, {"atoms", std::move(atoms)}});
    }
    Json verify = Json{{"checks", mf.default_checks}, {"tol", mf.default_tol}};
    return Json{{"format", "nsstat-measure"},
                {"version", 1},
                {"label", mf.label},
                {"box", Json{{"lengths", mf.box.lengths},
                             {"cutoff", mf.box.cutoff},
                             {"viscosity", mf.box.viscosity}}},
                {"interval", Json{{"t0", mf.interval.t0}, {"t1", mf.interval.t1}}},
                {"forcing", forcing_to_json(mf.forcing)},
                {"weights", mf.levels.front().weights()},
                {"verify", std::move(verify)},
                {"levels", std::move(levels)}};
}

MeasureFile measure_from_json(const Json& j, const std::string& where,
                              const std::string& base_dir) {
    if (need_string(j, "format", where) != "nsstat-measure")
        throw std::invalid_argument(where + ".format: not a measure file");
    MeasureFile mf;
    mf.label = j.contains("label") ? need_string(j, "label", where) : "";
    const Json& box = need(j, "box", where);
    std::vector<double> lengths = number_vector(need_array(box, "lengths", where + ".box"),
                                                where + ".box.lengths");
    if (lengths.size() != 3)
        throw std::invalid_argument(where + ".box.lengths: expected three box periods");
    mf.box.lengths = {lengths[0], lengths[1], lengths[2]};
    mf.box.cutoff = need_int(box, "cutoff", where + ".box");
    mf.box.viscosity = need_number(box, "viscosity", where + ".box");
    try {
        mf.box.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ".box: " + e.what());
    }
    LatticePtr lattice = build_lattice(mf.box);
    const Json& interval = need(j, "interval", where);
    mf.interval.t0 = need_number(interval, "t0", where + ".interval");
    mf.interval.t1 = need_number(interval, "t1", where + ".interval");
    try {
        mf.interval.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + ".interval: " + e.what());
    }
    mf.forcing = forcing_from_json(lattice, mf.interval, need(j, "forcing", where),
                                   where + ".forcing");
    std::vector<double> weights = number_vector(need_array(j, "weights", where),
                                                where + ".weights");
    if (j.contains("verify")) {
        const Json& verify = need(j, "verify", where);
        const Json& checks = need_array(verify, "checks", where + ".verify");
        for (size_t i = 0; i < checks.size(); ++i) {
            if (!checks[i].is_string())
                throw std::invalid_argument(where + ".verify.checks[" + std::to_string(i) +
                                            "]: expected a string");
            mf.default_checks.push_back(checks[i].get<std::string>());
        }
        mf.default_tol = need_number(verify, "tol", where + ".verify");
    }
    const Json& levels = need_array(j, "levels", where);
    if (levels.empty()) throw std::invalid_argument(where + ".levels: no trajectory levels");
    for (size_t l = 0; l < levels.size(); ++l) {
        std::string lw = where + ".levels[" + std::to_string(l) + "]";
        const Json& atoms = need_array(levels[l], "atoms", lw);
        std::vector<Trajectory> parsed;
        parsed.reserve(atoms.size());
        for (size_t a = 0; a < atoms.size(); ++a) {
            std::string aw = lw + ".atoms[" + std::to_string(a) + "]";
            const Json* record = &atoms[a];
            Json loaded;
            if (atoms[a].is_object() && atoms[a].contains("path")) {
                std::string rel = need_string(atoms[a], "path", aw);
                std::string full = (std::filesystem::path(base_dir) / rel).string();
                loaded = parse_json(read_text_file(full), full);
                record = &loaded;
            }
            parsed.push_back(trajectory_from_json(lattice, *record, aw));
            if (parsed.back().meta().nu != mf.box.viscosity)
                throw std::invalid_argument(aw + ".header.nu: does not match box.viscosity");
        }
        TimeGrid grid = grid_from_json(need(levels[l], "grid", lw), lw + ".grid");
        std::vector<double> level_weights = weights;
        TrajectoryMeasure level = [&] {
            try {
                return make_trajectory_measure(std::move(parsed), std::move(level_weights));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(lw + ": " + e.what());
            }
        }();
        if (!(level.grid() == grid))
            throw std::invalid_argument(lw + ".grid: does not match the atom grids");
        if (grid.t0() != mf.interval.t0 || grid.t1() != mf.interval.t1)
            throw std::invalid_argument(lw + ".grid: does not span the stated interval");
        int expected = mf.levels.empty() ? grid.steps()
                                         : mf.levels.front().grid().steps() << l;
        if (grid.steps() != expected)
            throw std::invalid_argument(lw + ".grid.steps: levels must halve dt, expected " +
                                        std::to_string(expected) + " steps");
        mf.levels.push_back(std::move(level));
    }
    return mf;
}

void save_measure(const std::string& path, const MeasureFile& mf) {
    write_text_file(path, dump_canonical(measure_to_json(mf)));
}

MeasureFile load_measure(const std::string& path) {
    Json j = parse_json(read_text_file(path), path);
    return measure_from_json(j, path, std::filesystem::path(path).parent_path().string());
}

Json report_to_json(const ReportFile& rf) {
    Json rows = Json::array();
    for (const auto& r : rf.report.rows) {
        rows.push_back(Json{{"check", r.equation},
                            {"t_prime", r.t_prime},
                            {"t", r.t},
                            {"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"defect", r.defect},
                            {"tol", r.tol},
                            {"passed", r.passed}});
    }
    Json residuals = Json::array();
    for (const auto& r : rf.residual_vs_dt)
        residuals.push_back(Json{{"dt", r.dt}, {"phi", r.phi}, {"residual", r.residual}});
    return Json{{"format", "nsstat-report"},
                {"version", 1},
                {"label", rf.label},
                {"passed", rf.report.all_passed()},
                {"rows", std::move(rows)},
                {"series", Json{{"t", rf.times},
                                {"mean_energy", rf.energy_series},
                                {"mean_enstrophy", rf.enstrophy_series}}},
                {"residual_vs_dt", std::move(residuals)},
                {"psi", Json{{"t", rf.psi_times}, {"weighted_psi", rf.psi_samples}}}};
}

ReportFile report_from_json(const Json& j, const std::string& where) {
    if (need_string(j, "format", where) != "nsstat-report")
        throw std::invalid_argument(where + ".format: not a report file");
    ReportFile rf;
    rf.label = j.contains("label") ? need_string(j, "label", where) : "";
    const Json& rows = need_array(j, "rows", where);
    for (size_t i = 0; i < rows.size(); ++i) {
        std::string rw = where + ".rows[" + std::to_string(i) + "]";
        InequalityReport r;
        r.equation = need_string(rows[i], "check", rw);
        r.t_prime = need_number(rows[i], "t_prime", rw);
        r.t = need_number(rows[i], "t", rw);
        r.lhs = need_number(rows[i], "lhs", rw);
        r.rhs = need_number(rows[i], "rhs", rw);
        r.defect = need_number(rows[i], "defect", rw);
        r.tol = need_number(rows[i], "tol", rw);
        const Json& passed = need(rows[i], "passed", rw);
        if (!passed.is_boolean()) throw std::invalid_argument(rw + ".passed: expected a bool");
        r.passed = passed.get<bool>();
        rf.report.rows.push_back(std::move(r));
    }
    const Json& series = need(j, "series", where);
    rf.times = number_vector(need_array(series, "t", where + ".series"), where + ".series.t");
    rf.energy_series = number_vector(need_array(series, "mean_energy", where + ".series"),
                                     where + ".series.mean_energy");
    rf.enstrophy_series = number_vector(need_array(series, "mean_enstrophy", where + ".series"),
                                        where + ".series.mean_enstrophy");
    if (rf.energy_series.size() != rf.times.size() ||
        rf.enstrophy_series.size() != rf.times.size())
        throw std::invalid_argument(where + ".series: column lengths differ");
    const Json& residuals = need_array(j, "residual_vs_dt", where);
    for (size_t i = 0; i < residuals.size(); ++i) {
        std::string rw = where + ".residual_vs_dt[" + std::to_string(i) + "]";
        ResidualRow r;
        r.dt = need_number(residuals[i], "dt", rw);
        r.phi = need_string(residuals[i], "phi", rw);
        r.residual = need_number(residuals[i], "residual", rw);
        rf.residual_vs_dt.push_back(std::move(r));
    }
    const Json& psi = need(j, "psi", where);
    rf.psi_times = number_vector(need_array(psi, "t", where + ".psi"), where + ".psi.t");
    rf.psi_samples = number_vector(need_array(psi, "weighted_psi", where + ".psi"),
                                   where + ".psi.weighted_psi");
    if (rf.psi_samples.size() != rf.psi_times.size())
        throw std::invalid_argument(where + ".psi: column lengths differ");
    return rf;
}

void save_report(const std::string& path, const ReportFile& rf) {
    write_text_file(path, dump_canonical(report_to_json(rf)));
}

ReportFile load_report(const std::string& path) {
    return report_from_json(parse_json(read_text_file(path), path), path);
}

std::string rows_csv(const StatReport& report) {
    std::string out = "check,t_prime,t,lhs,rhs,defect,tol,passed\n";
    for (const auto& r : report.rows) {
        out += r.equation + ',' + format_double(r.t_prime) + ',' + format_double(r.t) + ',' +
               format_double(r.lhs) + ',' + format_double(r.rhs) + ',' +
               format_double(r.defect) + ',' + format_double(r.tol) + ',' +
               (r.passed ? "true" : "false") + '\n';
    }
    return out;
}

std::string series_csv(const ReportFile& rf) {
    std::string out = "t,mean_energy,mean_enstrophy\n";
    for (size_t i = 0; i < rf.times.size(); ++i) {
        out += format_double(rf.times[i]) + ',' + format_double(rf.energy_series[i]) + ',' +
               format_double(rf.enstrophy_series[i]) + '\n';
    }
    return out;
}

std::string residual_csv(const ReportFile& rf) {
    std::string out = "dt,phi,residual\n";
    for (const auto& r : rf.residual_vs_dt)
        out += format_double(r.dt) + ',' + r.phi + ',' + format_double(r.residual) + '\n';
    return out;
}

std::string psi_csv(const ReportFile& rf) {
    std::string out = "t,weighted_psi\n";
    for (size_t i = 0; i < rf.psi_times.size(); ++i)
        out += format_double(rf.psi_times[i]) + ',' + format_double(rf.psi_samples[i]) + '\n';
    return out;
}

Json manifest_to_json(const RunManifest& m) {
    Json outputs = Json::array();
    for (const auto& e : m.outputs)
        outputs.push_back(Json{{"file", e.file}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    return Json{{"format", "nsstat-manifest"},
                {"version", 1},
                {"config_sha256", m.config_sha256},
                {"code_version", m.code_version},
                {"label", m.label},
                {"outputs", std::move(outputs)}};
}

RunManifest manifest_from_json(const Json& j, const std::string& where) {
    if (need_string(j, "format", where) != "nsstat-manifest")
        throw std::invalid_argument(where + ".format: not a manifest");
    RunManifest m;
    m.config_sha256 = need_string(j, "config_sha256", where);
    m.code_version = need_string(j, "code_version", where);
    m.label = j.contains("label") ? need_string(j, "label", where) : "";
    const Json& outputs = need_array(j, "outputs", where);
    for (size_t i = 0; i < outputs.size(); ++i) {
        std::string ow = where + ".outputs[" + std::to_string(i) + "]";
        ManifestEntry e;
        e.file = need_string(outputs[i], "file", ow);
        e.sha256 = need_string(outputs[i], "sha256", ow);
        e.bytes = static_cast<std::uint64_t>(need_number(outputs[i], "bytes", ow));
        m.outputs.push_back(std::move(e));
    }
    return m;
}

void save_manifest(const std::string& path, const RunManifest& m) {
    write_text_file(path, dump_canonical(manifest_to_json(m)));
}

RunManifest load_manifest(const std::string& path) {
    return manifest_from_json(parse_json(read_text_file(path), path), path);
}

}  // namespace nsstat
