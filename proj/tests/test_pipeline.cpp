// Ensemble-pipeline tests: the construction round trip with and without
// annuli routing, Liouville residual convergence, mean energy inequalities
// with their Dirac reduction, right continuity at the initial time, carrier
// diagnostics with a synthetic jump witness, localization, and the
// convex-approximation table.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nsstat/pipeline.hpp"
#include "oracles.hpp"

using namespace nsstat;

namespace {

constexpr double kPi = oracle::kPi;

LatticePtr cube_lattice(int cutoff) {
    return build_lattice(BoxParams{{2.0 * kPi, 2.0 * kPi, 2.0 * kPi}, 0.1, cutoff});
}

bool same_coeffs(const VelocityField& a, const VelocityField& b) {
    if (a.mode_count() != b.mode_count()) return false;
    for (int i = 0; i < a.mode_count(); ++i)
        for (int d = 0; d < 3; ++d)
            if (a.coeffs()[i][d] != b.coeffs()[i][d]) return false;
    return true;
}

VelocityField scaled(VelocityField u, double s) {
    u.scale(s);
    return u;
}

VelocityField random_unit(const LatticePtr& lat, std::mt19937_64& rng, double norm = 1.0) {
    auto u = oracle::random_field(lat, rng);
    u.scale(norm / l2_norm(u));
    return u;
}

CylindricalTestFunction random_cyl(const LatticePtr& lat, std::mt19937_64& rng, int arity,
                                   double rho) {
    std::vector<TestField> fields;
    for (int j = 0; j < arity; ++j) fields.push_back(random_unit(lat, rng));
    QuadraticProfile q;
    q.c0 = 2.0 * oracle::uniform01(rng) - 1.0;
    q.lin.resize(arity);
    q.quad.assign(arity, std::vector<double>(arity));
    for (int i = 0; i < arity; ++i) {
        q.lin[i] = 2.0 * oracle::uniform01(rng) - 1.0;
        for (int j = 0; j < arity; ++j) q.quad[i][j] = 2.0 * oracle::uniform01(rng) - 1.0;
    }
    return CylindricalTestFunction(std::move(fields), std::vector<double>(arity, rho),
                                   std::move(q));
}

VFBuildConfig decay_config(const LatticePtr& lat, double t1, double dt, double nu) {
    return VFBuildConfig{Interval{0.0, t1}, dt, nu, ForcingSignal::zero(lat), {}, {}};
}

/// Forced 4-atom ensemble, |u0| = 1 per atom, |f| = 1/2.
TrajectoryMeasure forced_ensemble(const LatticePtr& lat, int steps, uint64_t seed,
                                  ForcingSignal* f_out = nullptr, double nu = 0.15) {
    std::mt19937_64 rng(seed);
    std::vector<VelocityField> atoms;
    for (int j = 0; j < 4; ++j) atoms.push_back(random_unit(lat, rng));
    auto mu0 = make_phase_measure(std::move(atoms), {0.25, 0.25, 0.25, 0.25});
    auto f = ForcingSignal::steady(random_unit(lat, rng, 0.5));
    if (f_out) *f_out = f;
    return construct_vf_measure(mu0,
                                VFBuildConfig{Interval{0.0, 1.0}, 1.0 / steps, nu, f, {}, {}});
}

}  // namespace

TEST_CASE("construct_vf_measure: Dirac atom rides the exact decay") {
    auto lat = cube_lattice(1);
    auto u0 = unit_mode(lat, 0, 0);
    const double nu = 0.4;
    auto mu0 = make_phase_measure({u0}, {1.0});
    auto rho = construct_vf_measure(mu0, decay_config(lat, 1.0, 0.01, nu));

    CHECK(rho.size() == 1);
    CHECK(rho.weight(0) == 1.0);
    const double lambda = lat->lambda_min();
    for (int i = 0; i <= 100; i += 20) {
        auto expected = u0;
        expected.scale(std::exp(-nu * lambda * rho.grid().node(i)));
        auto diff = rho.atom(0).state(i);
        diff.add_scaled(expected, -1.0);
        CHECK(l2_norm(diff) <= 1e-12);
    }
}

TEST_CASE("construct_vf_measure: projection at t0 returns the initial measure verbatim") {
    auto lat = cube_lattice(2);
    std::mt19937_64 rng(71);
    auto a = random_unit(lat, rng);
    auto b = random_unit(lat, rng, 0.6);
    auto mu0 = make_phase_measure({a, b}, {0.3, 0.7 + 1e-10});
    auto rho = construct_vf_measure(mu0, decay_config(lat, 0.5, 0.05, 0.2));

    auto back = project_at(rho, 0.0);
    REQUIRE(back.size() == mu0.size());
    for (int j = 0; j < mu0.size(); ++j) {
        CHECK(back.weight(j) == mu0.weight(j));
        CHECK(same_coeffs(back.atom(j), mu0.atom(j)));
    }
}

TEST_CASE("construct_vf_measure: annuli routing preserves order, weights, and dynamics") {
    auto lat = cube_lattice(1);
    std::mt19937_64 rng(73);
    std::vector<VelocityField> atoms{random_unit(lat, rng, 2.5), random_unit(lat, rng, 0.5),
                                     random_unit(lat, rng, 1.5)};
    auto mu0 = make_phase_measure(std::move(atoms), {0.2, 0.5, 0.3});

    auto plain_cfg = decay_config(lat, 0.5, 0.05, 0.2);
    auto routed_cfg = plain_cfg;
    routed_cfg.ladder = RadiiLadder{{1.0, 2.0, 3.0}};
    auto plain = construct_vf_measure(mu0, plain_cfg);
    auto routed = construct_vf_measure(mu0, routed_cfg);

    auto back = project_at(routed, 0.0);
    for (int j = 0; j < mu0.size(); ++j) {
        CHECK(back.weight(j) == mu0.weight(j));
        CHECK(same_coeffs(back.atom(j), mu0.atom(j)));
        CHECK(same_coeffs(routed.atom(j).state(10), plain.atom(j).state(10)));
    }

    // Ladder must cover every atom and clear the absorbing radius.
    auto short_cfg = plain_cfg;
    short_cfg.ladder = RadiiLadder{{1.0, 2.0}};
    CHECK_THROWS_AS(construct_vf_measure(mu0, short_cfg), std::invalid_argument);

    auto forced_cfg = routed_cfg;
    forced_cfg.nu = 0.1;
    forced_cfg.forcing = ForcingSignal::steady(unit_mode(lat, 0, 0));  // R0 = 10
    CHECK_THROWS_AS(construct_vf_measure(mu0, forced_cfg), std::invalid_argument);
}

TEST_CASE("construct_vf_measure: integration failure names the atom") {
    auto lat = cube_lattice(1);
    std::mt19937_64 rng(79);
    auto calm = random_unit(lat, rng);
    auto wild = random_unit(lat, rng, 1e8);
    auto mu0 = make_phase_measure({calm, wild}, {0.5, 0.5});
    auto cfg = decay_config(lat, 4.0, 1.0, 1e-6);
    try {
        construct_vf_measure(mu0, cfg);
        FAIL("expected a runtime_error");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find("atom 1") != std::string::npos);
        CHECK(what.find("non-finite") != std::string::npos);
    }
}

TEST_CASE("construct_vf_measure: atoms seeded on the absorbing sphere stay inside it") {
    auto lat = cube_lattice(1);
    const double nu = 0.2, r0 = 1.0;
    auto f = ForcingSignal::steady(scaled(unit_mode(lat, 0, 0, 0.3), nu * lat->lambda_min() * r0));

    std::mt19937_64 rng(83);
    std::vector<VelocityField> atoms;
    for (int j = 0; j < 4; ++j) atoms.push_back(random_unit(lat, rng, r0));
    auto mu0 = make_phase_measure(std::move(atoms), {0.25, 0.25, 0.25, 0.25});
    auto rho =
        construct_vf_measure(mu0, VFBuildConfig{Interval{0.0, 2.0}, 0.05, nu, f, {}, {}});

    auto rep = localization_check(rho, r0 * (1.0 + 1e-6), {0.0, 1.0, 2.0});
    CHECK(rep.passed);
    CHECK(rep.full_sweep_passed);
}

TEST_CASE("liouville residual: exact single-mode decay integrates the profile flux") {
    auto lat = cube_lattice(1);
    auto u0 = unit_mode(lat, 0, 0);
    const double nu = 0.5;
    QuadraticProfile q;
    q.c0 = 0.4;
    q.lin = {1.2};
    q.quad = {{0.7}};
    CylindricalTestFunction phi({u0}, {2.0}, q);
    auto f = ForcingSignal::zero(lat);

    auto residual_at = [&](double dt) {
        auto mu0 = make_phase_measure({u0}, {1.0});
        auto rho = construct_vf_measure(mu0, decay_config(lat, 1.0, dt, nu));
        return liouville_residual(rho, phi, 0.0, 1.0, nu, f);
    };

    CHECK(residual_at(2.5e-4) <= 1e-8);

    const double r1 = residual_at(0.02);
    const double r2 = residual_at(0.01);
    const double r3 = residual_at(0.005);
    CHECK(r1 / r2 >= 3.4);
    CHECK(r2 / r3 >= 3.4);
}

TEST_CASE("liouville residual: profile support disjoint from the ensemble gives exact zero") {
    auto lat = cube_lattice(1);
    auto u0 = unit_mode(lat, 0, 0);
    QuadraticProfile q;
    q.c0 = 1.0;
    CylindricalTestFunction phi({u0}, {0.01}, q);  // support |x| < 0.01, coordinate stays ~1

    auto mu0 = make_phase_measure({u0}, {1.0});
    auto rho = construct_vf_measure(mu0, decay_config(lat, 0.2, 0.01, 0.1));
    CHECK(liouville_residual(rho, phi, 0.0, 0.2, 0.1, ForcingSignal::zero(lat)) == 0.0);
}

TEST_CASE("liouville residual: forced ensemble self-converges at second order") {
    auto lat = cube_lattice(1);
    ForcingSignal f = ForcingSignal::zero(lat);
    std::mt19937_64 rng(89);
    auto phi = random_cyl(lat, rng, 2, 3.0);

    std::vector<double> residuals;
    for (int steps : {40, 80, 160}) {
        auto rho = forced_ensemble(lat, steps, 97, &f);
        residuals.push_back(liouville_residual(rho, phi, 0.0, 1.0, 0.15, f));
    }
    CHECK(residuals[0] / residuals[1] >= 3.4);
    CHECK(residuals[1] / residuals[2] >= 3.4);
    CHECK(residuals[2] <= 1e-6);
}

TEST_CASE("liouville residual: contract violations") {
    auto lat = cube_lattice(1);
    ForcingSignal f = ForcingSignal::zero(lat);
    auto rho = forced_ensemble(lat, 10, 101, &f);
    std::mt19937_64 rng(103);
    auto phi = random_cyl(lat, rng, 1, 2.0);

    CHECK_THROWS_AS(liouville_residual(rho, phi, 0.0, 0.55, 0.15, f), std::invalid_argument);
    CHECK_THROWS_AS(liouville_residual(rho, phi, 0.5, 0.5, 0.15, f), std::invalid_argument);
    CHECK_THROWS_AS(liouville_residual(rho, phi, 0.0, 1.0, 0.0, f), std::invalid_argument);

    auto wide_phi = random_cyl(cube_lattice(2), rng, 1, 2.0);
    CHECK_THROWS_AS(liouville_residual(rho, wide_phi, 0.0, 1.0, 0.15, f),
                    std::invalid_argument);
}

TEST_CASE("mean energy inequality: Dirac ensemble reduces to the per-atom check") {
    auto lat = cube_lattice(2);
    ForcingSignal f = ForcingSignal::zero(lat);
    std::mt19937_64 rng(107);
    auto u0 = random_unit(lat, rng);
    auto fv = random_unit(lat, rng, 0.5);
    f = ForcingSignal::steady(fv);
    const double nu = 0.15;
    auto traj = integrate(u0, Interval{0.0, 1.0}, 0.01, nu, f);
    auto rho = make_trajectory_measure({traj}, {1.0});

    for (const auto& psi : standard_psi_family())
        for (auto [s, t] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.2, 0.7}}) {
            auto ens = mean_energy_inequality(rho, psi, s, t, nu, f, 1e-6);
            auto ref = strengthened_energy_inequality(traj, psi, s, t, nu, f, 1e-6);
            CHECK(ens.lhs == ref.lhs);
            CHECK(ens.rhs == ref.rhs);
            CHECK(ens.defect == ref.defect);
        }
}

TEST_CASE("mean energy inequality: two-atom exact decay has only quadrature defect") {
    auto lat = cube_lattice(1);
    auto cfg = decay_config(lat, 1.0, 5e-4, 0.1);
    auto mu0 = make_phase_measure({unit_mode(lat, 0, 0), unit_mode(lat, 1, 0)}, {0.5, 0.5});
    auto rho = construct_vf_measure(mu0, cfg);

    auto rep = mean_energy_inequality(rho, PsiFunction::linear(), 0.0, 1.0, 0.1,
                                      cfg.forcing, 1e-10);
    CHECK(rep.passed);
    CHECK(std::abs(rep.defect) <= 1e-10);
}

TEST_CASE("mean energy inequality: reports are affine in the weights") {
    auto lat = cube_lattice(1);
    ForcingSignal f = ForcingSignal::zero(lat);
    std::mt19937_64 rng(109);
    auto a = integrate(random_unit(lat, rng), Interval{0.0, 1.0}, 0.02, 0.15, f);
    auto b = integrate(random_unit(lat, rng), Interval{0.0, 1.0}, 0.02, 0.15, f);

    auto pair = make_trajectory_measure({a, b}, {0.3, 0.7});
    auto da = make_trajectory_measure({a}, {1.0});
    auto db = make_trajectory_measure({b}, {1.0});

    auto psi = PsiFunction::saturating(1.0);
    auto rep = mean_energy_inequality(pair, psi, 0.0, 1.0, 0.15, f, 1e-6);
    auto ra = mean_energy_inequality(da, psi, 0.0, 1.0, 0.15, f, 1e-6);
    auto rb = mean_energy_inequality(db, psi, 0.0, 1.0, 0.15, f, 1e-6);
    CHECK(rep.lhs == doctest::Approx(0.3 * ra.lhs + 0.7 * rb.lhs).epsilon(1e-13));
    CHECK(rep.rhs == doctest::Approx(0.3 * ra.rhs + 0.7 * rb.rhs).epsilon(1e-13));
}

TEST_CASE("mean energy inequality: calibrated all-pairs sweep stays above -tol") {
    auto lat = cube_lattice(2);
    ForcingSignal f = ForcingSignal::zero(lat);
    const double nu = 0.15;

    auto defect_at = [&](int steps) {
        auto rho = forced_ensemble(lat, steps, 113, &f, nu);
        return mean_energy_inequality(rho, PsiFunction::linear(), 0.0, 1.0, nu, f, 1.0).defect;
    };
    const double c = richardson_constant(defect_at(25), 1.0 / 25, defect_at(50), 1.0 / 50);

    const int steps = 50;
    const double tol = 10.0 * c / (steps * double(steps));
    auto rho = forced_ensemble(lat, steps, 113, &f, nu);
    auto series = make_ensemble_series(rho, f);
    for (const auto& psi : standard_psi_family())
        for (int is = 0; is < steps; is += 7)
            for (int it = is + 1; it <= steps; it += 7) {
                auto rep = mean_energy_inequality(series, psi, rho.grid().node(is),
                                                  rho.grid().node(it), nu, tol);
                CHECK(rep.defect >= -tol);
            }
}

TEST_CASE("initial continuity: steady ensemble has zero gaps, decay ensemble fits to zero") {
    auto lat = cube_lattice(1);
    const double nu = 0.2, r0 = 1.0;
    auto fixed = unit_mode(lat, 0, 0);
    auto f = ForcingSignal::steady(scaled(fixed, nu * lat->lambda_min() * r0));
    auto steady_mu = make_phase_measure({fixed}, {1.0});
    auto steady = construct_vf_measure(
        steady_mu, VFBuildConfig{Interval{0.0, 1.0}, 0.01, nu, f, {}, {}});

    for (const auto& psi : standard_psi_family()) {
        auto rep = initial_continuity(steady, psi, 0.0, 0.32, 1e-12);
        CHECK(rep.passed);
        for (double g : rep.gaps) CHECK(g <= 1e-12);
    }

    auto mu0 = make_phase_measure({unit_mode(lat, 0, 0), unit_mode(lat, 3, 0)}, {0.5, 0.5});
    auto decay = construct_vf_measure(mu0, decay_config(lat, 1.0, 0.01, 0.1));
    auto rep = initial_continuity(decay, PsiFunction::linear(), 0.0, 0.16, 1e-3);
    CHECK(rep.passed);
    CHECK(std::abs(rep.limit) <= 1e-3);
    for (std::size_t k = 1; k < rep.gaps.size(); ++k) CHECK(rep.gaps[k] <= rep.gaps[k - 1]);

    CHECK_THROWS_AS(initial_continuity(decay, PsiFunction::linear(), 0.0, 0.03, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(initial_continuity(decay, PsiFunction::linear(), 0.005, 0.16, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("mean energy bound: decay margins grow, fixed point tracks the forcing term") {
    auto lat = cube_lattice(1);
    auto mu0 = make_phase_measure({unit_mode(lat, 0, 0), unit_mode(lat, 3, 0)}, {0.5, 0.5});
    auto decay = construct_vf_measure(mu0, decay_config(lat, 1.0, 0.02, 0.3));
    auto rows = mean_energy_bound(decay, 0.3, lat->lambda_min(), ForcingSignal::zero(lat), 0.0);
    REQUIRE(rows.size() == static_cast<std::size_t>(decay.grid().node_count()));
    CHECK(rows[0].defect == 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].passed);
        if (i > 0) CHECK(rows[i].defect >= rows[i - 1].defect);
    }

    const double nu = 0.2, r0 = 1.0, lambda1 = lat->lambda_min();
    auto fixed = unit_mode(lat, 0, 0);
    auto f = ForcingSignal::steady(scaled(fixed, nu * lambda1 * r0));
    auto steady = construct_vf_measure(make_phase_measure({fixed}, {1.0}),
                                       VFBuildConfig{Interval{0.0, 1.0}, 0.01, nu, f, {}, {}});
    auto steady_rows = mean_energy_bound(steady, nu, lambda1, f, 1e-12);
    const double fnorm = nu * lambda1 * r0;
    for (const auto& row : steady_rows) {
        CHECK(row.passed);
        const double span = row.t - row.t_prime;
        CHECK(row.defect ==
              doctest::Approx(fnorm * fnorm * span / (nu * lambda1)).epsilon(1e-9));
    }

    ForcingSignal rf = ForcingSignal::zero(cube_lattice(2));
    auto random = forced_ensemble(cube_lattice(2), 100, 127, &rf);
    for (const auto& row : mean_energy_bound(random, 0.15, lat->lambda_min(), rf, 1e-12))
        CHECK(row.passed);
}

TEST_CASE("inject_jump: energy offset after the initial node, flagged non-physical") {
    auto lat = cube_lattice(1);
    auto traj = integrate(unit_mode(lat, 0, 0), Interval{0.0, 0.5}, 0.01, 0.1,
                          ForcingSignal::zero(lat));
    const double jump = 0.5;
    auto tampered = inject_jump(traj, jump);

    CHECK(tampered.meta().solver_id.rfind("tampered:jump", 0) == 0);
    CHECK(same_coeffs(tampered.state(0), traj.state(0)));
    for (int i = 1; i < traj.node_count(); i += 10)
        CHECK(l2_norm_sq(tampered.state(i)) ==
              doctest::Approx(l2_norm_sq(traj.state(i)) + jump).epsilon(1e-12));

    CHECK_THROWS_AS(inject_jump(traj, 0.0), std::invalid_argument);
}

TEST_CASE("carrier check: smooth ensembles pass, one jump atom trips the verdict") {
    auto lat = cube_lattice(1);
    const double nu = 0.01;
    std::mt19937_64 rng(131);
    std::vector<Trajectory> atoms;
    for (int j = 0; j < 4; ++j)
        atoms.push_back(integrate(random_unit(lat, rng), Interval{0.0, 0.1}, 1.0 / 1000, nu,
                                  ForcingSignal::zero(lat)));
    const std::vector<double> times{0.064, 0.032, 0.016, 0.008};
    const double tol = 0.01;

    auto clean = make_trajectory_measure({atoms[0], atoms[1], atoms[2], atoms[3]},
                                         {0.25, 0.25, 0.25, 0.25});
    auto rep = carrier_check(clean, times, tol);
    CHECK(rep.passed);
    CHECK(!rep.tampered);
    CHECK(std::abs(rep.weighted_limit) <= tol);

    const double jump = 0.5, theta = 0.25;
    auto spoiled = make_trajectory_measure(
        {inject_jump(atoms[0], jump), atoms[1], atoms[2], atoms[3]}, {theta, 0.25, 0.25, 0.25});
    auto bad = carrier_check(spoiled, times, tol);
    CHECK(!bad.passed);
    CHECK(bad.tampered);
    CHECK(!bad.atoms[0].consistent);
    CHECK(bad.atoms[1].consistent);
    CHECK(bad.weighted_psi[0] == doctest::Approx(theta * jump).epsilon(0.1));
}

TEST_CASE("carrier check: constant trajectory ensemble is all zeros") {
    auto lat = cube_lattice(1);
    const double nu = 0.2, lambda1 = lat->lambda_min();
    auto fixed = unit_mode(lat, 0, 0);
    auto f = ForcingSignal::steady(scaled(fixed, nu * lambda1));
    auto rho = construct_vf_measure(make_phase_measure({fixed}, {1.0}),
                                    VFBuildConfig{Interval{0.0, 1.0}, 0.01, nu, f, {}, {}});
    auto rep = carrier_check(rho, {0.64, 0.32, 0.16}, 1e-10);
    CHECK(rep.passed);
    for (double w : rep.weighted_psi) CHECK(std::abs(w) <= 1e-13);
}

TEST_CASE("localization check: sampled verdict matches the all-node sweep") {
    auto lat = cube_lattice(1);
    std::mt19937_64 rng(137);
    std::vector<VelocityField> atoms{random_unit(lat, rng, 0.8), random_unit(lat, rng, 1.2)};
    auto mu0 = make_phase_measure(std::move(atoms), {0.5, 0.5});
    auto rho = construct_vf_measure(mu0, decay_config(lat, 1.0, 0.02, 0.2));

    auto pass = localization_check(rho, 1.2, {0.0, 0.5, 1.0});
    CHECK(pass.passed);
    CHECK(pass.full_sweep_passed);
    CHECK(pass.atom == -1);

    auto fail = localization_check(rho, 1.0, {0.0, 0.5, 1.0});
    CHECK(!fail.passed);
    CHECK(!fail.full_sweep_passed);
    CHECK(fail.atom == 1);
    CHECK(fail.time == 0.0);
    CHECK(fail.norm == doctest::Approx(1.2).epsilon(1e-12));

    for (int trial = 0; trial < 10; ++trial) {
        std::vector<VelocityField> pair{random_unit(lat, rng, 0.5 + oracle::uniform01(rng)),
                                        random_unit(lat, rng, 0.5 + oracle::uniform01(rng))};
        auto m = make_phase_measure(std::move(pair), {0.5, 0.5});
        auto r = construct_vf_measure(m, decay_config(lat, 0.5, 0.05, 0.2));
        const double radius = 0.5 + 1.2 * oracle::uniform01(rng);
        auto rep = localization_check(r, radius, {0.0, 0.25, 0.5});
        CHECK(rep.passed == rep.full_sweep_passed);
    }

    CHECK_THROWS_AS(localization_check(rho, 0.0, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(localization_check(rho, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(localization_check(rho, 1.0, {0.013}), std::invalid_argument);
}

TEST_CASE("convex approximation: repeated target is zero, prefix subsamples close the gap") {
    auto lat = cube_lattice(1);
    ForcingSignal f = ForcingSignal::zero(lat);
    std::mt19937_64 rng(104);
    std::vector<Trajectory> atoms;
    for (int j = 0; j < 8; ++j)
        atoms.push_back(integrate(random_unit(lat, rng), Interval{0.0, 0.5}, 0.025, 0.15, f));
    auto target = make_trajectory_measure(atoms, std::vector<double>(8, 0.125));

    std::vector<CylindricalTestFunction> family;
    for (int i = 0; i < 3; ++i) family.push_back(random_cyl(lat, rng, 2, 3.0));
    const Interval window{0.1, 0.4};

    auto same = convex_approx_diagnostic({target, target}, target, family, window);
    for (double g : same.sup_gap) CHECK(g == 0.0);

    std::vector<TrajectoryMeasure> sequence;
    for (int n : {2, 4, 8}) {
        std::vector<Trajectory> prefix(atoms.begin(), atoms.begin() + n);
        sequence.push_back(make_trajectory_measure(std::move(prefix),
                                                   std::vector<double>(n, 1.0 / n)));
    }
    auto table = convex_approx_diagnostic(sequence, target, family, window);
    REQUIRE(table.sup_gap.size() == 3);
    CHECK(table.sup_gap[0] > 0.0);
    CHECK(table.sup_gap[1] <= table.sup_gap[0]);
    CHECK(table.sup_gap[2] <= table.sup_gap[1]);
    CHECK(table.sup_gap[2] == 0.0);
    for (const auto& row : table.gaps) CHECK(row.size() == family.size());

    auto other_grid = make_trajectory_measure(
        {integrate(random_unit(lat, rng), Interval{0.0, 0.5}, 0.05, 0.15, f)}, {1.0});
    CHECK_THROWS_AS(convex_approx_diagnostic({other_grid}, target, family, window),
                    std::invalid_argument);
    CHECK_THROWS_AS(convex_approx_diagnostic(sequence, target, {}, window),
                    std::invalid_argument);
    CHECK_THROWS_AS(convex_approx_diagnostic(sequence, target, family, Interval{0.1, 0.13}),
                    std::invalid_argument);
}

TEST_CASE("stat report: verdict aggregates row outcomes") {
    StatReport rep;
    CHECK(rep.all_passed());
    InequalityReport ok;
    ok.equation = "energy";
    ok.passed = true;
    rep.rows.push_back(ok);
    CHECK(rep.all_passed());
    InequalityReport bad = ok;
    bad.passed = false;
    rep.rows.push_back(bad);
    CHECK(!rep.all_passed());
}
