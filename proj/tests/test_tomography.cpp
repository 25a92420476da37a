#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phasebench/tomography.hpp"

using namespace phasebench;

TEST_CASE("tomography setting lists") {
    const auto minimal = tomography_settings_list(BasisSet::Minimal16);
    CHECK(minimal.size() == 16);
    const auto full = tomography_settings_list(BasisSet::Overcomplete36);
    CHECK(full.size() == 36);
    for (const auto& [s, i] : full) {
        CHECK(std::abs(analyzer_projector(s).norm2() - 1.0) < 1e-12);
        CHECK(std::abs(analyzer_projector(i).norm2() - 1.0) < 1e-12);
    }
    // The diagonal/anti-diagonal pair back-propagates to the right states.
    const bool has_da = std::any_of(full.begin(), full.end(), [](const SettingPair& p) {
        return p.first.label == Basis::D && p.second.label == Basis::A &&
               std::norm(inner(analyzer_projector(p.first), basis_d())) > 1.0 - 1e-12 &&
               std::norm(inner(analyzer_projector(p.second), basis_a())) > 1.0 - 1e-12;
    });
    CHECK(has_da);
}

TEST_CASE("linear inversion is exact on exact data") {
    const auto counts =
        exact_tomography_counts(DensityMatrix::from_pure(gp_state(0.0)), BasisSet::Overcomplete36);
    const LinearInversionResult li = linear_inversion(counts);
    CHECK(max_abs_diff(li.rho.m, DensityMatrix::from_pure(bell_state(Bell::PhiMinus)).m) < 1e-10);
    CHECK(li.physical);

    const auto mixed_counts =
        exact_tomography_counts(DensityMatrix::maximally_mixed(), BasisSet::Overcomplete36);
    const LinearInversionResult li_mixed = linear_inversion(mixed_counts);
    CHECK(max_abs_diff(li_mixed.rho.m, DensityMatrix::maximally_mixed().m) < 1e-10);

    const auto min_counts =
        exact_tomography_counts(DensityMatrix::from_pure(gp_state(0.7)), BasisSet::Minimal16);
    CHECK(max_abs_diff(linear_inversion(min_counts).rho.m,
                       DensityMatrix::from_pure(gp_state(0.7)).m) < 1e-9);
}

TEST_CASE("linear inversion flags statistical negativity") {
    const DensityMatrix truth = DensityMatrix::from_pure(gp_state(deg2rad(40.0)));
    TomographySettings settings;
    settings.counts_per_setting = 1e3;
    bool saw_negative = false;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto counts = simulate_tomography_counts(truth, settings, seed);
        const LinearInversionResult li = linear_inversion(counts);
        CHECK(li.physical == (li.min_eigenvalue >= -1e-9));
        if (li.min_eigenvalue < 0.0) saw_negative = true;
    }
    CHECK(saw_negative);
}

TEST_CASE("linear inversion names unmeasured components") {
    // Drop every circular-basis setting: the Y directions become invisible.
    auto counts = exact_tomography_counts(DensityMatrix::from_pure(gp_state(0.0)),
                                          BasisSet::Overcomplete36);
    counts.erase(std::remove_if(counts.begin(), counts.end(),
                                [](const CountRecord& r) {
                                    return r.setting_s.label == Basis::R ||
                                           r.setting_s.label == Basis::L ||
                                           r.setting_i.label == Basis::R ||
                                           r.setting_i.label == Basis::L;
                                }),
                 counts.end());
    try {
        linear_inversion(counts);
        FAIL("expected rank-deficiency error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Y") != std::string::npos);
    }
}

TEST_CASE("MLE at the infinite-count limit reproduces the state") {
    const DensityMatrix truth = DensityMatrix::from_pure(gp_state(deg2rad(50.0)));
    const auto counts = exact_tomography_counts(truth, BasisSet::Overcomplete36);
    TomographySettings settings;
    const TomographyResult res = mle_reconstruct(counts, settings, gp_state(deg2rad(50.0)));
    CHECK(res.converged);
    CHECK(res.likelihood_monotone);
    CHECK(res.fidelity_to_target.has_value());
    CHECK(*res.fidelity_to_target > 1.0 - 1e-6);
    CHECK(res.entropy == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("MLE reconstruction quality at finite counts") {
    const double phi = deg2rad(60.0);
    const DensityMatrix truth = DensityMatrix::from_pure(gp_state(phi));
    TomographySettings settings;
    settings.counts_per_setting = 1e4;
    const auto counts = simulate_tomography_counts(truth, settings, 314);
    const TomographyResult res = mle_reconstruct(counts, settings, gp_state(phi));
    CHECK(res.converged);
    CHECK(*res.fidelity_to_target >= 0.99);
    CHECK(res.rho.is_physical());
}

TEST_CASE("reconstructed off-diagonal phase follows the GP half-wave plate") {
    TomographySettings settings;
    settings.counts_per_setting = 1e4;

    // theta_h = 22.5 deg: pair phase 45 deg, HH/VV coherence +i/2.
    const auto at225 = mle_reconstruct(
        simulate_tomography_counts(DensityMatrix::from_pure(gp_state(deg2rad(45.0))), settings,
                                   555),
        settings);
    CHECK(std::abs(at225.rho.m(0, 3).imag() - 0.5) < 0.03);

    // theta_h = 67.5 deg flips the sign.
    const auto at675 = mle_reconstruct(
        simulate_tomography_counts(DensityMatrix::from_pure(gp_state(deg2rad(135.0))), settings,
                                   556),
        settings);
    CHECK(std::abs(at675.rho.m(0, 3).imag() + 0.5) < 0.03);
}

TEST_CASE("estimator consistency: fidelity rises with counts") {
    const double phi = deg2rad(35.0);
    const DensityMatrix truth = DensityMatrix::from_pure(gp_state(phi));
    double mean_fid[3] = {0.0, 0.0, 0.0};
    const double counts_levels[3] = {1e2, 1e3, 1e4};
    for (int level = 0; level < 3; ++level) {
        TomographySettings settings;
        settings.counts_per_setting = counts_levels[level];
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto counts = simulate_tomography_counts(truth, settings, 9000 + seed);
            const TomographyResult res = mle_reconstruct(counts, settings, gp_state(phi));
            mean_fid[level] += *res.fidelity_to_target / 20.0;
        }
    }
    CHECK(mean_fid[0] < mean_fid[1]);
    CHECK(mean_fid[1] < mean_fid[2]);
    CHECK(mean_fid[2] > 0.99);
}

TEST_CASE("linear inversion and MLE agree at high counts") {
    const DensityMatrix truth = DensityMatrix::werner(0.95, gp_state(deg2rad(25.0)));
    TomographySettings settings;
    settings.counts_per_setting = 1e5;
    const auto counts = simulate_tomography_counts(truth, settings, 77);
    const LinearInversionResult li = linear_inversion(counts);
    const TomographyResult mle = mle_reconstruct(counts, settings);
    // Clamp the linear estimate onto physical space is not done; distance is
    // still small at this count level.
    CHECK(trace_distance(li.rho, mle.rho) < 0.02);
}

TEST_CASE("tomography report bundles the figures of merit") {
    TomographySettings settings;
    settings.counts_per_setting = 5e3;
    const auto counts = simulate_tomography_counts(
        DensityMatrix::from_pure(gp_state(0.0)), settings, 31415);
    const TomographyResult res = mle_reconstruct(counts, settings);
    const TomographyReport rep = tomography_report(res, gp_state(0.0));
    CHECK(rep.fidelity > 0.98);
    CHECK(rep.entropy > 0.95);
    CHECK(rep.eigenvalue_clamp >= 0.0);
    CHECK(rep.real_part[0][0] == doctest::Approx(res.rho.m(0, 0).real()));
    CHECK(rep.imag_part[0][3] == doctest::Approx(res.rho.m(0, 3).imag()));
}

TEST_CASE("settings validation") {
    TomographySettings bad;
    bad.mle_tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = TomographySettings{};
    bad.mle_max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
