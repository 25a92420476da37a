#include <doctest.h>

#include <cmath>
#include <random>

#include "phasebench/measurement.hpp"

using namespace phasebench;

TEST_CASE("labeled analyzer settings reproduce their canonical projectors") {
    for (Basis b : {Basis::H, Basis::V, Basis::D, Basis::A, Basis::R, Basis::L}) {
        const AnalyzerSetting s = AnalyzerSetting::labeled(b);
        CHECK(std::norm(inner(analyzer_projector(s), basis_vector(b))) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    // The reference pair from the standard settings table.
    CHECK(std::norm(inner(analyzer_projector(AnalyzerSetting::raw(0.0, 0.0)), basis_h())) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::norm(inner(
              analyzer_projector(AnalyzerSetting::raw(deg2rad(22.5), deg2rad(45.0))),
              basis_d())) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("labeled bases are mutually unbiased across pair classes") {
    const std::array<Basis, 6> all{Basis::H, Basis::V, Basis::D, Basis::A, Basis::R, Basis::L};
    const auto pair_class = [](Basis b) {
        return b == Basis::H || b == Basis::V ? 0 : (b == Basis::D || b == Basis::A ? 1 : 2);
    };
    for (Basis a : all)
        for (Basis b : all) {
            const double ov = std::norm(inner(analyzer_projector(AnalyzerSetting::labeled(a)),
                                              analyzer_projector(AnalyzerSetting::labeled(b))));
            if (a == b)
                CHECK(ov == doctest::Approx(1.0).epsilon(1e-12));
            else if (pair_class(a) == pair_class(b))
                CHECK(ov == doctest::Approx(0.0).epsilon(1e-12));
            else
                CHECK(ov == doctest::Approx(0.5).epsilon(1e-12));
        }
}

TEST_CASE("orthogonal port projects on the complement") {
    for (double theta : {0.0, 0.3, 1.0, 2.4}) {
        const AnalyzerSetting s = AnalyzerSetting::linear(theta);
        CHECK(std::norm(inner(analyzer_projector(s),
                              analyzer_projector(s.orthogonal_port()))) < 1e-13);
    }
}

TEST_CASE("coincidence probabilities at reference settings") {
    const AnalyzerSetting d = AnalyzerSetting::linear(deg2rad(45.0));

    // Parallel diagonal analyzers block the phase-zero state.
    CHECK(coincidence_probability(gp_state(0.0), d, d) == doctest::Approx(0.0).epsilon(1e-13));

    // H/H stays at one half for every phase.
    const AnalyzerSetting h = AnalyzerSetting::linear(0.0);
    for (double phi : {0.0, 0.5, 1.2, 2.8})
        CHECK(coincidence_probability(gp_state(phi), h, h) ==
              doctest::Approx(0.5).epsilon(1e-13));

    // Diagonal-basis closed form (1 - cos 2 phi)/4.
    CHECK(coincidence_probability(gp_state(deg2rad(45.0)), d, d) ==
          doctest::Approx(0.25).epsilon(1e-13));
    CHECK(coincidence_probability(gp_state(deg2rad(90.0)), d, d) ==
          doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("Born rule matches the closed form on a coarse grid") {
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b)
            for (int f = 0; f < 12; ++f) {
                const double ts = deg2rad(15.0 * a), ti = deg2rad(15.0 * b),
                             phi = deg2rad(15.0 * f);
                CHECK(std::abs(coincidence_probability(gp_state(phi),
                                                       AnalyzerSetting::linear(ts),
                                                       AnalyzerSetting::linear(ti)) -
                               coincidence_closed_form(ts, ti, phi)) < 1e-12);
            }
}

TEST_CASE("port completeness") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> dist(0.0, std::numbers::pi);
    for (int k = 0; k < 25; ++k) {
        const double ts = dist(gen), ti = dist(gen), phi = dist(gen);
        const AnalyzerSetting sp = AnalyzerSetting::linear(ts);
        const AnalyzerSetting ip = AnalyzerSetting::linear(ti);
        const double total = coincidence_probability(gp_state(phi), sp, ip) +
                             coincidence_probability(gp_state(phi), sp, ip.orthogonal_port()) +
                             coincidence_probability(gp_state(phi), sp.orthogonal_port(), ip) +
                             coincidence_probability(gp_state(phi), sp.orthogonal_port(),
                                                     ip.orthogonal_port());
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("correlation values") {
    CHECK(correlation(gp_state(1.1), 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlation(gp_state(0.7), 0.0, deg2rad(22.5)) ==
          doctest::Approx(std::numbers::sqrt2 / 2.0).epsilon(1e-12));
    CHECK(correlation(gp_state(0.0), deg2rad(45.0), deg2rad(22.5)) ==
          doctest::Approx(-std::numbers::sqrt2 / 2.0).epsilon(1e-12));
}

TEST_CASE("CHSH parameter") {
    const double max_s = 2.0 * std::numbers::sqrt2;
    CHECK(chsh(gp_state(0.0)) == doctest::Approx(max_s).epsilon(1e-12));
    CHECK(chsh(gp_state(deg2rad(45.0))) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
    CHECK(chsh(DensityMatrix::werner(0.81, gp_state(0.0))) ==
          doctest::Approx(0.81 * max_s).epsilon(1e-12));

    // The signed textbook combination differs: zero for the minus state at
    // these angles.
    CHECK(chsh(gp_state(0.0), ChshAngles::standard(), ChshForm::Signed) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Closed-form agreement on a 1-degree phase grid.
    for (int d = 0; d <= 180; ++d) {
        const double phi = deg2rad(d);
        CHECK(std::abs(chsh(gp_state(phi)) - chsh_closed_form(phi)) < 1e-12);
    }
    CHECK(chsh_closed_form(deg2rad(22.5)) ==
          doctest::Approx(std::numbers::sqrt2 + 1.0).epsilon(1e-12));
}

TEST_CASE("fringe visibility law") {
    // Signal fixed at 45 deg: visibility |cos 2 phi|; fixed at 0: visibility 1.
    for (double phi : {0.0, deg2rad(20.0), deg2rad(45.0), deg2rad(70.0), deg2rad(90.0)}) {
        double mx45 = 0.0, mn45 = 1.0, mx0 = 0.0, mn0 = 1.0;
        for (int d = 0; d < 360; ++d) {
            const double ti = deg2rad(0.5 * d);
            const double p45 = coincidence_probability(
                gp_state(phi), AnalyzerSetting::linear(deg2rad(45.0)),
                AnalyzerSetting::linear(ti));
            const double p0 = coincidence_probability(
                gp_state(phi), AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(ti));
            mx45 = std::max(mx45, p45);
            mn45 = std::min(mn45, p45);
            mx0 = std::max(mx0, p0);
            mn0 = std::min(mn0, p0);
        }
        CHECK(std::abs((mx45 - mn45) / (mx45 + mn45) - std::abs(std::cos(2.0 * phi))) < 1e-10);
        CHECK(std::abs((mx0 - mn0) / (mx0 + mn0) - 1.0) < 1e-10);
    }
}

TEST_CASE("Tsirelson bound holds for random states") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_real_distribution<double> vdist(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        TwoQubitPure psi;
        for (auto& a : psi.amp) a = cdouble{dist(gen), dist(gen)};
        psi = psi.normalized();
        const DensityMatrix rho = DensityMatrix::werner(vdist(gen), psi);
        CHECK(chsh(rho) <= 2.0 * std::numbers::sqrt2 + 1e-9);
        CHECK(horodecki_smax(rho) <= 2.0 * std::numbers::sqrt2 + 1e-9);
    }
}

TEST_CASE("singles probabilities") {
    for (double phi : {0.0, 0.8})
        for (Basis b : {Basis::H, Basis::D, Basis::R})
            CHECK(singles_probability(gp_state(phi), AnalyzerSetting::labeled(b),
                                      Subsystem::Signal) == doctest::Approx(0.5).epsilon(1e-12));

    TwoQubitPure imbalanced;
    imbalanced.amp = {std::sqrt(0.7), 0.0, 0.0, -std::sqrt(0.3)};
    CHECK(singles_probability(imbalanced, AnalyzerSetting::labeled(Basis::H),
                              Subsystem::Signal) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("states must be physical or normalized") {
    TwoQubitPure unnormalized;
    unnormalized.amp = {1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(coincidence_probability(unnormalized, AnalyzerSetting::linear(0.0),
                                            AnalyzerSetting::linear(0.0)),
                    std::invalid_argument);

    DensityMatrix bad;
    bad.m = Mat4c::identity();
    CHECK_THROWS_AS(coincidence_probability(bad, AnalyzerSetting::linear(0.0),
                                            AnalyzerSetting::linear(0.0)),
                    std::invalid_argument);
}
