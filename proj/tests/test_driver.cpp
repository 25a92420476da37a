#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "phasebench/driver.hpp"
#include "phasebench/io.hpp"

using namespace phasebench;

namespace {

dsl::RunPlan reference_plan(dsl::MeasureKind kind) {
    dsl::RunPlan plan;
    plan.kind = kind;
    plan.pump = Basis::D;
    plan.gp_elements = {{dsl::GpElement::Kind::Qwp, 45.0, 0},
                        {dsl::GpElement::Kind::Hwp, 0.0, 0},
                        {dsl::GpElement::Kind::Qwp, 45.0, 0}};
    plan.scanned_hwp_index = 1;
    plan.scan_axis = dsl::ScanAxis::GpHwp;
    plan.scan_deg = make_grid(0.0, 90.0, 22.5);
    plan.detector = DetectorModel::ideal(4e4);
    plan.seed = 99;
    return plan;
}

}  // namespace

TEST_CASE("bench state reproduces the pure pipeline at the clean settings") {
    const dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Tomo);
    for (double theta_deg : {0.0, 11.25, 22.5, 45.0}) {
        const DensityMatrix rho = bench_state(plan, theta_deg);
        const DensityMatrix expected =
            DensityMatrix::from_pure(gp_state(2.0 * deg2rad(theta_deg)));
        CHECK(max_abs_diff(rho.m, expected.m) < 1e-12);
    }
}

TEST_CASE("classical scan rows") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Classical);
    plan.scan_deg = make_grid(0.0, 180.0, 22.5);
    const ClassicalResult result = run_classical(plan);
    REQUIRE(result.rows.size() == 9);
    CHECK(result.rows[0].p_d == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.rows[0].p_h == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(result.rows[2].p_d == doctest::Approx(1.0).epsilon(1e-12));  // 45 deg
    // Two full periods across 0..180.
    CHECK(result.rows[6].p_d == doctest::Approx(result.rows[2].p_d).epsilon(1e-12));
    // Noise is reproducible.
    const ClassicalResult noisy1 = run_classical(plan, 0.01);
    const ClassicalResult noisy2 = run_classical(plan, 0.01);
    CHECK(noisy1.rows[3].p_d == noisy2.rows[3].p_d);
    CHECK(noisy1.rows[3].p_d != result.rows[3].p_d);
}

TEST_CASE("analyzer fringe run fits full visibility in the H basis") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Fringe);
    plan.scan_axis = dsl::ScanAxis::AnalyzerIHwp;
    plan.scanned_hwp_index = -1;
    plan.scan_deg = make_grid(0.0, 180.0, 5.0);
    plan.detector = DetectorModel::ideal(1e5);
    const FringeResult result = run_fringe(plan);
    REQUIRE(result.curves.size() == 4);
    // Curves: fixed H, D, V, A in that order.
    CHECK(result.curves[0].label == "H");
    REQUIRE(result.curves[0].fit.has_value());
    CHECK(result.curves[0].fit->visibility > 0.98);
    REQUIRE(result.curves[1].fit.has_value());
    CHECK(result.curves[1].fit->visibility > 0.98);
}

TEST_CASE("GP fringe run: diagonal pair modulates, H/V pair stays dark") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Fringe);
    plan.scan_deg = make_grid(0.0, 90.0, 2.5);
    plan.detector = DetectorModel::ideal(1e5);
    const FringeResult result = run_fringe(plan);
    REQUIRE(result.curves.size() == 4);

    const auto max_counts = [](const FringeCurve& c) {
        std::uint64_t m = 0;
        for (const auto& r : c.records) m = std::max(m, r.coincidences);
        return m;
    };
    // (H, V) and (V, H) pairs sit at the coincidence minimum for any phase.
    CHECK(max_counts(result.curves[0]) == 0);
    CHECK(max_counts(result.curves[1]) == 0);
    // (D, D) modulates between 0 and half the pairs.
    CHECK(max_counts(result.curves[2]) > 40000);
    REQUIRE(result.curves[2].fit.has_value());
    CHECK(result.curves[2].fit->visibility > 0.99);
}

TEST_CASE("bell run produces the S-curve fit") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Bell);
    plan.scan_deg = make_grid(0.0, 90.0, 2.5);
    plan.imperfection = {0.5, 0.81};
    const BellResult result = run_bell(plan);
    REQUIRE(result.fit.has_value());
    CHECK(std::abs(result.fit->b_abs / std::numbers::sqrt2 - 0.81) < 0.02);
}

TEST_CASE("tomography run reports the fidelity curve") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Tomo);
    const TomoResult result = run_tomo(plan);
    REQUIRE(result.points.size() == 5);
    for (const auto& point : result.points) {
        const double expected = std::pow(std::cos(2.0 * deg2rad(point.theta_h_deg)), 2);
        CHECK(std::abs(point.report.fidelity - expected) < 0.03);
        CHECK(point.report.entropy > 0.97);
    }
    // Parallel execution reproduces the serial batch exactly.
    const TomoResult parallel = run_tomo(plan, ExecPolicy::Parallel);
    for (std::size_t k = 0; k < result.points.size(); ++k)
        CHECK(max_abs_diff(result.points[k].report.result.rho.m,
                           parallel.points[k].report.result.rho.m) == 0.0);
}

TEST_CASE("compensation run") {
    const CompensationResult res = run_compensation(deg2rad(90.0), 0.0);
    CHECK(res.theta_h == doctest::Approx(deg2rad(22.5)).epsilon(1e-12));
    CHECK(res.fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density matrix JSON round trip") {
    const DensityMatrix rho = DensityMatrix::werner(0.83, gp_state(1.1));
    const DensityMatrix back = io::density_from_json(io::density_to_json(rho));
    CHECK(max_abs_diff(rho.m, back.m) == 0.0);
}

TEST_CASE("CSV serialization uses dot decimals and stable headers") {
    dsl::RunPlan plan = reference_plan(dsl::MeasureKind::Classical);
    plan.scan_deg = make_grid(0.0, 45.0, 22.5);
    const std::string csv = io::classical_csv(run_classical(plan));
    CHECK(csv.rfind("theta_h_deg,p_h,p_v,p_d,p_a\n", 0) == 0);
    CHECK(csv.find("22.5") != std::string::npos);
    CHECK(csv.find(',') != std::string::npos);
    CHECK(csv.find(';') == std::string::npos);

    dsl::RunPlan bell_plan = reference_plan(dsl::MeasureKind::Bell);
    bell_plan.scan_deg = make_grid(0.0, 90.0, 45.0);
    const std::string bell_csv = io::bell_csv(run_bell(bell_plan));
    CHECK(bell_csv.rfind("theta_h_deg,s,sigma_s\n", 0) == 0);
}

TEST_CASE("manifest lists outputs and is written to the expected path") {
    const std::string dir = std::filesystem::temp_directory_path() /
                            "phasebench_manifest_test";
    std::filesystem::create_directories(dir);
    io::RunManifest manifest;
    manifest.command = "bell";
    manifest.seed = 12;
    manifest.version = "test";
    manifest.outputs = {dir + "/bell_12.csv"};
    manifest.config = {{"k", 1}};
    const std::string path = io::write_manifest(dir, manifest);
    CHECK(path == dir + "/bell_12.manifest.json");
    const auto parsed = io::json::parse(io::read_text_file(path));
    CHECK(parsed.at("outputs").size() == 1);
    CHECK(parsed.at("command") == "bell");
    std::filesystem::remove_all(dir);
}
