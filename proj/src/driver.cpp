#include "phasebench/driver.hpp"

#include <cmath>

namespace phasebench {

namespace {

template <typename F>
void for_each_index(std::size_t n, ExecPolicy exec, F&& f) {
    if (exec == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
            f(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < n; ++k) f(k);
    }
}

}  // namespace

DensityMatrix bench_state(const dsl::RunPlan& plan, std::optional<double> gp_hwp_deg) {
    TwoQubitPure pure = spdc_state(plan.pump_state(gp_hwp_deg));
    if (plan.birefringence)
        pure = birefringent_evolve(pure, plan.birefringence->first, plan.birefringence->second);
    return imperfect_state(relative_gp_phase(pure), plan.imperfection);
}

ClassicalResult run_classical(const dsl::RunPlan& plan, double noise_sigma, ExecPolicy exec) {
    ClassicalResult out;
    out.rows.resize(plan.scan_deg.size());
    for_each_index(plan.scan_deg.size(), exec, [&](std::size_t k) {
        const double theta_deg = plan.scan_deg[k];
        const JonesVector pump = plan.pump_state(theta_deg).jones;
        ClassicalRow row;
        row.theta_h_deg = theta_deg;
        row.p_h = classical_projection_power(pump, basis_h());
        row.p_v = classical_projection_power(pump, basis_v());
        row.p_d = classical_projection_power(pump, basis_d());
        row.p_a = classical_projection_power(pump, basis_a());
        if (noise_sigma > 0.0) {
            CountingRng rng(stream_seed(plan.seed, k));
            row.p_h += noise_sigma * rng.normal();
            row.p_v += noise_sigma * rng.normal();
            row.p_d += noise_sigma * rng.normal();
            row.p_a += noise_sigma * rng.normal();
        }
        out.rows[k] = row;
    });
    return out;
}

namespace {

std::optional<FringeFit> try_fit(const std::vector<FringePoint>& pts) {
    try {
        return fit_fringe(pts);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

FringeCurve analyzer_sweep_curve(const dsl::RunPlan& plan, const DensityMatrix& rho,
                                 Basis fixed_basis, std::uint64_t curve_seed,
                                 ExecPolicy exec) {
    FringeCurve curve;
    curve.label = basis_name(fixed_basis);
    curve.setting_s = AnalyzerSetting::labeled(fixed_basis);
    curve.sweep_deg = plan.scan_deg;
    std::vector<double> grid_rad(plan.scan_deg.size());
    for (std::size_t k = 0; k < grid_rad.size(); ++k) grid_rad[k] = deg2rad(plan.scan_deg[k]);
    curve.records = fringe_scan(rho, curve.setting_s, grid_rad, plan.detector, curve_seed, exec);
    curve.fit = try_fit(to_fringe_points(grid_rad, curve.records));
    return curve;
}

FringeCurve gp_sweep_curve(const dsl::RunPlan& plan, Basis a1, Basis a2,
                           std::uint64_t curve_seed, ExecPolicy exec) {
    FringeCurve curve;
    curve.label = basis_name(a1);
    curve.setting_s = AnalyzerSetting::labeled(a1);
    curve.sweep_deg = plan.scan_deg;
    const AnalyzerSetting setting_i = AnalyzerSetting::labeled(a2);
    curve.records.resize(plan.scan_deg.size());
    for_each_index(plan.scan_deg.size(), exec, [&](std::size_t k) {
        const DensityMatrix rho = bench_state(plan, plan.scan_deg[k]);
        curve.records[k] = simulate_counts(rho, curve.setting_s, setting_i, plan.detector,
                                           stream_seed(curve_seed, k));
    });
    std::vector<double> grid_rad(plan.scan_deg.size());
    for (std::size_t k = 0; k < grid_rad.size(); ++k) grid_rad[k] = deg2rad(plan.scan_deg[k]);
    curve.fit = try_fit(to_fringe_points(grid_rad, curve.records));
    return curve;
}

}  // namespace

FringeResult run_fringe(const dsl::RunPlan& plan, ExecPolicy exec) {
    FringeResult out;
    if (plan.scan_axis == dsl::ScanAxis::AnalyzerIHwp) {
        const DensityMatrix rho = bench_state(plan);
        const std::array<Basis, 4> fixed{Basis::H, Basis::D, Basis::V, Basis::A};
        for (std::size_t c = 0; c < fixed.size(); ++c)
            out.curves.push_back(analyzer_sweep_curve(plan, rho, fixed[c],
                                                      stream_seed(plan.seed, c), exec));
    } else {
        // Fixed analyzer pairs at the phi = 0 coincidence minimum.
        const std::array<std::pair<Basis, Basis>, 4> pairs{
            std::pair{Basis::H, Basis::V}, std::pair{Basis::V, Basis::H},
            std::pair{Basis::D, Basis::D}, std::pair{Basis::A, Basis::A}};
        for (std::size_t c = 0; c < pairs.size(); ++c)
            out.curves.push_back(gp_sweep_curve(plan, pairs[c].first, pairs[c].second,
                                                stream_seed(plan.seed, c), exec));
    }
    return out;
}

BellResult run_bell(const dsl::RunPlan& plan, ExecPolicy exec) {
    BellResult out;
    std::vector<double> grid_rad(plan.scan_deg.size());
    for (std::size_t k = 0; k < grid_rad.size(); ++k) grid_rad[k] = deg2rad(plan.scan_deg[k]);
    out.points = bell_scan(grid_rad, plan.imperfection, plan.detector, plan.seed, exec);
    try {
        out.fit = fit_s_curve(out.points);
    } catch (const std::invalid_argument&) {
        out.fit = std::nullopt;
    }
    return out;
}

TomoResult run_tomo(const dsl::RunPlan& plan, ExecPolicy exec) {
    TomoResult out;
    out.points.resize(plan.scan_deg.size());
    const TwoQubitPure target = gp_state(0.0);
    TomographySettings settings;
    settings.basis_set = BasisSet::Overcomplete36;
    for_each_index(plan.scan_deg.size(), exec, [&](std::size_t k) {
        const DensityMatrix rho = bench_state(plan, plan.scan_deg[k]);
        const auto counts = simulate_tomography_counts(rho, settings.basis_set, plan.detector,
                                                       stream_seed(plan.seed, k));
        const TomographyResult res = mle_reconstruct(counts, settings, target);
        out.points[k] = {plan.scan_deg[k], tomography_report(res, target)};
    });
    return out;
}

CompensationResult run_compensation(double phi_h, double phi_v) {
    CompensationResult out;
    out.theta_h = compensation_angle(phi_h, phi_v);
    PumpState pump;
    pump.jones = (qhq_transfer(out.theta_h) * basis_d()).normalized();
    const TwoQubitPure compensated = birefringent_evolve(spdc_state(pump), phi_h, phi_v);
    out.fidelity = fidelity_pure(compensated, gp_state(0.0));
    return out;
}

}  // namespace phasebench
