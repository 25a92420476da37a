// Executes compiled run plans into result tables. Shared by the CLI and
// the integration tests; everything is deterministic in (plan, seed).
//
// State pipeline for the quantum measurements: pump basis vector through
// the GP element stack, source map to the (HH, VV) pair family, optional
// birefringent phases, then the two-knob imperfection. The imperfection's
// amplitude weight p replaces the pair amplitude moduli (p = 0.5 reproduces
// the balanced pure state); the pump/GP chain owns the relative phase.
//
// Seed layout: curve c of a scan uses stream_seed(plan.seed, c) as its
// master; points inside a curve derive their own streams from that master.

#pragma once

#include <optional>
#include <string>

#include "phasebench/counting.hpp"
#include "phasebench/dsl.hpp"
#include "phasebench/tomography.hpp"

namespace phasebench {

DensityMatrix bench_state(const dsl::RunPlan& plan,
                          std::optional<double> gp_hwp_deg = std::nullopt);

struct ClassicalRow {
    double theta_h_deg = 0.0;
    double p_h = 0.0, p_v = 0.0, p_d = 0.0, p_a = 0.0;
};

struct ClassicalResult {
    std::vector<ClassicalRow> rows;
};

/// Exact projection powers over the scan grid; noise_sigma > 0 adds
/// Gaussian power-meter noise (stream per row, draws in H, V, D, A order).
ClassicalResult run_classical(const dsl::RunPlan& plan, double noise_sigma = 0.0,
                              ExecPolicy exec = ExecPolicy::Serial);

struct FringeCurve {
    std::string label;                  // fixed-arm basis tag
    AnalyzerSetting setting_s;          // signal arm (fixed)
    std::vector<double> sweep_deg;      // analyzer HWP angle or GP HWP angle
    std::vector<CountRecord> records;
    std::optional<FringeFit> fit;       // absent when the fit is unavailable
};

struct FringeResult {
    std::vector<FringeCurve> curves;
};

/// Analyzer sweeps produce one curve per fixed signal basis {H, D, V, A};
/// GP sweeps produce the four fixed analyzer pairs (H,V), (V,H), (D,D),
/// (A,A), each arm-2 partner sitting at the phi = 0 coincidence minimum.
FringeResult run_fringe(const dsl::RunPlan& plan, ExecPolicy exec = ExecPolicy::Serial);

struct BellResult {
    std::vector<BellPoint> points;
    std::optional<SCurveFit> fit;  // present when the grid supports it
};

BellResult run_bell(const dsl::RunPlan& plan, ExecPolicy exec = ExecPolicy::Serial);

struct TomoPoint {
    double theta_h_deg = 0.0;
    TomographyReport report;
};

struct TomoResult {
    std::vector<TomoPoint> points;
};

/// Overcomplete-36 reconstruction at every scan point, fidelity referenced
/// to the phi = 0 pair state.
TomoResult run_tomo(const dsl::RunPlan& plan, ExecPolicy exec = ExecPolicy::Serial);

struct CompensationResult {
    double theta_h = 0.0;   // radians
    double fidelity = 0.0;  // post-compensation, against the phi = 0 state
};

CompensationResult run_compensation(double phi_h, double phi_v);

}  // namespace phasebench
