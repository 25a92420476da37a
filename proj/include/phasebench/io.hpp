// Serialization of scan results: CSV with '.' decimals and no locale
// dependence, JSON with full metadata (seed, detector model, state
// parameters). Density matrices serialize as row-major arrays of
// (re, im) pairs; that format is shared between the tomography reports
// and the CLI.
//
// Every CLI run finishes by writing a manifest listing all produced files;
// the manifest goes last, so its presence marks a complete run.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "phasebench/driver.hpp"

namespace phasebench::io {

using json = nlohmann::json;

/// Locale-independent "%.12g".
std::string format_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json detector_to_json(const DetectorModel& det);
json imperfection_to_json(const SourceImperfection& imp);
json plan_to_json(const dsl::RunPlan& plan);
json fringe_fit_to_json(const FringeFit& fit);
json scurve_fit_to_json(const SCurveFit& fit);

std::string classical_csv(const ClassicalResult& result);
json classical_json(const dsl::RunPlan& plan, const ClassicalResult& result);

/// Header: s_hwp_deg, s_qwp_deg, i_hwp_deg, i_qwp_deg, singles_s,
/// singles_i, coincidences.
std::string fringe_csv(const FringeCurve& curve);
json fringe_json(const dsl::RunPlan& plan, const FringeResult& result);

std::string bell_csv(const BellResult& result);
json bell_json(const dsl::RunPlan& plan, const BellResult& result);

std::string tomo_csv(const TomoResult& result);
json tomo_json(const dsl::RunPlan& plan, const TomoResult& result);

struct RunManifest {
    std::string command;
    json config;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
};

/// Writes `<out_dir>/<command>_<seed>.manifest.json`; call after all data
/// files are on disk. Returns the manifest path.
std::string write_manifest(const std::string& out_dir, const RunManifest& manifest);

}  // namespace phasebench::io
