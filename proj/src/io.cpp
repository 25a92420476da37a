#include "phasebench/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phasebench/version.hpp"

namespace phasebench::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json density_to_json(const DensityMatrix& rho) {
    json entries = json::array();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            entries.push_back({rho.m(i, j).real(), rho.m(i, j).imag()});
    return {{"dim", 4}, {"entries", entries}};
}

DensityMatrix density_from_json(const json& j) {
    if (j.at("dim").get<int>() != 4)
        throw std::invalid_argument("density_from_json: expected dim 4");
    const auto& entries = j.at("entries");
    if (entries.size() != 16)
        throw std::invalid_argument("density_from_json: expected 16 entries");
    DensityMatrix rho;
    for (std::size_t k = 0; k < 16; ++k)
        rho.m.e[k] = cdouble{entries[k][0].get<double>(), entries[k][1].get<double>()};
    return rho;
}

json detector_to_json(const DetectorModel& det) {
    return {{"eta_s", det.eta_s},         {"eta_i", det.eta_i},
            {"dark_s", det.dark_s},       {"dark_i", det.dark_i},
            {"pair_rate", det.pair_rate}, {"window_s", det.window},
            {"acquisition_s", det.acquisition}};
}

json imperfection_to_json(const SourceImperfection& imp) {
    return {{"amplitude_p", imp.amplitude_p}, {"werner_v", imp.werner_v}};
}

json plan_to_json(const dsl::RunPlan& plan) {
    json gp = json::array();
    for (const auto& el : plan.gp_elements)
        gp.push_back({{"element", el.kind == dsl::GpElement::Kind::Qwp ? "qwp" : "hwp"},
                      {"angle_deg", el.angle_deg}});
    json j{{"measure", dsl::measure_name(plan.kind)},
           {"pump", basis_name(plan.pump)},
           {"gp_elements", gp},
           {"imperfection", imperfection_to_json(plan.imperfection)},
           {"detector", detector_to_json(plan.detector)},
           {"scan_axis", plan.scan_axis == dsl::ScanAxis::GpHwp ? "gp_hwp" : "analyzer_i_hwp"},
           {"scan_deg", plan.scan_deg},
           {"seed", plan.seed}};
    if (plan.birefringence)
        j["birefringence_rad"] = {plan.birefringence->first, plan.birefringence->second};
    return j;
}

json fringe_fit_to_json(const FringeFit& fit) {
    return {{"offset", fit.offset},           {"amplitude", fit.amplitude},
            {"phase_rad", fit.phase},         {"visibility", fit.visibility},
            {"rms_residual", fit.rms_residual}, {"iterations", fit.iterations}};
}

json scurve_fit_to_json(const SCurveFit& fit) {
    return {{"abs_form", {{"a", fit.a_abs}, {"b", fit.b_abs}}},
            {"cos_form", {{"a", fit.a_cos}, {"b", fit.b_cos}}}};
}

std::string classical_csv(const ClassicalResult& result) {
    std::string out = "theta_h_deg,p_h,p_v,p_d,p_a\n";
    for (const auto& r : result.rows) {
        out += format_double(r.theta_h_deg) + ',' + format_double(r.p_h) + ',' +
               format_double(r.p_v) + ',' + format_double(r.p_d) + ',' +
               format_double(r.p_a) + '\n';
    }
    return out;
}

json classical_json(const dsl::RunPlan& plan, const ClassicalResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows)
        rows.push_back({{"theta_h_deg", r.theta_h_deg},
                        {"p_h", r.p_h},
                        {"p_v", r.p_v},
                        {"p_d", r.p_d},
                        {"p_a", r.p_a}});
    return {{"plan", plan_to_json(plan)}, {"rows", rows}};
}

std::string fringe_csv(const FringeCurve& curve) {
    std::string out = "s_hwp_deg,s_qwp_deg,i_hwp_deg,i_qwp_deg,singles_s,singles_i,coincidences\n";
    for (const auto& rec : curve.records) {
        out += format_double(rad2deg(rec.setting_s.hwp)) + ',' +
               format_double(rad2deg(rec.setting_s.qwp)) + ',' +
               format_double(rad2deg(rec.setting_i.hwp)) + ',' +
               format_double(rad2deg(rec.setting_i.qwp)) + ',' +
               std::to_string(rec.singles_s) + ',' + std::to_string(rec.singles_i) + ',' +
               std::to_string(rec.coincidences) + '\n';
    }
    return out;
}

namespace {

json curve_to_json(const FringeCurve& curve) {
    json points = json::array();
    for (std::size_t k = 0; k < curve.records.size(); ++k) {
        const auto& rec = curve.records[k];
        points.push_back({{"sweep_deg", curve.sweep_deg[k]},
                          {"singles_s", rec.singles_s},
                          {"singles_i", rec.singles_i},
                          {"coincidences", rec.coincidences},
                          {"seed", rec.seed}});
    }
    json j{{"label", curve.label}, {"points", points}};
    if (curve.fit) j["fit"] = fringe_fit_to_json(*curve.fit);
    return j;
}

}  // namespace

json fringe_json(const dsl::RunPlan& plan, const FringeResult& result) {
    json curves = json::array();
    for (const auto& c : result.curves) curves.push_back(curve_to_json(c));
    return {{"plan", plan_to_json(plan)}, {"curves", curves}};
}

std::string bell_csv(const BellResult& result) {
    std::string out = "theta_h_deg,s,sigma_s\n";
    for (const auto& p : result.points)
        out += format_double(rad2deg(p.theta_h)) + ',' + format_double(p.s) + ',' +
               format_double(p.sigma_s) + '\n';
    return out;
}

json bell_json(const dsl::RunPlan& plan, const BellResult& result) {
    json points = json::array();
    for (const auto& p : result.points)
        points.push_back(
            {{"theta_h_deg", rad2deg(p.theta_h)}, {"s", p.s}, {"sigma_s", p.sigma_s}});
    json j{{"plan", plan_to_json(plan)}, {"points", points}};
    if (result.fit) j["fit"] = scurve_fit_to_json(*result.fit);
    return j;
}

std::string tomo_csv(const TomoResult& result) {
    std::string out = "theta_h_deg,part";
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out += ",m" + std::to_string(i) + std::to_string(j);
    out += '\n';
    for (const auto& p : result.points) {
        for (const char* part : {"re", "im"}) {
            out += format_double(p.theta_h_deg);
            out += ',';
            out += part;
            const bool real = part[0] == 'r';
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    out += ',' + format_double(real ? p.report.real_part[i][j]
                                                    : p.report.imag_part[i][j]);
            out += '\n';
        }
    }
    return out;
}

json tomo_json(const dsl::RunPlan& plan, const TomoResult& result) {
    json points = json::array();
    for (const auto& p : result.points) {
        const auto& res = p.report.result;
        points.push_back({{"theta_h_deg", p.theta_h_deg},
                          {"rho", density_to_json(res.rho)},
                          {"fidelity", p.report.fidelity},
                          {"entropy", p.report.entropy},
                          {"log_likelihood", res.log_likelihood},
                          {"iterations", res.iterations},
                          {"converged", res.converged},
                          {"eigenvalue_clamp", p.report.eigenvalue_clamp}});
    }
    return {{"plan", plan_to_json(plan)}, {"points", points}};
}

std::string write_manifest(const std::string& out_dir, const RunManifest& manifest) {
    json j{{"command", manifest.command}, {"config", manifest.config},
           {"seed", manifest.seed},       {"version", manifest.version},
           {"outputs", manifest.outputs}, {"wall_time_s", manifest.wall_time_s}};
    const std::string path =
        out_dir + "/" + manifest.command + "_" + std::to_string(manifest.seed) +
        ".manifest.json";
    write_text_file(path, j.dump(2) + "\n");
    return path;
}

}  // namespace phasebench::io
