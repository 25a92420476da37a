// phasebench command-line front end.
//
// Subcommands: classical, fringe, bell, tomo, compensate, run <file.bench>.
// Every run writes its data files first and a manifest last; the manifest
// lists all produced files, so its presence marks a complete run. Exit
// codes: 0 success, 1 simulation error, 2 usage error, 3 bench-program
// diagnostics.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phasebench/driver.hpp"
#include "phasebench/io.hpp"
#include "phasebench/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace phasebench;

constexpr int kExitOk = 0;
constexpr int kExitSimulation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiagnostics = 3;

struct GlobalOptions {
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string format = "both";
    int threads = 0;  // 0 = all cores
};

ExecPolicy exec_policy(const GlobalOptions& g) {
    if (g.threads == 1) return ExecPolicy::Serial;
#ifdef _OPENMP
    if (g.threads > 1) omp_set_num_threads(g.threads);
#endif
    return ExecPolicy::Parallel;
}

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PHASEBENCH_OUT"); env && *env) return env;
    return ".";
}

class RunWriter {
  public:
    RunWriter(std::string command, const GlobalOptions& g)
        : command_(std::move(command)), out_dir_(resolve_out_dir(g.out_dir)),
          format_(g.format), seed_(g.seed), start_(std::chrono::steady_clock::now()) {
        std::filesystem::create_directories(out_dir_);
    }

    bool wants_csv() const { return format_ == "csv" || format_ == "both"; }
    bool wants_json() const { return format_ == "json" || format_ == "both"; }

    std::string base_name(const std::string& tag = "") const {
        return command_ + (tag.empty() ? "" : "_" + tag) + "_" + std::to_string(seed_);
    }

    void write_csv(const std::string& tag, const std::string& content) {
        if (!wants_csv()) return;
        const std::string path = out_dir_ + "/" + base_name(tag) + ".csv";
        io::write_text_file(path, content);
        outputs_.push_back(path);
    }

    void write_json(const std::string& tag, const io::json& j) {
        if (!wants_json()) return;
        const std::string path = out_dir_ + "/" + base_name(tag) + ".json";
        io::write_text_file(path, j.dump(2) + "\n");
        outputs_.push_back(path);
    }

    // Completion marker; always written, always last.
    void finish(const io::json& config) {
        io::RunManifest manifest;
        manifest.command = command_;
        manifest.config = config;
        manifest.seed = seed_;
        manifest.version = kVersion;
        manifest.outputs = outputs_;
        manifest.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        io::write_manifest(out_dir_, manifest);
        for (const auto& path : outputs_) std::cout << "wrote " << path << "\n";
    }

  private:
    std::string command_;
    std::string out_dir_;
    std::string format_;
    std::uint64_t seed_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

dsl::RunPlan base_plan(const GlobalOptions& g) {
    dsl::RunPlan plan;
    plan.seed = g.seed;
    return plan;
}

// Direct-flag commands build the same plan a bench file would compile to.
struct DetectorFlags {
    double eta = 1.0;
    double dark = 0.0;
    double window_ns = 0.0;
    double pairs = 4e4;
    double acq = 1.0;

    DetectorModel to_model() const {
        DetectorModel det;
        det.eta_s = det.eta_i = eta;
        det.dark_s = det.dark_i = dark;
        det.window = window_ns * 1e-9;
        det.pair_rate = pairs;
        det.acquisition = acq;
        return det;
    }
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& det) {
    cmd->add_option("--eta", det.eta, "detection efficiency (both arms)");
    cmd->add_option("--dark", det.dark, "dark counts per second");
    cmd->add_option("--window-ns", det.window_ns, "coincidence window in ns");
    cmd->add_option("--pairs", det.pairs, "generated pairs per second");
    cmd->add_option("--acq", det.acq, "acquisition seconds per point");
}

void install_gp_stack(dsl::RunPlan& plan, double theta_deg) {
    plan.gp_elements = {{dsl::GpElement::Kind::Qwp, 45.0, 0},
                        {dsl::GpElement::Kind::Hwp, theta_deg, 0},
                        {dsl::GpElement::Kind::Qwp, 45.0, 0}};
    plan.scanned_hwp_index = 1;
}

int run_classical_cmd(const GlobalOptions& g, double from, double to, double step,
                      double noise) {
    dsl::RunPlan plan = base_plan(g);
    plan.kind = dsl::MeasureKind::Classical;
    plan.pump = Basis::D;
    install_gp_stack(plan, 0.0);
    plan.scan_axis = dsl::ScanAxis::GpHwp;
    plan.scan_deg = make_grid(from, to, step);

    RunWriter writer("classical", g);
    const ClassicalResult result = run_classical(plan, noise, exec_policy(g));
    writer.write_csv("", io::classical_csv(result));
    writer.write_json("", io::classical_json(plan, result));
    writer.finish(io::plan_to_json(plan));
    return kExitOk;
}

int run_fringe_cmd(const GlobalOptions& g, double theta_deg, const std::string& basis_name_str,
                   double from, double to, double step, const DetectorFlags& det, double p,
                   double v, bool exact) {
    dsl::RunPlan plan = base_plan(g);
    plan.kind = dsl::MeasureKind::Fringe;
    plan.pump = Basis::D;
    install_gp_stack(plan, theta_deg);
    plan.scanned_hwp_index = -1;  // fixed GP angle; the analyzer sweeps
    plan.scan_axis = dsl::ScanAxis::AnalyzerIHwp;
    plan.scan_deg = make_grid(from, to, step);
    plan.detector = det.to_model();
    plan.imperfection = {p, v};

    Basis fixed = Basis::H;
    for (Basis b : {Basis::H, Basis::V, Basis::D, Basis::A, Basis::R, Basis::L})
        if (phasebench::basis_name(b) == basis_name_str) fixed = b;

    RunWriter writer("fringe", g);
    FringeResult result;
    FringeCurve curve;
    curve.label = basis_name_str;
    curve.setting_s = AnalyzerSetting::labeled(fixed);
    curve.sweep_deg = plan.scan_deg;
    const DensityMatrix rho = bench_state(plan);
    std::vector<double> grid_rad(plan.scan_deg.size());
    for (std::size_t k = 0; k < grid_rad.size(); ++k) grid_rad[k] = deg2rad(plan.scan_deg[k]);
    if (exact) {
        const auto means = fringe_expectation(rho, curve.setting_s, grid_rad, plan.detector);
        curve.records.resize(means.size());
        for (std::size_t k = 0; k < means.size(); ++k) {
            curve.records[k].setting_s = curve.setting_s;
            curve.records[k].setting_i = AnalyzerSetting::linear(2.0 * grid_rad[k]);
            curve.records[k].singles_s = static_cast<std::uint64_t>(std::llround(means[k].singles_s));
            curve.records[k].singles_i = static_cast<std::uint64_t>(std::llround(means[k].singles_i));
            curve.records[k].coincidences =
                static_cast<std::uint64_t>(std::llround(means[k].coincidences));
        }
        try {
            curve.fit = fit_fringe(to_fringe_points(grid_rad, means));
        } catch (const std::exception&) {
            curve.fit = std::nullopt;
        }
    } else {
        curve.records =
            fringe_scan(rho, curve.setting_s, grid_rad, plan.detector, plan.seed, exec_policy(g));
        try {
            curve.fit = fit_fringe(to_fringe_points(grid_rad, curve.records));
        } catch (const std::exception&) {
            curve.fit = std::nullopt;
        }
    }
    result.curves.push_back(curve);

    writer.write_csv(curve.label, io::fringe_csv(curve));
    writer.write_json("", io::fringe_json(plan, result));
    writer.finish(io::plan_to_json(plan));
    if (curve.fit)
        std::cout << "visibility[" << curve.label << "] = " << io::format_double(curve.fit->visibility)
                  << "\n";
    return kExitOk;
}

int run_bell_cmd(const GlobalOptions& g, double from, double to, double step,
                 const DetectorFlags& det, double p, double v) {
    dsl::RunPlan plan = base_plan(g);
    plan.kind = dsl::MeasureKind::Bell;
    plan.pump = Basis::D;
    install_gp_stack(plan, 0.0);
    plan.scan_axis = dsl::ScanAxis::GpHwp;
    plan.scan_deg = make_grid(from, to, step);
    plan.detector = det.to_model();
    plan.imperfection = {p, v};

    RunWriter writer("bell", g);
    const BellResult result = run_bell(plan, exec_policy(g));
    writer.write_csv("", io::bell_csv(result));
    writer.write_json("", io::bell_json(plan, result));
    writer.finish(io::plan_to_json(plan));
    if (result.fit)
        std::cout << "fit (abs form): a = " << io::format_double(result.fit->a_abs)
                  << ", b = " << io::format_double(result.fit->b_abs) << "\n";
    return kExitOk;
}

int run_tomo_cmd(const GlobalOptions& g, double from, double to, double step, double counts,
                 double p, double v) {
    dsl::RunPlan plan = base_plan(g);
    plan.kind = dsl::MeasureKind::Tomo;
    plan.pump = Basis::D;
    install_gp_stack(plan, 0.0);
    plan.scan_axis = dsl::ScanAxis::GpHwp;
    plan.scan_deg = make_grid(from, to, step);
    plan.detector = DetectorModel::ideal(4.0 * counts);
    plan.imperfection = {p, v};

    RunWriter writer("tomo", g);
    const TomoResult result = run_tomo(plan, exec_policy(g));
    writer.write_csv("", io::tomo_csv(result));
    writer.write_json("", io::tomo_json(plan, result));
    writer.finish(io::plan_to_json(plan));
    for (const auto& point : result.points)
        std::cout << "theta_h = " << io::format_double(point.theta_h_deg)
                  << " deg: fidelity = " << io::format_double(point.report.fidelity)
                  << ", entropy = " << io::format_double(point.report.entropy) << "\n";
    return kExitOk;
}

int run_compensate_cmd(const GlobalOptions& g, double phi_h_deg, double phi_v_deg) {
    const CompensationResult res =
        run_compensation(deg2rad(phi_h_deg), deg2rad(phi_v_deg));
    std::printf("theta_h = %.6f deg\n", rad2deg(res.theta_h));
    std::printf("fidelity = %.6f\n", res.fidelity);

    RunWriter writer("compensate", g);
    writer.write_json("", io::json{{"phi_h_deg", phi_h_deg},
                                   {"phi_v_deg", phi_v_deg},
                                   {"theta_h_deg", rad2deg(res.theta_h)},
                                   {"fidelity", res.fidelity}});
    writer.finish(io::json{{"phi_h_deg", phi_h_deg}, {"phi_v_deg", phi_v_deg}});
    return kExitOk;
}

int run_bench_cmd(const GlobalOptions& g, const std::string& path, bool seed_overridden) {
    std::string text;
    try {
        text = io::read_text_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const auto parsed = dsl::parse(text);
    for (const auto& d : parsed.diagnostics)
        std::cerr << path << ":" << d.line << ":" << d.column << ": "
                  << dsl::severity_name(d.severity) << ": " << d.message << "\n";
    if (!parsed.ok()) return kExitDiagnostics;

    auto compiled = dsl::compile(*parsed.program);
    for (const auto& d : compiled.diagnostics)
        std::cerr << path << ":" << d.line << ":" << d.column << ": "
                  << dsl::severity_name(d.severity) << ": " << d.message << "\n";
    if (!compiled.ok()) return kExitDiagnostics;

    dsl::RunPlan plan = *compiled.plan;
    if (seed_overridden) plan.seed = g.seed;
    GlobalOptions local = g;
    local.seed = plan.seed;

    switch (plan.kind) {
        case dsl::MeasureKind::Classical: {
            RunWriter writer("classical", local);
            const ClassicalResult result = run_classical(plan, 0.0, exec_policy(g));
            writer.write_csv("", io::classical_csv(result));
            writer.write_json("", io::classical_json(plan, result));
            writer.finish(io::plan_to_json(plan));
            return kExitOk;
        }
        case dsl::MeasureKind::Fringe: {
            RunWriter writer("fringe", local);
            const FringeResult result = run_fringe(plan, exec_policy(g));
            for (const auto& curve : result.curves)
                writer.write_csv(curve.label, io::fringe_csv(curve));
            writer.write_json("", io::fringe_json(plan, result));
            writer.finish(io::plan_to_json(plan));
            return kExitOk;
        }
        case dsl::MeasureKind::Bell: {
            RunWriter writer("bell", local);
            const BellResult result = run_bell(plan, exec_policy(g));
            writer.write_csv("", io::bell_csv(result));
            writer.write_json("", io::bell_json(plan, result));
            writer.finish(io::plan_to_json(plan));
            if (result.fit)
                std::cout << "fit (abs form): a = " << io::format_double(result.fit->a_abs)
                          << ", b = " << io::format_double(result.fit->b_abs) << "\n";
            return kExitOk;
        }
        case dsl::MeasureKind::Tomo: {
            RunWriter writer("tomo", local);
            const TomoResult result = run_tomo(plan, exec_policy(g));
            writer.write_csv("", io::tomo_csv(result));
            writer.write_json("", io::tomo_json(plan, result));
            writer.finish(io::plan_to_json(plan));
            return kExitOk;
        }
    }
    return kExitSimulation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric-phase entangled-photon bench simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "master RNG seed");
    app.add_option("--out", g.out_dir, "output directory (default $PHASEBENCH_OUT or '.')");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--threads", g.threads, "worker threads (1 = serial, 0 = all cores)");

    auto* classical = app.add_subcommand("classical", "pump projection powers vs GP HWP angle");
    double c_from = 0.0, c_to = 180.0, c_step = 1.0, c_noise = 0.0;
    classical->add_option("--from", c_from, "start angle (deg)");
    classical->add_option("--to", c_to, "end angle (deg)");
    classical->add_option("--step", c_step, "step (deg)");
    classical->add_option("--noise", c_noise, "Gaussian power-meter noise sigma");

    auto* fringe = app.add_subcommand("fringe", "coincidence fringe vs analyzer angle");
    double f_theta = 0.0, f_from = 0.0, f_to = 180.0, f_step = 5.0, f_p = 0.5, f_v = 1.0;
    std::string f_basis = "H";
    bool f_exact = false;
    DetectorFlags f_det;
    fringe->add_option("--theta", f_theta, "GP HWP angle (deg)");
    fringe->add_option("--basis", f_basis, "fixed signal-arm basis")
        ->check(CLI::IsMember({"H", "V", "D", "A"}));
    fringe->add_option("--from", f_from, "analyzer HWP start (deg)");
    fringe->add_option("--to", f_to, "analyzer HWP end (deg)");
    fringe->add_option("--step", f_step, "analyzer HWP step (deg)");
    fringe->add_option("--p", f_p, "source amplitude weight");
    fringe->add_option("--v", f_v, "source purity admixture");
    fringe->add_flag("--exact", f_exact, "noise-free expectations instead of Poisson draws");
    add_detector_flags(fringe, f_det);

    auto* bell = app.add_subcommand("bell", "CHSH S vs GP HWP angle");
    double b_from = 0.0, b_to = 90.0, b_step = 2.5, b_p = 0.5, b_v = 1.0;
    DetectorFlags b_det;
    bell->add_option("--from", b_from, "GP HWP start (deg)");
    bell->add_option("--to", b_to, "GP HWP end (deg)");
    bell->add_option("--step", b_step, "GP HWP step (deg)");
    bell->add_option("--p", b_p, "source amplitude weight");
    bell->add_option("--v", b_v, "source purity admixture");
    add_detector_flags(bell, b_det);

    auto* tomo = app.add_subcommand("tomo", "state tomography vs GP HWP angle");
    double t_from = 0.0, t_to = 0.0, t_step = 22.5, t_counts = 1e4, t_p = 0.5, t_v = 1.0;
    tomo->add_option("--theta", t_from, "GP HWP angle (deg); also the scan start");
    tomo->add_option("--to", t_to, "GP HWP scan end (deg; default: single angle)");
    tomo->add_option("--step", t_step, "GP HWP scan step (deg)");
    tomo->add_option("--counts", t_counts, "mean counts per tomography setting");
    tomo->add_option("--p", t_p, "source amplitude weight");
    tomo->add_option("--v", t_v, "source purity admixture");

    auto* compensate =
        app.add_subcommand("compensate", "GP angle cancelling birefringent phases");
    double phi_h = 0.0, phi_v = 0.0;
    compensate->add_option("--phi-h", phi_h, "phase on the HH component (deg)")->required();
    compensate->add_option("--phi-v", phi_v, "phase on the VV component (deg)")->required();

    auto* run = app.add_subcommand("run", "execute a .bench program");
    std::string bench_path;
    run->add_option("file", bench_path, "bench program")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classical->parsed()) return run_classical_cmd(g, c_from, c_to, c_step, c_noise);
        if (fringe->parsed())
            return run_fringe_cmd(g, f_theta, f_basis, f_from, f_to, f_step, f_det, f_p, f_v,
                                  f_exact);
        if (bell->parsed()) return run_bell_cmd(g, b_from, b_to, b_step, b_det, b_p, b_v);
        if (tomo->parsed())
            return run_tomo_cmd(g, t_from, std::max(t_to, t_from), t_step, t_counts, t_p, t_v);
        if (compensate->parsed()) return run_compensate_cmd(g, phi_h, phi_v);
        if (run->parsed()) return run_bench_cmd(g, bench_path, app.count("--seed") > 0);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
    return kExitUsage;
}
