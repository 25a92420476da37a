// Timing comparison of the serial reference loops against the OpenMP
// parallel paths, over the three scan kernels: analyzer fringe scans, Bell
// scans and tomography batches. Also verifies that both paths produce
// identical results, which the per-point seeding guarantees.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "phasebench/counting.hpp"
#include "phasebench/dsl.hpp"
#include "phasebench/driver.hpp"
#include "phasebench/tomography.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace phasebench;
using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& f) {
    const auto t0 = clock_type::now();
    f();
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-18s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "results identical" : "RESULTS DIFFER");
}

bool same_records(const std::vector<CountRecord>& a, const std::vector<CountRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].singles_s != b[k].singles_s || a[k].singles_i != b[k].singles_i ||
            a[k].coincidences != b[k].coincidences)
            return false;
    return true;
}

void bench_fringe() {
    const DensityMatrix rho = DensityMatrix::from_pure(gp_state(deg2rad(30.0)));
    DetectorModel det;
    det.pair_rate = 5e6;
    const auto grid_deg = make_grid(0.0, 180.0, 0.05);
    std::vector<double> grid(grid_deg.size());
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = deg2rad(grid_deg[k]);
    const AnalyzerSetting fixed = AnalyzerSetting::labeled(Basis::D);

    std::vector<CountRecord> serial, parallel;
    const double ts = time_ms(
        [&] { serial = fringe_scan(rho, fixed, grid, det, 7, ExecPolicy::Serial); });
    const double tp = time_ms(
        [&] { parallel = fringe_scan(rho, fixed, grid, det, 7, ExecPolicy::Parallel); });
    report("fringe scan", ts, tp, same_records(serial, parallel));
}

void bench_bell() {
    const SourceImperfection imp{0.5, 0.95};
    DetectorModel det;
    det.pair_rate = 1e6;
    std::vector<double> grid;
    for (double d = 0.0; d <= 90.0; d += 0.25) grid.push_back(deg2rad(d));

    std::vector<BellPoint> serial, parallel;
    const double ts =
        time_ms([&] { serial = bell_scan(grid, imp, det, 11, ExecPolicy::Serial); });
    const double tp =
        time_ms([&] { parallel = bell_scan(grid, imp, det, 11, ExecPolicy::Parallel); });
    bool identical = serial.size() == parallel.size();
    for (std::size_t k = 0; identical && k < serial.size(); ++k)
        identical = serial[k].s == parallel[k].s && serial[k].sigma_s == parallel[k].sigma_s;
    report("bell scan", ts, tp, identical);
}

void bench_tomo() {
    dsl::RunPlan plan;
    plan.kind = dsl::MeasureKind::Tomo;
    plan.pump = Basis::D;
    plan.gp_elements = {{dsl::GpElement::Kind::Qwp, 45.0, 0},
                        {dsl::GpElement::Kind::Hwp, 0.0, 0},
                        {dsl::GpElement::Kind::Qwp, 45.0, 0}};
    plan.scanned_hwp_index = 1;
    plan.scan_axis = dsl::ScanAxis::GpHwp;
    plan.scan_deg = make_grid(0.0, 90.0, 5.0);
    plan.detector = DetectorModel::ideal(4e4);
    plan.seed = 23;

    TomoResult serial, parallel;
    const double ts = time_ms([&] { serial = run_tomo(plan, ExecPolicy::Serial); });
    const double tp = time_ms([&] { parallel = run_tomo(plan, ExecPolicy::Parallel); });
    bool identical = serial.points.size() == parallel.points.size();
    for (std::size_t k = 0; identical && k < serial.points.size(); ++k)
        identical = max_abs_diff(serial.points[k].report.result.rho.m,
                                 parallel.points[k].report.result.rho.m) == 0.0;
    report("tomography batch", ts, tp, identical);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel policy falls back to serial\n");
#endif
    bench_fringe();
    bench_bell();
    bench_tomo();
    return 0;
}
