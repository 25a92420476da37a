// Monte Carlo photon-counting layer. Exact Born probabilities become
// simulated singles and coincidence counts with Poisson noise, dark counts
// and window accidentals, plus the fringe and S-curve fits used to reduce
// scans back to physical parameters.
//
// Counting model for one acquisition at settings (s, i):
//   singles mean (per arm)  = pair_rate * eta * P_single * T + dark * T
//   true coincidence mean   = pair_rate * eta_s * eta_i * P(s,i) * T
//   accidental mean         = R_singles_s * R_singles_i * window * T
// with T the acquisition time and R the singles rates (darks included).
// Accidentals are drawn as an independent Poisson term and added to the
// true coincidences. Draw order per record: singles_s, singles_i, true
// coincidences, accidentals.
//
// Scans evaluate one record per grid point with per-point streams
// (rng.hpp), so the parallel path gives bit-identical results to the
// serial reference.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "phasebench/measurement.hpp"
#include "phasebench/rng.hpp"
#include "phasebench/source.hpp"

namespace phasebench {

enum class ExecPolicy { Serial, Parallel };

struct DetectorModel {
    double eta_s = 0.2;        // detection efficiencies
    double eta_i = 0.2;
    double dark_s = 500.0;     // dark counts per second
    double dark_i = 500.0;
    double pair_rate = 1e6;    // generated pairs per second
    double window = 1.6e-9;    // coincidence window, seconds (0 = ideal)
    double acquisition = 1.0;  // seconds per point

    /// Detector with unit efficiency, no darks and no accidentals,
    /// producing the given mean number of pairs per acquisition.
    static DetectorModel ideal(double pairs_per_acquisition);

    void validate() const;
};

struct CountRecord {
    std::uint64_t singles_s = 0;
    std::uint64_t singles_i = 0;
    std::uint64_t coincidences = 0;  // true + accidental; may exceed a singles count
    AnalyzerSetting setting_s;
    AnalyzerSetting setting_i;
    std::uint64_t seed = 0;
};

struct CountMeans {
    double singles_s = 0.0;
    double singles_i = 0.0;
    double coincidences = 0.0;
};

/// Analytic means of the counting model (no noise drawn).
CountMeans expected_counts(const DensityMatrix& state, const AnalyzerSetting& s,
                           const AnalyzerSetting& i, const DetectorModel& det);

/// One Poisson-sampled acquisition. Identical (inputs, seed) reproduce an
/// identical record.
CountRecord simulate_counts(const DensityMatrix& state, const AnalyzerSetting& s,
                            const AnalyzerSetting& i, const DetectorModel& det,
                            std::uint64_t seed);

/// Inclusive grid from..to with the given step (step > 0, from <= to).
std::vector<double> make_grid(double from, double to, double step);

/// Coincidence fringe: arm 1 fixed, arm 2 a rotating linear analyzer whose
/// half-wave plate takes the grid values (the quarter-wave plate tracks at
/// twice the half-wave plate angle). Point k uses stream_seed(seed, k).
std::vector<CountRecord> fringe_scan(const DensityMatrix& state, const AnalyzerSetting& fixed,
                                     const std::vector<double>& sweep_hwp,
                                     const DetectorModel& det, std::uint64_t seed,
                                     ExecPolicy exec = ExecPolicy::Serial);

/// Noise-free expectations of the same scan.
std::vector<CountMeans> fringe_expectation(const DensityMatrix& state,
                                           const AnalyzerSetting& fixed,
                                           const std::vector<double>& sweep_hwp,
                                           const DetectorModel& det);

struct FringePoint {
    double hwp = 0.0;    // radians
    double value = 0.0;  // counts (real-valued so exact expectations fit too)
};

struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;  // radians, in [0, pi/2)
    double visibility = 0.0;
    std::array<std::array<double, 3>, 3> covariance{};  // (offset, amplitude, phase)
    double rms_residual = 0.0;
    int iterations = 0;
};

struct FringeFitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-10;  // relative parameter step
};

/// Thrown when the refinement does not converge; carries the last iterate.
class FringeFitError : public std::runtime_error {
  public:
    FringeFitError(const FringeFit& last, double rms)
        : std::runtime_error("fit_fringe: no convergence after " +
                             std::to_string(last.iterations) +
                             " iterations (rms residual " + std::to_string(rms) + ")"),
          last_iterate(last) {}
    FringeFit last_iterate;
};

/// Least-squares fit of N(hwp) = offset + amplitude * cos(4 (hwp - phase)),
/// i.e. period 90 degrees in half-wave plate angle (180 degrees in
/// polarization). Linear solve in (offset, A, B) seeds a Gauss-Newton
/// refinement with Levenberg damping. Needs >= 5 points spanning at least
/// half a period (45 degrees).
FringeFit fit_fringe(const std::vector<FringePoint>& points, const FringeFitOptions& opts = {});

std::vector<FringePoint> to_fringe_points(const std::vector<double>& sweep_hwp,
                                          const std::vector<CountRecord>& records);
std::vector<FringePoint> to_fringe_points(const std::vector<double>& sweep_hwp,
                                          const std::vector<CountMeans>& means);

struct BellPoint {
    double theta_h = 0.0;  // radians
    double s = 0.0;
    double sigma_s = 0.0;
};

/// CHSH S versus the geometric-phase half-wave plate angle. Every grid
/// point measures the four standard correlations from their 16 analyzer
/// port combinations; setting j of point k uses stream_seed(seed, 16k + j).
/// sigma_s comes from first-order Poisson propagation through each
/// correlation estimate: var(C) = 4 A B / T^3 with A, B the agreeing /
/// disagreeing port totals and T = A + B.
std::vector<BellPoint> bell_scan(const std::vector<double>& theta_grid,
                                 const SourceImperfection& imp, const DetectorModel& det,
                                 std::uint64_t seed, ExecPolicy exec = ExecPolicy::Serial);

/// Same estimator fed with the analytic count means (infinite-count limit);
/// sigma_s is 0.
std::vector<BellPoint> bell_scan_exact(const std::vector<double>& theta_grid,
                                       const SourceImperfection& imp);

enum class SCurveForm { AbsCosine, PlainCosine };

struct SCurveFit {
    // S(theta_h) = a + b |cos 4 theta_h|, the form the fixed-angle CHSH
    // actually follows.
    double a_abs = 0.0;
    double b_abs = 0.0;
    std::array<std::array<double, 2>, 2> cov_abs{};
    // S(theta_h) = a + b cos 4 theta_h, reported alongside for comparison.
    double a_cos = 0.0;
    double b_cos = 0.0;
    std::array<std::array<double, 2>, 2> cov_cos{};

    double a(SCurveForm f) const { return f == SCurveForm::AbsCosine ? a_abs : a_cos; }
    double b(SCurveForm f) const { return f == SCurveForm::AbsCosine ? b_abs : b_cos; }
};

/// Least squares of both S-curve forms. Needs >= 8 points spanning at
/// least 90 degrees of theta_h; throws on a degenerate grid.
SCurveFit fit_s_curve(const std::vector<BellPoint>& points);

}  // namespace phasebench
