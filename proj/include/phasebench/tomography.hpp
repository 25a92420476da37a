// Two-qubit state tomography from coincidence counts.
//
// Probabilities are normalized per basis: each analyzer-pair quadruple that
// completes to the identity divides its own summed counts (overcomplete-36
// set). The minimal-16 set is not closed under orthogonal completion, so
// there the H/V x H/V quadruple total serves as the global intensity.
//
// The maximum-likelihood estimator maximizes the Poisson log-likelihood
// sum_k (n_k log mu_k - mu_k), mu_k = N_k Tr(rho Pi_k), by the fixed-point
// update rho <- normalize(R rho R), R = sum_k (n_k / mu_k) N_k Pi_k,
// falling back to diluted steps rho <- normalize((I + eps R)(rho)(I + eps R))
// with eps halved until the likelihood increases. Iteration starts from the
// PSD-projected linear-inversion estimate (with a small isotropic floor so
// the support stays full). Physicality (PSD, unit trace) holds by
// construction at every iterate and the likelihood is non-decreasing across
// accepted steps.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "phasebench/counting.hpp"
#include "phasebench/quantum.hpp"

namespace phasebench {

enum class BasisSet { Minimal16, Overcomplete36 };

struct TomographySettings {
    BasisSet basis_set = BasisSet::Overcomplete36;
    double counts_per_setting = 1e4;  // mean coincidences per setting when simulating
    double mle_tolerance = 1e-10;     // relative log-likelihood gain
    int mle_max_iterations = 10000;

    void validate() const;
};

using SettingPair = std::pair<AnalyzerSetting, AnalyzerSetting>;

/// minimal-16: {H,V,D,R} x {H,V,D,R}; overcomplete-36: {H,V,D,A,R,L}^2.
std::vector<SettingPair> tomography_settings_list(BasisSet set);

/// One Poisson-sampled record per setting; setting k uses
/// stream_seed(seed, k).
std::vector<CountRecord> simulate_tomography_counts(const DensityMatrix& state, BasisSet set,
                                                    const DetectorModel& det,
                                                    std::uint64_t seed);

/// Same with an ideal detector producing 4 * counts_per_setting pairs per
/// acquisition, which makes the mean coincidence count per setting equal
/// counts_per_setting.
std::vector<CountRecord> simulate_tomography_counts(const DensityMatrix& state,
                                                    const TomographySettings& settings,
                                                    std::uint64_t seed);

/// Infinite-count limit: counts are the exact probabilities scaled by
/// `scale` and rounded (the rounding error is the only noise).
std::vector<CountRecord> exact_tomography_counts(const DensityMatrix& state, BasisSet set,
                                                 double scale = 1e12);

struct LinearInversionResult {
    DensityMatrix rho;          // Hermitian, unit trace; PSD not enforced
    double min_eigenvalue = 0;  // negative values flag an unphysical estimate
    bool physical = false;
};

/// Least-squares inversion of Tr(rho Pi_k) = p_k over the 16 Pauli
/// coefficients. Throws std::runtime_error naming the unmeasured Pauli
/// components when the design matrix is rank-deficient.
LinearInversionResult linear_inversion(const std::vector<CountRecord>& counts);

struct TomographyResult {
    DensityMatrix rho;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    bool likelihood_monotone = true;  // over accepted steps; asserted in debug builds
    double entropy = 0.0;
    std::optional<double> fidelity_to_target;
};

TomographyResult mle_reconstruct(const std::vector<CountRecord>& counts,
                                 const TomographySettings& settings,
                                 const std::optional<TwoQubitPure>& target = std::nullopt);

struct TomographyReport {
    TomographyResult result;
    std::array<std::array<double, 4>, 4> real_part{};
    std::array<std::array<double, 4>, 4> imag_part{};
    double fidelity = 0.0;          // <target| rho |target>
    double entropy = 0.0;           // bits
    double eigenvalue_clamp = 0.0;  // largest |negative eigenvalue| clamped
};

TomographyReport tomography_report(const TomographyResult& result, const TwoQubitPure& target);

}  // namespace phasebench
