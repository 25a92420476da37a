#include "phasebench/tomography.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace phasebench {

void TomographySettings::validate() const {
    if (mle_tolerance <= 0.0)
        throw std::invalid_argument("TomographySettings: tolerance must be positive");
    if (mle_max_iterations < 1)
        throw std::invalid_argument("TomographySettings: max_iterations must be >= 1");
    if (counts_per_setting <= 0.0)
        throw std::invalid_argument("TomographySettings: counts_per_setting must be positive");
}

std::vector<SettingPair> tomography_settings_list(BasisSet set) {
    const std::vector<Basis> minimal{Basis::H, Basis::V, Basis::D, Basis::R};
    const std::vector<Basis> full{Basis::H, Basis::V, Basis::D, Basis::A, Basis::R, Basis::L};
    const auto& bases = set == BasisSet::Minimal16 ? minimal : full;
    std::vector<SettingPair> out;
    out.reserve(bases.size() * bases.size());
    for (Basis bs : bases)
        for (Basis bi : bases)
            out.emplace_back(AnalyzerSetting::labeled(bs), AnalyzerSetting::labeled(bi));
    return out;
}

std::vector<CountRecord> simulate_tomography_counts(const DensityMatrix& state, BasisSet set,
                                                    const DetectorModel& det,
                                                    std::uint64_t seed) {
    const auto list = tomography_settings_list(set);
    std::vector<CountRecord> out(list.size());
    for (std::size_t k = 0; k < list.size(); ++k)
        out[k] = simulate_counts(state, list[k].first, list[k].second, det,
                                 stream_seed(seed, k));
    return out;
}

std::vector<CountRecord> simulate_tomography_counts(const DensityMatrix& state,
                                                    const TomographySettings& settings,
                                                    std::uint64_t seed) {
    settings.validate();
    return simulate_tomography_counts(
        state, settings.basis_set, DetectorModel::ideal(4.0 * settings.counts_per_setting),
        seed);
}

std::vector<CountRecord> exact_tomography_counts(const DensityMatrix& state, BasisSet set,
                                                 double scale) {
    const auto list = tomography_settings_list(set);
    std::vector<CountRecord> out(list.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
        CountRecord rec;
        rec.setting_s = list[k].first;
        rec.setting_i = list[k].second;
        rec.coincidences = static_cast<std::uint64_t>(
            std::llround(scale * coincidence_probability(state, rec.setting_s, rec.setting_i)));
        out[k] = rec;
    }
    return out;
}

namespace {

// Orthogonal-pair class of a labeled basis: H/V -> 0, D/A -> 1, R/L -> 2.
int pair_class(Basis b) {
    switch (b) {
        case Basis::H:
        case Basis::V: return 0;
        case Basis::D:
        case Basis::A: return 1;
        case Basis::R:
        case Basis::L: return 2;
    }
    return -1;
}

struct TomoData {
    std::vector<Mat4c> projectors;
    std::vector<double> counts;
    std::vector<double> intensity;  // N_k: per-basis (or global) normalization
    double total_counts = 0.0;
};

TomoData prepare(const std::vector<CountRecord>& records) {
    if (records.empty()) throw std::invalid_argument("tomography: no counts");
    TomoData data;
    data.projectors.reserve(records.size());
    data.counts.reserve(records.size());

    std::map<std::pair<int, int>, double> group_totals;
    std::vector<std::pair<int, int>> group_of(records.size());
    bool all_labeled = true;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        data.projectors.push_back(pair_projector(r.setting_s, r.setting_i));
        data.counts.push_back(static_cast<double>(r.coincidences));
        data.total_counts += data.counts.back();
        if (r.setting_s.label && r.setting_i.label) {
            group_of[k] = {pair_class(*r.setting_s.label), pair_class(*r.setting_i.label)};
            group_totals[group_of[k]] += data.counts.back();
        } else {
            all_labeled = false;
        }
    }
    if (data.total_counts <= 0.0) throw std::invalid_argument("tomography: all counts zero");

    // Complete groups divide their own totals; otherwise fall back to a
    // global intensity (minimal-16 uses its H/V x H/V quadruple, unlabeled
    // data the average over all settings).
    std::map<std::pair<int, int>, int> group_sizes;
    for (const auto& g : group_of) ++group_sizes[g];
    const bool grouped = all_labeled && std::all_of(group_sizes.begin(), group_sizes.end(),
                                                    [](const auto& kv) { return kv.second == 4; });
    data.intensity.resize(records.size());
    if (grouped) {
        for (std::size_t k = 0; k < records.size(); ++k)
            data.intensity[k] = group_totals[group_of[k]];
    } else {
        double global = 0.0;
        if (all_labeled && group_sizes.count({0, 0}) && group_sizes[{0, 0}] == 4) {
            global = group_totals[{0, 0}];
        } else {
            // No complete quadruple available; estimate the intensity from
            // the mean (a complete basis sums to one).
            global = 4.0 * data.total_counts / static_cast<double>(records.size());
        }
        if (global <= 0.0) throw std::invalid_argument("tomography: zero intensity estimate");
        for (auto& n : data.intensity) n = global;
    }
    return data;
}

std::array<Mat2c, 4> pauli_basis() {
    return {Mat2c::identity(), pauli_x(), pauli_y(), pauli_z()};
}

}  // namespace

LinearInversionResult linear_inversion(const std::vector<CountRecord>& counts) {
    const TomoData data = prepare(counts);
    const std::size_t n = counts.size();
    const auto sigma = pauli_basis();

    // rho = (1/4) sum r_mn sigma_m x sigma_n; Tr(rho Pi_k) = sum_mn c_k,mn r_mn.
    std::vector<std::array<double, 16>> design(n);
    std::array<Mat4c, 16> basis;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t l = 0; l < 4; ++l) basis[4 * m + l] = kron(sigma[m], sigma[l]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < 16; ++j)
            design[k][j] = 0.25 * (data.projectors[k] * basis[j]).trace().real();

    // Unmeasured Pauli directions make the normal system singular; name them.
    std::string missing;
    static const char* kPauliName[4] = {"I", "X", "Y", "Z"};
    for (std::size_t j = 0; j < 16; ++j) {
        double coverage = 0.0;
        for (std::size_t k = 0; k < n; ++k) coverage += std::abs(design[k][j]);
        if (coverage < 1e-9) {
            if (!missing.empty()) missing += ", ";
            missing += std::string(kPauliName[j / 4]) + kPauliName[j % 4];
        }
    }

    std::vector<double> normal(16 * 16, 0.0), rhs(16, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double p_hat = data.counts[k] / data.intensity[k];
        for (std::size_t a = 0; a < 16; ++a) {
            rhs[a] += design[k][a] * p_hat;
            for (std::size_t b = 0; b < 16; ++b) normal[16 * a + b] += design[k][a] * design[k][b];
        }
    }

    std::vector<double> r;
    try {
        r = solve_dense(std::move(normal), std::move(rhs), 16);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("linear_inversion: rank-deficient design matrix; missing "
                                 "settings for components {" +
                                 (missing.empty() ? std::string("unknown") : missing) + "}");
    }

    LinearInversionResult out;
    for (std::size_t j = 0; j < 16; ++j) out.rho.m = out.rho.m + (0.25 * cdouble(r[j])) * basis[j];
    // r[0] is the fitted trace; rescale so Tr(rho) = 1 exactly.
    const double tr = out.rho.m.trace().real();
    if (std::abs(tr) < 1e-9) throw std::runtime_error("linear_inversion: zero-trace estimate");
    out.rho.m = (cdouble(1.0 / tr)) * out.rho.m;
    out.min_eigenvalue = hermitian_eigensystem(out.rho.m).values[0];
    out.physical = out.rho.is_physical();
    return out;
}

namespace {

constexpr double kProbFloor = 1e-12;

double log_likelihood(const TomoData& data, const DensityMatrix& rho) {
    double ll = 0.0;
    for (std::size_t k = 0; k < data.counts.size(); ++k) {
        const double q = std::max((rho.m * data.projectors[k]).trace().real(), kProbFloor);
        const double mu = data.intensity[k] * q;
        ll += data.counts[k] * std::log(mu) - mu;
    }
    return ll;
}

Mat4c r_operator(const TomoData& data, const DensityMatrix& rho) {
    Mat4c r;
    for (std::size_t k = 0; k < data.counts.size(); ++k) {
        if (data.counts[k] == 0.0) continue;
        const double q = std::max((rho.m * data.projectors[k]).trace().real(), kProbFloor);
        r = r + (cdouble(data.counts[k] / (q * data.total_counts))) * data.projectors[k];
    }
    return r;
}

DensityMatrix normalize_psd(const Mat4c& m) {
    DensityMatrix rho;
    rho.m = m;
    // Round-off can leave a tiny anti-Hermitian part; remove it.
    for (std::size_t i = 0; i < 4; ++i) {
        rho.m(i, i) = cdouble{rho.m(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < 4; ++j) {
            const cdouble avg = 0.5 * (rho.m(i, j) + std::conj(rho.m(j, i)));
            rho.m(i, j) = avg;
            rho.m(j, i) = std::conj(avg);
        }
    }
    const double tr = rho.m.trace().real();
    if (tr <= 0.0) throw std::runtime_error("mle_reconstruct: non-positive trace iterate");
    rho.m = cdouble(1.0 / tr) * rho.m;
    return rho;
}

}  // namespace

namespace {

// PSD-projected, renormalized linear inversion with a small isotropic floor
// keeping full support (R rho R never leaves the support of its start).
// Falls back to the maximally mixed state when the inversion fails.
DensityMatrix mle_start(const std::vector<CountRecord>& counts) {
    try {
        const LinearInversionResult li = linear_inversion(counts);
        const Eigensystem4 es = hermitian_eigensystem(li.rho.m);
        Mat4c clamped;
        double total = 0.0;
        for (std::size_t k = 0; k < 4; ++k) total += std::max(es.values[k], 0.0);
        if (total <= 0.0) return DensityMatrix::maximally_mixed();
        for (std::size_t k = 0; k < 4; ++k) {
            const double w = std::max(es.values[k], 0.0) / total;
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    clamped(i, j) += w * es.vectors(i, k) * std::conj(es.vectors(j, k));
        }
        constexpr double kFloor = 1e-6;
        DensityMatrix start;
        start.m = cdouble(1.0 - kFloor) * clamped +
                  cdouble(kFloor) * DensityMatrix::maximally_mixed().m;
        return start;
    } catch (const std::exception&) {
        return DensityMatrix::maximally_mixed();
    }
}

}  // namespace

TomographyResult mle_reconstruct(const std::vector<CountRecord>& counts,
                                 const TomographySettings& settings,
                                 const std::optional<TwoQubitPure>& target) {
    settings.validate();
    const TomoData data = prepare(counts);

    TomographyResult res;
    res.rho = mle_start(counts);
    double ll = log_likelihood(data, res.rho);

    for (res.iterations = 0; res.iterations < settings.mle_max_iterations; ++res.iterations) {
        const Mat4c r = r_operator(data, res.rho);

        // Full R rho R step; fall back to diluted steps when it does not
        // ascend.
        DensityMatrix candidate = normalize_psd(r * res.rho.m * r);
        double cand_ll = log_likelihood(data, candidate);
        if (cand_ll < ll) {
            double eps = 0.5;
            bool improved = false;
            while (eps > 1e-14) {
                const Mat4c step = Mat4c::identity() + cdouble(eps) * r;
                candidate = normalize_psd(step * res.rho.m * step);
                cand_ll = log_likelihood(data, candidate);
                if (cand_ll >= ll) {
                    improved = true;
                    break;
                }
                eps *= 0.5;
            }
            if (!improved) {
                // No ascent direction left at machine precision: converged.
                res.converged = true;
                break;
            }
        }

        assert(cand_ll >= ll);
        if (cand_ll < ll) res.likelihood_monotone = false;
        const double gain = cand_ll - ll;
        res.rho = candidate;
        ll = cand_ll;
        if (gain <= settings.mle_tolerance * std::max(std::abs(ll), 1.0)) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }

    res.log_likelihood = ll;
    res.entropy = entanglement_entropy(res.rho);
    if (target) res.fidelity_to_target = fidelity_mixed(res.rho, *target);
    return res;
}

TomographyReport tomography_report(const TomographyResult& result, const TwoQubitPure& target) {
    TomographyReport rep;
    rep.result = result;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            rep.real_part[i][j] = result.rho.m(i, j).real();
            rep.imag_part[i][j] = result.rho.m(i, j).imag();
        }
    rep.fidelity = fidelity_mixed(result.rho, target);
    rep.entropy = result.entropy;
    const double min_eig = result.rho.min_eigenvalue();
    rep.eigenvalue_clamp = min_eig < 0.0 ? -min_eig : 0.0;
    return rep;
}

}  // namespace phasebench
