#include "phasebench/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace phasebench {

namespace {
constexpr double kPi = std::numbers::pi;

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

DetectorModel DetectorModel::ideal(double pairs_per_acquisition) {
    DetectorModel det;
    det.eta_s = det.eta_i = 1.0;
    det.dark_s = det.dark_i = 0.0;
    det.pair_rate = pairs_per_acquisition;
    det.window = 0.0;
    det.acquisition = 1.0;
    return det;
}

void DetectorModel::validate() const {
    if (eta_s < 0.0 || eta_s > 1.0 || eta_i < 0.0 || eta_i > 1.0)
        throw std::invalid_argument("DetectorModel: efficiencies must be in [0, 1]");
    if (dark_s < 0.0 || dark_i < 0.0 || pair_rate < 0.0 || window < 0.0 || acquisition <= 0.0)
        throw std::invalid_argument("DetectorModel: negative rate or window, or acquisition <= 0");
}

CountMeans expected_counts(const DensityMatrix& state, const AnalyzerSetting& s,
                           const AnalyzerSetting& i, const DetectorModel& det) {
    det.validate();
    const double t = det.acquisition;
    CountMeans m;
    m.singles_s =
        det.pair_rate * det.eta_s * singles_probability(state, s, Subsystem::Signal) * t +
        det.dark_s * t;
    m.singles_i =
        det.pair_rate * det.eta_i * singles_probability(state, i, Subsystem::Idler) * t +
        det.dark_i * t;
    const double truecc =
        det.pair_rate * det.eta_s * det.eta_i * coincidence_probability(state, s, i) * t;
    const double accidentals = (m.singles_s / t) * (m.singles_i / t) * det.window * t;
    m.coincidences = truecc + accidentals;
    return m;
}

CountRecord simulate_counts(const DensityMatrix& state, const AnalyzerSetting& s,
                            const AnalyzerSetting& i, const DetectorModel& det,
                            std::uint64_t seed) {
    det.validate();
    const double t = det.acquisition;
    const double mu_ss =
        det.pair_rate * det.eta_s * singles_probability(state, s, Subsystem::Signal) * t +
        det.dark_s * t;
    const double mu_si =
        det.pair_rate * det.eta_i * singles_probability(state, i, Subsystem::Idler) * t +
        det.dark_i * t;
    const double mu_cc =
        det.pair_rate * det.eta_s * det.eta_i * coincidence_probability(state, s, i) * t;
    const double mu_acc = (mu_ss / t) * (mu_si / t) * det.window * t;

    CountingRng rng(seed);
    CountRecord rec;
    rec.singles_s = rng.poisson(mu_ss);
    rec.singles_i = rng.poisson(mu_si);
    rec.coincidences = rng.poisson(mu_cc) + rng.poisson(mu_acc);
    rec.setting_s = s;
    rec.setting_i = i;
    rec.seed = seed;
    return rec;
}

std::vector<double> make_grid(double from, double to, double step) {
    if (step <= 0.0) throw std::invalid_argument("make_grid: step must be positive");
    if (to < from) throw std::invalid_argument("make_grid: empty range");
    const std::size_t n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = from + static_cast<double>(k) * step;
    return grid;
}

std::vector<CountRecord> fringe_scan(const DensityMatrix& state, const AnalyzerSetting& fixed,
                                     const std::vector<double>& sweep_hwp,
                                     const DetectorModel& det, std::uint64_t seed,
                                     ExecPolicy exec) {
    if (sweep_hwp.empty()) throw std::invalid_argument("fringe_scan: empty grid");
    std::vector<CountRecord> out(sweep_hwp.size());
    for_each_index(sweep_hwp.size(), exec, [&](std::size_t k) {
        const AnalyzerSetting sweep = AnalyzerSetting::linear(2.0 * sweep_hwp[k]);
        out[k] = simulate_counts(state, fixed, sweep, det, stream_seed(seed, k));
    });
    return out;
}

std::vector<CountMeans> fringe_expectation(const DensityMatrix& state,
                                           const AnalyzerSetting& fixed,
                                           const std::vector<double>& sweep_hwp,
                                           const DetectorModel& det) {
    std::vector<CountMeans> out(sweep_hwp.size());
    for (std::size_t k = 0; k < sweep_hwp.size(); ++k)
        out[k] = expected_counts(state, fixed, AnalyzerSetting::linear(2.0 * sweep_hwp[k]), det);
    return out;
}

std::vector<FringePoint> to_fringe_points(const std::vector<double>& sweep_hwp,
                                          const std::vector<CountRecord>& records) {
    std::vector<FringePoint> pts(records.size());
    for (std::size_t k = 0; k < records.size(); ++k)
        pts[k] = {sweep_hwp[k], static_cast<double>(records[k].coincidences)};
    return pts;
}

std::vector<FringePoint> to_fringe_points(const std::vector<double>& sweep_hwp,
                                          const std::vector<CountMeans>& means) {
    std::vector<FringePoint> pts(means.size());
    for (std::size_t k = 0; k < means.size(); ++k) pts[k] = {sweep_hwp[k], means[k].coincidences};
    return pts;
}

namespace {

double fringe_model(double hwp, const std::array<double, 3>& p) {
    return p[0] + p[1] * std::cos(4.0 * (hwp - p[2]));
}

double fringe_sse(const std::vector<FringePoint>& pts, const std::array<double, 3>& p) {
    double sse = 0.0;
    for (const auto& pt : pts) {
        const double r = pt.value - fringe_model(pt.hwp, p);
        sse += r * r;
    }
    return sse;
}

// J^t J and J^t r of the fringe model at parameters p.
void fringe_normal(const std::vector<FringePoint>& pts, const std::array<double, 3>& p,
                   std::array<std::array<double, 3>, 3>& jtj, std::array<double, 3>& jtr) {
    jtj = {};
    jtr = {};
    for (const auto& pt : pts) {
        const double arg = 4.0 * (pt.hwp - p[2]);
        const std::array<double, 3> j{1.0, std::cos(arg), 4.0 * p[1] * std::sin(arg)};
        const double r = pt.value - fringe_model(pt.hwp, p);
        for (int a = 0; a < 3; ++a) {
            jtr[a] += j[a] * r;
            for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
        }
    }
}

FringeFit finalize_fit(const std::vector<FringePoint>& pts, std::array<double, 3> p,
                       int iterations) {
    // Canonical parameters: non-negative amplitude, phase in [0, pi/2).
    if (p[1] < 0.0) {
        p[1] = -p[1];
        p[2] += kPi / 4.0;
    }
    p[2] = std::fmod(p[2], kPi / 2.0);
    if (p[2] < 0.0) p[2] += kPi / 2.0;

    FringeFit fit;
    fit.offset = p[0];
    fit.amplitude = p[1];
    fit.phase = p[2];
    fit.visibility =
        p[0] > 0.0 ? std::clamp(p[1] / p[0], 0.0, 1.0) : 0.0;
    fit.iterations = iterations;

    const double sse = fringe_sse(pts, p);
    const std::size_t n = pts.size();
    fit.rms_residual = std::sqrt(sse / static_cast<double>(n));

    // Covariance sigma^2 (J^t J)^-1, with the damping-free normal matrix.
    std::array<std::array<double, 3>, 3> jtj;
    std::array<double, 3> jtr;
    fringe_normal(pts, p, jtj, jtr);
    const double sigma2 = n > 3 ? sse / static_cast<double>(n - 3) : 0.0;
    try {
        std::vector<double> a(9);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a[3 * r + c] = jtj[r][c];
        for (int col = 0; col < 3; ++col) {
            std::vector<double> e(3, 0.0);
            e[col] = 1.0;
            const auto x = solve_dense(a, e, 3);
            for (int r = 0; r < 3; ++r) fit.covariance[r][col] = sigma2 * x[r];
        }
    } catch (const std::runtime_error&) {
        // Degenerate normal matrix (flat fringe): leave covariance zeroed.
        fit.covariance = {};
    }
    return fit;
}

}  // namespace

FringeFit fit_fringe(const std::vector<FringePoint>& points, const FringeFitOptions& opts) {
    if (points.size() < 5)
        throw std::invalid_argument("fit_fringe: need at least 5 points");
    double lo = points.front().hwp, hi = points.front().hwp;
    for (const auto& p : points) {
        lo = std::min(lo, p.hwp);
        hi = std::max(hi, p.hwp);
    }
    if (hi - lo < kPi / 4.0 - 1e-9)
        throw std::invalid_argument("fit_fringe: grid must span at least half a period (45 deg)");

    // Linear seed: value = offset + A cos(4 hwp) + B sin(4 hwp).
    std::vector<double> m(9, 0.0), rhs(3, 0.0);
    for (const auto& pt : points) {
        const std::array<double, 3> b{1.0, std::cos(4.0 * pt.hwp), std::sin(4.0 * pt.hwp)};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += b[r] * pt.value;
            for (int c = 0; c < 3; ++c) m[3 * r + c] += b[r] * b[c];
        }
    }
    const auto lin = solve_dense(m, rhs, 3);
    std::array<double, 3> p{lin[0], std::hypot(lin[1], lin[2]),
                            0.25 * std::atan2(lin[2], lin[1])};

    // Gauss-Newton with Levenberg damping.
    double lambda = 1e-3;
    double sse = fringe_sse(points, p);
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        std::array<std::array<double, 3>, 3> jtj;
        std::array<double, 3> jtr;
        fringe_normal(points, p, jtj, jtr);

        std::vector<double> a(9);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                a[3 * r + c] = jtj[r][c];
                if (r == c) a[3 * r + c] += lambda * std::max(jtj[r][r], 1e-12);
            }
        std::array<double, 3> delta{};
        try {
            const auto d = solve_dense(a, {jtr[0], jtr[1], jtr[2]}, 3);
            delta = {d[0], d[1], d[2]};
        } catch (const std::runtime_error&) {
            lambda *= 8.0;
            continue;
        }

        const double pnorm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        const double dnorm =
            std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
        if (dnorm <= opts.step_tolerance * (pnorm + 1e-30))
            return finalize_fit(points, p, iter);

        const std::array<double, 3> cand{p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]};
        const double cand_sse = fringe_sse(points, cand);
        if (cand_sse <= sse) {
            p = cand;
            sse = cand_sse;
            lambda = std::max(lambda * 0.25, 1e-12);
        } else {
            lambda *= 8.0;
        }
    }
    throw FringeFitError(finalize_fit(points, p, iter),
                         std::sqrt(sse / static_cast<double>(points.size())));
}

namespace {

struct CorrelationEstimate {
    double c = 0.0;
    double variance = 0.0;
};

// C = (A - B) / T from the four port counts; first-order Poisson variance
// var(C) = 4 A B / T^3.
CorrelationEstimate correlation_from_counts(double n_pp, double n_mm, double n_pm,
                                            double n_mp) {
    const double agree = n_pp + n_mm;
    const double disagree = n_pm + n_mp;
    const double total = agree + disagree;
    CorrelationEstimate est;
    if (total <= 0.0) return est;
    est.c = (agree - disagree) / total;
    est.variance = 4.0 * agree * disagree / (total * total * total);
    return est;
}

const std::array<std::pair<double, double>, 4> kChshPairs = [] {
    const ChshAngles a = ChshAngles::standard();
    return std::array<std::pair<double, double>, 4>{
        std::pair{a.theta_s, a.theta_i}, std::pair{a.theta_s, a.theta_i_prime},
        std::pair{a.theta_s_prime, a.theta_i}, std::pair{a.theta_s_prime, a.theta_i_prime}};
}();

BellPoint bell_point_from_correlations(double theta_h,
                                       const std::array<CorrelationEstimate, 4>& est) {
    BellPoint pt;
    pt.theta_h = theta_h;
    pt.s = std::abs(est[0].c - est[1].c) + std::abs(est[2].c + est[3].c);
    pt.sigma_s = std::sqrt(est[0].variance + est[1].variance + est[2].variance +
                           est[3].variance);
    return pt;
}

}  // namespace

std::vector<BellPoint> bell_scan(const std::vector<double>& theta_grid,
                                 const SourceImperfection& imp, const DetectorModel& det,
                                 std::uint64_t seed, ExecPolicy exec) {
    imp.validate();
    det.validate();
    std::vector<BellPoint> out(theta_grid.size());
    for_each_index(theta_grid.size(), exec, [&](std::size_t k) {
        const DensityMatrix rho = imperfect_state(2.0 * theta_grid[k], imp);
        std::array<CorrelationEstimate, 4> est;
        for (std::size_t j = 0; j < 4; ++j) {
            const AnalyzerSetting sp = AnalyzerSetting::linear(kChshPairs[j].first);
            const AnalyzerSetting sm = sp.orthogonal_port();
            const AnalyzerSetting ip = AnalyzerSetting::linear(kChshPairs[j].second);
            const AnalyzerSetting im = ip.orthogonal_port();
            const auto base = 16 * k + 4 * j;
            const auto n_pp = simulate_counts(rho, sp, ip, det, stream_seed(seed, base + 0));
            const auto n_pm = simulate_counts(rho, sp, im, det, stream_seed(seed, base + 1));
            const auto n_mp = simulate_counts(rho, sm, ip, det, stream_seed(seed, base + 2));
            const auto n_mm = simulate_counts(rho, sm, im, det, stream_seed(seed, base + 3));
            est[j] = correlation_from_counts(
                static_cast<double>(n_pp.coincidences), static_cast<double>(n_mm.coincidences),
                static_cast<double>(n_pm.coincidences), static_cast<double>(n_mp.coincidences));
        }
        out[k] = bell_point_from_correlations(theta_grid[k], est);
    });
    return out;
}

std::vector<BellPoint> bell_scan_exact(const std::vector<double>& theta_grid,
                                       const SourceImperfection& imp) {
    imp.validate();
    const DetectorModel det = DetectorModel::ideal(1.0);
    std::vector<BellPoint> out(theta_grid.size());
    for (std::size_t k = 0; k < theta_grid.size(); ++k) {
        const DensityMatrix rho = imperfect_state(2.0 * theta_grid[k], imp);
        std::array<CorrelationEstimate, 4> est;
        for (std::size_t j = 0; j < 4; ++j) {
            const AnalyzerSetting sp = AnalyzerSetting::linear(kChshPairs[j].first);
            const AnalyzerSetting sm = sp.orthogonal_port();
            const AnalyzerSetting ip = AnalyzerSetting::linear(kChshPairs[j].second);
            const AnalyzerSetting im = ip.orthogonal_port();
            est[j] = correlation_from_counts(expected_counts(rho, sp, ip, det).coincidences,
                                             expected_counts(rho, sm, im, det).coincidences,
                                             expected_counts(rho, sp, im, det).coincidences,
                                             expected_counts(rho, sm, ip, det).coincidences);
            est[j].variance = 0.0;
        }
        out[k] = bell_point_from_correlations(theta_grid[k], est);
    }
    return out;
}

SCurveFit fit_s_curve(const std::vector<BellPoint>& points) {
    if (points.size() < 8)
        throw std::invalid_argument("fit_s_curve: need at least 8 points");
    double lo = points.front().theta_h, hi = points.front().theta_h;
    for (const auto& p : points) {
        lo = std::min(lo, p.theta_h);
        hi = std::max(hi, p.theta_h);
    }
    if (hi - lo < kPi / 2.0 - 1e-9)
        throw std::invalid_argument("fit_s_curve: grid must span at least 90 deg of theta_h");

    SCurveFit fit;
    const auto solve_form = [&](bool absolute, double& a_out, double& b_out,
                                std::array<std::array<double, 2>, 2>& cov) {
        double s11 = 0.0, s1x = 0.0, sxx = 0.0, s1y = 0.0, sxy = 0.0, sse = 0.0;
        for (const auto& p : points) {
            double x = std::cos(4.0 * p.theta_h);
            if (absolute) x = std::abs(x);
            s11 += 1.0;
            s1x += x;
            sxx += x * x;
            s1y += p.s;
            sxy += x * p.s;
        }
        const double det = s11 * sxx - s1x * s1x;
        if (std::abs(det) < 1e-9 * s11 * s11)
            throw std::invalid_argument("fit_s_curve: degenerate grid");
        a_out = (sxx * s1y - s1x * sxy) / det;
        b_out = (s11 * sxy - s1x * s1y) / det;
        for (const auto& p : points) {
            double x = std::cos(4.0 * p.theta_h);
            if (absolute) x = std::abs(x);
            const double r = p.s - a_out - b_out * x;
            sse += r * r;
        }
        const double sigma2 =
            points.size() > 2 ? sse / static_cast<double>(points.size() - 2) : 0.0;
        cov[0][0] = sigma2 * sxx / det;
        cov[0][1] = cov[1][0] = -sigma2 * s1x / det;
        cov[1][1] = sigma2 * s11 / det;
    };
    solve_form(true, fit.a_abs, fit.b_abs, fit.cov_abs);
    solve_form(false, fit.a_cos, fit.b_cos, fit.cov_cos);
    return fit;
}

}  // namespace phasebench
