#include "phasebench/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace phasebench {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string basis_name(Basis b) {
    switch (b) {
        case Basis::H: return "H";
        case Basis::V: return "V";
        case Basis::D: return "D";
        case Basis::A: return "A";
        case Basis::R: return "R";
        case Basis::L: return "L";
    }
    return "?";
}

JonesVector basis_vector(Basis b) {
    switch (b) {
        case Basis::H: return basis_h();
        case Basis::V: return basis_v();
        case Basis::D: return basis_d();
        case Basis::A: return basis_a();
        case Basis::R: return basis_r();
        case Basis::L: return basis_l();
    }
    throw std::invalid_argument("basis_vector: unknown basis");
}

Basis basis_orthogonal(Basis b) {
    switch (b) {
        case Basis::H: return Basis::V;
        case Basis::V: return Basis::H;
        case Basis::D: return Basis::A;
        case Basis::A: return Basis::D;
        case Basis::R: return Basis::L;
        case Basis::L: return Basis::R;
    }
    throw std::invalid_argument("basis_orthogonal: unknown basis");
}

AnalyzerSetting AnalyzerSetting::labeled(Basis b) {
    AnalyzerSetting s;
    switch (b) {
        case Basis::H: s = linear(0.0); break;
        case Basis::V: s = linear(deg2rad(90.0)); break;
        case Basis::D: s = linear(deg2rad(45.0)); break;
        case Basis::A: s = linear(deg2rad(135.0)); break;
        case Basis::R: s = raw(deg2rad(67.5), 0.0); break;
        case Basis::L: s = raw(deg2rad(22.5), 0.0); break;
    }
    s.label = b;
    // Construction check: the waveplate stack must reproduce the canonical
    // projector up to phase.
    const double overlap = std::norm(inner(analyzer_projector(s), basis_vector(b)));
    if (std::abs(overlap - 1.0) > 1e-12)
        throw std::logic_error("AnalyzerSetting::labeled: canonical projector mismatch for " +
                               basis_name(b));
    return s;
}

AnalyzerSetting AnalyzerSetting::linear(double theta) {
    return raw(0.5 * theta, theta);
}

AnalyzerSetting AnalyzerSetting::raw(double hwp, double qwp) {
    AnalyzerSetting s;
    s.hwp = hwp;
    s.qwp = qwp;
    return s;
}

AnalyzerSetting AnalyzerSetting::orthogonal_port() const {
    AnalyzerSetting s = raw(hwp + deg2rad(45.0), qwp);
    if (label) s.label = basis_orthogonal(*label);
    return s;
}

JonesVector analyzer_projector(const AnalyzerSetting& setting) {
    // Forward field at the PBS is HWP * QWP * |in> (the photon meets the
    // quarter-wave plate first), so |m> = (HWP * QWP)^dag |H>.
    const JonesMatrix stack_adj =
        (half_wave_plate(setting.hwp) * quarter_wave_plate(setting.qwp)).adjoint();
    return (stack_adj * basis_h()).normalized();
}

Mat4c pair_projector(const AnalyzerSetting& s, const AnalyzerSetting& i) {
    const JonesVector ms = analyzer_projector(s);
    const JonesVector mi = analyzer_projector(i);
    const std::array<cdouble, 4> m{ms.h * mi.h, ms.h * mi.v, ms.v * mi.h, ms.v * mi.v};
    Mat4c p;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) p(a, b) = m[a] * std::conj(m[b]);
    return p;
}

double coincidence_probability(const TwoQubitPure& state, const AnalyzerSetting& s,
                               const AnalyzerSetting& i) {
    if (!state.is_normalized(1e-10))
        throw std::invalid_argument("coincidence_probability: state not normalized");
    const JonesVector ms = analyzer_projector(s);
    const JonesVector mi = analyzer_projector(i);
    const cdouble amp = std::conj(ms.h) * (std::conj(mi.h) * state.amp[0] + std::conj(mi.v) * state.amp[1]) +
                        std::conj(ms.v) * (std::conj(mi.h) * state.amp[2] + std::conj(mi.v) * state.amp[3]);
    return std::norm(amp);
}

double coincidence_probability(const DensityMatrix& state, const AnalyzerSetting& s,
                               const AnalyzerSetting& i) {
    state.require_physical("coincidence_probability");
    const Mat4c proj = pair_projector(s, i);
    const double p = (state.m * proj).trace().real();
    return std::max(0.0, p);
}

MeasurementOutcome measure_pair(const DensityMatrix& state, const AnalyzerSetting& s,
                                const AnalyzerSetting& i) {
    MeasurementOutcome out;
    out.projector = pair_projector(s, i);
    state.require_physical("measure_pair");
    out.probability = std::max(0.0, (state.m * out.projector).trace().real());
    return out;
}

double singles_probability(const DensityMatrix& state, const AnalyzerSetting& setting,
                           Subsystem arm) {
    const Mat2c reduced = partial_trace(state, arm);
    const JonesVector m = analyzer_projector(setting);
    const std::array<cdouble, 2> mv{m.h, m.v};
    const auto rm = reduced * mv;
    const cdouble p = std::conj(mv[0]) * rm[0] + std::conj(mv[1]) * rm[1];
    return std::max(0.0, p.real());
}

double singles_probability(const TwoQubitPure& state, const AnalyzerSetting& setting,
                           Subsystem arm) {
    return singles_probability(DensityMatrix::from_pure(state), setting, arm);
}

namespace {

template <typename State>
double correlation_impl(const State& state, double theta_s, double theta_i) {
    const AnalyzerSetting sp = AnalyzerSetting::linear(theta_s);
    const AnalyzerSetting sm = sp.orthogonal_port();
    const AnalyzerSetting ip = AnalyzerSetting::linear(theta_i);
    const AnalyzerSetting im = ip.orthogonal_port();
    return coincidence_probability(state, sp, ip) + coincidence_probability(state, sm, im) -
           coincidence_probability(state, sp, im) - coincidence_probability(state, sm, ip);
}

template <typename State>
double chsh_impl(const State& state, const ChshAngles& a, ChshForm form) {
    const double c1 = correlation_impl(state, a.theta_s, a.theta_i);
    const double c2 = correlation_impl(state, a.theta_s, a.theta_i_prime);
    const double c3 = correlation_impl(state, a.theta_s_prime, a.theta_i);
    const double c4 = correlation_impl(state, a.theta_s_prime, a.theta_i_prime);
    if (form == ChshForm::AbsoluteValue) return std::abs(c1 - c2) + std::abs(c3 + c4);
    return c1 - c2 + c3 + c4;
}

}  // namespace

double correlation(const DensityMatrix& state, double theta_s, double theta_i) {
    return correlation_impl(state, theta_s, theta_i);
}

double correlation(const TwoQubitPure& state, double theta_s, double theta_i) {
    return correlation_impl(state, theta_s, theta_i);
}

ChshAngles ChshAngles::standard() {
    return {0.0, deg2rad(22.5), deg2rad(45.0), deg2rad(67.5)};
}

double chsh(const DensityMatrix& state, const ChshAngles& angles, ChshForm form) {
    return chsh_impl(state, angles, form);
}

double chsh(const TwoQubitPure& state, const ChshAngles& angles, ChshForm form) {
    return chsh_impl(state, angles, form);
}

double chsh_closed_form(double phi) {
    const double s2 = std::numbers::sqrt2;
    return s2 + s2 * std::abs(std::cos(2.0 * phi));
}

double coincidence_closed_form(double theta_s, double theta_i, double phi) {
    const double cs = std::cos(theta_s), ss = std::sin(theta_s);
    const double ci = std::cos(theta_i), si = std::sin(theta_i);
    return 0.5 * (cs * cs * ci * ci + ss * ss * si * si -
                  0.5 * std::sin(2.0 * theta_s) * std::sin(2.0 * theta_i) * std::cos(2.0 * phi));
}

}  // namespace phasebench
