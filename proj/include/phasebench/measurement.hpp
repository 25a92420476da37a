// Projective polarization measurements on the photon pair.
//
// Each analyzer arm is a quarter-wave plate, then a half-wave plate, then a
// polarizing beam splitter whose transmitted port is H (the standard
// tomography arrangement). The projector state is the PBS-transmitted |H>
// back-propagated through the waveplate pair:
//   |m(h, q)> = QWP(q)^dag HWP(h)^dag |H>.
// The orthogonal (reflected) port of the same stack is realized by
// offsetting the half-wave plate by 45 degrees.
//
// A rotating linear analyzer at inclination Theta (from the x-axis) is the
// setting (hwp = Theta/2, qwp = Theta): the quarter-wave plate axis tracks
// the transmission direction, so the projector stays exactly linear.

#pragma once

#include <array>
#include <optional>
#include <string>

#include "phasebench/jones.hpp"
#include "phasebench/quantum.hpp"

namespace phasebench {

enum class Basis { H, V, D, A, R, L };

std::string basis_name(Basis b);
JonesVector basis_vector(Basis b);
Basis basis_orthogonal(Basis b);

struct AnalyzerSetting {
    double hwp = 0.0;  // radians, fast axis from vertical
    double qwp = 0.0;
    std::optional<Basis> label;

    /// Canonical setting for one of the six labeled bases. Checked at
    /// construction against the basis projector.
    static AnalyzerSetting labeled(Basis b);
    /// Linear analyzer at polarizer inclination theta (radians, from the
    /// x-axis).
    static AnalyzerSetting linear(double theta);
    static AnalyzerSetting raw(double hwp, double qwp);

    /// Same stack, half-wave plate offset by 45 degrees: projects onto the
    /// orthogonal port.
    AnalyzerSetting orthogonal_port() const;
};

/// The single-photon state |m> that makes the detector click with
/// probability |<m|psi>|^2.
JonesVector analyzer_projector(const AnalyzerSetting& setting);

/// Rank-1 two-qubit projector |m_s m_i><m_s m_i|.
Mat4c pair_projector(const AnalyzerSetting& s, const AnalyzerSetting& i);

struct MeasurementOutcome {
    double probability = 0.0;
    Mat4c projector;
};

double coincidence_probability(const TwoQubitPure& state, const AnalyzerSetting& s,
                               const AnalyzerSetting& i);
double coincidence_probability(const DensityMatrix& state, const AnalyzerSetting& s,
                               const AnalyzerSetting& i);

MeasurementOutcome measure_pair(const DensityMatrix& state, const AnalyzerSetting& s,
                                const AnalyzerSetting& i);

/// Probability that one arm alone passes its analyzer (partner ignored).
double singles_probability(const DensityMatrix& state, const AnalyzerSetting& setting,
                           Subsystem arm);
double singles_probability(const TwoQubitPure& state, const AnalyzerSetting& setting,
                           Subsystem arm);

/// Correlation of the +/- outcomes of linear analyzers at inclinations
/// theta_s, theta_i: P(+,+) + P(-,-) - P(+,-) - P(-,+), the +/- outcomes
/// being the transmitted and orthogonal PBS ports.
double correlation(const DensityMatrix& state, double theta_s, double theta_i);
double correlation(const TwoQubitPure& state, double theta_s, double theta_i);

struct ChshAngles {
    double theta_s, theta_i, theta_s_prime, theta_i_prime;

    /// (0, 22.5, 45, 67.5) degrees.
    static ChshAngles standard();
};

enum class ChshForm {
    AbsoluteValue,  // |C(s,i) - C(s,i')| + |C(s',i) + C(s',i')|, >= sqrt2 always
    Signed          // C(s,i) - C(s,i') + C(s',i) + C(s',i'), for cross-checks
};

double chsh(const DensityMatrix& state, const ChshAngles& angles = ChshAngles::standard(),
            ChshForm form = ChshForm::AbsoluteValue);
double chsh(const TwoQubitPure& state, const ChshAngles& angles = ChshAngles::standard(),
            ChshForm form = ChshForm::AbsoluteValue);

/// Closed form for the geometric-phase state at the standard angles:
/// sqrt2 + sqrt2 * |cos 2 phi|.
double chsh_closed_form(double phi);

/// Closed form of the coincidence probability for ideal linear analyzers on
/// the geometric-phase state:
/// (cos^2 Ts cos^2 Ti + sin^2 Ts sin^2 Ti - sin 2Ts sin 2Ti cos 2phi / 2)/2.
double coincidence_closed_form(double theta_s, double theta_i, double phi);

}  // namespace phasebench
