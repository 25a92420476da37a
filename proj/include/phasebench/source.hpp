// Black-box model of the Sagnac pair source: maps the pump polarization to
// the (HH, VV)-family two-photon state, applies birefringent propagation
// phases and their compensation, and produces the two-knob imperfect state
// (amplitude imbalance p, isotropic admixture v).

#pragma once

#include "phasebench/jones.hpp"
#include "phasebench/quantum.hpp"

namespace phasebench {

struct PumpState {
    JonesVector jones;
    double power_mw = 1.0;  // bookkeeping only

    void validate() const;  // jones normalized within 1e-12
};

struct SourceImperfection {
    double amplitude_p = 0.5;  // weight of HH vs VV
    double werner_v = 1.0;     // isotropic noise admixture

    void validate() const;  // both in [0, 1]
};

/// Pump (a|H> + b|V>) -> (conj(a)|HH> + conj(b)|VV>), global phase dropped.
/// The counter-propagating source geometry imprints the negative of the
/// pump's H/V relative phase on the pair, so a pump carrying geometric
/// phase phi, (e^{i phi}|H> - e^{-i phi}|V>)/sqrt2, produces
/// (|HH> - e^{2i phi}|VV>)/sqrt2. Amplitude moduli are preserved.
TwoQubitPure spdc_state(const PumpState& pump);

/// Birefringent propagation: |HH> picks up phi_h, |VV> picks up phi_v, so
/// the relative phase of |VV> vs |HH> grows by (phi_v - phi_h). Global
/// phase is dropped. Only states of the a|HH> + b|VV> family are supported
/// (HV/VH amplitudes below 1e-12); anything else throws.
TwoQubitPure birefringent_evolve(const TwoQubitPure& state, double phi_h, double phi_v);

/// The QHQ half-wave plate angle that cancels the birefringent phases:
/// theta_h such that 2*phi + phi_v - phi_h = 0 with phi = 2*theta_h,
/// reduced to [0, pi/2).
double compensation_angle(double phi_h, double phi_v);

/// rho = v |psi><psi| + (1-v) I/4 with
/// |psi> = sqrt(p)|HH> - e^{2i phi} sqrt(1-p)|VV>.
DensityMatrix imperfect_state(double phi, const SourceImperfection& imp);

/// The phi for which state ~ a|HH> - e^{2i phi} b|VV> (a, b >= 0), reduced
/// to [0, pi). States with a vanishing HH or VV amplitude report 0.
double relative_gp_phase(const TwoQubitPure& state);

}  // namespace phasebench
