#pragma once

// Device models: single-pass parametric gain, cavity figures of merit and the
// below-threshold OPA output spectrum. All inputs are SI.

#include "sqz/gaussian.hpp"
#include "sqz/homodyne.hpp"

namespace sqz {

inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

struct CrystalConfig {
    double chi_eff = 0.0;            ///< effective nonlinearity, m/V
    double refractive_index = 0.0;
    double length = 0.0;             ///< m
    double signal_wavelength = 0.0;  ///< m

    void validate() const;
};

struct PumpConfig {
    double power = 0.0;         ///< W
    double waist_radius = 0.0;  ///< m

    void validate() const;
};

struct OpaConfig {
    double gamma = 0.0;       ///< cavity half-linewidth, Hz (the full linewidth is 2 gamma)
    double eta = 1.0;         ///< overall detection and escape efficiency
    double pump_ratio = 0.0;  ///< P / P_threshold, below threshold: [0, 1)

    void validate() const;
};

struct CavityConfig {
    double roundtrip_length = 0.0;             ///< m
    double roundtrip_loss_excl_coupler = 0.0;  ///< fraction
    double output_coupler_T = 0.0;             ///< fraction

    void validate() const;
};

struct PumpField {
    double intensity;  ///< W/m^2, P / (pi w^2)
    double amplitude;  ///< V/m, sqrt(I / (2 n eps0 c))
};

PumpField pump_field_amplitude(const PumpConfig &pump, const CrystalConfig &crystal);

/// r = chi_eff * Omega / (n c) * |E_p| * L with Omega = 2 pi c / lambda_signal.
double single_pass_r(const CrystalConfig &crystal, const PumpConfig &pump);

struct CavityFigures {
    double fsr;                ///< Hz, c / L
    double finesse;            ///< pi / T_total
    double gamma;              ///< Hz, fsr / finesse
    double fwhm;               ///< Hz, 2 gamma
    double escape_efficiency;  ///< coupler / (coupler + loss)
};

CavityFigures cavity_figures(const CavityConfig &cavity);

/// V-(nu) = 1/2 - eta 2 s / ((nu/gamma)^2 + (1 + s)^2), s = sqrt(pump_ratio).
/// Finite at threshold, so pump_ratio may be 1 here.
double opa_v_minus(double eta, double pump_ratio, double nu_over_gamma);
/// V+(nu) = 1/2 + eta 2 s / ((nu/gamma)^2 + (1 - s)^2). Requires pump_ratio < 1.
double opa_v_plus(double eta, double pump_ratio, double nu_over_gamma);

/// Rejects pump_ratio >= 1 with std::domain_error.
NoiseSpectrum opa_spectrum(const OpaConfig &opa, const std::vector<double> &freqs);

struct EffectiveState {
    GaussianState state;  ///< Var(X) = V-, Var(P) = V+, zero mean
    bool near_singular;   ///< V+/V- beyond 1e8
};

EffectiveState effective_gaussian_state(const OpaConfig &opa, double nu);

}  // namespace sqz
