#include "sqz/devices.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sqz {

namespace {

void require(bool ok, const char *what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

void CrystalConfig::validate() const {
    require(chi_eff > 0.0 && chi_eff < 1e-9, "chi_eff must lie in (0, 1e-9) m/V");
    require(refractive_index > 0.0, "refractive index must be positive");
    require(length > 0.0, "crystal length must be positive");
    require(signal_wavelength > 0.0, "signal wavelength must be positive");
}

void PumpConfig::validate() const {
    require(power > 0.0, "pump power must be positive");
    require(waist_radius > 0.0, "pump waist must be positive");
}

void OpaConfig::validate() const {
    require(gamma > 0.0, "OPA gamma must be positive");
    require(eta >= 0.0 && eta <= 1.0, "OPA efficiency must lie in [0, 1]");
    require(pump_ratio >= 0.0, "pump ratio must be non-negative");
    if (pump_ratio >= 1.0) {
        throw std::domain_error("pump ratio >= 1 is above threshold; the below-threshold model does not apply");
    }
}

void CavityConfig::validate() const {
    require(roundtrip_length > 0.0, "round-trip length must be positive");
    require(roundtrip_loss_excl_coupler > 0.0 && roundtrip_loss_excl_coupler < 1.0, "round-trip loss must lie in (0, 1)");
    require(output_coupler_T > 0.0 && output_coupler_T < 1.0, "coupler transmission must lie in (0, 1)");
    require(roundtrip_loss_excl_coupler + output_coupler_T < 0.5, "loss + coupler must stay below 0.5 (weak coupling)");
}

PumpField pump_field_amplitude(const PumpConfig &pump, const CrystalConfig &crystal) {
    pump.validate();
    require(crystal.refractive_index > 0.0, "refractive index must be positive");
    const double intensity = pump.power / (std::numbers::pi * pump.waist_radius * pump.waist_radius);
    const double amplitude =
        std::sqrt(intensity / (2.0 * crystal.refractive_index * kVacuumPermittivity * kSpeedOfLight));
    return {intensity, amplitude};
}

double single_pass_r(const CrystalConfig &crystal, const PumpConfig &pump) {
    crystal.validate();
    const auto field = pump_field_amplitude(pump, crystal);
    const double omega = 2.0 * std::numbers::pi * kSpeedOfLight / crystal.signal_wavelength;
    return crystal.chi_eff * omega / (crystal.refractive_index * kSpeedOfLight) * field.amplitude * crystal.length;
}

CavityFigures cavity_figures(const CavityConfig &cavity) {
    cavity.validate();
    const double total = cavity.roundtrip_loss_excl_coupler + cavity.output_coupler_T;
    CavityFigures f{};
    f.fsr = kSpeedOfLight / cavity.roundtrip_length;
    f.finesse = std::numbers::pi / total;
    f.gamma = f.fsr / f.finesse;
    f.fwhm = 2.0 * f.gamma;
    f.escape_efficiency = cavity.output_coupler_T / total;
    return f;
}

double opa_v_minus(double eta, double pump_ratio, double nu_over_gamma) {
    require(eta >= 0.0 && eta <= 1.0, "OPA efficiency must lie in [0, 1]");
    require(pump_ratio >= 0.0 && pump_ratio <= 1.0, "pump ratio must lie in [0, 1]");
    const double s = std::sqrt(pump_ratio);
    const double x2 = nu_over_gamma * nu_over_gamma;
    // 1/2 - 2 eta s / D rewritten without cancellation near threshold.
    const double num = x2 + (1.0 - s) * (1.0 - s) + 4.0 * s * (1.0 - eta);
    return num / (2.0 * (x2 + (1.0 + s) * (1.0 + s)));
}

double opa_v_plus(double eta, double pump_ratio, double nu_over_gamma) {
    require(eta >= 0.0 && eta <= 1.0, "OPA efficiency must lie in [0, 1]");
    require(pump_ratio >= 0.0, "pump ratio must be non-negative");
    if (pump_ratio >= 1.0) {
        throw std::domain_error("anti-squeezed variance diverges at and above threshold");
    }
    const double s = std::sqrt(pump_ratio);
    const double x2 = nu_over_gamma * nu_over_gamma;
    const double den = x2 + (1.0 - s) * (1.0 - s);
    return (den + 4.0 * eta * s) / (2.0 * den);
}

NoiseSpectrum opa_spectrum(const OpaConfig &opa, const std::vector<double> &freqs) {
    opa.validate();
    NoiseSpectrum spec;
    spec.freqs = freqs;
    spec.v_plus.reserve(freqs.size());
    spec.v_minus.reserve(freqs.size());
    for (double nu : freqs) {
        spec.v_plus.push_back(opa_v_plus(opa.eta, opa.pump_ratio, nu / opa.gamma));
        spec.v_minus.push_back(opa_v_minus(opa.eta, opa.pump_ratio, nu / opa.gamma));
    }
    std::ostringstream meta;
    meta << "opa gamma=" << opa.gamma << " eta=" << opa.eta << " pump_ratio=" << opa.pump_ratio;
    spec.meta = meta.str();
    return spec;
}

EffectiveState effective_gaussian_state(const OpaConfig &opa, double nu) {
    opa.validate();
    const double vm = opa_v_minus(opa.eta, opa.pump_ratio, nu / opa.gamma);
    const double vp = opa_v_plus(opa.eta, opa.pump_ratio, nu / opa.gamma);
    if (vp * vm < 0.25 - kPhysicsTol) {
        std::ostringstream msg;
        msg << "OPA variances violate the uncertainty principle: V+ V- = " << vp * vm << " < 1/4";
        throw std::domain_error(msg.str());
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = vm;
    cov(1, 1) = vp;
    const bool near_singular = !(vm > 0.0) || vp / vm > 1e8;
    return {GaussianState(Eigen::VectorXd::Zero(2), cov), near_singular};
}

}  // namespace sqz
