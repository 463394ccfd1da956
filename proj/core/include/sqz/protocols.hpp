#pragma once

// Composite pipelines: coherent-state teleportation, squeezed-light phase
// readout in a dark-port interferometer, and heralded non-Gaussian states.

#include <complex>
#include <vector>

#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"

namespace sqz {

struct TeleportResult {
    GaussianState output_state;
    double added_noise_per_quadrature;
    /// Overlap of the input with the output; the fidelity when the input is pure.
    double coherent_fidelity;
};

/// Teleports a single-mode Gaussian input with a two-mode squeezed resource of
/// strength r. Output mean = gain * input mean; output covariance
/// gain^2 V + [(1 + gain^2) cosh(2r)/2 - gain sinh(2r)] I, which is V + e^{-2r} I
/// at unit gain. Throws std::invalid_argument for r < 0.
TeleportResult teleport_gaussian(const GaussianState &input, double r, double gain = 1.0);

/// 1 / (1 + e^{-2r}), the unit-gain coherent-state fidelity.
double coherent_teleport_fidelity(double r);
/// Resource squeezing needed for a unit-gain fidelity F in [1/2, 1).
double resource_for_fidelity(double fidelity);

struct TeleportWignerCheck {
    double discrepancy;  ///< max |W_integral - W_closed| over the grid
    bool grid_coarse;    ///< grid spacing or extent too small to resolve the output
    std::vector<double> output_wigner;  ///< from the integral, row-major square grid
};

/// Builds the output Wigner function by integrating the input Wigner function
/// against the resource state over the measured variables (Gauss-Hermite
/// quadrature), and compares with the closed form of teleport_gaussian on a
/// square_grid(half_width, n) grid.
TeleportWignerCheck teleport_wigner_check(const GaussianState &input, double r, double half_width, std::size_t n,
                                          double gain = 1.0);

struct PhaseEstimate {
    double phi_true;
    double signal_displacement;  ///< mean of P in the dark port, sqrt2 phi alpha
    double readout_variance;
    double snr;
    double phi_min_detectable;
    bool outside_linear_regime;  ///< |phi| > 0.1
};

/// Dark-port readout with a P-squeezed vacuum of strength dark_port_r and
/// detection efficiency eta_detect.
PhaseEstimate gw_phase_readout(double phi, double alpha, double dark_port_r, double eta_detect);

/// Detection efficiency at which a dark-port squeeze r yields `improvement_db`
/// of net noise reduction below the SQL. Throws std::domain_error when even
/// eta = 1 cannot reach it.
double eta_for_improvement(double dark_port_r, double improvement_db);

struct HeraldedState {
    ConditionalState conditional;
    FockState state;     ///< most probable branch
    double probability;  ///< click probability
    double fidelity;     ///< fidelity of the heralded mixture with the target
};

/// TMSV(r) with a click detector on the idler; target |1>.
HeraldedState make_heralded_photon(double r, std::size_t cutoff);

/// Squeezed vacuum tapped by a beam splitter of reflectivity rho, click on the
/// tap. Target: the odd kitten |a> - |-a> with a = i sqrt(r) (X-squeezed input).
HeraldedState make_kitten(double r, std::size_t cutoff, double rho);

/// Reference odd kitten used by make_kitten.
FockState ideal_odd_kitten(double r, std::size_t cutoff);

/// The tap mode is mixed with a weak coherent ancilla before the click; the
/// ancilla output port is traced out. Branch outcomes are {click photons,
/// ancilla-port photons}. The target is the squeezed vacuum (even kitten).
HeraldedState engineer_kitten_superposition(double r, std::complex<double> ancilla_alpha, double rho_tap,
                                            double rho_mix, std::size_t cutoff);

}  // namespace sqz
