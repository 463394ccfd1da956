#pragma once

// Truncated photon-number-basis engine.
//
// A FockState over N modes with cutoff d stores d^N complex amplitudes for
// photon numbers 0..d-1 in every mode, flattened row-major in mode order
// (mode 0 varies slowest). Storage is dense; N <= 3 and d <= 64 is the
// supported envelope, which covers every pipeline in this library.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqz/gaussian.hpp"

namespace sqz {

using cplx = std::complex<double>;

inline constexpr double kDefaultLeakTolerance = 1e-6;
inline constexpr std::size_t kMaxFockModes = 3;
inline constexpr std::size_t kMaxFockCutoff = 64;

/// Thrown when a conditional operation leaves nothing behind (e.g. a|0>).
class ZeroStateError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class FockState {
   public:
    /// `norm_leak` is the probability mass known to be missing because of
    /// truncation. A leak above `leak_tolerance` marks the state with a warning.
    FockState(std::size_t n_modes, std::size_t cutoff, std::vector<cplx> amps, double norm_leak = 0.0,
              double leak_tolerance = kDefaultLeakTolerance);

    /// Product Fock state |n_0, n_1, ...>.
    static FockState basis(std::size_t cutoff, const std::vector<std::size_t> &occupation);

    std::size_t n_modes() const { return n_modes_; }
    std::size_t cutoff() const { return cutoff_; }
    std::size_t size() const { return amps_.size(); }
    const std::vector<cplx> &amps() const { return amps_; }

    cplx amplitude(const std::vector<std::size_t> &occupation) const;
    std::size_t index(const std::vector<std::size_t> &occupation) const;
    std::vector<std::size_t> occupation(std::size_t index) const;

    /// Sum of |amp|^2.
    double norm_squared() const;
    double norm_leak() const { return norm_leak_; }
    double leak_tolerance() const { return leak_tolerance_; }
    bool leak_warning() const { return norm_leak_ > leak_tolerance_; }

    FockState normalized() const;
    /// Copy with the cutoff raised (zero padded); lowering is not allowed.
    FockState padded(std::size_t cutoff) const;

    /// Stride of `mode` in the flattened amplitude vector.
    std::size_t stride(std::size_t mode) const;

   private:
    std::size_t n_modes_;
    std::size_t cutoff_;
    std::vector<cplx> amps_;
    double norm_leak_;
    double leak_tolerance_;
};

// Analytic families. Amplitudes are exact values of the untruncated state;
// they are not renormalized after truncation.
FockState coherent_fock(cplx alpha, std::size_t cutoff);
FockState squeezed_vacuum_fock(double r, std::size_t cutoff);
FockState tmsv_fock(double r, std::size_t cutoff);
/// Normalized |alpha> + sign |-alpha> (sign = +1 even, -1 odd kitten).
FockState cat_fock(cplx alpha, int sign, std::size_t cutoff);

/// Smallest cutoff whose analytic tail mass is below `tail`.
std::size_t suggest_cutoff_coherent(cplx alpha, double tail = 1e-8);
std::size_t suggest_cutoff_squeezed(double r, double tail = 1e-8);
std::size_t suggest_cutoff_tmsv(double r, double tail = 1e-8);

/// a (x) b, with cutoffs reconciled to the larger one.
FockState tensor(const FockState &a, const FockState &b);

struct Annihilated {
    FockState state;
    double probability;  ///< ||a psi||^2 / ||psi||^2
};

/// Normalized a_mode |psi>. Throws ZeroStateError for a zero result.
Annihilated apply_annihilation(const FockState &state, std::size_t mode);

/// Beam splitter with a_i' = tau a_i - rho a_j, a_j' = tau a_j + rho a_i for
/// the mode operators. Exact on every photon-number sector; weight pushed past
/// the cutoff is added to norm_leak.
FockState beam_splitter_fock(const FockState &state, ModePair modes, double tau, double rho);

/// Exact displacement matrix elements <m|D(alpha)|n>, m < rows, n < cols.
Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t rows, std::size_t cols);

FockState displace_fock(const FockState &state, std::size_t mode, cplx alpha);

/// |<a|b>|^2 of the normalized states; cutoffs reconciled by zero padding.
double fidelity(const FockState &a, const FockState &b);

struct Detector {
    enum class Kind { Click, PhotonNumber };
    Kind kind = Kind::Click;
    std::size_t photons = 1;  ///< used by PhotonNumber

    static Detector click() { return {}; }
    static Detector photon_number(std::size_t n) { return {Kind::PhotonNumber, n}; }
};

/// One pure component of a conditional (generally mixed) state.
struct Branch {
    std::vector<std::size_t> outcomes;  ///< photon numbers of the projected modes
    double probability;                 ///< joint probability of this outcome
    FockState state;                    ///< normalized remaining state
};

/// Result of a heralding measurement: the mixture sum_k p_k |psi_k><psi_k|.
struct ConditionalState {
    FockState state;     ///< most probable pure branch
    double probability;  ///< total success probability
    std::vector<Branch> branches;

    /// <target| rho |target> for the normalized conditional mixture.
    double fidelity_with(const FockState &target) const;
    /// Branch with exactly these outcomes, or nullptr.
    const Branch *find(const std::vector<std::size_t> &outcomes) const;
    /// Traces out one more mode of the branches, splitting them in the Fock basis.
    ConditionalState trace_mode(std::size_t mode) const;
};

/// Projects `mode` onto the detector outcome (click: n >= 1) and removes it.
/// Throws ZeroStateError when the outcome has zero probability.
ConditionalState herald_click(const FockState &state, std::size_t mode, Detector detector = Detector::click());

/// Reduced density matrix of one mode.
Eigen::MatrixXcd reduced_density_matrix(const FockState &state, std::size_t mode);

/// Wigner function of one mode at rows (x, p) of `points`, via displaced
/// parity: W = (1/pi) sum_n (-1)^n <n|D(-beta) rho D(-beta)^dag|n>, beta = (x+ip)/sqrt2.
/// Throws std::invalid_argument when the mode is entangled with the rest.
std::vector<double> wigner_fock(const FockState &state, const Eigen::MatrixXd &points, std::size_t mode = 0);

struct QuadratureMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// First and symmetrized second quadrature moments of the normalized state.
QuadratureMoments quadrature_moments(const FockState &state);

std::vector<double> photon_number_distribution(const FockState &state, std::size_t mode);
double mean_photon_number(const FockState &state, std::size_t mode);
double parity_expectation(const FockState &state, std::size_t mode);

/// Loss as a beam splitter with a vacuum ancilla appended as the last mode.
FockState apply_loss_dilated(const FockState &state, std::size_t mode, double transmissivity);

// "fstate-v1" JSON serialization.
std::string to_json(const FockState &state);
FockState fock_state_from_json(const std::string &text);

}  // namespace sqz
