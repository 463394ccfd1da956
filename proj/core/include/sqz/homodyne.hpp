#pragma once

// Homodyne measurement layer: quadrature sampling, time-domain photocurrents,
// Welch spectra and filtered-backprojection Wigner tomography.
//
// Photocurrent units: a trace sampled at interval dt stores a density whose
// white part has per-sample variance V/dt, where V is the quadrature variance
// in vacuum units (SQL = 1/2). Spectra are two-sided densities, so white noise
// of quadrature variance V shows up as a flat floor at V for any sample rate.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"

namespace sqz {

/// Deterministic child seed for stream `stream` of a parent seed (splitmix64).
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

struct QuadratureSample {
    double theta;  ///< LO phase in [0, 2 pi)
    double x;
};

struct QuadratureDataset {
    std::vector<QuadratureSample> samples;
    std::string source_meta;
    std::uint64_t rng_seed = 0;
};

/// Draws n_per_theta samples of X_theta for every theta in `thetas`.
QuadratureDataset sample_quadratures(const GaussianState &state, std::size_t mode, const std::vector<double> &thetas,
                                     std::size_t n_per_theta, std::uint64_t seed);
/// Fock path: inverse-CDF sampling of the rotated Hermite-function marginal of
/// the reduced state of `mode`. Throws std::invalid_argument if the state is
/// not normalized to 1e-6.
QuadratureDataset sample_quadratures(const FockState &state, std::size_t mode, const std::vector<double> &thetas,
                                     std::size_t n_per_theta, std::uint64_t seed);

/// Marginal density of X_theta for the reduced state of `mode` at each x.
std::vector<double> fock_quadrature_density(const FockState &state, std::size_t mode, double theta,
                                            const std::vector<double> &xs);

/// Evenly spaced phases k pi / n_phases, k = 0..n_phases-1.
std::vector<double> uniform_phases(std::size_t n_phases);

void write_dataset_csv(std::ostream &out, const QuadratureDataset &data);
QuadratureDataset read_dataset_csv(std::istream &in);

struct PhotocurrentTrace {
    double dt = 0.0;
    std::vector<double> values;
    double sql_variance = 0.0;  ///< per-sample variance of a vacuum trace, 0.5/dt

    double sample_rate() const { return 1.0 / dt; }
    /// Throws std::invalid_argument for dt <= 0 or fewer than two samples.
    void validate() const;
};

/// White photocurrent with quadrature variance `quad_variance`.
PhotocurrentTrace white_photocurrent(double quad_variance, double fs, std::size_t n_samples, std::uint64_t seed);

/// Integral of phi(t) I(t) dt. `mode_fn` must satisfy sum phi^2 dt = 1 to 1e-6.
double matched_filter_quadrature(const PhotocurrentTrace &trace, const std::vector<double> &mode_fn);

enum class DriftModel {
    /// Two cascaded first-order relaxations with the same timescale. The
    /// spectrum falls as 1/f^4 above the corner.
    SecondOrderMarkov,
    /// Single relaxation (Lorentzian spectrum, 1/f^2 tail).
    OrnsteinUhlenbeck,
};

struct DriftOptions {
    DriftModel model = DriftModel::SecondOrderMarkov;
    /// Additive white electronic noise, quadrature-variance units. Off by default.
    double electronic_variance = 0.0;
};

/// White quadrature noise plus a slow zero-point drift. `drift_amplitude` is
/// the drift standard deviation in units of the per-sample SQL standard
/// deviation, so the total variance is (2 V + A^2) times the SQL.
PhotocurrentTrace photocurrent_with_drift(double quad_variance, double drift_amplitude, double drift_timescale,
                                          double fs, double duration, std::uint64_t seed,
                                          const DriftOptions &options = {});

struct PowerSpectrum {
    std::vector<double> freqs;  ///< Hz, 0 .. fs/2
    std::vector<double> power;  ///< two-sided density, quadrature-variance units
    std::size_t segment_length = 0;
    std::size_t n_segments = 0;

    /// Mean power over bins with f_lo <= f < f_hi.
    double band_mean(double f_lo, double f_hi) const;
};

/// Welch estimate with Hann windows and 50 % overlap. n_segments >= 4.
PowerSpectrum spectrum(const PhotocurrentTrace &trace, std::size_t n_segments);

struct NoiseSpectrum {
    std::vector<double> freqs;
    std::vector<double> v_plus;
    std::vector<double> v_minus;
    std::string meta;
};

void write_spectrum_csv(std::ostream &out, const NoiseSpectrum &spec);
void write_power_csv(std::ostream &out, const PowerSpectrum &spec);

/// Cosine and sine components of the trace at the DFT bin nearest `freq`,
/// scaled so that a white trace of quadrature variance V gives variance V in
/// each component.
struct SidebandQuadratures {
    double freq;  ///< frequency of the bin actually used
    double x_cos;
    double x_sin;
};
SidebandQuadratures sideband_quadratures(const PhotocurrentTrace &trace, double freq);

/// Ram-Lak cutoff used when none is given: 1.5 sqrt(ln n) / sigma_min, with
/// n the mean samples per phase and sigma_min the smallest per-phase standard deviation.
double default_filter_cutoff(const QuadratureDataset &data);

/// Filtered-backprojection estimate of W at rows (x, p) of `points`.
/// filter_cutoff <= 0 selects default_filter_cutoff. Throws
/// std::invalid_argument with fewer than 12 distinct phases in [0, pi).
std::vector<double> reconstruct_wigner(const QuadratureDataset &data, const Eigen::MatrixXd &points,
                                       double filter_cutoff = 0.0);

struct BootstrapEstimate {
    double value;
    double stddev;
};

/// W(x, p) with a bootstrap standard deviation (resampling within each phase).
BootstrapEstimate bootstrap_wigner(const QuadratureDataset &data, double x, double p, std::size_t n_resamples,
                                   std::uint64_t seed, double filter_cutoff = 0.0);

struct GaussianFit {
    double center_x;
    double center_p;
    double major_variance;
    double minor_variance;
    double angle;  ///< direction of the major axis, rad

    double axis_ratio() const;  ///< sqrt(major / minor)
};

/// Weighted least-squares fit of log W to a quadratic form using grid points
/// where W exceeds `threshold` times its maximum.
GaussianFit fit_gaussian_wigner(const Eigen::MatrixXd &points, const std::vector<double> &values,
                                double threshold = 0.2);

/// Square grid with n x n points on [-half_width, half_width]^2, rows (x, p).
Eigen::MatrixXd square_grid(double half_width, std::size_t n);

void write_wigner_csv(std::ostream &out, const Eigen::MatrixXd &points, const std::vector<double> &values);

}  // namespace sqz
