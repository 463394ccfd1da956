#pragma once

// Gaussian-state engine.
//
// Conventions used throughout the library: [X, P] = i (hbar = 1), so the
// vacuum has Var(X) = Var(P) = 1/2 and a = (X + iP)/sqrt(2). Quadratures are
// ordered (X1, P1, X2, P2, ...). X_theta = X cos(theta) + P sin(theta).

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sqz {

inline constexpr double kVacuumVariance = 0.5;

/// Tolerance for structural checks (symmetry, symplectic condition).
inline constexpr double kStructuralTol = 1e-10;
/// Tolerance for physical inequalities (uncertainty principle).
inline constexpr double kPhysicsTol = 1e-9;

struct ModePair {
    std::size_t first;
    std::size_t second;
};

class GaussianState {
   public:
    /// Validates symmetry and the uncertainty principle; throws std::invalid_argument.
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size() / 2); }
    const Eigen::VectorXd &mean() const { return mean_; }
    const Eigen::MatrixXd &cov() const { return cov_; }

    /// Symplectic eigenvalues in ascending order (all >= 1/2 for a physical state).
    Eigen::VectorXd symplectic_eigenvalues() const;

    /// Mean and covariance restricted to a subset of modes (partial trace).
    GaussianState reduced(const std::vector<std::size_t> &modes) const;

   private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// Affine symplectic map r -> matrix * r + shift.
struct SymplecticOp {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd shift;

    std::size_t n_modes() const { return static_cast<std::size_t>(matrix.rows() / 2); }
    bool is_symplectic(double tol = kStructuralTol) const;
    GaussianState apply(const GaussianState &state) const;
    /// (this * other): apply `other` first.
    SymplecticOp compose(const SymplecticOp &other) const;

    static SymplecticOp identity(std::size_t n_modes);
};

Eigen::MatrixXd symplectic_form(std::size_t n_modes);

// Operation builders. All throw std::invalid_argument on bad mode indices.
SymplecticOp squeezing_op(std::size_t n_modes, std::size_t mode, double r, double phi = 0.0);
SymplecticOp two_mode_squeezing_op(std::size_t n_modes, ModePair modes, double r);
SymplecticOp beam_splitter_op(std::size_t n_modes, ModePair modes, double tau, double rho);
SymplecticOp rotation_op(std::size_t n_modes, std::size_t mode, double angle);
SymplecticOp displacement_op(std::size_t n_modes, std::size_t mode, std::complex<double> alpha);

GaussianState vacuum(std::size_t n_modes);

/// Squeezes along the direction X_phi: Var(X_phi) -> e^{-2r} Var(X_phi) for vacuum.
GaussianState squeeze(const GaussianState &state, std::size_t mode, double r, double phi = 0.0);

/// X_i - X_j and P_i + P_j are squeezed by e^{-r}.
GaussianState two_mode_squeeze(const GaussianState &state, ModePair modes, double r);

/// a_i' = tau a_i - rho a_j, a_j' = tau a_j + rho a_i. Requires tau^2 + rho^2 = 1.
GaussianState beam_splitter(const GaussianState &state, ModePair modes, double tau, double rho);

/// Phase shift a -> a e^{i angle}.
GaussianState rotate(const GaussianState &state, std::size_t mode, double angle);

/// Shifts the mode mean by (sqrt2 Re alpha, sqrt2 Im alpha).
GaussianState displace(const GaussianState &state, std::size_t mode, std::complex<double> alpha);

/// Pure-loss channel of transmissivity T: V -> T V + (1 - T)/2, mean -> sqrt(T) mean.
GaussianState loss_channel(const GaussianState &state, std::size_t mode, double transmissivity);

double quadrature_variance(const GaussianState &state, std::size_t mode, double theta);
double quadrature_mean(const GaussianState &state, std::size_t mode, double theta);

/// 10 log10(2 V): 0 dB at the standard quantum limit, negative when squeezed.
double squeezing_db(double variance);
/// Inverse of squeezing_db.
double variance_from_db(double db);

struct LossInference {
    double transmissivity;
    double r;
};

/// Finds (T, r) such that a pure squeezed vacuum of parameter r sent through a
/// loss channel of transmissivity T has the given min/max quadrature variances.
/// v_min = v_max = 1/2 returns (1, 0). Throws std::domain_error for pairs that
/// violate the uncertainty principle or are not squeezed (v_min >= 1/2).
LossInference infer_effective_loss(double v_min, double v_max);

/// Wigner function of the state at each row of `points` (rows have 2N entries).
/// Throws std::domain_error for a singular covariance.
std::vector<double> wigner_gaussian(const GaussianState &state, const Eigen::MatrixXd &points);
/// Single-mode convenience overload.
double wigner_gaussian(const GaussianState &state, double x, double p);

/// Overlap Tr(rho sigma) of two single- or multi-mode Gaussian states. Equals the
/// fidelity when one of them is pure.
double gaussian_overlap(const GaussianState &a, const GaussianState &b);

// "gstate-v1" JSON serialization.
std::string to_json(const GaussianState &state);
GaussianState gaussian_state_from_json(const std::string &text);

}  // namespace sqz
