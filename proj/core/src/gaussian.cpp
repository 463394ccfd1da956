#include "sqz/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sqz {

namespace {

void check_mode(std::size_t n_modes, std::size_t mode) {
    if (mode >= n_modes) {
        std::ostringstream msg;
        msg << "mode index " << mode << " out of range for " << n_modes << "-mode state";
        throw std::invalid_argument(msg.str());
    }
}

void check_pair(std::size_t n_modes, ModePair modes) {
    check_mode(n_modes, modes.first);
    check_mode(n_modes, modes.second);
    if (modes.first == modes.second) {
        throw std::invalid_argument("two-mode operation needs two distinct modes");
    }
}

// Writes a 2x2 block into the (i, j) mode block of m.
void set_block(Eigen::MatrixXd &m, std::size_t i, std::size_t j, const Eigen::Matrix2d &block) {
    m.block<2, 2>(2 * i, 2 * j) = block;
}

Eigen::Matrix2d rotation2(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto dim = mean_.size();
    if (dim == 0 || dim % 2 != 0) {
        throw std::invalid_argument("mean vector must have positive even length 2N");
    }
    if (cov_.rows() != dim || cov_.cols() != dim) {
        throw std::invalid_argument("covariance must be 2N x 2N");
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
        throw std::invalid_argument("state contains non-finite entries");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("covariance matrix is not symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose());
    const auto nu = symplectic_eigenvalues();
    // Floating-point slack grows with the largest variance (strongly squeezed states).
    const double slack = kPhysicsTol + 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (nu(0) < kVacuumVariance - slack) {
        std::ostringstream msg;
        msg << "covariance violates the uncertainty principle (smallest symplectic eigenvalue " << nu(0) << " < 1/2)";
        throw std::invalid_argument(msg.str());
    }
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
    const auto n = n_modes();
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("covariance matrix is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    // L^T (i Omega) L is Hermitian and similar to i Omega V; its spectrum is {+-nu_k}.
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * (l.transpose() * symplectic_form(n) * l).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd all = solver.eigenvalues();
    // Ascending order: the upper half holds the positive copies.
    return all.tail(static_cast<Eigen::Index>(n));
}

GaussianState GaussianState::reduced(const std::vector<std::size_t> &modes) const {
    const auto k = static_cast<Eigen::Index>(modes.size());
    Eigen::VectorXd m(2 * k);
    Eigen::MatrixXd c(2 * k, 2 * k);
    for (Eigen::Index a = 0; a < k; ++a) {
        check_mode(n_modes(), modes[a]);
        m.segment<2>(2 * a) = mean_.segment<2>(2 * modes[a]);
        for (Eigen::Index b = 0; b < k; ++b) {
            c.block<2, 2>(2 * a, 2 * b) = cov_.block<2, 2>(2 * modes[a], 2 * modes[b]);
        }
    }
    return GaussianState(std::move(m), std::move(c));
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

bool SymplecticOp::is_symplectic(double tol) const {
    const auto omega = symplectic_form(n_modes());
    const Eigen::MatrixXd residual = matrix.transpose() * omega * matrix - omega;
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    return residual.cwiseAbs().maxCoeff() <= tol * scale * scale;
}

GaussianState SymplecticOp::apply(const GaussianState &state) const {
    if (state.n_modes() != n_modes()) {
        throw std::invalid_argument("symplectic op and state have different mode counts");
    }
    return GaussianState(matrix * state.mean() + shift, matrix * state.cov() * matrix.transpose());
}

SymplecticOp SymplecticOp::compose(const SymplecticOp &other) const {
    return SymplecticOp{matrix * other.matrix, matrix * other.shift + shift};
}

SymplecticOp SymplecticOp::identity(std::size_t n_modes) {
    return SymplecticOp{Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes), Eigen::VectorXd::Zero(2 * n_modes)};
}

SymplecticOp squeezing_op(std::size_t n_modes, std::size_t mode, double r, double phi) {
    check_mode(n_modes, mode);
    auto op = SymplecticOp::identity(n_modes);
    const Eigen::Matrix2d rot = rotation2(phi);
    const Eigen::Matrix2d s = rot * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * rot.transpose();
    set_block(op.matrix, mode, mode, s);
    return op;
}

SymplecticOp two_mode_squeezing_op(std::size_t n_modes, ModePair modes, double r) {
    check_pair(n_modes, modes);
    auto op = SymplecticOp::identity(n_modes);
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    const Eigen::Matrix2d diag = Eigen::Vector2d(c, c).asDiagonal();
    const Eigen::Matrix2d cross = Eigen::Vector2d(s, -s).asDiagonal();
    set_block(op.matrix, modes.first, modes.first, diag);
    set_block(op.matrix, modes.second, modes.second, diag);
    set_block(op.matrix, modes.first, modes.second, cross);
    set_block(op.matrix, modes.second, modes.first, cross);
    return op;
}

SymplecticOp beam_splitter_op(std::size_t n_modes, ModePair modes, double tau, double rho) {
    check_pair(n_modes, modes);
    if (std::abs(tau * tau + rho * rho - 1.0) > kStructuralTol) {
        throw std::invalid_argument("beam splitter amplitudes must satisfy tau^2 + rho^2 = 1");
    }
    auto op = SymplecticOp::identity(n_modes);
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    set_block(op.matrix, modes.first, modes.first, tau * id);
    set_block(op.matrix, modes.first, modes.second, -rho * id);
    set_block(op.matrix, modes.second, modes.first, rho * id);
    set_block(op.matrix, modes.second, modes.second, tau * id);
    return op;
}

SymplecticOp rotation_op(std::size_t n_modes, std::size_t mode, double angle) {
    check_mode(n_modes, mode);
    auto op = SymplecticOp::identity(n_modes);
    set_block(op.matrix, mode, mode, rotation2(angle));
    return op;
}

SymplecticOp displacement_op(std::size_t n_modes, std::size_t mode, std::complex<double> alpha) {
    check_mode(n_modes, mode);
    auto op = SymplecticOp::identity(n_modes);
    op.shift(2 * mode) = std::numbers::sqrt2 * alpha.real();
    op.shift(2 * mode + 1) = std::numbers::sqrt2 * alpha.imag();
    return op;
}

GaussianState vacuum(std::size_t n_modes) {
    if (n_modes == 0) {
        throw std::invalid_argument("vacuum needs at least one mode");
    }
    return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                         kVacuumVariance * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState squeeze(const GaussianState &state, std::size_t mode, double r, double phi) {
    return squeezing_op(state.n_modes(), mode, r, phi).apply(state);
}

GaussianState two_mode_squeeze(const GaussianState &state, ModePair modes, double r) {
    return two_mode_squeezing_op(state.n_modes(), modes, r).apply(state);
}

GaussianState beam_splitter(const GaussianState &state, ModePair modes, double tau, double rho) {
    return beam_splitter_op(state.n_modes(), modes, tau, rho).apply(state);
}

GaussianState rotate(const GaussianState &state, std::size_t mode, double angle) {
    return rotation_op(state.n_modes(), mode, angle).apply(state);
}

GaussianState displace(const GaussianState &state, std::size_t mode, std::complex<double> alpha) {
    return displacement_op(state.n_modes(), mode, alpha).apply(state);
}

GaussianState loss_channel(const GaussianState &state, std::size_t mode, double transmissivity) {
    check_mode(state.n_modes(), mode);
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    const auto dim = static_cast<Eigen::Index>(2 * state.n_modes());
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
    scale.segment<2>(2 * mode).setConstant(std::sqrt(transmissivity));
    Eigen::VectorXd mean = scale.asDiagonal() * state.mean();
    Eigen::MatrixXd cov = scale.asDiagonal() * state.cov() * scale.asDiagonal();
    cov.block<2, 2>(2 * mode, 2 * mode) += (1.0 - transmissivity) * kVacuumVariance * Eigen::Matrix2d::Identity();
    return GaussianState(std::move(mean), std::move(cov));
}

double quadrature_variance(const GaussianState &state, std::size_t mode, double theta) {
    check_mode(state.n_modes(), mode);
    const Eigen::Vector2d c(std::cos(theta), std::sin(theta));
    return c.dot(state.cov().block<2, 2>(2 * mode, 2 * mode) * c);
}

double quadrature_mean(const GaussianState &state, std::size_t mode, double theta) {
    check_mode(state.n_modes(), mode);
    const Eigen::Vector2d c(std::cos(theta), std::sin(theta));
    return c.dot(state.mean().segment<2>(2 * mode));
}

double squeezing_db(double variance) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("squeezing_db needs a positive variance");
    }
    return 10.0 * std::log10(2.0 * variance);
}

double variance_from_db(double db) { return kVacuumVariance * std::pow(10.0, db / 10.0); }

LossInference infer_effective_loss(double v_min, double v_max) {
    if (!(v_min > 0.0) || v_max < v_min) {
        throw std::domain_error("need 0 < v_min <= v_max");
    }
    if (v_min * v_max < 0.25 - kPhysicsTol) {
        throw std::domain_error("variance pair violates the uncertainty principle (v_min * v_max < 1/4)");
    }
    if (std::abs(v_min - kVacuumVariance) <= kPhysicsTol && std::abs(v_max - kVacuumVariance) <= kPhysicsTol) {
        return {1.0, 0.0};
    }
    if (v_min >= kVacuumVariance) {
        throw std::domain_error("variance pair is thermal, not squeezed (v_min >= 1/2)");
    }
    // With A = 2 v_min - 1 = T (u - 1) and B = 2 v_max - 1 = T (1/u - 1), u = e^{-2r}.
    const double a = 2.0 * v_min - 1.0;
    const double b = 2.0 * v_max - 1.0;
    const double u = -a / b;
    const double t = -a * b / (a + b);
    return {std::min(t, 1.0), -0.5 * std::log(u)};
}

std::vector<double> wigner_gaussian(const GaussianState &state, const Eigen::MatrixXd &points) {
    const auto dim = state.mean().size();
    if (points.cols() != dim) {
        throw std::invalid_argument("phase-space points must have 2N coordinates");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(state.cov());
    const double det = ldlt.vectorD().prod();
    if (ldlt.info() != Eigen::Success || !(det > 0.0) || ldlt.vectorD().minCoeff() <= 0.0) {
        throw std::domain_error("covariance matrix is singular");
    }
    const double norm = 1.0 / (std::pow(2.0 * std::numbers::pi, static_cast<double>(dim) / 2.0) * std::sqrt(det));
    std::vector<double> out(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
        const Eigen::VectorXd d = points.row(k).transpose() - state.mean();
        out[static_cast<std::size_t>(k)] = norm * std::exp(-0.5 * d.dot(ldlt.solve(d)));
    }
    return out;
}

double wigner_gaussian(const GaussianState &state, double x, double p) {
    if (state.n_modes() != 1) {
        throw std::invalid_argument("scalar Wigner overload needs a single-mode state");
    }
    Eigen::MatrixXd pt(1, 2);
    pt << x, p;
    return wigner_gaussian(state, pt)[0];
}

double gaussian_overlap(const GaussianState &a, const GaussianState &b) {
    if (a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("overlap needs states with equal mode counts");
    }
    const Eigen::MatrixXd sum = a.cov() + b.cov();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sum);
    const Eigen::VectorXd d = a.mean() - b.mean();
    return std::exp(-0.5 * d.dot(ldlt.solve(d))) / std::sqrt(ldlt.vectorD().prod());
}

std::string to_json(const GaussianState &state) {
    nlohmann::json j;
    j["version"] = "gstate-v1";
    j["n_modes"] = state.n_modes();
    j["mean"] = std::vector<double>(state.mean().data(), state.mean().data() + state.mean().size());
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < state.cov().rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(state.cov().cols()));
        for (Eigen::Index c = 0; c < state.cov().cols(); ++c) {
            row[static_cast<std::size_t>(c)] = state.cov()(r, c);
        }
        rows.push_back(row);
    }
    j["cov"] = rows;
    return j.dump();
}

GaussianState gaussian_state_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("version", std::string{}) != "gstate-v1") {
        throw std::invalid_argument("expected a gstate-v1 document");
    }
    const auto n = j.at("n_modes").get<std::size_t>();
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto cov = j.at("cov").get<std::vector<std::vector<double>>>();
    if (mean.size() != 2 * n || cov.size() != 2 * n) {
        throw std::invalid_argument("gstate-v1 dimensions do not match n_modes");
    }
    Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    Eigen::MatrixXd c(2 * n, 2 * n);
    for (std::size_t r = 0; r < 2 * n; ++r) {
        if (cov[r].size() != 2 * n) {
            throw std::invalid_argument("gstate-v1 covariance row has wrong length");
        }
        for (std::size_t k = 0; k < 2 * n; ++k) {
            c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = cov[r][k];
        }
    }
    return GaussianState(std::move(m), std::move(c));
}

}  // namespace sqz
