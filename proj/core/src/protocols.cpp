#include "sqz/protocols.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sqz/homodyne.hpp"

namespace sqz {

namespace {

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule for the standard normal weight (Golub-Welsch).
Quadrature gauss_hermite_normal(std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 1; k < m; ++k) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    Quadrature q;
    for (Eigen::Index k = 0; k < m; ++k) {
        q.nodes.push_back(solver.eigenvalues()(k));
        const double v = solver.eigenvectors()(0, k);
        q.weights.push_back(v * v);
    }
    return q;
}

void require_single_mode(const GaussianState &input) {
    if (input.n_modes() != 1) {
        throw std::invalid_argument("teleportation input must be a single-mode state");
    }
}

void require_resource(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("resource squeezing r must be finite and non-negative");
    }
}

HeraldedState finish(ConditionalState cond, const FockState &target) {
    const double fid = cond.fidelity_with(target);
    FockState dominant = cond.state;
    const double prob = cond.probability;
    return {std::move(cond), std::move(dominant), prob, fid};
}

}  // namespace

TeleportResult teleport_gaussian(const GaussianState &input, double r, double gain) {
    require_single_mode(input);
    require_resource(r);
    if (!std::isfinite(gain)) {
        throw std::invalid_argument("teleportation gain must be finite");
    }
    const double added = 0.5 * (1.0 + gain * gain) * std::cosh(2.0 * r) - gain * std::sinh(2.0 * r);
    const Eigen::MatrixXd cov = gain * gain * input.cov() + added * Eigen::MatrixXd::Identity(2, 2);
    GaussianState out(gain * input.mean(), cov);
    const double fid = gaussian_overlap(input, out);
    return {std::move(out), added, fid};
}

double coherent_teleport_fidelity(double r) {
    require_resource(r);
    return 1.0 / (1.0 + std::exp(-2.0 * r));
}

double resource_for_fidelity(double fidelity) {
    if (!(fidelity >= 0.5 && fidelity < 1.0)) {
        throw std::domain_error("unit-gain fidelity must lie in [1/2, 1)");
    }
    return -0.5 * std::log(1.0 / fidelity - 1.0);
}

TeleportWignerCheck teleport_wigner_check(const GaussianState &input, double r, double half_width, std::size_t n,
                                          double gain) {
    require_single_mode(input);
    require_resource(r);
    if (!(gain > 0.0)) {
        throw std::invalid_argument("the Wigner check needs a positive gain");
    }
    const Eigen::MatrixXd points = square_grid(half_width, n);
    const auto closed = teleport_gaussian(input, r, gain);
    const auto reference = wigner_gaussian(closed.output_state, points);

    // Resource in the rotated variables u = (X_b - X_c)/sqrt2, v = (X_b + X_c)/sqrt2
    // and u' = (P_b + P_c)/sqrt2, v' = (P_b - P_c)/sqrt2: four independent normals.
    const double sigma_u = std::sqrt(0.5 * std::exp(-2.0 * r));
    const double sigma_v = std::sqrt(0.5 * std::exp(2.0 * r));
    const bool unit_gain = std::abs(gain - 1.0) < 1e-15;
    const auto rule_u = gauss_hermite_normal(unit_gain ? 48 : 24);
    const auto rule_v = gauss_hermite_normal(unit_gain ? 1 : 24);

    const Eigen::Matrix2d cov_in = input.cov();
    const Eigen::Matrix2d inv = cov_in.inverse();
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(cov_in.determinant()));
    const double mx = input.mean()(0);
    const double mp = input.mean()(1);
    const double s2 = std::numbers::sqrt2;

    TeleportWignerCheck check{0.0, false, std::vector<double>(static_cast<std::size_t>(points.rows()))};
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
        const double x = points(k, 0);
        const double p = points(k, 1);
        double acc = 0.0;
        for (std::size_t i1 = 0; i1 < rule_u.nodes.size(); ++i1) {
            const double ux = sigma_u * rule_u.nodes[i1];
            for (std::size_t i2 = 0; i2 < rule_v.nodes.size(); ++i2) {
                const double vx = sigma_v * rule_v.nodes[i2];
                const double xb = (ux + vx) / s2;
                const double xc = (vx - ux) / s2;
                const double xa = (x - xc + gain * xb) / gain - mx;
                const double wx = rule_u.weights[i1] * rule_v.weights[i2];
                for (std::size_t i3 = 0; i3 < rule_u.nodes.size(); ++i3) {
                    const double up = sigma_u * rule_u.nodes[i3];
                    for (std::size_t i4 = 0; i4 < rule_v.nodes.size(); ++i4) {
                        const double vp = sigma_v * rule_v.nodes[i4];
                        const double pb = (up + vp) / s2;
                        const double pc = (up - vp) / s2;
                        const double pa = (p - pc - gain * pb) / gain - mp;
                        const double q = inv(0, 0) * xa * xa + 2.0 * inv(0, 1) * xa * pa + inv(1, 1) * pa * pa;
                        acc += wx * rule_u.weights[i3] * rule_v.weights[i4] * std::exp(-0.5 * q);
                    }
                }
            }
        }
        const double w = norm * acc / (gain * gain);
        check.output_wigner[static_cast<std::size_t>(k)] = w;
        check.discrepancy = std::max(check.discrepancy, std::abs(w - reference[static_cast<std::size_t>(k)]));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(closed.output_state.cov());
    const double spacing = 2.0 * half_width / static_cast<double>(n - 1);
    check.grid_coarse = spacing > std::sqrt(eig.eigenvalues()(0)) || half_width < 3.0 * std::sqrt(eig.eigenvalues()(1));
    return check;
}

PhaseEstimate gw_phase_readout(double phi, double alpha, double dark_port_r, double eta_detect) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("carrier amplitude alpha must be positive");
    }
    if (!(eta_detect >= 0.0 && eta_detect <= 1.0)) {
        throw std::invalid_argument("detection efficiency must lie in [0, 1]");
    }
    if (!std::isfinite(phi) || !std::isfinite(dark_port_r)) {
        throw std::invalid_argument("phase and squeezing must be finite");
    }
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    auto dark = squeeze(vacuum(1), 0, dark_port_r, kHalfPi);
    dark = loss_channel(dark, 0, eta_detect);
    // b'' = b - i phi a: the carrier pushes the dark port along +P.
    dark = displace(dark, 0, std::complex<double>(0.0, phi * alpha));

    PhaseEstimate est{};
    est.phi_true = phi;
    est.signal_displacement = quadrature_mean(dark, 0, kHalfPi);
    est.readout_variance = quadrature_variance(dark, 0, kHalfPi);
    est.snr = est.signal_displacement / std::sqrt(est.readout_variance);
    est.phi_min_detectable = std::sqrt(est.readout_variance) / (std::numbers::sqrt2 * alpha);
    est.outside_linear_regime = std::abs(phi) > 0.1;
    return est;
}

double eta_for_improvement(double dark_port_r, double improvement_db) {
    if (!(improvement_db >= 0.0)) {
        throw std::invalid_argument("improvement must be given as a non-negative dB value");
    }
    const double target = variance_from_db(-improvement_db);
    const double best = 0.5 * std::exp(-2.0 * std::abs(dark_port_r));
    if (target < best - kPhysicsTol) {
        std::ostringstream msg;
        msg << improvement_db << " dB is out of reach for r = " << dark_port_r;
        throw std::domain_error(msg.str());
    }
    if (improvement_db == 0.0) {
        return 0.0;
    }
    return std::min(1.0, (kVacuumVariance - target) / (kVacuumVariance - best));
}

HeraldedState make_heralded_photon(double r, std::size_t cutoff) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("squeezing r must be non-negative");
    }
    auto cond = herald_click(tmsv_fock(r, cutoff), 1);
    return finish(std::move(cond), FockState::basis(cutoff, {1}));
}

FockState ideal_odd_kitten(double r, std::size_t cutoff) {
    return cat_fock(std::complex<double>(0.0, std::sqrt(r)), -1, cutoff);
}

HeraldedState make_kitten(double r, std::size_t cutoff, double rho) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("squeezing r must be non-negative");
    }
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("tap reflectivity must lie in (0, 1)");
    }
    auto state = tensor(squeezed_vacuum_fock(r, cutoff), FockState::basis(cutoff, {0}));
    state = beam_splitter_fock(state, {0, 1}, std::sqrt(1.0 - rho * rho), rho);
    auto cond = herald_click(state, 1);
    return finish(std::move(cond), ideal_odd_kitten(r, cutoff));
}

HeraldedState engineer_kitten_superposition(double r, std::complex<double> ancilla_alpha, double rho_tap,
                                            double rho_mix, std::size_t cutoff) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("squeezing r must be non-negative");
    }
    if (!(rho_tap > 0.0 && rho_tap < 1.0) || !(rho_mix >= 0.0 && rho_mix < 1.0)) {
        throw std::invalid_argument("tap and mixing reflectivities must lie in (0, 1) and [0, 1)");
    }
    auto state = tensor(tensor(squeezed_vacuum_fock(r, cutoff), FockState::basis(cutoff, {0})),
                        coherent_fock(ancilla_alpha, cutoff));
    state = beam_splitter_fock(state, {0, 1}, std::sqrt(1.0 - rho_tap * rho_tap), rho_tap);
    state = beam_splitter_fock(state, {1, 2}, std::sqrt(1.0 - rho_mix * rho_mix), rho_mix);
    auto cond = herald_click(state, 1).trace_mode(1);
    return finish(std::move(cond), squeezed_vacuum_fock(r, cutoff));
}

}  // namespace sqz
