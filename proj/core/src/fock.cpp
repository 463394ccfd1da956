#include "sqz/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace sqz {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        out *= base;
    }
    return out;
}

void check_mode(const FockState &state, std::size_t mode) {
    if (mode >= state.n_modes()) {
        std::ostringstream msg;
        msg << "mode index " << mode << " out of range for " << state.n_modes() << "-mode Fock state";
        throw std::invalid_argument(msg.str());
    }
}

double sum_norm(const std::vector<cplx> &v) {
    double s = 0.0;
    for (const auto &a : v) {
        s += std::norm(a);
    }
    return s;
}

// Applies a (rows x cutoff) matrix along one mode; rows beyond the cutoff are
// dropped. Returns the new amplitude vector.
std::vector<cplx> apply_along_mode(const FockState &state, std::size_t mode, const Eigen::MatrixXcd &m) {
    const std::size_t d = state.cutoff();
    const std::size_t stride = state.stride(mode);
    const std::size_t outer = state.size() / (d * stride);
    const auto keep = static_cast<Eigen::Index>(std::min<std::size_t>(d, static_cast<std::size_t>(m.rows())));
    std::vector<cplx> out(state.size(), cplx{});
    Eigen::VectorXcd column(static_cast<Eigen::Index>(d));
    for (std::size_t hi = 0; hi < outer; ++hi) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
            const std::size_t base = hi * d * stride + lo;
            for (std::size_t n = 0; n < d; ++n) {
                column(static_cast<Eigen::Index>(n)) = state.amps()[base + n * stride];
            }
            const Eigen::VectorXcd result = m.topRows(keep) * column;
            for (Eigen::Index n = 0; n < keep; ++n) {
                out[base + static_cast<std::size_t>(n) * stride] = result(n);
            }
        }
    }
    return out;
}

// Amplitudes of the remaining modes when `mode` is projected onto |k>.
std::vector<cplx> project_mode(const FockState &state, std::size_t mode, std::size_t k) {
    const std::size_t d = state.cutoff();
    const std::size_t stride = state.stride(mode);
    const std::size_t outer = state.size() / (d * stride);
    std::vector<cplx> out;
    out.reserve(outer * stride);
    for (std::size_t hi = 0; hi < outer; ++hi) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
            out.push_back(state.amps()[hi * d * stride + k * stride + lo]);
        }
    }
    return out;
}

// exp(theta G) on the N-photon sector of two modes, basis |k, N-k> with
// k = photons in the first mode; G = a b^dag - a^dag b.
Eigen::MatrixXd beam_splitter_sector(std::size_t total, double theta) {
    const auto dim = static_cast<Eigen::Index>(total + 1);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
        const double g = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(static_cast<Eigen::Index>(total) - k));
        // G(k, k+1) = g, G(k+1, k) = -g; H = iG.
        h(k, k + 1) = cplx(0.0, g);
        h(k + 1, k) = cplx(0.0, -g);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXd lambda = solver.eigenvalues();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        phases(k) = std::exp(cplx(0.0, -theta * lambda(k)));
    }
    const Eigen::MatrixXcd u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return u.real();
}

}  // namespace

FockState::FockState(std::size_t n_modes, std::size_t cutoff, std::vector<cplx> amps, double norm_leak, double leak_tolerance)
    : n_modes_(n_modes), cutoff_(cutoff), amps_(std::move(amps)), norm_leak_(std::max(0.0, norm_leak)), leak_tolerance_(leak_tolerance) {
    if (n_modes_ == 0 || n_modes_ > kMaxFockModes) {
        throw std::invalid_argument("Fock states support 1 to 3 modes");
    }
    if (cutoff_ == 0 || cutoff_ > kMaxFockCutoff) {
        throw std::invalid_argument("Fock cutoff must lie in [1, 64]");
    }
    if (amps_.size() != ipow(cutoff_, n_modes_)) {
        throw std::invalid_argument("amplitude vector must have cutoff^n_modes entries");
    }
    const double n2 = sum_norm(amps_);
    if (!(n2 > 0.0) || n2 > 1.0 + 1e-9 || !std::isfinite(n2)) {
        std::ostringstream msg;
        msg << "Fock amplitudes must have squared norm in (0, 1], got " << n2;
        throw std::invalid_argument(msg.str());
    }
}

FockState FockState::basis(std::size_t cutoff, const std::vector<std::size_t> &occupation) {
    const std::size_t n = occupation.size();
    std::vector<cplx> amps(ipow(cutoff, n), cplx{});
    std::size_t idx = 0;
    for (auto k : occupation) {
        if (k >= cutoff) {
            throw std::invalid_argument("basis occupation exceeds the cutoff");
        }
        idx = idx * cutoff + k;
    }
    amps[idx] = 1.0;
    return FockState(n, cutoff, std::move(amps));
}

std::size_t FockState::stride(std::size_t mode) const { return ipow(cutoff_, n_modes_ - 1 - mode); }

std::size_t FockState::index(const std::vector<std::size_t> &occupation) const {
    if (occupation.size() != n_modes_) {
        throw std::invalid_argument("occupation list length differs from mode count");
    }
    std::size_t idx = 0;
    for (auto k : occupation) {
        if (k >= cutoff_) {
            throw std::out_of_range("occupation exceeds the cutoff");
        }
        idx = idx * cutoff_ + k;
    }
    return idx;
}

std::vector<std::size_t> FockState::occupation(std::size_t index) const {
    std::vector<std::size_t> occ(n_modes_);
    for (std::size_t m = n_modes_; m-- > 0;) {
        occ[m] = index % cutoff_;
        index /= cutoff_;
    }
    return occ;
}

cplx FockState::amplitude(const std::vector<std::size_t> &occupation) const { return amps_[index(occupation)]; }

double FockState::norm_squared() const { return sum_norm(amps_); }

FockState FockState::normalized() const {
    const double s = 1.0 / std::sqrt(norm_squared());
    std::vector<cplx> out(amps_);
    for (auto &a : out) {
        a *= s;
    }
    return FockState(n_modes_, cutoff_, std::move(out), norm_leak_, leak_tolerance_);
}

FockState FockState::padded(std::size_t cutoff) const {
    if (cutoff < cutoff_) {
        throw std::invalid_argument("padding cannot lower the cutoff");
    }
    if (cutoff == cutoff_) {
        return *this;
    }
    std::vector<cplx> out(ipow(cutoff, n_modes_), cplx{});
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        std::size_t j = 0;
        for (auto k : occupation(i)) {
            j = j * cutoff + k;
        }
        out[j] = amps_[i];
    }
    return FockState(n_modes_, cutoff, std::move(out), norm_leak_, leak_tolerance_);
}

FockState coherent_fock(cplx alpha, std::size_t cutoff) {
    std::vector<cplx> amps(cutoff);
    cplx c = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < cutoff; ++n) {
        if (n > 0) {
            c *= alpha / std::sqrt(static_cast<double>(n));
        }
        amps[n] = c;
    }
    const double leak = 1.0 - sum_norm(amps);
    return FockState(1, cutoff, std::move(amps), leak);
}

FockState squeezed_vacuum_fock(double r, std::size_t cutoff) {
    std::vector<cplx> amps(cutoff, cplx{});
    const double t = std::tanh(r);
    double c = 1.0 / std::sqrt(std::cosh(r));
    for (std::size_t n = 0; n < cutoff; n += 2) {
        if (n > 0) {
            // c_{2m} / c_{2m-2} = -tanh r * sqrt((2m-1)/(2m))
            c *= -t * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
        }
        amps[n] = c;
    }
    const double leak = 1.0 - sum_norm(amps);
    return FockState(1, cutoff, std::move(amps), leak);
}

FockState tmsv_fock(double r, std::size_t cutoff) {
    std::vector<cplx> amps(cutoff * cutoff, cplx{});
    const double t = std::tanh(r);
    double c = 1.0 / std::cosh(r);
    for (std::size_t n = 0; n < cutoff; ++n) {
        amps[n * cutoff + n] = c;
        c *= t;
    }
    const double leak = 1.0 - sum_norm(amps);
    return FockState(2, cutoff, std::move(amps), leak);
}

FockState cat_fock(cplx alpha, int sign, std::size_t cutoff) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("cat parity sign must be +1 or -1");
    }
    const double norm2 = 2.0 * (1.0 + sign * std::exp(-2.0 * std::norm(alpha)));
    if (!(norm2 > 0.0)) {
        throw ZeroStateError("odd cat with alpha = 0 is the zero vector");
    }
    const auto coh = coherent_fock(alpha, cutoff);
    std::vector<cplx> amps(cutoff);
    const double s = 1.0 / std::sqrt(norm2);
    for (std::size_t n = 0; n < cutoff; ++n) {
        const double parity = (n % 2 == 0) ? 1.0 : -1.0;
        amps[n] = s * coh.amps()[n] * (1.0 + sign * parity);
    }
    const double leak = 1.0 - sum_norm(amps);
    return FockState(1, cutoff, std::move(amps), leak);
}

std::size_t suggest_cutoff_coherent(cplx alpha, double tail) {
    const double mean = std::norm(alpha);
    double p = std::exp(-mean);
    double cumulative = 0.0;
    for (std::size_t n = 0;; ++n) {
        if (n > 0) {
            p *= mean / static_cast<double>(n);
        }
        cumulative += p;
        if (1.0 - cumulative < tail && static_cast<double>(n) > mean) {
            return n + 1;
        }
    }
}

std::size_t suggest_cutoff_squeezed(double r, double tail) {
    const double t = std::tanh(std::abs(r));
    double c2 = 1.0 / std::cosh(r);
    double cumulative = 0.0;
    for (std::size_t n = 0;; n += 2) {
        if (n > 0) {
            c2 *= t * t * static_cast<double>(n - 1) / static_cast<double>(n);
        }
        cumulative += c2;
        if (1.0 - cumulative < tail) {
            return n + 1;
        }
    }
}

std::size_t suggest_cutoff_tmsv(double r, double tail) {
    const double t = std::tanh(std::abs(r));
    if (t == 0.0) {
        return 1;
    }
    // Tail mass beyond cutoff d is tanh^{2d} r.
    const double d = std::log(tail) / (2.0 * std::log(t));
    return static_cast<std::size_t>(std::ceil(std::max(1.0, d)));
}

FockState tensor(const FockState &a, const FockState &b) {
    const std::size_t d = std::max(a.cutoff(), b.cutoff());
    const auto pa = a.padded(d);
    const auto pb = b.padded(d);
    std::vector<cplx> amps;
    amps.reserve(pa.size() * pb.size());
    for (const auto &x : pa.amps()) {
        for (const auto &y : pb.amps()) {
            amps.push_back(x * y);
        }
    }
    const double leak = 1.0 - (1.0 - a.norm_leak()) * (1.0 - b.norm_leak());
    return FockState(a.n_modes() + b.n_modes(), d, std::move(amps), leak, std::min(a.leak_tolerance(), b.leak_tolerance()));
}

Annihilated apply_annihilation(const FockState &state, std::size_t mode) {
    check_mode(state, mode);
    const std::size_t d = state.cutoff();
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n + 1 < d; ++n) {
        lower(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n + 1)) = std::sqrt(static_cast<double>(n + 1));
    }
    auto out = apply_along_mode(state, mode, lower);
    const double n2 = sum_norm(out);
    if (!(n2 > 1e-300)) {
        throw ZeroStateError("annihilation operator annihilated the state");
    }
    const double prob = n2 / state.norm_squared();
    const double s = 1.0 / std::sqrt(n2);
    for (auto &a : out) {
        a *= s;
    }
    return {FockState(state.n_modes(), d, std::move(out), state.norm_leak(), state.leak_tolerance()), prob};
}

FockState beam_splitter_fock(const FockState &state, ModePair modes, double tau, double rho) {
    check_mode(state, modes.first);
    check_mode(state, modes.second);
    if (modes.first == modes.second) {
        throw std::invalid_argument("beam splitter needs two distinct modes");
    }
    if (std::abs(tau * tau + rho * rho - 1.0) > kStructuralTol) {
        throw std::invalid_argument("beam splitter amplitudes must satisfy tau^2 + rho^2 = 1");
    }
    const std::size_t d = state.cutoff();
    const double theta = std::atan2(rho, tau);
    std::vector<Eigen::MatrixXd> sectors;
    sectors.reserve(2 * d - 1);
    for (std::size_t total = 0; total + 1 < 2 * d; ++total) {
        sectors.push_back(beam_splitter_sector(total, theta));
    }

    const std::size_t si = state.stride(modes.first);
    const std::size_t sj = state.stride(modes.second);
    std::vector<cplx> out(state.size(), cplx{});
    // Iterate over every configuration of the spectator modes.
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const auto occ = state.occupation(idx);
        if (occ[modes.first] != 0 || occ[modes.second] != 0) {
            continue;
        }
        for (std::size_t total = 0; total + 1 < 2 * d; ++total) {
            const auto &u = sectors[total];
            const std::size_t kmin = total >= d ? total - (d - 1) : 0;
            const std::size_t kmax = std::min(total, d - 1);
            for (std::size_t kin = kmin; kin <= kmax; ++kin) {
                const cplx a = state.amps()[idx + kin * si + (total - kin) * sj];
                if (a == cplx{}) {
                    continue;
                }
                for (std::size_t kout = kmin; kout <= kmax; ++kout) {
                    out[idx + kout * si + (total - kout) * sj] += u(static_cast<Eigen::Index>(kout), static_cast<Eigen::Index>(kin)) * a;
                }
            }
        }
    }
    const double lost = std::max(0.0, state.norm_squared() - sum_norm(out));
    return FockState(state.n_modes(), d, std::move(out), state.norm_leak() + lost, state.leak_tolerance());
}

Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t rows, std::size_t cols) {
    const auto nr = static_cast<Eigen::Index>(rows);
    const auto nc = static_cast<Eigen::Index>(cols);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nr, nc);
    if (nr == 0 || nc == 0) {
        return m;
    }
    // <m|D|0> = e^{-|a|^2/2} a^m / sqrt(m!)
    m(0, 0) = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index r = 1; r < nr; ++r) {
        m(r, 0) = m(r - 1, 0) * alpha / std::sqrt(static_cast<double>(r));
    }
    // <m|D|n> = (sqrt(m) <m-1|D|n-1> - conj(a) <m|D|n-1>) / sqrt(n)
    const cplx ac = std::conj(alpha);
    for (Eigen::Index c = 1; c < nc; ++c) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(c));
        m(0, c) = -ac * m(0, c - 1) * inv;
        for (Eigen::Index r = 1; r < nr; ++r) {
            m(r, c) = (std::sqrt(static_cast<double>(r)) * m(r - 1, c - 1) - ac * m(r, c - 1)) * inv;
        }
    }
    return m;
}

FockState displace_fock(const FockState &state, std::size_t mode, cplx alpha) {
    check_mode(state, mode);
    const std::size_t d = state.cutoff();
    auto out = apply_along_mode(state, mode, displacement_matrix(alpha, d, d));
    const double lost = std::max(0.0, state.norm_squared() - sum_norm(out));
    return FockState(state.n_modes(), d, std::move(out), state.norm_leak() + lost, state.leak_tolerance());
}

double fidelity(const FockState &a, const FockState &b) {
    if (a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("fidelity needs states with equal mode counts");
    }
    const std::size_t d = std::max(a.cutoff(), b.cutoff());
    const auto pa = a.padded(d);
    const auto pb = b.padded(d);
    cplx overlap{};
    for (std::size_t i = 0; i < pa.size(); ++i) {
        overlap += std::conj(pa.amps()[i]) * pb.amps()[i];
    }
    return std::norm(overlap) / (pa.norm_squared() * pb.norm_squared());
}

double ConditionalState::fidelity_with(const FockState &target) const {
    double num = 0.0;
    double den = 0.0;
    for (const auto &b : branches) {
        num += b.probability * fidelity(b.state, target);
        den += b.probability;
    }
    return num / den;
}

const Branch *ConditionalState::find(const std::vector<std::size_t> &outcomes) const {
    for (const auto &b : branches) {
        if (b.outcomes == outcomes) {
            return &b;
        }
    }
    return nullptr;
}

namespace {

ConditionalState from_branches(std::vector<Branch> branches) {
    if (branches.empty()) {
        throw ZeroStateError("conditional outcome has zero probability");
    }
    double total = 0.0;
    std::size_t best = 0;
    for (std::size_t k = 0; k < branches.size(); ++k) {
        total += branches[k].probability;
        if (branches[k].probability > branches[best].probability) {
            best = k;
        }
    }
    FockState dominant = branches[best].state;
    return ConditionalState{std::move(dominant), total, std::move(branches)};
}

}  // namespace

ConditionalState herald_click(const FockState &state, std::size_t mode, Detector detector) {
    check_mode(state, mode);
    if (state.n_modes() < 2) {
        throw std::invalid_argument("heralding needs at least one remaining mode");
    }
    const std::size_t d = state.cutoff();
    const double total = state.norm_squared();
    std::size_t kmin = 1;
    std::size_t kmax = d - 1;
    if (detector.kind == Detector::Kind::PhotonNumber) {
        kmin = kmax = detector.photons;
    }
    std::vector<Branch> branches;
    for (std::size_t k = kmin; k <= kmax && k < d; ++k) {
        auto amps = project_mode(state, mode, k);
        const double n2 = sum_norm(amps);
        if (!(n2 > 1e-300)) {
            continue;
        }
        const double s = 1.0 / std::sqrt(n2);
        for (auto &a : amps) {
            a *= s;
        }
        branches.push_back(Branch{{k}, n2 / total, FockState(state.n_modes() - 1, d, std::move(amps), state.norm_leak(), state.leak_tolerance())});
    }
    if (branches.empty()) {
        throw ZeroStateError("heralding detector never fires on this state");
    }
    return from_branches(std::move(branches));
}

ConditionalState ConditionalState::trace_mode(std::size_t mode) const {
    std::vector<Branch> split;
    for (const auto &b : branches) {
        check_mode(b.state, mode);
        if (b.state.n_modes() < 2) {
            throw std::invalid_argument("cannot trace out the last mode");
        }
        for (std::size_t k = 0; k < b.state.cutoff(); ++k) {
            auto amps = project_mode(b.state, mode, k);
            const double n2 = sum_norm(amps);
            if (!(n2 > 1e-300)) {
                continue;
            }
            const double s = 1.0 / std::sqrt(n2);
            for (auto &a : amps) {
                a *= s;
            }
            auto outcomes = b.outcomes;
            outcomes.push_back(k);
            split.push_back(Branch{std::move(outcomes), b.probability * n2,
                                   FockState(b.state.n_modes() - 1, b.state.cutoff(), std::move(amps), b.state.norm_leak(), b.state.leak_tolerance())});
        }
    }
    return from_branches(std::move(split));
}

Eigen::MatrixXcd reduced_density_matrix(const FockState &state, std::size_t mode) {
    check_mode(state, mode);
    const std::size_t d = state.cutoff();
    const std::size_t stride = state.stride(mode);
    const std::size_t outer = state.size() / (d * stride);
    const auto nd = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nd, nd);
    Eigen::VectorXcd column(nd);
    for (std::size_t hi = 0; hi < outer; ++hi) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
            for (std::size_t n = 0; n < d; ++n) {
                column(static_cast<Eigen::Index>(n)) = state.amps()[hi * d * stride + n * stride + lo];
            }
            rho.noalias() += column * column.adjoint();
        }
    }
    return rho;
}

std::vector<double> wigner_fock(const FockState &state, const Eigen::MatrixXd &points, std::size_t mode) {
    if (points.cols() != 2) {
        throw std::invalid_argument("Wigner points must be (x, p) rows");
    }
    const Eigen::MatrixXcd rho = reduced_density_matrix(state, mode);
    const double trace = rho.trace().real();
    const double purity = (rho * rho).trace().real();
    if (purity < trace * trace * (1.0 - 1e-9)) {
        throw std::invalid_argument("mode is entangled with the other modes; reduced Wigner function needs a product factor");
    }
    const std::size_t d = state.cutoff();
    std::vector<double> out(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
        const cplx beta(points(k, 0) / std::numbers::sqrt2, points(k, 1) / std::numbers::sqrt2);
        const double reach = std::sqrt(static_cast<double>(d)) + std::abs(beta) + 6.0;
        const auto rows = static_cast<std::size_t>(std::ceil(reach * reach)) + 8;
        const Eigen::MatrixXcd dm = displacement_matrix(-beta, rows, d);
        const Eigen::MatrixXcd b = dm * rho;
        double w = 0.0;
        for (Eigen::Index n = 0; n < b.rows(); ++n) {
            const double diag = (b.row(n).array() * dm.row(n).conjugate().array()).sum().real();
            w += (n % 2 == 0) ? diag : -diag;
        }
        out[static_cast<std::size_t>(k)] = w / (std::numbers::pi * trace);
    }
    return out;
}

QuadratureMoments quadrature_moments(const FockState &state) {
    const std::size_t n = state.n_modes();
    const std::size_t d = state.cutoff();
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k + 1 < d; ++k) {
        lower(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = std::sqrt(static_cast<double>(k + 1));
    }
    const Eigen::Map<const Eigen::VectorXcd> psi(state.amps().data(), static_cast<Eigen::Index>(state.size()));
    const double norm2 = state.norm_squared();

    // a_k psi for every mode, then a_j a_k psi.
    std::vector<Eigen::VectorXcd> lowered;
    for (std::size_t k = 0; k < n; ++k) {
        auto v = apply_along_mode(state, k, lower);
        lowered.emplace_back(Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    Eigen::VectorXcd a1(static_cast<Eigen::Index>(n));
    Eigen::MatrixXcd aa(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::MatrixXcd nn(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        a1(ki) = psi.dot(lowered[k]) / norm2;  // dot conjugates the left operand
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto ji = static_cast<Eigen::Index>(j);
            const auto ki = static_cast<Eigen::Index>(k);
            nn(ji, ki) = lowered[j].dot(lowered[k]) / norm2;
        }
    }
    // a_j a_k psi: apply the lowering matrix along mode j to a_k psi.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t sj = state.stride(j);
            cplx acc{};
            for (std::size_t idx = 0; idx < state.size(); ++idx) {
                const std::size_t nj = (idx / sj) % d;
                if (nj + 1 >= d) {
                    continue;
                }
                acc += std::conj(psi(static_cast<Eigen::Index>(idx))) * std::sqrt(static_cast<double>(nj + 1)) *
                       lowered[k](static_cast<Eigen::Index>(idx + sj));
            }
            aa(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = acc / norm2;
        }
    }

    Eigen::VectorXd mean(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        mean(static_cast<Eigen::Index>(2 * k)) = std::numbers::sqrt2 * a1(static_cast<Eigen::Index>(k)).real();
        mean(static_cast<Eigen::Index>(2 * k + 1)) = std::numbers::sqrt2 * a1(static_cast<Eigen::Index>(k)).imag();
    }
    Eigen::MatrixXd cov(2 * n, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto ji = static_cast<Eigen::Index>(j);
            const auto ki = static_cast<Eigen::Index>(k);
            const cplx a = aa(ji, ki);
            const cplx m = nn(ji, ki);
            const double delta = (j == k) ? 0.5 : 0.0;
            const double xx = a.real() + m.real() + delta;
            const double pp = -a.real() + m.real() + delta;
            const double xp = a.imag() + m.imag();
            const double px = a.imag() - m.imag();
            cov(2 * ji, 2 * ki) = xx - mean(2 * ji) * mean(2 * ki);
            cov(2 * ji + 1, 2 * ki + 1) = pp - mean(2 * ji + 1) * mean(2 * ki + 1);
            cov(2 * ji, 2 * ki + 1) = xp - mean(2 * ji) * mean(2 * ki + 1);
            cov(2 * ji + 1, 2 * ki) = px - mean(2 * ji + 1) * mean(2 * ki);
        }
    }
    return {mean, cov};
}

std::vector<double> photon_number_distribution(const FockState &state, std::size_t mode) {
    const Eigen::MatrixXcd rho = reduced_density_matrix(state, mode);
    const double trace = rho.trace().real();
    std::vector<double> p(state.cutoff());
    for (std::size_t n = 0; n < p.size(); ++n) {
        p[n] = rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real() / trace;
    }
    return p;
}

double mean_photon_number(const FockState &state, std::size_t mode) {
    const auto p = photon_number_distribution(state, mode);
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        s += static_cast<double>(n) * p[n];
    }
    return s;
}

double parity_expectation(const FockState &state, std::size_t mode) {
    // Separate sums keep states of definite parity at exactly +-1.
    const auto p = photon_number_distribution(state, mode);
    double even = 0.0;
    double odd = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        (n % 2 == 0 ? even : odd) += p[n];
    }
    return (even - odd) / (even + odd);
}

FockState apply_loss_dilated(const FockState &state, std::size_t mode, double transmissivity) {
    check_mode(state, mode);
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0, 1]");
    }
    const auto dilated = tensor(state, FockState::basis(state.cutoff(), {0}));
    return beam_splitter_fock(dilated, {mode, state.n_modes()}, std::sqrt(transmissivity), std::sqrt(1.0 - transmissivity));
}

std::string to_json(const FockState &state) {
    nlohmann::json j;
    j["version"] = "fstate-v1";
    j["n_modes"] = state.n_modes();
    j["cutoff"] = state.cutoff();
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(state.size());
    im.reserve(state.size());
    for (const auto &a : state.amps()) {
        re.push_back(a.real());
        im.push_back(a.imag());
    }
    j["amps_re"] = re;
    j["amps_im"] = im;
    j["norm_leak"] = state.norm_leak();
    return j.dump();
}

FockState fock_state_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("version", std::string{}) != "fstate-v1") {
        throw std::invalid_argument("expected an fstate-v1 document");
    }
    const auto re = j.at("amps_re").get<std::vector<double>>();
    const auto im = j.at("amps_im").get<std::vector<double>>();
    if (re.size() != im.size()) {
        throw std::invalid_argument("fstate-v1 real and imaginary parts differ in length");
    }
    std::vector<cplx> amps(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) {
        amps[k] = cplx(re[k], im[k]);
    }
    return FockState(j.at("n_modes").get<std::size_t>(), j.at("cutoff").get<std::size_t>(), std::move(amps),
                     j.value("norm_leak", 0.0));
}

}  // namespace sqz
