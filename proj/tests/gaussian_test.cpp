#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sqz/gaussian.hpp"

using namespace sqz;

namespace {

Eigen::MatrixXd omega(std::size_t n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        m(2 * k, 2 * k + 1) = 1.0;
        m(2 * k + 1, 2 * k) = -1.0;
    }
    return m;
}

double max_abs(const Eigen::MatrixXd &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Vacuum, VariancesAreHalf) {
    const auto v = vacuum(1);
    EXPECT_DOUBLE_EQ(v.cov()(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(v.cov()(1, 1), 0.5);
    EXPECT_DOUBLE_EQ(v.cov()(0, 0) * v.cov()(1, 1), 0.25);
}

TEST(Vacuum, TwoModesHaveNoCrossCovariance) {
    const auto v = vacuum(2);
    EXPECT_EQ(max_abs(v.cov() - 0.5 * Eigen::MatrixXd::Identity(4, 4)), 0.0);
    EXPECT_EQ(v.mean().norm(), 0.0);
}

TEST(Vacuum, RejectsZeroModes) { EXPECT_THROW(vacuum(0), std::invalid_argument); }

TEST(GaussianStateValidation, RejectsAsymmetricCovariance) {
    Eigen::MatrixXd cov = 0.5 * Eigen::MatrixXd::Identity(2, 2);
    cov(0, 1) = 0.1;
    EXPECT_THROW(GaussianState(Eigen::VectorXd::Zero(2), cov), std::invalid_argument);
}

TEST(GaussianStateValidation, RejectsUncertaintyViolation) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = 0.2;
    cov(1, 1) = 0.5;
    EXPECT_THROW(GaussianState(Eigen::VectorXd::Zero(2), cov), std::invalid_argument);
}

TEST(GaussianStateValidation, AcceptsStronglySqueezedState) {
    // 60 dB of squeezing; the covariance spans twelve orders of magnitude.
    EXPECT_NO_THROW(squeeze(vacuum(1), 0, 6.9));
}

TEST(Squeeze, LnTwoGivesEighthAndTwo) {
    const auto s = squeeze(vacuum(1), 0, std::log(2.0));
    const double R = 2.0;
    EXPECT_NEAR(s.cov()(0, 0), 1.0 / (2.0 * R * R), 1e-15);
    EXPECT_NEAR(s.cov()(1, 1), R * R / 2.0, 1e-15);
}

TEST(Squeeze, ZeroIsIdentityAndInverseUndoes) {
    const auto base = displace(squeeze(vacuum(1), 0, 0.3, 0.4), 0, {0.2, -0.7});
    EXPECT_LT(max_abs(squeeze(base, 0, 0.0).cov() - base.cov()), 1e-15);
    const auto back = squeeze(squeeze(vacuum(1), 0, 0.8), 0, -0.8);
    EXPECT_LT(max_abs(back.cov() - vacuum(1).cov()), 1e-14);
}

TEST(Squeeze, MinimumVarianceSitsAtPhi) {
    for (double phi : {0.0, 0.3, 1.1, 2.5}) {
        const auto s = squeeze(vacuum(1), 0, 0.9, phi);
        double best = 1e9;
        double arg = 0.0;
        for (int k = 0; k < 3600; ++k) {
            const double th = std::numbers::pi * k / 3600.0;
            const double v = quadrature_variance(s, 0, th);
            if (v < best) {
                best = v;
                arg = th;
            }
        }
        const double diff = std::remainder(arg - phi, std::numbers::pi);
        EXPECT_LT(std::abs(diff), 1e-3) << "phi = " << phi;
        EXPECT_NEAR(best, 0.5 * std::exp(-1.8), 1e-6);
    }
}

TEST(Squeeze, RejectsBadMode) { EXPECT_THROW(squeeze(vacuum(1), 1, 0.1), std::invalid_argument); }

TEST(TwoModeSqueeze, PerModeVarianceMatchesR4Formula) {
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        const auto s = two_mode_squeeze(vacuum(2), {0, 1}, r);
        const double R = std::exp(r);
        const double expected = (1.0 + std::pow(R, 4)) / (4.0 * R * R);
        EXPECT_NEAR(s.cov()(0, 0), expected, 1e-12 * expected);
        EXPECT_NEAR(s.cov()(3, 3), expected, 1e-12 * expected);
    }
}

TEST(TwoModeSqueeze, RelativePositionAndTotalMomentumSqueezed) {
    const auto s = two_mode_squeeze(vacuum(2), {0, 1}, 0.5);
    Eigen::VectorXd dx(4), sp(4);
    dx << 1, 0, -1, 0;
    sp << 0, 1, 0, 1;
    dx /= std::numbers::sqrt2;
    sp /= std::numbers::sqrt2;
    EXPECT_NEAR(dx.dot(s.cov() * dx), std::exp(-1.0) / 2.0, 1e-14);
    EXPECT_NEAR(sp.dot(s.cov() * sp), std::exp(-1.0) / 2.0, 1e-14);
    EXPECT_NEAR(dx.dot(s.cov() * dx), 0.1839, 1e-4);
}

TEST(TwoModeSqueeze, ZeroIsIdentityAndEqualModesRejected) {
    EXPECT_LT(max_abs(two_mode_squeeze(vacuum(2), {0, 1}, 0.0).cov() - vacuum(2).cov()), 1e-15);
    EXPECT_THROW(two_mode_squeeze(vacuum(2), {1, 1}, 0.1), std::invalid_argument);
    EXPECT_THROW(two_mode_squeeze(vacuum(2), {0, 2}, 0.1), std::invalid_argument);
}

TEST(BeamSplitter, VacuumInvariantAndNonUnitaryRejected) {
    EXPECT_LT(max_abs(beam_splitter(vacuum(2), {0, 1}, 0.6, 0.8).cov() - vacuum(2).cov()), 1e-15);
    EXPECT_THROW(beam_splitter(vacuum(2), {0, 1}, 0.6, 0.7), std::invalid_argument);
}

TEST(BeamSplitter, HeisenbergActionOnMeans) {
    // a' = tau a - rho b, b' = tau b + rho a
    auto in = displace(displace(vacuum(2), 0, {0.3, 0.1}), 1, {-0.2, 0.5});
    const double tau = 0.6;
    const double rho = 0.8;
    const auto out = beam_splitter(in, {0, 1}, tau, rho);
    const auto &m = in.mean();
    EXPECT_NEAR(out.mean()(0), tau * m(0) - rho * m(2), 1e-15);
    EXPECT_NEAR(out.mean()(1), tau * m(1) - rho * m(3), 1e-15);
    EXPECT_NEAR(out.mean()(2), tau * m(2) + rho * m(0), 1e-15);
    EXPECT_NEAR(out.mean()(3), tau * m(3) + rho * m(1), 1e-15);
}

TEST(BeamSplitter, SplitsTmsvIntoOppositeSqueezers) {
    const double r = 0.7;
    const double h = 1.0 / std::numbers::sqrt2;
    const auto out = beam_splitter(two_mode_squeeze(vacuum(2), {0, 1}, r), {0, 1}, h, h);
    // Uncorrelated modes, X-squeezed in the first and P-squeezed in the second.
    EXPECT_LT(out.cov().block(0, 2, 2, 2).cwiseAbs().maxCoeff(), 1e-14);
    const auto a = squeeze(vacuum(1), 0, r);
    const auto b = squeeze(vacuum(1), 0, -r);
    EXPECT_LT(max_abs(out.cov().block(0, 0, 2, 2) - a.cov()), 1e-13);
    EXPECT_LT(max_abs(out.cov().block(2, 2, 2, 2) - b.cov()), 1e-13);
}

TEST(BeamSplitter, OppositeSqueezersCombineIntoTmsv) {
    const double r = 0.7;
    const double h = 1.0 / std::numbers::sqrt2;
    const auto tmsv = two_mode_squeeze(vacuum(2), {0, 1}, r);
    const auto product = squeeze(squeeze(vacuum(2), 0, r), 1, -r);
    // Inverse splitter reverses the split exactly.
    EXPECT_LT(max_abs(beam_splitter(product, {0, 1}, h, -h).cov() - tmsv.cov()), 1e-10);
    // The forward splitter needs the opposite ordering.
    const auto swapped = squeeze(squeeze(vacuum(2), 0, -r), 1, r);
    const auto out = beam_splitter(swapped, {0, 1}, h, h);
    EXPECT_LT(max_abs(out.cov() - tmsv.cov()), 1e-10);
}

TEST(Displace, ShiftsMeanBySqrtTwoAlpha) {
    const auto d = displace(vacuum(1), 0, {1.0, 0.0});
    EXPECT_NEAR(d.mean()(0), std::numbers::sqrt2, 1e-15);
    EXPECT_EQ(d.mean()(1), 0.0);
    EXPECT_EQ(max_abs(d.cov() - vacuum(1).cov()), 0.0);
}

TEST(Displace, ComposesAdditively) {
    const std::complex<double> a1(0.3, -0.4), a2(-1.2, 0.25);
    const auto two = displace(displace(vacuum(1), 0, a1), 0, a2);
    const auto one = displace(vacuum(1), 0, a1 + a2);
    EXPECT_LT((two.mean() - one.mean()).norm(), 1e-15);
    EXPECT_EQ(displace(vacuum(1), 0, 0.0).mean().norm(), 0.0);
}

TEST(LossChannel, MatchesBeamSplitterModelOnGrid) {
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        for (double T : {0.0, 0.3, 0.7, 1.0}) {
            const auto s = loss_channel(squeeze(vacuum(1), 0, r), 0, T);
            const double vx = T * std::exp(-2.0 * r) / 2.0 + (1.0 - T) / 2.0;
            const double vp = T * std::exp(2.0 * r) / 2.0 + (1.0 - T) / 2.0;
            EXPECT_NEAR(s.cov()(0, 0), vx, 1e-12 * std::max(1.0, vx));
            EXPECT_NEAR(s.cov()(1, 1), vp, 1e-12 * std::max(1.0, vp));
        }
    }
}

TEST(LossChannel, HalfTransmissionExample) {
    const double r = 0.8;
    const auto s = loss_channel(squeeze(vacuum(1), 0, r), 0, 0.5);
    EXPECT_NEAR(s.cov()(0, 0), 0.25 * std::exp(-2.0 * r) + 0.25, 1e-15);
}

TEST(LossChannel, EndpointsAndMeanScaling) {
    const auto in = displace(squeeze(vacuum(1), 0, 0.4), 0, {1.0, 2.0});
    EXPECT_LT(max_abs(loss_channel(in, 0, 1.0).cov() - in.cov()), 1e-15);
    const auto dead = loss_channel(in, 0, 0.0);
    EXPECT_LT(max_abs(dead.cov() - vacuum(1).cov()), 1e-15);
    EXPECT_EQ(dead.mean().norm(), 0.0);
    EXPECT_NEAR(loss_channel(in, 0, 0.36).mean()(1), 0.6 * in.mean()(1), 1e-15);
    EXPECT_THROW(loss_channel(in, 0, 1.2), std::invalid_argument);
    EXPECT_THROW(loss_channel(in, 0, -0.1), std::invalid_argument);
}

TEST(LossChannel, NeverRemovesSqueezingCompletely) {
    for (double T : {1e-3, 0.1, 0.5, 0.99}) {
        const auto s = loss_channel(squeeze(vacuum(1), 0, 1.0, 0.7), 0, T);
        EXPECT_LT(quadrature_variance(s, 0, 0.7), 0.5);
        EXPECT_GE(s.symplectic_eigenvalues().minCoeff(), 0.5 - 1e-9);
    }
}

TEST(QuadratureVariance, PhaseIndependentForVacuumAndPiPeriodic) {
    const auto s = squeeze(vacuum(1), 0, 0.6, 0.3);
    for (double th : {0.0, 0.4, 1.3, 2.9}) {
        EXPECT_NEAR(quadrature_variance(vacuum(1), 0, th), 0.5, 1e-15);
        EXPECT_NEAR(quadrature_variance(s, 0, th), quadrature_variance(s, 0, th + std::numbers::pi), 1e-14);
    }
    const auto sq = squeeze(vacuum(1), 0, 0.6);
    EXPECT_NEAR(quadrature_variance(sq, 0, std::numbers::pi / 2), std::exp(1.2) / 2.0, 1e-14);
}

TEST(SqueezingDb, FootnoteValues) {
    EXPECT_DOUBLE_EQ(squeezing_db(0.5), 0.0);
    EXPECT_NEAR(squeezing_db(0.25), -3.0103, 1e-4);
    EXPECT_NEAR(squeezing_db(0.05), -10.0, 1e-12);
    EXPECT_THROW(squeezing_db(0.0), std::invalid_argument);
    EXPECT_NEAR(variance_from_db(squeezing_db(0.123)), 0.123, 1e-15);
}

TEST(InferEffectiveLoss, RoundTrip) {
    const auto s = loss_channel(squeeze(vacuum(1), 0, 1.0), 0, 0.7);
    const auto inf = infer_effective_loss(s.cov()(0, 0), s.cov()(1, 1));
    EXPECT_NEAR(inf.transmissivity, 0.7, 1e-9);
    EXPECT_NEAR(inf.r, 1.0, 1e-9);
}

TEST(InferEffectiveLoss, PureStateGivesUnitTransmission) {
    const double r = 0.45;
    const auto inf = infer_effective_loss(0.5 * std::exp(-2 * r), 0.5 * std::exp(2 * r));
    EXPECT_NEAR(inf.transmissivity, 1.0, 1e-12);
    EXPECT_NEAR(inf.r, r, 1e-12);
}

TEST(InferEffectiveLoss, DegenerateAndInvalidPairs) {
    const auto vac = infer_effective_loss(0.5, 0.5);
    EXPECT_EQ(vac.transmissivity, 1.0);
    EXPECT_EQ(vac.r, 0.0);
    EXPECT_THROW(infer_effective_loss(0.6, 0.6), std::domain_error);
    EXPECT_THROW(infer_effective_loss(0.1, 1.0), std::domain_error);
}

TEST(Symplectic, BuiltinsPreserveForm) {
    const std::size_t n = 3;
    const std::vector<SymplecticOp> ops{
        squeezing_op(n, 1, 0.7, 0.3),          two_mode_squeezing_op(n, {0, 2}, 1.1),
        beam_splitter_op(n, {1, 2}, 0.6, 0.8), rotation_op(n, 0, 2.1),
        displacement_op(n, 2, {0.4, -0.1}),
    };
    SymplecticOp total = SymplecticOp::identity(n);
    for (const auto &op : ops) {
        EXPECT_TRUE(op.is_symplectic());
        EXPECT_LT(max_abs(op.matrix.transpose() * omega(n) * op.matrix - omega(n)), 1e-10);
        total = op.compose(total);
    }
    EXPECT_TRUE(total.is_symplectic());
}

TEST(Symplectic, UnitariesKeepSymplecticEigenvalues) {
    auto s = loss_channel(squeeze(vacuum(2), 0, 0.5), 0, 0.6);
    const auto before = s.symplectic_eigenvalues();
    s = beam_splitter(two_mode_squeeze(rotate(s, 1, 0.8), {0, 1}, 0.4), {0, 1}, 0.8, 0.6);
    EXPECT_LT((s.symplectic_eigenvalues() - before).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Symplectic, ComposeAppliesRightOperandFirst) {
    const auto a = squeezing_op(1, 0, 0.5);
    const auto b = displacement_op(1, 0, {1.0, 0.0});
    const auto direct = a.apply(b.apply(vacuum(1)));
    const auto composed = a.compose(b).apply(vacuum(1));
    EXPECT_LT((direct.mean() - composed.mean()).norm(), 1e-15);
    EXPECT_LT(max_abs(direct.cov() - composed.cov()), 1e-15);
}

TEST(WignerGaussian, VacuumPeakAndDisplacedMaximum) {
    EXPECT_NEAR(wigner_gaussian(vacuum(1), 0.0, 0.0), 1.0 / std::numbers::pi, 1e-15);
    const auto d = displace(vacuum(1), 0, {0.5, -0.25});
    const double x0 = std::numbers::sqrt2 * 0.5;
    const double p0 = -std::numbers::sqrt2 * 0.25;
    const double peak = wigner_gaussian(d, x0, p0);
    for (double dx : {-0.01, 0.01}) {
        EXPECT_LT(wigner_gaussian(d, x0 + dx, p0), peak);
        EXPECT_LT(wigner_gaussian(d, x0, p0 + dx), peak);
    }
}

TEST(WignerGaussian, MatchesClosedFormAndIsPositive) {
    const auto s = displace(squeeze(vacuum(1), 0, 0.6, 0.4), 0, {0.3, 0.2});
    const auto &c = s.cov();
    for (double x = -3; x <= 3; x += 0.5) {
        for (double p = -3; p <= 3; p += 0.5) {
            const double w = wigner_gaussian(s, x, p);
            EXPECT_GT(w, 0.0);
            EXPECT_NEAR(w, oracle::gaussian_wigner(x, p, s.mean()(0), s.mean()(1), c(0, 0), c(1, 1), c(0, 1)), 1e-14);
        }
    }
}

TEST(WignerGaussian, NormalizedOverPhaseSpace) {
    const auto s = squeeze(vacuum(1), 0, 0.5, 1.0);
    double sum = 0.0;
    const double h = 0.05;
    for (double x = -8; x <= 8; x += h) {
        for (double p = -8; p <= 8; p += h) {
            sum += wigner_gaussian(s, x, p) * h * h;
        }
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
}

TEST(GaussianOverlap, CoherentStates) {
    const std::complex<double> a(0.4, 0.1), b(-0.2, 0.3);
    const double f = gaussian_overlap(displace(vacuum(1), 0, a), displace(vacuum(1), 0, b));
    EXPECT_NEAR(f, std::exp(-std::norm(a - b)), 1e-14);
}

TEST(GaussianJson, RoundTrip) {
    const auto s = displace(two_mode_squeeze(vacuum(2), {0, 1}, 0.3), 1, {0.1, -0.2});
    const auto back = gaussian_state_from_json(to_json(s));
    EXPECT_EQ(back.n_modes(), 2u);
    EXPECT_LT((back.mean() - s.mean()).norm(), 1e-15);
    EXPECT_LT(max_abs(back.cov() - s.cov()), 1e-15);
    EXPECT_NE(to_json(s).find("gstate-v1"), std::string::npos);
}

TEST(GaussianState, ReducedKeepsSelectedBlocks) {
    const auto s = two_mode_squeeze(vacuum(3), {0, 2}, 0.5);
    const auto r = s.reduced({2});
    EXPECT_NEAR(r.cov()(0, 0), std::cosh(1.0) / 2.0, 1e-14);
}
