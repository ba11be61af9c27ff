#include "polrot/elements.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "polrot/detection.hpp"

using namespace polrot;

namespace {

constexpr double kPi = std::numbers::pi;

// Parity of mode 2 for the lossless interferometer.
double lossless_parity(double n, double theta) { return 1.0 / std::sqrt(1.0 + n * (n + 2.0) * std::pow(std::cos(2.0 * theta), 2)); }

double pipeline_parity(const PipelineSpec& spec, double theta) {
    return parity_expectation(build_pipeline(spec, theta).output());
}

}  // namespace

TEST(Tmsv, CovarianceEntries) {
    EXPECT_TRUE(tmsv(0.0).cov().isApprox(Matrix::Identity(4, 4), 0.0));
    const auto s = tmsv(10.0);
    EXPECT_EQ(s.cov()(0, 0), 11.0);
    EXPECT_EQ(s.cov()(3, 3), 11.0);
    EXPECT_NEAR(s.cov()(0, 2), 10.954451, 1e-6);
    EXPECT_NEAR(s.cov()(1, 3), -10.954451, 1e-6);
    EXPECT_EQ(s.cov()(0, 1), 0.0);
    EXPECT_TRUE(s.mean().isZero(0.0));
    for (double n : {0.0, 0.3, 1.0, 7.5, 20.0}) EXPECT_NEAR(tmsv(n).cov().determinant(), 1.0, 1e-9) << n;
    EXPECT_THROW(tmsv(-0.1), std::invalid_argument);
}

TEST(VacuumThermal, Covariances) {
    EXPECT_TRUE(thermal(0.0, 2).cov().isApprox(vacuum(2).cov(), 0.0));
    EXPECT_TRUE(thermal(0.1, 2).cov().isApprox(1.2 * Matrix::Identity(4, 4), 1e-15));
    EXPECT_DOUBLE_EQ(parity_expectation(vacuum(1), 0), 1.0);
    EXPECT_THROW(vacuum(0), std::invalid_argument);
    EXPECT_THROW(thermal(-1.0, 1), std::invalid_argument);
}

TEST(Qwp, MatrixAndEmbedding) {
    Matrix expected(4, 4);
    expected << 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, -1, 0, 0, 1, 0, -1;
    expected /= std::sqrt(2.0);
    EXPECT_TRUE(qwp(2).matrix().isApprox(expected, 0.0));
    const Matrix big = qwp(4).matrix();
    EXPECT_TRUE(big.topLeftCorner(4, 4).isApprox(expected, 0.0));
    EXPECT_TRUE(big.bottomRightCorner(4, 4).isApprox(Matrix::Identity(4, 4), 0.0));
    EXPECT_TRUE(big.topRightCorner(4, 4).isZero(0.0));
    EXPECT_TRUE((qwp() * qwp()).matrix().isApprox(Matrix::Identity(4, 4), 1e-15));
    EXPECT_THROW(qwp(3), std::invalid_argument);
}

TEST(Rotator, GroupLaw) {
    EXPECT_TRUE(rotator(0.0).matrix().isApprox(Matrix::Identity(4, 4), 0.0));
    EXPECT_TRUE((rotator(0.4) * rotator(-1.1)).matrix().isApprox(rotator(-0.7).matrix(), 1e-14));
    const Matrix q = rotator(kPi / 2).matrix();
    Matrix expected(4, 4);
    expected << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
    EXPECT_LT((q - expected).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(rotator(0.1, 8), std::invalid_argument);
}

TEST(VbsPair, LimitsAndRange) {
    Matrix lossless = Matrix::Identity(8, 8);
    lossless.bottomRightCorner(4, 4) *= -1.0;
    EXPECT_TRUE(vbs_pair(1.0, 1.0).matrix().isApprox(lossless, 0.0));

    const Matrix swap = vbs_pair(0.0, 0.0).matrix();
    EXPECT_TRUE(swap.topLeftCorner(4, 4).isZero(0.0));
    EXPECT_TRUE(swap.topRightCorner(4, 4).isApprox(Matrix::Identity(4, 4), 0.0));
    EXPECT_TRUE(swap.bottomLeftCorner(4, 4).isApprox(Matrix::Identity(4, 4), 0.0));

    EXPECT_NEAR(vbs_pair(0.36, 0.5).matrix()(0, 4), 0.8, 1e-15);
    EXPECT_NEAR(vbs_pair(0.36, 0.5).matrix()(4, 4), -0.6, 1e-15);
    EXPECT_THROW(vbs_pair(1.1, 0.5), std::invalid_argument);
    EXPECT_THROW(vbs_pair(0.5, -0.1), std::invalid_argument);
}

TEST(DetectorVbs, LimitsAndRange) {
    const Matrix ideal = detector_vbs(1.0).matrix();
    Matrix expected = Matrix::Identity(8, 8);
    expected.bottomRightCorner(4, 4) *= -1.0;
    EXPECT_TRUE(ideal.isApprox(expected, 0.0));

    const Matrix dark = detector_vbs(0.0).matrix();
    EXPECT_EQ(dark(2, 2), 0.0);
    EXPECT_EQ(dark(2, 6), 1.0);
    EXPECT_EQ(dark(3, 7), 1.0);
    EXPECT_EQ(dark(0, 0), 1.0);
    EXPECT_THROW(detector_vbs(2.0), std::invalid_argument);
}

TEST(Elements, AllTransformsSymplecticOnParameterGrid) {
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double a = i / 9.0, b = j / 9.0;
            EXPECT_LT(check_symplectic(vbs_pair(a, b)).residual, 1e-12);
            EXPECT_LT(check_symplectic(detector_vbs(a)).residual, 1e-12);
            EXPECT_LT(check_symplectic(rotator(2 * kPi * a, 4)).residual, 1e-12);
        }
}

TEST(PipelineSpec, Validation) {
    EXPECT_NO_THROW((PipelineSpec{10.0, Lossless{}}.validate()));
    EXPECT_THROW((PipelineSpec{-1.0, Lossless{}}.validate()), std::invalid_argument);
    EXPECT_THROW((PipelineSpec{1.0, GenerationLoss{1.5, 1.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((PipelineSpec{1.0, DetectionLoss{0.5, -0.1}}.validate()), std::invalid_argument);
    EXPECT_THROW(build_pipeline({1.0, DetectionLoss{1.2, 0.0}}, 0.0), std::invalid_argument);
}

TEST(BuildPipeline, LosslessPureAndParity) {
    const auto p = build_pipeline({10.0, Lossless{}}, kPi / 4);
    EXPECT_EQ(p.input.modes(), 2u);
    EXPECT_NEAR(parity_expectation(p.output()), 1.0, 1e-12);
    for (double theta : {0.0, 0.2, 0.7, 1.3}) {
        EXPECT_NEAR(build_pipeline({7.0, Lossless{}}, theta).output().cov().determinant(), 1.0, 1e-9);
    }
}

TEST(BuildPipeline, LossyLimitsMatchLossless) {
    for (double n : {0.5, 3.0, 10.0})
        for (int k = 0; k <= 12; ++k) {
            const double theta = k * kPi / 24;
            const double expected = lossless_parity(n, theta);
            EXPECT_NEAR(pipeline_parity({n, GenerationLoss{1.0, 1.0}}, theta), expected, 1e-12);
            EXPECT_NEAR(pipeline_parity({n, DetectionLoss{1.0, 0.0}}, theta), expected, 1e-12);
        }
}

TEST(BuildPipeline, LossPlacementAndOrdering) {
    const auto r1 = build_pipeline({10.0, GenerationLoss{0.5, 0.5}}, 0.3);
    const auto r2 = build_pipeline({10.0, DetectionLoss{0.5, 0.2}}, 0.3);
    EXPECT_EQ(r1.input.modes(), 4u);
    EXPECT_TRUE(r1.input.cov().bottomRightCorner(4, 4).isApprox(Matrix::Identity(4, 4), 0.0));
    EXPECT_TRUE(r2.input.cov().bottomRightCorner(4, 4).isApprox(1.4 * Matrix::Identity(4, 4), 1e-15));

    // Generation loss: VBS first. Detection loss: VBS last.
    const auto interferometer = qwp(4) * rotator(0.3, 4) * qwp(4);
    EXPECT_TRUE(r1.transform.matrix().isApprox((interferometer * vbs_pair(0.5, 0.5)).matrix(), 0.0));
    EXPECT_TRUE(r2.transform.matrix().isApprox((detector_vbs(0.5) * interferometer).matrix(), 0.0));
}
