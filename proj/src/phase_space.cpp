#include "polrot/phase_space.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polrot {
namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

double symmetry_residual(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double min_physical_eigenvalue(const Matrix& cov) {
    const auto modes = static_cast<std::size_t>(cov.rows() / 2);
    Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * symplectic_form(modes).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

std::vector<std::string> default_labels(std::size_t modes) {
    std::vector<std::string> labels;
    labels.reserve(modes);
    for (std::size_t i = 0; i < modes; ++i) labels.push_back("m" + std::to_string(i));
    return labels;
}

}  // namespace

Matrix symplectic_form(std::size_t modes) {
    Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const auto i = static_cast<Eigen::Index>(2 * k);
        omega(i, i + 1) = 1.0;
        omega(i + 1, i) = -1.0;
    }
    return omega;
}

GaussianState::GaussianState(Vector mean, Matrix cov, std::vector<std::string> labels)
    : mean_(std::move(mean)), cov_(std::move(cov)), labels_(std::move(labels)) {
    const auto dim = static_cast<Eigen::Index>(2 * labels_.size());
    if (labels_.empty()) throw std::invalid_argument("GaussianState: at least one mode is required");
    if (mean_.size() != dim) throw std::invalid_argument("GaussianState: mean length must be 2 x modes");
    if (cov_.rows() != dim || cov_.cols() != dim)
        throw std::invalid_argument("GaussianState: covariance must be (2 x modes) square");
    if (!cov_.allFinite() || !mean_.allFinite()) throw std::domain_error("GaussianState: non-finite entries");
    if (symmetry_residual(cov_) > kStructuralTolerance * scale_of(cov_))
        throw std::domain_error("GaussianState: covariance is not symmetric");
    if (min_eigenvalue(cov_) <= 0.0) throw std::domain_error("GaussianState: covariance is not positive definite");
    if (min_physical_eigenvalue(cov_) < -kPhysicalityTolerance)
        throw std::domain_error("GaussianState: covariance violates the uncertainty relation");
}

GaussianState GaussianState::zero_mean(Matrix cov) {
    const auto modes = static_cast<std::size_t>(cov.rows() / 2);
    if (cov.rows() % 2 != 0) throw std::invalid_argument("GaussianState: odd covariance dimension");
    Vector mean = Vector::Zero(cov.rows());
    return GaussianState(std::move(mean), std::move(cov), default_labels(modes));
}

SymplecticTransform::SymplecticTransform(Matrix matrix) : matrix_(std::move(matrix)) {
    const auto check = check_symplectic(matrix_);
    if (!check.ok)
        throw std::invalid_argument("SymplecticTransform: matrix is not symplectic (residual " +
                                    std::to_string(check.residual) + ")");
}

SymplecticTransform SymplecticTransform::unchecked(Matrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0)
        throw std::invalid_argument("SymplecticTransform: matrix must be square with even dimension");
    return SymplecticTransform(std::move(matrix), NoCheck{});
}

SymplecticTransform SymplecticTransform::identity(std::size_t modes) {
    return SymplecticTransform(Matrix::Identity(2 * modes, 2 * modes), NoCheck{});
}

SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b) {
    if (a.matrix_.rows() != b.matrix_.rows())
        throw std::invalid_argument("SymplecticTransform: cannot compose transforms of different arity");
    return SymplecticTransform(a.matrix_ * b.matrix_, SymplecticTransform::NoCheck{});
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
    const auto na = a.matrix().rows();
    const auto nb = b.matrix().rows();
    Matrix m = Matrix::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = a.matrix();
    m.bottomRightCorner(nb, nb) = b.matrix();
    return SymplecticTransform::unchecked(std::move(m));
}

SymplecticCheck check_symplectic(const Matrix& s, double tol) {
    if (s.rows() != s.cols()) throw std::invalid_argument("check_symplectic: matrix must be square");
    if (s.rows() % 2 != 0) throw std::invalid_argument("check_symplectic: dimension must be even");
    const Matrix omega = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
    const double residual = (s.transpose() * omega * s - omega).cwiseAbs().maxCoeff();
    return {residual <= tol, residual};
}

GaussianState apply_transform(const GaussianState& state, const SymplecticTransform& s) {
    if (s.matrix().rows() != state.cov().rows())
        throw std::invalid_argument("apply_transform: transform arity does not match the state");
    const Matrix& m = s.matrix();
    Vector mean = m * state.mean();
    Matrix cov = m * state.cov() * m.transpose();
    // S cov S^T is symmetric in exact arithmetic; drop the rounding asymmetry.
    cov = 0.5 * (cov + cov.transpose()).eval();
    return GaussianState(std::move(mean), std::move(cov), state.labels());
}

GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
    const auto na = a.cov().rows();
    const auto nb = b.cov().rows();
    Vector mean(na + nb);
    mean << a.mean(), b.mean();
    Matrix cov = Matrix::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    auto labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    return GaussianState(std::move(mean), std::move(cov), std::move(labels));
}

GaussianState reduce_to_modes(const GaussianState& state, std::span<const std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("reduce_to_modes: no modes to keep");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= state.modes()) throw std::invalid_argument("reduce_to_modes: mode index out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (keep[j] == keep[i]) throw std::invalid_argument("reduce_to_modes: duplicate mode index");
    }
    const auto dim = static_cast<Eigen::Index>(2 * keep.size());
    std::vector<Eigen::Index> rows;
    rows.reserve(static_cast<std::size_t>(dim));
    for (auto k : keep) {
        rows.push_back(static_cast<Eigen::Index>(2 * k));
        rows.push_back(static_cast<Eigen::Index>(2 * k + 1));
    }
    Vector mean(dim);
    Matrix cov(dim, dim);
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < dim; ++i) {
        mean(i) = state.mean()(rows[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < dim; ++j)
            cov(i, j) = state.cov()(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
    }
    for (auto k : keep) labels.push_back(state.labels()[k]);
    return GaussianState(std::move(mean), std::move(cov), std::move(labels));
}

StateDiagnostics validate_state(const GaussianState& state) {
    StateDiagnostics d;
    d.symmetry_residual = symmetry_residual(state.cov());
    d.min_eigenvalue = min_eigenvalue(state.cov());
    d.min_physical_eigenvalue = min_physical_eigenvalue(state.cov());
    d.determinant = state.cov().determinant();
    d.pure = std::abs(d.determinant - 1.0) < 1e-9;
    return d;
}

}  // namespace polrot
