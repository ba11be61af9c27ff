#pragma once

// Gaussian states and symplectic transforms over a small set of bosonic modes.
//
// Conventions: quadratures are interleaved per mode (x1, p1, x2, p2, ...) and
// the vacuum covariance is the identity, so the symplectic form is the
// block-diagonal matrix with [[0, 1], [-1, 0]] on every mode.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace polrot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kStructuralTolerance = 1e-12;
inline constexpr double kPhysicalityTolerance = 1e-9;

/// Symplectic form for `modes` modes in interleaved ordering.
Matrix symplectic_form(std::size_t modes);

/// Mean vector and covariance matrix of a Gaussian state.
///
/// Construction validates shape, symmetry, positive definiteness and the
/// uncertainty relation cov + i*Omega >= 0; violations throw
/// std::invalid_argument (shape) or std::domain_error (unphysical).
class GaussianState {
public:
    GaussianState(Vector mean, Matrix cov, std::vector<std::string> labels);

    /// Zero-mean state with default labels "m0", "m1", ...
    static GaussianState zero_mean(Matrix cov);

    const Vector& mean() const noexcept { return mean_; }
    const Matrix& cov() const noexcept { return cov_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t modes() const noexcept { return labels_.size(); }

private:
    Vector mean_;
    Matrix cov_;
    std::vector<std::string> labels_;
};

/// Real 2m x 2m matrix that preserves the symplectic form.
class SymplecticTransform {
public:
    /// Throws std::invalid_argument unless the matrix is square, has even
    /// dimension and satisfies S^T Omega S = Omega to kStructuralTolerance.
    explicit SymplecticTransform(Matrix matrix);

    /// Skips the symplectic check. Used to exercise downstream validation.
    static SymplecticTransform unchecked(Matrix matrix);

    static SymplecticTransform identity(std::size_t modes);

    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t modes() const noexcept { return static_cast<std::size_t>(matrix_.rows() / 2); }

    /// Composition: (a * b) applies b first, then a.
    friend SymplecticTransform operator*(const SymplecticTransform& a, const SymplecticTransform& b);

private:
    struct NoCheck {};
    SymplecticTransform(Matrix matrix, NoCheck) : matrix_(std::move(matrix)) {}

    Matrix matrix_;
};

/// Block-diagonal embedding a (+) b.
SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b);

struct SymplecticCheck {
    bool ok = false;
    double residual = 0.0;  // max-abs entry of S^T Omega S - Omega
};

/// Throws std::invalid_argument on a non-square or odd-dimensional matrix.
SymplecticCheck check_symplectic(const Matrix& s, double tol = kStructuralTolerance);

inline SymplecticCheck check_symplectic(const SymplecticTransform& s, double tol = kStructuralTolerance) {
    return check_symplectic(s.matrix(), tol);
}

/// mean' = S mean, cov' = S cov S^T. Throws std::invalid_argument on a
/// dimension mismatch and std::domain_error if the result is unphysical.
GaussianState apply_transform(const GaussianState& state, const SymplecticTransform& s);

/// Concatenated means and labels, block-diagonal covariance.
GaussianState direct_sum(const GaussianState& a, const GaussianState& b);

/// Gaussian partial trace onto `keep` (zero-based mode indices, in the
/// order given). Throws std::invalid_argument on an empty or invalid set.
GaussianState reduce_to_modes(const GaussianState& state, std::span<const std::size_t> keep);

inline GaussianState reduce_to_modes(const GaussianState& state, std::initializer_list<std::size_t> keep) {
    return reduce_to_modes(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

struct StateDiagnostics {
    double symmetry_residual = 0.0;
    double min_eigenvalue = 0.0;           // of cov
    double min_physical_eigenvalue = 0.0;  // of cov + i*Omega
    double determinant = 0.0;
    bool pure = false;                     // |det(cov) - 1| < 1e-9
};

StateDiagnostics validate_state(const GaussianState& state);

}  // namespace polrot
