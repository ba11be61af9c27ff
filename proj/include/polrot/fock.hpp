#pragma once

// Two-mode truncated number-basis representation, used as an independent
// check of the Gaussian phase-space results.
//
// Basis states |n1, n2> with n1, n2 <= cutoff are stored row-major over
// (n1, n2). Mode 0 is n1, mode 1 is n2.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace polrot::fock {

using Complex = std::complex<double>;

inline constexpr double kDefaultTailBound = 1e-10;

/// Thrown when a requested cutoff cannot hold the state to the tail bound.
class CutoffError : public std::invalid_argument {
public:
    CutoffError(std::size_t requested, std::size_t required);
    std::size_t requested() const noexcept { return requested_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t requested_;
    std::size_t required_;
};

inline std::size_t basis_dimension(std::size_t cutoff) { return (cutoff + 1) * (cutoff + 1); }

inline std::size_t basis_index(std::size_t cutoff, std::size_t n1, std::size_t n2) {
    return n1 * (cutoff + 1) + n2;
}

class FockKet {
public:
    FockKet(std::size_t cutoff, Eigen::VectorXcd amplitudes);

    std::size_t cutoff() const noexcept { return cutoff_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Complex amplitude(std::size_t n1, std::size_t n2) const {
        return amplitudes_(static_cast<Eigen::Index>(basis_index(cutoff_, n1, n2)));
    }

    double norm_squared() const { return amplitudes_.squaredNorm(); }
    /// Weight on basis states with either photon number equal to the cutoff.
    double tail_weight() const;

private:
    std::size_t cutoff_;
    Eigen::VectorXcd amplitudes_;
};

class FockDensity {
public:
    FockDensity(std::size_t cutoff, Eigen::MatrixXcd matrix);

    std::size_t cutoff() const noexcept { return cutoff_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

    double trace() const { return matrix_.trace().real(); }
    double hermiticity_residual() const;
    double min_eigenvalue() const;
    double tail_weight() const;

private:
    std::size_t cutoff_;
    Eigen::MatrixXcd matrix_;
};

/// Smallest cutoff c with t^(c+1) < tail_bound, t = N / (N + 2).
std::size_t required_cutoff(double mean_photons, double tail_bound = kDefaultTailBound);

/// sum_n sqrt((1 - t) t^n) |n, n> for n <= cutoff. Throws CutoffError if the
/// discarded weight t^(cutoff+1) is not below tail_bound.
FockKet tmsv_ket(double mean_photons, std::size_t cutoff, double tail_bound = kDefaultTailBound);

/// Interferometer unitary exp(i theta (a1^dag a2 + a2^dag a1)), whose mode
/// action matches the phase-space QWP * RC(theta) * QWP. The output cutoff
/// grows to the largest total photon number present so no amplitude is
/// truncated.
FockKet apply_interferometer(const FockKet& ket, double theta);

FockDensity to_density(const FockKet& ket);

/// Pure-loss channel with transmissivity t on `mode` (0 or 1).
FockDensity loss_channel(const FockDensity& rho, std::size_t mode, double t);

/// sum (-1)^{n_mode} * population.
double parity_expectation_fock(const FockKet& ket, std::size_t mode);
double parity_expectation_fock(const FockDensity& rho, std::size_t mode);

/// Parity of `mode` after the interferometer, evaluated in the Heisenberg
/// picture as Tr(rho U^dag P U) so the density never has to be enlarged.
double interferometer_parity(const FockDensity& rho, double theta, std::size_t mode);

/// Probability of each total photon number 0 .. 2 * cutoff.
std::vector<double> total_photon_distribution(const FockKet& ket);

/// Mean photon number of `mode`, or of both modes when mode is omitted.
double mean_photon_number(const FockKet& ket);
double mean_photon_number(const FockDensity& rho, std::size_t mode);

}  // namespace polrot::fock
