#include "polrot/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace polrot::fock {
namespace {

void require_mode(std::size_t mode) {
    if (mode > 1) throw std::invalid_argument("fock: mode must be 0 or 1");
}

// Unitary exp(i theta H) on the (M + 1)-dimensional block of total photon
// number M, basis ordered by n1 = 0 .. M. H = a1^dag a2 + a2^dag a1 is real
// tridiagonal in that basis.
Eigen::MatrixXcd block_unitary(std::size_t total, double theta) {
    const auto dim = static_cast<Eigen::Index>(total + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t n1 = 0; n1 < total; ++n1) {
        const double amp = std::sqrt(static_cast<double>((n1 + 1) * (total - n1)));
        const auto i = static_cast<Eigen::Index>(n1);
        h(i + 1, i) = amp;
        h(i, i + 1) = amp;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const Eigen::MatrixXd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) phases(k) = std::polar(1.0, theta * solver.eigenvalues()(k));
    return v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
}

double discarded_weight(double mean_photons, std::size_t cutoff) {
    const double t = mean_photons / (mean_photons + 2.0);
    return std::pow(t, static_cast<double>(cutoff + 1));
}

double binomial(std::size_t n, std::size_t k) {
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0));
}

}  // namespace

CutoffError::CutoffError(std::size_t requested, std::size_t required)
    : std::invalid_argument("fock: cutoff " + std::to_string(requested) + " violates the tail bound; required cutoff " +
                            std::to_string(required)),
      requested_(requested),
      required_(required) {}

FockKet::FockKet(std::size_t cutoff, Eigen::VectorXcd amplitudes)
    : cutoff_(cutoff), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_dimension(cutoff_))
        throw std::invalid_argument("FockKet: amplitude vector does not match the cutoff");
}

double FockKet::tail_weight() const {
    double w = 0.0;
    for (std::size_t k = 0; k <= cutoff_; ++k) {
        w += std::norm(amplitude(cutoff_, k));
        if (k != cutoff_) w += std::norm(amplitude(k, cutoff_));
    }
    return w;
}

FockDensity::FockDensity(std::size_t cutoff, Eigen::MatrixXcd matrix) : cutoff_(cutoff), matrix_(std::move(matrix)) {
    const auto dim = static_cast<Eigen::Index>(basis_dimension(cutoff_));
    if (matrix_.rows() != dim || matrix_.cols() != dim)
        throw std::invalid_argument("FockDensity: matrix does not match the cutoff");
}

double FockDensity::hermiticity_residual() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

double FockDensity::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double FockDensity::tail_weight() const {
    double w = 0.0;
    for (std::size_t k = 0; k <= cutoff_; ++k) {
        w += matrix_(static_cast<Eigen::Index>(basis_index(cutoff_, cutoff_, k)),
                     static_cast<Eigen::Index>(basis_index(cutoff_, cutoff_, k))).real();
        if (k != cutoff_)
            w += matrix_(static_cast<Eigen::Index>(basis_index(cutoff_, k, cutoff_)),
                         static_cast<Eigen::Index>(basis_index(cutoff_, k, cutoff_))).real();
    }
    return w;
}

std::size_t required_cutoff(double mean_photons, double tail_bound) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::invalid_argument("fock: mean photon number must be finite and >= 0");
    if (!(tail_bound > 0.0 && tail_bound < 1.0)) throw std::invalid_argument("fock: tail bound must lie in (0, 1)");
    std::size_t c = 0;
    while (discarded_weight(mean_photons, c) >= tail_bound) ++c;
    return c;
}

FockKet tmsv_ket(double mean_photons, std::size_t cutoff, double tail_bound) {
    const std::size_t needed = required_cutoff(mean_photons, tail_bound);
    if (cutoff < needed) throw CutoffError(cutoff, needed);
    const double t = mean_photons / (mean_photons + 2.0);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_dimension(cutoff)));
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double weight = (1.0 - t) * std::pow(t, static_cast<double>(n));
        amps(static_cast<Eigen::Index>(basis_index(cutoff, n, n))) = std::sqrt(weight);
    }
    return FockKet(cutoff, std::move(amps));
}

FockKet apply_interferometer(const FockKet& ket, double theta) {
    const std::size_t c_in = ket.cutoff();
    std::size_t max_total = c_in;
    for (std::size_t n1 = 0; n1 <= c_in; ++n1)
        for (std::size_t n2 = 0; n2 <= c_in; ++n2)
            if (ket.amplitude(n1, n2) != Complex{}) max_total = std::max(max_total, n1 + n2);
    const std::size_t c_out = max_total;

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_dimension(c_out)));
    for (std::size_t total = 0; total <= 2 * c_in; ++total) {
        Eigen::VectorXcd block = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total + 1));
        bool occupied = false;
        for (std::size_t n1 = 0; n1 <= total; ++n1) {
            const std::size_t n2 = total - n1;
            if (n1 > c_in || n2 > c_in) continue;
            block(static_cast<Eigen::Index>(n1)) = ket.amplitude(n1, n2);
            occupied = occupied || block(static_cast<Eigen::Index>(n1)) != Complex{};
        }
        if (!occupied) continue;
        const Eigen::VectorXcd evolved = block_unitary(total, theta) * block;
        for (std::size_t n1 = 0; n1 <= total; ++n1)
            out(static_cast<Eigen::Index>(basis_index(c_out, n1, total - n1))) = evolved(static_cast<Eigen::Index>(n1));
    }
    return FockKet(c_out, std::move(out));
}

FockDensity to_density(const FockKet& ket) {
    return FockDensity(ket.cutoff(), ket.amplitudes() * ket.amplitudes().adjoint());
}

FockDensity loss_channel(const FockDensity& rho, std::size_t mode, double t) {
    require_mode(mode);
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("loss_channel: transmissivity must lie in [0, 1]");
    const std::size_t c = rho.cutoff();
    // kraus[n][k] = <n - k| A_k |n> = sqrt(C(n, k) t^(n-k) (1-t)^k)
    std::vector<std::vector<double>> kraus(c + 1);
    for (std::size_t n = 0; n <= c; ++n) {
        kraus[n].resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k)
            kraus[n][k] = std::sqrt(binomial(n, k) * std::pow(t, static_cast<double>(n - k)) *
                                    std::pow(1.0 - t, static_cast<double>(k)));
    }
    const auto dim = static_cast<Eigen::Index>(basis_dimension(c));
    const Eigen::MatrixXcd& in = rho.matrix();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    auto split = [c](Eigen::Index i) { return std::pair{static_cast<std::size_t>(i) / (c + 1), static_cast<std::size_t>(i) % (c + 1)}; };
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto [m1, m2] = split(j);
        const std::size_t m_lossy = mode == 0 ? m1 : m2;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const Complex value = in(i, j);
            if (value == Complex{}) continue;
            const auto [n1, n2] = split(i);
            const std::size_t n_lossy = mode == 0 ? n1 : n2;
            const std::size_t kmax = std::min(n_lossy, m_lossy);
            for (std::size_t k = 0; k <= kmax; ++k) {
                const auto row = static_cast<Eigen::Index>(mode == 0 ? basis_index(c, n1 - k, n2) : basis_index(c, n1, n2 - k));
                const auto col = static_cast<Eigen::Index>(mode == 0 ? basis_index(c, m1 - k, m2) : basis_index(c, m1, m2 - k));
                out(row, col) += kraus[n_lossy][k] * kraus[m_lossy][k] * value;
            }
        }
    }
    return FockDensity(c, std::move(out));
}

double parity_expectation_fock(const FockKet& ket, std::size_t mode) {
    require_mode(mode);
    double parity = 0.0;
    for (std::size_t n1 = 0; n1 <= ket.cutoff(); ++n1)
        for (std::size_t n2 = 0; n2 <= ket.cutoff(); ++n2) {
            const std::size_t n = mode == 0 ? n1 : n2;
            parity += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(ket.amplitude(n1, n2));
        }
    return parity;
}

double parity_expectation_fock(const FockDensity& rho, std::size_t mode) {
    require_mode(mode);
    const std::size_t c = rho.cutoff();
    double parity = 0.0;
    for (std::size_t n1 = 0; n1 <= c; ++n1)
        for (std::size_t n2 = 0; n2 <= c; ++n2) {
            const auto i = static_cast<Eigen::Index>(basis_index(c, n1, n2));
            const std::size_t n = mode == 0 ? n1 : n2;
            parity += (n % 2 == 0 ? 1.0 : -1.0) * rho.matrix()(i, i).real();
        }
    return parity;
}

double interferometer_parity(const FockDensity& rho, double theta, std::size_t mode) {
    require_mode(mode);
    const std::size_t c = rho.cutoff();
    double parity = 0.0;
    for (std::size_t total = 0; total <= 2 * c; ++total) {
        const std::size_t lo = total > c ? total - c : 0;
        const std::size_t hi = std::min(total, c);
        const Eigen::MatrixXcd u = block_unitary(total, theta);
        Eigen::VectorXd signs(static_cast<Eigen::Index>(total + 1));
        for (std::size_t n1 = 0; n1 <= total; ++n1) {
            const std::size_t n = mode == 0 ? n1 : total - n1;
            signs(static_cast<Eigen::Index>(n1)) = n % 2 == 0 ? 1.0 : -1.0;
        }
        const Eigen::MatrixXcd observable = u.adjoint() * signs.cast<Complex>().asDiagonal() * u;
        for (std::size_t a = lo; a <= hi; ++a) {
            const auto ia = static_cast<Eigen::Index>(basis_index(c, a, total - a));
            for (std::size_t b = lo; b <= hi; ++b) {
                const auto ib = static_cast<Eigen::Index>(basis_index(c, b, total - b));
                parity += (rho.matrix()(ia, ib) * observable(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a))).real();
            }
        }
    }
    return parity;
}

std::vector<double> total_photon_distribution(const FockKet& ket) {
    std::vector<double> p(2 * ket.cutoff() + 1, 0.0);
    for (std::size_t n1 = 0; n1 <= ket.cutoff(); ++n1)
        for (std::size_t n2 = 0; n2 <= ket.cutoff(); ++n2) p[n1 + n2] += std::norm(ket.amplitude(n1, n2));
    return p;
}

double mean_photon_number(const FockKet& ket) {
    const auto p = total_photon_distribution(ket);
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
    return mean;
}

double mean_photon_number(const FockDensity& rho, std::size_t mode) {
    require_mode(mode);
    const std::size_t c = rho.cutoff();
    double mean = 0.0;
    for (std::size_t n1 = 0; n1 <= c; ++n1)
        for (std::size_t n2 = 0; n2 <= c; ++n2) {
            const auto i = static_cast<Eigen::Index>(basis_index(c, n1, n2));
            mean += static_cast<double>(mode == 0 ? n1 : n2) * rho.matrix()(i, i).real();
        }
    return mean;
}

}  // namespace polrot::fock
