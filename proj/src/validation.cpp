#include <algorithm>
#include <cmath>
#include <numbers>

#include "polrot/fock.hpp"
#include "polrot/sweep.hpp"

namespace polrot::sweep {

double FockValidationCase::deviation() const { return std::abs(parity_fock - parity_gaussian); }

double FockValidationReport::max_deviation() const {
    double d = 0.0;
    for (const auto& c : cases) d = std::max(d, c.deviation());
    return d;
}

bool FockValidationReport::passed() const { return !cases.empty() && max_deviation() < tolerance; }

CsvTable FockValidationReport::table() const {
    CsvTable t{{"lossy", "N", "T1", "T2", "theta_rad", "cutoff", "parity_fock", "parity_gaussian", "abs_diff"}, {}};
    for (const auto& c : cases)
        t.rows.push_back({c.variant == "lossless" ? 0.0 : 1.0, c.mean_photons, c.t1, c.t2, c.theta,
                          static_cast<double>(c.cutoff), c.parity_fock, c.parity_gaussian, c.deviation()});
    return t;
}

FockValidationReport run_fock_validation(const FockValidationOptions& options) {
    const auto thetas = options.thetas.empty() ? theta_grid(9) : options.thetas;
    FockValidationReport report;
    report.tolerance = options.tolerance;
    for (double n : options.mean_photons) {
        const std::size_t cutoff = options.cutoff.value_or(fock::required_cutoff(n, options.tail_bound));
        const auto ket = fock::tmsv_ket(n, cutoff, options.tail_bound);

        for (double theta : thetas) {
            FockValidationCase c{"lossless", n, 1.0, 1.0, theta, cutoff, 0.0, 0.0};
            c.parity_fock = fock::parity_expectation_fock(fock::apply_interferometer(ket, theta), kParityMode);
            c.parity_gaussian = pipeline_signal({n, Lossless{}})(theta);
            report.cases.push_back(c);
        }

        const auto rho = fock::to_density(ket);
        for (double t1 : options.transmissivities) {
            const auto after_first = fock::loss_channel(rho, 0, t1);
            for (double t2 : options.transmissivities) {
                const auto lossy = fock::loss_channel(after_first, 1, t2);
                const auto gaussian = pipeline_signal({n, GenerationLoss{t1, t2}});
                for (double theta : thetas) {
                    FockValidationCase c{"r1", n, t1, t2, theta, cutoff, 0.0, 0.0};
                    c.parity_fock = fock::interferometer_parity(lossy, theta, kParityMode);
                    c.parity_gaussian = gaussian(theta);
                    report.cases.push_back(c);
                }
            }
        }
    }
    return report;
}

}  // namespace polrot::sweep
