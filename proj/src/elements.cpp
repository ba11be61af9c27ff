#include "polrot/elements.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polrot {
namespace {

void require_unit_interval(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void require_supported_arity(std::size_t modes, const char* what) {
    if (modes != kProbeModes && modes != kExtendedModes)
        throw std::invalid_argument(std::string(what) + ": total_modes must be 2 or 4");
}

SymplecticTransform embed(Matrix probe, std::size_t total_modes) {
    Matrix m = Matrix::Identity(2 * total_modes, 2 * total_modes);
    m.topLeftCorner(4, 4) = probe;
    return SymplecticTransform(std::move(m));
}

}  // namespace

GaussianState tmsv(double mean_photons) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::invalid_argument("tmsv: mean photon number must be finite and >= 0");
    const double d = mean_photons + 1.0;
    const double c = std::sqrt(mean_photons * (mean_photons + 2.0));
    Matrix cov(4, 4);
    cov << d, 0, c, 0,
           0, d, 0, -c,
           c, 0, d, 0,
           0, -c, 0, d;
    return GaussianState(Vector::Zero(4), std::move(cov), {"H", "V"});
}

GaussianState vacuum(std::size_t modes) { return thermal(0.0, modes); }

GaussianState thermal(double mean_thermal_photons, std::size_t modes) {
    if (modes == 0) throw std::invalid_argument("thermal: at least one mode is required");
    if (!(mean_thermal_photons >= 0.0) || !std::isfinite(mean_thermal_photons))
        throw std::invalid_argument("thermal: mean photon number must be finite and >= 0");
    const auto dim = static_cast<Eigen::Index>(2 * modes);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < modes; ++i) labels.push_back("env" + std::to_string(i));
    return GaussianState(Vector::Zero(dim), (2.0 * mean_thermal_photons + 1.0) * Matrix::Identity(dim, dim),
                         std::move(labels));
}

SymplecticTransform qwp(std::size_t total_modes) {
    require_supported_arity(total_modes, "qwp");
    Matrix m(4, 4);
    m << 1, 0, 1, 0,
         0, 1, 0, 1,
         1, 0, -1, 0,
         0, 1, 0, -1;
    return embed(m / std::sqrt(2.0), total_modes);
}

SymplecticTransform rotator(double theta, std::size_t total_modes) {
    require_supported_arity(total_modes, "rotator");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix m(4, 4);
    m << c, -s, 0, 0,
         s, c, 0, 0,
         0, 0, c, s,
         0, 0, -s, c;
    return embed(std::move(m), total_modes);
}

SymplecticTransform vbs_pair(double t1, double t2) {
    require_unit_interval(t1, "vbs_pair: T1");
    require_unit_interval(t2, "vbs_pair: T2");
    const double a = std::sqrt(t1), b = std::sqrt(1.0 - t1);
    const double c = std::sqrt(t2), d = std::sqrt(1.0 - t2);
    Matrix m(8, 8);
    m << a, 0, 0, 0, b, 0, 0, 0,
         0, a, 0, 0, 0, b, 0, 0,
         0, 0, c, 0, 0, 0, d, 0,
         0, 0, 0, c, 0, 0, 0, d,
         b, 0, 0, 0, -a, 0, 0, 0,
         0, b, 0, 0, 0, -a, 0, 0,
         0, 0, d, 0, 0, 0, -c, 0,
         0, 0, 0, d, 0, 0, 0, -c;
    return SymplecticTransform(std::move(m));
}

SymplecticTransform detector_vbs(double efficiency) {
    require_unit_interval(efficiency, "detector_vbs: T");
    const double a = std::sqrt(efficiency), b = std::sqrt(1.0 - efficiency);
    Matrix m(8, 8);
    m << 1, 0, 0, 0, 0, 0, 0, 0,
         0, 1, 0, 0, 0, 0, 0, 0,
         0, 0, a, 0, 0, 0, b, 0,
         0, 0, 0, a, 0, 0, 0, b,
         0, 0, 0, 0, -1, 0, 0, 0,
         0, 0, 0, 0, 0, -1, 0, 0,
         0, 0, b, 0, 0, 0, -a, 0,
         0, 0, 0, b, 0, 0, 0, -a;
    return SymplecticTransform(std::move(m));
}

void PipelineSpec::validate() const {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::invalid_argument("PipelineSpec: N must be finite and >= 0");
    if (const auto* g = std::get_if<GenerationLoss>(&loss)) {
        require_unit_interval(g->t1, "PipelineSpec: T1");
        require_unit_interval(g->t2, "PipelineSpec: T2");
    } else if (const auto* d = std::get_if<DetectionLoss>(&loss)) {
        require_unit_interval(d->efficiency, "PipelineSpec: T");
        if (!(d->thermal_photons >= 0.0) || !std::isfinite(d->thermal_photons))
            throw std::invalid_argument("PipelineSpec: n_th must be finite and >= 0");
    }
}

Pipeline build_pipeline(const PipelineSpec& spec, double theta) {
    spec.validate();
    struct Builder {
        double n;
        double theta;
        Pipeline operator()(const Lossless&) const {
            return {tmsv(n), qwp() * rotator(theta) * qwp()};
        }
        Pipeline operator()(const GenerationLoss& g) const {
            const auto interferometer = qwp(kExtendedModes) * rotator(theta, kExtendedModes) * qwp(kExtendedModes);
            return {direct_sum(tmsv(n), vacuum(2)), interferometer * vbs_pair(g.t1, g.t2)};
        }
        Pipeline operator()(const DetectionLoss& d) const {
            const auto interferometer = qwp(kExtendedModes) * rotator(theta, kExtendedModes) * qwp(kExtendedModes);
            return {direct_sum(tmsv(n), thermal(d.thermal_photons, 2)), detector_vbs(d.efficiency) * interferometer};
        }
    };
    return std::visit(Builder{spec.mean_photons, theta}, spec.loss);
}

}  // namespace polrot
