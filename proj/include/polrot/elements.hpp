#pragma once

// Input states, optical elements and the three composed interferometer
// pipelines (lossless, loss at generation, loss and thermal noise at
// detection).
//
// Mode layout: modes 0 and 1 are the two polarization modes of the probe;
// in the 4-mode pipelines modes 2 and 3 are environment ports. Parity is
// read out on mode 1.

#include <cstddef>
#include <variant>

#include "polrot/phase_space.hpp"

namespace polrot {

inline constexpr std::size_t kProbeModes = 2;
inline constexpr std::size_t kExtendedModes = 4;
inline constexpr std::size_t kParityMode = 1;

GaussianState tmsv(double mean_photons);
GaussianState vacuum(std::size_t modes);
GaussianState thermal(double mean_thermal_photons, std::size_t modes);

/// Quarter-wave plate on modes 0-1, identity on ancillas. `total_modes` is 2 or 4.
SymplecticTransform qwp(std::size_t total_modes = kProbeModes);

/// Rotating crystal: rotation by theta on mode 0, by -theta on mode 1.
SymplecticTransform rotator(double theta, std::size_t total_modes = kProbeModes);

/// Generation loss: mode 0 mixes with environment mode 2 (transmissivity t1),
/// mode 1 with environment mode 3 (t2).
SymplecticTransform vbs_pair(double t1, double t2);

/// Detector inefficiency: mode 1 mixes with environment mode 3; mode 0 is
/// untouched and mode 2 picks up a sign flip.
SymplecticTransform detector_vbs(double efficiency);

struct Lossless {};

struct GenerationLoss {
    double t1 = 1.0;
    double t2 = 1.0;
};

struct DetectionLoss {
    double efficiency = 1.0;
    double thermal_photons = 0.0;
};

using LossModel = std::variant<Lossless, GenerationLoss, DetectionLoss>;

/// Physical configuration of one interferometer; the rotation angle is
/// supplied separately so that one spec describes a whole signal curve.
struct PipelineSpec {
    double mean_photons = 0.0;
    LossModel loss = Lossless{};

    /// Throws std::invalid_argument if any parameter is out of range.
    void validate() const;
};

struct Pipeline {
    GaussianState input;
    SymplecticTransform transform;

    GaussianState output() const { return apply_transform(input, transform); }
};

/// Input state and composed transform for `spec` at rotation angle `theta`.
/// Generation loss acts before the interferometer, detection loss after it.
Pipeline build_pipeline(const PipelineSpec& spec, double theta);

}  // namespace polrot
