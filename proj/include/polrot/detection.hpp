#pragma once

// Parity-detection observables and single-shot estimation metrics.

#include <cstddef>
#include <functional>
#include <numbers>

#include "polrot/elements.hpp"
#include "polrot/phase_space.hpp"

namespace polrot {

/// Parity signal as a function of the rotation angle (radians).
using SignalFn = std::function<double(double)>;

inline constexpr double kDerivativeStep = 1e-5;
inline constexpr double kDomainMargin = 1e-4;
inline constexpr int kVisibilitySamples = 1801;
inline constexpr int kOptimizerSeeds = 64;

struct AngleDomain {
    double lo = 0.0;
    double hi = std::numbers::pi / 2;
};

/// Interior of one signal period, used when searching for the best
/// operating point.
inline constexpr AngleDomain kSearchDomain{kDomainMargin, std::numbers::pi / 2 - kDomainMargin};

struct OutcomeProbabilities {
    double even = 0.0;
    double odd = 0.0;
};

struct EstimationResult {
    double theta = 0.0;
    double signal = 0.0;
    double p_even = 0.0;
    double p_odd = 0.0;
    double fisher = 0.0;       // per shot
    double sensitivity = 0.0;  // single-shot delta theta, +inf at stationary points
};

struct OptimalPoint {
    double theta = 0.0;
    double sensitivity = 0.0;
};

/// exp(-m^T G^-1 m) / sqrt(det G) for the reduced mean m and covariance G
/// of `mode`. Throws std::domain_error if the reduced covariance is singular.
double parity_expectation(const GaussianState& state, std::size_t mode = kParityMode);

/// Throws std::invalid_argument unless signal is in [-1, 1].
OutcomeProbabilities outcome_probabilities(double signal);

/// Fringe contrast (max - min) / (|max| + |min|) over the global extrema of
/// the signal on [lo, hi). Throws std::domain_error if max = min = 0.
double visibility(const SignalFn& signal, AngleDomain domain = {});

/// Per-shot Fisher information of the even/odd outcome, from a central
/// difference of the signal. At a point where the signal touches +-1 with
/// zero slope the second-order limit |signal''| is returned. Throws
/// std::domain_error where an outcome has zero probability but the slope
/// does not vanish.
double classical_fisher(const SignalFn& signal, double theta);

/// Error-propagation sensitivity sqrt(1 - s^2) / |ds/dtheta|; +inf where the
/// slope vanishes but the variance does not.
double sensitivity(const SignalFn& signal, double theta);

EstimationResult evaluate(const SignalFn& signal, double theta);

/// Global minimum of `sensitivity_of` by multi-start golden-section search.
/// Throws std::domain_error if every evaluation is infinite.
OptimalPoint minimize_sensitivity(const std::function<double(double)>& sensitivity_of,
                                  AngleDomain domain = kSearchDomain);

OptimalPoint optimal_sensitivity(const SignalFn& signal, AngleDomain domain = kSearchDomain);

/// Parity of `mode` at the output of the matrix pipeline built from `spec`.
SignalFn pipeline_signal(const PipelineSpec& spec, std::size_t mode = kParityMode);

/// Closed-form parity signal for each loss model.
double closed_form_signal(const PipelineSpec& spec, double theta);

/// Closed-form sensitivity with analytic derivatives; +inf at stationary
/// points of the signal (except where the signal reaches 1, where the
/// second-order limit is used).
double closed_form_sensitivity(const PipelineSpec& spec, double theta);

SignalFn closed_form_signal_fn(const PipelineSpec& spec);

OptimalPoint closed_form_optimal_sensitivity(const PipelineSpec& spec, AngleDomain domain = kSearchDomain);

/// Determinant of the detected mode's covariance under generation loss.
double generation_loss_g1(double n, double t1, double t2, double theta);

/// Slope factor paired with G1; equals -dG1/dtheta.
double generation_loss_g2(double n, double t1, double t2, double theta);

/// Determinant of the detected mode's covariance under detection loss.
double detection_loss_determinant(double n, double efficiency, double thermal_photons, double theta);

/// Best achievable single-shot sensitivity 1 / (2 sqrt(N (N + 2))).
/// Throws std::invalid_argument for N <= 0.
double qcrb_sensitivity(double mean_photons);

}  // namespace polrot
