#include "polrot/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polrot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Differences below this many ulps of the operands are indistinguishable
// from zero.
constexpr double kRoundoff = 64.0 * kEps;

template <class F>
double golden_section_argmin(F&& f, double a, double b) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

struct Samples {
    double minus;
    double centre;
    double plus;
};

Samples sample_around(const SignalFn& signal, double theta) {
    return {signal(theta - kDerivativeStep), signal(theta), signal(theta + kDerivativeStep)};
}

bool slope_vanishes(const Samples& s) {
    return std::abs(s.plus - s.minus) <= kRoundoff * (std::abs(s.plus) + std::abs(s.minus));
}

// The stencil straddles a point where the signal reaches +-1: the distance
// to the bound is no larger than the variation across the stencil, so the
// sampled variance is dominated by roundoff and the second-order limit
// F = |s''| applies.
bool touches_bound(const Samples& s) {
    const double gap = std::max(0.0, 1.0 - std::abs(s.centre));
    const double spread = std::max(std::abs(s.plus - s.centre), std::abs(s.minus - s.centre));
    return gap <= spread;
}

double variance_of(double signal) { return std::max(0.0, (1.0 - signal) * (1.0 + signal)); }

// Richardson-extrapolated second difference. The step is wider than the
// slope stencil so roundoff in the signal stays below the 1e-8 level.
double curvature(const SignalFn& signal, double theta) {
    constexpr double h = 1e-4;
    const double centre = signal(theta);
    auto second_difference = [&](double step) {
        return (signal(theta + step) - 2.0 * centre + signal(theta - step)) / (step * step);
    };
    return (4.0 * second_difference(0.5 * h) - second_difference(h)) / 3.0;
}

double sqr(double x) { return x * x; }

// G1 - 1 and D - 1 as sums of non-negative terms plus a cos(2 theta)
// polynomial, so the variance near a signal maximum keeps full precision.
double generation_loss_excess(double n, double t1, double t2, double theta) {
    const double c = std::cos(2.0 * theta);
    const double constant = 0.25 * sqr(n * (t1 - t2)) + n * (t1 * (1.0 - t2) + t2 * (1.0 - t1));
    const double linear = n * (t2 - t1) * (1.0 + 0.5 * n * (t1 + t2));
    const double quadratic = 0.25 * sqr(n * (t1 + t2)) + 2.0 * n * t1 * t2;
    return constant + c * (linear + quadratic * c);
}

double detection_loss_excess(double n, double t, double nth, double theta) {
    const double thermal = 2.0 * nth * (1.0 - t);
    const double constant = 2.0 * n * t * (1.0 - t) + thermal * (2.0 + 2.0 * n * t + thermal);
    return constant + sqr(t) * n * (n + 2.0) * sqr(std::cos(2.0 * theta));
}

double lossless_sensitivity(double n, double theta) {
    const double k = n * (n + 2.0);
    const double s2 = std::sin(2.0 * theta);
    if (k == 0.0 || std::abs(s2) <= kRoundoff) return kInf;
    return (1.0 + k * sqr(std::cos(2.0 * theta))) / (2.0 * std::sqrt(k) * std::abs(s2));
}

double generation_loss_sensitivity(double n, double t1, double t2, double theta) {
    const double excess = generation_loss_excess(n, t1, t2, theta);
    const double g1 = 1.0 + excess;
    const double g2 = generation_loss_g2(n, t1, t2, theta);
    const double a = (t2 - t1) * (2.0 + n * (t1 + t2));
    const double b = 8.0 * t1 * t2 + n * sqr(t1 + t2);
    const double g2_scale = n * (std::abs(a) + std::abs(b));
    const bool flat_variance = excess <= kRoundoff * sqr(1.0 + n);
    if (std::abs(g2) <= kRoundoff * g2_scale) {
        if (!flat_variance) return kInf;
        // Signal touches 1: use |s''| = |G1''| / 2 with G1'' = -dG2/dtheta.
        const double c2 = std::cos(2.0 * theta);
        const double s2 = std::sin(2.0 * theta);
        const double dg2 = n * (2.0 * c2 * (a + b * c2) - 2.0 * b * s2 * s2);
        const double s_second = 0.5 * std::abs(dg2) * std::pow(g1, -1.5);
        return s_second == 0.0 ? kInf : 1.0 / std::sqrt(s_second);
    }
    return 2.0 * std::sqrt(std::max(0.0, excess / g1)) / std::abs(g2 * std::pow(g1, -1.5));
}

double detection_loss_sensitivity(double n, double t, double nth, double theta) {
    const double excess = detection_loss_excess(n, t, nth, theta);
    const double d = 1.0 + excess;
    const double k = n * (n + 2.0);
    const double s4 = std::sin(4.0 * theta);
    const double base = 1.0 + 2.0 * nth * (1.0 - t) + n * t;
    const bool flat_variance = excess <= kRoundoff * sqr(base);
    if (t * t * k == 0.0 || std::abs(s4) <= kRoundoff) {
        if (!flat_variance || t * t * k == 0.0) return kInf;
        const double s_second = 4.0 * t * t * k * std::abs(std::cos(4.0 * theta)) * std::pow(d, -1.5);
        return s_second == 0.0 ? kInf : 1.0 / std::sqrt(s_second);
    }
    return std::sqrt(std::max(0.0, excess / d)) / std::abs(t * t * s4 * k / std::pow(d, 1.5));
}

}  // namespace

double parity_expectation(const GaussianState& state, std::size_t mode) {
    if (mode >= state.modes()) throw std::invalid_argument("parity_expectation: mode index out of range");
    const std::size_t keep[] = {mode};
    const auto reduced = reduce_to_modes(state, keep);
    const Eigen::Matrix2d cov = reduced.cov();
    const Eigen::Vector2d mean = reduced.mean();
    const double det = cov.determinant();
    if (!(det > 0.0)) throw std::domain_error("parity_expectation: reduced covariance is singular");
    const double exponent = mean.dot(cov.inverse() * mean);
    return std::exp(-exponent) / std::sqrt(det);
}

OutcomeProbabilities outcome_probabilities(double signal) {
    if (!(signal >= -1.0 && signal <= 1.0))
        throw std::invalid_argument("outcome_probabilities: signal must lie in [-1, 1]");
    return {0.5 * (1.0 + signal), 0.5 * (1.0 - signal)};
}

double visibility(const SignalFn& signal, AngleDomain domain) {
    const double step = (domain.hi - domain.lo) / kVisibilitySamples;
    int arg_max = 0, arg_min = 0;
    std::vector<double> values(kVisibilitySamples);
    for (int k = 0; k < kVisibilitySamples; ++k) {
        values[static_cast<std::size_t>(k)] = signal(domain.lo + step * k);
        if (values[static_cast<std::size_t>(k)] > values[static_cast<std::size_t>(arg_max)]) arg_max = k;
        if (values[static_cast<std::size_t>(k)] < values[static_cast<std::size_t>(arg_min)]) arg_min = k;
    }
    auto bracket = [&](int k) {
        const double centre = domain.lo + step * k;
        return std::pair{std::max(domain.lo, centre - step), std::min(domain.hi, centre + step)};
    };
    double max_value = values[static_cast<std::size_t>(arg_max)];
    double min_value = values[static_cast<std::size_t>(arg_min)];
    {
        const auto [a, b] = bracket(arg_max);
        max_value = std::max(max_value, signal(golden_section_argmin([&](double x) { return -signal(x); }, a, b)));
    }
    {
        const auto [a, b] = bracket(arg_min);
        min_value = std::min(min_value, signal(golden_section_argmin(signal, a, b)));
    }
    if (max_value == 0.0 && min_value == 0.0) throw std::domain_error("visibility: signal vanishes identically");
    return (max_value - min_value) / (std::abs(max_value) + std::abs(min_value));
}

double classical_fisher(const SignalFn& signal, double theta) {
    const auto s = sample_around(signal, theta);
    const auto p = outcome_probabilities(std::clamp(s.centre, -1.0, 1.0));
    if ((p.even <= 0.0 || p.odd <= 0.0) && !slope_vanishes(s))
        throw std::domain_error("classical_fisher: zero-probability outcome with non-zero slope");
    if (touches_bound(s)) return std::abs(curvature(signal, theta));
    if (slope_vanishes(s)) return 0.0;
    const double slope = (s.plus - s.minus) / (2.0 * kDerivativeStep);
    const double dp = 0.5 * slope;  // dP_even = -dP_odd
    return dp * dp / p.even + dp * dp / p.odd;
}

double sensitivity(const SignalFn& signal, double theta) {
    const auto s = sample_around(signal, theta);
    if (touches_bound(s)) {
        const double k = std::abs(curvature(signal, theta));
        return k == 0.0 ? kInf : 1.0 / std::sqrt(k);
    }
    if (slope_vanishes(s)) return kInf;
    const double slope = (s.plus - s.minus) / (2.0 * kDerivativeStep);
    return std::sqrt(variance_of(s.centre)) / std::abs(slope);
}

EstimationResult evaluate(const SignalFn& signal, double theta) {
    EstimationResult r;
    r.theta = theta;
    r.signal = signal(theta);
    const auto p = outcome_probabilities(std::clamp(r.signal, -1.0, 1.0));
    r.p_even = p.even;
    r.p_odd = p.odd;
    r.fisher = classical_fisher(signal, theta);
    r.sensitivity = sensitivity(signal, theta);
    return r;
}

OptimalPoint minimize_sensitivity(const std::function<double(double)>& sensitivity_of, AngleDomain domain) {
    const int seeds = kOptimizerSeeds;
    const double step = (domain.hi - domain.lo) / (seeds - 1);
    std::vector<double> theta(seeds), value(seeds);
    for (int i = 0; i < seeds; ++i) {
        theta[static_cast<std::size_t>(i)] = i + 1 == seeds ? domain.hi : domain.lo + step * i;
        value[static_cast<std::size_t>(i)] = sensitivity_of(theta[static_cast<std::size_t>(i)]);
    }
    std::vector<OptimalPoint> candidates;
    for (int i = 0; i < seeds; ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (!std::isfinite(value[u])) continue;
        candidates.push_back({theta[u], value[u]});
        const bool left_ok = i == 0 || value[u] <= value[u - 1];
        const bool right_ok = i + 1 == seeds || value[u] <= value[u + 1];
        if (!left_ok || !right_ok) continue;
        const double a = theta[i == 0 ? u : u - 1];
        const double b = theta[i + 1 == seeds ? u : u + 1];
        const double x = golden_section_argmin(sensitivity_of, a, b);
        candidates.push_back({x, sensitivity_of(x)});
    }
    OptimalPoint best{domain.lo, kInf};
    for (const auto& c : candidates) best = c.sensitivity < best.sensitivity ? c : best;
    // Mirror-symmetric curves have several equal minima; report the smallest angle.
    const double floor = best.sensitivity;
    for (const auto& c : candidates)
        if (c.sensitivity <= floor * (1.0 + 1e-12) && c.theta < best.theta) best = c;
    if (!std::isfinite(best.sensitivity))
        throw std::domain_error("optimal_sensitivity: sensitivity is infinite everywhere on the domain");
    return best;
}

OptimalPoint optimal_sensitivity(const SignalFn& signal, AngleDomain domain) {
    return minimize_sensitivity([&](double theta) { return sensitivity(signal, theta); }, domain);
}

SignalFn pipeline_signal(const PipelineSpec& spec, std::size_t mode) {
    spec.validate();
    return [spec, mode](double theta) { return parity_expectation(build_pipeline(spec, theta).output(), mode); };
}

double generation_loss_g1(double n, double t1, double t2, double theta) {
    return 1.0 + generation_loss_excess(n, t1, t2, theta);
}

double generation_loss_g2(double n, double t1, double t2, double theta) {
    return n * std::sin(2.0 * theta) *
           ((t2 - t1) * (2.0 + n * (t1 + t2)) + (8.0 * t1 * t2 + n * sqr(t1 + t2)) * std::cos(2.0 * theta));
}

double detection_loss_determinant(double n, double efficiency, double thermal_photons, double theta) {
    return 1.0 + detection_loss_excess(n, efficiency, thermal_photons, theta);
}

double closed_form_signal(const PipelineSpec& spec, double theta) {
    spec.validate();
    const double n = spec.mean_photons;
    struct Visitor {
        double n, theta;
        double operator()(const Lossless&) const {
            return 1.0 / std::sqrt(1.0 + n * (n + 2.0) * sqr(std::cos(2.0 * theta)));
        }
        double operator()(const GenerationLoss& g) const {
            return 1.0 / std::sqrt(generation_loss_g1(n, g.t1, g.t2, theta));
        }
        double operator()(const DetectionLoss& d) const {
            return 1.0 / std::sqrt(detection_loss_determinant(n, d.efficiency, d.thermal_photons, theta));
        }
    };
    return std::visit(Visitor{n, theta}, spec.loss);
}

double closed_form_sensitivity(const PipelineSpec& spec, double theta) {
    spec.validate();
    const double n = spec.mean_photons;
    struct Visitor {
        double n, theta;
        double operator()(const Lossless&) const { return lossless_sensitivity(n, theta); }
        double operator()(const GenerationLoss& g) const {
            return generation_loss_sensitivity(n, g.t1, g.t2, theta);
        }
        double operator()(const DetectionLoss& d) const {
            return detection_loss_sensitivity(n, d.efficiency, d.thermal_photons, theta);
        }
    };
    return std::visit(Visitor{n, theta}, spec.loss);
}

SignalFn closed_form_signal_fn(const PipelineSpec& spec) {
    spec.validate();
    return [spec](double theta) { return closed_form_signal(spec, theta); };
}

OptimalPoint closed_form_optimal_sensitivity(const PipelineSpec& spec, AngleDomain domain) {
    spec.validate();
    return minimize_sensitivity([&](double theta) { return closed_form_sensitivity(spec, theta); }, domain);
}

double qcrb_sensitivity(double mean_photons) {
    if (!(mean_photons > 0.0)) throw std::invalid_argument("qcrb_sensitivity: N must be > 0");
    return 1.0 / (2.0 * std::sqrt(mean_photons * (mean_photons + 2.0)));
}

}  // namespace polrot
