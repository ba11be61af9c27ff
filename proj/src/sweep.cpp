#include "polrot/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polrot::sweep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, std::string_view whole) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value))
        throw std::invalid_argument("invalid angle '" + std::string(whole) + "'");
    return value;
}

double heisenberg_half(double n) { return n > 0.0 ? 1.0 / (2.0 * n) : kInf; }
double heisenberg(double n) { return n > 0.0 ? 1.0 / n : kInf; }

}  // namespace

void SweepAxis::validate() const {
    if (count < 2) throw std::invalid_argument("axis '" + name + "': count must be >= 2");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw std::invalid_argument("axis '" + name + "': non-finite bound");
    if (spacing == Spacing::log && !(start > 0.0 && stop > 0.0))
        throw std::invalid_argument("axis '" + name + "': log axis bounds must be positive");
}

std::vector<double> SweepAxis::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    const double last = count - 1;
    for (int k = 0; k < count; ++k) {
        const double f = k / last;
        if (spacing == Spacing::linear) {
            v[static_cast<std::size_t>(k)] = start + (stop - start) * f;
        } else {
            const double a = std::log10(start), b = std::log10(stop);
            v[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * f);
        }
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

std::size_t SweepGrid::points() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

CsvTable SweepGrid::to_table() const {
    if (results.size() != points()) throw std::logic_error("SweepGrid: result count does not match the axes");
    CsvTable t;
    for (const auto& a : axes) t.header.push_back(a.name);
    for (const auto& [name, value] : fixed) t.header.push_back(name);
    t.header.insert(t.header.end(), columns.begin(), columns.end());

    std::vector<std::vector<double>> values;
    for (const auto& a : axes) values.push_back(a.values());
    std::vector<std::size_t> index(axes.size(), 0);
    for (std::size_t p = 0; p < results.size(); ++p) {
        if (results[p].size() != columns.size()) throw std::logic_error("SweepGrid: result row has wrong width");
        std::vector<double> row;
        for (std::size_t a = 0; a < axes.size(); ++a) row.push_back(values[a][index[a]]);
        for (const auto& [name, value] : fixed) row.push_back(value);
        row.insert(row.end(), results[p].begin(), results[p].end());
        t.rows.push_back(std::move(row));
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++index[a] < values[a].size()) break;
            index[a] = 0;
        }
    }
    return t;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream out;
    write_csv(out, table);
    return out.str();
}

double parse_angle(std::string_view text) {
    const std::string_view s = trim(text);
    const auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) return parse_number(s, text);

    std::string_view coef = trim(s.substr(0, pi_at));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double factor = 1.0;
    if (coef == "-") {
        factor = -1.0;
    } else if (!coef.empty() && coef != "+") {
        factor = parse_number(coef, text);
    }

    std::string_view rest = trim(s.substr(pi_at + 2));
    double divisor = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw std::invalid_argument("invalid angle '" + std::string(text) + "'");
        divisor = parse_number(rest.substr(1), text);
        if (divisor == 0.0) throw std::invalid_argument("invalid angle '" + std::string(text) + "': division by zero");
    }
    return factor * std::numbers::pi / divisor;
}

double SignalModel::signal(double theta) const {
    return route == Route::closed_form ? closed_form_signal(spec, theta) : pipeline_signal(spec)(theta);
}

double SignalModel::sensitivity(double theta) const {
    return route == Route::closed_form ? closed_form_sensitivity(spec, theta)
                                       : polrot::sensitivity(pipeline_signal(spec), theta);
}

double SignalModel::fisher(double theta) const {
    if (route == Route::pipeline) return classical_fisher(pipeline_signal(spec), theta);
    const double d = closed_form_sensitivity(spec, theta);
    return std::isinf(d) ? 0.0 : 1.0 / (d * d);
}

double SignalModel::visibility() const {
    return polrot::visibility(route == Route::closed_form ? closed_form_signal_fn(spec) : pipeline_signal(spec));
}

OptimalPoint SignalModel::optimum() const {
    return route == Route::closed_form ? closed_form_optimal_sensitivity(spec)
                                       : optimal_sensitivity(pipeline_signal(spec));
}

std::vector<double> theta_grid(int steps) {
    return SweepAxis{"theta_rad", 0.0, std::numbers::pi / 2, steps, Spacing::linear}.values();
}

CsvTable signal_table(const SignalModel& model, const std::vector<double>& thetas) {
    CsvTable t{{"theta_rad", "signal", "p_even", "p_odd"}, {}};
    for (double theta : thetas) {
        const double s = model.signal(theta);
        const auto p = outcome_probabilities(s);
        t.rows.push_back({theta, s, p.even, p.odd});
    }
    return t;
}

SensitivityReport sensitivity_table(const SignalModel& model, const std::vector<double>& thetas) {
    SensitivityReport r;
    r.rows.header = {"theta_rad", "delta_theta", "fisher"};
    for (double theta : thetas) r.rows.rows.push_back({theta, model.sensitivity(theta), model.fisher(theta)});
    const auto best = model.optimum();
    const double n = model.spec.mean_photons;
    r.summary.header = {"theta_opt", "delta_theta_opt", "hl_1_over_2n", "hl_1_over_n"};
    r.summary.rows.push_back({best.theta, best.sensitivity, heisenberg_half(n), heisenberg(n)});
    return r;
}

SweepGrid fig2(const FigureOptions& options) {
    constexpr double kN = 10.0;
    SweepGrid g;
    g.axes = {{"T1", 0.1, 1.0, options.t_count, Spacing::linear}, {"T2", 0.1, 1.0, options.t2_count, Spacing::linear}};
    g.fixed = {{"N", kN}};
    g.columns = {"visibility", "theta_opt", "delta_theta_opt"};
    for (double t1 : g.axes[0].values())
        for (double t2 : g.axes[1].values()) {
            const SignalModel m{{kN, GenerationLoss{t1, t2}}, options.route};
            const auto best = m.optimum();
            g.results.push_back({m.visibility(), best.theta, best.sensitivity});
        }
    return g;
}

SweepGrid fig3(const FigureOptions& options) {
    SweepGrid g;
    g.axes = {{"T", 0.1, 1.0, options.t_count, Spacing::linear}, {"N", 1.0, 20.0, options.n_count, Spacing::linear}};
    g.columns = {"theta_opt", "delta_theta_opt", "hl_1_over_2n", "hl_1_over_n"};
    for (double t : g.axes[0].values())
        for (double n : g.axes[1].values()) {
            const SignalModel m{{n, GenerationLoss{t, t}}, options.route};
            const auto best = m.optimum();
            g.results.push_back({best.theta, best.sensitivity, heisenberg_half(n), heisenberg(n)});
        }
    return g;
}

SweepGrid fig4(const FigureOptions& options) {
    constexpr double kN = 10.0;
    SweepGrid g;
    g.axes = {{"T", 0.5, 1.0, options.t_count, Spacing::linear}, {"n_th", 1e-10, 1e-1, options.nth_count, Spacing::log}};
    g.fixed = {{"N", kN}};
    g.columns = {"visibility", "theta_opt", "delta_theta_opt"};
    for (double t : g.axes[0].values())
        for (double nth : g.axes[1].values()) {
            const SignalModel m{{kN, DetectionLoss{t, nth}}, options.route};
            const auto best = m.optimum();
            g.results.push_back({m.visibility(), best.theta, best.sensitivity});
        }
    return g;
}

SweepGrid fig5(const FigureOptions& options) {
    constexpr double kThermal = 0.1;
    SweepGrid g;
    g.axes = {{"T", 0.1, 1.0, options.t_count, Spacing::linear}, {"N", 1.0, 20.0, options.n_count, Spacing::linear}};
    g.fixed = {{"n_th", kThermal}};
    g.columns = {"theta_opt", "delta_theta_opt", "hl_1_over_2n", "hl_1_over_n"};
    for (double t : g.axes[0].values())
        for (double n : g.axes[1].values()) {
            const SignalModel m{{n, DetectionLoss{t, kThermal}}, options.route};
            const auto best = m.optimum();
            g.results.push_back({best.theta, best.sensitivity, heisenberg_half(n), heisenberg(n)});
        }
    return g;
}

}  // namespace polrot::sweep
