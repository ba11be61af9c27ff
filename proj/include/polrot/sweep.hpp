#pragma once

// Parameter sweeps and deterministic CSV output for the command-line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polrot/detection.hpp"
#include "polrot/elements.hpp"

namespace polrot::sweep {

enum class Spacing { linear, log };

struct SweepAxis {
    std::string name;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    Spacing spacing = Spacing::linear;

    /// Throws std::invalid_argument for count < 2 or a non-positive log axis.
    void validate() const;
    /// Endpoints are reproduced exactly.
    std::vector<double> values() const;
};

/// Numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Cartesian grid over `axes` (first axis outermost) with constant
/// parameters and one result row per grid point.
struct SweepGrid {
    std::vector<SweepAxis> axes;
    std::vector<std::pair<std::string, double>> fixed;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> results;

    std::size_t points() const;
    /// Long-format table: axis columns, fixed columns, result columns.
    /// Throws std::logic_error if results do not match the axis counts.
    CsvTable to_table() const;
};

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

/// Comma-separated, LF line endings, header first.
void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv(const CsvTable& table);

/// Accepts plain decimals and multiples or fractions of pi, e.g. "0.3",
/// "pi", "pi/4", "-3pi/8", "0.25*pi". Throws std::invalid_argument.
double parse_angle(std::string_view text);

/// Which evaluation path produces signals and sensitivities.
enum class Route { closed_form, pipeline };

/// Signal and sensitivity functions of theta for one configuration.
struct SignalModel {
    PipelineSpec spec;
    Route route = Route::closed_form;

    double signal(double theta) const;
    double sensitivity(double theta) const;
    double fisher(double theta) const;
    double visibility() const;
    OptimalPoint optimum() const;
};

/// Evenly spaced angles over [0, pi/2] inclusive.
std::vector<double> theta_grid(int steps);

/// theta_rad, signal, p_even, p_odd
CsvTable signal_table(const SignalModel& model, const std::vector<double>& thetas);

struct SensitivityReport {
    CsvTable rows;     // theta_rad, delta_theta, fisher
    CsvTable summary;  // theta_opt, delta_theta_opt, hl_1_over_2n, hl_1_over_n
};

SensitivityReport sensitivity_table(const SignalModel& model, const std::vector<double>& thetas);

struct FigureOptions {
    int t_count = 46;    // T, T1 axes
    int t2_count = 46;   // T2 axis (fig2)
    int nth_count = 46;  // thermal-photon axis (fig4)
    int n_count = 20;    // mean-photon axis (fig3, fig5)
    Route route = Route::closed_form;
};

/// Visibility and optimal sensitivity over (T1, T2) in [0.1, 1]^2, N = 10.
SweepGrid fig2(const FigureOptions& options = {});
/// Optimal sensitivity over T1 = T2 = T in [0.1, 1] and N in [1, 20].
SweepGrid fig3(const FigureOptions& options = {});
/// Visibility and optimal sensitivity over T in [0.5, 1] and
/// n_th in [1e-10, 1e-1] (log axis), N = 10.
SweepGrid fig4(const FigureOptions& options = {});
/// Optimal sensitivity over T in [0.1, 1] and N in [1, 20] with n_th = 0.1.
SweepGrid fig5(const FigureOptions& options = {});

// Oracle comparison between the Fock-basis simulation and the Gaussian
// pipeline.

struct FockValidationOptions {
    std::vector<double> mean_photons{0.5, 1.0, 2.0};
    std::vector<double> thetas;  // empty: 9 points over [0, pi/2]
    std::vector<double> transmissivities{0.5, 0.8, 1.0};
    std::optional<std::size_t> cutoff;  // empty: chosen from the tail bound
    double tail_bound = 1e-10;
    double tolerance = 1e-6;
};

struct FockValidationCase {
    std::string variant;  // "lossless" or "r1"
    double mean_photons = 0.0;
    double t1 = 1.0;
    double t2 = 1.0;
    double theta = 0.0;
    std::size_t cutoff = 0;
    double parity_fock = 0.0;
    double parity_gaussian = 0.0;

    double deviation() const;
};

struct FockValidationReport {
    std::vector<FockValidationCase> cases;
    double tolerance = 0.0;

    double max_deviation() const;
    bool passed() const;
    CsvTable table() const;
};

/// Throws fock::CutoffError if an explicit cutoff is too small.
FockValidationReport run_fock_validation(const FockValidationOptions& options = {});

}  // namespace polrot::sweep
