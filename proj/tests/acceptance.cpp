// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "polrot/detection.hpp"
#include "polrot/elements.hpp"
#include "polrot/phase_space.hpp"
#include "polrot/sweep.hpp"

using namespace polrot;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) { return sweep::format_number(v); }

std::string secs(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", v);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double lossless_ref(double n, double th) {
    const double c = std::cos(2 * th);
    return 1.0 / std::sqrt(1.0 + n * (n + 2) * c * c);
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
    return v;
}

const std::vector<double> kNValues{0.5, 1.0, 2.0, 5.0, 10.0, 20.0};

Outcome criterion1() {
    double worst = 0.0;
    for (double n : kNValues)
        for (double th : linspace(0.0, kPi / 2, 181))
            worst = std::max(worst, std::abs(pipeline_signal({n, Lossless{}})(th) - lossless_ref(n, th)));
    const double spot = pipeline_signal({10.0, Lossless{}})(0.0);
    const bool ok = worst < 1e-9 && std::abs(spot - 0.0909091) < 5e-8;
    return {ok, "max |diff| = " + num(worst) + ", N=10 theta=0 -> " + num(spot)};
}

Outcome criterion2() {
    double worst = 0.0;
    for (double n : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        worst = std::max(worst, std::abs(visibility(pipeline_signal({n, Lossless{}})) - n / (n + 2)));
        worst = std::max(worst, std::abs(visibility(closed_form_signal_fn({n, Lossless{}})) - n / (n + 2)));
    }
    return {worst < 1e-9, "max |V - N/(N+2)| = " + num(worst)};
}

Outcome criterion3() {
    double worst = 0.0, worst_fisher = 0.0;
    bool beats_heisenberg = true;
    for (int n = 1; n <= 20; ++n) {
        const double bound = 1.0 / (2.0 * std::sqrt(n * (n + 2.0)));
        for (const auto& p : {optimal_sensitivity(pipeline_signal({double(n), Lossless{}})),
                              closed_form_optimal_sensitivity({double(n), Lossless{}})}) {
            worst = std::max(worst, std::abs(p.sensitivity - bound));
            beats_heisenberg = beats_heisenberg && p.sensitivity < 1.0 / (2.0 * n);
        }
        const double f = classical_fisher(pipeline_signal({double(n), Lossless{}}), kPi / 4);
        const double target = 4.0 * n * (n + 2.0);
        worst_fisher = std::max(worst_fisher, std::abs(f - target) / target);
    }
    return {worst < 1e-6 && beats_heisenberg && worst_fisher < 1e-6,
            "max |d* - bound| = " + num(worst) + ", below 1/(2N): " + (beats_heisenberg ? "yes" : "no") +
                ", max rel F_c error = " + num(worst_fisher)};
}

Outcome criterion4() {
    double worst = 0.0, limit = 0.0;
    const auto t_grid = linspace(0.0, 1.0, 11);
    const auto thetas = linspace(0.0, kPi / 2, 19);
    for (double n : kNValues)
        for (double t1 : t_grid)
            for (double t2 : t_grid) {
                const PipelineSpec spec{n, GenerationLoss{t1, t2}};
                const auto p = pipeline_signal(spec);
                for (double th : thetas)
                    worst = std::max(worst, std::abs(p(th) - 1.0 / std::sqrt(generation_loss_g1(n, t1, t2, th))));
            }
    for (double n : kNValues)
        for (double th : linspace(0.0, kPi / 2, 181)) {
            limit = std::max(limit, std::abs(pipeline_signal({n, GenerationLoss{1.0, 1.0}})(th) -
                                             pipeline_signal({n, Lossless{}})(th)));
            limit = std::max(limit, std::abs(closed_form_signal({n, GenerationLoss{1.0, 1.0}}, th) - lossless_ref(n, th)));
        }
    return {worst < 1e-9 && limit < 1e-12, "max |diff| = " + num(worst) + ", lossless limit |diff| = " + num(limit)};
}

Outcome criterion5() {
    double worst = 0.0, limit = 0.0;
    const auto t_grid = linspace(0.0, 1.0, 11);
    const std::vector<double> nth_grid{0.0, 1e-10, 1e-6, 1e-3, 1e-2, 0.05, 0.1};
    const auto thetas = linspace(0.0, kPi / 2, 19);
    for (double n : kNValues)
        for (double t : t_grid)
            for (double nth : nth_grid) {
                const auto p = pipeline_signal({n, DetectionLoss{t, nth}});
                for (double th : thetas)
                    worst = std::max(worst, std::abs(p(th) - 1.0 / std::sqrt(detection_loss_determinant(n, t, nth, th))));
            }
    for (double n : kNValues)
        for (double th : linspace(0.0, kPi / 2, 181)) {
            limit = std::max(limit, std::abs(pipeline_signal({n, DetectionLoss{1.0, 0.0}})(th) -
                                             pipeline_signal({n, Lossless{}})(th)));
            limit = std::max(limit, std::abs(closed_form_signal({n, DetectionLoss{1.0, 0.0}}, th) - lossless_ref(n, th)));
        }
    return {worst < 1e-9 && limit < 1e-12, "max |diff| = " + num(worst) + ", lossless limit |diff| = " + num(limit)};
}

Outcome criterion6() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double signal_gap = 0.0, sens_gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double n = 0.1 + 19.9 * unit(rng), t = 0.01 + 0.99 * unit(rng), th = kPi / 2 * unit(rng);
        const PipelineSpec a{n, GenerationLoss{t, t}}, b{n, DetectionLoss{t, 0.0}};
        signal_gap = std::max(signal_gap, std::abs(pipeline_signal(a)(th) - pipeline_signal(b)(th)));
        signal_gap = std::max(signal_gap, std::abs(closed_form_signal(a, th) - closed_form_signal(b, th)));
        const double da = closed_form_sensitivity(a, th), db = closed_form_sensitivity(b, th);
        const double na = sensitivity(pipeline_signal(a), th), nb = sensitivity(pipeline_signal(b), th);
        for (const auto& [x, y] : {std::pair{da, db}, std::pair{na, nb}}) {
            if (std::isinf(x) || std::isinf(y)) {
                if (x != y) sens_gap = std::numeric_limits<double>::infinity();
                continue;
            }
            sens_gap = std::max(sens_gap, std::abs(x - y) / y);
        }
    }
    return {signal_gap < 1e-12 && sens_gap < 1e-6,
            "max signal |diff| = " + num(signal_gap) + ", max sensitivity rel diff = " + num(sens_gap)};
}

Outcome criterion7() {
    double worst = check_symplectic(qwp(2)).residual;
    worst = std::max(worst, check_symplectic(qwp(4)).residual);
    const auto grid = linspace(0.0, 1.0, 11);
    for (double a : grid) {
        worst = std::max(worst, check_symplectic(rotator(2 * kPi * a, 2)).residual);
        worst = std::max(worst, check_symplectic(rotator(2 * kPi * a, 4)).residual);
        worst = std::max(worst, check_symplectic(detector_vbs(a)).residual);
        for (double b : grid) worst = std::max(worst, check_symplectic(vbs_pair(a, b)).residual);
    }
    return {worst < 1e-12, "max residual = " + num(worst)};
}

Outcome criterion8() {
    const auto start = Clock::now();
    const auto report = sweep::run_fock_validation();
    const double elapsed = seconds_since(start);
    return {report.passed() && report.max_deviation() < 1e-6 && elapsed < 120.0,
            "max |diff| = " + num(report.max_deviation()) + " over " + std::to_string(report.cases.size()) +
                " cases in " + secs(elapsed)};
}

Outcome criterion9() {
    const double cold = closed_form_optimal_sensitivity({10.0, DetectionLoss{0.9, 0.0}}).sensitivity;
    const double warm = closed_form_optimal_sensitivity({10.0, DetectionLoss{0.9, 1e-3}}).sensitivity;
    const double change = std::abs(warm - cold) / cold;
    return {change < 0.01, "d*(0) = " + num(cold) + ", d*(1e-3) = " + num(warm) + ", relative change = " + num(change)};
}

// Runs the CLI, writing stdout to `out`; returns the exit code.
int run_cli(const std::string& args, const fs::path& out) {
    const std::string cmd =
        std::string("\"") + POLROT_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Column {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t distinct = 0;
};

// Range and number of distinct values of a named CSV column.
Column column_stats(const std::string& csv, const std::string& name) {
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    const auto idx = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    Column c;
    if (idx == header.size()) return c;
    std::vector<double> values;
    while (std::getline(lines, line)) {
        std::istringstream r(line);
        std::string cell;
        for (std::size_t i = 0; i <= idx && std::getline(r, cell, ','); ++i) {
        }
        values.push_back(std::stod(cell));
    }
    std::sort(values.begin(), values.end());
    c.distinct = static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
    if (!values.empty()) c = {values.front(), values.back(), c.distinct};
    return c;
}

struct AxisExpectation {
    std::string name;
    double lo;
    double hi;
    std::size_t count;
};

Outcome criterion10() {
    const auto dir = fs::temp_directory_path() / ("polrot_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::vector<AxisExpectation>>> figures{
        {"fig2", {{"T1", 0.1, 1.0, 46}, {"T2", 0.1, 1.0, 46}, {"N", 10.0, 10.0, 1}}},
        {"fig3", {{"T", 0.1, 1.0, 46}, {"N", 1.0, 20.0, 20}}},
        {"fig4", {{"T", 0.5, 1.0, 46}, {"n_th", 1e-10, 1e-1, 46}, {"N", 10.0, 10.0, 1}}},
        {"fig5", {{"T", 0.1, 1.0, 46}, {"N", 1.0, 20.0, 20}, {"n_th", 0.1, 0.1, 1}}},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [name, axes] : figures) {
        double slowest = 0.0;
        std::string first;
        bool identical = true;
        for (int rep = 0; rep < 2; ++rep) {
            const auto path = dir / (name + "_" + std::to_string(rep) + ".csv");
            const auto start = Clock::now();
            const int code = run_cli(name, path);
            slowest = std::max(slowest, seconds_since(start));
            ok = ok && code == 0;
            const auto text = slurp(path);
            if (rep == 0) first = text;
            else identical = text == first && !text.empty();
        }
        bool ranges = true;
        for (const auto& a : axes) {
            const auto c = column_stats(first, a.name);
            ranges = ranges && c.distinct == a.count && std::abs(c.lo - a.lo) <= 1e-12 * a.hi &&
                     std::abs(c.hi - a.hi) <= 1e-12 * a.hi;
        }
        ok = ok && identical && ranges && slowest < 60.0;
        detail += name + ": " + secs(slowest) + (identical ? " identical" : " DIFFERS") +
                  (ranges ? "" : " BAD-RANGE") + (name == "fig5" ? "" : "; ");
    }
    fs::remove_all(dir);
    return {ok, detail};
}

Outcome criterion11() {
    const PipelineSpec spec{10.0, GenerationLoss{0.5, 0.5}};
    const double at_peak_closed = closed_form_sensitivity(spec, kPi / 4);
    const double at_peak_numeric = sensitivity(pipeline_signal(spec), kPi / 4);
    const auto best = optimal_sensitivity(pipeline_signal(spec));
    const auto best_closed = closed_form_optimal_sensitivity(spec);
    const auto grid = oracle::grid_minimum([&](double th) { return closed_form_sensitivity(spec, th); },
                                           kSearchDomain.lo, kSearchDomain.hi, 1000001);
    const double c2 = std::pow(std::cos(2 * best_closed.theta), 2);
    const bool ok = std::isinf(at_peak_closed) && std::isinf(at_peak_numeric) && std::isfinite(best.sensitivity) &&
                    std::abs(best.sensitivity - 1.40) < 0.005 && std::abs(c2 - 0.08) < 0.005 &&
                    best_closed.sensitivity <= grid.value * (1 + 1e-12) &&
                    std::abs(best.sensitivity - grid.value) < 1e-6 * grid.value;
    return {ok, "d(pi/4) = " + num(at_peak_closed) + " / " + num(at_peak_numeric) + ", d* = " + num(best.sensitivity) +
                    " (grid " + num(grid.value) + "), cos^2(2 theta*) = " + num(c2)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"lossless signal matches closed form", criterion1},
        {"lossless visibility N/(N+2)", criterion2},
        {"optimal lossless sensitivity and Fisher information", criterion3},
        {"generation-loss pipeline matches closed form", criterion4},
        {"detection-loss pipeline matches closed form", criterion5},
        {"loss placement equivalence", criterion6},
        {"element matrices are symplectic", criterion7},
        {"Fock-basis oracle agreement", criterion8},
        {"thermal-noise threshold", criterion9},
        {"figure regeneration", criterion10},
        {"divergence handling at the fringe peak", criterion11},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
