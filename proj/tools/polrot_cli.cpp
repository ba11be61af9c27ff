// polrot: parity-detection polarization-rotation estimation with a two-mode
// squeezed vacuum. Emits CSV on stdout or to --out.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polrot/detection.hpp"
#include "polrot/elements.hpp"
#include "polrot/fock.hpp"
#include "polrot/sweep.hpp"

namespace {

using nlohmann::json;
using namespace polrot;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line values override the --config file; keys are flag names
// without the leading dashes.
class Settings {
public:
    void set(const std::string& key, json value) { values_[key] = std::move(value); }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    void merge_config(const std::string& path, const std::set<std::string>& allowed) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file '" + path + "'");
        json config;
        try {
            in >> config;
        } catch (const json::exception& e) {
            throw UsageError("config file '" + path + "': " + e.what());
        }
        if (!config.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
        for (auto it = config.begin(); it != config.end(); ++it) {
            if (!allowed.count(it.key())) throw UsageError("config file: unknown key '" + it.key() + "'");
            if (!has(it.key())) values_[it.key()] = it.value();
        }
    }

    double number(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second.is_number()) return it->second.get<double>();
        if (it->second.is_string()) {
            const auto text = it->second.get<std::string>();
            try {
                std::size_t used = 0;
                const double v = std::stod(text, &used);
                if (used == text.size()) return v;
            } catch (const std::exception&) {
            }
            throw UsageError("--" + key + ": not a number: '" + text + "'");
        }
        throw UsageError("--" + key + ": expected a number");
    }

    int integer(const std::string& key, int fallback) const {
        const double v = number(key, fallback);
        if (v != static_cast<double>(static_cast<int>(v))) throw UsageError("--" + key + ": expected an integer");
        return static_cast<int>(v);
    }

    double angle(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second.is_number()) return it->second.get<double>();
        if (!it->second.is_string()) throw UsageError("--" + key + ": expected an angle");
        try {
            return sweep::parse_angle(it->second.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw UsageError("--" + key + ": " + e.what());
        }
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (!it->second.is_string()) throw UsageError("--" + key + ": expected a string");
        return it->second.get<std::string>();
    }

private:
    std::map<std::string, json> values_;
};

// Registers string-valued flags on a subcommand and remembers which were given.
class FlagSet {
public:
    explicit FlagSet(CLI::App* app) : app_(app) {}

    FlagSet& add(const std::string& key, const std::string& help) {
        auto& slot = slots_[key];
        options_[key] = app_->add_option("--" + key, slot, help);
        return *this;
    }

    std::set<std::string> keys() const {
        std::set<std::string> k;
        for (const auto& [key, opt] : options_)
            if (key != "config" && key != "out") k.insert(key);
        return k;
    }

    Settings settings() const {
        Settings s;
        for (const auto& [key, opt] : options_)
            if (opt->count() > 0 && key != "config") s.set(key, slots_.at(key));
        if (options_.count("config") && options_.at("config")->count() > 0)
            s.merge_config(slots_.at("config"), keys());
        return s;
    }

private:
    CLI::App* app_;
    std::map<std::string, std::string> slots_;
    std::map<std::string, CLI::Option*> options_;
};

void emit(const std::string& text, const Settings& s) {
    const auto path = s.text("out", "");
    if (path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw UsageError("failed writing output file '" + path + "'");
}

sweep::Route route_from(const Settings& s) {
    const auto r = s.text("route", "closed-form");
    if (r == "closed-form") return sweep::Route::closed_form;
    if (r == "pipeline") return sweep::Route::pipeline;
    throw UsageError("--route must be 'closed-form' or 'pipeline'");
}

PipelineSpec spec_from(const Settings& s) {
    const auto variant = s.text("variant", "lossless");
    PipelineSpec spec;
    spec.mean_photons = s.number("n", 10.0);
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (s.has(k)) throw UsageError(std::string("--") + k + " does not apply to --variant " + variant);
    };
    if (variant == "lossless") {
        forbid({"t1", "t2", "t", "nth"});
        spec.loss = Lossless{};
    } else if (variant == "r1") {
        forbid({"t", "nth"});
        spec.loss = GenerationLoss{s.number("t1", 1.0), s.number("t2", 1.0)};
    } else if (variant == "r2") {
        forbid({"t1", "t2"});
        spec.loss = DetectionLoss{s.number("t", 1.0), s.number("nth", 0.0)};
    } else {
        throw UsageError("--variant must be lossless, r1 or r2");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return spec;
}

std::vector<double> thetas_from(const Settings& s) {
    if (s.has("theta")) {
        if (s.has("theta-steps")) throw UsageError("--theta and --theta-steps are mutually exclusive");
        return {s.angle("theta", 0.0)};
    }
    const int steps = s.integer("theta-steps", 91);
    if (steps < 2) throw UsageError("--theta-steps must be >= 2");
    return sweep::theta_grid(steps);
}

void add_model_flags(FlagSet& f) {
    f.add("variant", "lossless | r1 (generation loss) | r2 (detection loss and thermal noise)")
        .add("n", "mean photon number N of the squeezed vacuum")
        .add("theta", "single rotation angle in radians; accepts pi fractions such as pi/4")
        .add("theta-steps", "number of angles evenly spaced over [0, pi/2]")
        .add("t1", "transmissivity of mode 1 (r1)")
        .add("t2", "transmissivity of mode 2 (r1)")
        .add("t", "detection efficiency (r2)")
        .add("nth", "thermal photons at the detector (r2)")
        .add("route", "closed-form | pipeline")
        .add("out", "output CSV path (default stdout)")
        .add("config", "JSON file of flag defaults");
}

int run_signal(const Settings& s) {
    const sweep::SignalModel model{spec_from(s), route_from(s)};
    emit(sweep::to_csv(sweep::signal_table(model, thetas_from(s))), s);
    return kExitOk;
}

int run_sensitivity(const Settings& s) {
    const sweep::SignalModel model{spec_from(s), route_from(s)};
    const auto report = sweep::sensitivity_table(model, thetas_from(s));
    emit(sweep::to_csv(report.rows) + "\n" + sweep::to_csv(report.summary), s);
    return kExitOk;
}

int run_figure(const std::string& name, const Settings& s) {
    sweep::FigureOptions options;
    options.t_count = s.integer("t-steps", options.t_count);
    options.t2_count = s.integer("t2-steps", options.t2_count);
    options.nth_count = s.integer("nth-steps", options.nth_count);
    options.n_count = s.integer("n-steps", options.n_count);
    options.route = route_from(s);
    sweep::SweepGrid grid;
    try {
        if (name == "fig2") grid = sweep::fig2(options);
        else if (name == "fig3") grid = sweep::fig3(options);
        else if (name == "fig4") grid = sweep::fig4(options);
        else grid = sweep::fig5(options);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(sweep::to_csv(grid.to_table()), s);
    if (name == "fig2") {
        // Equal versus unequal loss at the same total transmissivity.
        const double equal = sweep::SignalModel{{10.0, GenerationLoss{0.5, 0.5}}, options.route}.visibility();
        const double unequal = sweep::SignalModel{{10.0, GenerationLoss{0.3, 0.7}}, options.route}.visibility();
        std::cerr << "fig2: V(T1=0.5, T2=0.5) = " << sweep::format_number(equal)
                  << ", V(T1=0.3, T2=0.7) = " << sweep::format_number(unequal) << '\n';
    }
    return kExitOk;
}

int run_fock_validate(const Settings& s) {
    sweep::FockValidationOptions options;
    if (s.has("n")) options.mean_photons = {s.number("n", 1.0)};
    if (s.has("theta")) options.thetas = {s.angle("theta", 0.0)};
    if (s.has("cutoff")) {
        const int c = s.integer("cutoff", 0);
        if (c < 0) throw UsageError("--cutoff must be >= 0");
        options.cutoff = static_cast<std::size_t>(c);
    }
    for (double n : options.mean_photons) {
        if (!(n >= 0.0)) throw UsageError("--n must be >= 0");
        if (n > 2.0 && !options.cutoff) throw UsageError("--n above 2 requires an explicit --cutoff");
    }
    sweep::FockValidationReport report;
    try {
        report = sweep::run_fock_validation(options);
    } catch (const fock::CutoffError& e) {
        throw ValidationFailure(e.what());
    }
    emit(sweep::to_csv(report.table()), s);
    std::cerr << "fock-validate: " << (report.passed() ? "PASS" : "FAIL") << " max |diff| = "
              << sweep::format_number(report.max_deviation()) << " over " << report.cases.size() << " cases\n";
    return report.passed() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parity-detection estimation of a polarization rotation with a two-mode squeezed vacuum"};
    app.require_subcommand(1);

    auto* signal = app.add_subcommand("signal", "parity signal and outcome probabilities versus theta");
    auto* sens = app.add_subcommand("sensitivity", "sensitivity and Fisher information versus theta");
    FlagSet signal_flags(signal), sens_flags(sens);
    add_model_flags(signal_flags);
    add_model_flags(sens_flags);

    std::map<std::string, std::pair<CLI::App*, FlagSet>> figures;
    for (const char* name : {"fig2", "fig3", "fig4", "fig5"}) {
        auto* sub = app.add_subcommand(name, std::string("regenerate the ") + name + " grid");
        FlagSet flags(sub);
        flags.add("t-steps", "points on the T (or T1) axis")
            .add("t2-steps", "points on the T2 axis (fig2)")
            .add("nth-steps", "points on the thermal-photon axis (fig4)")
            .add("n-steps", "points on the N axis (fig3, fig5)")
            .add("route", "closed-form | pipeline")
            .add("out", "output CSV path (default stdout)")
            .add("config", "JSON file of flag defaults");
        figures.emplace(name, std::pair{sub, std::move(flags)});
    }

    auto* validate = app.add_subcommand("fock-validate", "compare against a truncated Fock-basis simulation");
    FlagSet validate_flags(validate);
    validate_flags.add("n", "single mean photon number (default 0.5, 1, 2)")
        .add("theta", "single rotation angle (default 9 points over [0, pi/2])")
        .add("cutoff", "photon-number cutoff per mode (default from the tail bound)")
        .add("out", "output CSV path (default stdout)")
        .add("config", "JSON file of flag defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (signal->parsed()) return run_signal(signal_flags.settings());
        if (sens->parsed()) return run_sensitivity(sens_flags.settings());
        if (validate->parsed()) return run_fock_validate(validate_flags.settings());
        for (auto& [name, entry] : figures)
            if (entry.first->parsed()) return run_figure(name, entry.second.settings());
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationFailure& e) {
        std::cerr << "validation failed: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
