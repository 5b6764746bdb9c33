#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/pressure.hpp"

namespace casimir::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    char variable = 'L';  // 'L' or 'T'
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_spacing = false;
};

struct CompareSpec {
    enum class Mode { evaluators, mirrors };
    Mode mode = Mode::evaluators;
    std::string a;
    std::string b;
};

struct RunConfig {
    CavityConfig cavity{PerfectMirror{}, PerfectMirror{}, 1e-6};
    ThermalState state{0.0};
    EvaluatorId evaluator = EvaluatorId::zero_temperature;
    Tolerance tolerance{1e-8, 0.0, 20'000'000};
    std::optional<SweepSpec> sweep;
    std::optional<CompareSpec> compare;
    std::optional<double> area;
    bool json_output = false;
    bool emit_te_m0 = false;
    Constants constants;
    double real_axis_eta = 0.0;  // 0 means the 0.01*c/L default
    int jobs = 1;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" text with '#' comments and dotted section keys.
KeyValues parse_config_text(std::istream& in);

/// Apply one "key=value" override string.
void apply_override(KeyValues& kv, const std::string& setting);

/// Build and validate the run configuration; throws ConfigError.
RunConfig build_run_config(const KeyValues& kv);

/// Evaluate the configured evaluator at explicit (L, T).
PressureReport evaluate_pressure(const RunConfig& rc, double L, double T);

/// Fixed 17-significant-digit float formatting shared by all CSV output.
std::string format_g17(double v);

std::string mirror_description(const MirrorSpec& m);

}  // namespace casimir::cli
