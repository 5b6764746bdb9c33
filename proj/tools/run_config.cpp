#include "run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

std::optional<std::string> get(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
}

MirrorSpec build_mirror(const KeyValues& kv, const std::string& prefix,
                        const std::string& registry_path) {
    const auto type = get(kv, prefix + ".type");
    if (!type) throw ConfigError("missing " + prefix + ".type");

    auto need = [&](const char* field) {
        const auto v = get(kv, prefix + "." + field);
        if (!v) throw ConfigError("missing " + prefix + "." + field);
        return parse_double(prefix + "." + field, *v);
    };

    if (*type == "perfect") return PerfectMirror{};
    if (*type == "vacuum") return BulkMirror{VacuumModel{}};
    if (*type == "plasma") return BulkMirror{PlasmaModel{need("omega_p")}};
    if (*type == "drude")
        return BulkMirror{DrudeModel{need("omega_p"), need("gamma_d")}};
    if (*type == "prescribed")
        return PrescribedMirror{need("r0"), need("omega_c")};
    if (*type == "tabulated") {
        std::string path;
        if (const auto t = get(kv, prefix + ".table")) {
            path = *t;
        } else if (const auto name = get(kv, prefix + ".material")) {
            std::ifstream reg(registry_path);
            if (!reg) throw ConfigError("cannot open registry " + registry_path);
            nlohmann::json j;
            try {
                reg >> j;
            } catch (const std::exception& e) {
                throw ConfigError("bad registry " + registry_path + ": " + e.what());
            }
            if (!j.contains(*name))
                throw ConfigError("material '" + *name + "' not in registry");
            path = j[*name].get<std::string>();
        } else {
            throw ConfigError(prefix + ": tabulated mirror needs .table or .material");
        }
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open tabulated data " + path);
        try {
            return BulkMirror{ingest_tabulated(in)};
        } catch (const std::exception& e) {
            throw ConfigError("ingest of " + path + " failed: " + e.what());
        }
    }
    throw ConfigError("unknown mirror type '" + *type + "' for " + prefix);
}

const std::map<std::string, EvaluatorId> kEvaluators = {
    {"matsubara", EvaluatorId::matsubara},
    {"exp_series", EvaluatorId::exp_series},
    {"zero_temperature", EvaluatorId::zero_temperature},
    {"real_axis", EvaluatorId::real_axis},
    {"closed_form", EvaluatorId::closed_form},
};

}  // namespace

KeyValues parse_config_text(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key or value");
        kv[key] = val;
    }
    return kv;
}

void apply_override(KeyValues& kv, const std::string& setting) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got: " + setting);
    const std::string key = trim(setting.substr(0, eq));
    const std::string val = trim(setting.substr(eq + 1));
    if (key.empty() || val.empty())
        throw ConfigError("--set expects key=value, got: " + setting);
    kv[key] = val;
}

RunConfig build_run_config(const KeyValues& kv) {
    RunConfig rc;
    const std::string registry =
        get(kv, "registry").value_or("materials.json");

    try {
        rc.cavity.mirror1 = build_mirror(kv, "mirror1", registry);
        const bool has_m2 = std::any_of(kv.begin(), kv.end(), [](const auto& e) {
            return e.first.rfind("mirror2.", 0) == 0;
        });
        rc.cavity.mirror2 =
            has_m2 ? build_mirror(kv, "mirror2", registry) : rc.cavity.mirror1;

        if (const auto v = get(kv, "separation_L"))
            rc.cavity.separation_L = parse_double("separation_L", *v);
        if (const auto v = get(kv, "temperature_T"))
            rc.state.temperature_T = parse_double("temperature_T", *v);

        if (const auto v = get(kv, "evaluator")) {
            const auto it = kEvaluators.find(*v);
            if (it == kEvaluators.end())
                throw ConfigError("unknown evaluator '" + *v + "'");
            rc.evaluator = it->second;
        }

        if (const auto v = get(kv, "tolerance.rel"))
            rc.tolerance.rel = parse_double("tolerance.rel", *v);
        if (const auto v = get(kv, "tolerance.abs"))
            rc.tolerance.abs = parse_double("tolerance.abs", *v);
        if (const auto v = get(kv, "tolerance.max_evals"))
            rc.tolerance.max_evals = parse_int("tolerance.max_evals", *v);

        if (const auto v = get(kv, "area")) {
            rc.area = parse_double("area", *v);
            if (!(*rc.area > 0.0)) throw ConfigError("area must be > 0");
        }
        if (const auto v = get(kv, "output")) {
            if (*v == "json")
                rc.json_output = true;
            else if (*v == "csv")
                rc.json_output = false;
            else
                throw ConfigError("output must be csv or json");
        }
        if (const auto v = get(kv, "jobs")) {
            rc.jobs = static_cast<int>(parse_int("jobs", *v));
            if (rc.jobs < 1) throw ConfigError("jobs must be >= 1");
        }
        if (const auto v = get(kv, "real_axis.eta")) {
            rc.real_axis_eta = parse_double("real_axis.eta", *v);
            if (!(rc.real_axis_eta > 0.0))
                throw ConfigError("real_axis.eta must be > 0");
        }
        if (const auto v = get(kv, "diagnostics.te_m0"))
            rc.emit_te_m0 = parse_bool("diagnostics.te_m0", *v);

        if (const auto v = get(kv, "constants.hbar"))
            rc.constants.hbar = parse_double("constants.hbar", *v);
        if (const auto v = get(kv, "constants.c"))
            rc.constants.c_light = parse_double("constants.c", *v);
        if (const auto v = get(kv, "constants.k_B"))
            rc.constants.k_B = parse_double("constants.k_B", *v);

        if (get(kv, "sweep.variable") || get(kv, "sweep.from") || get(kv, "sweep.to") ||
            get(kv, "sweep.points")) {
            SweepSpec sw;
            const auto var = get(kv, "sweep.variable");
            if (!var || (*var != "L" && *var != "T"))
                throw ConfigError("sweep.variable must be L or T");
            sw.variable = (*var)[0];
            const auto f = get(kv, "sweep.from"), t = get(kv, "sweep.to"),
                       p = get(kv, "sweep.points");
            if (!f || !t || !p)
                throw ConfigError("sweep needs sweep.from, sweep.to, sweep.points");
            sw.from = parse_double("sweep.from", *f);
            sw.to = parse_double("sweep.to", *t);
            sw.points = static_cast<int>(parse_int("sweep.points", *p));
            if (const auto s = get(kv, "sweep.spacing")) {
                if (*s == "log")
                    sw.log_spacing = true;
                else if (*s == "linear")
                    sw.log_spacing = false;
                else
                    throw ConfigError("sweep.spacing must be linear or log");
            }
            if (!(sw.from > 0.0) || !(sw.to > sw.from))
                throw ConfigError("sweep range must be positive (0 < from < to)");
            if (sw.points < 2) throw ConfigError("sweep.points must be >= 2");
            rc.sweep = sw;
        }

        if (const auto mode = get(kv, "compare.mode")) {
            CompareSpec cs;
            if (*mode == "evaluators")
                cs.mode = CompareSpec::Mode::evaluators;
            else if (*mode == "mirrors")
                cs.mode = CompareSpec::Mode::mirrors;
            else
                throw ConfigError("compare.mode must be evaluators or mirrors");
            const auto a = get(kv, "compare.a"), b = get(kv, "compare.b");
            if (!a || !b) throw ConfigError("compare needs compare.a and compare.b");
            cs.a = *a;
            cs.b = *b;
            if (cs.mode == CompareSpec::Mode::evaluators) {
                if (!kEvaluators.count(cs.a) || !kEvaluators.count(cs.b))
                    throw ConfigError("compare.a/b must name evaluators");
            }
            rc.compare = cs;
        }

        validate(rc.constants);
        validate(rc.cavity);
        validate(rc.state);
        validate(rc.tolerance);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

PressureReport evaluate_pressure(const RunConfig& rc, double L, double T) {
    CavityConfig cav = rc.cavity;
    cav.separation_L = L;
    const ThermalState st{T};
    const Constants& pc = rc.constants;

    switch (rc.evaluator) {
        case EvaluatorId::closed_form: {
            if (!std::holds_alternative<PerfectMirror>(cav.mirror1) ||
                !std::holds_alternative<PerfectMirror>(cav.mirror2))
                throw ConfigError("closed_form evaluator requires perfect mirrors");
            PressureReport rep;
            rep.evaluator = EvaluatorId::closed_form;
            rep.pressure = pressure_perfect_closed_form(L, pc);
            rep.result = NumericResult{rep.pressure, 0.0, 0, true};
            return rep;
        }
        case EvaluatorId::zero_temperature:
            return pressure_zero_temperature(cav, rc.tolerance, pc);
        case EvaluatorId::matsubara:
            return pressure_matsubara(cav, st, rc.tolerance, pc);
        case EvaluatorId::exp_series:
            return pressure_exp_series(cav, st, rc.tolerance, pc);
        case EvaluatorId::real_axis: {
            const double eta =
                (rc.real_axis_eta > 0.0) ? rc.real_axis_eta : 0.01 * pc.c_light / L;
            return pressure_real_axis_richardson(cav, st, eta, rc.tolerance, pc);
        }
    }
    throw ConfigError("unhandled evaluator");
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string mirror_description(const MirrorSpec& m) {
    return std::visit(
        [](const auto& x) -> std::string {
            using M = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<M, PerfectMirror>) {
                return "perfect";
            } else if constexpr (std::is_same_v<M, PrescribedMirror>) {
                return "prescribed(r0=" + format_g17(x.r0) +
                       ",omega_c=" + format_g17(x.omega_c) + ")";
            } else {
                return std::visit(
                    [](const auto& d) -> std::string {
                        using D = std::decay_t<decltype(d)>;
                        if constexpr (std::is_same_v<D, VacuumModel>)
                            return "vacuum";
                        else if constexpr (std::is_same_v<D, PlasmaModel>)
                            return "plasma(omega_p=" + format_g17(d.omega_p) + ")";
                        else if constexpr (std::is_same_v<D, DrudeModel>)
                            return "drude(omega_p=" + format_g17(d.omega_p) +
                                   ",gamma_d=" + format_g17(d.gamma_d) + ")";
                        else
                            return "tabulated(" + std::to_string(d.omega.size()) +
                                   " samples)";
                    },
                    x.dielectric);
            }
        },
        m);
}

}  // namespace casimir::cli
