#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "run_config.hpp"

namespace {

using namespace casimir;
using namespace casimir::cli;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Row {
    std::string sweep_var;
    double value = 0.0;
    PressureReport report;
    std::optional<double> te_m0;
    std::optional<double> force_N;
};

void emit_metadata_csv(std::ostream& os, const RunConfig& rc) {
    os << "# evaluator = " << to_string(rc.evaluator) << "\n";
    os << "# mirror1 = " << mirror_description(rc.cavity.mirror1) << "\n";
    os << "# mirror2 = " << mirror_description(rc.cavity.mirror2) << "\n";
    os << "# tolerance.rel = " << format_g17(rc.tolerance.rel) << "\n";
    os << "# tolerance.abs = " << format_g17(rc.tolerance.abs) << "\n";
    os << "# tolerance.max_evals = " << rc.tolerance.max_evals << "\n";
}

void emit_rows(std::ostream& os, const RunConfig& rc, const std::vector<Row>& rows) {
    const bool any_te = std::any_of(rows.begin(), rows.end(),
                                    [](const Row& r) { return r.te_m0.has_value(); });
    const bool any_force = std::any_of(rows.begin(), rows.end(),
                                       [](const Row& r) { return r.force_N.has_value(); });
    if (!rc.json_output) {
        emit_metadata_csv(os, rc);
        os << "sweep_var,value,pressure_Pa,error_Pa,evaluations,converged";
        if (any_te) os << ",te_m0_Pa";
        if (any_force) os << ",force_N";
        os << "\n";
        for (const Row& r : rows) {
            os << r.sweep_var << ',' << format_g17(r.value) << ','
               << format_g17(r.report.pressure) << ','
               << format_g17(r.report.result.error_estimate) << ','
               << r.report.result.evaluations << ','
               << (r.report.result.converged ? "true" : "false");
            if (any_te) os << ',' << (r.te_m0 ? format_g17(*r.te_m0) : "");
            if (any_force) os << ',' << (r.force_N ? format_g17(*r.force_N) : "");
            os << "\n";
        }
        return;
    }
    ordered_json doc;
    doc["evaluator"] = to_string(rc.evaluator);
    doc["mirror1"] = mirror_description(rc.cavity.mirror1);
    doc["mirror2"] = mirror_description(rc.cavity.mirror2);
    doc["tolerance"] = {{"rel", rc.tolerance.rel},
                        {"abs", rc.tolerance.abs},
                        {"max_evals", rc.tolerance.max_evals}};
    doc["rows"] = ordered_json::array();
    for (const Row& r : rows) {
        ordered_json jr;
        jr["sweep_var"] = r.sweep_var;
        jr["value"] = r.value;
        jr["pressure_Pa"] = r.report.pressure;
        jr["error_Pa"] = r.report.result.error_estimate;
        jr["evaluations"] = r.report.result.evaluations;
        jr["converged"] = r.report.result.converged;
        if (r.te_m0) jr["te_m0_Pa"] = *r.te_m0;
        if (r.force_N) jr["force_N"] = *r.force_N;
        if (r.report.diagnostics.propagating_Pa)
            jr["propagating_Pa"] = *r.report.diagnostics.propagating_Pa;
        if (r.report.diagnostics.evanescent_Pa)
            jr["evanescent_Pa"] = *r.report.diagnostics.evanescent_Pa;
        doc["rows"].push_back(jr);
    }
    os << doc.dump(2) << "\n";
}

Row compute_row(const RunConfig& rc, const std::string& var, double value, double L,
                double T) {
    Row row;
    row.sweep_var = var;
    row.value = value;
    row.report = evaluate_pressure(rc, L, T);
    if (rc.emit_te_m0 && T > 0.0) {
        CavityConfig cav = rc.cavity;
        cav.separation_L = L;
        row.te_m0 = te_m0_term(cav, ThermalState{T}, rc.tolerance, rc.constants);
    }
    if (rc.area) row.force_N = row.report.pressure * (*rc.area);
    return row;
}

int run_force(const RunConfig& rc, std::ostream& os) {
    std::vector<Row> rows{compute_row(rc, "L", rc.cavity.separation_L,
                                      rc.cavity.separation_L, rc.state.temperature_T)};
    emit_rows(os, rc, rows);
    return rows[0].report.result.converged ? kExitOk : kExitNumerical;
}

int run_sweep(const RunConfig& rc, std::ostream& os) {
    if (!rc.sweep) throw ConfigError("sweep subcommand needs a sweep.* section");
    const SweepSpec sw = *rc.sweep;
    std::vector<double> grid(sw.points);
    for (int i = 0; i < sw.points; ++i) {
        const double f = static_cast<double>(i) / (sw.points - 1);
        grid[i] = sw.log_spacing ? sw.from * std::pow(sw.to / sw.from, f)
                                 : sw.from + (sw.to - sw.from) * f;
    }

    std::vector<Row> rows(grid.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            const double L =
                (sw.variable == 'L') ? grid[i] : rc.cavity.separation_L;
            const double T =
                (sw.variable == 'T') ? grid[i] : rc.state.temperature_T;
            try {
                rows[i] = compute_row(rc, std::string(1, sw.variable), grid[i], L, T);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (first_error.empty()) first_error = e.what();
                failed = true;
                return;
            }
        }
    };

    const int jobs = std::max(1, std::min<int>(rc.jobs, static_cast<int>(grid.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed) throw ConfigError(first_error);

    emit_rows(os, rc, rows);
    const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) {
        return r.report.result.converged;
    });
    return all_ok ? kExitOk : kExitNumerical;
}

MirrorSpec mirror_variant_for_compare(const RunConfig& rc, const std::string& name) {
    // Reuse mirror1's parameters, swapping the model family.
    const MirrorSpec& base = rc.cavity.mirror1;
    auto params_of = [&]() -> std::pair<double, double> {
        if (const auto* b = std::get_if<BulkMirror>(&base)) {
            if (const auto* p = std::get_if<PlasmaModel>(&b->dielectric))
                return {p->omega_p, 0.0};
            if (const auto* d = std::get_if<DrudeModel>(&b->dielectric))
                return {d->omega_p, d->gamma_d};
        }
        return {0.0, 0.0};
    };
    if (name == "perfect") return PerfectMirror{};
    if (name == "vacuum") return BulkMirror{VacuumModel{}};
    if (name == "plasma") {
        const auto [wp, gd] = params_of();
        if (!(wp > 0.0))
            throw ConfigError("compare mirrors: set mirror1.omega_p for plasma");
        return BulkMirror{PlasmaModel{wp}};
    }
    if (name == "drude") {
        const auto [wp, gd] = params_of();
        if (!(wp > 0.0) || !(gd > 0.0))
            throw ConfigError(
                "compare mirrors: set mirror1.omega_p and mirror1.gamma_d for drude");
        return BulkMirror{DrudeModel{wp, gd}};
    }
    if (name == "prescribed") {
        if (const auto* p = std::get_if<PrescribedMirror>(&base)) return *p;
        throw ConfigError("compare mirrors: mirror1 must be prescribed for this");
    }
    throw ConfigError("unknown mirror model '" + name + "' in compare");
}

int run_compare(const RunConfig& rc, std::ostream& os) {
    if (!rc.compare) throw ConfigError("compare subcommand needs a compare.* section");
    const CompareSpec cs = *rc.compare;
    const double L = rc.cavity.separation_L;
    const double T = rc.state.temperature_T;

    PressureReport ra, rb;
    std::optional<double> te, poisson;
    std::string label_a = cs.a, label_b = cs.b;

    if (cs.mode == CompareSpec::Mode::evaluators) {
        RunConfig rca = rc, rcb = rc;
        rca.evaluator = rca.evaluator;  // placeholder; set below
        auto id_of = [](const std::string& s) {
            if (s == "matsubara") return EvaluatorId::matsubara;
            if (s == "exp_series") return EvaluatorId::exp_series;
            if (s == "zero_temperature") return EvaluatorId::zero_temperature;
            if (s == "real_axis") return EvaluatorId::real_axis;
            return EvaluatorId::closed_form;
        };
        rca.evaluator = id_of(cs.a);
        rcb.evaluator = id_of(cs.b);
        ra = evaluate_pressure(rca, L, T);
        rb = evaluate_pressure(rcb, L, T);
        const bool mats_exp =
            (cs.a == "matsubara" && cs.b == "exp_series") ||
            (cs.a == "exp_series" && cs.b == "matsubara");
        if (mats_exp) {
            const double pe = (cs.a == "exp_series") ? ra.pressure : rb.pressure;
            const double pm = (cs.a == "matsubara") ? ra.pressure : rb.pressure;
            poisson = pe - pm;  // poisson_residual convention: exp_series - matsubara
        }
        if (T > 0.0) te = te_m0_term(rc.cavity, ThermalState{T}, rc.tolerance, rc.constants);
    } else {
        RunConfig rca = rc, rcb = rc;
        rca.cavity.mirror1 = mirror_variant_for_compare(rc, cs.a);
        rca.cavity.mirror2 = rca.cavity.mirror1;
        rcb.cavity.mirror1 = mirror_variant_for_compare(rc, cs.b);
        rcb.cavity.mirror2 = rcb.cavity.mirror1;
        ra = evaluate_pressure(rca, L, T);
        rb = evaluate_pressure(rcb, L, T);
        if (T > 0.0)
            te = te_m0_term(rca.cavity, ThermalState{T}, rc.tolerance, rc.constants);
    }

    const double diff = ra.pressure - rb.pressure;
    const double denom = std::fmax(std::fabs(ra.pressure), std::fabs(rb.pressure));
    const double rel = (denom > 0.0) ? diff / denom : 0.0;

    if (!rc.json_output) {
        emit_metadata_csv(os, rc);
        os << "a,b,pressure_a_Pa,pressure_b_Pa,error_a_Pa,error_b_Pa,abs_diff_Pa,"
              "rel_diff";
        if (te) os << ",te_m0_Pa";
        if (poisson) os << ",poisson_residual_Pa";
        os << "\n";
        os << label_a << ',' << label_b << ',' << format_g17(ra.pressure) << ','
           << format_g17(rb.pressure) << ',' << format_g17(ra.result.error_estimate)
           << ',' << format_g17(rb.result.error_estimate) << ',' << format_g17(diff)
           << ',' << format_g17(rel);
        if (te) os << ',' << format_g17(*te);
        if (poisson) os << ',' << format_g17(*poisson);
        os << "\n";
    } else {
        ordered_json doc;
        doc["a"] = label_a;
        doc["b"] = label_b;
        doc["pressure_a_Pa"] = ra.pressure;
        doc["pressure_b_Pa"] = rb.pressure;
        doc["error_a_Pa"] = ra.result.error_estimate;
        doc["error_b_Pa"] = rb.result.error_estimate;
        doc["abs_diff_Pa"] = diff;
        doc["rel_diff"] = rel;
        if (te) doc["te_m0_Pa"] = *te;
        if (poisson) doc["poisson_residual_Pa"] = *poisson;
        os << doc.dump(2) << "\n";
    }
    return (ra.result.converged && rb.result.converged) ? kExitOk : kExitNumerical;
}

int run_ingest(const std::string& path, const std::string& register_name,
               const std::string& registry_path, bool json_output, std::ostream& os) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        return kExitUsage;
    }
    DielectricModel model;
    try {
        model = ingest_tabulated(in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto& tab = std::get<TabulatedModel>(model);
    const double w0 = tab.omega.front(), w1 = tab.omega.back();
    const double probes[3] = {w0, std::sqrt(w0 * w1), w1};

    if (!register_name.empty()) {
        nlohmann::json reg = nlohmann::json::object();
        {
            std::ifstream rin(registry_path);
            if (rin) {
                try {
                    rin >> reg;
                } catch (const std::exception&) {
                    reg = nlohmann::json::object();
                }
            }
        }
        reg[register_name] = path;
        std::ofstream rout(registry_path);
        if (!rout) {
            std::cerr << "error: cannot write registry " << registry_path << "\n";
            return kExitUsage;
        }
        rout << reg.dump(2) << "\n";
    }

    if (json_output) {
        ordered_json doc;
        doc["samples"] = tab.omega.size();
        doc["omega_min"] = w0;
        doc["omega_max"] = w1;
        doc["probes"] = ordered_json::array();
        for (double xi : probes) {
            doc["probes"].push_back(
                {{"xi", xi}, {"eps_i_xi", epsilon_imaginary(model, xi)}});
        }
        if (!register_name.empty()) doc["registered_as"] = register_name;
        os << doc.dump(2) << "\n";
    } else {
        os << "samples," << tab.omega.size() << "\n";
        os << "omega_min," << format_g17(w0) << "\n";
        os << "omega_max," << format_g17(w1) << "\n";
        for (double xi : probes)
            os << "eps_at_xi_" << format_g17(xi) << ','
               << format_g17(epsilon_imaginary(model, xi)) << "\n";
        if (!register_name.empty()) os << "registered_as," << register_name << "\n";
    }
    return kExitOk;
}

// Built-in analytic battery: the quadrature and summation engine checked
// against closed forms, plus cross-scale and linearity properties.
int run_check(std::ostream& os) {
    struct Item {
        const char* name;
        double got, want, tol;
        bool converged;
    };
    std::vector<Item> items;
    const Tolerance tol{1e-10, 0.0, 2'000'000};
    const Tolerance tol9{1e-9, 0.0, 2'000'000};

    auto r1 = quad::integrate_half_line([](double t) { return std::exp(-t); }, tol, 1.0);
    items.push_back({"half_line exp(-t)", r1.value, 1.0, 3e-10, r1.converged});
    auto r2 =
        quad::integrate_half_line([](double t) { return 1.0 / (1.0 + t * t); }, tol, 1.0);
    items.push_back({"half_line 1/(1+t^2)", r2.value, M_PI / 2.0, 3e-10, r2.converged});
    auto r3 = quad::integrate_half_line(
        [](double t) { return t * t * std::exp(-2.0 * t) / (-std::expm1(-2.0 * t)); },
        tol, 1.0);
    items.push_back(
        {"half_line bose tail", r3.value, 0.30051422578989856, 3e-10, r3.converged});
    auto c1 = quad::cosine_transform([](double t) { return std::exp(-t); }, 0.0, tol, 1.0);
    items.push_back({"cosine x=0", c1.value, 2.0, 3e-10, c1.converged});
    auto c2 = quad::cosine_transform([](double t) { return std::exp(-t); }, 1.0, tol, 1.0);
    items.push_back({"cosine Laplace x=1", c2.value, 1.0, 3e-10, c2.converged});
    auto c3 = quad::cosine_transform([](double t) { return std::exp(-t * t / 2.0); }, 2.0,
                                     tol, 1.0);
    items.push_back(
        {"cosine Gauss x=2", c3.value, 0.33923524751608825, 3e-10, c3.converged});
    auto p1 = quad::primed_sum([](std::int64_t n) { return n == 0 ? 1.0 : 0.0; }, tol);
    items.push_back({"primed delta", p1.value, 0.5, 1e-14, p1.converged});
    auto p2 = quad::primed_sum(
        [](std::int64_t n) { return std::pow(0.5, static_cast<double>(n)); }, tol);
    items.push_back({"primed geometric", p2.value, 1.5, 3e-10, p2.converged});
    auto p3 = quad::primed_sum(
        [](std::int64_t n) {
            const double x = static_cast<double>(n) + 1.0;
            return 1.0 / (x * x);
        },
        tol9);
    items.push_back(
        {"primed 1/(n+1)^2", p3.value, 1.1449340668482266, 3e-9, p3.converged});
    auto m1 = quad::radial_mode_integral([](double k) { return std::exp(-2.0 * k); }, tol,
                                         1.0);
    items.push_back(
        {"radial exp(-2k)", m1.value, 1.0 / (8.0 * M_PI), 3e-10, m1.converged});
    auto m2 = quad::radial_mode_integral(
        [](double k) { return k * std::exp(-2.0 * k) / (-std::expm1(-2.0 * k)); }, tol,
        1.0);
    items.push_back({"radial bose tail", m2.value, 1.2020569031595943 / (8.0 * M_PI),
                     3e-10, m2.converged});
    // substitution invariance: scales s and 2s agree
    auto s1 = quad::integrate_half_line([](double t) { return std::exp(-t); }, tol, 1.0);
    auto s2 = quad::integrate_half_line([](double t) { return std::exp(-t); }, tol, 2.0);
    items.push_back({"scale invariance", s1.value - s2.value, 0.0,
                     3.0 * (s1.error_estimate + s2.error_estimate) + 1e-13,
                     s1.converged && s2.converged});

    bool all_ok = true;
    for (const Item& it : items) {
        const double err = std::fabs(it.got - it.want);
        const bool pass = it.converged && err <= it.tol;
        all_ok = all_ok && pass;
        os << (pass ? "[PASS] " : "[FAIL] ") << it.name << "  value "
           << format_g17(it.got) << "  |err| " << format_g17(err) << "\n";
    }
    return all_ok ? kExitOk : kExitNumerical;
}

RunConfig load_config(const std::string& config_path,
                      const std::vector<std::string>& sets, const std::string& output,
                      int jobs_flag, double tol_flag) {
    KeyValues kv;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config " + config_path);
        kv = parse_config_text(in);
    }
    for (const std::string& s : sets) apply_override(kv, s);
    if (!output.empty()) kv["output"] = output;
    if (jobs_flag > 0) kv["jobs"] = std::to_string(jobs_flag);
    if (tol_flag > 0.0) kv["tolerance.rel"] = format_g17(tol_flag);
    return build_run_config(kv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir pressure between plane-parallel mirrors"};
    app.require_subcommand(1);

    std::string config_path, output, ingest_path, register_name;
    std::string registry_path = "materials.json";
    std::vector<std::string> sets;
    int jobs = 0;
    double tol_rel = 0.0;

    app.add_option("--config", config_path, "configuration file (key = value)");
    app.add_option("--set", sets, "override: key=value (repeatable)");
    app.add_option("--output", output, "csv or json");
    app.add_option("--jobs", jobs, "parallel sweep workers");
    app.add_option("--tolerance", tol_rel, "relative tolerance override");

    auto* force = app.add_subcommand("force", "single pressure/force evaluation");
    auto* sweep = app.add_subcommand("sweep", "sweep L or T over a grid");
    auto* compare =
        app.add_subcommand("compare", "compare two evaluators or mirror models");
    auto* ingest = app.add_subcommand("ingest", "validate tabulated optical data");
    auto* check = app.add_subcommand("check", "run the built-in analytic battery");
    ingest->add_option("path", ingest_path, "tabulated data file")->required();
    ingest->add_option("--register", register_name, "register under this name");
    ingest->add_option("--registry", registry_path, "registry file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    try {
        if (check->parsed()) return run_check(std::cout);
        if (ingest->parsed())
            return run_ingest(ingest_path, register_name, registry_path,
                              output == "json", std::cout);
        const RunConfig rc = load_config(config_path, sets, output, jobs, tol_rel);
        if (force->parsed()) return run_force(rc, std::cout);
        if (sweep->parsed()) return run_sweep(rc, std::cout);
        if (compare->parsed()) return run_compare(rc, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedModelError& e) {
        std::cerr << "unsupported model: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
