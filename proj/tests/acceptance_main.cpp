// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/pressure.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir;

namespace {

const Constants& pc = codata();
const double c = pc.c_light;
constexpr double kZeta3 = 1.2020569031595943;
constexpr double kGoldWp = 1.37e16;
constexpr double kGoldGd = 5.32e13;

int failures = 0;

struct Criterion {
    const char* name;
    bool (*run)(std::string& detail);
};

CavityConfig perfect_cavity(double L) { return {PerfectMirror{}, PerfectMirror{}, L}; }
CavityConfig bulk_cavity(const DielectricModel& m, double L) {
    return {BulkMirror{m}, BulkMirror{m}, L};
}

// --- 1. ideal Casimir limit ------------------------------------------------
bool criterion1(std::string& detail) {
    const Tolerance tol{1e-8, 0.0, 20'000'000};
    double worst = 0.0;
    for (double L : {1e-7, 1e-6, 1e-5}) {
        const auto rep = pressure_zero_temperature(perfect_cavity(L), tol);
        if (!rep.result.converged) {
            detail = "not converged";
            return false;
        }
        const double rel =
            std::fabs(rep.pressure / pressure_perfect_closed_form(L) - 1.0);
        worst = std::fmax(worst, rel);
    }
    std::ostringstream ss;
    ss << "max rel dev " << worst;
    detail = ss.str();
    return worst <= 1e-6;
}

// --- 2. Poisson duality on smooth models ------------------------------------
bool criterion2(std::string& detail) {
    const Tolerance tol{1e-7, 0.0, 200'000'000};
    double worst = 0.0;
    for (double L : {0.5e-6, 1e-6, 5e-6}) {
        const CavityConfig cavs[] = {perfect_cavity(L),
                                     bulk_cavity(PlasmaModel{kGoldWp}, L)};
        for (const auto& cav : cavs) {
            const auto pm = pressure_matsubara(cav, ThermalState{300.0}, tol);
            const auto pe = pressure_exp_series(cav, ThermalState{300.0}, tol);
            const double rel = std::fabs(pe.pressure - pm.pressure) / pm.pressure;
            worst = std::fmax(worst, rel);
        }
    }
    std::ostringstream ss;
    ss << "max |residual|/P " << worst;
    detail = ss.str();
    return worst <= 1e-6;
}

// --- 3. classical high-T limit ----------------------------------------------
bool criterion3(std::string& detail) {
    const double L = 1e-6, T = 1e4;  // omega_T L/c ~ 27
    const Tolerance tol{1e-8, 0.0, 20'000'000};
    const double classical = kZeta3 * pc.k_B * T / (4.0 * M_PI * L * L * L);
    const auto perf = pressure_matsubara(perfect_cavity(L), ThermalState{T}, tol);
    const auto drud =
        pressure_matsubara(bulk_cavity(DrudeModel{kGoldWp, kGoldGd}, L), ThermalState{T}, tol);
    const double rel_p = std::fabs(perf.pressure / classical - 1.0);
    const double rel_d = std::fabs(drud.pressure / (0.5 * classical) - 1.0);
    std::ostringstream ss;
    ss << "perfect dev " << rel_p << ", drude dev " << rel_d;
    detail = ss.str();
    return perf.result.converged && drud.result.converged && rel_p <= 1e-2 &&
           rel_d <= 1e-2;
}

// --- 4. Drude/plasma m=0 discontinuity --------------------------------------
bool criterion4(std::string& detail) {
    const double L = 5e-6, T = 300.0;
    const Tolerance tol{1e-9, 0.0, 40'000'000};
    const auto plasma = pressure_matsubara(bulk_cavity(PlasmaModel{kGoldWp}, L),
                                           ThermalState{T}, tol);
    const auto drude = pressure_matsubara(
        bulk_cavity(DrudeModel{kGoldWp, 1e-6 * kGoldWp}, L), ThermalState{T}, tol);
    const double te = te_m0_term(bulk_cavity(PlasmaModel{kGoldWp}, L), ThermalState{T},
                                 Tolerance{1e-10, 0.0, 10'000'000});
    const double dev = std::fabs(plasma.pressure - drude.pressure - te) / te;
    std::ostringstream ss;
    ss << "|dP - te_m0|/te_m0 " << dev;
    detail = ss.str();
    return plasma.result.converged && drude.result.converged && dev <= 1e-2;
}

// --- 5. vacuum-term identity -------------------------------------------------
bool criterion5(std::string& detail) {
    const double L = 1e-6, T = 300.0;
    const Tolerance tol{1e-7, 0.0, 100'000'000};
    const CavityConfig cavs[] = {
        perfect_cavity(L), bulk_cavity(PlasmaModel{kGoldWp}, L),
        bulk_cavity(DrudeModel{kGoldWp, kGoldGd}, L),
        CavityConfig{PrescribedMirror{0.5, c / L}, PrescribedMirror{0.5, c / L}, L}};
    double worst = 0.0;
    for (const auto& cav : cavs) {
        const auto p0 = pressure_zero_temperature(cav, tol);
        const auto pe = pressure_exp_series(cav, ThermalState{T}, tol);
        if (pe.breakdown.empty() || pe.breakdown.front().first != 0) {
            detail = "missing n=0 breakdown entry";
            return false;
        }
        const double n0 = pe.breakdown.front().second;
        const double budget = 3.0 * (p0.result.error_estimate + pe.result.error_estimate) +
                              1e-12 * std::fabs(p0.pressure);
        const double dev = std::fabs(n0 - p0.pressure);
        if (dev > budget) {
            std::ostringstream ss;
            ss << "dev " << dev << " > budget " << budget;
            detail = ss.str();
            return false;
        }
        worst = std::fmax(worst, dev / std::fabs(p0.pressure));
    }
    std::ostringstream ss;
    ss << "max rel dev " << worst;
    detail = ss.str();
    return true;
}

// --- 6. real-axis cross-check ------------------------------------------------
bool criterion6(std::string& detail) {
    const double L = 1e-6;
    const CavityConfig cav{PrescribedMirror{0.5, c / L}, PrescribedMirror{0.5, c / L}, L};
    const auto p0 = pressure_zero_temperature(cav, Tolerance{1e-9, 0.0, 40'000'000});
    const auto pr = pressure_real_axis_richardson(cav, ThermalState{0.0}, 0.01 * c / L,
                                                  Tolerance{1e-3, 0.0, 80'000'000});
    const double rel = std::fabs(pr.pressure - p0.pressure) / p0.pressure;
    std::ostringstream ss;
    ss << "rel dev " << rel;
    detail = ss.str();
    return rel <= 1e-3;
}

// --- 7. quadrature/series battery ---------------------------------------------
bool criterion7(std::string& detail) {
    const Tolerance tol{1e-10, 0.0, 2'000'000};
    const Tolerance tol9{1e-9, 0.0, 2'000'000};
    struct Case {
        const char* name;
        NumericResult res;
        double oracle;
        double declared;  // tolerance the case is declared at
    };
    std::vector<Case> cases;
    cases.push_back({"exp", quad::integrate_half_line([](double t) { return std::exp(-t); }, tol, 1.0), 1.0, 1e-10});
    cases.push_back({"lorentzian",
                     quad::integrate_half_line([](double t) { return 1.0 / (1.0 + t * t); }, tol, 1.0),
                     M_PI / 2.0, 1e-10});
    cases.push_back({"bose",
                     quad::integrate_half_line(
                         [](double t) { return t * t * std::exp(-2.0 * t) / (-std::expm1(-2.0 * t)); },
                         tol, 1.0),
                     0.30051422578989856, 1e-10});
    cases.push_back({"cos0", quad::cosine_transform([](double t) { return std::exp(-t); }, 0.0, tol, 1.0), 2.0, 1e-10});
    cases.push_back({"cos1", quad::cosine_transform([](double t) { return std::exp(-t); }, 1.0, tol, 1.0), 1.0, 1e-10});
    cases.push_back({"gauss2",
                     quad::cosine_transform([](double t) { return std::exp(-t * t / 2.0); }, 2.0, tol, 1.0),
                     0.33923524751608825, 1e-10});
    cases.push_back({"delta", quad::primed_sum([](std::int64_t n) { return n == 0 ? 1.0 : 0.0; }, tol), 0.5, 1e-12});
    cases.push_back({"geom",
                     quad::primed_sum([](std::int64_t n) { return std::pow(0.5, static_cast<double>(n)); }, tol),
                     1.5, 1e-10});
    cases.push_back({"basel",
                     quad::primed_sum(
                         [](std::int64_t n) {
                             const double x = static_cast<double>(n) + 1.0;
                             return 1.0 / (x * x);
                         },
                         tol9),
                     1.1449340668482266, 1e-9});
    cases.push_back({"radial_exp", quad::radial_mode_integral([](double k) { return std::exp(-2.0 * k); }, tol, 1.0),
                     1.0 / (8.0 * M_PI), 1e-10});
    cases.push_back({"radial_bose",
                     quad::radial_mode_integral(
                         [](double k) { return k * std::exp(-2.0 * k) / (-std::expm1(-2.0 * k)); }, tol, 1.0),
                     kZeta3 / (8.0 * M_PI), 1e-10});
    cases.push_back({"radial_zero", quad::radial_mode_integral([](double) { return 0.0; }, tol, 1.0), 0.0, 1e-12});

    for (const auto& cse : cases) {
        const double err = std::fabs(cse.res.value - cse.oracle);
        const double scale = std::fmax(std::fabs(cse.oracle), 1.0);
        if (!cse.res.converged) {
            detail = std::string(cse.name) + " did not converge";
            return false;
        }
        if (err > cse.declared * scale * 3.0) {
            std::ostringstream ss;
            ss << cse.name << " err " << err << " beyond 3x declared";
            detail = ss.str();
            return false;
        }
    }
    detail = "12 cases within declared tolerances, flags honest";
    return true;
}

// --- 8. property suites --------------------------------------------------------
bool criterion8(std::string& detail) {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> logk(std::log(1e2), std::log(1e8));
    std::uniform_real_distribution<double> logxi(std::log(1e10), std::log(1e17));
    std::uniform_real_distribution<double> logL(std::log(1e-8), std::log(1e-5));
    std::uniform_real_distribution<double> logw(std::log(1e13), std::log(1e17));

    const MirrorSpec mirrors[] = {MirrorSpec{PerfectMirror{}},
                                  MirrorSpec{BulkMirror{PlasmaModel{kGoldWp}}},
                                  MirrorSpec{BulkMirror{DrudeModel{kGoldWp, kGoldGd}}},
                                  MirrorSpec{PrescribedMirror{0.9, 1e15}}};

    // reflection bounds + loop bound on 10^4 samples
    for (int i = 0; i < 10'000; ++i) {
        const double k = std::exp(logk(rng));
        const double xi = std::exp(logxi(rng));
        const double L = std::exp(logL(rng));
        const auto& m1 = mirrors[i % 4];
        const auto& m2 = mirrors[(i / 4) % 4];
        const Polarization p = (i % 2) ? Polarization::TE : Polarization::TM;
        if (!std::holds_alternative<PrescribedMirror>(m1)) {
            const double r = reflection_imaginary(m1, p, k, xi);
            if (!(r <= 0.0 && r >= -1.0)) {
                detail = "reflection bound violated";
                return false;
            }
        }
        const CavityConfig cav{m1, m2, L};
        const double rho = open_loop(cav, {p, k}, xi);
        if (!(std::fabs(rho) <=
              std::exp(-2.0 * kappa_imaginary(k, xi) * L) * (1.0 + 1e-13))) {
            detail = "|rho| bound violated";
            return false;
        }
    }

    // Airy identity on 10^4 samples
    const CavityConfig rcav{PrescribedMirror{0.7, 1e15},
                            BulkMirror{DrudeModel{kGoldWp, kGoldGd}}, 1e-6};
    for (int i = 0; i < 10'000; ++i) {
        const double w = std::exp(logw(rng));
        const double k = std::exp(logk(rng));
        const TransverseMode mode{(i % 2) ? Polarization::TE : Polarization::TM, k};
        const double g = airy(rcav, mode, w);
        const auto f = closed_loop_complex(rcav, mode, {w, 0.0});
        if (std::fabs(g - (1.0 + 2.0 * f.real())) >
            1e-10 * std::fmax(1.0, std::fabs(g))) {
            detail = "Airy identity violated";
            return false;
        }
    }

    // pressure monotone decreasing in L
    const Tolerance tol{1e-7, 0.0, 20'000'000};
    double prev = std::numeric_limits<double>::infinity();
    for (double L : {0.4e-6, 0.8e-6, 1.6e-6, 3.2e-6, 6.4e-6}) {
        const auto rep = pressure_matsubara(bulk_cavity(PlasmaModel{kGoldWp}, L),
                                            ThermalState{300.0}, tol);
        if (!(rep.pressure > 0.0 && rep.pressure < prev)) {
            detail = "monotonicity in L violated";
            return false;
        }
        prev = rep.pressure;
    }

    // L*T thermal-scaling invariance for perfect mirrors
    const Tolerance stol{1e-8, 0.0, 40'000'000};
    for (const auto& [L, T] : std::vector<std::pair<double, double>>{
             {0.5e-6, 600.0}, {1e-6, 300.0}, {2e-6, 150.0}}) {
        const auto a = pressure_matsubara(perfect_cavity(L), ThermalState{T}, stol);
        const auto b =
            pressure_matsubara(perfect_cavity(2.0 * L), ThermalState{T / 2.0}, stol);
        const double ra = a.pressure / pressure_perfect_closed_form(L);
        const double rb = b.pressure / pressure_perfect_closed_form(2.0 * L);
        if (std::fabs(ra / rb - 1.0) > 1e-6) {
            detail = "L*T scaling violated";
            return false;
        }
    }

    detail = "reflection/loop/Airy on 1e4 samples; monotone L; L*T scaling";
    return true;
}

// --- 9. CLI determinism ----------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& tag, std::string* out = nullptr) {
    const std::string out_path = "acc_cli_" + tag + ".out";
    const std::string cmd = std::string(CASIMIR_CLI_PATH) + " " + args + " > " +
                            out_path + " 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    if (out) *out = slurp(out_path);
    std::remove(out_path.c_str());
    return WEXITSTATUS(raw);
}

bool criterion9(std::string& detail) {
    std::ofstream cfg("acc_sweep.cfg");
    cfg << "mirror1.type = plasma\nmirror1.omega_p = 1.37e16\n"
           "temperature_T = 300\nevaluator = matsubara\ntolerance.rel = 1e-7\n"
           "sweep.variable = L\nsweep.from = 5e-7\nsweep.to = 5e-6\n"
           "sweep.points = 4\nsweep.spacing = log\n";
    cfg.close();
    std::string a, b, d;
    const int ca = run_cli("sweep --config acc_sweep.cfg --jobs 1", "a", &a);
    const int cb = run_cli("sweep --config acc_sweep.cfg --jobs 1", "b", &b);
    const int cd = run_cli("sweep --config acc_sweep.cfg --jobs 3", "d", &d);
    std::remove("acc_sweep.cfg");
    if (ca != 0 || cb != 0 || cd != 0) {
        detail = "sweep did not exit 0";
        return false;
    }
    if (a != b || a != d) {
        detail = "output not byte-identical";
        return false;
    }

    const int e1 = run_cli(
        "force --set mirror1.type=perfect --set separation_L=1e-6 "
        "--set temperature_T=0 --set evaluator=real_axis",
        "e1");
    const int e2 = run_cli(
        "force --set mirror1.type=plasma --set mirror1.omega_p=1.37e16 "
        "--set separation_L=1e-6 --set temperature_T=0 "
        "--set evaluator=zero_temperature --set tolerance.rel=1e-12 "
        "--set tolerance.max_evals=64",
        "e2");
    const int e3 = run_cli(
        "sweep --set mirror1.type=perfect --set evaluator=closed_form "
        "--set sweep.variable=L --set sweep.from=1e-6 --set sweep.to=1e-6 "
        "--set sweep.points=2",
        "e3");
    std::ostringstream ss;
    ss << "exit codes " << e1 << "/" << e2 << "/" << e3 << " (want 1/2/1)";
    detail = ss.str();
    return e1 == 1 && e2 == 2 && e3 == 1;
}

void run(const Criterion& cr) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = cr.run(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %s (%.1fs) %s\n", ok ? "PASS" : "FAIL", cr.name, secs,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"1 ideal Casimir limit", criterion1},
        {"2 Poisson duality (perfect/plasma)", criterion2},
        {"3 classical high-T limit", criterion3},
        {"4 Drude/plasma m=0 discontinuity", criterion4},
        {"5 vacuum-term identity", criterion5},
        {"6 real-axis cross-check", criterion6},
        {"7 quadrature/series battery", criterion7},
        {"8 property suites", criterion8},
        {"9 CLI determinism and exit codes", criterion9},
    };
    for (const auto& cr : criteria) run(cr);
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
