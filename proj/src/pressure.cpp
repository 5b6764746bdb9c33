#include "casimir/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

void validate(const ThermalState& state) {
    if (!(state.temperature_T >= 0.0))
        throw std::invalid_argument("temperature must be >= 0");
}

double thermal_frequency(const ThermalState& state, const Constants& pc) {
    return 2.0 * M_PI * pc.k_B * state.temperature_T / pc.hbar;
}

double thermal_weight(double omega, const ThermalState& state, const Constants& pc) {
    validate(state);
    if (state.temperature_T == 0.0) return 1.0;
    if (!(omega > 0.0))
        throw std::domain_error("thermal_weight: omega must be > 0 at T > 0");
    const double x = M_PI * omega / thermal_frequency(state, pc);
    if (x > 360.0) return 1.0;  // coth indistinguishable from 1
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

const char* to_string(EvaluatorId id) {
    switch (id) {
        case EvaluatorId::matsubara: return "matsubara";
        case EvaluatorId::exp_series: return "exp_series";
        case EvaluatorId::zero_temperature: return "zero_temperature";
        case EvaluatorId::real_axis: return "real_axis";
        case EvaluatorId::closed_form: return "closed_form";
    }
    return "unknown";
}

double pressure_perfect_closed_form(double L, const Constants& pc) {
    if (!(L > 0.0)) throw std::domain_error("separation must be > 0");
    return pc.hbar * pc.c_light * M_PI * M_PI / (240.0 * L * L * L * L);
}

namespace {

struct RadialTally {
    std::int64_t evals = 0;
    double claimed_err = 0.0;  // same units as the radial value
    bool ok = true;
};

// (1/2pi) int_0^inf k phi(p, k, xi) dk at fixed xi. The k-scale blends the
// e^{-2kL} envelope with the sqrt(xi/(c L)) width that takes over at large xi.
double radial_phi(const CavityConfig& cavity, Polarization p, double xi,
                  const Tolerance& tol, const Constants& pc, RadialTally& tally) {
    const double L = cavity.separation_L;
    const double y = xi / pc.c_light;
    const double scale = std::fmax(0.5 / L, std::sqrt(y / L));
    auto f = [&](double k) { return phi(cavity, TransverseMode{p, k}, xi, pc); };
    const auto r = quad::radial_mode_integral(f, tol, scale);
    tally.evals += r.evaluations;
    tally.claimed_err += r.error_estimate;
    tally.ok = tally.ok && r.converged;
    return r.value;
}

// Closed-form bound on the per-polarization radial integral with
// |phi| <= kappa e^{-2 kappa L}/(1 - e^{-2 kappa L}), kappa >= y:
//   (1/2pi) sum_j int_y^inf kappa^2 e^{-2 j kappa L} dkappa.
double radial_envelope_bound(double y, double L) {
    double sum = 0.0;
    for (int j = 1; j < 512; ++j) {
        const double a = 2.0 * j * L;
        const double t = std::exp(-a * y) * (y * y / a + 2.0 * y / (a * a) + 2.0 / (a * a * a));
        sum += t;
        if (t < 1e-17 * sum) break;
    }
    return sum / (2.0 * M_PI);
}

// Rigorous bound on sum_{m > M} of the envelope at y_m = m wT/c, using
// B(y + d) <= B(y) e^{-2Ld} ((y+d)/y)^2 to close the sum geometrically.
double matsubara_tail_envelope(std::int64_t M, double wT, double L, double c) {
    const double d = wT / c;
    double sum = 0.0;
    for (std::int64_t m = M + 1; m <= M + 512; ++m) {
        const double b = radial_envelope_bound(m * d, L);
        const double q = std::exp(-2.0 * L * d) *
                         std::pow(static_cast<double>(m + 1) / m, 2.0);
        if (q < 0.9) return sum + b / (1.0 - q);
        sum += b;
    }
    return sum * 2.0;  // never reached for physical parameters
}

}  // namespace

PressureReport pressure_matsubara(const CavityConfig& cavity, const ThermalState& state,
                                  const Tolerance& tol, const Constants& pc) {
    validate(cavity);
    validate(state);
    validate(tol);
    if (!(state.temperature_T > 0.0))
        throw std::domain_error(
            "pressure_matsubara requires T > 0; use pressure_zero_temperature");

    const double wT = thermal_frequency(state, pc);
    const double L = cavity.separation_L;
    const double pref = pc.hbar * wT / M_PI;

    // Expected index range from the e^{-2 m wT L/c} envelope, used only to
    // share the absolute error budget across terms.
    const double mscale = 15.0 * pc.c_light / (wT * L);
    const std::int64_t m_est = static_cast<std::int64_t>(std::fmin(2e6, std::fmax(4.0, mscale)));

    RadialTally tally;
    Tolerance inner;
    inner.rel = std::fmax(0.2 * tol.rel, 1e-13);
    inner.abs = 0.0;
    inner.max_evals = std::clamp<std::int64_t>(tol.max_evals, 64, 1'500'000);

    PressureReport rep;
    rep.evaluator = EvaluatorId::matsubara;

    auto term = [&](std::int64_t m) {
        double t = 0.0;
        t += radial_phi(cavity, Polarization::TE, m * wT, inner, pc, tally);
        t += radial_phi(cavity, Polarization::TM, m * wT, inner, pc, tally);
        return pref * t;
    };

    const double t0 = term(0);
    double sum = 0.5 * t0;
    rep.breakdown.emplace_back(0, 0.5 * t0);
    inner.abs = 0.3 * target_of(tol, std::fmax(std::fabs(sum), std::fabs(t0))) /
                (pref * static_cast<double>(m_est));

    double tail = std::numeric_limits<double>::infinity();
    bool budget_ok = true;
    for (std::int64_t m = 1; m <= 4'000'000; ++m) {
        if (tally.evals > tol.max_evals) {
            budget_ok = false;
            break;
        }
        const double t = term(m);
        sum += t;
        rep.breakdown.emplace_back(m, t);
        tail = 2.0 * pref * matsubara_tail_envelope(m, wT, L, pc.c_light);
        if (m >= 2 && tail <= 0.25 * target_of(tol, sum)) break;
    }

    rep.pressure = sum;
    rep.result.value = sum;
    rep.result.error_estimate =
        pref * tally.claimed_err + (std::isfinite(tail) ? tail : 0.0);
    rep.result.evaluations = tally.evals;
    rep.result.converged = budget_ok && tally.ok && std::isfinite(tail) &&
                           rep.result.error_estimate <= target_of(tol, sum);
    return rep;
}

PressureReport pressure_zero_temperature(const CavityConfig& cavity, const Tolerance& tol,
                                         const Constants& pc) {
    validate(cavity);
    validate(tol);
    const double L = cavity.separation_L;
    const double pref = pc.hbar / M_PI;

    RadialTally tally;
    Tolerance inner;
    inner.rel = std::fmax(0.05 * tol.rel, 5e-14);
    inner.abs = 0.0;
    inner.max_evals = std::clamp<std::int64_t>(tol.max_evals, 64, 1'000'000);

    Tolerance outer;
    outer.rel = std::fmax(0.4 * tol.rel, 1e-13);
    outer.abs = 0.5 * tol.abs / pref;
    outer.max_evals = std::clamp<std::int64_t>(tol.max_evals / 32, 64, 200'000);

    PressureReport rep;
    rep.evaluator = EvaluatorId::zero_temperature;

    double pressure = 0.0;
    double err = 0.0;
    bool ok = true;
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
        auto outer_f = [&](double xi) {
            return radial_phi(cavity, p, xi, inner, pc, tally);
        };
        const double xi_scale = pc.c_light / (2.0 * L);
        const auto r = quad::integrate_half_line(outer_f, outer, xi_scale);
        pressure += pref * r.value;
        err += pref * (r.error_estimate + inner.rel * std::fabs(r.value));
        ok = ok && r.converged;
    }

    rep.pressure = pressure;
    rep.result.value = pressure;
    rep.result.error_estimate = err;
    rep.result.evaluations = tally.evals;
    rep.result.converged =
        ok && tally.ok && rep.result.error_estimate <= target_of(tol, pressure);
    return rep;
}

namespace {

// One exponential-series term (unweighted): (hbar/pi) sum_p (1/2pi)
// int k phitilde(p, k, x) dk, with the cosine transform done per k node.
struct ExpSeriesTerm {
    double value = 0.0;
    double claimed_err = 0.0;
    bool ok = true;
};

ExpSeriesTerm exp_series_term(const CavityConfig& cavity, double x,
                              const Tolerance& k_tol, const Tolerance& xi_tol,
                              const Constants& pc, std::int64_t& evals) {
    const double L = cavity.separation_L;
    const double pref = pc.hbar / M_PI;
    const double xi_scale = pc.c_light / (2.0 * L);
    const double k_scale = 1.0 / (2.0 * L + pc.c_light * x);

    ExpSeriesTerm out;
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
        bool inner_ok = true;
        double inner_err_max = 0.0;
        auto phitilde = [&](double k) {
            auto f = [&](double xi) { return phi(cavity, TransverseMode{p, k}, xi, pc); };
            const auto r = quad::cosine_transform(f, x, xi_tol, xi_scale);
            evals += r.evaluations;
            inner_ok = inner_ok && r.converged;
            inner_err_max = std::fmax(inner_err_max, r.error_estimate);
            return r.value;
        };
        const auto r = quad::radial_mode_integral(phitilde, k_tol, k_scale);
        evals += r.evaluations;
        out.value += pref * r.value;
        // inner noise integrates against the k measure around k_scale
        const double k_measure = 8.0 * k_scale * k_scale / (2.0 * M_PI);
        out.claimed_err += pref * (r.error_estimate + inner_err_max * k_measure);
        out.ok = out.ok && r.converged && inner_ok;
    }
    return out;
}

}  // namespace

PressureReport pressure_exp_series(const CavityConfig& cavity, const ThermalState& state,
                                   const Tolerance& tol, const Constants& pc) {
    validate(cavity);
    validate(state);
    validate(tol);
    if (!(state.temperature_T > 0.0))
        throw std::domain_error("pressure_exp_series requires T > 0");

    const double wT = thermal_frequency(state, pc);
    PressureReport rep;
    rep.evaluator = EvaluatorId::exp_series;

    std::int64_t evals = 0;
    double term_err_sum = 0.0;
    bool all_ok = true;
    constexpr std::int64_t n_budget = 48;

    Tolerance k_tol;
    k_tol.rel = std::fmax(0.1 * tol.rel, 1e-13);
    k_tol.abs = 0.0;
    k_tol.max_evals = std::clamp<std::int64_t>(tol.max_evals / 16, 64, 300'000);
    Tolerance xi_tol;
    xi_tol.rel = std::fmax(0.03 * tol.rel, 1e-13);
    xi_tol.abs = 0.0;
    xi_tol.max_evals = std::clamp<std::int64_t>(tol.max_evals / 64, 64, 120'000);

    auto term = [&](std::int64_t n) {
        const double x = 2.0 * M_PI * static_cast<double>(n) / wT;
        const auto t = exp_series_term(cavity, x, k_tol, xi_tol, pc, evals);
        term_err_sum += t.claimed_err;
        all_ok = all_ok && t.ok;
        return t.value;
    };

    const double t0 = term(0);
    double sum = 0.5 * t0;
    rep.breakdown.emplace_back(0, 0.5 * t0);

    // Anchor per-term absolute noise to the requested total accuracy.
    const double anchor = target_of(tol, std::fmax(std::fabs(sum), 1e-300));
    const double per_term_abs = anchor / (3.0 * static_cast<double>(n_budget));
    const double L = cavity.separation_L;
    const double k_sc = 0.5 / L;
    k_tol.abs = per_term_abs * (2.0 * M_PI) / (pc.hbar / M_PI) / 2.0;
    xi_tol.abs = k_tol.abs / (8.0 * k_sc * k_sc / (2.0 * M_PI));

    double truncation = std::numeric_limits<double>::infinity();
    double tail_added = 0.0;
    std::vector<double> terms;
    double fit_prev = std::numeric_limits<double>::quiet_NaN();
    bool budget_ok = true;
    std::int64_t last_n = 0;

    for (std::int64_t n = 1; n <= n_budget; ++n) {
        if (evals > tol.max_evals) {
            budget_ok = false;
            break;
        }
        const double t = term(n);
        sum += t;
        terms.push_back(t);
        rep.breakdown.emplace_back(n, t);
        last_n = n;

        const double tgt = target_of(tol, sum);

        // Vanishing tail.
        if (n >= 3 && std::fabs(t) <= 0.02 * tgt &&
            std::fabs(terms[n - 2]) <= 0.02 * tgt) {
            truncation = std::fabs(t) + std::fabs(terms[n - 2]);
            break;
        }

        if (n >= 6) {
            const double tn = std::fabs(t);
            const double tm = std::fabs(terms[n - 5]);
            if (tn > 0.0 && tm > tn) {
                const double p = std::log(tm / tn) /
                                 std::log(static_cast<double>(n) / (n - 4.0));
                if (p > 1.05 && p < 40.0) {
                    double tail = 0.0;
                    for (std::int64_t j = n + 1; j <= n + 4096; ++j)
                        tail += std::pow(static_cast<double>(n) / j, p);
                    tail += std::pow(static_cast<double>(n) / (n + 4096.5), p) *
                            (n + 4096.5) / (p - 1.0);
                    tail *= tn;
                    const double sgn = (t >= 0.0) ? 1.0 : -1.0;
                    const double fitted = sum + sgn * tail;
                    const double fit_err =
                        4.0 * tail / static_cast<double>(n) +
                        (std::isfinite(fit_prev) ? std::fabs(fitted - fit_prev) : tail);
                    fit_prev = fitted;
                    if (fit_err <= 0.5 * tgt || n == n_budget) {
                        tail_added = sgn * tail;
                        truncation = fit_err;
                        if (fit_err <= 0.5 * tgt) break;
                    }
                }
            }
        }
    }

    if (tail_added != 0.0) {
        sum += tail_added;
        rep.breakdown.emplace_back(last_n + 1, tail_added);
    }
    if (!std::isfinite(truncation))
        truncation = terms.empty() ? 0.0 : 2.0 * std::fabs(terms.back());

    rep.pressure = sum;
    rep.result.value = sum;
    rep.result.error_estimate = term_err_sum + truncation;
    rep.result.evaluations = evals;
    rep.result.converged = budget_ok && all_ok &&
                           rep.result.error_estimate <= target_of(tol, sum);
    return rep;
}

namespace {

std::complex<double> thermal_weight_complex(std::complex<double> omega, double wT) {
    if (wT == 0.0) return {1.0, 0.0};
    const std::complex<double> z = M_PI * omega / wT;
    if (z.real() > 360.0) return {1.0, 0.0};
    // coth z = 1 + 2/(e^{2z} - 1)
    const std::complex<double> e = std::exp(2.0 * z);
    return 1.0 + 2.0 / (e - 1.0);
}

struct SectorResult {
    double value = 0.0;
    double err = 0.0;
    bool ok = true;
};

}  // namespace

PressureReport pressure_real_axis(const CavityConfig& cavity, const ThermalState& state,
                                  double eta, const Tolerance& tol, const Constants& pc) {
    validate(cavity);
    validate(state);
    validate(tol);
    if (!supports_real_axis(cavity.mirror1) || !supports_real_axis(cavity.mirror2))
        throw UnsupportedModelError(
            "pressure_real_axis: mirror lacks real-axis evaluation");
    if (!(eta > 0.0)) throw std::domain_error("pressure_real_axis: eta must be > 0");

    const double L = cavity.separation_L;
    const double c = pc.c_light;
    const double wT = (state.temperature_T > 0.0) ? thermal_frequency(state, pc) : 0.0;
    const double pref = pc.hbar / (M_PI * 2.0 * M_PI);

    std::int64_t evals = 0;

    auto im_part = [&](Polarization p, double k, double omega) {
        ++evals;
        const std::complex<double> Om{omega, eta};
        const std::complex<double> v =
            phi_complex(cavity, TransverseMode{p, k}, Om, pc) *
            thermal_weight_complex(Om, wT);
        return v.imag();
    };

    Tolerance wtol;
    wtol.rel = std::fmax(0.05 * tol.rel, 1e-12);
    wtol.abs = 0.0;
    wtol.max_evals = std::clamp<std::int64_t>(tol.max_evals / 64, 64, 60'000);

    Tolerance ktol;
    ktol.rel = std::fmax(0.3 * tol.rel, 1e-12);
    ktol.abs = 0.0;
    ktol.max_evals = std::clamp<std::int64_t>(tol.max_evals / 8, 64, 400'000);

    auto evanescent_inner = [&](Polarization p, double k) {
        if (!(k > 0.0)) return 0.0;
        auto f = [&](double w) { return im_part(p, k, w); };
        const double ck = c * k;
        std::array<double, 3> br{std::fmin(eta, 0.5 * ck), std::fmin(8.0 * eta, 0.8 * ck),
                                 0.5 * ck};
        const auto r = quad::integrate_interval(f, 0.0, ck, wtol, br);
        return r.value;
    };

    auto propagating_inner = [&](Polarization p, double k) {
        // omega = c sqrt(k^2 + q^2); cells of the e^{2iqL} oscillation in q.
        auto g = [&](double q) {
            const double w = c * std::hypot(k, q);
            return im_part(p, k, w) * c * q / std::hypot(k, q);
        };
        const double cell = M_PI / (2.0 * L);
        Tolerance cell_tol = wtol;
        cell_tol.max_evals = 4'000;
        std::vector<double> sums;
        double running = 0.0, qerr = 0.0;
        double best = 0.0, best_err = std::numeric_limits<double>::infinity();
        double prev = 0.0;
        int tiny = 0;
        for (int j = 0; j < 96; ++j) {
            const auto r = quad::integrate_interval(g, j * cell, (j + 1) * cell, cell_tol);
            running += r.value;
            qerr += r.error_estimate;
            sums.push_back(running);
            if (j >= 3 && std::fabs(r.value) < 1e-14 * std::fabs(running) &&
                std::fabs(r.value) <= std::fabs(prev)) {
                if (++tiny >= 2) {
                    best = running;
                    best_err = qerr;
                    break;
                }
            } else {
                tiny = 0;
            }
            prev = r.value;
            if (j >= 6) {
                const auto est = quad::detail::wynn_epsilon(sums);
                if (est.usable) {
                    const double e = 3.0 * est.stability + qerr;
                    if (e < best_err) {
                        best = est.value;
                        best_err = e;
                    }
                    if (best_err <= 1e-12 * std::fabs(best) + 1e-320) break;
                }
            }
        }
        if (!std::isfinite(best_err)) best = running;
        return best;
    };

    SectorResult ev, pr;
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
        auto fev = [&](double k) { return k * evanescent_inner(p, k); };
        auto fpr = [&](double k) { return k * propagating_inner(p, k); };
        const auto rev = quad::integrate_half_line(fev, ktol, 0.5 / L);
        const auto rpr = quad::integrate_half_line(fpr, ktol, 0.5 / L);
        ev.value += pref * rev.value;
        ev.err += pref * (rev.error_estimate + wtol.rel * std::fabs(rev.value));
        ev.ok = ev.ok && rev.converged;
        pr.value += pref * rpr.value;
        pr.err += pref * (rpr.error_estimate + wtol.rel * std::fabs(rpr.value));
        pr.ok = pr.ok && rpr.converged;
    }

    PressureReport rep;
    rep.evaluator = EvaluatorId::real_axis;
    rep.pressure = ev.value + pr.value;
    rep.result.value = rep.pressure;
    rep.result.error_estimate = ev.err + pr.err;
    rep.result.evaluations = evals;
    rep.result.converged = ev.ok && pr.ok &&
                           rep.result.error_estimate <= target_of(tol, rep.pressure);
    rep.diagnostics.evanescent_Pa = ev.value;
    rep.diagnostics.propagating_Pa = pr.value;
    return rep;
}

PressureReport pressure_real_axis_richardson(const CavityConfig& cavity,
                                             const ThermalState& state, double eta,
                                             const Tolerance& tol, const Constants& pc) {
    const PressureReport full = pressure_real_axis(cavity, state, eta, tol, pc);
    const PressureReport half = pressure_real_axis(cavity, state, 0.5 * eta, tol, pc);

    PressureReport rep;
    rep.evaluator = EvaluatorId::real_axis;
    rep.pressure = 2.0 * half.pressure - full.pressure;
    rep.result.value = rep.pressure;
    rep.result.evaluations = full.result.evaluations + half.result.evaluations;
    // Residual after removing the linear eta term is O(eta^2); estimate it
    // from the removed linear part.
    const double eta_resid = 0.05 * std::fabs(half.pressure - full.pressure);
    rep.result.error_estimate =
        2.0 * half.result.error_estimate + full.result.error_estimate + eta_resid;
    rep.result.converged = full.result.converged && half.result.converged &&
                           rep.result.error_estimate <= target_of(tol, rep.pressure);
    if (half.diagnostics.evanescent_Pa && full.diagnostics.evanescent_Pa) {
        rep.diagnostics.evanescent_Pa =
            2.0 * *half.diagnostics.evanescent_Pa - *full.diagnostics.evanescent_Pa;
        rep.diagnostics.propagating_Pa =
            2.0 * *half.diagnostics.propagating_Pa - *full.diagnostics.propagating_Pa;
    }
    return rep;
}

double te_m0_term(const CavityConfig& cavity, const ThermalState& state,
                  const Tolerance& tol, const Constants& pc) {
    validate(cavity);
    validate(state);
    validate(tol);
    if (!(state.temperature_T > 0.0))
        throw std::domain_error("te_m0_term requires T > 0");
    const double wT = thermal_frequency(state, pc);
    RadialTally tally;
    Tolerance inner;
    inner.rel = std::fmax(0.1 * tol.rel, 1e-13);
    inner.abs = 0.0;
    inner.max_evals = std::clamp<std::int64_t>(tol.max_evals, 64, 1'000'000);
    const double v = radial_phi(cavity, Polarization::TE, 0.0, inner, pc, tally);
    return pc.hbar * wT / (2.0 * M_PI) * v;
}

NumericResult poisson_residual(const CavityConfig& cavity, const ThermalState& state,
                               const Tolerance& tol, const Constants& pc) {
    const PressureReport pm = pressure_matsubara(cavity, state, tol, pc);
    const PressureReport pe = pressure_exp_series(cavity, state, tol, pc);
    NumericResult r;
    r.value = pe.pressure - pm.pressure;
    r.error_estimate = pe.result.error_estimate + pm.result.error_estimate;
    r.evaluations = pe.result.evaluations + pm.result.evaluations;
    r.converged = pe.result.converged && pm.result.converged;
    return r;
}

}  // namespace casimir
