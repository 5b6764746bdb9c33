#pragma once

// Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals,
// oscillatory cosine transforms via between-zeros partitioning, and primed
// series summation with tail control. Everything here is re-entrant and
// stateless between calls; results are deterministic for a given input
// because subinterval contributions are reduced in a fixed order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "casimir/numeric.hpp"

namespace casimir::quad {

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 tables).
// Even indices of kXgk are the embedded Gauss abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

template <class F>
Segment gk15(F&& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    const double fc = f(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        const double fsum = f(centr - absc) + f(centr + absc);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = resk * hlgth;
    s.error = std::fabs((resk - resg) * hlgth);
    return s;
}

// Adaptive refinement over an initial segment list. Splits the segment with
// the largest error until the summed error meets the tolerance or the
// evaluation budget runs out. The final reduction runs left-to-right.
template <class F>
NumericResult refine(F&& f, std::vector<Segment> segs, const Tolerance& tol,
                     std::int64_t eval_budget) {
    NumericResult res;
    std::int64_t evals = 15 * static_cast<std::int64_t>(segs.size());

    auto total = [&segs]() {
        std::sort(segs.begin(), segs.end(),
                  [](const Segment& x, const Segment& y) { return x.a < y.a; });
        double v = 0.0, e = 0.0;
        for (const Segment& s : segs) {
            v += s.value;
            e += s.error;
        }
        return std::pair<double, double>{v, e};
    };

    double value = 0.0, error = 0.0;
    for (const Segment& s : segs) {
        value += s.value;
        error += s.error;
    }

    while (error > target_of(tol, value) && evals + 30 <= eval_budget) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i) {
            if (segs[i].error > segs[worst].error ||
                (segs[i].error == segs[worst].error && segs[i].a < segs[worst].a))
                worst = i;
        }
        const Segment w = segs[worst];
        const double mid = 0.5 * (w.a + w.b);
        // Width at machine resolution: the segment cannot be refined further.
        if (!(mid > w.a && mid < w.b)) break;

        Segment left = gk15(f, w.a, mid);
        Segment right = gk15(f, mid, w.b);
        evals += 30;
        segs[worst] = left;
        segs.push_back(right);
        value += left.value + right.value - w.value;
        error += left.error + right.error - w.error;
    }

    auto [v, e] = total();
    res.value = v;
    res.error_estimate = e;
    res.evaluations = evals;
    res.converged = std::isfinite(v) && e <= target_of(tol, v);
    return res;
}

// Wynn's epsilon algorithm over a sequence of partial sums. Returns the most
// advanced even-column entry plus a stability estimate (difference of the two
// deepest entries). Stops descending when a difference underflows.
struct EpsilonEstimate {
    double value = 0.0;
    double stability = std::numeric_limits<double>::infinity();
    bool usable = false;
};

inline EpsilonEstimate wynn_epsilon(std::span<const double> sums) {
    EpsilonEstimate out;
    const std::size_t n = sums.size();
    if (n == 0) return out;
    out.value = sums[n - 1];
    if (n < 3) return out;

    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(sums.begin(), sums.end());
    std::vector<double> history{sums[n - 1]};

    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool ok = true;
        for (std::size_t j = 0; j + k < n; ++j) {
            const double d = cur[j + 1] - cur[j];
            if (d == 0.0 || !std::isfinite(d)) {
                ok = false;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / d;
        }
        if (!ok) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) history.push_back(cur.back());
    }
    if (history.size() >= 2) {
        out.value = history.back();
        out.stability = std::fabs(history.back() - history[history.size() - 2]);
        out.usable = true;
    }
    return out;
}

// Levin u-transform (remainder estimate omega_m = (beta+m) a_m); suited to
// monotone series with algebraic tails where the epsilon algorithm stalls.
class LevinU {
public:
    void push(double partial_sum, double term) {
        constexpr double beta = 1.0;
        const std::size_t m = count_;
        const double omega = (beta + static_cast<double>(m)) * term;
        if (omega == 0.0 || !std::isfinite(omega)) {
            degenerate_ = true;
            return;
        }
        double t = 1.0 / (beta + static_cast<double>(m));
        num_.push_back(partial_sum * t / omega);
        den_.push_back(t / omega);
        if (m > 0) {
            const double ratio = (beta + static_cast<double>(m) - 1.0) * t;
            for (std::size_t j = 1; j <= m; ++j) {
                const double fact = (static_cast<double>(m - j) + beta) * t;
                num_[m - j] = num_[m - j + 1] - fact * num_[m - j];
                den_[m - j] = den_[m - j + 1] - fact * den_[m - j];
                t *= ratio;
            }
        }
        ++count_;
        prev_ = last_;
        last_ = (den_[0] != 0.0) ? num_[0] / den_[0]
                                 : std::numeric_limits<double>::quiet_NaN();
    }

    bool usable() const {
        return !degenerate_ && count_ >= 4 && std::isfinite(last_) &&
               std::isfinite(prev_);
    }
    double value() const { return last_; }
    double stability() const { return std::fabs(last_ - prev_); }

private:
    std::vector<double> num_, den_;
    std::size_t count_ = 0;
    double last_ = std::numeric_limits<double>::quiet_NaN();
    double prev_ = std::numeric_limits<double>::quiet_NaN();
    bool degenerate_ = false;
};

}  // namespace detail

/// Adaptive integration of f over the finite interval [a, b]. `breaks` lists
/// interior points where the integrand has known kinks; the initial
/// subdivision is aligned with them.
template <class F>
NumericResult integrate_interval(F&& f, double a, double b, const Tolerance& tol,
                                 std::span<const double> breaks = {}) {
    validate(tol);
    if (!(b > a)) return {0.0, 0.0, 0, true};

    std::vector<double> pts{a};
    for (double t : breaks)
        if (t > a && t < b) pts.push_back(t);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<detail::Segment> segs;
    segs.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        segs.push_back(detail::gk15(f, pts[i], pts[i + 1]));
    return detail::refine(f, std::move(segs), tol, tol.max_evals);
}

/// Adaptive integration of f over (0, inf) after the substitution
/// t = scale*u/(1-u). `scale` should sit near the decay scale of f; `breaks`
/// lists known kinks of f in t-space.
template <class F>
NumericResult integrate_half_line(F&& f, const Tolerance& tol, double scale = 1.0,
                                  std::span<const double> breaks = {}) {
    validate(tol);
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("integrate_half_line: scale must be positive");

    const double s = scale;
    auto g = [&f, s](double u) {
        const double om = 1.0 - u;
        const double t = s * u / om;
        return f(t) * s / (om * om);
    };

    std::vector<double> upts;
    for (double t : breaks)
        if (t > 0.0 && std::isfinite(t)) upts.push_back(t / (t + s));

    return integrate_interval(g, 0.0, 1.0, tol, upts);
}

/// Cosine transform 2*int_0^inf cos(x t) f(t) dt for decaying f.
/// At x = 0 this reduces to twice the half-line integral. For oscillatory x
/// the integral is split at the zeros of cos(x t) and the alternating cell
/// sums are accelerated with the epsilon algorithm.
template <class F>
NumericResult cosine_transform(F&& f, double x, const Tolerance& tol,
                               double scale = 1.0) {
    validate(tol);
    if (x < 0.0) throw std::invalid_argument("cosine_transform: x must be >= 0");

    // Non-oscillatory regimes: fold cos into the integrand.
    if (x == 0.0 || x * scale < 0.05) {
        auto fc = [&f, x](double t) { return f(t) * std::cos(x * t); };
        NumericResult r = integrate_half_line(fc, tol, scale);
        r.value *= 2.0;
        r.error_estimate *= 2.0;
        return r;
    }

    const double q = M_PI / (2.0 * x);  // first zero of cos(x t)
    const std::int64_t max_cells = 96;

    Tolerance cell_tol = tol;
    cell_tol.rel = std::fmax(0.25 * tol.rel, 1e-14);
    cell_tol.abs = 0.125 * tol.abs;
    cell_tol.max_evals = std::max<std::int64_t>(tol.max_evals / 8, 480);

    NumericResult out;
    std::vector<double> sums;
    double running = 0.0;
    double quad_err = 0.0;
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    double prev_cell = 0.0;
    int tiny_streak = 0;

    for (std::int64_t j = 0; j < max_cells; ++j) {
        const double a = (j == 0) ? 0.0 : (2.0 * j - 1.0) * q;
        const double b = (2.0 * j + 1.0) * q;
        auto fc = [&f, x](double t) { return f(t) * std::cos(x * t); };
        NumericResult cell;
        if (j == 0 && b > 8.0 * scale) {
            // Wide first cell: resolve the decay region before the first zero.
            std::array<double, 5> hint{0.25 * scale, scale, 4.0 * scale,
                                       16.0 * scale, 64.0 * scale};
            cell = integrate_interval(fc, a, b, cell_tol, hint);
        } else {
            cell = integrate_interval(fc, a, b, cell_tol);
        }
        out.evaluations += cell.evaluations;
        running += cell.value;
        quad_err += cell.error_estimate;
        sums.push_back(running);

        const double tgt = target_of(tol, running);

        // Plain-sum exit: cells negligible and shrinking.
        if (std::fabs(cell.value) <= 0.02 * tgt &&
            std::fabs(cell.value) <= std::fabs(prev_cell)) {
            if (++tiny_streak >= 2 && j >= 3) {
                best = running;
                best_err = quad_err + std::fabs(cell.value);
                break;
            }
        } else {
            tiny_streak = 0;
        }
        prev_cell = cell.value;

        if (j >= 5) {
            auto est = detail::wynn_epsilon(sums);
            if (est.usable) {
                const double err = 3.0 * est.stability + quad_err;
                if (err < best_err) {
                    best = est.value;
                    best_err = err;
                }
                if (best_err <= target_of(tol, best)) break;
            }
        }
        if (out.evaluations + 480 > tol.max_evals) break;
    }

    if (!std::isfinite(best_err)) {
        best = running;
        best_err = quad_err + std::fabs(prev_cell);
    }
    out.value = 2.0 * best;
    out.error_estimate = 2.0 * best_err;
    out.converged = std::isfinite(out.value) &&
                    out.error_estimate <= target_of(tol, out.value);
    return out;
}

/// Primed sum: (1/2) term(0) + sum_{n>=1} term(n).
///
/// Truncation uses, in order of preference: a caller-supplied analytic tail
/// bound, the geometric bound |t_n| r/(1-r) from the observed ratio, or -- for
/// slowly decaying tails -- a fitted algebraic tail plus a Levin-u estimate.
/// `tail_bound(n)`, when given, must bound |sum_{m>n} term(m)|.
template <class TermFn, class TailFn = std::nullptr_t>
NumericResult primed_sum(TermFn&& term, const Tolerance& tol,
                         TailFn&& tail_bound = nullptr) {
    validate(tol);
    constexpr bool has_tail = !std::is_same_v<std::decay_t<TailFn>, std::nullptr_t>;

    NumericResult out;
    double sum = 0.5 * term(0);
    out.evaluations = 1;

    std::vector<double> terms;  // term history for ratio/power fits
    detail::LevinU levin;
    bool levin_active = true;
    double levin_best_stab = std::numeric_limits<double>::infinity();
    int levin_worse = 0;
    double best_acc = 0.0;  // best accelerated estimate (Levin or fitted tail)
    double best_acc_err = std::numeric_limits<double>::infinity();
    double prev_term = sum;
    int zero_streak = 0;
    double fit_prev = std::numeric_limits<double>::quiet_NaN();

    const std::int64_t max_index = tol.max_evals;
    for (std::int64_t n = 1; n <= max_index; ++n) {
        const double t = term(n);
        ++out.evaluations;
        sum += t;
        terms.push_back(t);
        if (levin_active) {
            levin.push(sum, t);
            if (levin.usable()) {
                const double stab = levin.stability();
                if (stab < levin_best_stab) {
                    levin_best_stab = stab;
                    levin_worse = 0;
                } else if (++levin_worse >= 6) {
                    levin_active = false;  // past the roundoff optimum
                }
                const double err = 3.0 * stab;
                if (err < best_acc_err && std::isfinite(levin.value())) {
                    best_acc = levin.value();
                    best_acc_err = err;
                }
            }
        }

        const double tgt = target_of(tol, sum);

        if constexpr (has_tail) {
            const double bound = tail_bound(n);
            if (bound <= tgt && n >= 2) {
                out.value = sum;
                out.error_estimate = bound;
                out.converged = true;
                return out;
            }
        }

        // Finite support / vanishing tail.
        if (t == 0.0 || std::fabs(t) <= 0.005 * tgt) {
            if (++zero_streak >= 3) {
                out.value = sum;
                out.error_estimate = 3.0 * std::fabs(t);
                out.converged = out.error_estimate <= tgt;
                if (out.converged) return out;
            }
        } else {
            zero_streak = 0;
        }

        if (n >= 3 && prev_term != 0.0) {
            // Geometric regime: honest bound from the worst recent ratio.
            double r = 0.0;
            for (std::size_t i = terms.size() - std::min<std::size_t>(3, terms.size() - 1);
                 i < terms.size(); ++i) {
                if (terms[i - 1] != 0.0)
                    r = std::fmax(r, std::fabs(terms[i] / terms[i - 1]));
            }
            if (r > 0.0 && r < 0.95) {
                const double bound = std::fabs(t) * r / (1.0 - r);
                if (bound <= tgt) {
                    out.value = sum;
                    out.error_estimate = bound;
                    out.converged = true;
                    return out;
                }
            }

            // Algebraic regime: fit |t_n| ~ a/n^p and add the fitted tail.
            if (n >= 8 && r >= 0.5) {
                const double tn = std::fabs(t);
                const double tm = std::fabs(terms[terms.size() - 5]);
                if (tn > 0.0 && tm > tn) {
                    const double p = std::log(tm / tn) /
                                     std::log(static_cast<double>(n) / (n - 4.0));
                    if (p > 1.05 && p < 40.0) {
                        double tail = 0.0;  // sum_{j>n} a/j^p with a = tn*n^p
                        for (std::int64_t j = n + 1; j <= n + 4096; ++j)
                            tail += std::pow(static_cast<double>(n) / j, p);
                        tail += std::pow(static_cast<double>(n) / (n + 4096.5), p) *
                                (n + 4096.5) / (p - 1.0);
                        tail *= tn;
                        const double sgn = (t >= 0.0) ? 1.0 : -1.0;
                        const double fitted = sum + sgn * tail;
                        const double fit_err =
                            2.0 * tail / static_cast<double>(n) +
                            (std::isfinite(fit_prev) ? std::fabs(fitted - fit_prev)
                                                     : tail);
                        fit_prev = fitted;
                        if (fit_err < best_acc_err) {
                            best_acc = fitted;
                            best_acc_err = fit_err;
                        }
                    }
                }
            }

            if (best_acc_err <= tgt) {
                out.value = best_acc;
                out.error_estimate = best_acc_err;
                out.converged = true;
                return out;
            }
        }
        prev_term = t;
    }

    if (std::isfinite(best_acc_err) &&
        best_acc_err < std::fabs(prev_term) * 2.0) {
        out.value = best_acc;
        out.error_estimate = best_acc_err;
    } else {
        out.value = sum;
        out.error_estimate = std::fabs(prev_term) * 2.0;
    }
    out.converged = false;
    return out;
}

/// Per-unit-area radial mode integral (1/2pi) int_0^inf k f(k) dk -- the
/// azimuthally reduced continuum limit of the transverse-mode sum.
template <class F>
NumericResult radial_mode_integral(F&& f, const Tolerance& tol, double scale = 1.0) {
    auto kf = [&f](double k) { return k * f(k); };
    NumericResult r = integrate_half_line(kf, tol, scale);
    r.value /= 2.0 * M_PI;
    r.error_estimate /= 2.0 * M_PI;
    return r;
}

}  // namespace casimir::quad
