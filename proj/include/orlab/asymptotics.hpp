#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "orlab/grid.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/quadrature.hpp"

namespace orlab {

/// Observed values of a quantity along an increasing parameter sweep, with a
/// convergence verdict from the trailing points.
struct TrendReport {
    std::vector<double> parameters;
    std::vector<double> observed;
    double target = 0.0;
    bool target_is_infinite = false;
    bool converged = false;
    double rate_estimate = 0.0; ///< geometric decay factor of |observed - target| on the tail
};

namespace detail {

/// Convergence of the last three points: errors shrink monotonically and the
/// final one is within tol of the target (or the values blow up when the
/// target is infinite).
inline void finish_trend(TrendReport& t, double tol) {
    const std::size_t n = t.observed.size();
    if (n < 2) { t.converged = false; return; }
    if (t.target_is_infinite) {
        t.converged = true;
        for (std::size_t i = n >= 3 ? n - 3 : 0; i + 1 < n; ++i)
            if (t.observed[i + 1] <= t.observed[i]) t.converged = false;
        if (t.converged && n >= 2) t.rate_estimate = t.observed[n - 1] / t.observed[n - 2];
        return;
    }
    std::vector<double> err;
    for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) err.push_back(std::fabs(t.observed[i] - t.target));
    bool mono = true;
    for (std::size_t i = 0; i + 1 < err.size(); ++i)
        if (err[i + 1] > err[i] + 1e-14) mono = false;
    t.converged = mono && err.back() <= tol;
    if (err.size() >= 2 && err[err.size() - 2] > 0.0) t.rate_estimate = err.back() / err[err.size() - 2];
}

} // namespace detail

/// The two-sided bracket for ||f_alpha|| in the Orlicz norm:
/// lambda^2 >= alpha / (2 pi log(1 + kappa e^{2 alpha} / pi)) from the plateau.
inline double lions_orlicz_lower_bound(double alpha, double kappa) {
    const double log_term =
        2.0 * alpha + std::log(kappa / kPi) + std::log1p(kPi * std::exp(-2.0 * alpha) / kappa);
    return std::sqrt(alpha / (kTwoPi * log_term));
}

inline double lions_orlicz_upper_bound(double alpha) {
    // embedding-type bound (1/sqrt(4pi)) (||grad f|| + ||f||_{L^2}) with the closed forms
    return (1.0 + lions_l2_closed_form(alpha)) / std::sqrt(2.0 * kTwoPi);
}

/// ||f_alpha|| in Orlicz over an increasing alpha sweep; approaches
/// 1/sqrt(4 pi) from within the bracket above.
inline TrendReport orlicz_limit_sweep(const std::vector<double>& alphas, const OrliczConfig& cfg = {},
                                      double tol = 0.1, double ds = 1e-3) {
    if (alphas.empty()) throw std::invalid_argument("orlicz_limit_sweep: empty sweep");
    TrendReport t;
    t.target = 1.0 / std::sqrt(2.0 * kTwoPi);
    for (double a : alphas) {
        const auto f = sample_from_log_closure(lions_f_log(a), family_grid(a, ds));
        t.parameters.push_back(a);
        t.observed.push_back(orlicz_norm(f, cfg));
    }
    detail::finish_trend(t, tol * t.target);
    return t;
}

/// The two tail integrals governing the exponential concentration expansion,
/// computed after the change of variables that keeps the integrand bounded.
struct TailIntegrals {
    double I = 0.0; ///< -> 1
    double J = 0.0; ///< -> 1/3
};

inline TailIntegrals tail_integrals(double alpha, double quad_tol = 1e-12) {
    if (!(alpha > 0.0)) throw std::invalid_argument("tail_integrals: alpha must be positive");
    TailIntegrals out;
    const double A = std::sqrt(alpha / 2.0);
    // I = 2 A e^{-alpha/2} int_0^A e^{y^2} dy, integrand folded to e^{y^2 - A^2} <= 1
    out.I = 2.0 * A * adaptive_simpson([&](double y) { return std::exp(y * y - A * A); }, 0.0, A, quad_tol);
    // J splits at y = 0 into pieces ending at A/2 and 3A/2 with weight e^{-9 alpha/8}
    const double c = 9.0 * alpha / 8.0;
    auto piece = [&](double upper) {
        return adaptive_simpson([&](double y) { return std::exp(y * y - c); }, 0.0, upper, quad_tol);
    };
    out.J = A * (piece(0.5 * A) + piece(1.5 * A));
    return out;
}

/// Raw-variable cross-check of tail_integrals, only safe for moderate alpha.
inline TailIntegrals tail_integrals_raw(double alpha, double quad_tol = 1e-12) {
    if (!(alpha > 0.0) || alpha > 400.0)
        throw std::invalid_argument("tail_integrals_raw: alpha out of the raw-quadrature range");
    TailIntegrals out;
    auto e = [&](double r) { const double l = std::log(r); return std::exp(2.0 * l * l / alpha); };
    out.I = adaptive_simpson([&](double r) { return r * e(r); }, std::exp(-alpha), 1.0, quad_tol);
    out.J = adaptive_simpson([&](double r) { return r * r * e(r); }, std::exp(-alpha), 1.0, quad_tol);
    return out;
}

/// e^{p alpha} int_{e^{-alpha^2}}^{e^{-alpha}} e^{q log^2 r / alpha^2} r dr,
/// vanishing as alpha -> infinity for 0 < p, q < 2. Evaluated in the shifted
/// variable where the exponent is q + (p-2) alpha at its largest.
inline double pq_integral(double p, double q, double alpha, double quad_tol = 1e-14) {
    if (!(p > 0.0) || p >= 2.0 || !(q > 0.0) || q >= 2.0)
        throw std::invalid_argument("pq_integral: require 0 < p, q < 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("pq_integral: alpha must be positive");
    const double sq = std::sqrt(q);
    const double y_lo = sq - alpha / sq;
    const double y_hi = alpha * (q - 1.0) / sq;
    const double shift = p * alpha - alpha * alpha / q;
    const double val = adaptive_simpson([&](double y) { return std::exp(y * y + shift); }, y_lo, y_hi,
                                        quad_tol, 60);
    return (alpha / sq) * val;
}

enum class DiracKind { gradient, exponential };

/// Concentration of |grad f_alpha|^2 toward a Dirac mass (value -> phi(0))
/// and of e^{4 pi f_alpha^2} - 1 toward 2 pi Dirac (value -> 2 pi phi(0)).
/// phi is a radial test closure.
inline double dirac_test(double alpha, const std::function<double(double)>& phi, DiracKind kind,
                         double ds = 1e-3) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dirac_test: alpha must be positive");
    if (kind == DiracKind::gradient) {
        // (1/alpha) int_0^alpha phi(e^{-s}) ds
        const auto n = static_cast<std::size_t>(std::llround(alpha / ds)) + 1;
        const double h = alpha / static_cast<double>(n - 1);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = phi(std::exp(-h * static_cast<double>(i)));
        return trapezoid_uniform(w, h) / alpha;
    }
    // 2 pi int_0^{s_max} (e^{4 pi v^2} - 1) e^{-2s} phi(e^{-s}) ds with
    // v = f_alpha in log coordinates; the combined exponent is <= 0 throughout.
    const double s_max = alpha + 40.0;
    const auto n = static_cast<std::size_t>(std::llround(s_max / ds)) + 1;
    const double h = s_max / static_cast<double>(n - 1);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = h * static_cast<double>(i);
        const double x = s <= alpha ? 2.0 * s * s / alpha : 2.0 * alpha;
        w[i] = std::exp(x - 2.0 * s) * (1.0 - std::exp(-x)) * phi(std::exp(-s));
    }
    return kTwoPi * trapezoid_uniform(w, h);
}

/// Bounds of the profile proposition: for g_n generated by (alpha_n, psi),
/// sup |psi|/sqrt(s) / sqrt(4pi) <= lim ||g_n|| <= ||psi'|| / sqrt(4pi).
struct ProfileBounds {
    double lower = 0.0;
    double upper = 0.0;
    TrendReport observed;
    bool bracket_ok = false;
};

inline ProfileBounds profile_norm_bounds(const Profile& psi, const std::vector<double>& alphas,
                                         const OrliczConfig& cfg = {}, double tol = 0.1,
                                         double ds = 1e-3) {
    ProfileBounds pb;
    const double s4pi = std::sqrt(2.0 * kTwoPi);
    pb.lower = psi.sup_ratio() / s4pi;
    pb.upper = psi.grad_norm() / s4pi;
    double sup = 0.0;
    for (double v : psi.values()) sup = std::max(sup, std::fabs(v));
    for (double a : alphas) {
        // the grid must cover both the varying part and the plateau's modular mass
        const auto grid = family_grid(a * std::max(psi.t_max(), sup * sup), ds);
        ScaledBubble b{[a](int) { return a; }, psi};
        const auto f = bubble_to_function(b, 0, grid);
        pb.observed.parameters.push_back(a);
        pb.observed.observed.push_back(orlicz_norm(f, cfg));
    }
    pb.observed.target = pb.lower;
    if (!pb.observed.observed.empty()) {
        const double last = pb.observed.observed.back();
        pb.bracket_ok = last >= pb.lower - tol && last <= pb.upper + tol;
    }
    return pb;
}

/// ||a f_alpha + b f_{alpha^2}|| approaches max(|a|, |b|) / sqrt(4 pi).
inline TrendReport sum_orlicz_max_check(double a, double b, const std::vector<double>& alphas,
                                        const OrliczConfig& cfg = {}, double tol = 0.15,
                                        double ds = 2e-3) {
    TrendReport t;
    t.target = std::max(std::fabs(a), std::fabs(b)) / std::sqrt(2.0 * kTwoPi);
    for (double alpha : alphas) {
        if (!(alpha >= 2.0)) throw std::invalid_argument("sum_orlicz_max_check: alphas must be >= 2");
        const auto grid = family_grid(alpha * alpha, ds);
        const auto f = sample_from_log_closure(sum_h_log(a, b, alpha), grid);
        t.parameters.push_back(alpha);
        t.observed.push_back(orlicz_norm(f, cfg));
    }
    detail::finish_trend(t, tol * std::max(t.target, 1e-300));
    return t;
}

/// Cross-scale inner products (1/sqrt(alpha_n beta_n)) int f(s/alpha_n) g(s/beta_n) ds
/// vanish exactly when the scales are orthogonal. f and g are compactly
/// supported closures on [0, support].
inline TrendReport cross_scale_vanishing(const std::function<double(double)>& f, double support_f,
                                         const std::function<double(double)>& g, double support_g,
                                         const std::function<double(int)>& alpha_n,
                                         const std::function<double(int)>& beta_n,
                                         const std::vector<int>& n_list, double tol = 0.05) {
    TrendReport t;
    t.target = 0.0;
    for (int n : n_list) {
        const double a = alpha_n(n), b = beta_n(n);
        const double upper = std::min(a * support_f, b * support_g);
        const double val =
            adaptive_simpson([&](double s) { return f(s / a) * g(s / b); }, 0.0, upper, 1e-12) /
            std::sqrt(a * b);
        t.parameters.push_back(static_cast<double>(n));
        t.observed.push_back(std::fabs(val));
    }
    detail::finish_trend(t, tol);
    return t;
}

} // namespace orlab
