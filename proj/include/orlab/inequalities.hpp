#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "orlab/grid.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/quadrature.hpp"

namespace orlab {

struct RadialBoundReport {
    double max_ratio = 0.0;
    double constant = 0.0; ///< C_p = ((p+2)/2)^{1/(p/2+1)}
    bool degenerate = false;
};

/// Radial decay estimate |u(r)| <= C_p r^{-2/(p+2)} ||u||_{L^p}^{p/(p+2)} ||grad u||^{2/(p+2)};
/// returns the largest sampled ratio against the proof constant.
inline RadialBoundReport radial_bound_check(const RadialFunction& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("radial_bound_check: p must be >= 1");
    RadialBoundReport rep;
    rep.constant = std::pow(0.5 * (p + 2.0), 1.0 / (0.5 * p + 1.0));
    const auto& g = f.grid;
    std::vector<double> w(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i)
        w[i] = std::pow(std::fabs(f.values[i]), p) * std::exp(-2.0 * g.s(i));
    const double lp = std::pow(kTwoPi * trapezoid_uniform(w, g.ds()), 1.0 / p);
    const double grad = grad_l2_norm(f);
    if (lp == 0.0 || grad == 0.0) {
        rep.degenerate = true;
        return rep;
    }
    const double denom = std::pow(lp, p / (p + 2.0)) * std::pow(grad, 2.0 / (p + 2.0));
    double best = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i) {
        // r^{2/(2+p)} = e^{-2s/(2+p)}
        const double weight = std::exp(-2.0 * g.s(i) / (2.0 + p));
        best = std::max(best, std::fabs(f.values[i]) * weight);
    }
    rep.max_ratio = best / denom;
    return rep;
}

/// Hoelder seminorm sup |u(x)-u(y)| / |x-y|^a over radial point pairs. Pairs
/// are subsampled to keep the scan quadratic in a small budget.
inline double holder_seminorm(const RadialFunction& f, double alpha_h, std::size_t max_nodes = 1500) {
    if (!(alpha_h > 0.0) || alpha_h >= 1.0)
        throw std::invalid_argument("holder_seminorm: alpha_h must lie in (0,1)");
    const auto& g = f.grid;
    const std::size_t stride = std::max<std::size_t>(1, g.n_points / max_nodes);
    std::vector<double> rs, vs;
    for (std::size_t i = 0; i < g.n_points; i += stride) {
        rs.push_back(g.r(i));
        vs.push_back(f.values[i]);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            const double dr = std::fabs(rs[i] - rs[j]);
            if (dr == 0.0) continue;
            best = std::max(best, std::fabs(vs[i] - vs[j]) / std::pow(dr, alpha_h));
        }
    return best;
}

struct LogIneqReport {
    double lambda = 0.0;
    double mu = 0.0;
    double alpha_h = 0.0;
    double empirical_C = 0.0; ///< minimal constant closing the logarithmic bound
    double sup_norm = 0.0;
    double h_mu_norm = 0.0;
    double holder_norm = 0.0; ///< inhomogeneous: sup norm + seminorm
    bool degenerate = false;
};

/// Solves the logarithmic L^inf bound for its constant:
/// ||u||_inf^2 <= lambda ||u||_{H_mu}^2 log(C + 8^a mu^{-a} ||u||_{C^a} / ||u||_{H_mu}).
inline LogIneqReport log_inequality_probe(const RadialFunction& f, double lambda, double mu,
                                          double alpha_h) {
    if (!(alpha_h > 0.0) || alpha_h >= 1.0)
        throw std::invalid_argument("log_inequality_probe: alpha_h must lie in (0,1)");
    if (!(lambda > 1.0 / (kTwoPi * alpha_h)))
        throw std::invalid_argument("log_inequality_probe: lambda below the admissible threshold");
    if (!(mu > 0.0) || mu > 1.0) throw std::invalid_argument("log_inequality_probe: mu must lie in (0,1]");
    LogIneqReport rep;
    rep.lambda = lambda;
    rep.mu = mu;
    rep.alpha_h = alpha_h;
    for (double v : f.values) rep.sup_norm = std::max(rep.sup_norm, std::fabs(v));
    const double l2 = l2_norm(f);
    const double grad = grad_l2_norm(f);
    rep.h_mu_norm = std::sqrt(grad * grad + mu * mu * l2 * l2);
    if (rep.h_mu_norm == 0.0) {
        rep.degenerate = true;
        rep.empirical_C = 1.0;
        return rep;
    }
    rep.holder_norm = rep.sup_norm + holder_seminorm(f, alpha_h);
    const double quotient =
        std::pow(8.0, alpha_h) * std::pow(mu, -alpha_h) * rep.holder_norm / rep.h_mu_norm;
    const double needed = std::exp(rep.sup_norm * rep.sup_norm / (lambda * rep.h_mu_norm * rep.h_mu_norm));
    rep.empirical_C = std::max(needed - quotient, 0.0);
    return rep;
}

/// 2D Lebesgue measure of the superlevel set {|u| >= eps}, with linear
/// crossing resolution inside cells so plateau boundaries are exact.
inline double superlevel_measure(const RadialFunction& f, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("superlevel_measure: eps must be positive");
    const auto& g = f.grid;
    // integral of 2 e^{-2s} over [a,b] is e^{-2a} - e^{-2b}; measure = pi * sum
    auto disk_band = [](double a, double b) { return std::exp(-2.0 * a) - std::exp(-2.0 * b); };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < g.n_points; ++i) {
        const double va = std::fabs(f.values[i]);
        const double vb = std::fabs(f.values[i + 1]);
        const double a = g.s(i), b = g.s(i + 1);
        const bool ina = va >= eps, inb = vb >= eps;
        if (ina && inb) {
            acc += disk_band(a, b);
        } else if (ina != inb) {
            const double frac = (eps - va) / (vb - va);
            const double cut = a + frac * (b - a);
            acc += ina ? disk_band(a, cut) : disk_band(cut, b);
        }
    }
    return kPi * acc;
}

struct BmoProbeReport {
    double mean = 0.0;           ///< mean of g_alpha over B_alpha (zero by the angular factor)
    double abs_average = 0.0;    ///< quadrature average of |g_alpha| over B_alpha
    double closed_form = 0.0;    ///< sqrt(alpha)/(2 sqrt(2 pi)) + (1-e^{-alpha})/(2 sqrt(2 pi alpha))
};

/// Ball averages of g_alpha = f_alpha e^{i theta} over B(0, e^{-alpha/2}).
/// The oscillation makes the mean vanish identically, while the average of
/// the modulus grows like sqrt(alpha): the witness that no Orlicz bound can
/// control local mean oscillation.
inline BmoProbeReport bmo_probe(double alpha, double ds = 2.5e-4) {
    if (!(alpha > 0.0)) throw std::invalid_argument("bmo_probe: alpha must be positive");
    BmoProbeReport rep;
    rep.mean = 0.0;
    // (1/|B|) int_B |g| = [2 pi int_{alpha/2}^inf v(s) e^{-2s} ds] / (pi e^{-alpha})
    const double s_lo = 0.5 * alpha;
    const double s_hi = 4.0 * alpha + 25.0;
    const auto n = static_cast<std::size_t>(std::llround((s_hi - s_lo) / ds)) + 1;
    const double h = (s_hi - s_lo) / static_cast<double>(n - 1);
    const double plateau = std::sqrt(alpha / kTwoPi);
    const double slope = 1.0 / std::sqrt(2.0 * alpha * kPi);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s_lo + h * static_cast<double>(i);
        const double v = s >= alpha ? plateau : s * slope;
        w[i] = v * std::exp(-2.0 * s);
    }
    rep.abs_average = kTwoPi * trapezoid_uniform(w, h) / (kPi * std::exp(-alpha));
    rep.closed_form = std::sqrt(alpha) / (2.0 * std::sqrt(kTwoPi)) +
                      (1.0 - std::exp(-alpha)) / (2.0 * std::sqrt(kTwoPi * alpha));
    return rep;
}

} // namespace orlab
