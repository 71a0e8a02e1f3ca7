#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/quadrature.hpp"

namespace orlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform grid in the log-radius coordinate s = -log r. A radial function
/// u on the plane is carried as v(s) = u(e^{-s}); everything outside
/// [s_min, s_max] is treated as zero.
struct LogGrid {
    double s_min = 0.0;
    double s_max = 0.0;
    std::size_t n_points = 0;

    LogGrid() = default;
    LogGrid(double smin, double smax, std::size_t n) : s_min(smin), s_max(smax), n_points(n) {
        if (!(s_min < s_max)) throw std::invalid_argument("LogGrid: s_min must be < s_max");
        if (n_points < 2) throw std::invalid_argument("LogGrid: need at least 2 points");
    }

    double ds() const { return (s_max - s_min) / static_cast<double>(n_points - 1); }
    double s(std::size_t i) const { return s_min + ds() * static_cast<double>(i); }
    double r(std::size_t i) const { return std::exp(-s(i)); }

    bool operator==(const LogGrid& o) const {
        return s_min == o.s_min && s_max == o.s_max && n_points == o.n_points;
    }
};

/// Default truncation for sweeps over a family concentrating at rate alpha:
/// the left cut keeps a slab of the exterior r > 1, the right cut is far
/// enough past the concentration scale for the e^{-2s} weight to vanish.
inline LogGrid family_grid(double alpha_max, double ds = 1e-3, double s_min = -2.0) {
    const double s_max = std::max(4.0 * alpha_max, 50.0);
    const auto n = static_cast<std::size_t>(std::llround((s_max - s_min) / ds)) + 1;
    return LogGrid(s_min, s_max, n);
}

struct RadialFunction {
    LogGrid grid;
    std::vector<double> values;

    RadialFunction() = default;
    RadialFunction(LogGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n_points)
            throw std::invalid_argument("RadialFunction: values/grid size mismatch");
    }

    static RadialFunction zeros(const LogGrid& g) {
        return RadialFunction(g, std::vector<double>(g.n_points, 0.0));
    }

    /// Linear interpolation in s; zero outside the grid.
    double eval_s(double s) const {
        if (s < grid.s_min || s > grid.s_max) return 0.0;
        const double x = (s - grid.s_min) / grid.ds();
        auto i = static_cast<std::size_t>(x);
        if (i + 1 >= grid.n_points) return values.back();
        const double w = x - static_cast<double>(i);
        return values[i] * (1.0 - w) + values[i + 1] * w;
    }
};

struct NormReport {
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double h1 = 0.0;
};

/// Samples a closure u(r) in the log coordinate. Any non-finite evaluation is
/// rejected with the offending node. Note r = e^{-s} underflows past s ~ 744;
/// families concentrating that deep must be sampled through
/// sample_from_log_closure instead.
inline RadialFunction sample_from_closure(const std::function<double(double)>& u, const LogGrid& grid) {
    std::vector<double> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double r = grid.r(i);
        const double y = u(r);
        if (!std::isfinite(y))
            throw SamplingError("sample_from_closure: non-finite value at node " + std::to_string(i) +
                                    " (r = " + std::to_string(r) + ")",
                                i, r);
        v[i] = y;
    }
    return RadialFunction(grid, std::move(v));
}

/// Samples v(s) = u(e^{-s}) given directly in the log coordinate, the safe
/// route for scales beyond the floating-point range of e^{-s}.
inline RadialFunction sample_from_log_closure(const std::function<double(double)>& v,
                                              const LogGrid& grid) {
    std::vector<double> vals(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double s = grid.s(i);
        const double y = v(s);
        if (!std::isfinite(y))
            throw SamplingError("sample_from_log_closure: non-finite value at node " +
                                    std::to_string(i) + " (s = " + std::to_string(s) + ")",
                                i, s);
        vals[i] = y;
    }
    return RadialFunction(grid, std::move(vals));
}

/// ||u||_{L^2}^2 = 2 pi * int v(s)^2 e^{-2s} ds, composite trapezoid with the
/// weight folded in analytically.
inline double l2_norm(const RadialFunction& f) {
    const auto& g = f.grid;
    std::vector<double> integrand(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double v = f.values[i];
        integrand[i] = v * v * std::exp(-2.0 * g.s(i));
    }
    return std::sqrt(kTwoPi * trapezoid_uniform(integrand, g.ds()));
}

/// Centered differences on interior nodes, one-sided at the ends. Kinks of
/// piecewise-linear families are smeared over one cell (local O(ds) error).
inline std::vector<double> derivative_samples(const RadialFunction& f) {
    const auto& g = f.grid;
    const double ds = g.ds();
    std::vector<double> d(g.n_points, 0.0);
    if (g.n_points < 2) return d;
    d[0] = (f.values[1] - f.values[0]) / ds;
    for (std::size_t i = 1; i + 1 < g.n_points; ++i)
        d[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * ds);
    d[g.n_points - 1] = (f.values[g.n_points - 1] - f.values[g.n_points - 2]) / ds;
    return d;
}

/// ||grad u||_{L^2}^2 = 2 pi * int v'(s)^2 ds.
inline double grad_l2_norm(const RadialFunction& f) {
    const auto d = derivative_samples(f);
    std::vector<double> integrand(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) integrand[i] = d[i] * d[i];
    return std::sqrt(kTwoPi * trapezoid_uniform(integrand, f.grid.ds()));
}

inline NormReport norm_report(const RadialFunction& f) {
    NormReport r;
    r.l2 = l2_norm(f);
    r.grad_l2 = grad_l2_norm(f);
    r.h1 = std::sqrt(r.l2 * r.l2 + r.grad_l2 * r.grad_l2);
    return r;
}

struct TailMass {
    double value = 0.0;
    bool truncated = false; ///< set when -log R fell left of the grid
};

/// L^2 norm of u restricted to |x| > R, i.e. to s < -log R, clipped to the grid.
inline TailMass tail_l2_mass(const RadialFunction& f, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("tail_l2_mass: R must be positive");
    const auto& g = f.grid;
    const double s_cut = -std::log(R);
    TailMass out;
    if (s_cut <= g.s_min) {
        out.truncated = true;
        return out;
    }
    const double ds = g.ds();
    double acc = 0.0;
    auto w = [&](std::size_t i) { const double v = f.values[i]; return v * v * std::exp(-2.0 * g.s(i)); };
    for (std::size_t i = 0; i + 1 < g.n_points; ++i) {
        const double a = g.s(i), b = g.s(i + 1);
        if (a >= s_cut) break;
        if (b <= s_cut) {
            acc += 0.5 * (w(i) + w(i + 1)) * ds;
        } else {
            // partial cell ending at the cut, integrand interpolated linearly
            const double frac = (s_cut - a) / ds;
            const double wcut = w(i) * (1.0 - frac) + w(i + 1) * frac;
            acc += 0.5 * (w(i) + wcut) * (s_cut - a);
        }
    }
    out.value = std::sqrt(kTwoPi * acc);
    return out;
}

struct Resampled {
    RadialFunction fn;
    bool clipped = false; ///< target extended beyond the source domain (zero-filled)
};

/// Linear interpolation onto a new grid; zero extension outside the source.
inline Resampled resample(const RadialFunction& f, const LogGrid& target) {
    Resampled out;
    if (target == f.grid) {
        out.fn = f;
        return out;
    }
    std::vector<double> v(target.n_points);
    bool clipped = false;
    for (std::size_t i = 0; i < target.n_points; ++i) {
        const double s = target.s(i);
        if (s < f.grid.s_min || s > f.grid.s_max) clipped = true;
        v[i] = f.eval_s(s);
    }
    out.fn = RadialFunction(target, std::move(v));
    out.clipped = clipped;
    return out;
}

} // namespace orlab
