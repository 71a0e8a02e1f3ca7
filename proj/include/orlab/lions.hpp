#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "orlab/grid.hpp"

namespace orlab {

/// One-variable profile psi: identically zero on t <= 0, sampled on a uniform
/// grid over [0, t_max], extended by its last value beyond t_max (every
/// profile used here is eventually constant). psi(0) = 0 by construction.
class Profile {
public:
    Profile() = default;
    Profile(double t_max, std::vector<double> values)
        : t_max_(t_max), values_(std::move(values)) {
        if (values_.size() < 2) throw std::invalid_argument("Profile: need at least 2 samples");
        if (!(t_max_ > 0.0)) throw std::invalid_argument("Profile: t_max must be positive");
        values_.front() = 0.0;
    }

    /// Builds from a closure psi(t); knots of piecewise-linear closures should
    /// land on grid nodes, so pass dt dividing the knot spacing.
    static Profile from_closure(const std::function<double(double)>& psi, double t_max,
                                std::size_t n_points = 513) {
        std::vector<double> v(n_points);
        const double dt = t_max / static_cast<double>(n_points - 1);
        for (std::size_t i = 0; i < n_points; ++i) v[i] = psi(dt * static_cast<double>(i));
        return Profile(t_max, std::move(v));
    }

    double t_max() const { return t_max_; }
    std::size_t size() const { return values_.size(); }
    double dt() const { return t_max_ / static_cast<double>(values_.size() - 1); }
    const std::vector<double>& values() const { return values_; }

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= t_max_) return values_.back();
        const double x = t / dt();
        auto i = static_cast<std::size_t>(x);
        if (i + 1 >= values_.size()) return values_.back();
        const double w = x - static_cast<double>(i);
        return values_[i] * (1.0 - w) + values_[i + 1] * w;
    }

    /// ||psi'||_{L^2(R)}; exact for piecewise-linear samples (constant beyond t_max).
    double grad_norm() const {
        const double h = dt();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            const double slope = (values_[i + 1] - values_[i]) / h;
            acc += slope * slope * h;
        }
        return std::sqrt(acc);
    }

    /// sup_{t>0} |psi(t)|/sqrt(t) over the sample nodes.
    double sup_ratio() const {
        const double h = dt();
        double best = 0.0;
        for (std::size_t i = 1; i < values_.size(); ++i) {
            const double t = h * static_cast<double>(i);
            best = std::max(best, std::fabs(values_[i]) / std::sqrt(t));
        }
        return best;
    }

    /// Negative translation psi_a(t) = psi(t + a), a <= 0; stays in the class.
    Profile shifted(double a) const {
        if (a > 0.0) throw std::invalid_argument("Profile::shifted: shift must be <= 0");
        const double h = dt();
        const double new_tmax = t_max_ - a;
        const auto n = static_cast<std::size_t>(std::llround(new_tmax / h)) + 1;
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = (*this)(h * static_cast<double>(i) + a);
        return Profile(new_tmax, std::move(v));
    }

private:
    double t_max_ = 0.0;
    std::vector<double> values_;
};

/// A concentrating family: scale samples alpha_n together with a profile,
/// generating g_n(x) = sqrt(alpha_n / 2 pi) psi(-log|x| / alpha_n).
struct ScaledBubble {
    std::function<double(int)> scale_at;
    Profile profile;
};

/// The canonical profile: L(t) = 0, t, 1 on (-inf,0], [0,1], [1,inf).
inline Profile canonical_profile() {
    return Profile::from_closure([](double t) { return t <= 0.0 ? 0.0 : (t >= 1.0 ? 1.0 : t); }, 4.0, 257);
}

/// The log-cone concentration example: zero outside the unit disk, a log ramp
/// down to r = e^{-alpha}, constant sqrt(alpha/2pi) inside.
inline std::function<double(double)> lions_f(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("lions_f: alpha must be positive");
    const double plateau = std::sqrt(alpha / kTwoPi);
    const double slope = 1.0 / std::sqrt(2.0 * alpha * kPi);
    const double r_in = std::exp(-alpha);
    return [=](double r) {
        if (r >= 1.0) return 0.0;
        if (r <= r_in) return plateau;
        return -std::log(r) * slope;
    };
}

/// f_alpha in the log coordinate: sqrt(alpha/2pi) L(s/alpha). This form has
/// no radius underflow and is the one deep-scale machinery samples.
inline std::function<double(double)> lions_f_log(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("lions_f_log: alpha must be positive");
    const double amp = std::sqrt(alpha / kTwoPi);
    return [=](double s) {
        if (s <= 0.0) return 0.0;
        return s >= alpha ? amp : amp * s / alpha;
    };
}

/// ||f_alpha||_{L^2}^2 in closed form.
inline double lions_l2_sq_closed_form(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("lions_l2_sq_closed_form: alpha must be positive");
    const double e2 = std::exp(-2.0 * alpha);
    return (1.0 - e2) / (4.0 * alpha) - 0.5 * e2;
}

inline double lions_l2_closed_form(double alpha) { return std::sqrt(lions_l2_sq_closed_form(alpha)); }

/// Dilated family g_alpha(x) = f_alpha(x / R_alpha); gradient norm is scale
/// invariant, the L^2 norm picks up the factor R_alpha.
inline std::function<double(double)> scaled_g(double alpha, double R_alpha) {
    if (!(R_alpha > 0.0)) throw std::invalid_argument("scaled_g: R_alpha must be positive");
    auto f = lions_f(alpha);
    return [=](double r) { return f(r / R_alpha); };
}

/// Log-coordinate form of the dilated family: v(s) = f_alpha-tilde(s + log R).
inline std::function<double(double)> scaled_g_log(double alpha, double R_alpha) {
    if (!(R_alpha > 0.0)) throw std::invalid_argument("scaled_g_log: R_alpha must be positive");
    auto f = lions_f_log(alpha);
    const double shift = std::log(R_alpha);
    return [=](double s) { return f(s + shift); };
}

/// Samples the bubble at index n on a log grid (zero for s <= 0).
inline RadialFunction bubble_to_function(const ScaledBubble& b, int n, const LogGrid& grid) {
    const double alpha = b.scale_at(n);
    if (!(alpha > 0.0)) throw std::invalid_argument("bubble_to_function: scale must be positive");
    const double amp = std::sqrt(alpha / kTwoPi);
    std::vector<double> v(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double s = grid.s(i);
        v[i] = s <= 0.0 ? 0.0 : amp * b.profile(s / alpha);
    }
    return RadialFunction(grid, std::move(v));
}

/// Piecewise profile of f_k + f_{2k} seen at scale k.
inline Profile gk_profile() {
    const double c = 1.0 / std::sqrt(2.0);
    return Profile::from_closure(
        [=](double t) {
            if (t <= 0.0) return 0.0;
            if (t <= 1.0) return t + t * c;
            if (t <= 2.0) return 1.0 + t * c;
            return 1.0 + std::sqrt(2.0);
        },
        8.0, 513);
}

/// Two-scale sum a f_alpha + b f_{alpha^2}; the prototype for the Orlicz
/// max-law over orthogonal scales.
inline std::function<double(double)> sum_h(double a, double b, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("sum_h: alpha must exceed 1");
    auto f1 = lions_f(alpha);
    auto f2 = lions_f(alpha * alpha);
    return [=](double r) { return a * f1(r) + b * f2(r); };
}

/// Log-coordinate form of sum_h.
inline std::function<double(double)> sum_h_log(double a, double b, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("sum_h_log: alpha must exceed 1");
    auto f1 = lions_f_log(alpha);
    auto f2 = lions_f_log(alpha * alpha);
    return [=](double s) { return a * f1(s) + b * f2(s); };
}

} // namespace orlab
