#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/grid.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/quadrature.hpp"

namespace orlab {

struct RGrid {
    double R = 0.0;
    std::size_t n_r = 0;

    RGrid() = default;
    RGrid(double radius, std::size_t n) : R(radius), n_r(n) {
        if (!(R > 0.0)) throw std::invalid_argument("RGrid: R must be positive");
        if (n_r < 3) throw std::invalid_argument("RGrid: need at least 3 nodes");
    }
    double dr() const { return R / static_cast<double>(n_r - 1); }
    double r(std::size_t i) const { return dr() * static_cast<double>(i); }
};

struct WaveState {
    std::vector<double> u;
    std::vector<double> ut;
    double time = 0.0;
};

struct CauchyData {
    std::function<double(double)> phi; ///< u(0, r)
    std::function<double(double)> psi; ///< du/dt(0, r)
};

struct EnergyReport {
    double kinetic = 0.0;   ///< ||du/dt||_{L^2}^2
    double gradient = 0.0;  ///< ||grad u||_{L^2}^2
    double nonlinear = 0.0; ///< (1/4pi) || e^{4 pi u^2} - 1 ||_{L^1}
    double total = 0.0;
    double quadratic = 0.0; ///< E_c: kinetic + gradient + ||u||_{L^2}^2
};

/// f(u) = u (e^{4 pi u^2} - 1). Odd, and rejected past the exponent cap so a
/// supercritical run aborts instead of silently saturating.
inline double nonlinearity(double u) {
    const double x = 2.0 * kTwoPi * u * u;
    if (x > kExpCap)
        throw OverflowError("nonlinearity: exponent overflow at |u| = " + std::to_string(std::fabs(u)),
                            0, x);
    return u * std::expm1(x);
}

inline WaveState sample_state(const CauchyData& data, const RGrid& grid) {
    WaveState st;
    st.u.resize(grid.n_r);
    st.ut.resize(grid.n_r);
    for (std::size_t i = 0; i < grid.n_r; ++i) {
        st.u[i] = data.phi(grid.r(i));
        st.ut[i] = data.psi(grid.r(i));
        if (!std::isfinite(st.u[i]) || !std::isfinite(st.ut[i]))
            throw SamplingError("sample_state: non-finite Cauchy data", i, grid.r(i));
    }
    st.u.back() = 0.0; // Dirichlet wall
    return st;
}

/// 2 pi weighted radial integrals of the energy densities.
inline EnergyReport total_energy(const WaveState& st, const RGrid& grid) {
    const std::size_t n = grid.n_r;
    const double dr = grid.dr();
    std::vector<double> kin(n), grd(n), nl(n), l2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.r(i);
        double du;
        if (i == 0)
            du = (st.u[1] - st.u[0]) / dr;
        else if (i + 1 == n)
            du = (st.u[n - 1] - st.u[n - 2]) / dr;
        else
            du = (st.u[i + 1] - st.u[i - 1]) / (2.0 * dr);
        const double x = 2.0 * kTwoPi * st.u[i] * st.u[i];
        if (x > kExpCap) throw OverflowError("total_energy: exponent overflow", i, x);
        kin[i] = st.ut[i] * st.ut[i] * r;
        grd[i] = du * du * r;
        nl[i] = std::expm1(x) * r;
        l2[i] = st.u[i] * st.u[i] * r;
    }
    EnergyReport e;
    e.kinetic = kTwoPi * trapezoid_uniform(kin, dr);
    e.gradient = kTwoPi * trapezoid_uniform(grd, dr);
    e.nonlinear = 0.5 * trapezoid_uniform(nl, dr);
    e.total = e.kinetic + e.gradient + e.nonlinear;
    e.quadratic = e.kinetic + e.gradient + kTwoPi * trapezoid_uniform(l2, dr);
    return e;
}

enum class Regime { subcritical, critical, supercritical };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        default: return "supercritical";
    }
}

/// E_0 against 1, with a tolerance band for the razor-edge critical case.
inline Regime classify_regime(const CauchyData& data, const RGrid& grid, double band = 1e-9) {
    const auto e = total_energy(sample_state(data, grid), grid);
    if (e.total < 1.0 - band) return Regime::subcritical;
    if (e.total > 1.0 + band) return Regime::supercritical;
    return Regime::critical;
}

enum class WaveMode { nonlinear, linear };

struct EvolveOptions {
    double cfl = 0.5;            ///< dt = cfl * dr unless dt is set explicitly
    double dt = 0.0;
    double support_radius = 1.0; ///< outermost radius carrying data at t = 0
};

namespace detail {

/// Radial Laplacian with the symmetry limit 2 u_rr at the origin and a
/// Dirichlet wall at r = R.
inline void radial_laplacian(const std::vector<double>& u, double dr, std::vector<double>& out) {
    const std::size_t n = u.size();
    const double inv2 = 1.0 / (dr * dr);
    out[0] = 4.0 * (u[1] - u[0]) * inv2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = dr * static_cast<double>(i);
        out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv2 + (u[i + 1] - u[i - 1]) / (2.0 * dr * r);
    }
    out[n - 1] = 0.0;
}

} // namespace detail

/// Velocity-Verlet integrator for u_tt = u_rr + u_r/r - u - f(u), streaming
/// so long runs need O(n_r) memory. The wall at r = R stays inert as long as
/// T < R - support_radius, which callers enforce through evolve/kinetic_gap.
class WaveStepper {
public:
    WaveStepper(const CauchyData& data, const RGrid& grid, WaveMode mode, double dt)
        : grid_(grid), mode_(mode), dt_(dt), st_(sample_state(data, grid)),
          acc_(grid.n_r), acc_next_(grid.n_r) {
        if (!(dt_ > 0.0) || dt_ > 0.5 * grid_.dr() + 1e-15)
            throw std::invalid_argument("WaveStepper: dt violates the stability bound 0.5 dr");
        acceleration(st_.u, st_.time, acc_);
    }

    const WaveState& state() const { return st_; }
    const RGrid& grid() const { return grid_; }
    double dt() const { return dt_; }

    void step(double h) {
        for (std::size_t i = 0; i < grid_.n_r; ++i)
            st_.u[i] += h * st_.ut[i] + 0.5 * h * h * acc_[i];
        st_.u.back() = 0.0;
        acceleration(st_.u, st_.time + h, acc_next_);
        for (std::size_t i = 0; i < grid_.n_r; ++i) st_.ut[i] += 0.5 * h * (acc_[i] + acc_next_[i]);
        st_.time += h;
        acc_.swap(acc_next_);
    }

private:
    void acceleration(const std::vector<double>& u, double time, std::vector<double>& acc) {
        detail::radial_laplacian(u, grid_.dr(), acc);
        for (std::size_t i = 0; i < grid_.n_r; ++i) {
            acc[i] -= u[i];
            if (mode_ == WaveMode::nonlinear) {
                const double x = 2.0 * kTwoPi * u[i] * u[i];
                if (x > kExpCap)
                    throw BlowupError("wave: field overflow at t = " + std::to_string(time) +
                                          ", node " + std::to_string(i),
                                      time, i, u[i]);
                acc[i] -= u[i] * std::expm1(x);
            }
        }
        acc.back() = 0.0;
    }

    RGrid grid_;
    WaveMode mode_;
    double dt_;
    WaveState st_;
    std::vector<double> acc_, acc_next_;
};

inline void check_propagation_window(const RGrid& grid, double T, const EvolveOptions& opt) {
    if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
    if (!(T < grid.R - opt.support_radius))
        throw std::invalid_argument("evolve: T too large for the domain; waves would reach the wall");
}

/// Streams the evolution, invoking observe(state) at t = 0 and after every step.
template <class Observer>
void evolve_observe(const CauchyData& data, const RGrid& grid, double T, WaveMode mode,
                    const EvolveOptions& opt, Observer&& observe) {
    check_propagation_window(grid, T, opt);
    const double dt = opt.dt > 0.0 ? opt.dt : opt.cfl * grid.dr();
    WaveStepper stepper(data, grid, mode, dt);
    observe(stepper.state());
    while (stepper.state().time < T - 1e-12) {
        stepper.step(std::min(dt, T - stepper.state().time));
        observe(stepper.state());
    }
}

struct Trajectory {
    std::vector<WaveState> states;
    RGrid grid;
    double dt = 0.0;
};

/// Stored trajectory, decimated by store_every to keep memory in check.
inline Trajectory evolve(const CauchyData& data, const RGrid& grid, double T, WaveMode mode,
                         const EvolveOptions& opt = {}, std::size_t store_every = 1) {
    Trajectory traj;
    traj.grid = grid;
    traj.dt = opt.dt > 0.0 ? opt.dt : opt.cfl * grid.dr();
    std::size_t count = 0;
    double last_time = -1.0;
    evolve_observe(data, grid, T, mode, opt, [&](const WaveState& st) {
        if (count++ % store_every == 0 || st.time >= T - 1e-12) {
            if (st.time != last_time) traj.states.push_back(st);
            last_time = st.time;
        }
    });
    return traj;
}

/// Maximum relative drift of the conserved quantity along the run: the full
/// energy in nonlinear mode, the quadratic energy in linear mode.
inline double energy_drift(const CauchyData& data, const RGrid& grid, double T, WaveMode mode,
                           const EvolveOptions& opt = {}) {
    double e0 = 0.0, drift = 0.0;
    bool first = true;
    evolve_observe(data, grid, T, mode, opt, [&](const WaveState& st) {
        const auto e = total_energy(st, grid);
        const double value = mode == WaveMode::nonlinear ? e.total : e.quadratic;
        if (first) {
            e0 = value;
            first = false;
        } else if (e0 > 0.0) {
            drift = std::max(drift, std::fabs(value - e0) / e0);
        }
    });
    return drift;
}

/// sup_t E_c(u - v, t) with the nonlinear and linear flows co-stepped from
/// the same data.
inline double kinetic_gap(const CauchyData& data, const RGrid& grid, double T,
                          const EvolveOptions& opt = {}) {
    check_propagation_window(grid, T, opt);
    const double dt = opt.dt > 0.0 ? opt.dt : opt.cfl * grid.dr();
    WaveStepper nl(data, grid, WaveMode::nonlinear, dt);
    WaveStepper li(data, grid, WaveMode::linear, dt);
    WaveState diff;
    diff.u.resize(grid.n_r);
    diff.ut.resize(grid.n_r);
    double sup = 0.0;
    auto measure = [&]() {
        for (std::size_t i = 0; i < grid.n_r; ++i) {
            diff.u[i] = nl.state().u[i] - li.state().u[i];
            diff.ut[i] = nl.state().ut[i] - li.state().ut[i];
        }
        sup = std::max(sup, total_energy(diff, grid).quadratic);
    };
    measure();
    while (nl.state().time < T - 1e-12) {
        const double h = std::min(dt, T - nl.state().time);
        nl.step(h);
        li.step(h);
        measure();
    }
    return sup;
}

/// Orlicz norm of a wave snapshot: the radial samples are carried onto a log
/// grid sized so the central plateau keeps its full modular mass.
inline double orlicz_snapshot_norm(const WaveState& st, const RGrid& grid,
                                   const OrliczConfig& ocfg = {}, double ds = 2e-3) {
    double sup = 0.0;
    for (double v : st.u) sup = std::max(sup, std::fabs(v));
    if (sup == 0.0) return 0.0;
    const double s_min = -std::log(grid.R);
    const double s_max = std::max(50.0, 4.0 * kTwoPi * sup * sup);
    const auto n = static_cast<std::size_t>(std::llround((s_max - s_min) / ds)) + 1;
    LogGrid lg(s_min, s_max, n);
    std::vector<double> v(lg.n_points);
    const double dr = grid.dr();
    for (std::size_t j = 0; j < lg.n_points; ++j) {
        const double x = lg.r(j) / dr;
        const auto i = std::min(static_cast<std::size_t>(x), grid.n_r - 2);
        const double w = std::min(x - static_cast<double>(i), 1.0);
        v[j] = st.u[i] * (1.0 - w) + st.u[i + 1] * w;
    }
    return orlicz_norm(RadialFunction(lg, std::move(v)), ocfg);
}

} // namespace orlab
