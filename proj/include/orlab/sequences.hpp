#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlab/decomposition.hpp"
#include "orlab/grid.hpp"
#include "orlab/lions.hpp"

namespace orlab {

/// Canonical concentrating families driven by a single index cap. The grids
/// place nodes on every kink of the piecewise closures, so the synthetic
/// decompositions reconstruct exactly up to float noise.
enum class SequenceKind { single, two_orthogonal, two_nonorthogonal };

inline SequenceKind sequence_kind_from_name(const std::string& name) {
    if (name == "single") return SequenceKind::single;
    if (name == "two-orthogonal") return SequenceKind::two_orthogonal;
    if (name == "two-nonorthogonal") return SequenceKind::two_nonorthogonal;
    throw std::invalid_argument("unknown sequence kind: " + name);
}

inline std::vector<int> default_index_range(int nmax, int count = 8, int step = 4) {
    std::vector<int> out;
    for (int k = count - 1; k >= 0; --k) out.push_back(nmax - k * step);
    if (out.front() < 2) throw std::invalid_argument("index range dips below 2; raise nmax");
    return out;
}

inline RadialSequence make_named_sequence(SequenceKind kind, int nmax) {
    const auto range = default_index_range(nmax);
    switch (kind) {
        case SequenceKind::single: {
            const auto grid = family_grid(static_cast<double>(nmax), 0.02);
            return make_sequence(
                [grid](int n) { return sample_from_log_closure(lions_f_log(n), grid); }, range,
                grid);
        }
        case SequenceKind::two_orthogonal: {
            const auto grid = family_grid(static_cast<double>(nmax) * nmax, 0.05);
            return make_sequence(
                [grid](int n) {
                    auto f1 = lions_f_log(n);
                    auto f2 = lions_f_log(static_cast<double>(n) * n);
                    return sample_from_log_closure([&](double s) { return f1(s) + f2(s); }, grid);
                },
                range, grid);
        }
        default: {
            const auto grid = family_grid(2.0 * nmax, 0.02);
            return make_sequence(
                [grid](int n) {
                    auto f1 = lions_f_log(n);
                    auto f2 = lions_f_log(2.0 * n);
                    return sample_from_log_closure([&](double s) { return f1(s) + f2(s); }, grid);
                },
                range, grid);
        }
    }
}

/// Synthetic multi-bubble family from explicit scale exponents: each level
/// contributes a Lions bubble at scale n^p.
inline RadialSequence make_power_sequence(const std::vector<double>& exponents, int nmax,
                                          double ds = 0.05) {
    if (exponents.empty()) throw std::invalid_argument("make_power_sequence: no exponents");
    const auto range = default_index_range(nmax);
    double alpha_max = 0.0;
    for (double p : exponents) alpha_max = std::max(alpha_max, std::pow(nmax, p));
    const auto grid = family_grid(alpha_max, ds);
    auto exps = exponents;
    return make_sequence(
        [grid, exps](int n) {
            auto f = RadialFunction::zeros(grid);
            for (double p : exps) {
                const auto b = sample_from_log_closure(lions_f_log(std::pow(n, p)), grid);
                for (std::size_t i = 0; i < grid.n_points; ++i) f.values[i] += b.values[i];
            }
            return f;
        },
        range, grid);
}

} // namespace orlab
