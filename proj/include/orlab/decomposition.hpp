#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/grid.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"

namespace orlab {

/// A bounded family n -> u_n on a shared log grid. The asymptotic statements
/// are probed along the trailing sampled indices, so families fed here should
/// already be convergent (no subsequence search is performed).
struct RadialSequence {
    std::function<RadialFunction(int)> generator;
    std::vector<int> n_range; ///< increasing sampled indices
    LogGrid grid;

    RadialFunction at(int n) const { return generator(n); }
};

/// Builds a sequence and checks the uniform H^1 bound over the sampled range.
inline RadialSequence make_sequence(std::function<RadialFunction(int)> gen, std::vector<int> n_range,
                                    const LogGrid& grid) {
    RadialSequence seq{std::move(gen), std::move(n_range), grid};
    if (seq.n_range.empty()) throw std::invalid_argument("make_sequence: empty index range");
    for (std::size_t i = 0; i + 1 < seq.n_range.size(); ++i)
        if (seq.n_range[i + 1] <= seq.n_range[i])
            throw std::invalid_argument("make_sequence: indices must increase");
    for (int n : seq.n_range) {
        const auto f = seq.at(n);
        if (!(f.grid == grid)) throw std::invalid_argument("make_sequence: generator grid mismatch");
        const auto nr = norm_report(f);
        if (!std::isfinite(nr.h1)) throw std::invalid_argument("make_sequence: H^1 norm not finite");
    }
    return seq;
}

struct ExtractionConfig {
    std::size_t a0_window = 4;    ///< trailing indices entering the limsup estimate
    std::size_t ref_count = 4;    ///< trailing indices used as the n -> infinity surrogate
    double ortho_threshold = 2.0; ///< minimum |log(beta/alpha)| at the reference index
    std::size_t l_max = 6;
    double rem_tol = 0.02;        ///< stop once the remainder Orlicz estimate drops below this
    double t_max = 4.0;           ///< profile-frame window
    std::size_t t_points = 257;
    double agree_abs = 0.05;      ///< per-cell derivative agreement across indices
    double agree_rel = 0.05;
    double fill_zone = 0.25;      ///< fraction of t_max where contested cells are filled
};

enum class ScaleFlag { ok, no_concentration, degenerate };

struct DetectedScale {
    double scale = 0.0;
    ScaleFlag flag = ScaleFlag::ok;
};

/// limsup surrogate for the Orlicz norms over the trailing window.
inline double estimate_A0(const RadialSequence& seq, const ExtractionConfig& cfg,
                          const OrliczConfig& ocfg = {}) {
    if (cfg.a0_window == 0 || cfg.a0_window > seq.n_range.size())
        throw std::invalid_argument("estimate_A0: window exceeds the sampled range");
    double best = 0.0;
    for (std::size_t i = seq.n_range.size() - cfg.a0_window; i < seq.n_range.size(); ++i)
        best = std::max(best, orlicz_norm(seq.at(seq.n_range[i]), ocfg));
    return best;
}

/// Grid argmax of W(s) = 4 |v(s)/A0|^2 - s over s > 0, leftmost tie-break.
/// Afterwards the detected scale must carry enough amplitude,
/// |v(alpha)| >= (A0/2) sqrt(alpha), else it is flagged degenerate.
inline DetectedScale detect_scale(const RadialFunction& f, double A0) {
    if (!(A0 > 0.0)) throw std::invalid_argument("detect_scale: A0 must be positive");
    const auto& g = f.grid;
    DetectedScale out;
    double best_w = 0.0;
    std::size_t best_i = 0;
    bool found = false;
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double s = g.s(i);
        if (s <= 0.0) continue;
        const double q = f.values[i] / A0;
        const double w = 4.0 * q * q - s;
        if (w > 0.0 && (!found || w > best_w)) {
            best_w = w;
            best_i = i;
            found = true;
        }
    }
    if (!found) {
        out.flag = ScaleFlag::no_concentration;
        return out;
    }
    out.scale = g.s(best_i);
    if (std::fabs(f.values[best_i]) < 0.5 * A0 * std::sqrt(out.scale)) out.flag = ScaleFlag::degenerate;
    return out;
}

/// psi_n(t) = sqrt(2 pi / alpha_n) v_n(alpha_n t) on the profile-frame grid.
inline std::vector<double> rescale_to_profile_frame(const RadialFunction& f, double alpha_n,
                                                    double t_max, std::size_t t_points) {
    if (!(alpha_n > 0.0)) throw std::invalid_argument("rescale_to_profile_frame: scale must be positive");
    const double dt = t_max / static_cast<double>(t_points - 1);
    const double amp = std::sqrt(kTwoPi / alpha_n);
    std::vector<double> psi(t_points);
    for (std::size_t j = 0; j < t_points; ++j)
        psi[j] = amp * f.eval_s(alpha_n * dt * static_cast<double>(j));
    return psi;
}

struct ExtractedProfile {
    Profile profile;
    bool empty = false;
    std::size_t contested_cells = 0;
    bool contested_beyond_fill = false; ///< disagreement outside the fill zone: family not convergent
};

/// Profile estimation across the reference indices. Cell derivatives are
/// averaged pointwise; cells where the indices disagree carry energy that
/// belongs to a different scale, so inside the fill zone they inherit the
/// first agreeing cell above them, keeping later bubbles out of this profile.
/// The result is re-integrated from zero so psi(0) = 0 exactly.
inline ExtractedProfile extract_profile(const std::vector<std::vector<double>>& psi_samples,
                                        const ExtractionConfig& cfg, bool agreement_filter = true) {
    if (psi_samples.empty()) throw std::invalid_argument("extract_profile: need at least one index");
    const std::size_t m = psi_samples.size();
    const std::size_t np = psi_samples.front().size();
    for (const auto& row : psi_samples)
        if (row.size() != np) throw std::invalid_argument("extract_profile: ragged samples");
    const double dt = cfg.t_max / static_cast<double>(np - 1);

    const std::size_t cells = np - 1;
    std::vector<double> mean_d(cells, 0.0);
    std::vector<char> contested(cells, 0);
    for (std::size_t j = 0; j < cells; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = (psi_samples[k][j + 1] - psi_samples[k][j]) / dt;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            acc += d;
        }
        mean_d[j] = acc / static_cast<double>(m);
        if (agreement_filter && m > 1 && hi - lo > cfg.agree_abs + cfg.agree_rel * std::fabs(mean_d[j]))
            contested[j] = 1;
    }

    ExtractedProfile out;
    const auto fill_last = static_cast<std::size_t>(cfg.fill_zone * static_cast<double>(cells));
    for (std::size_t j = 0; j < cells; ++j) {
        if (!contested[j]) continue;
        ++out.contested_cells;
        if (j >= fill_last) {
            out.contested_beyond_fill = true;
            continue;
        }
        std::size_t k = j + 1;
        while (k < cells && contested[k]) ++k;
        mean_d[j] = k < cells ? mean_d[k] : 0.0;
    }

    std::vector<double> psi(np, 0.0);
    for (std::size_t j = 0; j < cells; ++j) psi[j + 1] = psi[j] + mean_d[j] * dt;
    out.profile = Profile(cfg.t_max, std::move(psi));
    if (out.profile.grad_norm() == 0.0) out.empty = true;
    return out;
}

/// r_n = v_n - sqrt(alpha_n / 2 pi) psi(s / alpha_n) on the original grid.
inline RadialFunction subtract_bubble(const RadialFunction& f, double alpha_n, const Profile& psi) {
    if (!(alpha_n > 0.0)) throw std::invalid_argument("subtract_bubble: scale must be positive");
    const auto& g = f.grid;
    const double amp = std::sqrt(alpha_n / kTwoPi);
    std::vector<double> v(g.n_points);
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double s = g.s(i);
        v[i] = f.values[i] - (s > 0.0 ? amp * psi(s / alpha_n) : 0.0);
    }
    return RadialFunction(g, std::move(v));
}

struct OrthogonalityReport {
    bool orthogonal = false;
    double margin = 0.0; ///< |log(beta/alpha)| at the reference index
};

/// Two scale families are treated as orthogonal when the log-ratio clears the
/// threshold at the reference index and does not shrink along the tail.
inline OrthogonalityReport check_orthogonality(const std::vector<double>& alpha,
                                               const std::vector<double>& beta, double threshold) {
    if (alpha.size() != beta.size() || alpha.empty())
        throw std::invalid_argument("check_orthogonality: mismatched scale samples");
    const std::size_t n = alpha.size();
    auto ratio = [&](std::size_t i) { return std::fabs(std::log(beta[i] / alpha[i])); };
    OrthogonalityReport rep;
    rep.margin = ratio(n - 1);
    bool growing = true;
    for (std::size_t i = n >= 3 ? n - 3 : 0; i + 1 < n; ++i)
        if (ratio(i + 1) < ratio(i) - 1e-9) growing = false;
    rep.orthogonal = rep.margin >= threshold && growing;
    return rep;
}

struct CompactnessReport {
    std::vector<double> R_list;
    std::vector<double> sup_tail; ///< sup over the trailing indices of the tail mass, per R
    bool pass = false;
};

/// Tail L^2 mass matrix over (n, R); compact families push the trailing sup
/// below tolerance as R grows.
inline CompactnessReport check_compactness(const RadialSequence& seq, const std::vector<double>& R_list,
                                           double tol = 1e-8, std::size_t window = 4) {
    if (R_list.empty()) throw std::invalid_argument("check_compactness: empty R list");
    for (std::size_t i = 0; i + 1 < R_list.size(); ++i)
        if (R_list[i + 1] <= R_list[i]) throw std::invalid_argument("check_compactness: R must increase");
    CompactnessReport rep;
    rep.R_list = R_list;
    window = std::min(window, seq.n_range.size());
    for (double R : R_list) {
        double sup = 0.0;
        for (std::size_t i = seq.n_range.size() - window; i < seq.n_range.size(); ++i)
            sup = std::max(sup, tail_l2_mass(seq.at(seq.n_range[i]), R).value);
        rep.sup_tail.push_back(sup);
    }
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < rep.sup_tail.size(); ++i)
        if (rep.sup_tail[i + 1] > rep.sup_tail[i] + 1e-12) monotone = false;
    rep.pass = monotone && rep.sup_tail.back() <= tol;
    return rep;
}

struct DecompositionLevel {
    std::vector<double> scale_samples; ///< detected alpha_n over the reference indices
    Profile profile;
    double profile_grad_norm = 0.0;
    double remainder_orlicz = 0.0;  ///< A_l estimate after subtracting this level
    double stability_defect = 0.0;  ///< gradient Pythagoras residual at the reference index
    bool merged = false;
    bool degenerate_scale = false;
};

struct DecompositionResult {
    double a0_estimate = 0.0;
    std::vector<DecompositionLevel> levels;
    bool budget_ok = true; ///< sum A_l^2 within the gradient budget
};

/// The extraction loop: estimate the Orlicz limsup, detect a scale per
/// reference index, estimate the shared profile, subtract, and repeat until
/// the remainder estimate drops below rem_tol or l_max levels are found.
/// Non-orthogonal detections are merged into the earlier level by
/// re-extracting its profile from the combined field with plain averaging.
inline DecompositionResult decompose(const RadialSequence& seq, const ExtractionConfig& cfg,
                                     const OrliczConfig& ocfg = {}) {
    DecompositionResult result;
    if (cfg.ref_count == 0 || cfg.ref_count > seq.n_range.size())
        throw std::invalid_argument("decompose: ref_count exceeds the sampled range");

    const auto compact = check_compactness(seq, {1.0, 2.0, 4.0}, 1e-6,
                                           std::min(cfg.ref_count, seq.n_range.size()));
    if (!compact.pass)
        throw std::invalid_argument("decompose: sequence leaks L^2 mass at infinity");

    result.a0_estimate = estimate_A0(seq, cfg, ocfg);
    if (result.a0_estimate <= 0.0) return result;

    std::vector<int> ref(seq.n_range.end() - static_cast<std::ptrdiff_t>(cfg.ref_count),
                         seq.n_range.end());
    std::vector<RadialFunction> rem;
    rem.reserve(ref.size());
    for (int n : ref) rem.push_back(seq.at(n));
    const std::size_t ref_last = ref.size() - 1;
    const double grad_u = grad_l2_norm(rem[ref_last]);
    const double grad_u_sq = grad_u * grad_u;

    double A = result.a0_estimate;
    std::vector<double> a_before; ///< A entering each extraction, for the budget diagnostic
    std::size_t guard = 2 * cfg.l_max + 2;
    while (result.levels.size() < cfg.l_max && A > cfg.rem_tol && guard-- > 0) {
        std::vector<double> scales(ref.size());
        bool degenerate = false;
        bool stop = false;
        for (std::size_t k = 0; k < ref.size(); ++k) {
            const auto det = detect_scale(rem[k], A);
            if (det.flag == ScaleFlag::no_concentration) { stop = true; break; }
            if (det.flag == ScaleFlag::degenerate) degenerate = true;
            scales[k] = det.scale;
        }
        if (stop) break;

        a_before.push_back(A);

        // merge against an earlier level when the new scale is not orthogonal
        std::ptrdiff_t merge_with = -1;
        for (std::size_t j = 0; j < result.levels.size(); ++j) {
            const auto ortho =
                check_orthogonality(result.levels[j].scale_samples, scales, cfg.ortho_threshold);
            if (!ortho.orthogonal) { merge_with = static_cast<std::ptrdiff_t>(j); break; }
        }
        std::size_t touched;
        if (merge_with >= 0) {
            touched = static_cast<std::size_t>(merge_with);
            auto& lvl = result.levels[touched];
            std::vector<std::vector<double>> samples(ref.size());
            for (std::size_t k = 0; k < ref.size(); ++k) {
                auto w = rem[k];
                const double amp = std::sqrt(lvl.scale_samples[k] / kTwoPi);
                for (std::size_t i = 0; i < w.grid.n_points; ++i) {
                    const double s = w.grid.s(i);
                    if (s > 0.0) w.values[i] += amp * lvl.profile(s / lvl.scale_samples[k]);
                }
                samples[k] =
                    rescale_to_profile_frame(w, lvl.scale_samples[k], cfg.t_max, cfg.t_points);
                rem[k] = std::move(w);
            }
            const auto merged = extract_profile(samples, cfg, /*agreement_filter=*/false);
            if (merged.empty) throw StagnationError("decompose: merged profile vanished");
            lvl.profile = merged.profile;
            lvl.profile_grad_norm = merged.profile.grad_norm();
            lvl.merged = true;
            for (std::size_t k = 0; k < ref.size(); ++k)
                rem[k] = subtract_bubble(rem[k], lvl.scale_samples[k], lvl.profile);
        } else {
            std::vector<std::vector<double>> samples(ref.size());
            for (std::size_t k = 0; k < ref.size(); ++k)
                samples[k] = rescale_to_profile_frame(rem[k], scales[k], cfg.t_max, cfg.t_points);
            const auto extracted = extract_profile(samples, cfg);
            if (extracted.empty)
                throw StagnationError("decompose: extracted profile vanished at level " +
                                      std::to_string(result.levels.size() + 1));
            if (extracted.contested_beyond_fill)
                throw StagnationError("decompose: reference indices disagree outside the fill zone");
            DecompositionLevel lvl;
            lvl.scale_samples = scales;
            lvl.profile = extracted.profile;
            lvl.profile_grad_norm = extracted.profile.grad_norm();
            lvl.degenerate_scale = degenerate;
            for (std::size_t k = 0; k < ref.size(); ++k)
                rem[k] = subtract_bubble(rem[k], scales[k], lvl.profile);
            result.levels.push_back(std::move(lvl));
            touched = result.levels.size() - 1;
        }

        double A_new = 0.0;
        for (const auto& r : rem) A_new = std::max(A_new, orlicz_norm(r, ocfg));
        if (A_new >= A - 1e-12)
            throw StagnationError("decompose: remainder Orlicz did not decrease (" +
                                  std::to_string(A) + " -> " + std::to_string(A_new) + ")");
        A = A_new;

        double grad_sum = 0.0;
        for (const auto& lvl : result.levels)
            grad_sum += lvl.profile_grad_norm * lvl.profile_grad_norm;
        const double grad_r = grad_l2_norm(rem[ref_last]);
        auto& lvl = result.levels[touched];
        lvl.remainder_orlicz = A;
        lvl.stability_defect = std::fabs(grad_u_sq - grad_sum - grad_r * grad_r);
    }

    // diagnostic: the Orlicz estimates entering each extraction satisfy
    // sum A_l^2 <= (2/pi) ||grad u||^2 up to the discretisation slack
    double budget = 0.0;
    for (double a : a_before) budget += a * a;
    result.budget_ok = budget <= (2.0 / kPi) * grad_u_sq * 2.0 + 0.5;
    return result;
}

} // namespace orlab
