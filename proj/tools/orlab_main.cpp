// Command-line driver: every computation in the library exposed as a
// reproducible experiment with CSV output.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 numerical non-convergence, 4 physical blow-up.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "orlab/asymptotics.hpp"
#include "orlab/csv.hpp"
#include "orlab/decomposition.hpp"
#include "orlab/errors.hpp"
#include "orlab/grid.hpp"
#include "orlab/inequalities.hpp"
#include "orlab/klein_gordon.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/sequences.hpp"
#include "orlab/verify.hpp"

namespace {

using namespace orlab;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBlowup = 4;

/// Relative output paths land in ORLAB_OUTDIR when it is set.
std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    if (const char* dir = std::getenv("ORLAB_OUTDIR")) {
        std::filesystem::create_directories(dir);
        return (std::filesystem::path(dir) / p).string();
    }
    return path;
}

/// Output sink: file when requested, stdout otherwise. Binary mode keeps LF.
struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;

    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(resolve_output(path), std::ios::binary);
            if (!*file) throw std::invalid_argument("cannot open output file: " + path);
            os = file.get();
        }
    }
};

/// Deterministic parallel map: results land in slot order no matter the
/// scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, jobs);
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- norm ----

struct NormOpts {
    std::string family = "lions";
    double alpha = 10.0;
    double r_alpha = 1.0;
    double a = 1.0, b = 1.0;
    std::string profile = "L";
    std::string input;
    double ds = 1e-3;
    std::string output;
};

RadialFunction load_radial_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> ss, vs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad radial CSV row: " + line);
        ss.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (ss.size() < 2) throw std::invalid_argument("radial CSV needs at least two samples");
    const double ds = ss[1] - ss[0];
    for (std::size_t i = 0; i + 1 < ss.size(); ++i)
        if (std::fabs(ss[i + 1] - ss[i] - ds) > 1e-9 * std::max(1.0, std::fabs(ds)))
            throw std::invalid_argument("radial CSV grid must be uniform");
    return RadialFunction(LogGrid(ss.front(), ss.back(), ss.size()), std::move(vs));
}

int cmd_norm(const NormOpts& o) {
    RadialFunction f;
    double param = o.alpha;
    if (o.family == "lions") {
        f = sample_from_log_closure(lions_f_log(o.alpha), family_grid(o.alpha, o.ds));
    } else if (o.family == "scaled") {
        const double smin = std::min(-2.0, -std::log(o.r_alpha) - 1.0);
        const double smax = std::max(4.0 * o.alpha + std::fabs(std::log(o.r_alpha)), 50.0);
        const auto n = static_cast<std::size_t>(std::llround((smax - smin) / o.ds)) + 1;
        f = sample_from_log_closure(scaled_g_log(o.alpha, o.r_alpha), LogGrid(smin, smax, n));
    } else if (o.family == "sum") {
        f = sample_from_log_closure(sum_h_log(o.a, o.b, o.alpha),
                                    family_grid(o.alpha * o.alpha, o.ds));
    } else if (o.family == "bubble") {
        const Profile psi = o.profile == "gk" ? gk_profile() : canonical_profile();
        double sup = 0.0;
        for (double v : psi.values()) sup = std::max(sup, std::fabs(v));
        ScaledBubble bub{[&](int) { return o.alpha; }, psi};
        f = bubble_to_function(bub, 0,
                               family_grid(o.alpha * std::max(psi.t_max(), sup * sup), o.ds));
    } else if (o.family == "file") {
        f = load_radial_csv(o.input);
        param = 0.0;
    } else {
        throw std::invalid_argument("unknown family: " + o.family);
    }
    Sink sink(o.output);
    CsvWriter csv(*sink.os, {"family", "param", "l2", "grad_l2", "orlicz"});
    const auto nr = norm_report(f);
    csv.row_mixed({o.family, csv_number(param), csv_number(nr.l2), csv_number(nr.grad_l2),
                   csv_number(orlicz_norm(f))});
    return kExitOk;
}

// --------------------------------------------------------------- sweep ----

struct SweepOpts {
    std::string probe;
    std::vector<double> alphas;
    std::vector<double> betas;
    double alpha_exp = 2.0 * kTwoPi;
    double a = 1.0, b = 1.0;
    double p = 1.0, q = 1.0;
    double exp_a = 1.0, exp_b = 2.0; ///< scale exponents for cross-scale
    bool assert_converged = false;
    unsigned jobs = 1;
    std::string output;
};

struct SweepRow {
    double parameter, observed, target;
};

int cmd_sweep(const SweepOpts& o) {
    std::vector<SweepRow> rows;
    bool converged = true;

    auto trend_rows = [&](const TrendReport& t) {
        for (std::size_t i = 0; i < t.parameters.size(); ++i)
            rows.push_back({t.parameters[i], t.observed[i],
                            t.target_is_infinite ? std::numeric_limits<double>::infinity() : t.target});
        converged = t.converged;
    };

    if (o.probe == "orlicz-limit") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        trend_rows(orlicz_limit_sweep(o.alphas));
    } else if (o.probe == "small-alpha") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        for (double a : o.alphas) {
            const double norm = orlicz_norm(sample_from_closure(lions_f(a), family_grid(a)));
            rows.push_back({a, norm, std::pow(a, 0.25)});
            converged = converged && norm <= std::pow(a, 0.25);
        }
    } else if (o.probe == "tail-integrals") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        std::vector<TailIntegrals> ts(o.alphas.size());
        parallel_for(o.alphas.size(), o.jobs, [&](std::size_t i) { ts[i] = tail_integrals(o.alphas[i]); });
        for (std::size_t i = 0; i < o.alphas.size(); ++i) {
            rows.push_back({o.alphas[i], ts[i].I, 1.0});
            rows.push_back({o.alphas[i], ts[i].J, 1.0 / 3.0});
        }
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            converged = converged && std::fabs(ts[i + 1].I - 1.0) < std::fabs(ts[i].I - 1.0) &&
                        std::fabs(ts[i + 1].J - 1.0 / 3.0) < std::fabs(ts[i].J - 1.0 / 3.0);
    } else if (o.probe == "pq") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        double prev = std::numeric_limits<double>::infinity();
        for (double a : o.alphas) {
            const double v = pq_integral(o.p, o.q, a);
            rows.push_back({a, v, 0.0});
            converged = converged && v < prev;
            prev = v;
        }
    } else if (o.probe == "dirac-gradient" || o.probe == "dirac-exponential") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        const auto kind = o.probe == "dirac-gradient" ? DiracKind::gradient : DiracKind::exponential;
        const double target = kind == DiracKind::gradient ? 1.0 : kTwoPi;
        auto phi = [](double r) { return std::exp(-r * r); };
        std::vector<double> vals(o.alphas.size());
        parallel_for(o.alphas.size(), o.jobs,
                     [&](std::size_t i) { vals[i] = dirac_test(o.alphas[i], phi, kind); });
        for (std::size_t i = 0; i < o.alphas.size(); ++i) rows.push_back({o.alphas[i], vals[i], target});
        converged = std::fabs(vals.back() - target) <= 0.1 * target;
    } else if (o.probe == "moser") {
        if (o.betas.empty()) throw std::invalid_argument("sweep: empty beta list");
        std::vector<double> ratios(o.betas.size());
        parallel_for(o.betas.size(), o.jobs, [&](std::size_t i) {
            ratios[i] = moser_ratio_probe(o.alpha_exp, o.betas[i]).ratio;
        });
        // small tolerance so 12.566 counts as the critical 4 pi
        const bool sharp = o.alpha_exp >= 2.0 * kTwoPi * (1.0 - 1e-3);
        for (std::size_t i = 0; i < o.betas.size(); ++i)
            rows.push_back({o.betas[i], ratios[i],
                            sharp ? std::numeric_limits<double>::infinity() : 0.0});
        if (sharp) {
            for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
                converged = converged && ratios[i + 1] > ratios[i];
        } else {
            double lo = 1e300, hi = 0.0;
            for (double r : ratios) { lo = std::min(lo, r); hi = std::max(hi, r); }
            converged = hi / lo < 3.0;
        }
    } else if (o.probe == "sum-max") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty alpha list");
        trend_rows(sum_orlicz_max_check(o.a, o.b, o.alphas));
    } else if (o.probe == "cross-scale") {
        if (o.alphas.empty()) throw std::invalid_argument("sweep: empty index list");
        auto step = [](double t) { return t >= 0.0 && t <= 1.0 ? 1.0 : 0.0; };
        std::vector<int> ns(o.alphas.begin(), o.alphas.end());
        const double pa = o.exp_a, pb = o.exp_b;
        trend_rows(cross_scale_vanishing(
            step, 1.0, step, 1.0, [pa](int n) { return std::pow(n, pa); },
            [pb](int n) { return std::pow(n, pb); }, ns));
    } else {
        throw std::invalid_argument("unknown probe: " + o.probe);
    }

    Sink sink(o.output);
    CsvWriter csv(*sink.os, {"parameter", "observed", "target", "converged"});
    for (const auto& r : rows)
        csv.row_mixed({csv_number(r.parameter), csv_number(r.observed), csv_number(r.target),
                       converged ? "1" : "0"});
    if (o.assert_converged && !converged) {
        std::cerr << "sweep: convergence assertion failed for probe " << o.probe << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// ----------------------------------------------------------- decompose ----

struct DecomposeOpts {
    std::string seq = "single";
    int nmax = 40;
    std::vector<double> exponents;
    double rem_tol = 0.02;
    double ortho_threshold = 2.0;
    std::size_t l_max = 6;
    std::string out_dir = ".";
    std::string output;
};

int cmd_decompose(const DecomposeOpts& o) {
    RadialSequence seq = o.seq == "custom"
                             ? make_power_sequence(o.exponents, o.nmax)
                             : make_named_sequence(sequence_kind_from_name(o.seq), o.nmax);
    ExtractionConfig cfg;
    cfg.rem_tol = o.rem_tol;
    cfg.ortho_threshold = o.ortho_threshold;
    cfg.l_max = o.l_max;
    const auto dec = decompose(seq, cfg);

    const auto dir = std::filesystem::path(resolve_output(o.out_dir));
    std::filesystem::create_directories(dir);
    Sink sink(o.output);
    CsvWriter csv(*sink.os,
                  {"level", "scale_at_ref", "profile_grad_norm", "remainder_orlicz",
                   "stability_defect", "merged"});
    for (std::size_t j = 0; j < dec.levels.size(); ++j) {
        const auto& lvl = dec.levels[j];
        csv.row_mixed({csv_number(static_cast<double>(j + 1)), csv_number(lvl.scale_samples.back()),
                       csv_number(lvl.profile_grad_norm), csv_number(lvl.remainder_orlicz),
                       csv_number(lvl.stability_defect), lvl.merged ? "1" : "0"});
        std::ofstream pf(dir / ("profile_" + std::to_string(j + 1) + ".csv"), std::ios::binary);
        CsvWriter pcsv(pf, {"t", "psi"});
        const auto& prof = lvl.profile;
        for (std::size_t i = 0; i < prof.size(); ++i)
            pcsv.row({prof.dt() * static_cast<double>(i), prof.values()[i]});
    }
    std::cerr << "a0_estimate = " << csv_number(dec.a0_estimate) << ", levels = " << dec.levels.size()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- wave ----

struct WaveOpts {
    std::string data = "lions";
    double c = 0.3;
    double alpha = 8.0;
    double T = 1.0;
    double R = 2.5;
    std::size_t nr = 4096;
    double cfl = 0.5;
    std::size_t snapshots = 10;
    std::string output;
    std::string dump_fields; ///< optional (time,node,u,ut) trajectory export
};

int cmd_wave(const WaveOpts& o) {
    if (o.data != "lions") throw std::invalid_argument("unknown data family: " + o.data);
    auto f = lions_f(o.alpha);
    const double c = o.c;
    CauchyData data{[c, f](double r) { return c * f(r); }, [](double) { return 0.0; }};
    const RGrid grid(o.R, o.nr);
    EvolveOptions opt;
    opt.cfl = o.cfl;
    check_propagation_window(grid, o.T, opt); // usage error before any stepping

    const auto regime = classify_regime(data, grid);
    const auto e0 = total_energy(sample_state(data, grid), grid);
    std::cout << "# regime=" << regime_name(regime) << " E0=" << csv_number(e0.total) << "\n";

    const double dt = opt.cfl * grid.dr();
    WaveStepper nl(data, grid, WaveMode::nonlinear, dt);
    WaveStepper li(data, grid, WaveMode::linear, dt);
    const auto steps = static_cast<std::size_t>(std::ceil(o.T / dt));
    const std::size_t every = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, o.snapshots));

    Sink sink(o.output);
    CsvWriter csv(*sink.os, {"t", "E_total", "E_c_gap", "orlicz_snapshot"});
    std::unique_ptr<std::ofstream> dump;
    std::unique_ptr<CsvWriter> dump_csv;
    if (!o.dump_fields.empty()) {
        dump = std::make_unique<std::ofstream>(resolve_output(o.dump_fields), std::ios::binary);
        if (!*dump) throw std::invalid_argument("cannot open field dump: " + o.dump_fields);
        dump_csv = std::make_unique<CsvWriter>(
            *dump, std::vector<std::string>{"time", "node", "u", "ut"});
    }
    WaveState diff;
    diff.u.resize(grid.n_r);
    diff.ut.resize(grid.n_r);
    auto emit = [&]() {
        for (std::size_t i = 0; i < grid.n_r; ++i) {
            diff.u[i] = nl.state().u[i] - li.state().u[i];
            diff.ut[i] = nl.state().ut[i] - li.state().ut[i];
        }
        csv.row({nl.state().time, total_energy(nl.state(), grid).total,
                 total_energy(diff, grid).quadratic, orlicz_snapshot_norm(nl.state(), grid)});
        if (dump_csv) {
            const auto& st = nl.state();
            for (std::size_t i = 0; i < grid.n_r; ++i)
                dump_csv->row({st.time, static_cast<double>(i), st.u[i], st.ut[i]});
        }
    };
    emit();
    std::size_t k = 0;
    while (nl.state().time < o.T - 1e-12) {
        const double h = std::min(dt, o.T - nl.state().time);
        nl.step(h);
        li.step(h);
        if (++k % every == 0 || nl.state().time >= o.T - 1e-12) emit();
    }
    return kExitOk;
}

// -------------------------------------------------------------- verify ----

int cmd_verify(const std::vector<std::string>& only, unsigned jobs, std::uint64_t seed) {
    const auto registry = verify::criteria(seed);
    std::vector<const verify::Criterion*> todo;
    for (const auto& c : registry) {
        if (only.empty()) {
            todo.push_back(&c);
        } else {
            for (const auto& name : only)
                if (name == c.name) todo.push_back(&c);
        }
    }
    if (!only.empty() && todo.size() != only.size()) {
        std::cerr << "verify: unknown criterion name; available:";
        for (const auto& c : registry) std::cerr << " " << c.name;
        std::cerr << "\n";
        return kExitUsage;
    }
    std::vector<verify::CriterionResult> results(todo.size());
    parallel_for(todo.size(), jobs, [&](std::size_t i) { results[i] = todo[i]->run(); });
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "\n";
        for (const auto& d : r.details) std::cout << d << "\n";
        all = all && r.pass;
    }
    return all ? kExitOk : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for radial concentration analysis in the 2D Orlicz space"};
    app.require_subcommand(1);
    app.fallthrough(); // --config may follow the subcommand name
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");
    app.allow_config_extras(false);

    NormOpts n;
    auto* norm = app.add_subcommand("norm", "L2 / gradient / Orlicz norms of a named family");
    norm->add_option("--family", n.family, "lions | scaled | sum | bubble | file");
    norm->add_option("--alpha", n.alpha, "concentration rate")->check(CLI::PositiveNumber);
    norm->add_option("--r-alpha", n.r_alpha, "dilation factor for the scaled family")
        ->check(CLI::PositiveNumber);
    norm->add_option("--a", n.a, "first coefficient of the sum family");
    norm->add_option("--b", n.b, "second coefficient of the sum family");
    norm->add_option("--profile", n.profile, "bubble profile: L | gk");
    norm->add_option("--input", n.input, "radial CSV (s,v) for the file family");
    norm->add_option("--ds", n.ds, "log-grid spacing")->check(CLI::PositiveNumber);
    norm->add_option("--output", n.output, "CSV output path (stdout when omitted)");

    SweepOpts s;
    auto* sweep = app.add_subcommand("sweep", "asymptotic probes over a parameter sweep");
    sweep->add_option("--probe", s.probe,
                      "orlicz-limit | small-alpha | tail-integrals | pq | dirac-gradient | "
                      "dirac-exponential | moser | sum-max | cross-scale")
        ->required();
    sweep->add_option("--alphas", s.alphas, "sweep parameters")->delimiter(',');
    sweep->add_option("--betas", s.betas, "moser family parameters")->delimiter(',');
    sweep->add_option("--alpha-exp", s.alpha_exp, "moser exponent coefficient")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--a", s.a, "sum-max first coefficient");
    sweep->add_option("--b", s.b, "sum-max second coefficient");
    sweep->add_option("--p", s.p, "pq integral p")->check(CLI::PositiveNumber);
    sweep->add_option("--q", s.q, "pq integral q")->check(CLI::PositiveNumber);
    sweep->add_option("--exp-a", s.exp_a, "cross-scale exponent of alpha_n = n^p");
    sweep->add_option("--exp-b", s.exp_b, "cross-scale exponent of beta_n = n^q");
    sweep->add_flag("--assert", s.assert_converged, "exit 3 when the convergence flag is false");
    sweep->add_option("--jobs", s.jobs, "parallel workers (deterministic output)");
    sweep->add_option("--output", s.output, "CSV output path");

    DecomposeOpts d;
    auto* dec = app.add_subcommand("decompose", "scale-and-profile extraction of a named sequence");
    dec->add_option("--seq", d.seq, "single | two-orthogonal | two-nonorthogonal | custom");
    dec->add_option("--nmax", d.nmax, "largest sampled index")->check(CLI::Range(10, 100));
    dec->add_option("--exponents", d.exponents, "scale exponents for the custom family")
        ->delimiter(',');
    dec->add_option("--rem-tol", d.rem_tol, "stop threshold on the remainder Orlicz estimate")
        ->check(CLI::PositiveNumber);
    dec->add_option("--ortho-threshold", d.ortho_threshold, "orthogonality margin")
        ->check(CLI::PositiveNumber);
    dec->add_option("--l-max", d.l_max, "maximum number of levels");
    dec->add_option("--out-dir", d.out_dir, "directory for per-level profile CSVs");
    dec->add_option("--output", d.output, "summary CSV output path");

    WaveOpts w;
    auto* wave = app.add_subcommand("wave", "Klein-Gordon evolution with linearizability gap");
    wave->add_option("--data", w.data, "Cauchy data family (lions)");
    wave->add_option("--c", w.c, "data amplitude");
    wave->add_option("--alpha", w.alpha, "concentration rate")->check(CLI::PositiveNumber);
    wave->add_option("--T", w.T, "final time")->check(CLI::PositiveNumber);
    wave->add_option("--R", w.R, "domain radius")->check(CLI::PositiveNumber);
    wave->add_option("--nr", w.nr, "radial nodes")->check(CLI::Range(3, 10000000));
    wave->add_option("--cfl", w.cfl, "dt / dr ratio, at most 0.5")->check(CLI::PositiveNumber);
    wave->add_option("--snapshots", w.snapshots, "rows in the output CSV");
    wave->add_option("--output", w.output, "CSV output path");
    wave->add_option("--dump-fields", w.dump_fields,
                     "write (time,node,u,ut) trajectory samples to this CSV");

    std::vector<std::string> only;
    unsigned verify_jobs = 1;
    std::uint64_t verify_seed = verify::kDefaultSeed;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    verify_cmd->add_option("--only", only, "restrict to named criteria (repeatable)");
    verify_cmd->add_option("--jobs", verify_jobs, "parallel workers");
    verify_cmd->add_option("--seed", verify_seed, "seed for the randomized property suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*norm) return cmd_norm(n);
        if (*sweep) return cmd_sweep(s);
        if (*dec) return cmd_decompose(d);
        if (*wave) return cmd_wave(w);
        if (*verify_cmd) return cmd_verify(only, verify_jobs, verify_seed);
    } catch (const BlowupError& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const StagnationError& e) {
        std::cerr << "stagnation: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const OverflowError& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SamplingError& e) {
        std::cerr << "sampling: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
