#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "orlab/asymptotics.hpp"
#include "orlab/grid.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"

using namespace orlab;
using Catch::Approx;

TEST_CASE("orlicz_limit_sweep stays inside the two-sided bracket") {
    const OrliczConfig cfg;
    const auto t = orlicz_limit_sweep({10.0, 20.0, 40.0}, cfg, 0.1, 2e-3);
    CHECK(t.target == Approx(0.282095).epsilon(1e-6));
    for (std::size_t i = 0; i < t.parameters.size(); ++i) {
        const double a = t.parameters[i];
        CHECK(t.observed[i] >= lions_orlicz_lower_bound(a, cfg.kappa) - cfg.bisect_tol);
        CHECK(t.observed[i] <= lions_orlicz_upper_bound(a) + cfg.bisect_tol);
    }
    CHECK(t.converged);
    SECTION("tiny alpha obeys the quartic-root bound") {
        const auto f = sample_from_closure(lions_f(0.01), family_grid(0.01));
        CHECK(orlicz_norm(f) <= std::pow(0.01, 0.25));
    }
}

TEST_CASE("tail integrals approach (1, 1/3)") {
    const auto t100 = tail_integrals(100.0);
    CHECK(std::fabs(t100.I - 1.0) <= 0.05);
    CHECK(std::fabs(t100.J - 1.0 / 3.0) <= 0.02);
    SECTION("raw-variable quadrature agrees at moderate alpha") {
        for (double a : {5.0, 20.0}) {
            const auto fast = tail_integrals(a);
            const auto raw = tail_integrals_raw(a);
            CHECK(fast.I == Approx(raw.I).epsilon(1e-8));
            CHECK(fast.J == Approx(raw.J).epsilon(1e-8));
        }
    }
    SECTION("monotone approach for large alpha") {
        const auto a = tail_integrals(25.0);
        const auto b = tail_integrals(50.0);
        CHECK(std::fabs(b.I - 1.0) < std::fabs(a.I - 1.0));
        CHECK(std::fabs(t100.I - 1.0) < std::fabs(b.I - 1.0));
        CHECK(std::fabs(b.J - 1.0 / 3.0) < std::fabs(a.J - 1.0 / 3.0));
        CHECK(std::fabs(t100.J - 1.0 / 3.0) < std::fabs(b.J - 1.0 / 3.0));
    }
}

TEST_CASE("pq_integral vanishes for admissible exponents") {
    CHECK(pq_integral(1.0, 1.0, 20.0) < 1e-3);
    SECTION("decreasing in alpha") {
        CHECK(pq_integral(1.0, 1.0, 15.0) < pq_integral(1.0, 1.0, 10.0));
        CHECK(pq_integral(1.0, 1.0, 20.0) < pq_integral(1.0, 1.0, 15.0));
    }
    SECTION("slow decay near p = 2") {
        CHECK(pq_integral(1.9, 1.0, 30.0) < pq_integral(1.9, 1.0, 15.0));
    }
    CHECK_THROWS_AS(pq_integral(2.0, 1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(pq_integral(1.0, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("dirac_test concentration") {
    auto gauss = [](double r) { return std::exp(-r * r); };
    SECTION("gradient mass approaches phi(0)") {
        const double v = dirac_test(100.0, gauss, DiracKind::gradient);
        CHECK(std::fabs(v - 1.0) <= 0.05);
        CHECK(v <= 1.0); // never exceeds max phi times the unit gradient mass
    }
    SECTION("exponential mass approaches 2 pi phi(0)") {
        const double v = dirac_test(100.0, gauss, DiracKind::exponential);
        CHECK(std::fabs(v - kTwoPi) <= 0.1 * kTwoPi);
    }
    SECTION("test functions vanishing at the origin give zero mass") {
        auto ring = [](double r) { return r * r * std::exp(-r * r); };
        CHECK(std::fabs(dirac_test(100.0, ring, DiracKind::gradient)) <= 0.01);
        CHECK(std::fabs(dirac_test(100.0, ring, DiracKind::exponential)) <= 0.01 * kTwoPi);
    }
}

TEST_CASE("profile_norm_bounds") {
    const OrliczConfig cfg;
    SECTION("canonical profile pins the limit") {
        const auto psi = canonical_profile();
        const auto pb = profile_norm_bounds(psi, {20.0, 40.0}, cfg, 0.05, 2e-3);
        CHECK(pb.lower == Approx(1.0 / std::sqrt(2.0 * kTwoPi)).epsilon(1e-9));
        CHECK(pb.upper == Approx(pb.lower).epsilon(1e-9));
        CHECK(pb.bracket_ok);
    }
    SECTION("gk profile bounds") {
        const auto psi = gk_profile();
        const auto pb = profile_norm_bounds(psi, {16.0, 32.0}, cfg, 0.1, 2e-3);
        const double want_lower = (1.0 + 1.0 / std::sqrt(2.0)) / std::sqrt(2.0 * kTwoPi);
        CHECK(pb.lower == Approx(want_lower).epsilon(1e-6));
        // dense oracle for sup psi / sqrt(t) over the closure
        double oracle = 0.0;
        for (int i = 1; i <= 100000; ++i) {
            const double t = 8.0 * i / 100000.0;
            oracle = std::max(oracle, psi(t) / std::sqrt(t));
        }
        CHECK(psi.sup_ratio() == Approx(oracle).epsilon(1e-6));
        CHECK(pb.bracket_ok);
    }
    SECTION("zero profile collapses everything") {
        const Profile zero(1.0, std::vector<double>(65, 0.0));
        const auto pb = profile_norm_bounds(zero, {10.0}, cfg);
        CHECK(pb.lower == 0.0);
        CHECK(pb.upper == 0.0);
        CHECK(pb.observed.observed.front() == 0.0);
    }
}

TEST_CASE("sum_orlicz_max_check approaches the max law") {
    const OrliczConfig cfg;
    SECTION("(1,0) reduces to the single-bubble limit") {
        const auto t = sum_orlicz_max_check(1.0, 0.0, {6.0, 10.0}, cfg, 0.2, 5e-3);
        CHECK(t.target == Approx(1.0 / std::sqrt(2.0 * kTwoPi)).epsilon(1e-12));
        CHECK(std::fabs(t.observed.back() - t.target) <= 0.1 * t.target);
    }
    SECTION("(1,2) trend toward 2/sqrt(4 pi)") {
        const auto t = sum_orlicz_max_check(1.0, 2.0, {6.0, 10.0, 16.0}, cfg, 0.25, 5e-3);
        CHECK(t.target == Approx(0.564190).epsilon(1e-5));
        CHECK(std::fabs(t.observed[2] - t.target) < std::fabs(t.observed[0] - t.target));
        CHECK(std::fabs(t.observed.back() - t.target) <= 0.25 * t.target);
    }
}

TEST_CASE("cross_scale_vanishing") {
    auto step = [](double t) { return t >= 0.0 && t <= 1.0 ? 1.0 : 0.0; };
    SECTION("orthogonal powers decay like sqrt(alpha/beta)") {
        const auto t = cross_scale_vanishing(
            step, 1.0, step, 1.0, [](int n) { return double(n); },
            [](int n) { return double(n) * n; }, {10, 100, 1000});
        for (std::size_t i = 0; i < t.parameters.size(); ++i) {
            const double n = t.parameters[i];
            CHECK(t.observed[i] == Approx(1.0 / std::sqrt(n)).epsilon(1e-9));
        }
        CHECK(t.converged);
    }
    SECTION("zero factor gives exactly zero") {
        auto zero = [](double) { return 0.0; };
        const auto t = cross_scale_vanishing(step, 1.0, zero, 1.0, [](int n) { return double(n); },
                                             [](int n) { return double(n) * n; }, {10, 20});
        CHECK(t.observed[0] == 0.0);
        CHECK(t.observed[1] == 0.0);
    }
    SECTION("non-orthogonal scales keep a fixed overlap") {
        const auto t = cross_scale_vanishing(
            step, 1.0, step, 1.0, [](int n) { return double(n); },
            [](int n) { return 2.0 * n; }, {10, 40, 160});
        for (double v : t.observed) CHECK(v == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
        CHECK_FALSE(t.converged);
    }
}
