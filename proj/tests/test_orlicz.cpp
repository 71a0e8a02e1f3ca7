#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "orlab/grid.hpp"
#include "orlab/lions.hpp"
#include "orlab/orlicz.hpp"

using namespace orlab;
using Catch::Approx;

namespace {
RadialFunction lions_sample(double alpha, double ds = 1e-3) {
    return sample_from_closure(lions_f(alpha), family_grid(alpha, ds));
}
} // namespace

TEST_CASE("tm_integral basics") {
    SECTION("zero function integrates to zero") {
        const auto z = RadialFunction::zeros(LogGrid(-2.0, 50.0, 1001));
        CHECK(tm_integral(z, 0.3) == 0.0);
        CHECK(tm_integral(z, 3.0) == 0.0);
    }
    SECTION("strictly decreasing in lambda") {
        const auto f = lions_sample(1.0);
        CHECK(tm_integral(f, 0.3) > tm_integral(f, 0.5));
        CHECK(tm_integral(f, 0.5) > tm_integral(f, 1.0));
    }
    SECTION("plateau piece matches the analytic integral") {
        const double alpha = 3.0, lambda = 0.4;
        const LogGrid g(-2.0, 50.0, 52001);
        const double plateau = std::sqrt(alpha / kTwoPi);
        std::vector<double> v(g.n_points, 0.0);
        for (std::size_t i = 0; i < g.n_points; ++i)
            if (g.s(i) >= alpha) v[i] = plateau;
        const RadialFunction f(g, std::move(v));
        const double x = alpha / (kTwoPi * lambda * lambda);
        const double exact =
            kPi * (std::exp(-2.0 * alpha) - std::exp(-2.0 * g.s_max)) * std::expm1(x);
        CHECK(tm_integral(f, lambda) == Approx(exact).epsilon(2e-3));
    }
    SECTION("exponent overflow is reported with the node") {
        const LogGrid g(-2.0, 50.0, 101);
        const auto f = sample_from_closure([](double r) { return r <= 1.0 ? 30.0 : 0.0; }, g);
        CHECK_THROWS_AS(tm_integral(f, 1.0), OverflowError);
    }
}

TEST_CASE("orlicz_norm") {
    const OrliczConfig cfg;
    SECTION("zero function has zero norm") {
        CHECK(orlicz_norm(RadialFunction::zeros(LogGrid(-2.0, 50.0, 1001))) == 0.0);
    }
    SECTION("f_50 obeys the plateau lower bound") {
        const auto f = lions_sample(50.0);
        const double norm = orlicz_norm(f, cfg);
        const double lower =
            std::sqrt(50.0 / (kTwoPi * (100.0 - std::log(kPi) + std::log1p(kPi * std::exp(-100.0)))));
        CHECK(lower == Approx(0.2837).epsilon(1e-3));
        CHECK(norm >= lower - cfg.bisect_tol);
        CHECK(norm <= (1.0 + lions_l2_closed_form(50.0)) / std::sqrt(2.0 * kTwoPi));
    }
    SECTION("Luxemburg homogeneity") {
        const auto f = lions_sample(5.0);
        auto cf = f;
        for (auto& v : cf.values) v *= 2.0;
        CHECK(orlicz_norm(cf, cfg) == Approx(2.0 * orlicz_norm(f, cfg)).epsilon(1e-6));
    }
    SECTION("feasible set is the closed half line above the norm") {
        const auto f = lions_sample(5.0);
        const double norm = orlicz_norm(f, cfg);
        CHECK(tm_integral(f, norm * (1.0 + 10.0 * cfg.bisect_tol)) <= cfg.kappa);
        CHECK(tm_integral(f, norm * 1.5) <= cfg.kappa);
        CHECK(tm_integral(f, norm * (1.0 - 10.0 * cfg.bisect_tol)) > cfg.kappa);
    }
    SECTION("monotone in the pointwise absolute value") {
        const auto f2 = lions_sample(5.0);
        auto f1 = f2;
        for (auto& v : f1.values) v *= 0.7;
        CHECK(orlicz_norm(f1, cfg) <= orlicz_norm(f2, cfg) + cfg.bisect_tol);
    }
    SECTION("triangle inequality") {
        const auto f = lions_sample(5.0);
        ScaledBubble b{[](int) { return 5.0; }, gk_profile()};
        const auto g = bubble_to_function(b, 0, f.grid);
        auto sum = f;
        for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g.values[i];
        CHECK(orlicz_norm(sum, cfg) <=
              orlicz_norm(f, cfg) + orlicz_norm(g, cfg) + 2.0 * cfg.bisect_tol);
    }
    SECTION("larger kappa loosens the constraint") {
        const auto f = lions_sample(5.0);
        OrliczConfig big = cfg;
        big.kappa = 2.0;
        CHECK(orlicz_norm(f, big) <= orlicz_norm(f, cfg) + cfg.bisect_tol);
    }
}

TEST_CASE("moser_ratio_probe") {
    SECTION("subcritical exponent keeps the ratio bounded") {
        double lo = 1e300, hi = 0.0;
        for (double b : {5.0, 10.0, 20.0, 40.0}) {
            const double r = moser_ratio_probe(kTwoPi, b).ratio;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo < 3.0);
    }
    SECTION("critical exponent grows at least linearly") {
        const double r5 = moser_ratio_probe(2.0 * kTwoPi, 5.0).ratio;
        const double r40 = moser_ratio_probe(2.0 * kTwoPi, 40.0).ratio;
        CHECK(r40 > 5.0 * r5);
        // analytic plateau bound: integral >= pi e^{-2 b}(e^{2 b} - 1)
        for (double b : {5.0, 10.0, 20.0}) {
            const double bound = kPi * std::exp(-2.0 * b) * std::expm1(2.0 * b) /
                                 lions_l2_sq_closed_form(b);
            CHECK(moser_ratio_probe(2.0 * kTwoPi, b).ratio >= bound);
        }
    }
    SECTION("supercritical exponent grows exponentially") {
        for (double b : {10.0, 20.0}) {
            const double bound = kPi * std::exp(-2.0 * b) * std::expm1(2.5 * b) /
                                 lions_l2_sq_closed_form(b);
            CHECK(moser_ratio_probe(2.5 * kTwoPi, b).ratio >= bound);
        }
        CHECK(moser_ratio_probe(2.5 * kTwoPi, 20.0).ratio >
              10.0 * moser_ratio_probe(2.5 * kTwoPi, 10.0).ratio);
    }
}

TEST_CASE("orlicz_l2_sandwich_check") {
    SECTION("bounded plateau with mu = 1") {
        const LogGrid g(0.0, 50.0, 50001);
        const RadialFunction f(g, std::vector<double>(g.n_points, 1.0));
        const auto rep = orlicz_l2_sandwich_check(f, 1.0);
        CHECK(rep.upper ==
              Approx(1.0 + std::exp(0.5) * std::sqrt(kPi)).epsilon(1e-5));
        CHECK(rep.lower_slack >= 0.0);
        CHECK(rep.upper_slack >= 0.0);
    }
    SECTION("f_1 with mu = 0.5") {
        const auto rep = orlicz_l2_sandwich_check(lions_sample(1.0), 0.5);
        CHECK(rep.lower_slack > 0.0);
        CHECK(rep.upper_slack > 0.0);
        CHECK_FALSE(rep.upper_unbounded);
    }
    SECTION("zero function is trivially sandwiched") {
        const auto rep =
            orlicz_l2_sandwich_check(RadialFunction::zeros(LogGrid(-2.0, 50.0, 101)), 0.5);
        CHECK(rep.orlicz == 0.0);
        CHECK(rep.lower_slack == 0.0);
        CHECK(rep.upper_slack == Approx(0.5).epsilon(1e-12));
    }
    SECTION("mu outside (0, 1] is rejected") {
        CHECK_THROWS_AS(orlicz_l2_sandwich_check(lions_sample(1.0), 1.5), std::invalid_argument);
    }
}

TEST_CASE("lp_moment_bound_check") {
    SECTION("zero function holds with equality") {
        const auto z = RadialFunction::zeros(LogGrid(-2.0, 50.0, 101));
        for (const auto& mb : lp_moment_bound_check(z, 3)) {
            CHECK(mb.lp_norm == 0.0);
            CHECK(mb.bound == 0.0);
        }
    }
    SECTION("q = 1 is the left half of the sandwich") {
        const auto f = lions_sample(1.0);
        const auto mb = lp_moment_bound_check(f, 1).front();
        CHECK(mb.lp_norm == Approx(l2_norm(f)).epsilon(1e-12));
        CHECK(mb.slack >= 0.0);
    }
    SECTION("f_1 up to q = 6 with positive slack") {
        for (const auto& mb : lp_moment_bound_check(lions_sample(1.0), 6)) CHECK(mb.slack > 0.0);
    }
}
