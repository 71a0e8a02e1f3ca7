#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "orlab/grid.hpp"
#include "orlab/inequalities.hpp"
#include "orlab/lions.hpp"

using namespace orlab;
using Catch::Approx;

namespace {
RadialFunction lions_sample(double alpha, double ds = 1e-3) {
    return sample_from_closure(lions_f(alpha), family_grid(alpha, ds));
}
} // namespace

TEST_CASE("radial_bound_check") {
    SECTION("p = 2 keeps the Lions family under sqrt(2)") {
        for (double a : {1.0, 5.0, 20.0}) {
            const auto rep = radial_bound_check(lions_sample(a), 2.0);
            CHECK(rep.constant == Approx(std::sqrt(2.0)).epsilon(1e-12));
            CHECK_FALSE(rep.degenerate);
            CHECK(rep.max_ratio <= rep.constant * (1.0 + 1e-6));
        }
    }
    SECTION("p = 4 uses the proof constant") {
        const auto rep = radial_bound_check(lions_sample(5.0), 4.0);
        CHECK(rep.constant == Approx(std::pow(3.0, 1.0 / 3.0)).epsilon(1e-12));
        CHECK(rep.max_ratio <= rep.constant * (1.0 + 1e-6));
    }
    SECTION("plateau with a ramp stays bounded") {
        const LogGrid g(-2.0, 50.0, 52001);
        const auto f = sample_from_closure(
            [](double r) { return 0.8 * std::max(0.0, std::min(1.0, 2.0 - 2.0 * r)); }, g);
        const auto rep = radial_bound_check(f, 2.0);
        CHECK_FALSE(rep.degenerate);
        CHECK(rep.max_ratio <= rep.constant);
    }
    SECTION("zero function is flagged") {
        CHECK(radial_bound_check(RadialFunction::zeros(LogGrid(0.0, 10.0, 101)), 2.0).degenerate);
    }
}

TEST_CASE("holder_seminorm") {
    SECTION("constants have zero seminorm") {
        const LogGrid g(-2.0, 20.0, 2001);
        CHECK(holder_seminorm(RadialFunction(g, std::vector<double>(g.n_points, 4.2)), 0.25) == 0.0);
    }
    SECTION("scaling is linear in the amplitude") {
        const auto f = lions_sample(2.0, 2e-3);
        auto cf = f;
        for (auto& v : cf.values) v *= -3.0;
        CHECK(holder_seminorm(cf, 0.25) == Approx(3.0 * holder_seminorm(f, 0.25)).epsilon(1e-12));
    }
    SECTION("tent function attains its span ratio") {
        const LogGrid g(-2.0, 30.0, 32001);
        const auto f = sample_from_closure([](double r) { return std::max(0.0, 1.0 - r); }, g);
        const double sup = holder_seminorm(f, 0.25);
        CHECK(sup >= 0.99);
        CHECK(sup <= 1.0 + 1e-9);
        // dense-pair oracle on a coarse subsample
        const LogGrid coarse(-2.0, 30.0, 501);
        const auto fc = resample(f, coarse).fn;
        double oracle = 0.0;
        for (std::size_t i = 0; i < coarse.n_points; ++i)
            for (std::size_t j = i + 1; j < coarse.n_points; ++j) {
                const double dr = std::fabs(coarse.r(i) - coarse.r(j));
                if (dr > 0.0)
                    oracle = std::max(oracle, std::fabs(fc.values[i] - fc.values[j]) /
                                                  std::pow(dr, 0.25));
            }
        CHECK(sup >= oracle - 1e-6);
    }
}

TEST_CASE("log_inequality_probe") {
    SECTION("zero function degenerates with unit constant") {
        const auto rep =
            log_inequality_probe(RadialFunction::zeros(LogGrid(0.0, 10.0, 101)), 1.0, 1.0, 0.25);
        CHECK(rep.degenerate);
        CHECK(rep.empirical_C <= 1.0);
    }
    SECTION("lambda below the admissibility threshold is rejected") {
        CHECK_THROWS_AS(log_inequality_probe(lions_sample(5.0), 0.6, 1.0, 0.25),
                        std::invalid_argument);
    }
    SECTION("Lions family keeps a bounded constant") {
        double worst = 0.0;
        for (double a : {5.0, 10.0, 20.0}) {
            const auto rep = log_inequality_probe(lions_sample(a, 2e-3), 1.0, 1.0, 0.25);
            CHECK_FALSE(rep.degenerate);
            CHECK(std::isfinite(rep.empirical_C));
            worst = std::max(worst, rep.empirical_C);
        }
        CHECK(worst <= 10.0);
    }
    SECTION("larger lambda never needs a larger constant") {
        const auto f = lions_sample(5.0, 2e-3);
        const auto c1 = log_inequality_probe(f, 1.0, 1.0, 0.25).empirical_C;
        const auto c2 = log_inequality_probe(f, 2.0, 1.0, 0.25).empirical_C;
        CHECK(c2 <= c1 + 1e-12);
    }
}

TEST_CASE("superlevel_measure") {
    SECTION("zero function has empty superlevel sets") {
        CHECK(superlevel_measure(RadialFunction::zeros(LogGrid(0.0, 10.0, 101)), 0.5) == 0.0);
    }
    SECTION("plateau disk of f_alpha") {
        const double a = 3.0;
        const auto f = lions_sample(a, 5e-4);
        const double eps = std::sqrt(a / kTwoPi) * (1.0 - 1e-9);
        const double disk = kPi * std::exp(-2.0 * a);
        const double m = superlevel_measure(f, eps);
        CHECK(m >= disk * (1.0 - 1e-4));
        CHECK(m <= disk * (1.0 + 1e-3));
    }
    SECTION("half-plateau level set against the closed form") {
        const double a = 3.0;
        const auto f = lions_sample(a, 5e-4);
        const double eps = 0.5 * std::sqrt(a / kTwoPi);
        // {v >= eps} is s >= a/2 up to the grid cut
        const double expect = kPi * (std::exp(-a) - std::exp(-2.0 * f.grid.s_max));
        CHECK(superlevel_measure(f, eps) == Approx(expect).epsilon(1e-6));
    }
    SECTION("non-increasing in eps and Tchebychev-consistent") {
        const auto f = lions_sample(1.0);
        const double l2 = l2_norm(f);
        double prev = 1e300;
        for (double eps : {0.05, 0.1, 0.2, 0.3}) {
            const double m = superlevel_measure(f, eps);
            CHECK(m <= prev + 1e-15);
            CHECK(eps * eps * m <= l2 * l2 * (1.0 + 1e-9));
            prev = m;
        }
    }
}

TEST_CASE("bmo_probe") {
    SECTION("oscillation kills the ball mean") {
        for (double a : {1.0, 10.0}) CHECK(bmo_probe(a).mean == 0.0);
    }
    SECTION("quadrature matches the closed form") {
        for (double a : {1.0, kTwoPi, 10.0}) {
            const auto p = bmo_probe(a);
            CHECK(p.abs_average == Approx(p.closed_form).epsilon(1e-6));
        }
        CHECK(bmo_probe(kTwoPi).closed_form == Approx(0.57943).epsilon(1e-5));
    }
    SECTION("the average grows while the Orlicz norm stays flat") {
        const auto p10 = bmo_probe(10.0);
        const auto p20 = bmo_probe(20.0);
        CHECK(p20.abs_average > p10.abs_average);
        CHECK(p20.abs_average / p10.abs_average ==
              Approx(p20.closed_form / p10.closed_form).epsilon(1e-6));
        const double n10 = orlicz_norm(lions_sample(10.0));
        const double n20 = orlicz_norm(lions_sample(20.0));
        CHECK(std::fabs(n20 - n10) / n10 < 0.05);
    }
}
