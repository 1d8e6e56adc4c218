#include <doctest.h>

#include <cmath>

#include "qpl/dynamics.hpp"
#include "qpl/rng.hpp"

using namespace qpl;

namespace {

// Reference values from a 40-digit power-series solution of the moment system.
constexpr double kLimitP05[] = {1.61680667224167, 5.12593349277708, 20.8003025605345,
                                92.1711594540328, 425.922943334799, 2017.3433169919};
constexpr double kLimitP03[] = {4.26119873357817, 70.7991537404315, 1481.92118366229,
                                33403.1191678035, 781670.444187686, 18714272.9424412};
constexpr double kLimitP07[] = {1.13566344776372, 1.61788304288262, 2.68938248593677,
                                4.88540359537339, 9.3254909615779, 18.3293123306215};

}  // namespace

TEST_SUITE("dynamics")
{
    TEST_CASE("right-hand side examples")
    {
        const double y1[] = {1.0};
        CHECK(ode_rhs(y1) == std::vector<double>{1.0});
        const double y2[] = {1.0, 1.0};
        const auto r2 = ode_rhs(y2);
        CHECK(r2[0] == doctest::Approx(1.0));
        CHECK(r2[1] == doctest::Approx(4.0));
        const double y3[] = {1.0, 1.0, 1.0};
        CHECK(ode_rhs(y3)[2] == doctest::Approx(9.0));
    }

    TEST_CASE("right-hand side matches the explicit polynomials")
    {
        // ẏ₂ = 2y₁² + 2y₂, ẏ₃ = (3/2)y₁³ + (9/2)y₁y₂ + 3y₃
        StreamRng rng(21, 0);
        for (int i = 0; i < 50; ++i) {
            const double y[] = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
            const auto r = ode_rhs(y);
            CHECK(r[0] == doctest::Approx(y[0]));
            CHECK(r[1] == doctest::Approx(2 * y[0] * y[0] + 2 * y[1]));
            CHECK(r[2] == doctest::Approx(1.5 * y[0] * y[0] * y[0] + 4.5 * y[1] * y[0] + 3 * y[2]));
        }
    }

    TEST_CASE("integration examples")
    {
        const double one[] = {1.0};
        CHECK(std::fabs(integrate_moments(one, 1.0).y[0] - std::exp(1.0)) < 1e-8);

        const double ones2[] = {1.0, 1.0};
        const auto still = integrate_moments(ones2, 0.0);
        CHECK(still.y == std::vector<double>{1.0, 1.0});
        const auto half = integrate_moments(ones2, 0.5);
        CHECK(std::fabs(half.y[1] - 2.0 * std::exp(1.0)) < 1e-7);
        CHECK(half.error_estimate < 1e-10);
    }

    TEST_CASE("closed form examples")
    {
        const double y0[] = {0.7, -0.3, 1.9, 0.4};
        CHECK(closed_form(1, 0.0, y0) == 0.7);
        const double ones[] = {1.0, 1.0, 1.0, 1.0};
        CHECK(closed_form(3, 1.0, ones) == doctest::Approx(11.5 * std::exp(3.0)).epsilon(1e-14));
        CHECK_THROWS_AS(closed_form(5, 1.0, ones), DomainError);
        CHECK_THROWS_AS(closed_form(3, 1.0, std::span<const double>(ones, 2)), DomainError);
    }

    TEST_CASE("closed form y4 agrees to fifth order for small times")
    {
        const double ones[] = {1.0, 1.0, 1.0, 1.0};
        for (double s : {1e-3, 2e-3, 4e-3}) {
            const double ode = integrate_moments(ones, s, 50).y[3];
            CHECK(std::fabs(ode - closed_form(4, s, ones)) < 1e-12);
        }
    }

    TEST_CASE("integrator matches closed forms on random starts")
    {
        StreamRng rng(22, 0);
        for (int i = 0; i < 10; ++i) {
            std::vector<double> y0(4);
            for (double& v : y0) v = 0.5 + rng.uniform();
            for (double s = 0.0; s <= 2.0 + 1e-12; s += 0.25) {
                const auto state = integrate_moments(y0, s);
                for (int n = 1; n <= 4; ++n) {
                    const double exact = closed_form(n, s, y0);
                    CHECK(std::fabs(state.y[static_cast<std::size_t>(n - 1)] - exact) / std::fabs(exact) < 1e-7);
                }
            }
        }
    }

    TEST_CASE("coarse steps trip the error estimate")
    {
        const double ones[] = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        CHECK_THROWS_AS(integrate_moments(ones, 2.0, 2, 1e-10), IntegrationError);
        CHECK_THROWS_AS(integrate_moments(ones, 1.0, 0), DomainError);
    }

    TEST_CASE("rescaled time")
    {
        CHECK(rescaled_time(3.0, QParam(0.5)) == doctest::Approx(3.0 * std::log(2.0) * std::log(2.0)));
        const double one[] = {1.0};
        CHECK(integrate_moments(one, 2.0, QParam(0.5)).varsigma == doctest::Approx(2.0 * std::log(2.0) * std::log(2.0)));
    }

    TEST_CASE("limit moments")
    {
        const auto p05 = limit_moments(QParam(0.5), 6);
        const auto p03 = limit_moments(QParam(0.3), 6);
        const auto p07 = limit_moments(QParam(0.7), 6);
        for (std::size_t n = 1; n <= 6; ++n) {
            CHECK(p05(n) == doctest::Approx(kLimitP05[n - 1]).epsilon(1e-9));
            CHECK(p03(n) == doctest::Approx(kLimitP03[n - 1]).epsilon(1e-9));
            CHECK(p07(n) == doctest::Approx(kLimitP07[n - 1]).epsilon(1e-9));
        }
        const double s = std::log(2.0) * std::log(2.0);
        CHECK(p05(1) == doctest::Approx(std::exp(s)).epsilon(1e-12));
        CHECK(p05(2) == doctest::Approx((1 + 2 * s) * std::exp(2 * s)).epsilon(1e-12));

        const auto h = limit_h_moments(QParam(0.5), 2);
        CHECK(h(2) == doctest::Approx(3.86999865409114).epsilon(1e-10));

        for (double v : limit_moments(QParam(1.0 - 1e-8), 8).values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(limit_moments(QParam(1.0), 3), DomainError);
    }

    TEST_CASE("polynomial structure of the solutions")
    {
        const std::vector<double> ones(6, 1.0);
        for (int n = 1; n <= 6; ++n) CHECK(structure_fit_residual(n, ones, 2.0, 2 * n + 3, 1000) < 1e-8);
        StreamRng rng(23, 0);
        std::vector<double> y0(6);
        for (double& v : y0) v = 0.5 + rng.uniform();
        for (int n = 1; n <= 6; ++n) CHECK(structure_fit_residual(n, y0, 2.0, 2 * n + 3, 1000) < 1e-8);
        CHECK_THROWS_AS(structure_fit_residual(3, ones, 2.0, 3), DomainError);
    }
}
