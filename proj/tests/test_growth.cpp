#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "qpl/growth.hpp"
#include "qpl/verify.hpp"

using namespace qpl;

namespace {

// Kolmogorov survival function Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}.
double kolmogorov_q(double lambda)
{
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Asymptotic two-sample Kolmogorov–Smirnov p-value.
double ks_pvalue(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

std::vector<double> column(const McReport& r, std::size_t n)
{
    std::vector<double> out;
    for (const auto& s : r.samples) out.push_back(s[n]);
    return out;
}

}  // namespace

TEST_SUITE("growth")
{
    TEST_CASE("deformation example")
    {
        const auto w = to_interlacing(Partition({1})).widen();
        const auto mu = transition_weights(w, QParam(0.5));
        const auto d = deform(w, mu, 0.09);
        const double minima[] = {-1.17321, -0.82679, 0.75505, 1.24495};
        REQUIRE(d.minima_t().size() == 4);
        for (std::size_t k = 0; k < 4; ++k) CHECK(d.minima_t()[k] == doctest::Approx(minima[k]).epsilon(1e-5));
        REQUIRE(d.maxima_t().size() == 3);
        CHECK(d.maxima_t()[0] == -1.0);
        CHECK(d.maxima_t()[1] == 0.0);
        CHECK(d.maxima_t()[2] == 1.0);
        CHECK(d.added_area == doctest::Approx(0.09));
    }

    TEST_CASE("deformation invariants")
    {
        StreamRng rng(31, 0);
        for (int i = 0; i < 30; ++i) {
            const auto w = to_interlacing(random_partition(1 + static_cast<int>(rng.next() % 20), rng)).widen();
            const QParam q(0.2 + 0.7 * rng.uniform());
            const auto mu = transition_weights(w, q);
            const double t = 1e-3;
            const auto d = deform(w, mu, t);
            CHECK(d.added_area == doctest::Approx(t).epsilon(1e-12));
            // adding squares of area μ_k t keeps the profile centred and raises Σx² − Σy² by 2t
            CHECK(d.deformed.center() == doctest::Approx(w.center()).scale(1.0).epsilon(1e-12));
            double before = 0.0, after = 0.0;
            for (double x : w.minima()) before += x * x;
            for (double y : w.maxima()) before -= y * y;
            for (double x : d.minima_t()) after += x * x;
            for (double y : d.maxima_t()) after -= y * y;
            CHECK(after - before == doctest::Approx(2.0 * t).epsilon(1e-9));
        }
        const auto w = to_interlacing(Partition({1})).widen();
        const auto mu = transition_weights(w, QParam(0.5));
        CHECK_THROWS_AS(deform(w, mu, 5.0), InterlacingError);
        CHECK_THROWS_AS(deform(w, mu, 0.0), DomainError);
        CHECK_THROWS_AS(deform(w, TransitionWeights{{1.0}}, 0.1), DomainError);
    }

    TEST_CASE("R is continuous in t")
    {
        const auto w = to_interlacing(Partition({3, 1})).widen();
        const QParam q(0.5);
        const auto mu = transition_weights(w, q);
        const double x = w.highest() + 2.0;
        const double r0 = r_diagram(w, q, x);
        double previous = 1.0;
        for (double t : {1e-2, 1e-4, 1e-6}) {
            const double gap = std::fabs(r_diagram(deform(w, mu, t).deformed, q, x, 0.5) - r0);
            CHECK(gap < previous);
            previous = gap;
        }
        CHECK(previous < 1e-6);
    }

    TEST_CASE("weight splitting")
    {
        // ν_{2k−1} + ν_{2k} → μ_k as t → 0, extrapolated linearly from t = 1e−4 and 1e−6
        StreamRng rng(32, 0);
        for (int i = 0; i < 20; ++i) {
            const auto w = to_interlacing(random_partition(1 + static_cast<int>(rng.next() % 12), rng)).widen();
            const QParam q(0.3 + 0.6 * rng.uniform());
            const auto mu = transition_weights(w, q);
            const double t1 = 1e-4, t2 = 1e-6;
            const auto nu1 = transition_weights(deform(w, mu, t1).deformed, q);
            const auto nu2 = transition_weights(deform(w, mu, t2).deformed, q);
            REQUIRE(nu1.weights.size() == 2 * mu.weights.size());
            for (std::size_t k = 0; k < mu.weights.size(); ++k) {
                const double a = nu1.weights[2 * k] + nu1.weights[2 * k + 1];
                const double b = nu2.weights[2 * k] + nu2.weights[2 * k + 1];
                const double at_zero = b - t2 * (a - b) / (t1 - t2);
                CHECK(std::fabs(at_zero - mu.weights[k]) < 1e-5);
            }
        }
    }

    TEST_CASE("deformation preserves the R identity")
    {
        StreamRng rng(33, 0);
        for (int i = 0; i < 20; ++i) {
            const auto w = to_interlacing(random_partition(1 + static_cast<int>(rng.next() % 12), rng)).widen();
            const QParam q(0.3 + 0.6 * rng.uniform());
            const auto d = deform(w, transition_weights(w, q), 1e-3);
            const auto nu = transition_measure(d.deformed, q);
            const std::vector<double> grid{d.deformed.lowest() - 3.0, d.deformed.lowest() - 1.0,
                                           d.deformed.highest() + 1.0, d.deformed.highest() + 2.5,
                                           d.deformed.highest() + 6.0};
            CHECK(markov_krein_residual(d.deformed, nu, q, grid) < 1e-9);
        }
    }

    TEST_CASE("t-derivative of R")
    {
        const QParam q(0.5);
        for (const auto& [lambda, x] : {std::pair{Partition({1}), 5.0}, std::pair{Partition(), 4.0},
                                        std::pair{Partition({4, 2, 1}), 7.0}}) {
            const auto w = to_interlacing(lambda).widen();
            const auto mu = transition_weights(w, q);
            const double r0 = r_diagram(w, q, x);
            const auto slope = [&](double t) { return (r_diagram(deform(w, mu, t).deformed, q, x, 0.5) - r0) / t; };
            const double t = 1e-4;
            const double fd = 2.0 * slope(t / 2) - slope(t);
            const double exact = growth_derivative(w, q, x);
            CHECK(std::fabs(fd - exact) / std::fabs(exact) < 1e-6);
        }
        const auto w = to_interlacing(Partition({2})).widen();
        CHECK(std::fabs(growth_derivative(w, q, 60.0)) < 1e-15);
        CHECK(growth_derivative(w, QParam(1.0 - 1e-9), 5.0) ==
              doctest::Approx(growth_derivative(w, QParam(1.0), 5.0)).epsilon(1e-6));
    }

    TEST_CASE("growth PDE residual")
    {
        const auto one = to_interlacing(Partition({1})).widen();
        CHECK(pde_residual(one, QParam(0.5), 6.0, 1e-5, 1e-5) < 1e-5);
        CHECK(pde_residual(InterlacingDiagram(), QParam(0.5), 40.0, 1e-5, 1e-5) < 1e-8);
        CHECK(pde_residual(one, QParam(1.0), 6.0, 1e-5, 1e-5) < 1e-5);

        // second-order convergence in dx
        const auto w = to_interlacing(Partition({3, 2})).widen();
        const double r1 = pde_residual(w, QParam(0.6), 6.0, 1e-5, 0.1);
        const double r2 = pde_residual(w, QParam(0.6), 6.0, 1e-5, 0.05);
        const double order = std::log2(r1 / r2);
        CHECK(order > 1.7);
        CHECK(order < 2.3);

        CHECK_THROWS_AS(pde_residual(one, QParam(0.5), 6.0, 0.0, 1e-5), StepError);
        CHECK_THROWS_AS(pde_residual(one, QParam(0.5), 6.0, 1e-5, 0.6), StepError);
        CHECK_THROWS_AS(pde_residual(one, QParam(0.5), 6.0, 1e-20, 1e-5), StepError);
    }

    TEST_CASE("Monte Carlo report")
    {
        const auto r = mc_limit_experiment(400, QParam(0.5), 6, 3, 9);
        CHECK(r.n_boxes == 400);
        CHECK(r.kernel_q == doctest::Approx(std::pow(0.5, 1.0 / 20.0)));
        CHECK(r.samples.size() == 6);
        CHECK(r.shapes.size() == 6);
        for (const auto& s : r.shapes) CHECK(s.size() == 400);
        CHECK(r.mean.size() == 3);
        CHECK(r.target.size() == 3);
        CHECK(r.target[0] == doctest::Approx(1.61680667224167).epsilon(1e-10));

        McOptions lean;
        lean.keep_shapes = false;
        lean.scaling = Scaling::fixed;
        const auto f = mc_limit_experiment(50, QParam(0.5), 3, 2, 9, lean);
        CHECK(f.shapes.empty());
        CHECK(f.target.empty());
        CHECK(f.kernel_q == 0.5);

        CHECK_THROWS_AS(mc_limit_experiment(0, QParam(0.5), 3, 2, 9), CapacityError);
        CHECK_THROWS_AS(mc_limit_experiment(kMaxGrowthBoxes + 1, QParam(0.5), 3, 2, 9), CapacityError);
        CHECK_THROWS_AS(mc_limit_experiment(10, QParam(0.5), 0, 2, 9), DomainError);
        CHECK_THROWS_AS(mc_limit_experiment(10, QParam(1.0), 3, 2, 9), DomainError);
    }

    TEST_CASE("Monte Carlo: parallel equals serial and reruns are identical")
    {
        const int saved = omp_get_max_threads();
        omp_set_num_threads(4);
        const auto par = mc_limit_experiment(300, QParam(0.6), 17, 4, 77);
        omp_set_num_threads(saved);
        const auto ser = mc_limit_experiment_serial(300, QParam(0.6), 17, 4, 77);
        CHECK(par.samples == ser.samples);
        CHECK(par.shapes == ser.shapes);
        CHECK(par.mean == ser.mean);
        CHECK(par.stderr_ == ser.stderr_);
        const auto again = mc_limit_experiment(300, QParam(0.6), 17, 4, 77);
        CHECK(again.samples == par.samples);
        CHECK(mc_limit_experiment(300, QParam(0.6), 17, 4, 78).samples != par.samples);
    }

    TEST_CASE("Monte Carlo: seed blocks agree in distribution")
    {
        const auto a = mc_limit_experiment(100, QParam(0.5), 300, 2, 1001);
        const auto b = mc_limit_experiment(100, QParam(0.5), 300, 2, 2002);
        for (std::size_t n = 0; n < 2; ++n) CHECK(ks_pvalue(column(a, n), column(b, n)) > 0.001);

        // and the test does detect a genuinely different distribution
        const auto c = mc_limit_experiment(100, QParam(0.3), 300, 2, 1001);
        CHECK(ks_pvalue(column(a, 0), column(c, 0)) < 0.001);
    }

    TEST_CASE("Monte Carlo near the classical limit")
    {
        // Σx² − Σy² = 2|λ| makes p̂₁ = 1 + ln²(1/q) + O(ln³(1/q)) for any diagram.
        const QParam q(1.0 - 1e-6);
        const auto r = mc_limit_experiment(900, q, 4, 1, 5);
        for (const auto& s : r.samples) CHECK(std::fabs(s[0] - 1.0) < 1e-10);
        CHECK(std::fabs(r.mean[0] - r.target[0]) < 1e-10);
    }
}
