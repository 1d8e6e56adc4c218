#include "qpl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "qpl/dynamics.hpp"
#include "qpl/growth.hpp"
#include "qpl/kernel.hpp"
#include "qpl/limitshape.hpp"
#include "qpl/moments.hpp"
#include "qpl/qmeasure.hpp"
#include "qpl/rsk.hpp"

namespace qpl {

bool SuiteResult::passed() const
{
    return first_failure() == nullptr;
}

const CheckResult* SuiteResult::first_failure() const
{
    for (const auto& c : checks)
        if (!c.passed) return &c;
    return nullptr;
}

Partition random_partition(int n, StreamRng& rng)
{
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) {
        const auto addable = Partition(rows).addable_rows();
        const auto pick = static_cast<std::size_t>(rng.next() % addable.size());
        const int row = addable[pick];
        if (row == static_cast<int>(rows.size()))
            rows.push_back(1);
        else
            ++rows[static_cast<std::size_t>(row)];
    }
    return Partition(std::move(rows));
}

namespace {

class SuiteBuilder {
public:
    SuiteBuilder(std::string name, const VerifyOptions& options) : options_(options) { result_.name = std::move(name); }

    void check(std::string name, double value, double tolerance)
    {
        const double tol = options_.tolerance.value_or(tolerance);
        result_.checks.push_back({std::move(name), value, tol, value < tol});
    }

    SuiteResult finish(double seconds)
    {
        result_.seconds = seconds;
        return std::move(result_);
    }

private:
    const VerifyOptions& options_;
    SuiteResult result_;
};

double relative(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

std::vector<InterlacingDiagram> random_diagrams(int count, int max_boxes, StreamRng& rng)
{
    std::vector<InterlacingDiagram> out;
    for (int i = 0; i < count; ++i) {
        const int n = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_boxes));
        out.push_back(to_interlacing(random_partition(n, rng)).widen());
    }
    return out;
}

void hook_identity_suite(SuiteBuilder& s, const VerifyOptions&)
{
    double worst = 0.0;
    for (double qv : {0.1, 0.5, 0.9, 0.99})
        for (int n = 1; n <= 20; ++n) worst = std::max(worst, std::fabs(hook_identity_residual(n, QParam(qv))));
    s.check("relative residual n<=20", worst, 1e-9);
}

void kernel_oracle_suite(SuiteBuilder& s, const VerifyOptions& options)
{
    StreamRng rng(options.seed, 1);
    const double qs[] = {0.3, 0.7, 0.95};
    double worst = 0.0;
    double worst_sum = 0.0;
    const auto diagrams = random_diagrams(200, 25, rng);
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        const QParam q(qs[i % 3]);
        const auto a = transition_weights(diagrams[i], q);
        const auto b = partial_fraction_weights(diagrams[i], q);
        for (std::size_t k = 0; k < a.weights.size(); ++k)
            worst = std::max(worst, std::fabs(a.weights[k] - b.weights[k]));
        worst_sum = std::max(worst_sum, std::fabs(a.total() - 1.0));
    }
    s.check("product vs partial fractions", worst, 1e-9);
    s.check("weights sum to 1", worst_sum, 1e-12);
}

void pushforward_suite(SuiteBuilder& s, const VerifyOptions&)
{
    double worst_tv = 0.0;
    for (double qv : {0.2, 0.5, 0.8}) {
        const QParam q(qv);
        for (int n = 1; n <= 8; ++n) {
            double tv = 0.0;
            for (const auto& [shape, p] : pushforward_exact(n, q)) tv += std::fabs(p - q_measure(shape, q));
            worst_tv = std::max(worst_tv, 0.5 * tv);
        }
    }
    s.check("total variation n<=8", worst_tv, 1e-12);

    double defect = 0.0;
    for (int n = 1; n <= 8; ++n) defect = std::max(defect, static_cast<double>(pushforward_polynomial_defect(n)));
    s.check("exact polynomial identity defect", defect, 0.5);

    double mahonian = 0.0;
    for (int n = 1; n <= 8; ++n) {
        Polynomial total;
        for (const auto& [shape, poly] : maj_shape_polynomials(n)) {
            total.resize(std::max(total.size(), poly.size()), 0);
            for (std::size_t k = 0; k < poly.size(); ++k) total[k] += poly[k];
        }
        const auto expected = mahonian_polynomial(n);
        for (std::size_t k = 0; k < expected.size(); ++k)
            mahonian = std::max(mahonian, std::fabs(static_cast<double>(total[k] - expected[k])));
    }
    s.check("Mahonian distribution defect", mahonian, 0.5);
}

void markov_krein_suite(SuiteBuilder& s, const VerifyOptions& options)
{
    StreamRng rng(options.seed, 2);
    const double qs[] = {0.3, 0.6, 0.9};
    const auto diagrams = random_diagrams(100, 15, rng);
    double worst_r = 0.0;
    double worst_h = 0.0;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        const auto& w = diagrams[i];
        const QParam q(qs[i % 3]);
        const auto mu = transition_measure(w, q);
        std::vector<double> grid;
        for (double d : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            grid.push_back(w.highest() + 1.0 + d);
            grid.push_back(w.lowest() - 1.0 - d);
        }
        worst_r = std::max(worst_r, markov_krein_residual(w, mu, q, grid));
        const auto h = h_moments(mu, q, 10);
        const auto h_from_p = p_to_h(p_moments(w, q, 10));
        for (std::size_t n = 1; n <= 10; ++n) worst_h = std::max(worst_h, relative(h(n), h_from_p(n)));
    }
    s.check("max |R_w - R_mu|", worst_r, 1e-10);
    s.check("relative h moments vs p_to_h(p moments)", worst_h, 1e-9);
}

void ode_closed_forms_suite(SuiteBuilder& s, const VerifyOptions&)
{
    const std::vector<std::vector<double>> starts{{1.0, 1.0, 1.0, 1.0}, {1.3, 0.7, 2.1, 0.4}};
    double worst = 0.0;
    for (const auto& y0 : starts) {
        for (int j = 0; j <= 8; ++j) {
            const double varsigma = 0.25 * j;
            const auto state = integrate_moments(y0, varsigma, 1000);
            for (int n = 1; n <= 4; ++n)
                worst = std::max(worst, relative(state.y[static_cast<std::size_t>(n - 1)],
                                                 closed_form(n, varsigma, y0)));
        }
    }
    s.check("relative RK4 vs closed forms", worst, 1e-7);

    const std::vector<double> ones(6, 1.0);
    double fit = 0.0;
    for (int n = 1; n <= 6; ++n) fit = std::max(fit, structure_fit_residual(n, ones, 2.0, 2 * n + 3, 1000));
    s.check("polynomial structure fit", fit, 1e-8);
}

void limit_shape_suite(SuiteBuilder& s, const VerifyOptions&)
{
    double worst = 0.0;
    for (double qv : {0.3, 0.5, 0.7}) {
        const QParam q(qv);
        const auto series = series_h_omega(q, 6);
        const auto ode = limit_h_moments(q, 6);
        for (std::size_t n = 1; n <= 6; ++n) worst = std::max(worst, relative(series(n), ode(n)));
    }
    s.check("relative series h vs ODE h", worst, 1e-6);

    double order_error = 0.0;
    double worst_gap = 0.0;
    for (double x : {2.2, 3.0, 4.5, 6.0, 10.0}) {
        const double e1 = std::fabs(solve_r_omega(x, QParam(1.0 - 1e-3)) - classical_r(x));
        const double e2 = std::fabs(solve_r_omega(x, QParam(1.0 - 1e-4)) - classical_r(x));
        order_error = std::max(order_error, std::fabs(std::log10(e1 / e2) - 1.0));
        worst_gap = std::max(worst_gap, e2);
    }
    s.check("classical limit order |p - 1|", order_error, 0.1);
    s.check("classical limit gap at eps 1e-4", worst_gap, 1e-3);

    const auto a = automodel_residual(4.0, std::log(2.0));
    s.check("self-similar implicit form", a.implicit, 1e-10);
    s.check("self-similar PDE at u=4 rho=ln 2", a.pde, 1e-6);
    s.check("classical equation as rho -> 0", automodel_residual(3.0, 1e-6).classical, 1e-5);
}

void growth_pde_suite(SuiteBuilder& s, const VerifyOptions& options)
{
    StreamRng rng(options.seed, 3);
    const double qs[] = {0.3, 0.5, 0.7, 0.9};
    const auto diagrams = random_diagrams(50, 15, rng);
    double worst = 0.0;
    double order_error = 0.0;
    double derivative_error = 0.0;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        const auto& w = diagrams[i];
        const QParam q(qs[i % 4]);
        const double x = w.highest() + 2.0;
        worst = std::max(worst, pde_residual(w, q, x, 1e-5, 1e-5));

        // least-squares slope of log residual against log dx
        const double dxs[] = {0.1, 0.05, 0.025};
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (double dx : dxs) {
            const double lx = std::log(dx);
            const double ly = std::log(pde_residual(w, q, x, 1e-5, dx));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
        order_error = std::max(order_error, std::fabs(slope - 2.0));

        const auto mu = transition_weights(w, q);
        const double dt = 1e-6;
        const double fd = (r_diagram(deform(w, mu, dt).deformed, q, x, 0.5) - r_diagram(w, q, x)) / dt;
        const double exact = growth_derivative(w, q, x);
        derivative_error = std::max(derivative_error, relative(fd, exact));
    }
    s.check("PDE residual at dt dx 1e-5", worst, 1e-5);
    s.check("convergence order |p - 2|", order_error, 0.3);
    s.check("relative t-derivative vs forward difference", derivative_error, 1e-4);
}

void measure_consistency_suite(SuiteBuilder& s, const VerifyOptions&)
{
    double worst = 0.0;
    double worst_harmonic = 0.0;
    for (double qv : {0.3, 0.5, 0.9}) {
        const QParam q(qv);
        std::map<Partition, double> level{{Partition(), 1.0}};
        for (int n = 0; n < 6; ++n) {
            std::map<Partition, double> next;
            for (const auto& [lambda, p] : level) {
                const auto mu = transition_weights(lambda, q);
                const auto rows = lambda.addable_rows();
                for (std::size_t k = 0; k < rows.size(); ++k) next[lambda.with_box(rows[k])] += p * mu.weights[k];
            }
            level = std::move(next);
            for (const auto& [lambda, p] : level) worst = std::max(worst, std::fabs(p - q_measure(lambda, q)));
        }
        for (int n = 0; n <= 8; ++n) {
            for (const auto& lambda : enumerate_level(n)) {
                double children = 0.0;
                for (int row : lambda.addable_rows()) children += harmonic(lambda.with_box(row), q);
                worst_harmonic = std::max(worst_harmonic, relative(children, harmonic(lambda, q)));
            }
        }
    }
    s.check("path products vs q-measure n<=6", worst, 1e-12);
    s.check("relative harmonicity defect", worst_harmonic, 1e-12);
}

using SuiteFn = std::function<void(SuiteBuilder&, const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry()
{
    static const std::vector<std::pair<std::string, SuiteFn>> suites{
        {"hook_identity", hook_identity_suite},
        {"kernel_oracle", kernel_oracle_suite},
        {"measure_consistency", measure_consistency_suite},
        {"pushforward", pushforward_suite},
        {"markov_krein", markov_krein_suite},
        {"ode_closed_forms", ode_closed_forms_suite},
        {"limit_shape_moments", limit_shape_suite},
        {"growth_pde", growth_pde_suite},
    };
    return suites;
}

}  // namespace

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : registry()) out.push_back(entry.first);
        return out;
    }();
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options)
{
    for (const auto& [suite, fn] : registry()) {
        if (suite != name) continue;
        SuiteBuilder builder(suite, options);
        const auto start = std::chrono::steady_clock::now();
        fn(builder, options);
        const auto stop = std::chrono::steady_clock::now();
        return builder.finish(std::chrono::duration<double>(stop - start).count());
    }
    throw DomainError("unknown verification suite '" + name + "'");
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options)
{
    std::vector<SuiteResult> out;
    for (const auto& name : suite_names()) out.push_back(run_suite(name, options));
    return out;
}

}  // namespace qpl
