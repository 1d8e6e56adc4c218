#include "qpl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace qpl {

namespace {

std::vector<double> rk4(std::span<const double> y0, double varsigma_end, int steps)
{
    const std::size_t n = y0.size();
    const double h = varsigma_end / steps;
    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> stage(n);
    for (int s = 0; s < steps; ++s) {
        const auto k1 = ode_rhs(y);
        for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = ode_rhs(stage);
        for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = ode_rhs(stage);
        for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * k3[i];
        const auto k4 = ode_rhs(stage);
        for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return y;
}

}  // namespace

double rescaled_time(double t, const QParam& q)
{
    return t * q.log_inv_q() * q.log_inv_q();
}

std::vector<double> ode_rhs(std::span<const double> y)
{
    const std::size_t count = y.size();
    std::vector<double> h(count + 1, 0.0);
    h[0] = 1.0;
    std::vector<double> out(count);
    for (std::size_t n = 1; n <= count; ++n) {
        double sum = 0.0;
        for (std::size_t k = 1; k <= n; ++k) sum += y[k - 1] * h[n - k];
        h[n] = sum / static_cast<double>(n);
        out[n - 1] = static_cast<double>(n * n) * h[n];
    }
    return out;
}

OdeState integrate_moments(std::span<const double> y0, double varsigma_end, int steps, double tolerance)
{
    if (y0.empty())
        throw DomainError("initial moment vector is empty");
    if (!(varsigma_end >= 0.0) || !std::isfinite(varsigma_end))
        throw DomainError("rescaled time must be finite and nonnegative");
    if (steps < 1)
        throw DomainError("step count must be positive");

    OdeState state;
    state.varsigma = varsigma_end;
    if (varsigma_end == 0.0) {
        state.y.assign(y0.begin(), y0.end());
        return state;
    }
    const auto coarse = rk4(y0, varsigma_end, steps);
    state.y = rk4(y0, varsigma_end, 2 * steps);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const double err = std::fabs(coarse[i] - state.y[i]) / 15.0 / std::max(1.0, std::fabs(state.y[i]));
        state.error_estimate = std::max(state.error_estimate, err);
    }
    if (!(state.error_estimate <= tolerance))
        throw IntegrationError("RK4 error estimate " + std::to_string(state.error_estimate) + " exceeds " +
                               std::to_string(tolerance) + " with " + std::to_string(steps) +
                               " steps; increase the step count");
    return state;
}

OdeState integrate_moments(std::span<const double> y0, double t, const QParam& q, int steps, double tolerance)
{
    return integrate_moments(y0, rescaled_time(t, q), steps, tolerance);
}

double closed_form(int n, double varsigma, std::span<const double> y0)
{
    if (n < 1 || n > 4)
        throw DomainError("closed forms exist for n = 1..4 only");
    if (y0.size() < static_cast<std::size_t>(n))
        throw DomainError("closed form y_" + std::to_string(n) + " needs y_1(0)..y_" + std::to_string(n) + "(0)");
    const double s = varsigma;
    const double a = y0[0];
    switch (n) {
    case 1:
        return a * std::exp(s);
    case 2:
        return (y0[1] + 2.0 * a * a * s) * std::exp(2.0 * s);
    case 3:
        return (y0[2] + 1.5 * a * (3.0 * y0[1] + a * a) * s + 4.5 * a * a * a * s * s) * std::exp(3.0 * s);
    default: {
        const double b = y0[1];
        const double c = y0[2];
        const double a2 = a * a;
        const double a4 = a2 * a2;
        const double linear = 2.0 / 3.0 * a4 + 4.0 * a2 * b + 16.0 / 3.0 * a * c + 2.0 * b * b;
        const double quadratic = 16.0 * a2 * b + 8.0 * a4;
        const double cubic = 32.0 / 3.0 * a4;
        return (y0[3] + s * (linear + s * (quadratic + s * cubic))) * std::exp(4.0 * s);
    }
    }
}

MomentVector limit_moments(const QParam& q, int count, int steps)
{
    q.require_deformed("limit_moments");
    if (count < 1)
        throw DomainError("number of moments must be positive");
    const std::vector<double> ones(static_cast<std::size_t>(count), 1.0);
    const double varsigma = q.log_inv_q() * q.log_inv_q();
    auto state = integrate_moments(ones, varsigma, steps);
    return {MomentVector::Kind::p, std::move(state.y)};
}

MomentVector limit_h_moments(const QParam& q, int count, int steps)
{
    return p_to_h(limit_moments(q, count, steps));
}

double structure_fit_residual(int n, std::span<const double> y0, double varsigma_max, int samples, int steps)
{
    if (n < 1 || static_cast<std::size_t>(n) > y0.size())
        throw DomainError("moment index out of range");
    if (samples <= n)
        throw DomainError("need more samples than polynomial coefficients");
    if (!(varsigma_max > 0.0))
        throw DomainError("sampling interval must have positive length");

    const auto degree = static_cast<Eigen::Index>(n - 1);
    Eigen::MatrixXd design(samples, degree + 1);
    Eigen::VectorXd target(samples);
    const std::vector<double> head(y0.begin(), y0.begin() + n);
    for (int j = 0; j < samples; ++j) {
        const double u = static_cast<double>(j) / (samples - 1);
        const double s = u * varsigma_max;
        const auto state = integrate_moments(head, s, steps);
        target(j) = std::exp(-n * s) * state.y[static_cast<std::size_t>(n - 1)];
        double power = 1.0;
        for (Eigen::Index d = 0; d <= degree; ++d) {
            design(j, d) = power;
            power *= u;
        }
    }
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(target);
    const double scale = target.cwiseAbs().maxCoeff();
    return (design * coeffs - target).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
}

}  // namespace qpl
