#pragma once

#include <span>
#include <vector>

#include "qpl/moments.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

/// Default number of moments tracked by the ODE system.
inline constexpr int kDefaultOdeMoments = 8;
/// Default RK4 step count.
inline constexpr int kDefaultOdeSteps = 2000;
/// Largest acceptable Richardson error estimate (relative to max(1, |y|)).
inline constexpr double kIntegrationTolerance = 1e-6;

struct OdeState {
    double varsigma = 0.0;        // ς = t ln²(1/q)
    std::vector<double> y;        // y_1..y_N
    double error_estimate = 0.0;  // Richardson estimate |y(h) − y(h/2)|/15, relative
};

/// ς = t ln²(1/q).
double rescaled_time(double t, const QParam& q);

/// dy_n/dς = n² h_n(y), with h from y by n h_n = Σ_{k≤n} y_k h_{n−k}.
std::vector<double> ode_rhs(std::span<const double> y);

/// Classical RK4 from ς = 0 to ς_end with `steps` steps. The same integration with
/// 2·steps yields the error estimate; IntegrationError if it exceeds `tolerance`.
OdeState integrate_moments(std::span<const double> y0, double varsigma_end, int steps = kDefaultOdeSteps,
                           double tolerance = kIntegrationTolerance);

/// Same, in the natural variables (t, q).
OdeState integrate_moments(std::span<const double> y0, double t, const QParam& q,
                           int steps = kDefaultOdeSteps, double tolerance = kIntegrationTolerance);

/// Explicit solutions y_1..y_4. DomainError for n outside 1..4 or y0 shorter than n.
double closed_form(int n, double varsigma, std::span<const double> y0);

/// p̌_n[q] = y_n(ln² q) with y(0) = (1, ..., 1). Requires 0 < q < 1.
MomentVector limit_moments(const QParam& q, int count, int steps = kDefaultOdeSteps);

/// ȟ_n[q] = p_to_h(p̌[q]).
MomentVector limit_h_moments(const QParam& q, int count, int steps = kDefaultOdeSteps);

/// Relative residual of a least-squares fit of e^{−nς} y_n(ς) by a polynomial of degree
/// n−1, sampled at `samples` equally spaced ς ∈ [0, varsigma_max] (samples > n).
double structure_fit_residual(int n, std::span<const double> y0, double varsigma_max, int samples,
                              int steps = kDefaultOdeSteps);

}  // namespace qpl
