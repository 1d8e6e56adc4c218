#include "qpl/growth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "qpl/dynamics.hpp"

namespace qpl {

DeformedDiagram deform(const InterlacingDiagram& w, const TransitionWeights& weights, double t)
{
    const auto xs = w.minima();
    const auto ys = w.maxima();
    if (weights.weights.size() != xs.size())
        throw DomainError("need one weight per minimum");
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("deformation time must be positive");

    std::vector<double> minima;
    std::vector<double> maxima;
    minima.reserve(2 * xs.size());
    maxima.reserve(xs.size() + ys.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double half_width = std::sqrt(weights.weights[k] * t);
        minima.push_back(xs[k] - half_width);
        minima.push_back(xs[k] + half_width);
        maxima.push_back(xs[k]);
        if (k < ys.size()) maxima.push_back(ys[k]);
    }
    DeformedDiagram out{w, t, InterlacingDiagram(), 0.0};
    try {
        out.deformed = InterlacingDiagram(std::move(minima), std::move(maxima));
    } catch (const InterlacingError& e) {
        throw InterlacingError("t = " + std::to_string(t) + " is too large: " + e.what());
    }
    for (double mu : weights.weights) out.added_area += mu * t;
    return out;
}

double growth_derivative(const InterlacingDiagram& w, const QParam& q, double x, double margin)
{
    const double r = r_diagram(w, q, x, margin);
    const auto mu = transition_weights(w, q);
    const double L2 = q.log_inv_q() * q.log_inv_q();
    double sum = 0.0;
    for (std::size_t k = 0; k < mu.weights.size(); ++k) {
        const double d = x - w.minima()[k];
        if (q.is_classical()) {
            sum += mu.weights[k] / (d * d);
        } else {
            const double b = q.bracket(d);
            sum += mu.weights[k] * L2 * q.pow(d) / (b * b);
        }
    }
    return r * sum;
}

double pde_residual(const InterlacingDiagram& w, const QParam& q, double x, double dt, double dx)
{
    if (!(dt > 0.0) || !(dx > 0.0) || !std::isfinite(dt) || !std::isfinite(dx))
        throw StepError("finite-difference steps must be positive");
    const double scale = std::max(1.0, std::fabs(x));
    if (dx < 1e-12 * scale || dt < 1e-14)
        throw StepError("finite-difference step below the round-off floor");
    if (dx >= 0.5)
        throw StepError("dx must be below the distance margin 0.5");

    const double r0 = r_diagram(w, q, x);
    const auto mu = transition_weights(w, q);
    constexpr double inner = 0.5;
    const double r_full = r_diagram(deform(w, mu, dt).deformed, q, x, inner);
    const double r_half = r_diagram(deform(w, mu, 0.5 * dt).deformed, q, x, inner);
    const double d_full = (r_full - r0) / dt;
    const double d_half = (r_half - r0) / (0.5 * dt);
    const double dR_dt = 2.0 * d_half - d_full;

    const double dR_dx = (r_diagram(w, q, x + dx, inner) - r_diagram(w, q, x - dx, inner)) / (2.0 * dx);
    const double coefficient = q.is_classical() ? 1.0 : (1.0 - q.value()) / q.log_inv_q();
    return std::fabs(dR_dx + coefficient * dR_dt / r0);
}

namespace {

struct TrialResult {
    Partition shape;
    std::vector<double> moments;
};

TrialResult run_trial(const GrowthSampler& sampler, int n_boxes, const QParam& q, int moments,
                      std::uint64_t seed, std::uint64_t stream, Scaling scaling)
{
    StreamRng rng(seed, stream);
    TrialResult out;
    out.shape = sampler.sample(n_boxes, rng);
    const auto profile = to_interlacing(out.shape);
    const double factor = scaling == Scaling::limit ? 1.0 / std::sqrt(static_cast<double>(n_boxes)) : 1.0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int x : profile.minima()) xs.push_back(x * factor);
    for (int y : profile.maxima()) ys.push_back(y * factor);
    out.moments = p_moments(InterlacingDiagram(std::move(xs), std::move(ys)), q, moments).values;
    return out;
}

McReport start_report(int n_boxes, const QParam& q, int trials, int moments, std::uint64_t seed,
                      const McOptions& options)
{
    if (n_boxes < 1 || n_boxes > kMaxGrowthBoxes)
        throw CapacityError("n_boxes must lie in [1, " + std::to_string(kMaxGrowthBoxes) + "]");
    if (trials < 1)
        throw DomainError("at least one trial is required");
    if (moments < 1)
        throw DomainError("number of moments must be positive");
    q.require_deformed("mc_limit_experiment");

    McReport report;
    report.n_boxes = n_boxes;
    report.q = q.value();
    report.kernel_q = options.scaling == Scaling::limit
                          ? std::exp(-q.log_inv_q() / std::sqrt(static_cast<double>(n_boxes)))
                          : q.value();
    report.trials = trials;
    report.moments = moments;
    report.seed = seed;
    report.scaling = options.scaling;
    return report;
}

void finish_report(McReport& report, std::vector<TrialResult>& results, const QParam& q, bool keep_shapes)
{
    const auto count = static_cast<std::size_t>(report.moments);
    std::vector<double> mean(count, 0.0);
    std::vector<double> m2(count, 0.0);
    double seen = 0.0;
    for (auto& trial : results) {
        seen += 1.0;
        for (std::size_t n = 0; n < count; ++n) {
            const double delta = trial.moments[n] - mean[n];
            mean[n] += delta / seen;
            m2[n] += delta * (trial.moments[n] - mean[n]);
        }
        report.samples.push_back(std::move(trial.moments));
        if (keep_shapes) report.shapes.push_back(std::move(trial.shape));
    }
    report.mean = mean;
    report.stderr_.assign(count, 0.0);
    if (report.trials > 1) {
        for (std::size_t n = 0; n < count; ++n)
            report.stderr_[n] = std::sqrt(m2[n] / (seen - 1.0) / seen);
    }
    if (report.scaling == Scaling::limit) report.target = limit_moments(q, report.moments).values;
}

}  // namespace

McReport mc_limit_experiment(int n_boxes, const QParam& q, int trials, int moments, std::uint64_t seed,
                             const McOptions& options)
{
    McReport report = start_report(n_boxes, q, trials, moments, seed, options);
    const GrowthSampler sampler(QParam(report.kernel_q), n_boxes);
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));

#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < trials; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            results[k] = run_trial(sampler, n_boxes, q, moments, seed, k, options.scaling);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    finish_report(report, results, q, options.keep_shapes);
    return report;
}

McReport mc_limit_experiment_serial(int n_boxes, const QParam& q, int trials, int moments,
                                    std::uint64_t seed, const McOptions& options)
{
    McReport report = start_report(n_boxes, q, trials, moments, seed, options);
    const GrowthSampler sampler(QParam(report.kernel_q), n_boxes);
    std::vector<TrialResult> results;
    results.reserve(static_cast<std::size_t>(trials));
    for (int i = 0; i < trials; ++i)
        results.push_back(run_trial(sampler, n_boxes, q, moments, seed, static_cast<std::uint64_t>(i),
                                    options.scaling));
    finish_report(report, results, q, options.keep_shapes);
    return report;
}

}  // namespace qpl
