#pragma once

#include <cstdint>
#include <vector>

#include "qpl/diagrams.hpp"
#include "qpl/kernel.hpp"
#include "qpl/moments.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

/// w_t: the diagram w with a square of area μ_k t attached above each minimum x_k.
struct DeformedDiagram {
    InterlacingDiagram base;
    double t = 0.0;
    InterlacingDiagram deformed;
    double added_area = 0.0;  // Σ_k μ_k t

    std::span<const double> minima_t() const noexcept { return deformed.minima(); }
    std::span<const double> maxima_t() const noexcept { return deformed.maxima(); }
};

/// New minima x_k ± √(μ_k t); new maxima are the old minima and maxima.
/// InterlacingError when t is too large for the points to stay interlaced.
DeformedDiagram deform(const InterlacingDiagram& w, const TransitionWeights& weights, double t);

/// ∂_t R_{w_t}(x;q) at t = 0: R_w(x;q) Σ_k μ_k ln²(1/q) q^{x−x_k} / (1 − q^{x−x_k})²
/// (at q = 1: R_w Σ_k μ_k / (x − x_k)²).
double growth_derivative(const InterlacingDiagram& w, const QParam& q, double x,
                         double margin = kDefaultMargin);

/// |∂_x R + ((1−q)/ln(1/q)) R^{-1} ∂_t R| at (w, x). ∂_t R comes from R_{w_dt} and
/// R_{w_{dt/2}} (Richardson-corrected forward differences), ∂_x R from a central difference
/// with step dx. At q = 1 the coefficient (1−q)/ln(1/q) is its limit 1.
double pde_residual(const InterlacingDiagram& w, const QParam& q, double x, double dt, double dx);

/// How the kernel parameter is chosen in a growth experiment.
enum class Scaling {
    limit,  // kernel at q^{1/√n}, moments of the diagram rescaled by 1/√n at q
    fixed,  // kernel at q, moments of the unscaled diagram at q
};

struct McOptions {
    Scaling scaling = Scaling::limit;
    bool keep_shapes = true;
};

struct McReport {
    int n_boxes = 0;
    double q = 1.0;
    double kernel_q = 1.0;
    int trials = 0;
    int moments = 0;
    std::uint64_t seed = 0;
    Scaling scaling = Scaling::limit;
    std::vector<Partition> shapes;            // final diagram of each trial (if kept)
    std::vector<std::vector<double>> samples; // samples[trial][n-1] = p̂_n
    std::vector<double> mean;
    std::vector<double> stderr_;
    std::vector<double> target;               // p̌_n[q] (limit scaling only)
};

/// Grows `trials` independent diagrams of n_boxes boxes (trial i uses stream i of `seed`)
/// and reports the sample mean and standard error of each rescaled moment p̂_n, n ≤ N,
/// with the limit moments p̌_n[q] as targets. Trials run in parallel; aggregation is
/// in trial order, so the report does not depend on the thread count.
McReport mc_limit_experiment(int n_boxes, const QParam& q, int trials, int moments, std::uint64_t seed,
                             const McOptions& options = {});

/// Single-threaded reference for mc_limit_experiment.
McReport mc_limit_experiment_serial(int n_boxes, const QParam& q, int trials, int moments,
                                    std::uint64_t seed, const McOptions& options = {});

}  // namespace qpl
