#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpl/diagrams.hpp"
#include "qpl/qparam.hpp"
#include "qpl/rng.hpp"

namespace qpl {

/// Largest number of boxes a single trajectory may grow.
inline constexpr int kMaxGrowthBoxes = 100'000;

/// μ_k(w;q) aligned with the minima x_1 < ... < x_{m+1}.
struct TransitionWeights {
    std::vector<double> weights;

    double total() const;
};

/// Product formula
///   μ_k = Π_{i<k} [x_k - y_i]/[x_k - x_i] · Π_{i>k} [x_k - y_{i-1}]/[x_k - x_i],
/// with [d] = 1 - q^d; at q = 1 the classical residues Π(x_k - y_i)/Π_{i≠k}(x_k - x_i).
TransitionWeights transition_weights(const InterlacingDiagram& w, const QParam& q);
TransitionWeights transition_weights(const Partition& lambda, const QParam& q);

/// Default oracle grid: m+1 equally spaced points on [x_max + 2, x_max + m + 2].
std::vector<double> default_oracle_grid(const InterlacingDiagram& w);

/// Independent oracle for transition_weights: solves
///   Σ_k μ_k / [x - x_k] = Π[x - y_i] / Π[x - x_i]
/// at each grid point (least squares if the grid is larger than m+1), in 50-digit
/// arithmetic so the ill-conditioned Cauchy-like system does not limit accuracy.
/// Throws SingularSystemError if a grid point is ≤ x_max + 1 or the system is rank deficient.
TransitionWeights partial_fraction_weights(const InterlacingDiagram& w, const QParam& q,
                                           std::span<const double> x_grid);
TransitionWeights partial_fraction_weights(const InterlacingDiagram& w, const QParam& q);

/// Inverse-CDF draw over unnormalized weights with a compensated running sum.
/// Returns the smallest k with u·total < cumsum_k.
std::size_t sample_index(std::span<const double> weights, double u);

struct GrowthTrajectory {
    std::vector<Partition> states;  // states[i] has i boxes
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double q = 1.0;
};

/// Simulates n steps of the q-Plancherel growth chain on integer diagrams.
///
/// The sampler caches ln|[d]| for every integer offset that can occur in a diagram
/// with at most max_boxes boxes, so each step costs O(m²) table lookups.
class GrowthSampler {
public:
    GrowthSampler(const QParam& q, int max_boxes);

    const QParam& q() const noexcept { return q_; }
    int max_boxes() const noexcept { return max_boxes_; }

    /// Transition weights of λ via the cached table; aligned with λ.addable_rows().
    void weights(const Partition& lambda, std::vector<double>& out) const;

    /// Adds one box to `rows` (row lengths, weakly decreasing) according to μ(λ;q).
    void step(std::vector<int>& rows, StreamRng& rng) const;

    /// Final diagram after n steps from ∅.
    Partition sample(int n, StreamRng& rng) const;

private:
    double log_bracket(int d) const noexcept { return table_[static_cast<std::size_t>(d + offset_)]; }

    QParam q_;
    int max_boxes_;
    int offset_;
    std::vector<double> table_;
};

/// Starts at ∅ and records every state; deterministic in (seed, stream).
GrowthTrajectory grow_trajectory(int n, const QParam& q, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace qpl
