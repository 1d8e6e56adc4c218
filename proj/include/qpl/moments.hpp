#pragma once

#include <span>
#include <vector>

#include "qpl/diagrams.hpp"
#include "qpl/kernel.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

struct Atom {
    double location;
    double weight;
};

/// Finitely supported measure. Probability measures have positive weights summing to 1;
/// signed (Rayleigh) measures of rectangular diagrams have weights ±1 and total mass 1.
class DiscreteMeasure {
public:
    enum class Mode { probability, signed_unit };

    DiscreteMeasure() : atoms_{{0.0, 1.0}} {}
    /// Throws DomainError if the atoms violate the invariants of `mode`.
    DiscreteMeasure(std::vector<Atom> atoms, Mode mode);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    Mode mode() const noexcept { return mode_; }
    double total_mass() const noexcept;
    double lowest() const noexcept;
    double highest() const noexcept;

private:
    std::vector<Atom> atoms_;
    Mode mode_ = Mode::probability;
};

/// Moments indexed 1..N; values[n-1] holds the n-th moment.
struct MomentVector {
    enum class Kind { p, h };

    Kind kind = Kind::p;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    /// 1-based access.
    double operator()(std::size_t n) const { return values.at(n - 1); }
};

/// Default number of moments.
inline constexpr int kDefaultMoments = 12;
/// Default distance from the support required of R-function arguments.
inline constexpr double kDefaultMargin = 1.0;

/// q-transition measure: atoms at the minima with weights μ_k(w;q).
DiscreteMeasure transition_measure(const InterlacingDiagram& w, const QParam& q);

/// +1 at every minimum, −1 at every maximum.
DiscreteMeasure rayleigh_measure(const InterlacingDiagram& w);

/// h_n = Σ weight · q^{−n·location}, n = 1..N. Requires 0 < q < 1.
/// Throws OverflowError when n·|location|·ln(1/q) > 700.
MomentVector h_moments(const DiscreteMeasure& mu, const QParam& q, int count);

/// p_n = Σ_k q^{−n x_k} − Σ_j q^{−n y_j}, n = 1..N. Requires 0 < q < 1.
MomentVector p_moments(const InterlacingDiagram& w, const QParam& q, int count);
MomentVector p_moments(const Partition& lambda, const QParam& q, int count);

/// Complete homogeneous from power sums via n h_n = Σ_{k=1}^{n} p_k h_{n−k}, h_0 = 1.
MomentVector p_to_h(const MomentVector& p);
/// Inverse of p_to_h on the same triangle.
MomentVector h_to_p(const MomentVector& h);

/// h_n as the explicit sum over partitions ρ ⊢ n of Π_k p_k^{r_k} / (k^{r_k} r_k!).
/// Exponential in N; kept as an independent check of p_to_h.
MomentVector p_to_h_partition_sum(const MomentVector& p);

/// R_w(x;q) = (1−q) Π_j [x − y_j] / Π_k [x − x_k]; for q = 1, Π(x − y_j)/Π(x − x_k).
/// x must lie at least `margin` outside [x_min, x_max] (DomainError otherwise);
/// PoleError if some |[x − x_k]| < 1e−12.
double r_diagram(const InterlacingDiagram& w, const QParam& q, double x, double margin = kDefaultMargin);

/// R_μ(x;q) = (1−q) Σ weight / [x − location]; for q = 1, Σ weight / (x − location).
double r_measure(const DiscreteMeasure& mu, const QParam& q, double x, double margin = kDefaultMargin);

/// Largest deviation over the grid between R_w and R_μ, and between the sum form
/// Σ μ/[x − s] and the product form exp Σ τ ln(1/[x − s]) of the correspondence.
double markov_krein_residual(const InterlacingDiagram& w, const DiscreteMeasure& mu, const QParam& q,
                             std::span<const double> x_grid, double margin = kDefaultMargin);

}  // namespace qpl
