#include "qpl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace qpl {

namespace {

namespace mp = boost::multiprecision;
using HighPrecision = mp::number<mp::cpp_bin_float<50>, mp::et_off>;

// Addable-cell contents (ascending) with their rows, and removable-cell contents.
struct Corners {
    std::vector<int> minima;
    std::vector<int> rows;
    std::vector<int> maxima;
};

void corners_of(const std::vector<int>& parts, Corners& c)
{
    c.minima.clear();
    c.rows.clear();
    c.maxima.clear();
    const int len = static_cast<int>(parts.size());
    c.rows.push_back(len);
    c.minima.push_back(-len);
    for (int i = len - 1; i >= 0; --i) {
        if (i == len - 1 || parts[i] > parts[i + 1])
            c.maxima.push_back(parts[i] - 1 - i);
        if (i == 0 || parts[i - 1] > parts[i]) {
            c.rows.push_back(i);
            c.minima.push_back(parts[i] - i);
        }
    }
}

template <class LogBracket>
void product_weights(std::span<const double> xs, std::span<const double> ys, LogBracket&& log_bracket,
                     std::vector<double>& out)
{
    const std::size_t count = xs.size();
    out.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double log_w = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) log_w += log_bracket(xs[k] - ys[i]);
        for (std::size_t i = 0; i < count; ++i)
            if (i != k) log_w -= log_bracket(xs[k] - xs[i]);
        out[k] = std::exp(log_w);
    }
}

}  // namespace

double TransitionWeights::total() const
{
    double sum = 0.0;
    double carry = 0.0;
    for (double w : weights) {
        const double y = w - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

TransitionWeights transition_weights(const InterlacingDiagram& w, const QParam& q)
{
    TransitionWeights result;
    product_weights(w.minima(), w.maxima(), [&](double d) { return q.log_abs_bracket(d); },
                    result.weights);
    return result;
}

TransitionWeights transition_weights(const Partition& lambda, const QParam& q)
{
    return transition_weights(to_interlacing(lambda).widen(), q);
}

std::vector<double> default_oracle_grid(const InterlacingDiagram& w)
{
    const std::size_t points = w.minima().size();
    std::vector<double> grid(points);
    const double start = w.highest() + 2.0;
    const double span = static_cast<double>(w.corners());
    for (std::size_t j = 0; j < points; ++j)
        grid[j] = points == 1 ? start : start + span * static_cast<double>(j) / static_cast<double>(points - 1);
    return grid;
}

TransitionWeights partial_fraction_weights(const InterlacingDiagram& w, const QParam& q,
                                           std::span<const double> x_grid)
{
    const auto xs = w.minima();
    const auto ys = w.maxima();
    const std::size_t unknowns = xs.size();
    if (x_grid.size() < unknowns)
        throw SingularSystemError("oracle grid needs at least " + std::to_string(unknowns) + " points");
    for (double x : x_grid) {
        if (!(x > w.highest() + 1.0))
            throw SingularSystemError("oracle grid point " + std::to_string(x) +
                                      " is not beyond the support by more than 1");
    }

    const HighPrecision log_q = q.is_classical() ? HighPrecision(0) : log(HighPrecision(q.value()));
    auto bracket = [&](const HighPrecision& d) -> HighPrecision {
        if (q.is_classical()) return d;
        return HighPrecision(1) - exp(d * log_q);
    };

    using Matrix = Eigen::Matrix<HighPrecision, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<HighPrecision, Eigen::Dynamic, 1>;
    Matrix a(static_cast<Eigen::Index>(x_grid.size()), static_cast<Eigen::Index>(unknowns));
    Vector b(static_cast<Eigen::Index>(x_grid.size()));
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const HighPrecision x(x_grid[j]);
        HighPrecision rhs(1);
        for (double y : ys) rhs *= bracket(x - HighPrecision(y));
        for (std::size_t k = 0; k < unknowns; ++k) {
            const HighPrecision denom = bracket(x - HighPrecision(xs[k]));
            rhs /= denom;
            a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = HighPrecision(1) / denom;
        }
        b(static_cast<Eigen::Index>(j)) = rhs;
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(HighPrecision(1e-40));
    if (qr.rank() < static_cast<Eigen::Index>(unknowns))
        throw SingularSystemError("partial-fraction system is rank deficient (grid points too close?)");
    const Vector mu = qr.solve(b);

    TransitionWeights result;
    result.weights.resize(unknowns);
    for (std::size_t k = 0; k < unknowns; ++k)
        result.weights[k] = static_cast<double>(mu(static_cast<Eigen::Index>(k)));
    return result;
}

TransitionWeights partial_fraction_weights(const InterlacingDiagram& w, const QParam& q)
{
    const auto grid = default_oracle_grid(w);
    return partial_fraction_weights(w, q, grid);
}

std::size_t sample_index(std::span<const double> weights, double u)
{
    if (weights.empty())
        throw DomainError("cannot sample from an empty weight list");
    double sum = 0.0;
    double carry = 0.0;
    std::vector<double> cumulative(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double y = weights[k] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        cumulative[k] = sum;
    }
    const double target = u * sum;
    for (std::size_t k = 0; k < cumulative.size(); ++k)
        if (target < cumulative[k]) return k;
    return cumulative.size() - 1;
}

GrowthSampler::GrowthSampler(const QParam& q, int max_boxes)
    : q_(q), max_boxes_(max_boxes), offset_(max_boxes + 2)
{
    if (max_boxes < 0 || max_boxes > kMaxGrowthBoxes)
        throw CapacityError("growth is limited to " + std::to_string(kMaxGrowthBoxes) + " boxes");
    // Corner contents lie in [-n, n], so differences lie in [-(n+2), n+2] at most.
    table_.assign(static_cast<std::size_t>(2 * offset_ + 1), 0.0);
    for (int d = -offset_; d <= offset_; ++d)
        if (d != 0) table_[static_cast<std::size_t>(d + offset_)] = q_.log_abs_bracket(d);
}

void GrowthSampler::weights(const Partition& lambda, std::vector<double>& out) const
{
    Corners c;
    corners_of(std::vector<int>(lambda.parts().begin(), lambda.parts().end()), c);
    out.resize(c.minima.size());
    for (std::size_t k = 0; k < c.minima.size(); ++k) {
        double log_w = 0.0;
        for (int y : c.maxima) log_w += log_bracket(c.minima[k] - y);
        for (std::size_t i = 0; i < c.minima.size(); ++i)
            if (i != k) log_w -= log_bracket(c.minima[k] - c.minima[i]);
        out[k] = std::exp(log_w);
    }
}

void GrowthSampler::step(std::vector<int>& rows, StreamRng& rng) const
{
    thread_local Corners c;
    thread_local std::vector<double> w;
    corners_of(rows, c);
    const std::size_t count = c.minima.size();
    w.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const int xk = c.minima[k];
        double log_w = 0.0;
        for (int y : c.maxima) log_w += log_bracket(xk - y);
        for (std::size_t i = 0; i < count; ++i)
            if (i != k) log_w -= log_bracket(xk - c.minima[i]);
        w[k] = std::exp(log_w);
    }
    const std::size_t k = sample_index(w, rng.uniform());
    const int row = c.rows[k];
    if (row == static_cast<int>(rows.size()))
        rows.push_back(1);
    else
        ++rows[static_cast<std::size_t>(row)];
}

Partition GrowthSampler::sample(int n, StreamRng& rng) const
{
    if (n < 0 || n > max_boxes_)
        throw CapacityError("requested " + std::to_string(n) + " boxes, sampler built for " +
                            std::to_string(max_boxes_));
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) step(rows, rng);
    return Partition(std::move(rows));
}

GrowthTrajectory grow_trajectory(int n, const QParam& q, std::uint64_t seed, std::uint64_t stream)
{
    if (n < 0 || n > kMaxGrowthBoxes)
        throw CapacityError("trajectory length must be in [0, " + std::to_string(kMaxGrowthBoxes) + "]");
    GrowthSampler sampler(q, n);
    StreamRng rng(seed, stream);
    GrowthTrajectory trajectory{{}, seed, stream, q.value()};
    trajectory.states.reserve(static_cast<std::size_t>(n) + 1);
    std::vector<int> rows;
    trajectory.states.emplace_back();
    for (int i = 0; i < n; ++i) {
        sampler.step(rows, rng);
        trajectory.states.emplace_back(rows);
    }
    return trajectory;
}

}  // namespace qpl
