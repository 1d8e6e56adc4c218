#include "qpl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpl {

namespace {

constexpr double kExponentLimit = 700.0;
constexpr double kPoleTolerance = 1e-12;

double q_power_neg(double location, int n, const QParam& q)
{
    // q^{−n s} = e^{n s ln(1/q)}
    const double exponent = n * location * q.log_inv_q();
    if (std::fabs(exponent) > kExponentLimit)
        throw OverflowError("q-moment of order " + std::to_string(n) + " at location " +
                            std::to_string(location) + " overflows double precision");
    return std::exp(exponent);
}

void require_count(int count)
{
    if (count < 1)
        throw DomainError("number of moments must be positive");
}

void require_outside(double lo, double hi, double x, double margin)
{
    if (!(x >= hi + margin || x <= lo - margin))
        throw DomainError("x = " + std::to_string(x) + " is not outside the support [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "] by margin " + std::to_string(margin));
}

double checked_bracket(const QParam& q, double d)
{
    const double b = q.bracket(d);
    if (std::fabs(b) < kPoleTolerance)
        throw PoleError("evaluation point within " + std::to_string(kPoleTolerance) + " of a pole");
    return b;
}

double prefactor(const QParam& q)
{
    return q.is_classical() ? 1.0 : 1.0 - q.value();
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, Mode mode) : atoms_(std::move(atoms)), mode_(mode)
{
    if (atoms_.empty())
        throw DomainError("a measure needs at least one atom");
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.location) || !std::isfinite(a.weight))
            throw DomainError("atoms must be finite");
        if (mode_ == Mode::probability && !(a.weight > 0.0))
            throw DomainError("probability weights must be positive");
        if (mode_ == Mode::signed_unit && a.weight != 1.0 && a.weight != -1.0)
            throw DomainError("Rayleigh weights must be +1 or -1");
    }
    const double mass = total_mass();
    if (mode_ == Mode::probability && std::fabs(mass - 1.0) > 1e-12)
        throw DomainError("probability weights sum to " + std::to_string(mass));
    if (mode_ == Mode::signed_unit && mass != 1.0)
        throw DomainError("Rayleigh measure must have total mass 1");
}

double DiscreteMeasure::total_mass() const noexcept
{
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight;
    return sum;
}

double DiscreteMeasure::lowest() const noexcept
{
    double lo = atoms_.front().location;
    for (const auto& a : atoms_) lo = std::min(lo, a.location);
    return lo;
}

double DiscreteMeasure::highest() const noexcept
{
    double hi = atoms_.front().location;
    for (const auto& a : atoms_) hi = std::max(hi, a.location);
    return hi;
}

DiscreteMeasure transition_measure(const InterlacingDiagram& w, const QParam& q)
{
    const auto mu = transition_weights(w, q);
    const double total = mu.total();
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < mu.weights.size(); ++k)
        atoms.push_back({w.minima()[k], mu.weights[k] / total});
    return DiscreteMeasure(std::move(atoms), DiscreteMeasure::Mode::probability);
}

DiscreteMeasure rayleigh_measure(const InterlacingDiagram& w)
{
    std::vector<Atom> atoms;
    const auto xs = w.minima();
    const auto ys = w.maxima();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        atoms.push_back({xs[k], 1.0});
        if (k < ys.size()) atoms.push_back({ys[k], -1.0});
    }
    return DiscreteMeasure(std::move(atoms), DiscreteMeasure::Mode::signed_unit);
}

MomentVector h_moments(const DiscreteMeasure& mu, const QParam& q, int count)
{
    require_count(count);
    q.require_deformed("h_moments");
    MomentVector h{MomentVector::Kind::h, std::vector<double>(static_cast<std::size_t>(count), 0.0)};
    for (int n = 1; n <= count; ++n) {
        double sum = 0.0;
        for (const auto& a : mu.atoms()) sum += a.weight * q_power_neg(a.location, n, q);
        h.values[static_cast<std::size_t>(n - 1)] = sum;
    }
    return h;
}

MomentVector p_moments(const InterlacingDiagram& w, const QParam& q, int count)
{
    require_count(count);
    q.require_deformed("p_moments");
    MomentVector p{MomentVector::Kind::p, std::vector<double>(static_cast<std::size_t>(count), 0.0)};
    for (int n = 1; n <= count; ++n) {
        double sum = 0.0;
        for (double x : w.minima()) sum += q_power_neg(x, n, q);
        for (double y : w.maxima()) sum -= q_power_neg(y, n, q);
        p.values[static_cast<std::size_t>(n - 1)] = sum;
    }
    return p;
}

MomentVector p_moments(const Partition& lambda, const QParam& q, int count)
{
    return p_moments(to_interlacing(lambda).widen(), q, count);
}

MomentVector p_to_h(const MomentVector& p)
{
    if (p.kind != MomentVector::Kind::p)
        throw DomainError("p_to_h expects power-sum moments");
    const std::size_t count = p.size();
    std::vector<double> h(count + 1, 0.0);
    h[0] = 1.0;
    for (std::size_t n = 1; n <= count; ++n) {
        double sum = 0.0;
        for (std::size_t k = 1; k <= n; ++k) sum += p.values[k - 1] * h[n - k];
        h[n] = sum / static_cast<double>(n);
    }
    return {MomentVector::Kind::h, std::vector<double>(h.begin() + 1, h.end())};
}

MomentVector h_to_p(const MomentVector& h)
{
    if (h.kind != MomentVector::Kind::h)
        throw DomainError("h_to_p expects complete homogeneous moments");
    const std::size_t count = h.size();
    // p_n = n h_n − Σ_{k=1}^{n−1} p_k h_{n−k}
    std::vector<double> p(count, 0.0);
    for (std::size_t n = 1; n <= count; ++n) {
        double sum = static_cast<double>(n) * h.values[n - 1];
        for (std::size_t k = 1; k < n; ++k) sum -= p[k - 1] * h.values[n - k - 1];
        p[n - 1] = sum;
    }
    return {MomentVector::Kind::p, std::move(p)};
}

MomentVector p_to_h_partition_sum(const MomentVector& p)
{
    if (p.kind != MomentVector::Kind::p)
        throw DomainError("p_to_h_partition_sum expects power-sum moments");
    const int count = static_cast<int>(p.size());
    MomentVector h{MomentVector::Kind::h, std::vector<double>(p.size(), 0.0)};
    for (int n = 1; n <= count; ++n) {
        double total = 0.0;
        for (const auto& rho : enumerate_level(n)) {
            // multiplicities r_k of part k
            std::vector<int> r(static_cast<std::size_t>(n) + 1, 0);
            for (int part : rho.parts()) ++r[static_cast<std::size_t>(part)];
            double term = 1.0;
            for (int k = 1; k <= n; ++k) {
                const int rk = r[static_cast<std::size_t>(k)];
                if (rk == 0) continue;
                term *= std::pow(p.values[static_cast<std::size_t>(k - 1)] / k, rk) / std::tgamma(rk + 1.0);
            }
            total += term;
        }
        h.values[static_cast<std::size_t>(n - 1)] = total;
    }
    return h;
}

double r_diagram(const InterlacingDiagram& w, const QParam& q, double x, double margin)
{
    require_outside(w.lowest(), w.highest(), x, margin);
    double value = prefactor(q);
    for (double y : w.maxima()) value *= q.bracket(x - y);
    for (double xk : w.minima()) value /= checked_bracket(q, x - xk);
    return value;
}

double r_measure(const DiscreteMeasure& mu, const QParam& q, double x, double margin)
{
    require_outside(mu.lowest(), mu.highest(), x, margin);
    double sum = 0.0;
    for (const auto& a : mu.atoms()) sum += a.weight / checked_bracket(q, x - a.location);
    return prefactor(q) * sum;
}

double markov_krein_residual(const InterlacingDiagram& w, const DiscreteMeasure& mu, const QParam& q,
                             std::span<const double> x_grid, double margin)
{
    const auto tau = rayleigh_measure(w);
    double worst = 0.0;
    for (double x : x_grid) {
        const double rw = r_diagram(w, q, x, margin);
        const double rm = r_measure(mu, q, x, margin);
        worst = std::max(worst, std::fabs(rw - rm));

        // exp Σ τ ln(1/[x − s]), with the sign of the bracket product carried separately
        double log_sum = 0.0;
        int sign = 1;
        for (const auto& a : tau.atoms()) {
            const double b = checked_bracket(q, x - a.location);
            log_sum -= a.weight * std::log(std::fabs(b));
            if (b < 0.0) sign = -sign;
        }
        const double product_form = sign * std::exp(log_sum);
        worst = std::max(worst, std::fabs(rm - prefactor(q) * product_form));
    }
    return worst;
}

}  // namespace qpl
