#include "qpl/limitshape.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace qpl {

namespace {

constexpr std::uintmax_t kMaxRootIterations = 200;

std::string bracket_text(double lo, double hi)
{
    return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

// ρ_peak: maximizer of ρ(1 − e^{a + ςρ}); with v = ςρ it solves v + log1p(v) = −a.
double peak_rho(double log_z, double varsigma)
{
    const double target = -log_z;
    auto f = [target](double v) { return v + std::log1p(v) - target; };
    std::uintmax_t iterations = kMaxRootIterations;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, target, -target, std::log1p(target),
                                                            boost::math::tools::eps_tolerance<double>(52),
                                                            iterations);
    return 0.5 * (lo + hi) / varsigma;
}

}  // namespace

BranchPoint branch_point(const QParam& q)
{
    q.require_deformed("branch_point");
    const double s = q.log_inv_q() * q.log_inv_q();
    const double rho = (s + std::sqrt(s * s + 4.0 * s)) / (2.0 * s);
    const double log_z = std::log1p(-1.0 / rho) - s * rho;
    return {std::exp(log_z), -log_z / q.log_inv_q(), (1.0 - q.value()) * rho};
}

double omega_rho(double log_z, double varsigma)
{
    if (!(varsigma > 0.0) || !std::isfinite(log_z))
        throw DomainError("omega_rho needs ς > 0 and finite ln z");
    if (!(log_z < 0.0))
        throw NoRootError("no root for z = q^x ≥ 1 (x ≤ 0)");

    auto g = [=](double rho) { return rho * -std::expm1(log_z + varsigma * rho) - 1.0; };
    const double hi = std::max(1.0, peak_rho(log_z, varsigma));
    const double g_lo = g(1.0);
    const double g_hi = g(hi);
    if (g_hi < 0.0)
        throw NoRootError("no root on the physical branch: ρ(1 − z e^{ςρ}) − 1 < 0 throughout ρ ∈ " +
                          bracket_text(1.0, hi) + " (z = " + std::to_string(std::exp(log_z)) +
                          " is past the branch point)");
    if (g_hi == 0.0) return hi;

    std::uintmax_t iterations = kMaxRootIterations;
    const auto [a, b] = boost::math::tools::toms748_solve(g, 1.0, hi, g_lo, g_hi,
                                                          boost::math::tools::eps_tolerance<double>(52),
                                                          iterations);
    if (iterations >= kMaxRootIterations)
        throw NoRootError("root refinement did not converge on " + bracket_text(1.0, hi));
    return 0.5 * (a + b);
}

OmegaRFunction::OmegaRFunction(const QParam& q, double tolerance) : q_(q), tolerance_(tolerance)
{
    q_.require_deformed("R_Ω");
    if (!(tolerance > 0.0))
        throw DomainError("solver tolerance must be positive");
    c_ = q_.log_inv_q() / (1.0 - q_.value());
}

double OmegaRFunction::operator()(double x) const
{
    const double L = q_.log_inv_q();
    double rho = 0.0;
    try {
        rho = omega_rho(-x * L, L * L);
    } catch (const NoRootError& e) {
        const double scale = 1.0 - q_.value();
        throw NoRootError("R_Ω(" + std::to_string(x) + "; q=" + std::to_string(q_.value()) + "): " + e.what() +
                          "; in r units the bracket is scaled by 1 − q = " + std::to_string(scale));
    }
    const double r = (1.0 - q_.value()) * rho;
    const double res = residual(x, r);
    if (!(std::fabs(res) < tolerance_))
        throw NoRootError("R_Ω(" + std::to_string(x) + ") residual " + std::to_string(res) +
                          " above tolerance " + std::to_string(tolerance_));
    return r;
}

double OmegaRFunction::residual(double x, double r) const
{
    const double L = q_.log_inv_q();
    // q^{x − c r} = e^{−L(x − c r)}
    return r * -std::expm1(-L * (x - c_ * r)) - (1.0 - q_.value());
}

double solve_r_omega(double x, const QParam& q)
{
    return OmegaRFunction(q)(x);
}

MomentVector series_h_omega(const QParam& q, int count)
{
    q.require_deformed("series_h_omega");
    if (count < 1 || count > kSeriesNodes / 4)
        throw DomainError("series_h_omega supports 1.." + std::to_string(kSeriesNodes / 4) + " coefficients");

    using Complex = std::complex<double>;
    const double s = q.log_inv_q() * q.log_inv_q();
    const double radius = 0.5 * branch_point(q).z;

    // ρ(z) around the circle, starting from the real root.
    std::vector<Complex> rho(kSeriesNodes);
    std::vector<Complex> nodes(kSeriesNodes);
    double worst_root_residual = 0.0;
    for (int j = 0; j < kSeriesNodes; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / kSeriesNodes;
        const Complex z = std::polar(radius, theta);
        nodes[static_cast<std::size_t>(j)] = z;
        Complex r;
        if (j == 0)
            r = omega_rho(std::log(radius), s);
        else if (j == 1)
            r = rho[0];
        else
            r = 2.0 * rho[static_cast<std::size_t>(j - 1)] - rho[static_cast<std::size_t>(j - 2)];
        bool converged = false;
        for (int it = 0; it < 60 && !converged; ++it) {
            const Complex e = z * std::exp(s * r);
            const Complex f = r * (1.0 - e) - 1.0;
            const Complex df = 1.0 - e * (1.0 + s * r);
            const Complex step = f / df;
            r -= step;
            converged = std::abs(step) <= 1e-15 * std::abs(r);
        }
        if (!converged)
            throw SingularSystemError("Newton continuation of R_Ω failed on the contour");
        worst_root_residual = std::max(worst_root_residual, std::abs(r * (1.0 - z * std::exp(s * r)) - 1.0));
        rho[static_cast<std::size_t>(j)] = r;
    }

    auto coefficients = [&](int stride) {
        std::vector<double> c(static_cast<std::size_t>(count));
        const int used = kSeriesNodes / stride;
        for (int n = 1; n <= count; ++n) {
            Complex sum = 0.0;
            for (int j = 0; j < kSeriesNodes; j += stride) {
                const auto k = static_cast<std::size_t>(j);
                sum += (rho[k] - 1.0) * std::pow(nodes[k], -n);
            }
            c[static_cast<std::size_t>(n - 1)] = sum.real() / used;
        }
        return c;
    };
    const auto full = coefficients(1);
    const auto half = coefficients(2);

    double extraction_residual = worst_root_residual;
    for (int n = 1; n <= count; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        extraction_residual = std::max(extraction_residual, std::fabs(full[k] - half[k]) / std::fabs(full[k]));
    }
    if (!(extraction_residual <= 1e-7))
        throw SingularSystemError("series extraction residual " + std::to_string(extraction_residual) +
                                  " exceeds 1e-7");
    return {MomentVector::Kind::h, full};
}

AutomodelResidual automodel_residual(double u, double varrho, double h)
{
    if (!(varrho > 0.0) || !std::isfinite(varrho))
        throw DomainError("ϱ must be positive");
    if (!(h >= 1e-10) || !std::isfinite(h) || h > 0.1)
        throw StepError("finite-difference step " + std::to_string(h) + " is outside [1e-10, 0.1]");

    // r̃ = ϱρ with ρ the root of ρ(1 − e^{−uϱ + ϱ²ρ}) = 1
    auto root = [](double uu, double rr) { return rr * omega_rho(-uu * rr, rr * rr); };
    const double hr = std::min(h, 0.25 * varrho);
    if (hr < 1e-300)
        throw StepError("step in ϱ underflows");

    AutomodelResidual out{};
    out.r = root(u, varrho);
    out.implicit = std::fabs(out.r * -std::expm1(-varrho * (u - out.r)) - varrho);
    const double r_u = (root(u + h, varrho) - root(u - h, varrho)) / (2.0 * h);
    const double r_rho = (root(u, varrho + hr) - root(u, varrho - hr)) / (2.0 * hr);
    const double transport = 2.0 * out.r * r_u - u * r_u - out.r;
    out.pde = std::fabs(transport + varrho * r_rho);
    out.classical = std::fabs(transport);
    return out;
}

double classical_r(double x)
{
    if (!(x >= 2.0))
        throw DomainError("the classical R-function is real only for x ≥ 2");
    return 2.0 / (x + std::sqrt(x * x - 4.0));
}

}  // namespace qpl
