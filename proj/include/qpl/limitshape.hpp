#pragma once

#include "qpl/moments.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

/// The point where the physical branch of R_Ω(·;q) ends.
///
/// With ρ = r/(1−q), z = q^x and ς = ln² q the equation r(1 − q^{x − c r}) = 1 − q
/// reads ρ(1 − z e^{ςρ}) = 1. Its left side, as a function of ρ ≥ 1, has a single
/// maximum; a root exists iff that maximum reaches 1, i.e. iff z ≤ z*, where
///   ρ* = (ς + √(ς² + 4ς)) / (2ς),   z* = (1 − 1/ρ*) e^{−ςρ*}.
struct BranchPoint {
    double z;  // z* = q^{x*}
    double x;  // smallest x with a root
    double r;  // R_Ω(x*;q) = (1−q)ρ*
};

BranchPoint branch_point(const QParam& q);

/// R_Ω(x;q): the root r > 0 of r(1 − q^{x − c r}) = 1 − q, c = ln(1/q)/(1−q), on the
/// branch with r → 1 − q as x → +∞.
class OmegaRFunction {
public:
    /// Requires 0 < q < 1. Roots are accepted when the residual is below `tolerance`.
    explicit OmegaRFunction(const QParam& q, double tolerance = 1e-12);

    const QParam& q() const noexcept { return q_; }
    double tolerance() const noexcept { return tolerance_; }
    double c() const noexcept { return c_; }

    /// Throws NoRootError, naming the bracket tried, when x < x* (no root on the branch).
    double operator()(double x) const;

    /// r(1 − q^{x − c r}) − (1 − q).
    double residual(double x, double r) const;

private:
    QParam q_;
    double tolerance_;
    double c_;
};

double solve_r_omega(double x, const QParam& q);

/// Smaller root ρ ≥ 1 of ρ(1 − e^{log_z + ςρ}) = 1 (log_z = ln z < 0, ς > 0).
/// Bracketed on [1, ρ_peak] and refined by TOMS 748; NoRootError past the branch point.
double omega_rho(double log_z, double varsigma);

/// Number of contour nodes used by series_h_omega.
inline constexpr int kSeriesNodes = 128;

/// ȟ_n as the Taylor coefficients of R_Ω/(1−q) − 1 in z = q^x, extracted by the
/// trapezoidal Cauchy integral on |z| = z*/2 with the complex root followed by Newton
/// continuation around the circle. SingularSystemError if the extraction residual
/// (agreement with the half-resolution rule, and the root residuals) exceeds 1e−7.
MomentVector series_h_omega(const QParam& q, int count);

struct AutomodelResidual {
    double r;          // rescaled root r̃ = ϱ R_Ω(u; e^{−ϱ}) / (1 − e^{−ϱ})
    double implicit;   // |r̃(1 − e^{−ϱ(u − r̃)}) − ϱ|
    double pde;        // |2 r̃ r̃_u − u r̃_u + ϱ r̃_ϱ − r̃|, central differences
    double classical;  // |2 r̃ r̃_u − u r̃_u − r̃|, the ϱ → 0 equation
};

/// Residuals of the self-similar form of R_Ω at (u, ϱ), ϱ = ln(1/q) > 0.
/// StepError if h is not a usable finite-difference step.
AutomodelResidual automodel_residual(double u, double varrho, double h = 1e-4);

/// Classical limit (x − √(x² − 4))/2, x ≥ 2.
double classical_r(double x);

}  // namespace qpl
