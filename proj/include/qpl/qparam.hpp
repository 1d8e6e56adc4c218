#pragma once

#include <cmath>

#include "qpl/errors.hpp"

namespace qpl {

/// Deformation parameter q ∈ (0,1]. q = 1 is the classical (undeformed) limit.
class QParam {
public:
    explicit QParam(double q) : q_(q)
    {
        if (!(q > 0.0 && q <= 1.0))
            throw DomainError("q must lie in (0,1], got " + std::to_string(q));
        log_inv_q_ = -std::log(q);
    }

    double value() const noexcept { return q_; }
    /// ln(1/q) ≥ 0.
    double log_inv_q() const noexcept { return log_inv_q_; }
    bool is_classical() const noexcept { return q_ == 1.0; }

    /// Throws unless 0 < q < 1.
    void require_deformed(const char* what) const
    {
        if (is_classical())
            throw DomainError(std::string(what) + " requires 0 < q < 1");
    }

    /// [d] = 1 - q^d, evaluated as -expm1(-d ln(1/q)) for accuracy near q = 1.
    /// Classical q = 1 returns d (the residue convention).
    double bracket(double d) const noexcept
    {
        if (is_classical())
            return d;
        return -std::expm1(-d * log_inv_q_);
    }

    /// ln|[d]|, finite for d != 0 and safe against overflow of q^d for d < 0.
    double log_abs_bracket(double d) const noexcept
    {
        if (is_classical())
            return std::log(std::fabs(d));
        const double a = d * log_inv_q_;  // q^d = e^{-a}
        if (a > 0.0)
            return std::log(-std::expm1(-a));
        // |1 - e^{-a}| = e^{-a}(1 - e^{a}) for a < 0
        return -a + std::log(-std::expm1(a));
    }

    /// q^d.
    double pow(double d) const noexcept { return std::exp(-d * log_inv_q_); }

private:
    double q_;
    double log_inv_q_ = 0.0;
};

}  // namespace qpl
