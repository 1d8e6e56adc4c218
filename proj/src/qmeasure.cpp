#include "qpl/qmeasure.hpp"

#include <cmath>

namespace qpl {

namespace {

// n ln(1-q) + b ln q - Σ ln[h], i.e. ln φ(λ).
double log_harmonic(const HookData& data, int n, const QParam& q)
{
    double log_value = n * std::log1p(-q.value()) - static_cast<double>(data.b_stat) * q.log_inv_q();
    for (int h : data.hooks) log_value -= q.log_abs_bracket(h);
    return log_value;
}

double log_factorial(int n)
{
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

double log_q_measure(const Partition& lambda, const QParam& q)
{
    const HookData data = hook_data(lambda);
    const double log_dim = std::log(data.dim_as_double());
    if (q.is_classical())
        return 2.0 * log_dim - log_factorial(lambda.size());
    return log_dim + log_harmonic(data, lambda.size(), q);
}

double q_measure(const Partition& lambda, const QParam& q)
{
    return std::exp(log_q_measure(lambda, q));
}

double harmonic(const Partition& lambda, const QParam& q)
{
    q.require_deformed("harmonic");
    return std::exp(log_harmonic(hook_data(lambda), lambda.size(), q));
}

double hook_identity_residual(int n, const QParam& q, const Limits& limits)
{
    if (n < 1)
        throw DomainError("hook identity needs n >= 1");
    q.require_deformed("hook_identity_residual");
    // Each term times (1-q)^n is M_q^{(n)}(λ); sum with compensation.
    double sum = 0.0;
    double carry = 0.0;
    for (const Partition& lambda : enumerate_level(n, limits)) {
        const HookData data = hook_data(lambda, limits);
        const double term = std::exp(std::log(data.dim_as_double()) + log_harmonic(data, n, q));
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum - 1.0;
}

}  // namespace qpl
