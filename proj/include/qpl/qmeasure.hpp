#pragma once

#include "qpl/diagrams.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

/// M_q^{(n)}(λ) = (1-q)^n dim λ q^{b(λ)} / Π[h(u)], with [k] = 1 - q^k and n = |λ|.
/// For q = 1 returns the Plancherel weight dim²λ / n!.
double q_measure(const Partition& lambda, const QParam& q);

/// Natural log of q_measure; stays finite where the value itself underflows.
double log_q_measure(const Partition& lambda, const QParam& q);

/// Harmonic function φ(λ) = (1-q)^{|λ|} q^{b(λ)} Π[h(u)]^{-1} (the Schur function at
/// α_k = (1-q)q^k, β = 0). Requires 0 < q < 1.
double harmonic(const Partition& lambda, const QParam& q);

/// Relative residual of the hook identity Σ_{|λ|=n} q^{b(λ)} dim λ / Π[h(u)] = (1-q)^{-n},
/// returned as (left side)·(1-q)^n − 1. Requires 0 < q < 1.
double hook_identity_residual(int n, const QParam& q, const Limits& limits = default_limits());

}  // namespace qpl
