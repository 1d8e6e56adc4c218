#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qpl/diagrams.hpp"
#include "qpl/qparam.hpp"

namespace qpl {

/// Largest n for which S(n) is enumerated.
inline constexpr int kMaxPermutationSize = 9;
/// Largest shape for which standard tableaux are enumerated.
inline constexpr int kMaxTableauSize = 12;

/// A bijection of {1..n} in one-line notation.
class Permutation {
public:
    Permutation() = default;
    /// Throws DomainError unless the entries are exactly 1..n.
    explicit Permutation(std::vector<int> one_line);

    static Permutation identity(int n);

    std::span<const int> one_line() const noexcept { return one_line_; }
    int size() const noexcept { return static_cast<int>(one_line_.size()); }
    /// σ(i) for 1-based i.
    int operator()(int i) const noexcept { return one_line_[static_cast<std::size_t>(i - 1)]; }

    Permutation inverse() const;

private:
    std::vector<int> one_line_;
};

/// Rows of a standard Young tableau; entries 1..n increase along rows and down columns.
class StandardTableau {
public:
    StandardTableau() = default;
    /// Throws DomainError unless the rows form a standard tableau of partition shape.
    explicit StandardTableau(std::vector<std::vector<int>> rows);

    const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
    int size() const noexcept;
    Partition shape() const;

    friend bool operator==(const StandardTableau&, const StandardTableau&) = default;

private:
    std::vector<std::vector<int>> rows_;
};

/// Positions i with σ(i) > σ(i+1).
std::vector<int> descents(const Permutation& sigma);
/// Entries i such that i+1 sits in a strictly lower row.
std::vector<int> descents(const StandardTableau& tableau);

int maj(const Permutation& sigma);
int maj_tableau(const StandardTableau& tableau);

struct RskPair {
    StandardTableau insertion;  // P
    StandardTableau recording;  // Q
};

/// Row-insertion Robinson–Schensted correspondence.
RskPair rsk(const Permutation& sigma);
Partition rsk_shape(const Permutation& sigma);

/// Every standard tableau of shape λ (|λ| ≤ kMaxTableauSize).
std::vector<StandardTableau> standard_tableaux(const Partition& lambda);

/// Integer polynomial coefficients, lowest degree first.
using Polynomial = std::vector<std::int64_t>;

/// For each RSK shape of S(n), the MAJ generating polynomial Σ_{shape(σ)=λ} q^{MAJ(σ)}.
/// Parallel over blocks of permutations sharing their first entry.
std::map<Partition, Polynomial> maj_shape_polynomials(int n);
/// Single-threaded reference for maj_shape_polynomials.
std::map<Partition, Polynomial> maj_shape_polynomials_serial(int n);

/// Π_{i=1}^{n} (1 + q + ... + q^{i-1}).
Polynomial mahonian_polynomial(int n);

/// Exact check of Σ_{shape(σ)=λ} q^{MAJ(σ)} · Π(1 - q^{h(u)}) = dim λ · q^{b(λ)} · Π_{i≤n}(1 - q^i)
/// for every shape of size n. Returns the largest absolute coefficient difference (0 when it holds).
std::int64_t pushforward_polynomial_defect(int n);

/// Shape distribution of RSK under P(σ) ∝ q^{MAJ(σ)} on S(n).
/// Throws CapacityError for n > kMaxPermutationSize and DomainError unless 0 < q < 1.
std::map<Partition, double> pushforward_exact(int n, const QParam& q);

/// Σ_T q^{MAJ(T)} − q^{b(λ)} [n]! / Π[h(u)] over standard tableaux of shape λ,
/// with [k] = 1 - q^k (the (1-q)^n factors cancel).
double tableau_genfun_check(const Partition& lambda, const QParam& q);

/// Evaluates a polynomial at x by Horner's rule.
double evaluate(const Polynomial& p, double x);

}  // namespace qpl
