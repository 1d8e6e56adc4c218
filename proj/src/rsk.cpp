#include "qpl/rsk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qpl {

Permutation::Permutation(std::vector<int> one_line) : one_line_(std::move(one_line))
{
    std::vector<bool> seen(one_line_.size() + 1, false);
    for (int v : one_line_) {
        if (v < 1 || v > size() || seen[static_cast<std::size_t>(v)])
            throw DomainError("not a permutation of 1.." + std::to_string(size()));
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const
{
    std::vector<int> inv(one_line_.size());
    for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>((*this)(i) - 1)] = i;
    return Permutation(std::move(inv));
}

StandardTableau::StandardTableau(std::vector<std::vector<int>> rows) : rows_(std::move(rows))
{
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (row.empty())
            throw DomainError("tableau rows must be nonempty");
        if (r > 0 && row.size() > rows_[r - 1].size())
            throw DomainError("tableau shape is not a partition");
        for (std::size_t c = 0; c < row.size(); ++c) {
            const int v = row[c];
            if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
                throw DomainError("tableau entries must be exactly 1..n");
            seen[static_cast<std::size_t>(v)] = true;
            if (c > 0 && row[c - 1] >= v)
                throw DomainError("tableau row " + std::to_string(r + 1) + " is not increasing");
            if (r > 0 && rows_[r - 1][c] >= v)
                throw DomainError("tableau column " + std::to_string(c + 1) + " is not increasing");
        }
    }
}

int StandardTableau::size() const noexcept
{
    int n = 0;
    for (const auto& row : rows_) n += static_cast<int>(row.size());
    return n;
}

Partition StandardTableau::shape() const
{
    std::vector<int> parts;
    for (const auto& row : rows_) parts.push_back(static_cast<int>(row.size()));
    return Partition(std::move(parts));
}

std::vector<int> descents(const Permutation& sigma)
{
    std::vector<int> out;
    for (int i = 1; i < sigma.size(); ++i)
        if (sigma(i) > sigma(i + 1)) out.push_back(i);
    return out;
}

std::vector<int> descents(const StandardTableau& tableau)
{
    const int n = tableau.size();
    std::vector<int> row_of(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t r = 0; r < tableau.rows().size(); ++r)
        for (int v : tableau.rows()[r]) row_of[static_cast<std::size_t>(v)] = static_cast<int>(r);
    std::vector<int> out;
    for (int i = 1; i < n; ++i)
        if (row_of[static_cast<std::size_t>(i + 1)] > row_of[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

int maj(const Permutation& sigma)
{
    const auto d = descents(sigma);
    return std::accumulate(d.begin(), d.end(), 0);
}

int maj_tableau(const StandardTableau& tableau)
{
    const auto d = descents(tableau);
    return std::accumulate(d.begin(), d.end(), 0);
}

RskPair rsk(const Permutation& sigma)
{
    std::vector<std::vector<int>> p;
    std::vector<std::vector<int>> q;
    for (int i = 1; i <= sigma.size(); ++i) {
        int value = sigma(i);
        std::size_t r = 0;
        for (;; ++r) {
            if (r == p.size()) {
                p.push_back({value});
                q.push_back({i});
                break;
            }
            auto& row = p[r];
            auto it = std::upper_bound(row.begin(), row.end(), value);
            if (it == row.end()) {
                row.push_back(value);
                q[r].push_back(i);
                break;
            }
            std::swap(*it, value);
        }
    }
    return {StandardTableau(std::move(p)), StandardTableau(std::move(q))};
}

Partition rsk_shape(const Permutation& sigma)
{
    return rsk(sigma).insertion.shape();
}

namespace {

void fill_tableaux(std::vector<int>& shape, int n, std::vector<std::vector<int>>& rows,
                   std::vector<StandardTableau>& out)
{
    // Place the largest remaining entry n in each removable corner in turn.
    if (n == 0) {
        out.emplace_back(rows);
        return;
    }
    for (std::size_t r = 0; r < shape.size(); ++r) {
        const bool removable = shape[r] > 0 && (r + 1 == shape.size() || shape[r + 1] < shape[r]);
        if (!removable) continue;
        --shape[r];
        rows[r][static_cast<std::size_t>(shape[r])] = n;
        fill_tableaux(shape, n - 1, rows, out);
        ++shape[r];
    }
}

// Shape of the RS insertion tableau, written into `lengths`; `rows` is scratch space.
void insertion_shape(std::span<const int> word, std::vector<std::vector<int>>& rows,
                     std::vector<int>& lengths)
{
    for (auto& row : rows) row.clear();
    std::size_t used = 0;
    for (int value : word) {
        for (std::size_t r = 0;; ++r) {
            if (r == used) {
                if (rows.size() == used) rows.emplace_back();
                rows[used++].push_back(value);
                break;
            }
            auto& row = rows[r];
            auto it = std::upper_bound(row.begin(), row.end(), value);
            if (it == row.end()) {
                row.push_back(value);
                break;
            }
            std::swap(*it, value);
        }
    }
    lengths.clear();
    for (std::size_t r = 0; r < used; ++r) lengths.push_back(static_cast<int>(rows[r].size()));
}

int maj_of(std::span<const int> word)
{
    int total = 0;
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (word[i] > word[i + 1]) total += static_cast<int>(i) + 1;
    return total;
}

using ShapeTable = std::map<Partition, Polynomial>;

// Permutations with σ(1) = first, in lexicographic order.
void accumulate_block(int n, int first, ShapeTable& table)
{
    const std::size_t degree = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::vector<int> word;
    word.push_back(first);
    for (int v = 1; v <= n; ++v)
        if (v != first) word.push_back(v);
    std::vector<std::vector<int>> scratch;
    std::vector<int> lengths;
    do {
        insertion_shape(word, scratch, lengths);
        auto& poly = table[Partition(lengths)];
        if (poly.empty()) poly.assign(degree + 1, 0);
        ++poly[static_cast<std::size_t>(maj_of(word))];
    } while (std::next_permutation(word.begin() + 1, word.end()));
}

void merge_into(ShapeTable& total, const ShapeTable& part)
{
    for (const auto& [shape, poly] : part) {
        auto& target = total[shape];
        if (target.empty()) target.assign(poly.size(), 0);
        for (std::size_t k = 0; k < poly.size(); ++k) target[k] += poly[k];
    }
}

void check_permutation_size(int n)
{
    if (n < 1)
        throw DomainError("permutation size must be at least 1");
    if (n > kMaxPermutationSize)
        throw CapacityError("S(" + std::to_string(n) + ") enumeration exceeds the limit n ≤ " +
                            std::to_string(kMaxPermutationSize));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b)
{
    Polynomial c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// 1 - q^k
Polynomial one_minus_power(int k)
{
    Polynomial p(static_cast<std::size_t>(k) + 1, 0);
    p[0] = 1;
    p[static_cast<std::size_t>(k)] -= 1;
    return p;
}

}  // namespace

std::vector<StandardTableau> standard_tableaux(const Partition& lambda)
{
    if (lambda.size() > kMaxTableauSize)
        throw CapacityError("tableau enumeration is limited to " + std::to_string(kMaxTableauSize) +
                            " boxes");
    std::vector<int> shape(lambda.parts().begin(), lambda.parts().end());
    std::vector<std::vector<int>> rows;
    for (int len : shape) rows.emplace_back(static_cast<std::size_t>(len), 0);
    std::vector<StandardTableau> out;
    fill_tableaux(shape, lambda.size(), rows, out);
    return out;
}

ShapeTable maj_shape_polynomials(int n)
{
    check_permutation_size(n);
    std::vector<ShapeTable> blocks(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
    for (int first = 1; first <= n; ++first)
        accumulate_block(n, first, blocks[static_cast<std::size_t>(first - 1)]);
    ShapeTable total;
    for (const auto& block : blocks) merge_into(total, block);
    return total;
}

ShapeTable maj_shape_polynomials_serial(int n)
{
    check_permutation_size(n);
    ShapeTable total;
    for (int first = 1; first <= n; ++first) accumulate_block(n, first, total);
    return total;
}

Polynomial mahonian_polynomial(int n)
{
    Polynomial p{1};
    for (int i = 1; i <= n; ++i) p = multiply(p, Polynomial(static_cast<std::size_t>(i), 1));
    return p;
}

std::int64_t pushforward_polynomial_defect(int n)
{
    const auto table = maj_shape_polynomials(n);
    Polynomial factorial_part{1};
    for (int i = 1; i <= n; ++i) factorial_part = multiply(factorial_part, one_minus_power(i));

    std::int64_t defect = 0;
    for (const auto& [shape, poly] : table) {
        const auto hooks = hook_data(shape);
        Polynomial lhs = poly;
        for (int h : hooks.hooks) lhs = multiply(lhs, one_minus_power(h));

        Polynomial rhs(static_cast<std::size_t>(hooks.b_stat), 0);
        const auto dim = hooks.dim.convert_to<std::int64_t>();
        for (std::int64_t c : factorial_part) rhs.push_back(dim * c);

        const std::size_t len = std::max(lhs.size(), rhs.size());
        lhs.resize(len, 0);
        rhs.resize(len, 0);
        for (std::size_t k = 0; k < len; ++k) defect = std::max(defect, std::abs(lhs[k] - rhs[k]));
    }
    return defect;
}

double evaluate(const Polynomial& p, double x)
{
    double value = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) value = value * x + static_cast<double>(*it);
    return value;
}

std::map<Partition, double> pushforward_exact(int n, const QParam& q)
{
    check_permutation_size(n);
    q.require_deformed("pushforward_exact");
    const auto table = maj_shape_polynomials(n);
    double total = 0.0;
    std::map<Partition, double> out;
    for (const auto& [shape, poly] : table) {
        const double w = evaluate(poly, q.value());
        out[shape] = w;
        total += w;
    }
    // Σ_{S(n)} q^{MAJ} = Π_{i≤n} (1-q^i)/(1-q)
    double poincare = 1.0;
    for (int i = 1; i <= n; ++i) poincare *= q.bracket(i) / q.bracket(1);
    if (std::fabs(total - poincare) > 1e-12 * poincare)
        throw Error("MAJ weights do not sum to the Poincaré polynomial");
    for (auto& [shape, w] : out) w /= total;
    return out;
}

double tableau_genfun_check(const Partition& lambda, const QParam& q)
{
    const auto tableaux = standard_tableaux(lambda);
    double lhs = 0.0;
    for (const auto& t : tableaux) lhs += std::pow(q.value(), maj_tableau(t));
    const auto hooks = hook_data(lambda);
    // [n]!/Π[h] as a product of ratios so neither side underflows.
    std::vector<int> hs = hooks.hooks;
    std::sort(hs.begin(), hs.end());
    double rhs = std::pow(q.value(), static_cast<double>(hooks.b_stat));
    for (int i = 1; i <= lambda.size(); ++i)
        rhs *= q.is_classical() ? static_cast<double>(i) / hs[static_cast<std::size_t>(i - 1)]
                                : q.bracket(i) / q.bracket(hs[static_cast<std::size_t>(i - 1)]);
    return lhs - rhs;
}

}  // namespace qpl
