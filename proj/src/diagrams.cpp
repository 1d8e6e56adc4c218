#include "qpl/diagrams.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace qpl {

Limits Limits::from_env()
{
    Limits limits;
    if (const char* env = std::getenv("QPL_MAX_N")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0 && value <= 100000)
            limits.max_n = static_cast<int>(value);
    }
    return limits;
}

const Limits& default_limits()
{
    static const Limits limits = Limits::from_env();
    return limits;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0)
            throw DomainError("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw DomainError("partition parts must be weakly decreasing");
    }
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::vector<int> Partition::conjugate() const
{
    std::vector<int> cols(parts_.empty() ? 0 : parts_.front(), 0);
    for (int row : parts_)
        for (int j = 0; j < row; ++j) ++cols[j];
    return cols;
}

std::vector<int> Partition::addable_rows() const
{
    // Content of the addable cell in row i is parts_[i] - i; it decreases with i.
    std::vector<int> rows;
    rows.reserve(parts_.size() + 1);
    rows.push_back(length());
    for (int i = length() - 1; i >= 0; --i) {
        if (i == 0 || parts_[i - 1] > parts_[i])
            rows.push_back(i);
    }
    return rows;
}

Partition Partition::with_box(int row) const
{
    if (row < 0 || row > length() || (row > 0 && (*this)[row - 1] == (*this)[row]))
        throw DomainError("cannot add a box to row " + std::to_string(row));
    Partition next = *this;
    if (row == length())
        next.parts_.push_back(1);
    else
        ++next.parts_[row];
    ++next.size_;
    return next;
}

std::string Partition::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(parts_[i]);
    }
    return out;
}

Partition Partition::parse(const std::string& text)
{
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<int> parts;
    int value = 0;
    while (in >> value) parts.push_back(value);
    if (!in.eof())
        throw DomainError("cannot parse partition '" + text + "'");
    return Partition(std::move(parts));
}

std::uint64_t partition_count(int n)
{
    if (n < 0) return 0;
    // p(k) = Σ_{j≥1} (-1)^{j+1} [p(k - j(3j-1)/2) + p(k - j(3j+1)/2)]
    std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    constexpr std::int64_t cap = std::int64_t{1} << 62;
    for (int k = 1; k <= n; ++k) {
        std::int64_t total = 0;
        for (int j = 1;; ++j) {
            const int g1 = j * (3 * j - 1) / 2;
            if (g1 > k) break;
            const int g2 = j * (3 * j + 1) / 2;
            std::int64_t term = p[k - g1] + (g2 <= k ? p[k - g2] : 0);
            total += (j % 2 == 1) ? term : -term;
        }
        if (total > cap)
            throw CapacityError("p(" + std::to_string(k) + ") exceeds 64-bit range");
        p[k] = total;
    }
    return static_cast<std::uint64_t>(p[n]);
}

std::vector<Partition> enumerate_level(int n, const Limits& limits)
{
    if (n < 0)
        throw DomainError("level must be nonnegative");
    if (n > limits.max_n)
        throw CapacityError("level " + std::to_string(n) + " exceeds the enumeration limit " +
                            std::to_string(limits.max_n));
    const std::uint64_t count = partition_count(n);
    if (count > limits.max_partitions)
        throw CapacityError("p(" + std::to_string(n) + ") = " + std::to_string(count) +
                            " exceeds the partition-count limit");

    std::vector<Partition> out;
    out.reserve(count);
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> a{n};
    for (;;) {
        out.emplace_back(a);
        // Rightmost part larger than 1; everything after it is 1s.
        int ones = 0;
        while (!a.empty() && a.back() == 1) {
            a.pop_back();
            ++ones;
        }
        if (a.empty()) break;
        const int v = --a.back();
        int rest = ones + 1;
        while (rest > 0) {
            const int part = std::min(v, rest);
            a.push_back(part);
            rest -= part;
        }
    }
    return out;
}

namespace {

BigCount factorial(int n)
{
    BigCount f = 1;
    try {
        for (int k = 2; k <= n; ++k) f *= k;
    } catch (const std::exception&) {
        throw CapacityError(std::to_string(n) + "! overflows exact arithmetic");
    }
    return f;
}

}  // namespace

HookData hook_data(const Partition& lambda, const Limits& limits)
{
    const int n = lambda.size();
    if (n > limits.max_n)
        throw CapacityError("|λ| = " + std::to_string(n) + " exceeds n_max " +
                            std::to_string(limits.max_n));
    const BigCount nf = factorial(n);
    HookData data;
    data.hooks.reserve(static_cast<std::size_t>(n));
    const auto cols = lambda.conjugate();
    BigCount hook_product = 1;
    for (int i = 0; i < lambda.length(); ++i) {
        data.b_stat += static_cast<std::int64_t>(i) * lambda[i];
        for (int j = 0; j < lambda[i]; ++j) {
            const int h = lambda[i] - i + cols[j] - j - 1;
            data.hooks.push_back(h);
            hook_product *= h;
        }
    }
    if (nf % hook_product != 0)
        throw Error("hook product does not divide n!");
    data.dim = nf / hook_product;
    return data;
}

IntegerDiagram to_interlacing(const Partition& lambda)
{
    std::vector<int> minima;
    std::vector<int> maxima;
    for (int row : lambda.addable_rows()) minima.push_back(lambda[row] - row);
    for (int i = lambda.length() - 1; i >= 0; --i) {
        if (i == lambda.length() - 1 || lambda[i] > lambda[i + 1])
            maxima.push_back(lambda[i] - 1 - i);
    }
    return IntegerDiagram(std::move(minima), std::move(maxima));
}

Partition from_interlacing(const IntegerDiagram& diagram)
{
    if (diagram.center() != 0)
        throw InterlacingError("profile is not centered at 0");
    // Walk unit segments from x_1 to x_{m+1}; every down-step closes a row whose
    // length is the number of up-steps seen so far.
    const auto xs = diagram.minima();
    const auto ys = diagram.maxima();
    std::vector<int> rows_left_to_right;
    int ups = 0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        ups += ys[k] - xs[k];
        for (int s = ys[k]; s < xs[k + 1]; ++s) rows_left_to_right.push_back(ups);
    }
    std::vector<int> parts(rows_left_to_right.rbegin(), rows_left_to_right.rend());
    return Partition(std::move(parts));
}

}  // namespace qpl
