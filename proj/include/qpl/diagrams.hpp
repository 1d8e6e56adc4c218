#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qpl/errors.hpp"

namespace qpl {

/// Exact counts (dim λ, n!) with overflow detection. 256 bits hold n! up to n = 57.
using BigCount = boost::multiprecision::checked_uint256_t;

/// Enumeration and exact-arithmetic caps.
struct Limits {
    int max_n = 40;                            // largest level / diagram size accepted
    std::uint64_t max_partitions = 5'000'000;  // largest level size enumerate_level will build

    /// Defaults, with max_n overridden by the QPL_MAX_N environment variable when set.
    static Limits from_env();
};

/// Process-wide limits, read from the environment once.
const Limits& default_limits();

/// A Young diagram λ: weakly decreasing positive parts.
class Partition {
public:
    Partition() = default;
    /// Throws DomainError unless parts are positive and weakly decreasing.
    explicit Partition(std::vector<int> parts);

    std::span<const int> parts() const noexcept { return parts_; }
    /// Number of boxes |λ|.
    int size() const noexcept { return size_; }
    /// Number of nonzero rows l(λ).
    int length() const noexcept { return static_cast<int>(parts_.size()); }
    bool empty() const noexcept { return parts_.empty(); }
    int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }

    /// Column lengths λ'.
    std::vector<int> conjugate() const;

    /// Rows (0-based) where a box can be added, ordered by increasing content.
    /// Index k of this list corresponds to minimum x_k of to_interlacing().
    std::vector<int> addable_rows() const;

    /// λ with one box appended to `row` (0-based). Throws DomainError if not addable.
    Partition with_box(int row) const;

    /// "3 2 1"; the empty partition prints as "".
    std::string to_string() const;
    /// Parses the to_string() format (also accepts commas).
    static Partition parse(const std::string& text);

    friend bool operator==(const Partition&, const Partition&) = default;
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b)
    {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Minima x_1 < y_1 < x_2 < ... < y_m < x_{m+1} of a rectangular diagram.
template <class T>
class BasicInterlacing {
public:
    BasicInterlacing() : minima_{T{0}} {}
    /// Throws InterlacingError unless |minima| = |maxima| + 1 and the sequences strictly interlace.
    BasicInterlacing(std::vector<T> minima, std::vector<T> maxima)
        : minima_(std::move(minima)), maxima_(std::move(maxima))
    {
        validate();
    }

    std::span<const T> minima() const noexcept { return minima_; }
    std::span<const T> maxima() const noexcept { return maxima_; }
    /// m, the number of maxima.
    std::size_t corners() const noexcept { return maxima_.size(); }

    /// Center s_0 = Σx − Σy.
    T center() const noexcept
    {
        T c{0};
        for (T x : minima_) c += x;
        for (T y : maxima_) c -= y;
        return c;
    }

    T lowest() const noexcept { return minima_.front(); }
    T highest() const noexcept { return minima_.back(); }

    BasicInterlacing<double> widen() const
    {
        return BasicInterlacing<double>(std::vector<double>(minima_.begin(), minima_.end()),
                                        std::vector<double>(maxima_.begin(), maxima_.end()));
    }

    friend bool operator==(const BasicInterlacing&, const BasicInterlacing&) = default;

private:
    void validate() const
    {
        if (minima_.size() != maxima_.size() + 1)
            throw InterlacingError("need exactly one more minimum than maxima");
        for (std::size_t k = 0; k < maxima_.size(); ++k) {
            if (!(minima_[k] < maxima_[k] && maxima_[k] < minima_[k + 1]))
                throw InterlacingError("minima and maxima do not strictly interlace at index " +
                                       std::to_string(k));
        }
    }

    std::vector<T> minima_;
    std::vector<T> maxima_;
};

using InterlacingDiagram = BasicInterlacing<double>;
/// Profile of a Young diagram: integer corners, center 0.
using IntegerDiagram = BasicInterlacing<int>;

struct HookData {
    std::vector<int> hooks;  // one per box, row-major
    std::int64_t b_stat = 0; // b(λ) = Σ (i-1) λ_i
    BigCount dim = 1;        // number of standard Young tableaux

    double dim_as_double() const { return dim.convert_to<double>(); }
};

/// All partitions of n in decreasing lexicographic order; {∅} for n = 0.
std::vector<Partition> enumerate_level(int n, const Limits& limits = default_limits());

/// p(n), by Euler's pentagonal recurrence. Throws CapacityError on 64-bit overflow.
std::uint64_t partition_count(int n);

/// Hook lengths, b(λ) and dim λ = |λ|!/Π h(u) in exact arithmetic.
HookData hook_data(const Partition& lambda, const Limits& limits = default_limits());

/// Russian-convention profile: minima are contents of addable cells, maxima of removable ones.
IntegerDiagram to_interlacing(const Partition& lambda);

/// Inverse of to_interlacing. Throws InterlacingError if the profile is not centered at 0.
Partition from_interlacing(const IntegerDiagram& diagram);

}  // namespace qpl
