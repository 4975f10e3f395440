// Segmented sieves for the Liouville, Moebius and von Mangoldt functions and
// for prime lists, over ranges up to 2e9.
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace unilab {

inline constexpr std::uint64_t kSieveLimit = 2'000'000'000ULL;
inline constexpr std::uint64_t kMaxSegment = 100'000'000ULL;
inline constexpr std::size_t kSieveBlock = std::size_t{1} << 22;

enum class TableKind : std::uint8_t { liouville = 0, moebius = 1, mangoldt = 2 };

const char* to_string(TableKind kind);

// Dense table of one arithmetic function on [start, start + size).
//
// Liouville and Moebius values are stored as signed 8-bit codes; von Mangoldt
// values as natural logarithms in double precision. Immutable once built.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(TableKind kind, std::uint64_t start, std::vector<std::int8_t> codes);
    ValueTable(std::uint64_t start, std::vector<double> logs);

    TableKind kind() const noexcept { return kind_; }
    std::uint64_t start() const noexcept { return start_; }
    std::uint64_t end() const noexcept { return start_ + size(); }
    std::size_t size() const noexcept;
    bool covers(std::uint64_t lo, std::uint64_t hi) const noexcept {
        return lo >= start_ && hi <= end() && lo <= hi;
    }

    // Value at n; throws CoverageError outside the table.
    double value(std::uint64_t n) const;
    int code(std::uint64_t n) const;

    std::span<const std::int8_t> codes() const noexcept { return codes_; }
    std::span<const double> logs() const noexcept { return logs_; }

    // Binary layout, little endian:
    //   u8 kind | u64 start | u64 len | payload
    // payload is len x i8 for liouville/moebius and len x f64 for mangoldt.
    void write(std::ostream& out) const;
    static ValueTable read(std::istream& in);

    friend bool operator==(const ValueTable&, const ValueTable&) = default;

private:
    TableKind kind_ = TableKind::liouville;
    std::uint64_t start_ = 1;
    std::vector<std::int8_t> codes_;
    std::vector<double> logs_;
};

struct PrimeList {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::vector<std::uint64_t> primes;
};

// Table of `kind` on [a, b). Requires 1 <= a < b <= 2e9 and b - a <= 1e8.
ValueTable sieve_range(TableKind kind, std::uint64_t a, std::uint64_t b);

// All primes in [lo, hi], sorted. Requires 2 <= lo <= hi <= 2e9.
PrimeList primes_in(std::uint64_t lo, std::uint64_t hi);

// Primes up to sqrt(2e9), computed once.
std::span<const std::uint32_t> small_primes();

// Values of the completely multiplicative function determined by
// prime_value on [a, b), with f(1) = 1. Same ranges as sieve_range.
std::vector<std::complex<double>> sieve_completely_multiplicative(
    std::uint64_t a, std::uint64_t b,
    const std::function<std::complex<double>(std::uint64_t)>& prime_value);

}  // namespace unilab
