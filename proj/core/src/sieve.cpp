#include "unilab/sieve.hpp"

#include "unilab/error.hpp"
#include "unilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace unilab {

const char* to_string(TableKind kind) {
    switch (kind) {
    case TableKind::liouville: return "liouville";
    case TableKind::moebius: return "moebius";
    case TableKind::mangoldt: return "mangoldt";
    }
    return "unknown";
}

ValueTable::ValueTable(TableKind kind, std::uint64_t start, std::vector<std::int8_t> codes)
    : kind_(kind), start_(start), codes_(std::move(codes)) {
    if (kind == TableKind::mangoldt) throw ParameterError("mangoldt tables hold log values");
}

ValueTable::ValueTable(std::uint64_t start, std::vector<double> logs)
    : kind_(TableKind::mangoldt), start_(start), logs_(std::move(logs)) {}

std::size_t ValueTable::size() const noexcept {
    return kind_ == TableKind::mangoldt ? logs_.size() : codes_.size();
}

double ValueTable::value(std::uint64_t n) const {
    if (n < start_ || n >= end())
        throw CoverageError("value table [" + std::to_string(start_) + ", " +
                            std::to_string(end()) + ") does not cover " + std::to_string(n));
    return kind_ == TableKind::mangoldt ? logs_[n - start_] : codes_[n - start_];
}

int ValueTable::code(std::uint64_t n) const {
    if (kind_ == TableKind::mangoldt) throw ParameterError("mangoldt table has no codes");
    return static_cast<int>(value(n));
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw ParameterError("truncated value table header");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
    return v;
}

}  // namespace

void ValueTable::write(std::ostream& out) const {
    const char kind_byte = static_cast<char>(kind_);
    out.write(&kind_byte, 1);
    put_u64(out, start_);
    put_u64(out, size());
    if (kind_ == TableKind::mangoldt) {
        for (double v : logs_) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            put_u64(out, bits);
        }
    } else {
        out.write(reinterpret_cast<const char*>(codes_.data()),
                  static_cast<std::streamsize>(codes_.size()));
    }
}

ValueTable ValueTable::read(std::istream& in) {
    char kind_byte = 0;
    in.read(&kind_byte, 1);
    if (!in) throw ParameterError("empty value table stream");
    if (kind_byte < 0 || kind_byte > 2) throw ParameterError("unknown value table kind");
    const auto kind = static_cast<TableKind>(kind_byte);
    const std::uint64_t start = get_u64(in);
    const std::uint64_t len = get_u64(in);
    if (len > kMaxSegment) throw ParameterError("value table too long");
    if (kind == TableKind::mangoldt) {
        std::vector<double> logs(len);
        for (auto& v : logs) {
            const std::uint64_t bits = get_u64(in);
            std::memcpy(&v, &bits, sizeof v);
        }
        return ValueTable(start, std::move(logs));
    }
    std::vector<std::int8_t> codes(len);
    in.read(reinterpret_cast<char*>(codes.data()), static_cast<std::streamsize>(len));
    if (!in) throw ParameterError("truncated value table payload");
    return ValueTable(kind, start, std::move(codes));
}

std::span<const std::uint32_t> small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        const std::uint32_t limit =
            static_cast<std::uint32_t>(std::sqrt(static_cast<double>(kSieveLimit))) + 2;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

namespace {

void check_range(std::uint64_t a, std::uint64_t b) {
    if (a < 1 || a >= b)
        throw ParameterError("sieve range [" + std::to_string(a) + ", " + std::to_string(b) +
                             ") must satisfy 1 <= a < b");
    if (b > kSieveLimit) throw ParameterError("sieve range exceeds 2e9");
    if (b - a > kMaxSegment) throw ParameterError("sieve segment longer than 1e8; chain segments");
}

// Visits the prime factorisation of every n in [lo, hi) as a sequence of
// on_factor(index, p, exponent) calls, smallest prime first.
template <class OnFactor>
void factor_block(std::uint64_t lo, std::uint64_t hi, OnFactor&& on_factor) {
    const std::size_t len = hi - lo;
    std::vector<std::uint32_t> rem(len);
    std::iota(rem.begin(), rem.end(), static_cast<std::uint32_t>(lo));
    for (std::uint32_t p : small_primes()) {
        if (std::uint64_t{p} * p >= hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
            const std::size_t i = m - lo;
            std::uint32_t r = rem[i];
            unsigned e = 0;
            do {
                r /= p;
                ++e;
            } while (r % p == 0);
            rem[i] = r;
            on_factor(i, std::uint64_t{p}, e);
        }
    }
    for (std::size_t i = 0; i < len; ++i)
        if (rem[i] > 1) on_factor(i, std::uint64_t{rem[i]}, 1u);
}

template <class BlockFn>
void for_each_block(std::uint64_t a, std::uint64_t b, BlockFn&& fn) {
    const std::size_t blocks = (b - a + kSieveBlock - 1) / kSieveBlock;
    parallel_for(blocks, [&](std::size_t k) {
        const std::uint64_t lo = a + k * kSieveBlock;
        const std::uint64_t hi = std::min<std::uint64_t>(b, lo + kSieveBlock);
        fn(lo, hi);
    });
}

}  // namespace

ValueTable sieve_range(TableKind kind, std::uint64_t a, std::uint64_t b) {
    check_range(a, b);
    const std::size_t len = b - a;

    if (kind == TableKind::mangoldt) {
        std::vector<double> logs(len, 0.0);
        for_each_block(a, b, [&](std::uint64_t lo, std::uint64_t hi) {
            const std::size_t off = lo - a;
            std::vector<std::uint32_t> base(hi - lo, 0);
            std::vector<std::uint8_t> distinct(hi - lo, 0);
            factor_block(lo, hi, [&](std::size_t i, std::uint64_t p, unsigned) {
                base[i] = static_cast<std::uint32_t>(p);
                if (distinct[i] < 2) ++distinct[i];
            });
            for (std::size_t i = 0; i < hi - lo; ++i)
                if (distinct[i] == 1) logs[off + i] = std::log(static_cast<double>(base[i]));
        });
        return ValueTable(a, std::move(logs));
    }

    std::vector<std::int8_t> codes(len, 1);
    const bool moebius = kind == TableKind::moebius;
    for_each_block(a, b, [&](std::uint64_t lo, std::uint64_t hi) {
        const std::size_t off = lo - a;
        factor_block(lo, hi, [&](std::size_t i, std::uint64_t, unsigned e) {
            std::int8_t& c = codes[off + i];
            if (moebius && e >= 2) c = 0;
            else if (e & 1u) c = static_cast<std::int8_t>(-c);
        });
    });
    return ValueTable(kind, a, std::move(codes));
}

std::vector<std::complex<double>> sieve_completely_multiplicative(
    std::uint64_t a, std::uint64_t b,
    const std::function<std::complex<double>(std::uint64_t)>& prime_value) {
    check_range(a, b);
    std::vector<std::complex<double>> out(b - a, 1.0);
    for_each_block(a, b, [&](std::uint64_t lo, std::uint64_t hi) {
        const std::size_t off = lo - a;
        factor_block(lo, hi, [&](std::size_t i, std::uint64_t p, unsigned e) {
            const std::complex<double> v = prime_value(p);
            std::complex<double> pw = v;
            for (unsigned k = 1; k < e; ++k) pw *= v;
            out[off + i] *= pw;
        });
    });
    return out;
}

PrimeList primes_in(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 2 || lo > hi || hi > kSieveLimit)
        throw ParameterError("primes_in requires 2 <= lo <= hi <= 2e9");
    PrimeList list{lo, hi, {}};
    const std::uint64_t end = hi + 1;
    const std::size_t blocks = (end - lo + kSieveBlock - 1) / kSieveBlock;
    std::vector<std::vector<std::uint64_t>> found(blocks);
    parallel_for(blocks, [&](std::size_t k) {
        const std::uint64_t s = lo + k * kSieveBlock;
        const std::uint64_t t = std::min<std::uint64_t>(end, s + kSieveBlock);
        std::vector<char> composite(t - s, 0);
        for (std::uint32_t p : small_primes()) {
            const std::uint64_t pp = std::uint64_t{p} * p;
            if (pp >= t) break;
            std::uint64_t m = std::max(pp, (s + p - 1) / p * p);
            for (; m < t; m += p) composite[m - s] = 1;
        }
        for (std::uint64_t n = s; n < t; ++n)
            if (!composite[n - s]) found[k].push_back(n);
    });
    for (auto& f : found) list.primes.insert(list.primes.end(), f.begin(), f.end());
    return list;
}

}  // namespace unilab
