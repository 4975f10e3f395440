#include "unilab/characters.hpp"

#include "unilab/error.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace unilab {

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace detail {

struct UnitGroup {
    struct Factor {
        std::uint32_t modulus;       // prime power this factor lives on
        std::uint32_t order;         // cyclic order
        std::vector<std::int32_t> log;  // discrete log of residues mod `modulus`, -1 off units
    };

    std::uint32_t q = 1;
    std::uint32_t exponent = 1;
    std::vector<Factor> factors;
    std::vector<std::uint32_t> units_only;  // 1 if gcd(n, q) == 1, indexed by n mod q
};

}  // namespace detail

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

std::uint32_t primitive_root_mod_prime_power(std::uint32_t p, std::uint32_t pe) {
    std::vector<std::uint32_t> prime_divisors;
    std::uint32_t m = p - 1;
    for (std::uint32_t r = 2; r * r <= m; ++r) {
        if (m % r) continue;
        prime_divisors.push_back(r);
        while (m % r == 0) m /= r;
    }
    if (m > 1) prime_divisors.push_back(m);

    for (std::uint32_t g = 2; g < p + 2; ++g) {
        bool primitive = true;
        for (std::uint32_t r : prime_divisors)
            if (pow_mod(g, (p - 1) / r, p) == 1) { primitive = false; break; }
        if (!primitive) continue;
        if (pe != p && pow_mod(g, p - 1, std::uint64_t{p} * p) == 1) g += p;
        return g;
    }
    return 2;  // p == 2 never reaches here; odd primes always have a root
}

std::shared_ptr<const detail::UnitGroup> build_group(std::uint32_t q) {
    auto group = std::make_shared<detail::UnitGroup>();
    group->q = q;

    std::uint32_t rest = q;
    std::uint32_t two_power = 1;
    while (rest % 2 == 0) { rest /= 2; two_power *= 2; }

    if (two_power == 4) {
        detail::UnitGroup::Factor f{4, 2, std::vector<std::int32_t>(4, -1)};
        f.log[1] = 0;
        f.log[3] = 1;
        group->factors.push_back(std::move(f));
    } else if (two_power >= 8) {
        const std::uint32_t half = two_power / 4;
        detail::UnitGroup::Factor sign{two_power, 2, std::vector<std::int32_t>(two_power, -1)};
        detail::UnitGroup::Factor cyc{two_power, half, std::vector<std::int32_t>(two_power, -1)};
        std::uint64_t v = 1;
        for (std::uint32_t j = 0; j < half; ++j) {
            sign.log[v] = 0;
            cyc.log[v] = static_cast<std::int32_t>(j);
            const std::uint64_t neg = two_power - v;
            sign.log[neg] = 1;
            cyc.log[neg] = static_cast<std::int32_t>(j);
            v = v * 5 % two_power;
        }
        group->factors.push_back(std::move(sign));
        group->factors.push_back(std::move(cyc));
    }

    for (std::uint32_t p = 3; rest > 1; p += 2) {
        if (rest % p) continue;
        std::uint32_t pe = 1;
        while (rest % p == 0) { rest /= p; pe *= p; }
        const std::uint32_t order = pe / p * (p - 1);
        detail::UnitGroup::Factor f{pe, order, std::vector<std::int32_t>(pe, -1)};
        const std::uint32_t g = primitive_root_mod_prime_power(p, pe);
        std::uint64_t v = 1;
        for (std::uint32_t j = 0; j < order; ++j) {
            f.log[v] = static_cast<std::int32_t>(j);
            v = v * g % pe;
        }
        group->factors.push_back(std::move(f));
    }

    group->exponent = 1;
    for (const auto& f : group->factors) group->exponent = std::lcm(group->exponent, f.order);
    group->units_only.assign(q, 0);
    for (std::uint32_t n = 0; n < q; ++n) group->units_only[n] = std::gcd(n, q) == 1 ? 1 : 0;
    return group;
}

std::shared_ptr<const detail::UnitGroup> group_for(std::uint32_t q) {
    if (q == 0) throw ParameterError("character modulus must be >= 1");
    if (q > 10'000) throw ParameterError("character modulus limited to 1e4");
    static std::mutex mutex;
    static std::map<std::uint32_t, std::shared_ptr<const detail::UnitGroup>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[q];
    if (!slot) slot = build_group(q);
    return slot;
}

}  // namespace

DirichletCharacter::DirichletCharacter(std::shared_ptr<const detail::UnitGroup> group,
                                       std::uint32_t index, std::vector<std::uint32_t> exponents)
    : group_(std::move(group)), index_(index), exponents_(std::move(exponents)) {
    order_ = 1;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const std::uint32_t ord = group_->factors[i].order;
        order_ = std::lcm(order_, ord / std::gcd(ord, exponents_[i]));
    }
}

std::uint32_t DirichletCharacter::modulus() const noexcept { return group_->q; }

std::uint32_t DirichletCharacter::denominator() const noexcept { return group_->exponent; }

std::optional<std::uint32_t> DirichletCharacter::phase(std::int64_t n) const {
    const auto& g = *group_;
    const std::int64_t q = g.q;
    const auto r = static_cast<std::uint32_t>(((n % q) + q) % q);
    if (!g.units_only[r]) return std::nullopt;
    std::uint64_t num = 0;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto& f = g.factors[i];
        const std::int32_t lg = f.log[r % f.modulus];
        num += std::uint64_t{exponents_[i]} * static_cast<std::uint64_t>(lg) *
               (g.exponent / f.order);
        num %= g.exponent;
    }
    return static_cast<std::uint32_t>(num);
}

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
    const auto ph = phase(n);
    if (!ph) return {0.0, 0.0};
    if (*ph == 0) return {1.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(*ph) /
                         static_cast<double>(group_->exponent);
    return std::polar(1.0, angle);
}

namespace {

std::vector<std::uint32_t> exponents_from_index(const detail::UnitGroup& g, std::uint32_t index) {
    std::vector<std::uint32_t> k(g.factors.size(), 0);
    for (std::size_t i = g.factors.size(); i-- > 0;) {
        k[i] = index % g.factors[i].order;
        index /= g.factors[i].order;
    }
    return k;
}

}  // namespace

std::vector<DirichletCharacter> characters_mod(std::uint32_t q) {
    auto group = group_for(q);
    const auto count = static_cast<std::uint32_t>(euler_phi(q));
    std::vector<DirichletCharacter> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i)
        out.push_back(DirichletCharacter(group, i, exponents_from_index(*group, i)));
    return out;
}

DirichletCharacter character(std::uint32_t q, std::uint32_t index) {
    auto group = group_for(q);
    if (index >= euler_phi(q))
        throw ParameterError("character index " + std::to_string(index) + " out of range mod " +
                             std::to_string(q));
    return DirichletCharacter(group, index, exponents_from_index(*group, index));
}

}  // namespace unilab
