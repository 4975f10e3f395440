// Dirichlet characters modulo q, built from the CRT decomposition of the unit
// group (Z/q)^x into cyclic factors.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace unilab {

std::uint64_t euler_phi(std::uint64_t n);

namespace detail {
struct UnitGroup;
}

// A character is stored exactly: chi(n) = e(phase(n) / denominator()) on
// units, where denominator() is the exponent of (Z/q)^x. Cyclic factors are
// ordered as: the {+-1} factor and the <5> factor of the 2-part (when
// present), then odd prime powers in increasing order. Characters are indexed
// lexicographically by their exponent vector over those factors, so index 0
// is the principal character.
class DirichletCharacter {
public:
    std::uint32_t modulus() const noexcept;
    std::uint32_t index() const noexcept { return index_; }
    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t denominator() const noexcept;
    bool is_principal() const noexcept { return order_ == 1; }
    const std::vector<std::uint32_t>& exponents() const noexcept { return exponents_; }

    // Phase numerator in [0, denominator()), or nullopt when gcd(n, q) > 1.
    std::optional<std::uint32_t> phase(std::int64_t n) const;

    std::complex<double> operator()(std::int64_t n) const;

private:
    friend std::vector<DirichletCharacter> characters_mod(std::uint32_t q);
    friend DirichletCharacter character(std::uint32_t q, std::uint32_t index);
    DirichletCharacter(std::shared_ptr<const detail::UnitGroup> group, std::uint32_t index,
                       std::vector<std::uint32_t> exponents);

    std::shared_ptr<const detail::UnitGroup> group_;
    std::uint32_t index_ = 0;
    std::uint32_t order_ = 1;
    std::vector<std::uint32_t> exponents_;
};

// All phi(q) characters modulo q in index order, 1 <= q <= 1e4.
std::vector<DirichletCharacter> characters_mod(std::uint32_t q);

// One character by (q, index); throws ParameterError on a bad index.
DirichletCharacter character(std::uint32_t q, std::uint32_t index);

}  // namespace unilab
