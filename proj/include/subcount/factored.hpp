#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "subcount/errors.hpp"

namespace subcount {

/// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

/// Primality for arbitrary-size operands: deterministic below 2^64,
/// probable-prime plus bounded trial division above.
bool is_prime(const mpz_class& n);

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  auto operator<=>(const PrimePower&) const = default;
};

/// An integer given by its canonical prime factorization: primes
/// strictly increasing, exponents >= 1, value kept exactly.
class FactoredInteger {
 public:
  FactoredInteger() = default;
  explicit FactoredInteger(std::vector<PrimePower> factors);

  const std::vector<PrimePower>& factors() const { return factors_; }
  const mpz_class& value() const { return value_; }
  std::size_t num_primes() const { return factors_.size(); }

  const PrimePower& operator[](std::size_t i) const { return factors_[i]; }

  /// Natural log of the value.
  double log_value() const;

  /// The value with the i-th prime removed entirely (r / p_i^{a_i}).
  mpz_class cofactor(std::size_t i) const;

  unsigned exponent_of(std::uint64_t p) const;
  bool divisible_by(const FactoredInteger& d) const;

  /// All divisors, smallest to largest.  Requires the value to fit in
  /// 64 bits.
  std::vector<std::uint64_t> divisors_u64() const;

  /// Divisors of the form p^k, k >= 1, for each prime factor.
  std::vector<mpz_class> prime_power_divisors() const;

  std::string to_string() const;  // "2^4.3^3.13"

  bool operator==(const FactoredInteger&) const = default;

 private:
  std::vector<PrimePower> factors_;
  mpz_class value_;
};

/// Canonical factorization of n, 2 <= n <= 2^96.
FactoredInteger factorize(const mpz_class& n);
FactoredInteger factorize(std::uint64_t n);

/// Parses either a plain integer (auto-factorized) or the explicit
/// form "p^a.p^a..." / "p.p^a..." with strictly increasing primes.
FactoredInteger parse_factored(const std::string& text);

}  // namespace subcount
