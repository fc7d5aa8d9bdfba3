#pragma once

// Exact integer arithmetic behind the sieve criteria: factorization and the
// multiplicative functions omega, W, phi, mu, theta.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace primpair {

using BigInt = mpz_class;
using Rational = mpq_class;

struct PrimePower {
  BigInt prime;
  unsigned exponent = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its complete prime decomposition,
/// primes strictly increasing.
class Factorization {
 public:
  Factorization() : value_(1) {}

  /// Builds from prime powers; sorts and merges duplicate primes. Does not
  /// check primality, use factorize() for untrusted input.
  static Factorization from_factors(std::vector<PrimePower> factors);

  const BigInt& value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  /// The factor of value() supported on the given primes (all of which must
  /// divide value()).
  Factorization restricted_to(std::span<const BigInt> primes) const;

  /// Squarefree kernel: every exponent set to 1.
  Factorization radical() const;

  bool divides(const BigInt& m) const { return mpz_divisible_p(m.get_mpz_t(), value_.get_mpz_t()) != 0; }

  friend bool operator==(const Factorization& a, const Factorization& b) { return a.factors_ == b.factors_; }

 private:
  BigInt value_;
  std::vector<PrimePower> factors_;
};

struct FactorOptions {
  /// Total Pollard-rho iterations allowed for one factorize() call.
  std::uint64_t rho_budget = 100'000'000;
};

/// Complete factorization of m >= 1. Throws DomainError for m < 1 and
/// BudgetExhausted when a composite cofactor resists the rho budget.
Factorization factorize(const BigInt& m, const FactorOptions& options = {});

/// Deterministic Miller-Rabin below 2^64, 40 fixed-seed rounds above.
bool is_probable_prime(const BigInt& n);

/// q = p^k with p prime, k >= 1; nullopt otherwise.
std::optional<std::pair<BigInt, unsigned>> prime_power_decompose(const BigInt& q, const FactorOptions& options = {});

/// Primes below `limit`, ascending (sieve of Eratosthenes).
std::vector<std::uint32_t> primes_below(std::uint32_t limit);

/// The first `count` primes.
std::vector<std::uint32_t> first_primes(std::size_t count);

unsigned omega(const Factorization& f);
BigInt squarefree_divisor_count(const Factorization& f);
BigInt euler_phi(const Factorization& f);
int mobius(const Factorization& f);
Rational theta(const Factorization& f);
std::vector<BigInt> radical_primes(const Factorization& f);

/// Squarefree divisors of f in increasing order of their bitmask over
/// radical_primes (divisor 1 first).
std::vector<Factorization> squarefree_divisors(const Factorization& f);

/// W(m)^den < m^num, decided in exact integer arithmetic.
bool bound_margin(const Factorization& f, unsigned num, unsigned den);

BigInt pow(const BigInt& base, unsigned long exponent);

/// Empty when v is negative or needs more than 64 bits.
std::optional<std::uint64_t> to_u64(const BigInt& v);
BigInt from_u64(std::uint64_t v);

/// Parses a non-negative decimal integer; throws DomainError on junk.
BigInt parse_bigint(const std::string& text);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& v);

/// Decimal rendering of an exact rational with `significant` significant
/// digits, rounded half away from zero.
std::string render_significant(const Rational& v, int significant = 6);

/// Exactly `decimals` digits after the point, rounded half away from zero.
std::string render_fixed(const Rational& v, int decimals);

/// floor(v * 10^decimals) / 10^decimals.
Rational truncate_decimals(const Rational& v, int decimals);

/// Parses "0.8510", "12", "-1.5" exactly.
Rational parse_decimal(const std::string& text);

}  // namespace primpair
