#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primpair/errors.hpp"
#include "primpair/numtheory.hpp"

using namespace primpair;

namespace {

Factorization fz(unsigned long m) { return factorize(BigInt(m)); }

std::vector<std::pair<std::string, unsigned>> listing(const Factorization& f) {
  std::vector<std::pair<std::string, unsigned>> out;
  for (const auto& pp : f.factors()) out.emplace_back(pp.prime.get_str(), pp.exponent);
  return out;
}

BigInt product_of_first_primes(std::size_t count) {
  BigInt m = 1;
  for (auto p : first_primes(count)) m *= p;
  return m;
}

}  // namespace

TEST_CASE("factorize: published and trivial examples") {
  using L = std::vector<std::pair<std::string, unsigned>>;
  CHECK(listing(fz(31)) == L{{"31", 1}});
  CHECK(listing(fz(268435455)) == L{{"3", 1}, {"5", 1}, {"29", 1}, {"43", 1}, {"113", 1}, {"127", 1}});
  CHECK(listing(fz(6436342)) == L{{"2", 1}, {"11", 1}, {"292561", 1}});
  CHECK(listing(fz(59048)) == L{{"2", 3}, {"11", 2}, {"61", 1}});
  CHECK(fz(1).is_one());
  CHECK_THROWS_AS(factorize(BigInt(0)), DomainError);
}

TEST_CASE("factorize: large q^n - 1 reconstructs with prime factors") {
  for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 128}, {3, 80}, {13, 29}, {16, 26}, {71, 6}}) {
    const BigInt m = pow(BigInt(q), n) - 1;
    const auto f = factorize(m);
    BigInt prod = 1;
    BigInt last = 1;
    for (const auto& pp : f.factors()) {
      CHECK(is_probable_prime(pp.prime));
      CHECK(pp.prime > last);
      last = pp.prime;
      prod *= pow(pp.prime, pp.exponent);
    }
    CHECK(prod == m);
    CHECK(f == factorize(m));
  }
}

TEST_CASE("factorize: budget exhaustion is loud") {
  // Two primes near 2^40: trial division cannot reach them and a tiny rho
  // budget cannot split the product.
  BigInt a = BigInt(1) << 40, b = (BigInt(1) << 40) + 1000;
  while (!is_probable_prime(a)) ++a;
  while (!is_probable_prime(b)) ++b;
  FactorOptions tight;
  tight.rho_budget = 10;
  CHECK_THROWS_AS(factorize(a * b, tight), BudgetExhausted);
  const auto f = factorize(a * b);
  REQUIRE(f.factors().size() == 2);
  CHECK(f.factors()[0].prime == a);
}

TEST_CASE("arithmetic functions agree with sieve tables for every m <= 10^6") {
  constexpr unsigned kLimit = 1'000'000;
  const oracle::ArithmeticTables tab(kLimit);
  unsigned mismatches = 0;
  for (unsigned m = 1; m <= kLimit; ++m) {
    const auto f = fz(m);
    BigInt prod = 1;
    for (const auto& pp : f.factors()) prod *= pow(pp.prime, pp.exponent);
    if (prod != m || euler_phi(f) != tab.phi[m] || mobius(f) != tab.mu[m] || omega(f) != tab.omega[m] ||
        squarefree_divisor_count(f) != (BigInt(1) << tab.omega[m]))
      ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("factorization matches naive trial division on random 62-bit values") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t m = (rng() >> 2) | 1;
    const auto expected = oracle::trial_factor(m % 1'000'000'000'000ULL + 2);
    const auto f = factorize(from_u64(m % 1'000'000'000'000ULL + 2));
    std::map<std::uint64_t, unsigned> got;
    for (const auto& pp : f.factors()) got[*to_u64(pp.prime)] = pp.exponent;
    CHECK(got == expected);
  }
}

TEST_CASE("multiplicativity over coprime pairs") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<unsigned> pick(1, 10'000);
  int checked = 0;
  while (checked < 20'000) {
    const unsigned a = pick(rng), b = pick(rng);
    if (std::gcd(a, b) != 1) continue;
    ++checked;
    const auto fa = fz(a), fb = fz(b), fab = fz(static_cast<unsigned long>(a) * b);
    REQUIRE(euler_phi(fab) == euler_phi(fa) * euler_phi(fb));
    REQUIRE(squarefree_divisor_count(fab) == squarefree_divisor_count(fa) * squarefree_divisor_count(fb));
    REQUIRE(theta(fab) == theta(fa) * theta(fb));
  }
}

TEST_CASE("small arithmetic function examples") {
  CHECK(omega(fz(1)) == 0);
  CHECK(omega(fz(12)) == 2);
  CHECK(omega(fz(268435455)) == 6);
  CHECK(squarefree_divisor_count(fz(1)) == 1);
  CHECK(squarefree_divisor_count(fz(12)) == 4);
  CHECK(squarefree_divisor_count(fz(268435455)) == 64);
  CHECK(euler_phi(fz(1)) == 1);
  CHECK(euler_phi(fz(7)) == 6);
  CHECK(euler_phi(fz(31)) == 30);
  CHECK(mobius(fz(1)) == 1);
  CHECK(mobius(fz(12)) == 0);
  CHECK(mobius(fz(30)) == -1);
  CHECK(theta(fz(1)) == Rational(1));
  CHECK(theta(fz(12)) == Rational(1, 3));
  CHECK(theta(fz(31)) == Rational(30, 31));
  CHECK(radical_primes(fz(12)) == std::vector<BigInt>{2, 3});
  CHECK(radical_primes(fz(59048)) == std::vector<BigInt>{2, 11, 61});
  CHECK(radical_primes(fz(1)).empty());
}

TEST_CASE("squarefree divisors") {
  const auto divs = squarefree_divisors(fz(360));
  REQUIRE(divs.size() == 8);
  std::vector<BigInt> values;
  for (const auto& d : divs) values.push_back(d.value());
  std::sort(values.begin(), values.end());
  CHECK(values == std::vector<BigInt>{1, 2, 3, 5, 6, 10, 15, 30});
  CHECK(divs.front().is_one());
}

TEST_CASE("bound_margin: exact power comparisons") {
  const BigInt m23 = product_of_first_primes(23);
  CHECK(bound_margin(factorize(m23), 2, 9));
  CHECK_FALSE(bound_margin(fz(2), 2, 9));
  CHECK(bound_margin(factorize(product_of_first_primes(149)), 1, 8));
  CHECK_THROWS_AS(bound_margin(fz(2), 1, 0), DomainError);

  // Products of known primes landing in [2e31, 2e32].
  const BigInt lo = 2 * pow(BigInt(10), 31), hi = 2 * pow(BigInt(10), 32);
  const auto small = first_primes(40);
  std::mt19937 rng(5);
  int built = 0;
  for (int attempt = 0; attempt < 5000 && built < 200; ++attempt) {
    std::vector<PrimePower> parts;
    BigInt m = 1;
    std::vector<std::uint32_t> pool(small.begin(), small.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (auto p : pool) {
      if (m * p > hi) continue;
      const unsigned e = 1 + rng() % 3;
      if (m * pow(BigInt(p), e) > hi) continue;
      m *= pow(BigInt(p), e);
      parts.push_back({p, e});
      if (m >= lo) break;
    }
    if (m < lo || m > hi) continue;
    ++built;
    const auto f = Factorization::from_factors(parts);
    REQUIRE(f.value() == m);
    CHECK(bound_margin(f, 2, 9));
  }
  CHECK(built >= 50);
}

TEST_CASE("prime powers") {
  auto pp = prime_power_decompose(BigInt(169));
  REQUIRE(pp);
  CHECK(pp->first == 13);
  CHECK(pp->second == 2);
  CHECK(prime_power_decompose(BigInt(2))->second == 1);
  CHECK(prime_power_decompose(BigInt(1024))->second == 10);
  CHECK_FALSE(prime_power_decompose(BigInt(6)));
  CHECK_FALSE(prime_power_decompose(BigInt(1)));
  CHECK_FALSE(prime_power_decompose(BigInt(0)));
  for (unsigned q = 2; q < 2000; ++q) {
    const auto f = oracle::trial_factor(q);
    CHECK(prime_power_decompose(BigInt(q)).has_value() == (f.size() == 1));
  }
}

TEST_CASE("primality against trial division") {
  for (unsigned m = 0; m < 20000; ++m) REQUIRE(is_probable_prime(BigInt(m)) == oracle::is_prime(m));
  CHECK(is_probable_prime(pow(BigInt(2), 127) - 1));
  CHECK_FALSE(is_probable_prime(pow(BigInt(2), 128) + 1));
  CHECK_FALSE(is_probable_prime(BigInt("3215031751")));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("decimal rendering") {
  CHECK(render_significant(Rational(2551, 2997), 6) == "0.851185");
  CHECK(render_significant(Rational(1, 3), 6) == "0.333333");
  CHECK(render_significant(Rational(2, 3), 6) == "0.666667");
  CHECK(render_significant(Rational(123456789), 6) == "123457000");
  CHECK(render_fixed(Rational(1, 8), 2) == "0.13");
  CHECK(render_fixed(Rational(-1, 8), 2) == "-0.13");
  CHECK(truncate_decimals(Rational(6841951, 10000000), 4) == Rational(6841, 10000));
  CHECK(parse_decimal("0.8510") == Rational(851, 1000));
  CHECK(parse_decimal("-1.5") == Rational(-3, 2));
  CHECK(parse_decimal("12") == Rational(12));
  CHECK_THROWS_AS(parse_bigint("12a"), DomainError);
}
