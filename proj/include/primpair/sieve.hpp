#pragma once

// Existence criteria for primitive pairs (a, a + 1/a) with prescribed trace,
// evaluated purely from the factorization of q^n - 1.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primpair/numtheory.hpp"

namespace primpair::sieve {

/// One evaluation of the sieve inequality q^(n/2-1) > C_q W(l)^2 Delta.
struct SieveReport {
  BigInt q;
  unsigned n = 0;
  unsigned cq = 0;
  std::vector<BigInt> l_primes;
  std::vector<BigInt> sieve_primes;
  unsigned r = 0;
  Rational delta;
  /// Absent when delta <= 0.
  std::optional<Rational> Delta;
  /// C_q W(l)^2 Delta; absent when delta <= 0.
  std::optional<Rational> R;
  /// R^(2/(n-2)) for display only; "undefined" when R is absent or n <= 2.
  std::string threshold;
  bool pass = false;
};

enum class Status { ProvedBasic, ProvedSieve, ProvedMersenne, Unresolved, NotApplicable };

std::string to_string(Status s);

struct Verdict {
  Status status = Status::Unresolved;
  std::optional<SieveReport> evidence;
  std::string note;
};

enum class Strategy { Prefix, Exhaustive };

struct DecideOptions {
  unsigned max_subset_bits = 20;
  FactorOptions factor;
};

/// 3 for odd q, 2 for even q. Throws DomainError unless q is a prime power.
unsigned cq(const BigInt& q);

/// q^n - 1.
BigInt group_order(const BigInt& q, unsigned n);

/// q^(n/2-1) > C_q W(l1) W(l2), exactly. Throws DomainError unless l1, l2 | q^n - 1.
bool pair_criterion(const BigInt& q, unsigned n, const Factorization& l1, const Factorization& l2);

/// pair_criterion with l1 = l2 = q^n - 1.
bool basic_criterion(const BigInt& q, unsigned n, const Factorization& qn1);

/// Fills a SieveReport for the given l (a subset of the primes of q^n - 1).
SieveReport sieve_eval(const BigInt& q, unsigned n, const Factorization& qn1, std::span<const BigInt> l_primes);

/// Prefix: the t smallest primes for t = omega .. 0, first pass wins.
/// Exhaustive: all 2^omega subsets, minimal W(l)^2 Delta, ties to the
/// lexicographically smallest l. Throws BoundsError if omega exceeds
/// max_subset_bits for the exhaustive strategy.
std::optional<SieveReport> find_witness(const BigInt& q, unsigned n, const Factorization& qn1, Strategy strategy,
                                        unsigned max_subset_bits = 20);

/// q^5 - 1 = q1 * q2 with q1 supported on the primes of q - 1. Throws
/// std::logic_error if a prime of q2 is neither 5 nor 1 mod 10.
std::pair<Factorization, Factorization> n5_split(const BigInt& q, const Factorization& q5m1);

/// q = 2 and 2^n - 1 >= 7 is prime.
bool mersenne_shortcut(const BigInt& q, unsigned n);

/// 1 - 2 * sum 1/p over the list. Throws DomainError on duplicates.
Rational worst_case_delta(std::span<const BigInt> sieve_primes);

/// Least n with q^n > 2 * 10^31.
unsigned nq_threshold(const BigInt& q);

/// Mersenne shortcut, then the basic criterion, then the prefix and
/// exhaustive sieve searches.
Verdict decide(const BigInt& q, unsigned n, const DecideOptions& options = {});

/// R^(2/(n-2)) rendered to 6 significant digits via extended precision.
std::string render_threshold(const Rational& R, unsigned n);

/// R^(2/(n-2)) as a long double (for deviation reports only).
long double threshold_value(const Rational& R, unsigned n);

}  // namespace primpair::sieve
