#pragma once

// Ground truth over actual fields: exact counts of primitive pairs per trace
// class, seeded witness search, and the desk-scale confirmation runs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primpair/field.hpp"
#include "primpair/numtheory.hpp"

namespace primpair::verify {

enum class Mode { Witness, Count, Exception };
enum class Outcome { InP, NotInP, Inconclusive };

std::string to_string(Mode m);
std::string to_string(Outcome o);
std::optional<Mode> parse_mode(const std::string& text);

struct Witness {
  std::uint64_t exponent = 0;  // alpha = g^exponent
  std::vector<ff::Coeff> coefficients;
};

struct TraceClass {
  std::vector<ff::Coeff> trace;  // a, as coefficients in the top field
  std::size_t index = 0;         // position in subfield_elements()
  std::optional<Witness> witness;
  std::optional<std::uint64_t> count;
  std::uint64_t attempts = 0;
};

struct VerifyReport {
  BigInt q;
  unsigned n = 0;
  Mode mode = Mode::Witness;
  std::vector<TraceClass> per_trace;
  Outcome verdict = Outcome::Inconclusive;
  std::uint64_t seed = 0;
  /// Indices of trace classes whose count is 0 (count and exception modes).
  std::vector<std::size_t> failing;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::uint64_t witness_budget = 1'000'000;
  std::uint64_t enum_bound = 10'000'000;
  unsigned threads = 1;
  FactorOptions factor;
};

/// #{alpha != 0 : alpha l1-free, alpha + 1/alpha nonzero and l2-free,
/// Tr(alpha) = a}. Throws BoundsError when q^n exceeds enum_bound and
/// DomainError unless l1, l2 | q^n - 1 and a lies in F_q.
std::uint64_t count_na(const ff::FieldTower& t, const Factorization& l1, const Factorization& l2,
                       const ff::FieldElement& a, std::uint64_t enum_bound = 10'000'000);

/// count >= (theta(l1) theta(l2) / q) (q^n - 1 - C_q q^(n/2+1) (W(l1) W(l2) - 1)),
/// decided exactly even when q^(n/2+1) is irrational.
struct BoundCheck {
  std::uint64_t count = 0;
  /// The bound itself when n is even; absent when it is irrational.
  std::optional<Rational> bound;
  /// Bound to about 18 significant digits, for display.
  long double bound_approx = 0;
  bool ok = false;
};

BoundCheck lower_bound_check(const ff::FieldTower& t, const Factorization& l1, const Factorization& l2,
                             const ff::FieldElement& a, std::uint64_t enum_bound = 10'000'000);

/// Exact decision of count >= the bound above; exposed for callers that
/// already hold the count.
bool meets_bound(std::uint64_t count, const BigInt& q, unsigned n, unsigned cq, const Factorization& l1,
                 const Factorization& l2);

struct WitnessResult {
  std::optional<Witness> witness;
  std::uint64_t attempts = 0;
};

/// Visits exponents in a keyed pseudorandom permutation of [0, q^n - 1) and
/// accepts the first i with gcd(i, q^n - 1) = 1, Tr(g^i) = a and g^i + g^-i
/// primitive. Requires q^n - 1 < 2^64.
WitnessResult witness_search(const ff::FieldTower& t, const ff::FieldElement& a, std::size_t a_index,
                             std::uint64_t seed, std::uint64_t budget);

/// Independent recheck of the three defining properties.
bool revalidate(const ff::FieldTower& t, const Witness& w, const ff::FieldElement& a);

/// q must be a prime power. Witness mode never yields NotInP.
VerifyReport verify_pair(const BigInt& q, unsigned n, Mode mode, const VerifyOptions& options = {});

/// Same, over an already built tower.
VerifyReport verify_tower(const ff::FieldTower& t, Mode mode, const VerifyOptions& options = {});

/// #{alpha : alpha and alpha + 1/alpha both primitive}, ignoring the trace.
std::uint64_t count_primitive_pairs(const ff::FieldTower& t, std::uint64_t enum_bound = 10'000'000);

struct ExceptionPair {
  unsigned q = 0;
  unsigned n = 0;
};

/// The possible exceptions left open by the sieve: n = 5, 6, 7, 8, 9, 10, 12.
std::vector<ExceptionPair> possible_exceptions();

struct ConfirmEntry {
  ExceptionPair pair;
  VerifyReport report;
};

struct ConfirmSummary {
  std::uint64_t scope = 0;
  std::vector<ConfirmEntry> entries;
  bool all_in_p = true;
};

/// Count mode when q^n <= scope, witness mode otherwise.
ConfirmSummary confirm_exceptions(std::uint64_t scope, const VerifyOptions& options = {},
                                  const std::vector<ExceptionPair>& pairs = possible_exceptions());

}  // namespace primpair::verify
