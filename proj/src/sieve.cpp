#include "primpair/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "primpair/errors.hpp"

namespace primpair::sieve {

namespace {

// q^(n-2) as an exact rational, valid for every n >= 0.
Rational q_pow_n_minus_2(const BigInt& q, unsigned n) {
  if (n >= 2) return Rational(pow(q, n - 2));
  Rational out(1, pow(q, 2 - n));
  out.canonicalize();
  return out;
}

// q^(n/2 - 1) > rhs for rhs > 0, by squaring both sides.
bool exceeds(const BigInt& q, unsigned n, const Rational& rhs) {
  if (sgn(rhs) <= 0) return true;
  return q_pow_n_minus_2(q, n) > rhs * rhs;
}

void require_divides(const BigInt& m, const Factorization& l, const char* what) {
  if (!l.divides(m)) throw DomainError(std::string(what) + " = " + l.value().get_str() + " does not divide q^n - 1 = " + m.get_str());
}

long double log_of(const BigInt& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::ProvedBasic: return "PROVED_BASIC";
    case Status::ProvedSieve: return "PROVED_SIEVE";
    case Status::ProvedMersenne: return "PROVED_MERSENNE";
    case Status::Unresolved: return "UNRESOLVED";
    case Status::NotApplicable: return "NOT_APPLICABLE";
  }
  return "UNKNOWN";
}

unsigned cq(const BigInt& q) {
  if (!prime_power_decompose(q)) throw DomainError("q = " + q.get_str() + " is not a prime power");
  return mpz_odd_p(q.get_mpz_t()) ? 3 : 2;
}

BigInt group_order(const BigInt& q, unsigned n) { return pow(q, n) - 1; }

bool pair_criterion(const BigInt& q, unsigned n, const Factorization& l1, const Factorization& l2) {
  const unsigned c = cq(q);
  const BigInt m = group_order(q, n);
  require_divides(m, l1, "l1");
  require_divides(m, l2, "l2");
  const BigInt rhs = c * squarefree_divisor_count(l1) * squarefree_divisor_count(l2);
  return exceeds(q, n, Rational(rhs));
}

bool basic_criterion(const BigInt& q, unsigned n, const Factorization& qn1) {
  if (qn1.value() != group_order(q, n)) throw DomainError("basic_criterion: factorization is not of q^n - 1");
  return pair_criterion(q, n, qn1, qn1);
}

long double threshold_value(const Rational& R, unsigned n) {
  if (n <= 2 || sgn(R) <= 0) return NAN;
  const long double log_r = log_of(R.get_num()) - log_of(R.get_den());
  return std::exp(2.0L / static_cast<long double>(n - 2) * log_r);
}

std::string render_threshold(const Rational& R, unsigned n) {
  const long double v = threshold_value(R, n);
  if (std::isnan(v)) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6Lg", v);
  return buf;
}

SieveReport sieve_eval(const BigInt& q, unsigned n, const Factorization& qn1, std::span<const BigInt> l_primes) {
  if (qn1.value() != group_order(q, n)) throw DomainError("sieve_eval: factorization is not of q^n - 1");
  SieveReport rep;
  rep.q = q;
  rep.n = n;
  rep.cq = cq(q);
  const auto all = radical_primes(qn1);
  std::set<BigInt> chosen;
  for (const auto& p : l_primes) {
    if (std::find(all.begin(), all.end(), p) == all.end())
      throw DomainError("sieve_eval: " + p.get_str() + " is not a prime divisor of q^n - 1");
    chosen.insert(p);
  }
  rep.l_primes.assign(chosen.begin(), chosen.end());
  for (const auto& p : all)
    if (!chosen.count(p)) rep.sieve_primes.push_back(p);
  rep.r = static_cast<unsigned>(rep.sieve_primes.size());
  Rational sum = 0;
  for (const auto& p : rep.sieve_primes) sum += Rational(1, p);
  rep.delta = 1 - 2 * sum;
  rep.delta.canonicalize();
  if (sgn(rep.delta) <= 0) {
    rep.threshold = "undefined";
    rep.pass = false;
    return rep;
  }
  Rational Delta = Rational(2 * static_cast<long>(rep.r) - 1) / rep.delta + 2;
  Delta.canonicalize();
  BigInt w = 1;
  w <<= rep.l_primes.size();
  Rational R = rep.cq * w * w * Delta;
  R.canonicalize();
  rep.Delta = Delta;
  rep.R = R;
  rep.threshold = render_threshold(R, n);
  rep.pass = exceeds(q, n, R);
  return rep;
}

std::optional<SieveReport> find_witness(const BigInt& q, unsigned n, const Factorization& qn1, Strategy strategy,
                                        unsigned max_subset_bits) {
  const auto primes = radical_primes(qn1);
  const unsigned w = static_cast<unsigned>(primes.size());
  if (strategy == Strategy::Prefix) {
    for (unsigned t = w + 1; t-- > 0;) {
      auto rep = sieve_eval(q, n, qn1, std::span(primes.data(), t));
      if (rep.pass) return rep;
    }
    return std::nullopt;
  }
  if (w > max_subset_bits)
    throw BoundsError("find_witness: exhaustive search over 2^" + std::to_string(w) + " subsets exceeds the 2^" +
                      std::to_string(max_subset_bits) + " limit");

  // Over a common denominator D = prod p: with S = sum over sieve primes of
  // D/p, delta = (D - 2S)/D and W(l)^2 Delta = 4^|l| ((2r-1)D + 2(D-2S)) / (D-2S).
  BigInt D = 1;
  for (const auto& p : primes) D *= p;
  std::vector<BigInt> parts;
  for (const auto& p : primes) parts.push_back(D / p);

  std::optional<std::uint64_t> best_mask;
  BigInt best_num, best_den;
  std::vector<BigInt> best_l;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w); ++mask) {
    BigInt S = 0;
    long r = 0;
    unsigned lsize = 0;
    for (unsigned i = 0; i < w; ++i) {
      if (mask >> i & 1) {
        ++lsize;
      } else {
        S += parts[i];
        ++r;
      }
    }
    const BigInt den = D - 2 * S;
    if (sgn(den) <= 0) continue;
    BigInt num = (2 * r - 1) * D + 2 * den;
    num <<= 2 * lsize;
    if (best_mask) {
      const int order = cmp(BigInt(num * best_den), BigInt(best_num * den));
      if (order > 0) continue;
      if (order == 0) {
        std::vector<BigInt> l;
        for (unsigned i = 0; i < w; ++i)
          if (mask >> i & 1) l.push_back(primes[i]);
        if (!(l < best_l)) continue;
      }
    }
    best_mask = mask;
    best_num = num;
    best_den = den;
    best_l.clear();
    for (unsigned i = 0; i < w; ++i)
      if (mask >> i & 1) best_l.push_back(primes[i]);
  }
  if (!best_mask) return std::nullopt;
  auto rep = sieve_eval(q, n, qn1, best_l);
  if (!rep.pass) return std::nullopt;
  return rep;
}

std::pair<Factorization, Factorization> n5_split(const BigInt& q, const Factorization& q5m1) {
  if (q5m1.value() != group_order(q, 5)) throw DomainError("n5_split: factorization is not of q^5 - 1");
  const BigInt qm1 = q - 1;
  std::vector<PrimePower> f1, f2;
  for (const auto& pp : q5m1.factors()) {
    if (mpz_divisible_p(qm1.get_mpz_t(), pp.prime.get_mpz_t()))
      f1.push_back(pp);
    else
      f2.push_back(pp);
  }
  for (const auto& pp : f2) {
    if (pp.prime != 5 && mpz_fdiv_ui(pp.prime.get_mpz_t(), 10) != 1)
      throw std::logic_error("n5_split: prime " + pp.prime.get_str() + " of q2 for q = " + q.get_str() +
                             " is neither 5 nor congruent to 1 mod 10");
  }
  return {Factorization::from_factors(std::move(f1)), Factorization::from_factors(std::move(f2))};
}

bool mersenne_shortcut(const BigInt& q, unsigned n) {
  if (q != 2) return false;
  const BigInt m = group_order(q, n);
  return m >= 7 && is_probable_prime(m);
}

Rational worst_case_delta(std::span<const BigInt> sieve_primes) {
  std::set<BigInt> seen;
  Rational sum = 0;
  for (const auto& p : sieve_primes) {
    if (!seen.insert(p).second) throw DomainError("worst_case_delta: duplicate prime " + p.get_str());
    sum += Rational(1, p);
  }
  Rational out = 1 - 2 * sum;
  out.canonicalize();
  return out;
}

unsigned nq_threshold(const BigInt& q) {
  if (q < 2) throw DomainError("nq_threshold: q must be at least 2");
  const BigInt bound = 2 * pow(BigInt(10), 31);
  unsigned n = 1;
  BigInt v = q;
  while (v <= bound) {
    v *= q;
    ++n;
  }
  return n;
}

Verdict decide(const BigInt& q, unsigned n, const DecideOptions& options) {
  cq(q);
  Verdict v;
  if (n <= 2) {
    v.status = Status::NotApplicable;
    v.note = n == 1 ? "the trace is the identity for n = 1" : "no primitive element has trace 0 when n = 2";
    return v;
  }
  if (mersenne_shortcut(q, n)) {
    v.status = Status::ProvedMersenne;
    v.note = "2^" + std::to_string(n) + " - 1 = " + group_order(q, n).get_str() + " is a Mersenne prime";
    return v;
  }
  const auto qn1 = factorize(group_order(q, n), options.factor);
  if (basic_criterion(q, n, qn1)) {
    v.status = Status::ProvedBasic;
    v.evidence = sieve_eval(q, n, qn1, radical_primes(qn1));
    return v;
  }
  if (auto rep = find_witness(q, n, qn1, Strategy::Prefix)) {
    v.status = Status::ProvedSieve;
    v.evidence = std::move(rep);
    return v;
  }
  if (omega(qn1) <= options.max_subset_bits) {
    if (auto rep = find_witness(q, n, qn1, Strategy::Exhaustive, options.max_subset_bits)) {
      v.status = Status::ProvedSieve;
      v.evidence = std::move(rep);
      return v;
    }
  }
  v.status = Status::Unresolved;
  v.note = "no sieve criterion applies; exhaustive verification required";
  return v;
}

}  // namespace primpair::sieve
