#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "primpair/errors.hpp"
#include "primpair/sieve.hpp"
#include "primpair/verify.hpp"

using namespace primpair;
using namespace primpair::verify;
using ff::FieldElement;
using ff::FieldTower;

namespace {

struct Shape {
  std::uint64_t p;
  unsigned k, n;
};

Factorization fz(std::uint64_t m) { return factorize(from_u64(m)); }

std::vector<std::uint64_t> divisors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= m; ++d)
    if (m % d == 0) out.push_back(d);
  return out;
}

std::vector<std::uint64_t> primes_of(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (auto [r, _] : oracle::trial_factor(m)) out.push_back(r);
  return out;
}

std::vector<unsigned> prime_powers_up_to(unsigned limit) {
  std::vector<unsigned> out;
  for (unsigned q = 2; q <= limit; ++q)
    if (oracle::trial_factor(q).size() == 1) out.push_back(q);
  return out;
}

VerifyOptions with_threads(unsigned threads) {
  VerifyOptions o;
  o.threads = threads;
  return o;
}

bool same(const VerifyReport& a, const VerifyReport& b) {
  if (a.verdict != b.verdict || a.per_trace.size() != b.per_trace.size() || a.failing != b.failing) return false;
  for (std::size_t i = 0; i < a.per_trace.size(); ++i) {
    const auto &x = a.per_trace[i], &y = b.per_trace[i];
    if (x.trace != y.trace || x.count != y.count || x.attempts != y.attempts ||
        x.witness.has_value() != y.witness.has_value())
      return false;
    if (x.witness && (x.witness->exponent != y.witness->exponent || x.witness->coefficients != y.witness->coefficients))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("count_na agrees with the exponentiation oracle") {
  std::mt19937 rng(51);
  for (const auto& s : std::vector<Shape>{{2, 1, 3}, {2, 1, 4}, {3, 1, 3}, {2, 2, 3}, {5, 1, 3}, {2, 1, 6},
                                          {3, 2, 2}, {7, 1, 3}, {2, 3, 3}, {3, 1, 5}, {2, 1, 9}}) {
    const auto t = FieldTower::build(s.p, s.k, s.n);
    const oracle::NaiveField F(t.characteristic(), t.modulus());
    const std::uint64_t N = t.group_order_u64();
    const auto divs = divisors(N);
    const auto sub = t.subfield_elements();
    for (int trial = 0; trial < 6; ++trial) {
      const std::uint64_t l1 = trial == 0 ? N : divs[rng() % divs.size()];
      const std::uint64_t l2 = trial == 0 ? N : divs[rng() % divs.size()];
      const auto expected = oracle::count_classes(F, s.k, primes_of(l1), primes_of(l2));
      for (const auto& a : sub) {
        const std::vector<std::uint64_t> key(a.coefficients().begin(), a.coefficients().end());
        const auto it = expected.find(key);
        CAPTURE(l1);
        CAPTURE(l2);
        REQUIRE(count_na(t, fz(l1), fz(l2), a) == (it == expected.end() ? 0 : it->second));
      }
    }
  }
}

TEST_CASE("count_na errors and small facts") {
  const auto t = FieldTower::build(3, 1, 3);
  CHECK(count_na(t, fz(26), fz(26), t.zero()) == 0);
  CHECK_THROWS_AS(count_na(t, fz(5), fz(26), t.zero()), DomainError);
  CHECK_THROWS_AS(count_na(t, fz(26), fz(26), t.x()), DomainError);
  CHECK_THROWS_AS(count_na(t, fz(26), fz(26), t.zero(), 10), BoundsError);
}

TEST_CASE("sum over traces equals the trace-free pair count") {
  for (const auto& s : std::vector<Shape>{{2, 1, 5}, {2, 1, 3}, {3, 1, 3}, {2, 2, 3}, {5, 1, 3}, {2, 1, 8}, {3, 1, 5},
                                          {7, 1, 3}, {2, 4, 3}, {13, 1, 3}}) {
    const auto t = FieldTower::build(s.p, s.k, s.n);
    const oracle::NaiveField F(t.characteristic(), t.modulus());
    const std::uint64_t N = t.group_order_u64();
    std::uint64_t total = 0;
    for (const auto& a : t.subfield_elements()) total += count_na(t, t.group_order_factorization(), t.group_order_factorization(), a);
    std::uint64_t brute = 0;
    for (std::uint64_t idx = 1; idx <= N; ++idx) {
      const auto x = F.at(idx);
      const auto beta = F.add(x, F.pow(x, N - 1));
      if (F.is_zero(beta)) continue;
      brute += F.order(x) == N && F.order(beta) == N;
    }
    CHECK(count_primitive_pairs(t) == total);
    CHECK(brute == total);
  }
  // Every alpha outside F_2 has alpha + 1/alpha outside {0, 1}; the 30
  // elements of F_32 \ F_2 all qualify.
  CHECK(count_primitive_pairs(FieldTower::build(2, 1, 5)) == 30);
}

TEST_CASE("lower bound check") {
  for (const auto& [p, n, l] : std::vector<std::tuple<std::uint64_t, unsigned, std::uint64_t>>{{5, 3, 62}, {2, 6, 21}}) {
    const auto t = FieldTower::build(p, 1, n);
    for (const auto& a : t.subfield_elements()) {
      const auto r = lower_bound_check(t, fz(l), fz(l), a);
      CHECK(r.ok);
      CHECK(r.count == count_na(t, fz(l), fz(l), a));
      CHECK(static_cast<long double>(r.count) >= r.bound_approx);
    }
  }

  // ok agrees with the floating-point bound wherever the margin is clear.
  for (const auto& s : std::vector<Shape>{{2, 1, 6}, {5, 1, 3}, {3, 1, 5}, {2, 1, 8}, {3, 1, 4}, {7, 1, 3}}) {
    const auto t = FieldTower::build(s.p, s.k, s.n);
    const std::uint64_t N = t.group_order_u64();
    const long double q = static_cast<long double>(oracle::ipow(s.p, s.k));
    const long double cq = s.p == 2 ? 2 : 3;
    int clear = 0;
    for (auto l1 : divisors(N)) {
      for (auto l2 : divisors(N)) {
        const auto f1 = fz(l1), f2 = fz(l2);
        const long double th = theta(f1).get_d() * theta(f2).get_d();
        const long double w = std::ldexp(1.0L, static_cast<int>(omega(f1) + omega(f2)));
        const long double bound = th / q * (static_cast<long double>(N) - cq * std::pow(q, s.n / 2.0L + 1) * (w - 1));
        for (const auto& a : t.subfield_elements()) {
          const auto r = lower_bound_check(t, f1, f2, a);
          CHECK(std::fabs(r.bound_approx - bound) <= 1e-9L * (1 + std::fabs(bound)));
          if (std::fabs(static_cast<long double>(r.count) - bound) > 1e-6L) {
            CHECK(r.ok == (static_cast<long double>(r.count) >= bound));
            ++clear;
          }
          CHECK(r.bound.has_value() == (s.n % 2 == 0));
        }
      }
    }
    CHECK(clear > 0);
  }
}

TEST_CASE("meets_bound is exact at the boundary") {
  // n even: bound = th/q (q^n - 1 - C q^(n/2+1)(W - 1)). For q = 2, n = 4,
  // l1 = l2 = 1: bound = (16 - 1)/2 = 7.5.
  const auto one = fz(1);
  CHECK(meets_bound(8, BigInt(2), 4, 2, one, one));
  CHECK_FALSE(meets_bound(7, BigInt(2), 4, 2, one, one));
  // l1 = 3 (theta 2/3, W 2), l2 = 1: 2/3 / 2 * (15 - 2 * 8 * 1) = -1/3.
  CHECK(meets_bound(0, BigInt(2), 4, 2, fz(3), one));
  // n odd, q = 2, n = 3, l1 = l2 = 7: th = 36/49, W W - 1 = 3, 2^(5/2) irrational:
  // bound = 18/49 (7 - 2 * 4 sqrt 2 * 3) < 0.
  CHECK(meets_bound(0, BigInt(2), 3, 2, fz(7), fz(7)));
  // q = 2, n = 5, l = 1: bound = (31)/2 = 15.5 exactly since W - 1 = 0.
  CHECK(meets_bound(16, BigInt(2), 5, 2, one, one));
  CHECK_FALSE(meets_bound(15, BigInt(2), 5, 2, one, one));
}

TEST_CASE("witness search and revalidation") {
  const auto t25 = FieldTower::build(2, 1, 5);
  const auto w = witness_search(t25, t25.one(), 1, 0, 1'000'000);
  REQUIRE(w.witness);
  CHECK(w.attempts <= 10);
  CHECK(revalidate(t25, *w.witness, t25.one()));
  CHECK_FALSE(revalidate(t25, *w.witness, t25.zero()));
  auto tampered = *w.witness;
  tampered.exponent = 0;
  CHECK_FALSE(revalidate(t25, tampered, t25.one()));

  const auto t33 = FieldTower::build(3, 1, 3);
  const auto none = witness_search(t33, t33.zero(), 0, 0, 1'000'000);
  CHECK_FALSE(none.witness);
  CHECK(none.attempts <= 26);

  // Same seed, same stream; different seed, usually a different first hit.
  const auto t = FieldTower::build(7, 1, 5);
  const auto sub = t.subfield_elements();
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto a = witness_search(t, sub[3], 3, seed, 1'000'000);
    const auto b = witness_search(t, sub[3], 3, seed, 1'000'000);
    REQUIRE(a.witness);
    CHECK(a.witness->exponent == b.witness->exponent);
    CHECK(a.attempts == b.attempts);
    CHECK(revalidate(t, *a.witness, sub[3]));
    firsts.insert(a.witness->exponent);
  }
  CHECK(firsts.size() > 1);

  const auto starved = witness_search(t, sub[3], 3, 0, 1);
  CHECK(starved.attempts <= 1);
}

TEST_CASE("the true exceptions and small members") {
  for (unsigned q : {3u, 4u, 5u}) {
    const auto r = verify_pair(BigInt(q), 3, Mode::Exception);
    CHECK(r.verdict == Outcome::NotInP);
    CHECK_FALSE(r.failing.empty());
    // The failing class is the zero trace.
    for (auto i : r.failing) CHECK(r.per_trace[i].index == 0);
  }
  CHECK(verify_pair(BigInt(2), 3, Mode::Exception).verdict == Outcome::InP);
  CHECK(verify_pair(BigInt(2), 6, Mode::Count).verdict == Outcome::InP);
  const auto w = verify_pair(BigInt(2), 13, Mode::Witness);
  CHECK(w.verdict == Outcome::InP);
  const auto inc = verify_pair(BigInt(3), 3, Mode::Witness);
  CHECK(inc.verdict == Outcome::Inconclusive);
  CHECK_THROWS_AS(verify_pair(BigInt(6), 3, Mode::Count), DomainError);
  VerifyOptions small;
  small.enum_bound = 100;
  CHECK_THROWS_AS(verify_pair(BigInt(5), 3, Mode::Count, small), BoundsError);
}

TEST_CASE("report invariants") {
  for (auto mode : {Mode::Witness, Mode::Count, Mode::Exception}) {
    for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{4, 3}, {2, 6}, {3, 5}, {8, 3}, {2, 2}}) {
      const auto r = verify_pair(BigInt(q), n, mode);
      const auto pk = *prime_power_decompose(BigInt(q));
      const auto t = FieldTower::build(*to_u64(pk.first), pk.second, n);
      const auto sub = t.subfield_elements();
      REQUIRE(r.per_trace.size() == q);
      bool all = true;
      for (const auto& c : r.per_trace) {
        CHECK(c.trace == std::vector<ff::Coeff>(sub[c.index].coefficients().begin(), sub[c.index].coefficients().end()));
        if (c.witness) CHECK(revalidate(t, *c.witness, sub[c.index]));
        const bool hit = c.witness.has_value() || (c.count && *c.count > 0);
        all = all && hit;
        if (mode != Mode::Witness) {
          REQUIRE(c.count);
          CHECK(*c.count % n == 0);
        }
      }
      CHECK((r.verdict == Outcome::InP) == all);
      if (mode == Mode::Witness) CHECK(r.verdict != Outcome::NotInP);
      if (mode == Mode::Exception) CHECK(r.failing.empty() == all);
      if (mode != Mode::Exception) CHECK(r.failing.empty());
    }
  }
}

TEST_CASE("count and witness modes agree on membership for q^n <= 10^5") {
  int compared = 0;
  for (unsigned q : prime_powers_up_to(316)) {
    for (unsigned n = 2; oracle::ipow(q, n) <= 100'000; ++n) {
      CAPTURE(q);
      CAPTURE(n);
      const auto c = verify_pair(BigInt(q), n, Mode::Count);
      const auto w = verify_pair(BigInt(q), n, Mode::Witness);
      CHECK((c.verdict == Outcome::InP) == (w.verdict == Outcome::InP));
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("reports do not depend on the thread count") {
  for (auto mode : {Mode::Witness, Mode::Count, Mode::Exception}) {
    for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{5, 3}, {3, 7}, {2, 12}, {16, 4}}) {
      const auto a = verify_pair(BigInt(q), n, mode, with_threads(1));
      const auto b = verify_pair(BigInt(q), n, mode, with_threads(8));
      CHECK(same(a, b));
      CHECK(same(a, verify_pair(BigInt(q), n, mode, with_threads(3))));
    }
  }
}

TEST_CASE("exception list and confirmation") {
  const auto list = possible_exceptions();
  CHECK(list.size() == 47);
  std::map<unsigned, unsigned> per_n;
  for (const auto& e : list) ++per_n[e.n];
  CHECK(per_n == std::map<unsigned, unsigned>{{5, 17}, {6, 17}, {7, 3}, {8, 5}, {9, 2}, {10, 1}, {12, 2}});

  // The sieve leaves every listed pair open except (8, 5): 8^5 - 1 = 7 * 31 * 151
  // passes with l = 1, since 8^3 > (2 (5/delta + 2))^2.
  for (const auto& e : list) {
    CAPTURE(e.q);
    CAPTURE(e.n);
    const auto status = sieve::decide(BigInt(e.q), e.n).status;
    CHECK(status == (e.q == 8 && e.n == 5 ? sieve::Status::ProvedSieve : sieve::Status::Unresolved));
  }

  const std::vector<ExceptionPair> few{{2, 6}, {3, 5}, {2, 10}, {7, 5}};
  const auto s = confirm_exceptions(1000, {}, few);
  CHECK(s.all_in_p);
  REQUIRE(s.entries.size() == 4);
  CHECK(s.entries[0].report.mode == Mode::Count);
  CHECK(s.entries[1].report.mode == Mode::Count);
  CHECK(s.entries[2].report.mode == Mode::Witness);
  CHECK(s.entries[3].report.mode == Mode::Witness);

  const auto bad = confirm_exceptions(1000, {}, {{4, 3}});
  CHECK_FALSE(bad.all_in_p);
}
