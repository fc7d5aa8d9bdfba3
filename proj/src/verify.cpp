#include "primpair/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "primpair/errors.hpp"
#include "primpair/sieve.hpp"
#include "splitmix.hpp"

namespace primpair::verify {

namespace {

using ff::Coeff;
using ff::FieldElement;
using ff::FieldTower;

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

std::vector<std::uint64_t> small_primes(const Factorization& f) {
  std::vector<std::uint64_t> out;
  for (const auto& p : radical_primes(f)) out.push_back(*to_u64(p));
  return out;
}

bool coprime_to(std::uint64_t i, const std::vector<std::uint64_t>& primes) {
  for (auto p : primes)
    if (i % p == 0) return false;
  return true;
}

std::uint64_t enumerable_order(const FieldTower& t, std::uint64_t enum_bound) {
  const auto order = t.field_order_u64();
  if (!order || *order > enum_bound)
    throw BoundsError("q^n = " + t.field_order().get_str() + " exceeds the enumeration bound " +
                      std::to_string(enum_bound));
  return *order;
}

void require_divides(const FieldTower& t, const Factorization& l, const char* what) {
  if (!l.divides(t.group_order()))
    throw DomainError(std::string(what) + " = " + l.value().get_str() + " does not divide q^n - 1 = " +
                      t.group_order().get_str());
}

// Runs fn(begin, end) over contiguous slices of [0, total).
template <class Fn>
void parallel_ranges(std::uint64_t total, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || total < 4096) {
    fn(std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t step = (total + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(total, w * step);
    const std::uint64_t end = std::min<std::uint64_t>(total, begin + step);
    if (begin < end) pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

// Bit per encoded element: set iff the element is g^i with i coprime to
// every listed prime.
class FreeBitmap {
 public:
  FreeBitmap(const FieldTower& t, const std::vector<std::uint64_t>& primes, unsigned threads) {
    const std::uint64_t order = *t.field_order_u64();
    const std::uint64_t group = order - 1;
    words_.assign((order + 63) / 64, 0);
    const FieldElement& g = t.generator();
    const unsigned d = t.degree();
    parallel_ranges(group, threads, [&](std::uint64_t begin, std::uint64_t end) {
      FieldElement start = t.pow(g, begin);
      std::vector<Coeff> cur(start.coefficients().begin(), start.coefficients().end()), next(d);
      const auto gc = g.coefficients();
      for (std::uint64_t i = begin; i < end; ++i) {
        if (coprime_to(i, primes)) {
          const std::uint64_t code = t.encode(cur);
          std::atomic_ref<std::uint64_t>(words_[code >> 6]).fetch_or(std::uint64_t{1} << (code & 63),
                                                                    std::memory_order_relaxed);
        }
        t.mul_into(next, cur, gc);
        cur.swap(next);
      }
    });
  }

  bool test(std::uint64_t code) const { return words_[code >> 6] >> (code & 63) & 1; }

 private:
  std::vector<std::uint64_t> words_;
};

struct Tally {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> first;  // least qualifying exponent per class
};

// One pass over alpha = g^i: alpha free for l1_primes, alpha + 1/alpha in
// the bitmap, trace class looked up by encoding.
Tally tally(const FieldTower& t, const std::vector<std::uint64_t>& l1_primes, const FreeBitmap& beta_free,
            const std::unordered_map<std::uint64_t, std::size_t>& class_of, unsigned threads) {
  const std::uint64_t group = t.group_order_u64();
  const std::size_t classes = class_of.size();
  const unsigned d = t.degree();
  const FieldElement& g = t.generator();
  const FieldElement g_inv = t.inv(g);

  struct Part {
    std::uint64_t begin;
    Tally tally;
  };
  std::vector<Part> parts;
  std::mutex parts_mutex;
  parallel_ranges(group, threads, [&](std::uint64_t begin, std::uint64_t end) {
    Tally local{std::vector<std::uint64_t>(classes, 0), std::vector<std::uint64_t>(classes, kNone)};
    const FieldElement a0 = t.pow(g, begin);
    const FieldElement b0 = t.pow(g_inv, begin);
    std::vector<Coeff> a(a0.coefficients().begin(), a0.coefficients().end());
    std::vector<Coeff> b(b0.coefficients().begin(), b0.coefficients().end());
    std::vector<Coeff> tmp(d), sum(d), tr(d);
    const auto gc = g.coefficients();
    const auto gic = g_inv.coefficients();
    for (std::uint64_t i = begin; i < end; ++i) {
      if (coprime_to(i, l1_primes)) {
        t.add_into(sum, a, b);
        if (beta_free.test(t.encode(sum))) {
          t.trace_into(tr, a);
          const std::size_t c = class_of.at(t.encode(tr));
          if (local.counts[c]++ == 0) local.first[c] = i;
        }
      }
      t.mul_into(tmp, a, gc);
      a.swap(tmp);
      t.mul_into(tmp, b, gic);
      b.swap(tmp);
    }
    std::lock_guard lock(parts_mutex);
    parts.push_back({begin, std::move(local)});
  });

  std::sort(parts.begin(), parts.end(), [](const Part& x, const Part& y) { return x.begin < y.begin; });
  Tally out{std::vector<std::uint64_t>(classes, 0), std::vector<std::uint64_t>(classes, kNone)};
  for (const auto& part : parts) {
    for (std::size_t c = 0; c < classes; ++c) {
      out.counts[c] += part.tally.counts[c];
      out.first[c] = std::min(out.first[c], part.tally.first[c]);
    }
  }
  return out;
}

std::unordered_map<std::uint64_t, std::size_t> class_index(const FieldTower& t,
                                                            const std::vector<FieldElement>& subfield) {
  std::unordered_map<std::uint64_t, std::size_t> out;
  for (std::size_t i = 0; i < subfield.size(); ++i) out.emplace(t.encode(subfield[i]), i);
  return out;
}

std::vector<Coeff> coeffs_of(const FieldElement& e) { return {e.coefficients().begin(), e.coefficients().end()}; }

// Keyed permutation of [0, size) as a balanced Feistel network over the
// next even bit width, cycle-walked back into range.
class ExponentPermutation {
 public:
  ExponentPermutation(std::uint64_t size, std::uint64_t key) : size_(size), key_(key) {
    const unsigned bits = std::max(2u, static_cast<unsigned>(std::bit_width(size - 1)));
    half_ = (bits + 1) / 2;
    mask_ = (std::uint64_t{1} << half_) - 1;
  }

  std::uint64_t operator()(std::uint64_t x) const {
    do x = encrypt(x);
    while (x >= size_);
    return x;
  }

 private:
  std::uint64_t encrypt(std::uint64_t x) const {
    std::uint64_t left = x >> half_, right = x & mask_;
    for (std::uint64_t round = 0; round < 4; ++round) {
      const std::uint64_t f = detail::hash_combine(detail::hash_combine(key_, round), right) & mask_;
      std::swap(left, right);
      right ^= f;
    }
    return left << half_ | right;
  }

  std::uint64_t size_, key_, mask_;
  unsigned half_;
};

}  // namespace

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Witness: return "witness";
    case Mode::Count: return "count";
    case Mode::Exception: return "exception";
  }
  return "unknown";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::InP: return "IN_P";
    case Outcome::NotInP: return "NOT_IN_P";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

std::optional<Mode> parse_mode(const std::string& text) {
  if (text == "witness") return Mode::Witness;
  if (text == "count") return Mode::Count;
  if (text == "exception") return Mode::Exception;
  return std::nullopt;
}

std::uint64_t count_na(const FieldTower& t, const Factorization& l1, const Factorization& l2, const FieldElement& a,
                       std::uint64_t enum_bound) {
  enumerable_order(t, enum_bound);
  require_divides(t, l1, "l1");
  require_divides(t, l2, "l2");
  if (!t.in_subfield(a)) throw DomainError("count_na: the prescribed trace is not in F_q");
  const auto subfield = t.subfield_elements();
  const auto classes = class_index(t, subfield);
  const FreeBitmap beta_free(t, small_primes(l2), 1);
  const Tally counts = tally(t, small_primes(l1), beta_free, classes, 1);
  return counts.counts[classes.at(t.encode(a))];
}

bool meets_bound(std::uint64_t count, const BigInt& q, unsigned n, unsigned cq, const Factorization& l1,
                 const Factorization& l2) {
  // count >= (th/q)(A - C K s) with s = sqrt(q^(n+2))  <=>  X + C K s >= 0
  // where X = q count / th - A.
  const Rational th = theta(l1) * theta(l2);
  const BigInt A = pow(q, n) - 1;
  const BigInt K = squarefree_divisor_count(l1) * squarefree_divisor_count(l2) - 1;
  Rational X = Rational(q * from_u64(count)) / th - A;
  X.canonicalize();
  if (sgn(X) >= 0) return true;
  const BigInt Y = cq * K;
  if (sgn(Y) == 0) return false;
  return Rational(Y * Y * pow(q, n + 2)) >= X * X;
}

BoundCheck lower_bound_check(const FieldTower& t, const Factorization& l1, const Factorization& l2,
                             const FieldElement& a, std::uint64_t enum_bound) {
  BoundCheck out;
  out.count = count_na(t, l1, l2, a, enum_bound);
  const BigInt& q = t.subfield_order();
  const unsigned n = t.extension_degree();
  const unsigned cq = sieve::cq(q);
  const Rational th = theta(l1) * theta(l2);
  const BigInt K = squarefree_divisor_count(l1) * squarefree_divisor_count(l2) - 1;
  const BigInt A = t.group_order();
  if (n % 2 == 0) {
    Rational b = th / q * (A - cq * K * pow(q, n / 2 + 1));
    b.canonicalize();
    out.bound = b;
    out.bound_approx = static_cast<long double>(b.get_d());
  } else {
    const long double s = std::pow(static_cast<long double>(q.get_d()), (n + 2) / 2.0L);
    out.bound_approx = static_cast<long double>(th.get_d()) / static_cast<long double>(q.get_d()) *
                       (static_cast<long double>(A.get_d()) - cq * static_cast<long double>(K.get_d()) * s);
  }
  out.ok = meets_bound(out.count, q, n, cq, l1, l2);
  return out;
}

WitnessResult witness_search(const FieldTower& t, const FieldElement& a, std::size_t a_index, std::uint64_t seed,
                             std::uint64_t budget) {
  const std::uint64_t group = t.group_order_u64();
  const auto primes = small_primes(t.group_order_factorization());
  std::uint64_t key = detail::hash_combine(seed, *to_u64(t.subfield_order()));
  key = detail::hash_combine(key, t.extension_degree());
  key = detail::hash_combine(key, a_index);
  const ExponentPermutation perm(group, key);
  const FieldElement& g = t.generator();

  WitnessResult out;
  const std::uint64_t limit = std::min(budget, group);
  for (std::uint64_t j = 0; j < limit; ++j) {
    ++out.attempts;
    const std::uint64_t i = perm(j);
    if (!coprime_to(i, primes)) continue;
    const FieldElement alpha = t.pow(g, i);
    if (!(t.trace(alpha) == a)) continue;
    const FieldElement beta = t.add(alpha, t.pow(g, i == 0 ? 0 : group - i));
    if (!t.is_primitive(beta)) continue;
    out.witness = Witness{i, coeffs_of(alpha)};
    return out;
  }
  return out;
}

bool revalidate(const FieldTower& t, const Witness& w, const FieldElement& a) {
  const FieldElement alpha = t.element(w.coefficients);
  if (!(t.pow(t.generator(), w.exponent) == alpha)) return false;
  if (!t.is_primitive(alpha)) return false;
  if (!t.is_primitive(t.add(alpha, t.inv(alpha)))) return false;
  return t.trace_direct(alpha) == a;
}

VerifyReport verify_tower(const FieldTower& t, Mode mode, const VerifyOptions& options) {
  VerifyReport rep;
  rep.q = t.subfield_order();
  rep.n = t.extension_degree();
  rep.mode = mode;
  rep.seed = options.seed;
  const auto subfield = t.subfield_elements();
  for (std::size_t i = 0; i < subfield.size(); ++i) rep.per_trace.push_back({coeffs_of(subfield[i]), i, {}, {}, 0});

  if (mode == Mode::Witness) {
    t.group_order_u64();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t c; (c = next.fetch_add(1)) < subfield.size();) {
        auto found = witness_search(t, subfield[c], c, options.seed, options.witness_budget);
        rep.per_trace[c].witness = std::move(found.witness);
        rep.per_trace[c].attempts = found.attempts;
      }
    };
    const unsigned threads = std::clamp<unsigned>(options.threads, 1, static_cast<unsigned>(subfield.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    const bool all = std::all_of(rep.per_trace.begin(), rep.per_trace.end(), [](const TraceClass& c) { return c.witness.has_value(); });
    rep.verdict = all ? Outcome::InP : Outcome::Inconclusive;
    return rep;
  }

  enumerable_order(t, options.enum_bound);
  const auto primes = small_primes(t.group_order_factorization());
  const FreeBitmap primitive(t, primes, options.threads);
  const Tally counts = tally(t, primes, primitive, class_index(t, subfield), options.threads);
  const FieldElement& g = t.generator();
  bool all = true;
  for (std::size_t c = 0; c < subfield.size(); ++c) {
    auto& cls = rep.per_trace[c];
    cls.count = counts.counts[c];
    cls.attempts = t.group_order_u64();
    if (counts.first[c] != kNone) {
      cls.witness = Witness{counts.first[c], coeffs_of(t.pow(g, counts.first[c]))};
    } else {
      all = false;
      if (mode == Mode::Exception) rep.failing.push_back(c);
    }
  }
  rep.verdict = all ? Outcome::InP : Outcome::NotInP;
  return rep;
}

VerifyReport verify_pair(const BigInt& q, unsigned n, Mode mode, const VerifyOptions& options) {
  const auto pk = prime_power_decompose(q, options.factor);
  if (!pk) throw DomainError("q = " + q.get_str() + " is not a prime power");
  const auto p = to_u64(pk->first);
  if (!p) throw BoundsError("characteristic " + pk->first.get_str() + " does not fit in 64 bits");
  if (n == 0) throw DomainError("n must be positive");
  const auto t = FieldTower::build(*p, pk->second, n, options.factor);
  return verify_tower(t, mode, options);
}

std::uint64_t count_primitive_pairs(const FieldTower& t, std::uint64_t enum_bound) {
  enumerable_order(t, enum_bound);
  const auto primes = small_primes(t.group_order_factorization());
  const FreeBitmap primitive(t, primes, 1);
  const std::uint64_t group = t.group_order_u64();
  const FieldElement& g = t.generator();
  FieldElement alpha = t.one();
  std::uint64_t total = 0;
  // Independent of the tally kernel: inverse by exponent, no trace.
  for (std::uint64_t i = 0; i < group; ++i) {
    if (coprime_to(i, primes)) {
      const FieldElement beta = t.add(alpha, t.inv(alpha));
      if (!beta.is_zero() && primitive.test(t.encode(beta))) ++total;
    }
    alpha = t.mul(alpha, g);
  }
  return total;
}

std::vector<ExceptionPair> possible_exceptions() {
  std::vector<ExceptionPair> out;
  for (unsigned q : {3, 4, 5, 7, 8, 9, 11, 13, 16, 19, 25, 31, 37, 43, 49, 61, 71}) out.push_back({q, 5});
  for (unsigned q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 29, 31, 61}) out.push_back({q, 6});
  for (unsigned q : {3, 4, 7}) out.push_back({q, 7});
  for (unsigned q : {2, 3, 4, 5, 8}) out.push_back({q, 8});
  for (unsigned q : {2, 3}) out.push_back({q, 9});
  out.push_back({2, 10});
  for (unsigned q : {2, 3}) out.push_back({q, 12});
  return out;
}

ConfirmSummary confirm_exceptions(std::uint64_t scope, const VerifyOptions& options,
                                  const std::vector<ExceptionPair>& pairs) {
  ConfirmSummary out;
  out.scope = scope;
  for (const auto& pr : pairs) {
    const BigInt order = pow(BigInt(pr.q), pr.n);
    const Mode mode = order <= from_u64(scope) ? Mode::Count : Mode::Witness;
    VerifyOptions opts = options;
    opts.enum_bound = std::max(opts.enum_bound, scope);
    auto rep = verify_pair(BigInt(pr.q), pr.n, mode, opts);
    if (rep.verdict != Outcome::InP) out.all_in_p = false;
    out.entries.push_back({pr, std::move(rep)});
  }
  return out;
}

}  // namespace primpair::verify
