#include "primpair/numtheory.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "primpair/errors.hpp"
#include "splitmix.hpp"

namespace primpair {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& trial_primes() {
  static const std::vector<std::uint32_t> primes = primes_below(kTrialLimit);
  return primes;
}

bool fits_u64(const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

// Miller-Rabin round: true if n passes for base a (n odd, n > 3).
bool strong_probable_prime(const BigInt& n, const BigInt& a, const BigInt& d, unsigned s) {
  BigInt x;
  const BigInt n1 = n - 1;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n1) return true;
    if (x == 1) return false;
  }
  return false;
}

class RhoBudget {
 public:
  explicit RhoBudget(std::uint64_t total) : remaining_(total) {}
  bool spend(std::uint64_t amount) {
    if (amount > remaining_) {
      remaining_ = 0;
      return false;
    }
    remaining_ -= amount;
    return true;
  }

 private:
  std::uint64_t remaining_;
};

// Brent's cycle-finding variant of Pollard rho. Returns a nontrivial factor
// or nullopt when this (c, x0) pair degenerates.
std::optional<BigInt> brent_attempt(const BigInt& n, const BigInt& c, const BigInt& x0, RhoBudget& budget) {
  constexpr std::uint64_t kBatch = 128;
  BigInt y = x0, x, ys, q = 1, g = 1;
  std::uint64_t r = 1;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t steps = std::min(kBatch, r - k);
      if (!budget.spend(steps)) throw BudgetExhausted("incomplete factorization: Pollard rho budget exhausted on " + n.get_str());
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = (y * y + c) % n;
        BigInt diff = x - y;
        q = (q * abs(diff)) % n;
      }
      g = gcd(q, n);
      k += steps;
    }
    r *= 2;
  }
  if (g == n) {
    // Batch overshot; replay one step at a time from the saved point.
    do {
      ys = (ys * ys + c) % n;
      g = gcd(abs(BigInt(x - ys)), n);
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

BigInt find_factor(const BigInt& n, RhoBudget& budget) {
  std::uint64_t seed = detail::hash_combine(0x5eed, mpz_fdiv_ui(n.get_mpz_t(), 0xfffffffbUL));
  seed = detail::hash_combine(seed, mpz_sizeinbase(n.get_mpz_t(), 2));
  detail::SplitMix rng(seed);
  for (;;) {
    BigInt c = from_u64(rng.next()) % (n - 3) + 1;
    BigInt x0 = from_u64(rng.next()) % n;
    if (auto f = brent_attempt(n, c, x0, budget)) return *f;
  }
}

void split_composite(const BigInt& n, RhoBudget& budget, std::map<BigInt, unsigned>& acc) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++acc[n];
    return;
  }
  BigInt root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    split_composite(root, budget, acc);
    split_composite(root, budget, acc);
    return;
  }
  BigInt d = find_factor(n, budget);
  split_composite(d, budget, acc);
  split_composite(BigInt(n / d), budget, acc);
}

}  // namespace

std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::nullopt;
  // mpz_get_ui is only 64-bit on LP64; export the limbs to stay portable.
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return count == 0 ? 0 : out;
}

BigInt from_u64(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

Factorization Factorization::from_factors(std::vector<PrimePower> factors) {
  std::map<BigInt, unsigned> merged;
  for (auto& f : factors) {
    if (f.exponent == 0) continue;
    merged[f.prime] += f.exponent;
  }
  Factorization out;
  out.value_ = 1;
  for (auto& [p, e] : merged) {
    out.factors_.push_back({p, e});
    out.value_ *= pow(p, e);
  }
  return out;
}

Factorization Factorization::restricted_to(std::span<const BigInt> primes) const {
  std::vector<PrimePower> kept;
  for (const auto& p : primes) {
    auto it = std::find_if(factors_.begin(), factors_.end(), [&](const PrimePower& f) { return f.prime == p; });
    if (it == factors_.end()) throw DomainError("prime " + p.get_str() + " does not divide " + value_.get_str());
    kept.push_back(*it);
  }
  return from_factors(std::move(kept));
}

Factorization Factorization::radical() const {
  std::vector<PrimePower> kept;
  for (const auto& f : factors_) kept.push_back({f.prime, 1});
  return from_factors(std::move(kept));
}

std::vector<std::uint32_t> primes_below(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit <= 2) return out;
  std::vector<bool> composite(limit, false);
  for (std::uint32_t i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j < limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint32_t> first_primes(std::size_t count) {
  std::uint32_t limit = 64;
  for (;;) {
    auto primes = primes_below(limit);
    if (primes.size() >= count) {
      primes.resize(count);
      return primes;
    }
    limit *= 2;
  }
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++s;
  }
  if (fits_u64(n)) {
    // These twelve bases are deterministic for n < 3.3 * 10^24.
    for (std::uint32_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
      if (!strong_probable_prime(n, BigInt(a), d, s)) return false;
    return true;
  }
  if (!strong_probable_prime(n, BigInt(2), d, s)) return false;
  detail::SplitMix rng(0x6d696c6c6572ULL);
  const BigInt span = n - 3;
  for (int round = 0; round < 40; ++round) {
    BigInt a;
    // Two 64-bit draws give ample uniformity for a witness base.
    a = from_u64(rng.next());
    a <<= 64;
    a += from_u64(rng.next());
    a = a % span + 2;
    if (!strong_probable_prime(n, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(const BigInt& m, const FactorOptions& options) {
  if (m < 1) throw DomainError("factorize: argument must be a positive integer, got " + m.get_str());
  std::map<BigInt, unsigned> acc;
  BigInt rest = m;
  for (std::uint32_t p : trial_primes()) {
    if (rest == 1) break;
    if (BigInt(p) * p > rest) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    acc[BigInt(p)] = e;
  }
  if (rest != 1) {
    RhoBudget budget(options.rho_budget);
    split_composite(rest, budget, acc);
  }
  std::vector<PrimePower> factors;
  for (auto& [p, e] : acc) factors.push_back({p, e});
  auto out = Factorization::from_factors(std::move(factors));
  if (out.value() != m) throw DomainError("factorize: internal reconstruction mismatch for " + m.get_str());
  return out;
}

std::optional<std::pair<BigInt, unsigned>> prime_power_decompose(const BigInt& q, const FactorOptions& options) {
  if (q < 2) return std::nullopt;
  // Peel perfect powers first so large prime powers never reach rho.
  for (unsigned k = static_cast<unsigned>(mpz_sizeinbase(q.get_mpz_t(), 2)); k >= 2; --k) {
    BigInt root;
    if (mpz_root(root.get_mpz_t(), q.get_mpz_t(), k) != 0) {
      if (is_probable_prime(root)) return std::make_pair(root, k);
    }
  }
  if (is_probable_prime(q)) return std::make_pair(q, 1u);
  (void)options;
  return std::nullopt;
}

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.factors().size()); }

BigInt squarefree_divisor_count(const Factorization& f) {
  BigInt w = 1;
  w <<= omega(f);
  return w;
}

BigInt euler_phi(const Factorization& f) {
  BigInt phi = 1;
  for (const auto& [p, e] : f.factors()) phi *= (p - 1) * pow(p, e - 1);
  return phi;
}

int mobius(const Factorization& f) {
  for (const auto& pp : f.factors())
    if (pp.exponent >= 2) return 0;
  return omega(f) % 2 == 0 ? 1 : -1;
}

Rational theta(const Factorization& f) {
  Rational t = 1;
  for (const auto& pp : f.factors()) t *= Rational(pp.prime - 1, pp.prime);
  t.canonicalize();
  return t;
}

std::vector<BigInt> radical_primes(const Factorization& f) {
  std::vector<BigInt> out;
  for (const auto& pp : f.factors()) out.push_back(pp.prime);
  return out;
}

std::vector<Factorization> squarefree_divisors(const Factorization& f) {
  const auto primes = radical_primes(f);
  const std::size_t count = std::size_t{1} << primes.size();
  std::vector<Factorization> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<PrimePower> sel;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask >> i & 1) sel.push_back({primes[i], 1});
    out.push_back(Factorization::from_factors(std::move(sel)));
  }
  return out;
}

bool bound_margin(const Factorization& f, unsigned num, unsigned den) {
  if (den == 0) throw DomainError("bound_margin: den must be positive");
  const BigInt lhs = pow(squarefree_divisor_count(f), den);
  const BigInt rhs = pow(f.value(), num);
  return lhs < rhs;
}

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

BigInt parse_bigint(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw DomainError("not a non-negative decimal integer: '" + text + "'");
  return BigInt(text, 10);
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(const Rational& v) { return v.get_str(); }

namespace {

// round(|v| * 10^scale) as an integer, half away from zero.
BigInt scaled_round(const Rational& v, long scale) {
  Rational s = abs(v);
  if (scale >= 0)
    s *= pow(BigInt(10), static_cast<unsigned long>(scale));
  else
    s /= pow(BigInt(10), static_cast<unsigned long>(-scale));
  BigInt twice = (2 * s.get_num() + s.get_den());
  BigInt out = twice / (2 * s.get_den());
  return out;
}

std::string place_point(const std::string& digits, long decimals, bool negative) {
  std::string s = digits;
  if (decimals > 0) {
    if (static_cast<long>(s.size()) <= decimals) s.insert(0, std::string(decimals - s.size() + 1, '0'));
    s.insert(s.size() - decimals, ".");
  }
  if (negative && s.find_first_not_of("0.") != std::string::npos) s.insert(0, "-");
  return s;
}

}  // namespace

std::string render_fixed(const Rational& v, int decimals) {
  return place_point(scaled_round(v, decimals).get_str(), decimals, sgn(v) < 0);
}

std::string render_significant(const Rational& v, int significant) {
  if (sgn(v) == 0) return "0";
  // Decimal exponent e with 10^e <= |v| < 10^(e+1).
  Rational a = abs(v);
  long e = static_cast<long>(mpz_sizeinbase(BigInt(a.get_num() / a.get_den()).get_mpz_t(), 10)) - 1;
  if (a < 1) {
    e = -1;
    Rational t = a * 10;
    while (t < 1) {
      t *= 10;
      --e;
    }
  } else {
    while (Rational(pow(BigInt(10), static_cast<unsigned long>(e))) > a) --e;
    while (Rational(pow(BigInt(10), static_cast<unsigned long>(e + 1))) <= a) ++e;
  }
  long decimals = significant - 1 - e;
  BigInt digits = scaled_round(v, decimals);
  // Rounding can carry into a new leading digit (9.999995 -> 10.0000).
  if (mpz_sizeinbase(digits.get_mpz_t(), 10) > static_cast<std::size_t>(significant) && digits % 10 == 0) {
    digits /= 10;
    --decimals;
  }
  if (decimals >= 0) return place_point(digits.get_str(), decimals, sgn(v) < 0);
  std::string s = digits.get_str() + std::string(-decimals, '0');
  return sgn(v) < 0 ? "-" + s : s;
}

Rational truncate_decimals(const Rational& v, int decimals) {
  const BigInt scale = pow(BigInt(10), static_cast<unsigned long>(decimals));
  Rational s = v * scale;
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  Rational out(fl, scale);
  out.canonicalize();
  return out;
}

Rational parse_decimal(const std::string& text) {
  std::string t = text;
  bool negative = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    negative = t[0] == '-';
    t.erase(0, 1);
  }
  const auto dot = t.find('.');
  std::string whole = dot == std::string::npos ? t : t.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
  if (whole.empty()) whole = "0";
  Rational out(parse_bigint(whole + frac), pow(BigInt(10), static_cast<unsigned long>(frac.size())));
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace primpair
