#include "primpair/field.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "modring.hpp"
#include "primpair/errors.hpp"

namespace primpair::ff {

namespace {

std::atomic<std::uint64_t> next_tower_id{1};

// x^(p^e) mod f by e successive p-th powers.
std::vector<Coeff> x_to_p_power(const detail::ModRing& ring, unsigned e) {
  std::vector<Coeff> h = ring.x();
  for (unsigned i = 0; i < e; ++i) h = ring.pow(h, ring.p());
  return h;
}

std::vector<unsigned> distinct_prime_divisors(unsigned d) {
  std::vector<unsigned> out;
  for (unsigned l = 2; l * l <= d; ++l) {
    if (d % l) continue;
    out.push_back(l);
    while (d % l == 0) d /= l;
  }
  if (d > 1) out.push_back(d);
  return out;
}

// Advances coefficients in canonical order (the constant term is the most
// significant digit). Returns false on wrap-around.
bool next_in_canonical_order(std::vector<Coeff>& c, Coeff p) {
  for (std::size_t i = c.size(); i-- > 0;) {
    if (++c[i] < p) return true;
    c[i] = 0;
  }
  return false;
}

}  // namespace

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Coeff c) { return c == 0; });
}

bool is_irreducible(std::span<const Coeff> monic, std::uint64_t p) {
  if (monic.size() < 2) return false;
  const unsigned d = static_cast<unsigned>(monic.size() - 1);
  detail::ModRing ring(p, std::vector<Coeff>(monic.begin(), monic.end()));
  if (x_to_p_power(ring, d) != ring.x()) return false;
  for (unsigned l : distinct_prime_divisors(d)) {
    std::vector<Coeff> h = x_to_p_power(ring, d / l);
    const std::vector<Coeff> xr = ring.x();
    for (unsigned j = 0; j < d; ++j) h[j] = detail::sub_mod(h[j], xr[j], p);
    const auto g = detail::poly_gcd(h, std::vector<Coeff>(monic.begin(), monic.end()), p);
    if (g.size() != 1) return false;
  }
  return true;
}

FieldTower FieldTower::build(std::uint64_t p, unsigned k, unsigned n, const FactorOptions& options) {
  if (p < 2 || !is_probable_prime(from_u64(p))) throw DomainError("build_field: p = " + std::to_string(p) + " is not prime");
  if (k == 0 || n == 0) throw DomainError("build_field: k and n must be positive");
  if (p > (std::uint64_t{1} << 63)) throw BoundsError("build_field: characteristic above 2^63 is not supported");
  FieldTower t;
  t.id_ = next_tower_id.fetch_add(1);
  t.p_ = p;
  t.k_ = k;
  t.n_ = n;
  const unsigned d = k * n;
  const BigInt P = from_u64(p);
  t.q_ = primpair::pow(P, k);
  t.order_ = primpair::pow(P, d);
  t.group_order_ = t.order_ - 1;
  t.subfield_index_ = t.group_order_ / (t.q_ - 1);
  t.order_u64_ = to_u64(t.order_);

  // Smallest monic irreducible: tuple (f_0, ..., f_{d-1}) with f_0 most significant.
  std::vector<Coeff> tail(d, 0);
  if (d >= 2) tail[0] = 1;
  for (;;) {
    std::vector<Coeff> monic = tail;
    monic.push_back(1);
    if (is_irreducible(monic, p)) {
      t.modulus_ = std::move(monic);
      break;
    }
    if (!next_in_canonical_order(tail, p)) throw DomainError("build_field: no irreducible polynomial found");
  }
  t.ring_ = std::make_shared<detail::ModRing>(p, t.modulus_);

  // Frobenius matrix: column j holds (x^j)^p = (x^p)^j.
  const std::vector<Coeff> xp = t.ring_->pow(t.ring_->x(), p);
  t.frob_matrix_.assign(std::size_t(d) * d, 0);
  std::vector<Coeff> col = t.ring_->one();
  for (unsigned j = 0; j < d; ++j) {
    for (unsigned i = 0; i < d; ++i) t.frob_matrix_[std::size_t(i) * d + j] = col[i];
    col = t.ring_->mul(col, xp);
  }

  t.trace_matrix_.assign(std::size_t(d) * d, 0);
  std::vector<Coeff> basis(d, 0);
  for (unsigned j = 0; j < d; ++j) {
    std::fill(basis.begin(), basis.end(), 0);
    basis[j] = 1 % p;
    const FieldElement tr = t.trace_direct(t.wrap(basis));
    for (unsigned i = 0; i < d; ++i) t.trace_matrix_[std::size_t(i) * d + j] = tr.coeffs_[i];
  }

  t.group_factorization_ = factorize(t.group_order_, options);

  std::vector<Coeff> cand(d, 0);
  while (next_in_canonical_order(cand, p)) {
    FieldElement e = t.wrap(cand);
    if (t.is_primitive(e)) {
      t.generator_ = std::move(e);
      break;
    }
  }
  if (t.generator_.size() == 0) throw DomainError("build_field: no primitive element found");
  return t;
}

std::uint64_t FieldTower::group_order_u64() const {
  if (!order_u64_) throw BoundsError("field order p^(kn) exceeds 64 bits");
  return *order_u64_ - 1;
}

void FieldTower::check(const FieldElement& a) const {
  if (a.tower_id_ != id_ || a.coeffs_.size() != degree()) throw DomainError("element does not belong to this field tower");
}

FieldElement FieldTower::zero() const { return wrap(std::vector<Coeff>(degree(), 0)); }

FieldElement FieldTower::one() const { return wrap(ring_->one()); }

FieldElement FieldTower::constant(Coeff c) const {
  std::vector<Coeff> v(degree(), 0);
  v[0] = c % p_;
  return wrap(std::move(v));
}

FieldElement FieldTower::x() const { return wrap(ring_->x()); }

FieldElement FieldTower::element(std::vector<Coeff> coeffs) const {
  if (coeffs.size() != degree()) throw DomainError("element: expected " + std::to_string(degree()) + " coefficients");
  for (Coeff c : coeffs)
    if (c >= p_) throw DomainError("element: coefficient not reduced mod p");
  return wrap(std::move(coeffs));
}

FieldElement FieldTower::add(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  std::vector<Coeff> out(degree());
  add_into(out, a.coeffs_, b.coeffs_);
  return wrap(std::move(out));
}

FieldElement FieldTower::sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

FieldElement FieldTower::neg(const FieldElement& a) const {
  check(a);
  std::vector<Coeff> out(degree());
  for (unsigned i = 0; i < degree(); ++i) out[i] = a.coeffs_[i] == 0 ? 0 : p_ - a.coeffs_[i];
  return wrap(std::move(out));
}

FieldElement FieldTower::mul(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  return wrap(ring_->mul(a.coeffs_, b.coeffs_));
}

FieldElement FieldTower::scale(const FieldElement& a, Coeff c) const {
  check(a);
  std::vector<Coeff> out(degree());
  for (unsigned i = 0; i < degree(); ++i) out[i] = detail::mul_mod(a.coeffs_[i], c % p_, p_);
  return wrap(std::move(out));
}

FieldElement FieldTower::inv(const FieldElement& a) const {
  check(a);
  if (a.is_zero()) throw DomainError("inv: zero has no inverse");
  return pow(a, BigInt(group_order_ - 1));
}

FieldElement FieldTower::pow(const FieldElement& a, std::uint64_t e) const {
  check(a);
  return wrap(ring_->pow(a.coeffs_, e));
}

FieldElement FieldTower::pow(const FieldElement& a, const BigInt& e) const {
  check(a);
  if (sgn(e) < 0) throw DomainError("pow: negative exponent");
  if (auto small = to_u64(e)) return pow(a, *small);
  std::vector<Coeff> result = ring_->one();
  std::vector<Coeff> tmp(degree());
  for (std::size_t bit = mpz_sizeinbase(e.get_mpz_t(), 2); bit-- > 0;) {
    ring_->mul(tmp, result, result);
    result.swap(tmp);
    if (mpz_tstbit(e.get_mpz_t(), bit)) {
      ring_->mul(tmp, result, a.coeffs_);
      result.swap(tmp);
    }
  }
  return wrap(std::move(result));
}

void FieldTower::apply_matrix(std::span<Coeff> out, const std::vector<Coeff>& matrix, std::span<const Coeff> a) const {
  const unsigned d = degree();
  for (unsigned i = 0; i < d; ++i) {
    const Coeff* row = matrix.data() + std::size_t(i) * d;
    if (ring_->lazy()) {
      Coeff acc = 0;
      for (unsigned j = 0; j < d; ++j) acc += row[j] * a[j];
      out[i] = acc % p_;
    } else {
      Coeff acc = 0;
      for (unsigned j = 0; j < d; ++j) acc = detail::add_mod(acc, detail::mul_mod(row[j], a[j], p_), p_);
      out[i] = acc;
    }
  }
}

FieldElement FieldTower::frobenius(const FieldElement& a, std::uint64_t e) const {
  check(a);
  std::vector<Coeff> cur = a.coeffs_;
  std::vector<Coeff> tmp(degree());
  for (std::uint64_t i = 0; i < e % degree(); ++i) {
    apply_matrix(tmp, frob_matrix_, cur);
    cur.swap(tmp);
  }
  return wrap(std::move(cur));
}

FieldElement FieldTower::trace_direct(const FieldElement& a) const {
  check(a);
  FieldElement acc = zero();
  FieldElement conj = a;
  for (unsigned i = 0; i < n_; ++i) {
    acc = add(acc, conj);
    conj = frobenius(conj, k_);
  }
  return acc;
}

FieldElement FieldTower::trace(const FieldElement& a) const {
  check(a);
  std::vector<Coeff> out(degree());
  trace_into(out, a.coeffs_);
  return wrap(std::move(out));
}

void FieldTower::trace_into(std::span<Coeff> out, std::span<const Coeff> a) const { apply_matrix(out, trace_matrix_, a); }

void FieldTower::mul_into(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const {
  ring_->mul(out, a, b);
}

void FieldTower::add_into(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const {
  for (unsigned i = 0; i < degree(); ++i) out[i] = detail::add_mod(a[i], b[i], p_);
}

Coeff FieldTower::absolute_trace(const FieldElement& a) const {
  if (!in_subfield(a)) throw DomainError("absolute_trace: element is not in the subfield F_q");
  FieldElement acc = zero();
  FieldElement conj = a;
  for (unsigned i = 0; i < k_; ++i) {
    acc = add(acc, conj);
    conj = frobenius(conj, 1);
  }
  for (unsigned i = 1; i < degree(); ++i)
    if (acc.coeffs_[i] != 0) throw DomainError("absolute_trace: result left the prime field");
  return acc.coeffs_[0];
}

bool FieldTower::in_subfield(const FieldElement& a) const { return frobenius(a, k_) == a; }

std::vector<FieldElement> FieldTower::subfield_elements() const {
  const auto q = to_u64(q_);
  if (!q || *q > (std::uint64_t{1} << 32)) throw BoundsError("subfield_elements: subfield too large to enumerate");
  std::vector<FieldElement> out;
  out.reserve(*q);
  out.push_back(zero());
  const FieldElement step = pow(generator_, subfield_index_);
  FieldElement cur = one();
  for (std::uint64_t j = 0; j + 1 < *q; ++j) {
    out.push_back(cur);
    cur = mul(cur, step);
  }
  return out;
}

bool FieldTower::is_free_for(const FieldElement& a, std::span<const BigInt> primes) const {
  check(a);
  if (a.is_zero()) throw DomainError("is_e_free: zero is never e-free");
  const FieldElement unit = one();
  for (const auto& l : primes) {
    if (!mpz_divisible_p(group_order_.get_mpz_t(), l.get_mpz_t()))
      throw DomainError("is_e_free: prime " + l.get_str() + " does not divide the group order");
    if (pow(a, BigInt(group_order_ / l)) == unit) return false;
  }
  return true;
}

bool FieldTower::is_e_free(const FieldElement& a, const BigInt& e) const {
  if (sgn(e) <= 0 || !mpz_divisible_p(group_order_.get_mpz_t(), e.get_mpz_t()))
    throw DomainError("is_e_free: e = " + e.get_str() + " does not divide " + group_order_.get_str());
  std::vector<BigInt> primes;
  for (const auto& pp : group_factorization_.factors())
    if (mpz_divisible_p(e.get_mpz_t(), pp.prime.get_mpz_t())) primes.push_back(pp.prime);
  return is_free_for(a, primes);
}

bool FieldTower::is_primitive(const FieldElement& a) const {
  check(a);
  if (a.is_zero()) return false;
  return is_free_for(a, radical_primes(group_factorization_));
}

std::uint64_t FieldTower::enumeration_index(const FieldElement& a) const {
  check(a);
  if (!order_u64_) throw BoundsError("enumeration_index: field order exceeds 64 bits");
  std::uint64_t idx = 0;
  for (unsigned i = 0; i < degree(); ++i) idx = idx * p_ + a.coeffs_[i];
  return idx;
}

FieldElement FieldTower::element_at(std::uint64_t index) const {
  if (!order_u64_ || index >= *order_u64_) throw BoundsError("element_at: index out of range");
  std::vector<Coeff> c(degree());
  for (unsigned i = degree(); i-- > 0;) {
    c[i] = index % p_;
    index /= p_;
  }
  return wrap(std::move(c));
}

std::uint64_t FieldTower::encode(std::span<const Coeff> coeffs) const {
  std::uint64_t code = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) code = code * p_ + coeffs[i];
  return code;
}

FieldElement FieldTower::decode(std::uint64_t code) const {
  if (!order_u64_ || code >= *order_u64_) throw BoundsError("decode: code out of range");
  std::vector<Coeff> c(degree());
  for (unsigned i = 0; i < degree(); ++i) {
    c[i] = code % p_;
    code /= p_;
  }
  return wrap(std::move(c));
}

DiscreteLogTable DiscreteLogTable::build(const FieldTower& tower, std::uint64_t max_order) {
  const auto order = tower.field_order_u64();
  if (!order || *order > max_order || *order > std::numeric_limits<std::uint32_t>::max())
    throw BoundsError("discrete_log_table: field of order " + tower.field_order().get_str() + " exceeds the tiny-field bound");
  DiscreteLogTable t;
  t.tower_id_ = tower.id();
  t.p_ = tower.characteristic();
  t.group_order_ = *order - 1;
  t.logs_.assign(*order, std::numeric_limits<std::uint32_t>::max());
  const unsigned d = tower.degree();
  std::vector<Coeff> cur(d, 0), next(d);
  cur[0] = 1;
  const auto g = tower.generator().coefficients();
  for (std::uint64_t i = 0; i < t.group_order_; ++i) {
    t.logs_[tower.encode(cur)] = static_cast<std::uint32_t>(i);
    tower.mul_into(next, cur, g);
    cur.swap(next);
  }
  return t;
}

std::optional<std::uint64_t> DiscreteLogTable::log_code(std::uint64_t code) const {
  if (code == 0 || code >= logs_.size()) return std::nullopt;
  return logs_[code];
}

std::optional<std::uint64_t> DiscreteLogTable::log(const FieldElement& a) const {
  if (a.tower_id() != tower_id_) throw DomainError("discrete log: element from a different tower");
  std::uint64_t code = 0;
  const auto c = a.coefficients();
  for (std::size_t i = c.size(); i-- > 0;) code = code * p_ + c[i];
  return log_code(code);
}

}  // namespace primpair::ff
