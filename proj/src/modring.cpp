#include "modring.hpp"

#include <algorithm>
#include <stdexcept>

namespace primpair::ff::detail {

Coeff pow_mod(Coeff a, std::uint64_t e, Coeff p) {
  Coeff r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

Coeff inv_mod(Coeff a, Coeff p) { return pow_mod(a, p - 2, p); }

ModRing::ModRing(Coeff p, std::vector<Coeff> monic) : p_(p), modulus_(std::move(monic)) {
  if (modulus_.size() < 2 || modulus_.back() != 1) throw std::invalid_argument("ModRing: modulus must be monic of degree >= 1");
  d_ = static_cast<unsigned>(modulus_.size() - 1);
  neg_tail_.resize(d_);
  for (unsigned j = 0; j < d_; ++j) neg_tail_[j] = (p_ - modulus_[j] % p_) % p_;
  // Each accumulator receives at most 2d products bounded by (p-1)^2.
  const unsigned __int128 worst = static_cast<unsigned __int128>(p_ - 1) * (p_ - 1) * (2 * d_ + 1);
  lazy_ = worst < (static_cast<unsigned __int128>(1) << 64);
}

void ModRing::mul(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const {
  const unsigned d = d_;
  thread_local std::vector<Coeff> prod;
  prod.assign(2 * d - 1, 0);
  if (lazy_) {
    for (unsigned i = 0; i < d; ++i) {
      const Coeff ai = a[i];
      if (ai == 0) continue;
      Coeff* row = prod.data() + i;
      for (unsigned j = 0; j < d; ++j) row[j] += ai * b[j];
    }
    for (unsigned i = 2 * d - 2; i >= d; --i) {
      const Coeff t = prod[i] % p_;
      if (t == 0) continue;
      Coeff* row = prod.data() + (i - d);
      for (unsigned j = 0; j < d; ++j) row[j] += t * neg_tail_[j];
    }
    for (unsigned j = 0; j < d; ++j) out[j] = prod[j] % p_;
    return;
  }
  for (unsigned i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < d; ++j) prod[i + j] = add_mod(prod[i + j], mul_mod(a[i], b[j], p_), p_);
  }
  for (unsigned i = 2 * d - 2; i >= d; --i) {
    const Coeff t = prod[i];
    if (t == 0) continue;
    for (unsigned j = 0; j < d; ++j) prod[i - d + j] = add_mod(prod[i - d + j], mul_mod(t, neg_tail_[j], p_), p_);
  }
  std::copy_n(prod.begin(), d, out.begin());
}

std::vector<Coeff> ModRing::mul(std::span<const Coeff> a, std::span<const Coeff> b) const {
  std::vector<Coeff> out(d_);
  mul(out, a, b);
  return out;
}

std::vector<Coeff> ModRing::one() const {
  std::vector<Coeff> out(d_, 0);
  out[0] = 1 % p_;
  return out;
}

std::vector<Coeff> ModRing::x() const {
  std::vector<Coeff> out(d_, 0);
  if (d_ >= 2)
    out[1] = 1;
  else
    out[0] = neg_tail_[0];
  return out;
}

std::vector<Coeff> ModRing::pow(std::span<const Coeff> a, std::uint64_t e) const {
  std::vector<Coeff> result = one();
  std::vector<Coeff> base(a.begin(), a.end());
  std::vector<Coeff> tmp(d_);
  while (e) {
    if (e & 1) {
      mul(tmp, result, base);
      result.swap(tmp);
    }
    e >>= 1;
    if (e) {
      mul(tmp, base, base);
      base.swap(tmp);
    }
  }
  return result;
}

namespace {

void trim(std::vector<Coeff>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace

std::vector<Coeff> poly_gcd(std::vector<Coeff> a, std::vector<Coeff> b, Coeff p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a <- a mod b
    const Coeff lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
      const Coeff t = mul_mod(a.back(), lead_inv, p);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = sub_mod(a[shift + j], mul_mod(t, b[j], p), p);
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  if (!a.empty()) {
    const Coeff lead_inv = inv_mod(a.back(), p);
    for (auto& c : a) c = mul_mod(c, lead_inv, p);
  }
  return a;
}

}  // namespace primpair::ff::detail
