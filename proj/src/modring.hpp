#pragma once

// Arithmetic in F_p[x]/(f) for a monic f of degree d; f need not be
// irreducible (the irreducibility test runs on top of this).

#include <cstdint>
#include <span>
#include <vector>

namespace primpair::ff::detail {

using Coeff = std::uint64_t;

inline Coeff mul_mod(Coeff a, Coeff b, Coeff p) {
  return static_cast<Coeff>(static_cast<unsigned __int128>(a) * b % p);
}

inline Coeff add_mod(Coeff a, Coeff b, Coeff p) { return a >= p - b ? a - (p - b) : a + b; }

inline Coeff sub_mod(Coeff a, Coeff b, Coeff p) { return a >= b ? a - b : a + (p - b); }

Coeff pow_mod(Coeff a, std::uint64_t e, Coeff p);
Coeff inv_mod(Coeff a, Coeff p);

class ModRing {
 public:
  ModRing(Coeff p, std::vector<Coeff> monic);

  Coeff p() const { return p_; }
  unsigned degree() const { return d_; }
  const std::vector<Coeff>& modulus() const { return modulus_; }
  /// Whether sums of up to 2d products fit in 64 bits without reduction.
  bool lazy() const { return lazy_; }

  void mul(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const;
  std::vector<Coeff> mul(std::span<const Coeff> a, std::span<const Coeff> b) const;
  std::vector<Coeff> pow(std::span<const Coeff> a, std::uint64_t e) const;
  std::vector<Coeff> one() const;
  /// x mod f.
  std::vector<Coeff> x() const;

 private:
  Coeff p_;
  unsigned d_;
  bool lazy_;
  std::vector<Coeff> modulus_;
  std::vector<Coeff> neg_tail_;  // (p - f_j) mod p
};

/// Polynomials over F_p as coefficient vectors, trimmed of leading zeros.
std::vector<Coeff> poly_gcd(std::vector<Coeff> a, std::vector<Coeff> b, Coeff p);

}  // namespace primpair::ff::detail
