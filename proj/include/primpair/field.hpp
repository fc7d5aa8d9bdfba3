#pragma once

// The tower F_p ⊂ F_q = F_{p^k} ⊂ F_{q^n}, realized as a single extension
// F_p[x]/(f) of degree k*n. F_q is the subfield fixed by the k-th power of
// Frobenius.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "primpair/numtheory.hpp"

namespace primpair::ff {

using Coeff = std::uint64_t;

namespace detail {
class ModRing;
}

class FieldTower;

/// Coefficient vector (low degree first) of an element of the top field.
class FieldElement {
 public:
  FieldElement() = default;

  std::span<const Coeff> coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const;
  std::uint64_t tower_id() const { return tower_id_; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.tower_id_ == b.tower_id_ && a.coeffs_ == b.coeffs_;
  }

 private:
  friend class FieldTower;
  FieldElement(std::uint64_t tower_id, std::vector<Coeff> coeffs) : tower_id_(tower_id), coeffs_(std::move(coeffs)) {}

  std::uint64_t tower_id_ = 0;
  std::vector<Coeff> coeffs_;
};

/// Immutable after construction; safe to share across threads.
class FieldTower {
 public:
  /// Builds the tower with the lexicographically smallest monic irreducible
  /// modulus of degree k*n and the first primitive element in enumeration
  /// order as generator. Throws DomainError if p is not prime.
  static FieldTower build(std::uint64_t p, unsigned k, unsigned n, const FactorOptions& options = {});

  std::uint64_t characteristic() const { return p_; }
  unsigned subfield_degree() const { return k_; }
  unsigned extension_degree() const { return n_; }
  unsigned degree() const { return k_ * n_; }
  std::uint64_t id() const { return id_; }

  /// p^k, the order of the subfield F_q.
  const BigInt& subfield_order() const { return q_; }
  /// p^(kn).
  const BigInt& field_order() const { return order_; }
  /// p^(kn) - 1 and its factorization.
  const BigInt& group_order() const { return group_order_; }
  const Factorization& group_order_factorization() const { return group_factorization_; }
  /// (p^(kn) - 1) / (p^k - 1).
  const BigInt& subfield_index() const { return subfield_index_; }

  /// p^(kn) when it fits in 64 bits.
  std::optional<std::uint64_t> field_order_u64() const { return order_u64_; }
  /// p^(kn) - 1 as u64; throws BoundsError when the field is too large.
  std::uint64_t group_order_u64() const;

  /// Modulus coefficients, low degree first, monic (length k*n + 1).
  const std::vector<Coeff>& modulus() const { return modulus_; }
  const FieldElement& generator() const { return generator_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement constant(Coeff c) const;
  /// Residue class of x.
  FieldElement x() const;
  /// Validates length and reduces nothing: entries must already lie in [0, p).
  FieldElement element(std::vector<Coeff> coeffs) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement scale(const FieldElement& a, Coeff c) const;
  /// Throws DomainError for a = 0.
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, std::uint64_t e) const;
  FieldElement pow(const FieldElement& a, const BigInt& e) const;

  /// a^(p^e).
  FieldElement frobenius(const FieldElement& a, std::uint64_t e) const;
  /// Tr_{F_{q^n}|F_q}(a) via the precomputed linear map.
  FieldElement trace(const FieldElement& a) const;
  /// Sum of a^(q^i), i < n, by repeated Frobenius. Slow reference path.
  FieldElement trace_direct(const FieldElement& a) const;
  /// Tr_{F_q|F_p}(a) for a in the subfield, as an integer in [0, p).
  Coeff absolute_trace(const FieldElement& a) const;

  bool in_subfield(const FieldElement& a) const;
  /// 0 followed by g^(j * subfield_index) for j = 0 .. q-2.
  std::vector<FieldElement> subfield_elements() const;

  /// Not a d-th power for every prime d | e. Throws DomainError for a = 0 or
  /// e not dividing p^(kn) - 1.
  bool is_e_free(const FieldElement& a, const BigInt& e) const;
  /// e-free for the squarefree e given by its primes (each must divide the group order).
  bool is_free_for(const FieldElement& a, std::span<const BigInt> primes) const;
  bool is_primitive(const FieldElement& a) const;

  /// Position in canonical enumeration order: coefficient vectors compared
  /// lexicographically from the constant term. Requires p^(kn) <= 2^64.
  std::uint64_t enumeration_index(const FieldElement& a) const;
  FieldElement element_at(std::uint64_t index) const;

  /// Dense encoding sum c_i p^i, a bijection onto [0, p^(kn)).
  std::uint64_t encode(std::span<const Coeff> coeffs) const;
  std::uint64_t encode(const FieldElement& a) const { return encode(a.coefficients()); }
  FieldElement decode(std::uint64_t code) const;

  // Allocation-free kernels for hot loops. Spans have length degree().
  void mul_into(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const;
  void add_into(std::span<Coeff> out, std::span<const Coeff> a, std::span<const Coeff> b) const;
  void trace_into(std::span<Coeff> out, std::span<const Coeff> a) const;

 private:
  FieldTower() = default;

  void check(const FieldElement& a) const;
  FieldElement wrap(std::vector<Coeff> c) const { return FieldElement(id_, std::move(c)); }
  void apply_matrix(std::span<Coeff> out, const std::vector<Coeff>& matrix, std::span<const Coeff> a) const;

  std::uint64_t id_ = 0;
  std::uint64_t p_ = 0;
  unsigned k_ = 0;
  unsigned n_ = 0;
  std::shared_ptr<const detail::ModRing> ring_;
  BigInt q_, order_, group_order_, subfield_index_;
  std::optional<std::uint64_t> order_u64_;
  Factorization group_factorization_;
  std::vector<Coeff> modulus_;
  std::vector<Coeff> frob_matrix_;  // column j = (x^j)^p, row-major d x d
  std::vector<Coeff> trace_matrix_; // column j = Tr(x^j)
  FieldElement generator_;
};

/// Irreducibility over F_p of a monic polynomial (low degree first), by Rabin's test.
bool is_irreducible(std::span<const Coeff> monic, std::uint64_t p);

/// generator^i -> i for every nonzero element; built by one pass of
/// running products.
class DiscreteLogTable {
 public:
  static constexpr std::uint64_t kDefaultMaxOrder = 1u << 16;

  /// Throws BoundsError when p^(kn) exceeds max_order.
  static DiscreteLogTable build(const FieldTower& tower, std::uint64_t max_order = kDefaultMaxOrder);

  /// nullopt for zero.
  std::optional<std::uint64_t> log(const FieldElement& a) const;
  std::optional<std::uint64_t> log_code(std::uint64_t code) const;
  std::uint64_t size() const { return group_order_; }

 private:
  std::uint64_t tower_id_ = 0;
  std::uint64_t p_ = 0;
  std::uint64_t group_order_ = 0;
  std::vector<std::uint32_t> logs_;  // indexed by encode(); entry for 0 unused
};

}  // namespace primpair::ff
