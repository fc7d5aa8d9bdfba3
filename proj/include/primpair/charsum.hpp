#pragma once

// Character sums over tiny fields, evaluated numerically from discrete
// logarithms: the m-free and trace indicators and the counting identity
// they combine into.

#include <complex>
#include <cstdint>
#include <vector>

#include "primpair/field.hpp"
#include "primpair/numtheory.hpp"

namespace primpair::charsum {

using Complex = std::complex<double>;

/// chi_j(g^i) = exp(2 pi i j i / (q^n - 1)). chi_j(0) = 0 for every j,
/// including the trivial character.
struct MultiplicativeCharacter {
  std::uint64_t index = 0;
  /// (q^n - 1) / gcd(index, q^n - 1).
  std::uint64_t order = 1;
};

/// psi_u(x) = psi_0(u x) on F_q, psi_0(x) = exp(2 pi i Tr_{F_q|F_p}(x) / p).
struct AdditiveCharacter {
  std::uint64_t u_index = 0;  // position of u in subfield_elements()
};

/// Kahan-compensated complex accumulator.
class ComplexSum {
 public:
  void add(Complex v);
  Complex value() const { return {re_, im_}; }

 private:
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

/// Default cap on p^(kn) for chi_a sums.
inline constexpr std::uint64_t kTinyFieldCap = 1u << 14;

/// Read-only laboratory over one tiny field: discrete logs, the subfield
/// with its additive characters, and per-element data for a and a + 1/a.
class CharacterLab {
 public:
  explicit CharacterLab(const ff::FieldTower& tower, std::uint64_t max_order = kTinyFieldCap);

  const ff::FieldTower& tower() const { return *tower_; }
  std::uint64_t group_order() const { return group_order_; }
  std::uint64_t subfield_size() const { return subfield_.size(); }
  const std::vector<ff::FieldElement>& subfield() const { return subfield_; }
  /// Index of a subfield element in subfield(); throws DomainError otherwise.
  std::size_t subfield_index(const ff::FieldElement& a) const;

  MultiplicativeCharacter character(std::uint64_t index) const;
  /// {chi_j : j = (q^n-1)/d * t, gcd(t, d) = 1}.
  std::vector<MultiplicativeCharacter> characters_of_order(std::uint64_t d) const;

  /// Throws DomainError for a = 0.
  Complex eval_mult_char(const MultiplicativeCharacter& chi, const ff::FieldElement& a) const;
  /// e^(2 pi i Tr_{F_q|F_p}(u x) / p); operands must lie in F_q.
  Complex eval_add_char(const ff::FieldElement& u, const ff::FieldElement& x) const;

  /// theta(m) sum_{d | m} mu(d)/phi(d) sum_{chi of order d} chi(a).
  Complex rho_indicator(const ff::FieldElement& a, const Factorization& m) const;
  /// (1/q) sum_u psi_0(u Tr(a)) psi_0(-u b).
  Complex tau_indicator(const ff::FieldElement& a, const ff::FieldElement& b) const;

  /// sum_u psi_0(-b u) sum_{a != 0} chi1(a) chi2(a + 1/a) psi_0(u Tr(a)).
  Complex chi_a_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2,
                    const ff::FieldElement& b) const;
  /// The inner sum over a for a fixed additive parameter u (by subfield index).
  Complex inner_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2, std::size_t u_index) const;

  /// The full character expansion of N_b(l1, l2), rounded to an integer.
  /// Throws std::runtime_error if the imaginary part or rounding residue
  /// exceeds 1e-6.
  std::int64_t count_via_characters(const Factorization& l1, const Factorization& l2, const ff::FieldElement& b) const;

  /// Unrounded value of the same expansion.
  Complex count_expansion(const Factorization& l1, const Factorization& l2, const ff::FieldElement& b) const;

 private:
  Complex psi0_of_index(std::size_t u_index, std::size_t x_index) const;
  std::uint64_t log_of(const ff::FieldElement& a) const;
  void require_divides(const Factorization& m) const;

  const ff::FieldTower* tower_;
  std::uint64_t group_order_ = 0;
  ff::DiscreteLogTable logs_;
  std::vector<ff::FieldElement> subfield_;
  std::vector<std::uint64_t> subfield_codes_;
  std::vector<Complex> roots_;        // exp(2 pi i j / (q^n - 1))
  std::vector<Complex> p_roots_;      // exp(2 pi i t / p)
  std::vector<std::uint32_t> abs_trace_;      // Tr_{F_q|F_p} per subfield index
  std::vector<std::uint32_t> neg_index_;      // subfield_index(-x)
  // Per exponent i of alpha = g^i: log of alpha + 1/alpha (or UINT64_MAX
  // when it is zero) and subfield index of Tr(alpha).
  std::vector<std::uint64_t> shifted_log_;
  std::vector<std::uint32_t> trace_index_;
};

/// Exhaustive agreement checks on one tiny field. Characters range over
/// every character of squarefree order; l1, l2 over squarefree divisors of
/// q^n - 1.
struct AuditReport {
  BigInt q;
  unsigned n = 0;
  unsigned cq = 0;
  std::uint64_t rho_checks = 0, rho_failures = 0;
  double rho_max_error = 0;
  std::uint64_t tau_checks = 0, tau_failures = 0;
  double tau_max_error = 0;
  std::uint64_t count_checks = 0, count_failures = 0;
  /// |chi_a| <= C_q q^(n/2+1) over nontrivial character pairs and all a.
  std::uint64_t weil_checks = 0, weil_failures = 0;
  double weil_max_ratio = 0;
  /// |inner sum| <= C_q q^(n/2) over nontrivial pairs and all u.
  std::uint64_t inner_checks = 0, inner_failures = 0;
  double inner_max_ratio = 0;
  /// Largest |inner sum| / q^(n/2); 2 is the sharpened constant for even q.
  double inner_max_scaled = 0;

  bool pass() const { return rho_failures == 0 && tau_failures == 0 && count_failures == 0 && weil_failures == 0; }
};

inline constexpr double kIndicatorTolerance = 1e-9;

AuditReport audit(const ff::FieldTower& tower, std::uint64_t max_order = kTinyFieldCap);

}  // namespace primpair::charsum
