#include "primpair/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "primpair/errors.hpp"
#include "primpair/sieve.hpp"
#include "primpair/verify.hpp"

namespace primpair::charsum {

namespace {

constexpr std::uint64_t kNoLog = std::numeric_limits<std::uint64_t>::max();

std::vector<Complex> unit_roots(std::uint64_t m) {
  std::vector<Complex> out(m);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::uint64_t j = 0; j < m; ++j) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(m);
    out[j] = {std::cos(t), std::sin(t)};
  }
  return out;
}

}  // namespace

void ComplexSum::add(Complex v) {
  const double yr = v.real() - cre_;
  const double tr = re_ + yr;
  cre_ = (tr - re_) - yr;
  re_ = tr;
  const double yi = v.imag() - cim_;
  const double ti = im_ + yi;
  cim_ = (ti - im_) - yi;
  im_ = ti;
}

CharacterLab::CharacterLab(const ff::FieldTower& tower, std::uint64_t max_order)
    : tower_(&tower), logs_(ff::DiscreteLogTable::build(tower, max_order)) {
  group_order_ = tower.group_order_u64();
  subfield_ = tower.subfield_elements();
  for (const auto& e : subfield_) subfield_codes_.push_back(tower.encode(e));
  roots_ = unit_roots(group_order_);
  p_roots_ = unit_roots(tower.characteristic());

  const std::size_t q = subfield_.size();
  abs_trace_.resize(q);
  neg_index_.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    abs_trace_[i] = static_cast<std::uint32_t>(tower.absolute_trace(subfield_[i]));
    neg_index_[i] = static_cast<std::uint32_t>(subfield_index(tower.neg(subfield_[i])));
  }

  shifted_log_.resize(group_order_);
  trace_index_.resize(group_order_);
  const ff::FieldElement& g = tower.generator();
  ff::FieldElement alpha = tower.one();
  for (std::uint64_t i = 0; i < group_order_; ++i) {
    const ff::FieldElement beta = tower.add(alpha, tower.inv(alpha));
    const auto lb = logs_.log(beta);
    shifted_log_[i] = lb ? *lb : kNoLog;
    trace_index_[i] = static_cast<std::uint32_t>(subfield_index(tower.trace(alpha)));
    alpha = tower.mul(alpha, g);
  }
}

std::size_t CharacterLab::subfield_index(const ff::FieldElement& a) const {
  const std::uint64_t code = tower_->encode(a);
  for (std::size_t i = 0; i < subfield_codes_.size(); ++i)
    if (subfield_codes_[i] == code) return i;
  throw DomainError("element is not in the subfield F_q");
}

std::uint64_t CharacterLab::log_of(const ff::FieldElement& a) const {
  const auto l = logs_.log(a);
  if (!l) throw DomainError("multiplicative characters are not evaluated at 0");
  return *l;
}

void CharacterLab::require_divides(const Factorization& m) const {
  if (!m.divides(tower_->group_order()))
    throw DomainError(m.value().get_str() + " does not divide q^n - 1 = " + tower_->group_order().get_str());
}

MultiplicativeCharacter CharacterLab::character(std::uint64_t index) const {
  index %= group_order_;
  return {index, group_order_ / std::gcd(index, group_order_)};
}

std::vector<MultiplicativeCharacter> CharacterLab::characters_of_order(std::uint64_t d) const {
  if (d == 0 || group_order_ % d != 0) throw DomainError("character order must divide q^n - 1");
  std::vector<MultiplicativeCharacter> out;
  const std::uint64_t step = group_order_ / d;
  for (std::uint64_t t = 0; t < d; ++t)
    if (std::gcd(t, d) == 1) out.push_back({step * t, d});
  return out;
}

Complex CharacterLab::eval_mult_char(const MultiplicativeCharacter& chi, const ff::FieldElement& a) const {
  const unsigned __int128 e = static_cast<unsigned __int128>(chi.index) * log_of(a);
  return roots_[static_cast<std::uint64_t>(e % group_order_)];
}

Complex CharacterLab::psi0_of_index(std::size_t u_index, std::size_t x_index) const {
  if (u_index == 0 || x_index == 0) return {1.0, 0.0};
  const std::size_t qm1 = subfield_.size() - 1;
  const std::size_t prod = 1 + ((u_index - 1) + (x_index - 1)) % qm1;
  return p_roots_[abs_trace_[prod]];
}

Complex CharacterLab::eval_add_char(const ff::FieldElement& u, const ff::FieldElement& x) const {
  return psi0_of_index(subfield_index(u), subfield_index(x));
}

Complex CharacterLab::rho_indicator(const ff::FieldElement& a, const Factorization& m) const {
  require_divides(m);
  if (a.is_zero()) throw DomainError("rho_indicator: a must be nonzero");
  const std::uint64_t la = log_of(a);
  ComplexSum outer;
  for (const auto& d : squarefree_divisors(m)) {
    const std::uint64_t dv = *to_u64(d.value());
    ComplexSum inner;
    for (const auto& chi : characters_of_order(dv)) {
      const unsigned __int128 e = static_cast<unsigned __int128>(chi.index) * la;
      inner.add(roots_[static_cast<std::uint64_t>(e % group_order_)]);
    }
    const double weight = static_cast<double>(mobius(d)) / euler_phi(d).get_d();
    outer.add(weight * inner.value());
  }
  return theta(m).get_d() * outer.value();
}

Complex CharacterLab::tau_indicator(const ff::FieldElement& a, const ff::FieldElement& b) const {
  const std::size_t t = subfield_index(tower_->trace(a));
  const std::size_t bi = subfield_index(b);
  ComplexSum s;
  for (std::size_t u = 0; u < subfield_.size(); ++u) s.add(psi0_of_index(u, t) * psi0_of_index(u, neg_index_[bi]));
  return s.value() / static_cast<double>(subfield_.size());
}

Complex CharacterLab::inner_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2,
                                std::size_t u_index) const {
  ComplexSum s;
  for (std::uint64_t i = 0; i < group_order_; ++i) {
    if (shifted_log_[i] == kNoLog) continue;
    const unsigned __int128 e = static_cast<unsigned __int128>(chi1.index) * i +
                                static_cast<unsigned __int128>(chi2.index) * shifted_log_[i];
    s.add(roots_[static_cast<std::uint64_t>(e % group_order_)] * psi0_of_index(u_index, trace_index_[i]));
  }
  return s.value();
}

Complex CharacterLab::chi_a_sum(const MultiplicativeCharacter& chi1, const MultiplicativeCharacter& chi2,
                                const ff::FieldElement& b) const {
  const std::size_t neg_b = neg_index_[subfield_index(b)];
  ComplexSum s;
  for (std::size_t u = 0; u < subfield_.size(); ++u) s.add(psi0_of_index(u, neg_b) * inner_sum(chi1, chi2, u));
  return s.value();
}

Complex CharacterLab::count_expansion(const Factorization& l1, const Factorization& l2, const ff::FieldElement& b) const {
  require_divides(l1);
  require_divides(l2);
  ComplexSum total;
  for (const auto& d1 : squarefree_divisors(l1)) {
    const auto chars1 = characters_of_order(*to_u64(d1.value()));
    const double w1 = static_cast<double>(mobius(d1)) / euler_phi(d1).get_d();
    for (const auto& d2 : squarefree_divisors(l2)) {
      const auto chars2 = characters_of_order(*to_u64(d2.value()));
      const double w2 = static_cast<double>(mobius(d2)) / euler_phi(d2).get_d();
      ComplexSum block;
      for (const auto& c1 : chars1)
        for (const auto& c2 : chars2) block.add(chi_a_sum(c1, c2, b));
      total.add(w1 * w2 * block.value());
    }
  }
  const double scale = Rational(theta(l1) * theta(l2)).get_d() / static_cast<double>(subfield_.size());
  return scale * total.value();
}

std::int64_t CharacterLab::count_via_characters(const Factorization& l1, const Factorization& l2,
                                                const ff::FieldElement& b) const {
  const Complex v = count_expansion(l1, l2, b);
  const double rounded = std::round(v.real());
  if (std::abs(v.imag()) > 1e-6 || std::abs(v.real() - rounded) > 1e-6)
    throw std::runtime_error("count_via_characters: expansion " + std::to_string(v.real()) + " + " +
                             std::to_string(v.imag()) + "i is not an integer within 1e-6");
  return static_cast<std::int64_t>(rounded);
}

}  // namespace primpair::charsum

namespace primpair::charsum {

namespace {

std::vector<BigInt> all_divisors(const Factorization& f) {
  std::vector<BigInt> out{1};
  for (const auto& pp : f.factors()) {
    const std::size_t base = out.size();
    BigInt power = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double indicator_error(Complex v, bool expected) {
  return std::max(std::abs(v.real() - (expected ? 1.0 : 0.0)), std::abs(v.imag()));
}

}  // namespace

AuditReport audit(const ff::FieldTower& tower, std::uint64_t max_order) {
  const CharacterLab lab(tower, max_order);
  AuditReport rep;
  rep.q = tower.subfield_order();
  rep.n = tower.extension_degree();
  rep.cq = sieve::cq(rep.q);
  const Factorization& full = tower.group_order_factorization();
  const std::uint64_t group = lab.group_order();
  const ff::FieldElement& g = tower.generator();

  std::vector<ff::FieldElement> nonzero;
  for (ff::FieldElement a = tower.one(); nonzero.size() < group; a = tower.mul(a, g)) nonzero.push_back(a);

  for (const auto& m : all_divisors(full)) {
    const Factorization fm = factorize(m);
    for (const auto& a : nonzero) {
      const double err = indicator_error(lab.rho_indicator(a, fm), tower.is_e_free(a, m));
      ++rep.rho_checks;
      rep.rho_max_error = std::max(rep.rho_max_error, err);
      if (err > kIndicatorTolerance) ++rep.rho_failures;
    }
  }

  std::vector<ff::FieldElement> everything{tower.zero()};
  everything.insert(everything.end(), nonzero.begin(), nonzero.end());
  for (const auto& a : everything) {
    const ff::FieldElement tr = tower.trace(a);
    for (const auto& b : lab.subfield()) {
      const double err = indicator_error(lab.tau_indicator(a, b), tr == b);
      ++rep.tau_checks;
      rep.tau_max_error = std::max(rep.tau_max_error, err);
      if (err > kIndicatorTolerance) ++rep.tau_failures;
    }
  }

  const auto divisors = squarefree_divisors(full);
  for (const auto& l1 : divisors) {
    for (const auto& l2 : divisors) {
      for (const auto& b : lab.subfield()) {
        ++rep.count_checks;
        try {
          if (lab.count_via_characters(l1, l2, b) != static_cast<std::int64_t>(verify::count_na(tower, l1, l2, b, max_order)))
            ++rep.count_failures;
        } catch (const std::runtime_error&) {
          ++rep.count_failures;
        }
      }
    }
  }

  std::vector<MultiplicativeCharacter> chars;
  for (const auto& d : divisors) {
    const auto batch = lab.characters_of_order(*to_u64(d.value()));
    chars.insert(chars.end(), batch.begin(), batch.end());
  }
  const double qd = rep.q.get_d();
  const double half = std::pow(qd, rep.n / 2.0);
  const double outer_cap = rep.cq * half * qd;
  const double inner_cap = rep.cq * half;
  for (const auto& c1 : chars) {
    for (const auto& c2 : chars) {
      if (c1.index == 0 && c2.index == 0) continue;
      std::vector<Complex> inner(lab.subfield_size());
      for (std::size_t u = 0; u < inner.size(); ++u) {
        inner[u] = lab.inner_sum(c1, c2, u);
        const double mag = std::abs(inner[u]);
        ++rep.inner_checks;
        rep.inner_max_ratio = std::max(rep.inner_max_ratio, mag / inner_cap);
        rep.inner_max_scaled = std::max(rep.inner_max_scaled, mag / half);
        if (mag > inner_cap * (1 + 1e-12)) ++rep.inner_failures;
      }
      for (const auto& b : lab.subfield()) {
        const double mag = std::abs(lab.chi_a_sum(c1, c2, b));
        ++rep.weil_checks;
        rep.weil_max_ratio = std::max(rep.weil_max_ratio, mag / outer_cap);
        if (mag > outer_cap * (1 + 1e-12)) ++rep.weil_failures;
      }
    }
  }
  return rep;
}

}  // namespace primpair::charsum
