#pragma once

#include "cdineq/field.hpp"
#include "cdineq/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdineq {

// Truncated Puiseux series sum c_k t^{k/e}. Coefficients at exponents at or
// beyond the precision bound are unknown; an infinite bound means exact.
class PuiseuxSeries {
 public:
  using Term = std::pair<std::int64_t, FieldElem>;

  PuiseuxSeries() = default;
  explicit PuiseuxSeries(const FieldTower* tw, QInf prec = QInf::infinity());

  static PuiseuxSeries zero(const FieldTower& tw, QInf prec = QInf::infinity());
  static PuiseuxSeries constant(const FieldElem& c, QInf prec = QInf::infinity());
  static PuiseuxSeries monomial(const FieldElem& c, Rat exponent, QInf prec = QInf::infinity());
  // t^{k/e} terms in any order; duplicates are summed, result normalized.
  static PuiseuxSeries from_terms(const FieldTower& tw, std::int64_t e, std::vector<Term> terms,
                                  QInf prec = QInf::infinity());

  const FieldTower* tower() const { return tower_; }
  std::int64_t e() const { return e_; }
  const std::vector<Term>& terms() const { return terms_; }
  QInf precision() const { return prec_; }
  bool is_exact() const { return prec_.is_inf(); }
  bool empty() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && prec_.is_inf(); }

  Rat exponent(std::size_t i) const { return Rat(terms_[i].first, e_); }
  QInf valuation() const;
  // valuation if any term is known, otherwise the precision bound
  QInf valuation_lower_bound() const;
  FieldElem lead_coeff() const;
  FieldElem coeff(Rat q) const;
  Rat max_exponent() const;

  PuiseuxSeries truncated(QInf bound) const;
  PuiseuxSeries with_precision(QInf bound) const { return truncated(bound); }

 private:
  void normalize();
  friend PuiseuxSeries build(const FieldTower*, std::int64_t, std::vector<Term>, QInf);

  const FieldTower* tower_ = nullptr;
  std::int64_t e_ = 1;
  std::vector<Term> terms_;
  QInf prec_;
};

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries operator-(const PuiseuxSeries& a);
PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);

// Product truncated at `cap` (never above the guaranteed precision).
PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b, QInf cap = QInf::infinity());
PuiseuxSeries scale(const PuiseuxSeries& a, const FieldElem& c);
// multiply by t^r
PuiseuxSeries shift(const PuiseuxSeries& a, Rat r);
PuiseuxSeries power(const PuiseuxSeries& a, unsigned k, QInf cap = QInf::infinity());

// Inverse of a series of valuation 0. Exact non-constant inputs need a cap.
PuiseuxSeries unit_inverse(const PuiseuxSeries& a, QInf cap = QInf::infinity());
PuiseuxSeries divide(const PuiseuxSeries& a, const PuiseuxSeries& b, QInf cap = QInf::infinity());

// The n-th root whose leading coefficient is `lead` (default: the first root
// of x^n - c in the field module's order).
PuiseuxSeries nth_root(const PuiseuxSeries& s, unsigned n, std::optional<FieldElem> lead = std::nullopt,
                       QInf cap = QInf::infinity());

// g(s) for valuation(s) > 0.
PuiseuxSeries substitute(const PuiseuxSeries& g, const PuiseuxSeries& s, QInf cap = QInf::infinity());

// tau with sigma(tau) = t, for sigma of valuation exactly 1.
PuiseuxSeries functional_inverse(const PuiseuxSeries& sigma, QInf cap = QInf::infinity());

PuiseuxSeries derivative(const PuiseuxSeries& s);

// t^{1/n} -> zeta t^{1/n}; requires e | n and zeta^n = 1.
PuiseuxSeries twist(const PuiseuxSeries& s, std::int64_t n, const FieldElem& zeta);

// a and b agree on every exponent below both precisions
bool agree(const PuiseuxSeries& a, const PuiseuxSeries& b);

std::string to_string(const PuiseuxSeries& s);

}  // namespace cdineq
