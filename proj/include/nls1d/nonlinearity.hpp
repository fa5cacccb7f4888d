#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "nls1d/errors.hpp"
#include "nls1d/power_sum.hpp"

namespace nls1d {

/// One signed power term sign * coeff * s^exponent.
template <typename Scalar>
struct BasicPowerTerm {
  int sign = -1;
  Scalar coeff = Scalar(1);
  Scalar exponent = Scalar(4);

  friend bool operator==(const BasicPowerTerm&, const BasicPowerTerm&) = default;
};

/// Scalar functions of the nonlinearity at one point s > 0.
template <typename Scalar>
struct BasicDerivedValues {
  Scalar g;    ///< G(s)
  Scalar dg;   ///< G'(s)
  Scalar d2g;  ///< G''(s)
  Scalar v;    ///< V(s) = -2 G(s) / s^2
  Scalar dv;   ///< V'(s)
  Scalar l;    ///< L(s) = 12 G - 7 s G' + s^2 G''
  Scalar k;    ///< K(s) = (-6 G + s G') / s^2
};

/// G(s) = sum_i sign_i coeff_i s^{exponent_i} with 1 to 3 terms, exponents
/// strictly increasing and larger than 2.
template <typename Scalar>
class BasicNonlinearity {
 public:
  using Term = BasicPowerTerm<Scalar>;

  /// Validates, drops sign-0 terms and sorts by exponent.
  explicit BasicNonlinearity(std::vector<Term> terms) {
    if (terms.empty()) throw InputError("terms: the term list is empty");
    if (terms.size() > 3) throw InputError("terms: at most three terms are supported");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& t = terms[i];
      const std::string where = "terms[" + std::to_string(i) + "].";
      if (t.sign < -1 || t.sign > 1) throw InputError(where + "sign must be -1, 0 or +1");
      if (!(t.coeff > Scalar(0)) || !std::isfinite(static_cast<double>(t.coeff)))
        throw InputError(where + "coeff must be positive");
      if (!(t.exponent > Scalar(2)) || !std::isfinite(static_cast<double>(t.exponent)))
        throw InputError(where + "exponent must exceed 2");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (terms[i].exponent == terms[i - 1].exponent)
        throw InputError("terms: duplicate exponent " +
                         std::to_string(static_cast<double>(terms[i].exponent)));
    }
    std::erase_if(terms, [](const Term& t) { return t.sign == 0; });
    if (terms.empty()) throw InputError("terms: every term has sign 0");
    terms_ = std::move(terms);
  }

  const std::vector<Term>& terms() const { return terms_; }
  const Term& lowest() const { return terms_.front(); }
  const Term& highest() const { return terms_.back(); }

  // G and its derivatives accept s >= 0 (all exponents exceed 2, so they
  // vanish at 0).
  Scalar g(Scalar s) const { return sum(s, 0); }
  Scalar dg(Scalar s) const { return sum(s, 1); }
  Scalar d2g(Scalar s) const { return sum(s, 2); }

  /// sum_i sign_i coeff_i * factor(e_i) * s^{e_i + shift}
  template <typename Factor>
  PowerSum<Scalar> power_sum(Factor factor, Scalar shift = Scalar(0)) const {
    std::vector<Monomial<Scalar>> out;
    for (const auto& t : terms_)
      out.push_back({t.sign * t.coeff * factor(t.exponent), t.exponent + shift});
    return PowerSum<Scalar>(std::move(out));
  }

  PowerSum<Scalar> g_sum() const {
    return power_sum([](Scalar) { return Scalar(1); });
  }
  PowerSum<Scalar> v_sum() const {
    return power_sum([](Scalar) { return Scalar(-2); }, Scalar(-2));
  }
  PowerSum<Scalar> dv_sum() const {
    return power_sum([](Scalar e) { return Scalar(-2) * (e - Scalar(2)); }, Scalar(-3));
  }
  /// L(s) = sum_i sign_i coeff_i (e_i - 2)(e_i - 6) s^{e_i}
  PowerSum<Scalar> l_sum() const {
    return power_sum([](Scalar e) { return (e - Scalar(2)) * (e - Scalar(6)); });
  }
  PowerSum<Scalar> k_sum() const {
    return power_sum([](Scalar e) { return e - Scalar(6); }, Scalar(-2));
  }

  friend bool operator==(const BasicNonlinearity&, const BasicNonlinearity&) = default;

 private:
  Scalar sum(Scalar s, int order) const {
    if (s < Scalar(0)) throw DomainError("G is defined for s >= 0");
    Scalar total(0);
    if (s == Scalar(0)) return total;
    for (const auto& t : terms_) {
      Scalar factor(1);
      for (int j = 0; j < order; ++j) factor *= t.exponent - Scalar(j);
      total += t.sign * t.coeff * factor * std::exp((t.exponent - Scalar(order)) * std::log(s));
    }
    return total;
  }

  std::vector<Term> terms_;
};

/// Direct evaluation of G, its derivatives and the auxiliary functions V, L, K
/// from their definitions.
template <typename Scalar>
BasicDerivedValues<Scalar> evaluate(const BasicNonlinearity<Scalar>& nl, Scalar s) {
  if (!(s > Scalar(0))) throw DomainError("evaluate: s must be positive");
  BasicDerivedValues<Scalar> out{};
  out.g = nl.g(s);
  out.dg = nl.dg(s);
  out.d2g = nl.d2g(s);
  const Scalar s2 = s * s;
  out.v = Scalar(-2) * out.g / s2;
  out.dv = Scalar(-2) * (s * out.dg - Scalar(2) * out.g) / (s2 * s);
  out.l = Scalar(12) * out.g - Scalar(7) * s * out.dg + s2 * out.d2g;
  out.k = (Scalar(-6) * out.g + s * out.dg) / s2;
  return out;
}

using PowerTerm = BasicPowerTerm<double>;
using Nonlinearity = BasicNonlinearity<double>;
using DerivedValues = BasicDerivedValues<double>;

/// Parses either the JSON form {"terms":[{"sign":-1,"coeff":1.0,"exponent":4.0}]}
/// or the inline form "sign*coeff*exponent,..." (e.g. "-1*1*4,+1*1*6").
Nonlinearity parse_nonlinearity(std::string_view text);
Nonlinearity parse_inline_terms(std::string_view text);
Nonlinearity parse_json_terms(std::string_view text);

/// Inline form that re-parses to an equal Nonlinearity (17 significant digits).
std::string to_inline(const Nonlinearity& nl);
std::string to_json(const Nonlinearity& nl);

}  // namespace nls1d
