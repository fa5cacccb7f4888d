#pragma once

// Generalized polynomials f(s) = sum_i c_i s^{e_i} on s > 0 with real
// exponents, and exact isolation of their sign changes.
//
// Root isolation recurses on the derivative of f(s) / s^{e_0}: between two
// consecutive sign changes of that derivative the quotient is monotone, so
// each piece holds at most one root and plain bisection in log(s) finds it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "nls1d/errors.hpp"

namespace nls1d {

template <typename Scalar>
struct Monomial {
  Scalar coeff;
  Scalar exponent;
};

template <typename Scalar>
class PowerSum {
 public:
  PowerSum() = default;

  explicit PowerSum(std::vector<Monomial<Scalar>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.exponent < b.exponent; });
    for (const auto& t : terms) {
      if (!terms_.empty() && terms_.back().exponent == t.exponent) {
        terms_.back().coeff += t.coeff;
      } else {
        terms_.push_back(t);
      }
    }
    std::erase_if(terms_, [](const auto& t) { return t.coeff == Scalar(0); });
  }

  const std::vector<Monomial<Scalar>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Value at s >= 0; at s = 0 only non-negative exponents are meaningful.
  Scalar operator()(Scalar s) const {
    Scalar sum(0);
    if (s == Scalar(0)) {
      for (const auto& t : terms_) {
        if (t.exponent == Scalar(0)) sum += t.coeff;
      }
      return sum;
    }
    for (const auto& t : terms_) sum += t.coeff * std::pow(s, t.exponent);
    return sum;
  }

  /// sum_i |c_i| s^{e_i}; the natural scale for relative tolerances.
  Scalar magnitude(Scalar s) const {
    Scalar sum(0);
    for (const auto& t : terms_) sum += std::abs(t.coeff) * std::pow(s, t.exponent);
    return sum;
  }

  PowerSum derivative() const {
    std::vector<Monomial<Scalar>> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.coeff * t.exponent, t.exponent - Scalar(1)});
    return PowerSum(std::move(out));
  }

  /// s^k * f(s)
  PowerSum times_power(Scalar k) const {
    auto out = terms_;
    for (auto& t : out) t.exponent += k;
    return PowerSum(std::move(out));
  }

  PowerSum operator+(const PowerSum& other) const {
    auto out = terms_;
    out.insert(out.end(), other.terms_.begin(), other.terms_.end());
    return PowerSum(std::move(out));
  }

  PowerSum operator*(Scalar factor) const {
    auto out = terms_;
    for (auto& t : out) t.coeff *= factor;
    return PowerSum(std::move(out));
  }

  PowerSum operator-() const { return *this * Scalar(-1); }
  PowerSum operator-(const PowerSum& other) const { return *this + (-other); }

  /// Sign of the lowest-order term, i.e. of f on a neighbourhood of 0+.
  int sign_near_zero() const { return terms_.empty() ? 0 : sgn(terms_.front().coeff); }
  /// Sign of the highest-order term, i.e. of f for s large.
  int sign_at_infinity() const { return terms_.empty() ? 0 : sgn(terms_.back().coeff); }

  static int sgn(Scalar v) { return (v > Scalar(0)) - (v < Scalar(0)); }

 private:
  std::vector<Monomial<Scalar>> terms_;
};

namespace detail {

// f(e^y) / e^{e_0 y} rescaled by its largest term; returns {value, magnitude}
// of the rescaled sum, so the sign is reliable even where terms overflow.
template <typename Scalar>
std::pair<Scalar, Scalar> scaled_quotient(const PowerSum<Scalar>& f, Scalar y) {
  const auto& terms = f.terms();
  const Scalar e0 = terms.front().exponent;
  Scalar top = -std::numeric_limits<Scalar>::infinity();
  for (const auto& t : terms) top = std::max(top, (t.exponent - e0) * y);
  Scalar value(0), mag(0);
  for (const auto& t : terms) {
    const Scalar w = std::exp((t.exponent - e0) * y - top);
    value += t.coeff * w;
    mag += std::abs(t.coeff) * w;
  }
  return {value, mag};
}

template <typename Scalar>
int sign_with_tolerance(const PowerSum<Scalar>& f, Scalar y, Scalar rel_tol) {
  auto [value, mag] = scaled_quotient(f, y);
  if (std::abs(value) <= rel_tol * mag) return 0;
  return value > Scalar(0) ? 1 : -1;
}

template <typename Scalar>
Scalar bisect_log(const PowerSum<Scalar>& f, Scalar lo, Scalar hi, int sign_lo) {
  for (int it = 0; it < 400; ++it) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (mid == lo || mid == hi) break;
    const Scalar v = scaled_quotient(f, mid).first;
    if (PowerSum<Scalar>::sgn(v) == sign_lo) {
      lo = mid;
    } else if (v == Scalar(0)) {
      return mid;
    } else {
      hi = mid;
    }
  }
  return Scalar(0.5) * (lo + hi);
}

// Walks y away from `start` in direction `dir` until the exact sign of the
// quotient equals `target`.
template <typename Scalar>
Scalar expand_until(const PowerSum<Scalar>& f, Scalar start, int dir, int target) {
  Scalar step(1);
  Scalar y = start;
  for (int it = 0; it < 2000; ++it) {
    y = start + dir * step;
    if (PowerSum<Scalar>::sgn(scaled_quotient(f, y).first) == target) return y;
    step *= Scalar(2);
    if (!std::isfinite(y)) break;
  }
  throw ConvergenceError("root bracket expansion failed starting at log(s) = " +
                         std::to_string(static_cast<double>(start)));
}

// Sign changes of f on (0, inf), as log(s), ascending.
template <typename Scalar>
std::vector<Scalar> sign_change_logs(const PowerSum<Scalar>& f, Scalar rel_tol) {
  if (f.size() < 2) return {};
  const Scalar e0 = f.terms().front().exponent;
  std::vector<Monomial<Scalar>> dterms;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const Scalar d = f.terms()[i].exponent - e0;
    dterms.push_back({f.terms()[i].coeff * d, d - Scalar(1)});
  }
  const std::vector<Scalar> crit = sign_change_logs(PowerSum<Scalar>(std::move(dterms)), rel_tol);

  // Breakpoints: 0+, the extrema of the quotient, +inf.
  std::vector<int> signs;
  signs.push_back(f.sign_near_zero());
  for (Scalar c : crit) signs.push_back(sign_with_tolerance(f, c, rel_tol));
  signs.push_back(f.sign_at_infinity());

  std::vector<Scalar> roots;
  const std::size_t pieces = crit.size() + 1;
  for (std::size_t k = 0; k < pieces; ++k) {
    const int s_lo = signs[k];
    const int s_hi = signs[k + 1];
    if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) continue;
    Scalar lo, hi;
    if (k == 0 && k + 1 == pieces) {
      lo = expand_until(f, Scalar(0), -1, s_lo);
      hi = expand_until(f, Scalar(0), +1, s_hi);
    } else if (k == 0) {
      hi = crit[0];
      lo = expand_until(f, hi, -1, s_lo);
    } else if (k + 1 == pieces) {
      lo = crit[k - 1];
      hi = expand_until(f, lo, +1, s_hi);
    } else {
      lo = crit[k - 1];
      hi = crit[k];
    }
    roots.push_back(bisect_log(f, lo, hi, s_lo));
  }
  return roots;
}

}  // namespace detail

/// Default relative tolerance under which an extremum touching zero counts
/// as a tangency rather than a sign change.
template <typename Scalar>
constexpr Scalar tangency_tolerance() {
  return Scalar(1e-12);
}

/// Points s > 0 where f changes sign, ascending.
template <typename Scalar>
std::vector<Scalar> sign_changes(const PowerSum<Scalar>& f,
                                 Scalar rel_tol = tangency_tolerance<Scalar>()) {
  auto logs = detail::sign_change_logs(f, rel_tol);
  for (auto& y : logs) y = std::exp(y);
  return logs;
}

/// Maximal open interval (lo, hi) on which f has the constant sign `sign`.
template <typename Scalar>
struct SignInterval {
  Scalar lo;
  Scalar hi;
  int sign;
};

/// Partition of (0, inf) into intervals of constant sign of f.
template <typename Scalar>
std::vector<SignInterval<Scalar>> sign_intervals(const PowerSum<Scalar>& f,
                                                 Scalar rel_tol = tangency_tolerance<Scalar>()) {
  std::vector<SignInterval<Scalar>> out;
  Scalar lo(0);
  int sign = f.sign_near_zero();
  for (Scalar root : sign_changes(f, rel_tol)) {
    out.push_back({lo, root, sign});
    lo = root;
    sign = -sign;
  }
  out.push_back({lo, std::numeric_limits<Scalar>::infinity(), sign});
  return out;
}

}  // namespace nls1d
