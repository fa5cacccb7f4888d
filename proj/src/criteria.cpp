#include "nls1d/criteria.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace nls1d {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A representative interior point of (lo, hi), 0 <= lo < hi <= inf.
double interior_point(double lo, double hi) {
  if (lo <= 0.0 && !std::isfinite(hi)) return 1.0;
  if (lo <= 0.0) return 0.5 * hi;
  if (!std::isfinite(hi)) return 2.0 * lo;
  return std::sqrt(lo * hi);
}

std::string sign_char(int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); }

}  // namespace

LemmaSweep lemma_m_sweep(int interior_samples, int boundary_samples, std::uint64_t seed) {
  if (interior_samples < 0 || boundary_samples < 0) throw InputError("samples must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_arg(std::log(1e-2), std::log(1e2));
  LemmaSweep out;
  out.interior_samples = interior_samples;
  out.boundary_samples = boundary_samples;
  out.max_interior = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < interior_samples; ++i) {
    std::array<double, 3> v{std::exp(log_arg(rng)), std::exp(log_arg(rng)), std::exp(log_arg(rng))};
    std::sort(v.begin(), v.end());
    out.max_interior = std::max(out.max_interior, m_function(v[2], v[1], v[0]));
  }
  for (int i = 0; i < boundary_samples; ++i) {
    double hi = std::exp(log_arg(rng)), lo = std::exp(log_arg(rng));
    if (hi < lo) std::swap(hi, lo);
    const double m = i % 2 == 0 ? m_function(hi, hi, lo) : m_function(hi, lo, lo);
    out.max_boundary_deviation = std::max(out.max_boundary_deviation, std::abs(m - 1.0));
  }
  out.m_321 = m_function(3.0, 2.0, 1.0);
  return out;
}

bool plus_minus_plus_attains_negative(double a, double b, double c, double p, double q, double r) {
  return a < infimum_sign_threshold(b, c, p, q, r);
}

bool minus_plus_minus_l_nonnegative(double a, double b, double c, double p, double q, double r) {
  if (!(r < 6.0)) throw InputError("(-,+,-) threshold on L requires r < 6");
  const double lhs = a * (p - 2.0) * (6.0 - p);
  const double rhs =
      infimum_sign_threshold(b * (q - 2.0) * (6.0 - q), c * (r - 2.0) * (6.0 - r), p, q, r);
  return lhs >= rhs;
}

bool minus_plus_minus_v_has_local_max(double a, double b, double c, double p, double q, double r) {
  return a * (p - 2.0) < infimum_sign_threshold(b * (q - 2.0), c * (r - 2.0), p, q, r);
}

std::string ConditionReport::first_failure() const {
  if (!g1.holds) return "G1 fails";
  if (!g2b.holds) return "G2b fails";
  if (!g4.holds) return "G4 fails";
  if (!g3.holds) return "G3 fails";
  if (!g5.holds) return "G5 fails";
  return {};
}

ConditionReport check_conditions(const Nonlinearity& nl) {
  ConditionReport rep;
  const auto& terms = nl.terms();

  // (G1): closed form, corroborated by the sign intervals of G.
  bool g1_closed = nl.lowest().sign < 0 || nl.highest().sign < 0;
  if (!g1_closed && terms.size() == 3 && terms[0].sign > 0 && terms[1].sign < 0 &&
      terms[2].sign > 0) {
    g1_closed = plus_minus_plus_attains_negative(terms[0].coeff, terms[1].coeff, terms[2].coeff,
                                                 terms[0].exponent, terms[1].exponent,
                                                 terms[2].exponent);
  }
  for (const auto& iv : sign_intervals(nl.g_sum())) {
    if (iv.sign < 0) {
      rep.g1.holds = true;
      rep.g1.witness = interior_point(iv.lo, iv.hi);
      break;
    }
  }
  if (rep.g1.holds != g1_closed) {
    throw ConsistencyError("G1: closed form and sign analysis of G disagree for " + to_inline(nl));
  }

  // (G2b): the highest-order term controls G at infinity.
  rep.g2b.holds = nl.highest().sign > 0 || nl.highest().exponent < 6.0;
  // (G4'): every exponent exceeds 2.
  rep.g4.holds = true;

  // Local maxima of V: sign changes of V' from + to -.
  const auto v = nl.v_sum();
  const auto dv_intervals = sign_intervals(nl.dv_sum());
  for (std::size_t i = 0; i + 1 < dv_intervals.size(); ++i) {
    if (dv_intervals[i].sign > 0 && dv_intervals[i + 1].sign < 0)
      rep.a_set.push_back(dv_intervals[i].hi);
  }
  rep.v_bounded = nl.highest().sign > 0;
  if (rep.v_bounded) {
    rep.sup_v = 0.0;  // limit of V at 0+
    for (double a : rep.a_set) rep.sup_v = std::max(rep.sup_v, v(a));
  }

  const double level_tol = 1e-12 * std::abs(rep.sup_v);
  rep.g5.holds = rep.a_set.empty() ||
                 (rep.v_bounded && v(rep.a_set.front()) >= rep.sup_v - level_tol);

  // Omega = (0, R_*(max V)) when V attains a positive maximum.
  if (rep.v_bounded && rep.sup_v > 0.0) {
    rep.omega.bounded = true;
    for (double a : rep.a_set) {
      if (v(a) >= rep.sup_v - level_tol) {
        rep.omega.upper = a;
        break;
      }
    }
  }

  // (G3): L >= 0 on Omega.
  rep.g3.holds = true;
  const double upper = rep.omega.upper;
  for (const auto& iv : sign_intervals(nl.l_sum())) {
    if (iv.sign >= 0 || iv.lo >= upper * (1.0 - 1e-12)) continue;
    rep.g3.holds = false;
    rep.g3.witness = interior_point(iv.lo, std::min(iv.hi, upper));
    break;
  }
  return rep;
}

double r_star(const Nonlinearity& nl, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw NoCrossingError("r_star: omega must be positive and finite");
  const auto f = nl.v_sum() - PowerSum<double>({{omega, 0.0}});
  const auto roots = sign_changes(f);
  if (roots.empty()) {
    std::ostringstream os;
    os << "r_star: V(s) = " << omega << " has no positive solution (omega >= sup V)";
    throw NoCrossingError(os.str());
  }
  const double s = roots.front();
  if (!(nl.dv_sum()(s) > 0.0)) throw NoCrossingError("r_star: V' vanishes at the first crossing");
  return s;
}

std::string to_string(FamilyVerdict v) {
  switch (v) {
    case FamilyVerdict::G3AndG5:
      return "G3&G5";
    case FamilyVerdict::NotG3AndG5:
      return "!G3&G5";
    case FamilyVerdict::NotG3AndNotG5:
      return "!G3&!G5";
    case FamilyVerdict::G3ImpliesG5:
      return "G3=>G5";
  }
  return "?";
}

namespace {

struct ActiveTerm {
  int sign;
  double exponent;
  double coeff;
};

FamilyVerdict numeric_verdict(const ConditionReport& rep) {
  if (rep.g3.holds && rep.g5.holds) return FamilyVerdict::G3AndG5;
  if (!rep.g3.holds && rep.g5.holds) return FamilyVerdict::NotG3AndG5;
  if (!rep.g3.holds) return FamilyVerdict::NotG3AndNotG5;
  // (G3) without (G5) never appears in the table.
  return FamilyVerdict::G3ImpliesG5;
}

Nonlinearity build(const std::vector<ActiveTerm>& active) {
  std::vector<PowerTerm> terms;
  for (const auto& t : active) terms.push_back({t.sign, t.coeff, t.exponent});
  return Nonlinearity(std::move(terms));
}

// Verdict from signs and exponents alone (plus coefficients for (-,+,-)).
FamilyVerdict analytic_verdict(const std::string& pattern, const std::vector<ActiveTerm>& t,
                               bool have_coeffs) {
  if (pattern == "-" || pattern == "--" || pattern == "---" || pattern == "-+")
    return FamilyVerdict::G3AndG5;
  if (pattern == "+-" || pattern == "+-+" || pattern == "++-" || pattern == "+--")
    return FamilyVerdict::NotG3AndG5;
  if (pattern == "-++")
    return t[0].exponent <= 6.0 ? FamilyVerdict::G3AndG5 : FamilyVerdict::NotG3AndG5;
  if (pattern == "--+")
    return t[0].exponent < 6.0 ? FamilyVerdict::G3AndG5 : FamilyVerdict::NotG3AndG5;
  if (pattern == "-+-") {
    if (!have_coeffs) throw InputError("classify: the (-,+,-) pattern requires coefficients");
    const double a = t[0].coeff, b = t[1].coeff, c = t[2].coeff;
    const double p = t[0].exponent, q = t[1].exponent, r = t[2].exponent;
    if (minus_plus_minus_l_nonnegative(a, b, c, p, q, r)) return FamilyVerdict::G3AndG5;
    return minus_plus_minus_v_has_local_max(a, b, c, p, q, r) ? FamilyVerdict::NotG3AndNotG5
                                                              : FamilyVerdict::NotG3AndG5;
  }
  throw InputError("classify: unsupported sign pattern " + pattern);
}

}  // namespace

ClassificationRow classify_family(const SignTriple& signs, const std::array<double, 3>& exponents,
                                  const std::optional<std::array<double, 3>>& coeffs,
                                  std::uint64_t seed) {
  ClassificationRow row;
  row.signs = signs;
  row.exponents = exponents;

  std::vector<ActiveTerm> active;
  std::string pattern;
  for (int i = 0; i < 3; ++i) {
    if (signs[i] < -1 || signs[i] > 1) throw InputError("classify: signs must be -1, 0 or +1");
    if (signs[i] == 0) continue;
    if (!(exponents[i] > 2.0)) throw InputError("classify: exponent must exceed 2");
    if (!active.empty() && !(exponents[i] > active.back().exponent))
      throw InputError("classify: exponents must be strictly increasing");
    const double coeff = coeffs ? (*coeffs)[i] : 1.0;
    if (!(coeff > 0.0)) throw InputError("classify: coefficients must be positive");
    active.push_back({signs[i], exponents[i], coeff});
    pattern += sign_char(signs[i]);
    row.regime[i] = (6.0 - exponents[i] > 0.0) - (6.0 - exponents[i] < 0.0);
  }
  if (pattern.find('-') == std::string::npos)
    throw InputError("classify: (G1) fails, no term has a negative sign");
  if (active.back().sign < 0 && active.back().exponent >= 6.0)
    throw InputError("classify: (G2b) fails, the highest-order term is negative with exponent >= 6");
  if (pattern == "+-+" && coeffs &&
      !plus_minus_plus_attains_negative(active[0].coeff, active[1].coeff, active[2].coeff,
                                        active[0].exponent, active[1].exponent,
                                        active[2].exponent))
    throw InputError("classify: (G1) fails, a >= b^((r-p)/(r-q)) c^((p-q)/(r-q)) d_*");

  row.verdict = analytic_verdict(pattern, active, coeffs.has_value());

  // Numerical corroboration on the supplied coefficients or on seeded draws.
  std::vector<std::vector<ActiveTerm>> samples;
  if (coeffs) {
    samples.push_back(active);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_coeff(std::log(0.5), std::log(2.0));
    std::uniform_real_distribution<double> fraction(0.2, 0.8);
    for (int d = 0; d < 3; ++d) {
      auto draw = active;
      for (auto& t : draw) t.coeff = std::exp(log_coeff(rng));
      if (pattern == "+-+") {
        draw[0].coeff = fraction(rng) * infimum_sign_threshold(draw[1].coeff, draw[2].coeff,
                                                               draw[0].exponent, draw[1].exponent,
                                                               draw[2].exponent);
      }
      samples.push_back(std::move(draw));
    }
  }

  for (std::size_t d = 0; d < samples.size(); ++d) {
    const auto nl = build(samples[d]);
    const auto rep = check_conditions(nl);
    const int a_count = static_cast<int>(rep.a_set.size());
    if (numeric_verdict(rep) != row.verdict) {
      throw ConsistencyError("classify: numerical check of " + to_inline(nl) + " gives " +
                             to_string(numeric_verdict(rep)) + ", table gives " +
                             to_string(row.verdict));
    }
    if (d == 0) {
      row.a_count = a_count;
      row.omega_bounded = rep.omega.bounded;
    } else if (a_count != row.a_count || rep.omega.bounded != row.omega_bounded) {
      throw ConsistencyError("classify: #A or Omega depends on the coefficients for pattern " +
                             pattern);
    }
  }
  row.draws = static_cast<int>(samples.size());
  row.note = "draws=" + std::to_string(row.draws);
  return row;
}

ImplicationSweep minus_plus_minus_sweep(int draws, std::uint64_t seed) {
  ImplicationSweep out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(2.05, 5.95);
  std::uniform_real_distribution<double> log_coeff(std::log(0.01), std::log(100.0));
  while (out.draws < draws) {
    std::array<double, 3> e{exponent(rng), exponent(rng), exponent(rng)};
    std::sort(e.begin(), e.end());
    if (e[1] - e[0] < 0.05 || e[2] - e[1] < 0.05) continue;
    const double a = std::exp(log_coeff(rng)), b = std::exp(log_coeff(rng)),
                 c = std::exp(log_coeff(rng));
    const Nonlinearity nl({{-1, a, e[0]}, {1, b, e[1]}, {-1, c, e[2]}});
    const auto rep = check_conditions(nl);
    ++out.draws;
    if (rep.g3.holds) ++out.g3_holds;
    if (!rep.g5.holds) ++out.g5_fails;
    if (rep.g3.holds && !rep.g5.holds) ++out.counterexamples;
    if (rep.g3.holds != minus_plus_minus_l_nonnegative(a, b, c, e[0], e[1], e[2]))
      ++out.closed_form_mismatches;
  }
  return out;
}

std::vector<ClassificationRow> classification_table(std::uint64_t seed) {
  struct RowSample {
    SignTriple signs;
    std::array<double, 3> exponents;
  };
  // One sampled exponent triple per table regime.
  const std::vector<RowSample> samples = {
      {{-1, 0, 0}, {4.0, 5.0, 7.0}},  {{-1, 1, 0}, {3.0, 5.0, 7.0}},
      {{1, -1, 0}, {3.0, 4.0, 7.0}},  {{-1, -1, 0}, {3.0, 4.0, 7.0}},
      {{1, 1, -1}, {3.0, 4.0, 5.0}},  {{1, -1, 1}, {3.0, 4.0, 5.0}},
      {{1, -1, -1}, {3.0, 4.0, 5.0}}, {{-1, 1, 1}, {4.0, 7.0, 8.0}},
      {{-1, 1, 1}, {6.0, 7.0, 8.0}},  {{-1, 1, 1}, {7.0, 8.0, 9.0}},
      {{-1, 1, -1}, {3.0, 4.0, 5.0}}, {{-1, -1, 1}, {7.0, 8.0, 9.0}},
      {{-1, -1, 1}, {6.0, 7.0, 8.0}}, {{-1, -1, 1}, {4.0, 5.0, 7.0}},
  };

  std::vector<ClassificationRow> rows;
  std::uint64_t row_seed = seed;
  for (const auto& sample : samples) {
    ++row_seed;
    if (sample.signs != SignTriple{-1, 1, -1}) {
      rows.push_back(classify_family(sample.signs, sample.exponents, std::nullopt, row_seed));
      continue;
    }
    // Coefficient-dependent row: both outcomes plus the implication sweep.
    const auto [p, q, r] = sample.exponents;
    const double b = 1.0, c = 1.0;
    const double a_crit =
        infimum_sign_threshold(b * (q - 2.0) * (6.0 - q), c * (r - 2.0) * (6.0 - r), p, q, r) /
        ((p - 2.0) * (6.0 - p));
    const auto large = classify_family(sample.signs, sample.exponents,
                                       std::array<double, 3>{4.0 * a_crit, b, c}, row_seed);
    const auto small = classify_family(sample.signs, sample.exponents,
                                       std::array<double, 3>{0.25 * a_crit, b, c}, row_seed);
    const auto sweep = minus_plus_minus_sweep(1000, row_seed);
    if (sweep.counterexamples != 0)
      throw ConsistencyError("classify: (-,+,-) draw with (G3) but not (G5)");
    ClassificationRow row = large;
    row.verdict = FamilyVerdict::G3ImpliesG5;
    row.draws = 2 + sweep.draws;
    row.note = "large-a:" + to_string(large.verdict) + ";small-a:" + to_string(small.verdict) +
               ";draws=" + std::to_string(sweep.draws) +
               ";g3=" + std::to_string(sweep.g3_holds) +
               ";counterexamples=" + std::to_string(sweep.counterexamples);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nls1d
