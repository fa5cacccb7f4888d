#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nls1d/errors.hpp"
#include "nls1d/nonlinearity.hpp"

namespace nls1d {

// ---------------------------------------------------------------------------
// Closed-form thresholds
// ---------------------------------------------------------------------------

namespace detail {
template <typename Scalar>
void require_ordered(Scalar p, Scalar q, Scalar r) {
  if (!(Scalar(2) < p && p < q && q < r))
    throw InputError("exponents must satisfy 2 < p < q < r");
}
}  // namespace detail

/// Constant d_* such that k(s) = A - B s^{q-p} + C s^{r-p} has inf k >= 0
/// exactly when A >= B^{(r-p)/(r-q)} C^{(p-q)/(r-q)} d_*.
///
/// With rho = (q-p)/(r-p): d_* = rho^{(q-p)/(r-q)} - rho^{(r-p)/(r-q)}, the
/// depth of k at its unique critical point s_0^{r-q} = B(q-p) / (C(r-p)).
template <typename Scalar>
Scalar d_star(Scalar p, Scalar q, Scalar r) {
  detail::require_ordered(p, q, r);
  const Scalar rho = (q - p) / (r - p);
  const Scalar log_rho = std::log(rho);
  // rho^a - rho^b with b = a + 1, written to stay accurate as rho -> 1.
  const Scalar a = (q - p) / (r - q);
  return std::exp(a * log_rho) * (Scalar(1) - rho);
}

/// T = B^{(r-p)/(r-q)} C^{(p-q)/(r-q)} d_*(p, q, r); inf k >= 0 iff A >= T.
template <typename Scalar>
Scalar infimum_sign_threshold(Scalar B, Scalar C, Scalar p, Scalar q, Scalar r) {
  detail::require_ordered(p, q, r);
  if (!(B > Scalar(0)) || !(C > Scalar(0))) throw InputError("B and C must be positive");
  const Scalar log_t = (r - p) / (r - q) * std::log(B) + (p - q) / (r - q) * std::log(C);
  return std::exp(log_t) * d_star(p, q, r);
}

/// M(x, y, z) = y^{z-x} z^{x-y} x^{y-z} on 0 < z <= y <= x.
template <typename Scalar>
Scalar m_function(Scalar x, Scalar y, Scalar z) {
  if (!(Scalar(0) < z && z <= y && y <= x))
    throw InputError("m_function: requires 0 < z <= y <= x");
  const Scalar lx = std::log(x), ly = std::log(y), lz = std::log(z);
  return std::exp((z - x) * ly + (x - y) * lz + (y - z) * lx);
}

/// Seeded samples of M: interior points of 0 < z <= y <= x, and boundary
/// points where two arguments coincide (M = 1 there).
struct LemmaSweep {
  int interior_samples = 0;
  int boundary_samples = 0;
  double max_interior = 0.0;
  double max_boundary_deviation = 0.0;
  double m_321 = 0.0;
};

LemmaSweep lemma_m_sweep(int interior_samples, int boundary_samples, std::uint64_t seed);

/// (+,-,+) family a s^p - b s^q + c s^r: inf G < 0 iff a < T(b, c).
bool plus_minus_plus_attains_negative(double a, double b, double c, double p, double q, double r);

/// (-,+,-) family -a s^p + b s^q - c s^r: L >= 0 on (0, inf).
bool minus_plus_minus_l_nonnegative(double a, double b, double c, double p, double q, double r);

/// (-,+,-) family: V' takes negative values, i.e. V has a local maximum.
bool minus_plus_minus_v_has_local_max(double a, double b, double c, double p, double q, double r);

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

struct Verdict {
  bool holds = false;
  std::optional<double> witness;  ///< G(s0) < 0 for g1, L(s) < 0 for g3
};

/// (0, upper); upper = +inf unless V attains its supremum.
struct OmegaInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool bounded = false;
};

struct ConditionReport {
  Verdict g1;
  Verdict g2b;
  Verdict g3;
  Verdict g4;
  Verdict g5;
  std::vector<double> a_set;  ///< local maxima of V, ascending
  OmegaInterval omega;
  double sup_v = std::numeric_limits<double>::infinity();
  bool v_bounded = false;

  bool all_hold() const { return g1.holds && g2b.holds && g3.holds && g4.holds && g5.holds; }
  /// "G1 fails", ..., or empty when every hypothesis holds.
  std::string first_failure() const;
};

ConditionReport check_conditions(const Nonlinearity& nl);

/// Least s > 0 with V(s) = omega; V'(s) > 0 there.
double r_star(const Nonlinearity& nl, double omega);

// ---------------------------------------------------------------------------
// Sign-pattern classification
// ---------------------------------------------------------------------------

enum class FamilyVerdict { G3AndG5, NotG3AndG5, NotG3AndNotG5, G3ImpliesG5 };

std::string to_string(FamilyVerdict v);

using SignTriple = std::array<int, 3>;

struct ClassificationRow {
  SignTriple signs{};
  std::array<double, 3> exponents{};
  /// sign(6 - exponent) for the entries with non-zero sign.
  std::array<std::optional<int>, 3> regime{};
  int a_count = 0;
  bool omega_bounded = false;
  FamilyVerdict verdict = FamilyVerdict::G3AndG5;
  int draws = 0;  ///< coefficient draws checked numerically
  std::string note;
};

/// Table verdict for a sign pattern and exponents. Coefficient-free patterns
/// are cross-checked against check_conditions on three seeded coefficient
/// draws; (-,+,-) needs coefficients.
ClassificationRow classify_family(const SignTriple& signs, const std::array<double, 3>& exponents,
                                  const std::optional<std::array<double, 3>>& coeffs = std::nullopt,
                                  std::uint64_t seed = 0);

/// Random (-,+,-) draws with r < 6: how often (G3) and (G5) hold, and how
/// often (G3) holds while (G5) fails.
struct ImplicationSweep {
  int draws = 0;
  int g3_holds = 0;
  int g5_fails = 0;
  int counterexamples = 0;
  int closed_form_mismatches = 0;  ///< closed form for L disagreeing with check_conditions
};

ImplicationSweep minus_plus_minus_sweep(int draws, std::uint64_t seed);

/// The fourteen rows of the three-term classification, in table order.
std::vector<ClassificationRow> classification_table(std::uint64_t seed = 0);

}  // namespace nls1d
