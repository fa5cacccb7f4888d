#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nls1d/criteria.hpp"
#include "nls1d/nonlinearity.hpp"

namespace nls1d {

/// Open frequency interval (lower, upper) on which the profile branch exists.
struct FrequencyInterval {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool bounded = false;

  bool contains(double omega) const { return omega > lower && omega < upper; }
};

/// (0, sup V); throws BranchError when (G1) fails.
FrequencyInterval admissible_frequencies(const Nonlinearity& nl);

enum class ProfileMethod { quadrature, shooting };

struct ProfileOptions {
  ProfileMethod method = ProfileMethod::quadrature;
  double dx = 0.0;            ///< target node spacing; 0 selects 0.02 / sqrt(omega)
  double tail_ratio = 1e-12;  ///< quadrature: last node where R = tail_ratio * R_*
  double x_max = 0.0;         ///< shooting: 0 selects 50 / sqrt(omega)
  double stop_ratio = 1e-8;   ///< shooting: stop once R < stop_ratio * R_*
  double ode_tol = 1e-13;     ///< shooting: relative tolerance of the integrator
};

/// Ground-state profile on the half-line x >= 0 (the profile is even).
struct ProfileSolution {
  double omega = 0.0;
  double r_star = 0.0;
  Eigen::VectorXd xs;   ///< increasing, xs[0] = 0
  Eigen::VectorXd rs;   ///< R(xs), strictly decreasing
  Eigen::VectorXd drs;  ///< R'(xs)
  Eigen::VectorXd d2rs; ///< R''(xs) from the equation
  double mass = 0.0;    ///< ||R||_2^2 over the whole line
  double energy = 0.0;  ///< E(R) over the whole line
  /// max over nodes of |R'^2 - (omega R^2 + 2 G(R))|
  double residual_first_integral = 0.0;
};

/// Solves R'' = G'(R) + omega R, R(0) = R_*(omega), R'(0) = 0.
ProfileSolution solve_profile(const Nonlinearity& nl, double omega, const ProfileOptions& opts = {});

/// lambda(omega) = ||R_omega||_2^2 by quadrature of the first integral.
double mass_of(const Nonlinearity& nl, double omega);
/// E(R_omega) by quadrature of the first integral.
double energy_of(const Nonlinearity& nl, double omega);

/// Central difference (lambda(omega + h) - lambda(omega - h)) / (2h).
double vk_slope(const Nonlinearity& nl, double omega, double h);

/// R(|x|): quintic Hermite between nodes, exponential decay past the last node.
double sample_profile(const ProfileSolution& sol, double x);

/// Mass and energy of the gridded profile (end-corrected trapezoid plus the
/// exponential tail); an independent check on mass_of / energy_of.
struct GridIntegrals {
  double mass = 0.0;
  double energy = 0.0;
};
GridIntegrals profile_grid_integrals(const Nonlinearity& nl, const ProfileSolution& sol);

struct LambdaCurve {
  Eigen::VectorXd omegas;
  Eigen::VectorXd r_stars;
  Eigen::VectorXd lambdas;
  Eigen::VectorXd energies;
  Eigen::VectorXd slopes;  ///< d lambda / d omega, central differences
  bool monotone = false;
  std::optional<int> first_violation;
};

/// Samples the branch on n_points uniformly spaced frequencies. Without a
/// range the grid spans the admissible interval minus 1% at 0 and 2% at a
/// finite supremum; an unbounded interval is capped at omega = 2.
LambdaCurve lambda_curve(const Nonlinearity& nl, int n_points,
                         std::optional<std::pair<double, double>> range = std::nullopt);

enum class Certification { CertifiedUnique, Inconclusive };

std::string to_string(Certification c);

struct UniquenessCertificate {
  std::string nonlinearity;  ///< inline term spec
  double omega_lower = 0.0;
  double omega_upper = 0.0;
  Certification verdict = Certification::Inconclusive;
  std::string reason;  ///< empty when certified
  double min_slope = 0.0;
  double max_lambda = 0.0;
  int n_points = 0;
};

UniquenessCertificate uniqueness_certificate(const Nonlinearity& nl, int n_points = 33);

}  // namespace nls1d
