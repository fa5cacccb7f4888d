#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nls1d/nonlinearity.hpp"

namespace nls1d {

/// Values at the n uniform nodes of [-X, X]; n odd so that x = 0 is a node.
class GridFunction {
 public:
  GridFunction(double half_width, Eigen::VectorXd values);

  static GridFunction zeros(double half_width, int n);

  template <typename F>
  static GridFunction sample(double half_width, int n, F f) {
    GridFunction g = zeros(half_width, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.values_[i] = f(g.x(i));
    g.validate();
    return g;
  }

  double half_width() const { return half_width_; }
  Eigen::Index size() const { return values_.size(); }
  Eigen::Index center() const { return values_.size() / 2; }
  double spacing() const { return 2.0 * half_width_ / static_cast<double>(values_.size() - 1); }
  double x(Eigen::Index i) const { return -half_width_ + spacing() * static_cast<double>(i); }
  bool same_grid(const GridFunction& other) const {
    return size() == other.size() && half_width_ == other.half_width_;
  }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

 private:
  void validate() const;

  double half_width_;
  Eigen::VectorXd values_;
};

/// Trapezoidal integral of u^2.
double grid_mass(const GridFunction& u);

/// Trapezoidal integral of (1/2) u'^2 + G(|u|) with central differences
/// (one-sided at the two ends).
double grid_energy(const GridFunction& u, const Nonlinearity& nl);

/// The ODE-branch profile R_omega sampled on the grid.
GridFunction sample_branch(const Nonlinearity& nl, double omega, double half_width, int n);

/// Solution of the three-point discretization of the profile equation at
/// fixed omega, Newton-refined from sample_branch on even grid functions.
GridFunction discrete_branch(const Nonlinearity& nl, double omega, double half_width, int n);

enum class InitialGuess { gaussian_bump, supplied };

struct MinimizerOptions {
  double half_width = 20.0;
  int n = 2001;
  InitialGuess init = InitialGuess::gaussian_bump;
  std::optional<GridFunction> supplied;
  double tol = 1e-8;
  int max_iterations = 20000;
};

struct MinimizerResult {
  GridFunction u;  ///< centred, non-negative
  double lambda_target = 0.0;
  double omega_estimate = 0.0;
  double energy = 0.0;             ///< grid_energy of u
  double gradient_residual = 0.0;  ///< ||E'(u) + omega u|| / ||u||
  int iterations = 0;
  /// Discrete energy after each accepted step; non-increasing.
  std::vector<double> energy_history;
  std::vector<std::string> warnings;
};

/// Minimizes the discrete energy on {grid_mass(u) = lambda}: tangential
/// gradient steps preconditioned by (omega - d^2/dx^2), renormalized onto the
/// sphere after every step, with tau adapted so the energy never increases.
MinimizerResult minimize_on_sphere(const Nonlinearity& nl, double lambda,
                                   const MinimizerOptions& opts = {});

/// xi(v) = int v'^2 + (G''(R0) + omega0) v^2 with forward differences, i.e.
/// <v, L+ v> for the discrete operator of hessian_spectrum.
double quadratic_form_xi(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                         const GridFunction& v);

/// -v'' + G''(R0) v + omega0 v on the interior nodes (zero at both ends).
Eigen::VectorXd apply_lplus(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                            const Eigen::VectorXd& v);

struct SpectralOptions {
  double tol = 1e-12;
  int max_iterations = 200000;
};

struct SpectralReport {
  double eig_min_unrestricted = 0.0;
  /// Smallest eigenvalue on even functions orthogonal to R0.
  double eig_min_orthogonal = 0.0;
  double zero_mode_residual = 0.0;  ///< ||L+ D R0|| / ||D R0||
  double lplus_s0_residual = 0.0;   ///< ||L+ S0 + R0|| / ||R0||
  double lplus_s0_pairing = 0.0;    ///< (L+ S0, R0)_2 = -lambda
  double s0_pairing = 0.0;          ///< (S0, R0)_2 = lambda'(omega) / 2
  double omega_step = 0.0;          ///< step used for S0 = dR/domega
  int iterations_unrestricted = 0;
  int iterations_orthogonal = 0;
};

/// Discretized linearization L+ = -d^2/dx^2 + G''(R0) + omega0 with zero
/// boundary values, analysed by shifted inverse iteration.
SpectralReport hessian_spectrum(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                                const SpectralOptions& opts = {});

}  // namespace nls1d
