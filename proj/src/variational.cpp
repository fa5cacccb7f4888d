#include "nls1d/variational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nls1d/profile.hpp"

namespace nls1d {
namespace {

// Symmetric tridiagonal matrix with constant off-diagonal, factored as L D L^T.
// Only used on diagonally dominant shifts, so no pivoting.
class Tridiagonal {
 public:
  Tridiagonal(Eigen::VectorXd diag, double off) : diag_(std::move(diag)), off_(off) {
    const auto m = diag_.size();
    d_.resize(m);
    l_.resize(m);
    d_[0] = diag_[0];
    l_[0] = 0.0;
    for (Eigen::Index i = 1; i < m; ++i) {
      l_[i] = off_ / d_[i - 1];
      d_[i] = diag_[i] - l_[i] * off_;
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const auto m = b.size();
    Eigen::VectorXd x(m);
    x[0] = b[0];
    for (Eigen::Index i = 1; i < m; ++i) x[i] = b[i] - l_[i] * x[i - 1];
    x.array() /= d_.array();
    for (Eigen::Index i = m - 2; i >= 0; --i) x[i] -= l_[i + 1] * x[i + 1];
    return x;
  }

 private:
  Eigen::VectorXd diag_;
  double off_;
  Eigen::VectorXd d_;
  Eigen::VectorXd l_;
};

// y_i = diag_i v_i + off (v_{i-1} + v_{i+1}), zero outside.
Eigen::VectorXd apply_tridiagonal(const Eigen::VectorXd& diag, double off,
                                  const Eigen::VectorXd& v) {
  const auto m = v.size();
  Eigen::VectorXd y = diag.cwiseProduct(v);
  y.head(m - 1) += off * v.tail(m - 1);
  y.tail(m - 1) += off * v.head(m - 1);
  return y;
}

Eigen::VectorXd interior(const GridFunction& g) { return g.values().segment(1, g.size() - 2); }

Eigen::VectorXd lplus_diagonal(const Nonlinearity& nl, const GridFunction& r0, double omega0) {
  const double h = r0.spacing();
  const Eigen::VectorXd inner = interior(r0);
  Eigen::VectorXd diag(inner.size());
  for (Eigen::Index i = 0; i < inner.size(); ++i)
    diag[i] = 2.0 / (h * h) + nl.d2g(std::abs(inner[i])) + omega0;
  return diag;
}

// Solves T v = b for even v, folding the symmetric tridiagonal T onto the
// half grid ending at the centre node. Free of the odd translation mode.
Eigen::VectorXd solve_even(const Eigen::VectorXd& diag, double off, const Eigen::VectorXd& b) {
  const Eigen::Index c = (b.size() - 1) / 2;
  Eigen::VectorXd sup(c + 1), dd(c + 1), y(c + 1);
  dd[0] = diag[0];
  y[0] = b[0];
  for (Eigen::Index k = 1; k <= c; ++k) {
    const double sub = k == c ? 2.0 * off : off;
    const double f = sub / dd[k - 1];
    dd[k] = diag[k] - f * off;
    y[k] = b[k] - f * y[k - 1];
  }
  Eigen::VectorXd v(b.size());
  v[c] = y[c] / dd[c];
  for (Eigen::Index k = c - 1; k >= 0; --k) v[k] = (y[k] - off * v[k + 1]) / dd[k];
  for (Eigen::Index k = 0; k < c; ++k) v[b.size() - 1 - k] = v[k];
  return v;
}

void symmetrize(Eigen::VectorXd& v) { v = 0.5 * (v + v.reverse()).eval(); }

// Discrete energy whose gradient is the three-point Laplacian; drives the flow.
double flow_energy(const Nonlinearity& nl, const Eigen::VectorXd& u, double h) {
  const auto m = u.size();
  double kinetic = u[0] * u[0] + u[m - 1] * u[m - 1];
  kinetic += (u.tail(m - 1) - u.head(m - 1)).squaredNorm();
  double potential = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) potential += nl.g(std::abs(u[i]));
  return 0.5 * kinetic / h + h * potential;
}

Eigen::VectorXd flow_gradient(const Nonlinearity& nl, const Eigen::VectorXd& u, double h) {
  const auto m = u.size();
  Eigen::VectorXd grad = (2.0 / (h * h)) * u;
  grad.head(m - 1) -= u.tail(m - 1) / (h * h);
  grad.tail(m - 1) -= u.head(m - 1) / (h * h);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = std::abs(u[i]);
    grad[i] += (u[i] < 0.0 ? -1.0 : 1.0) * nl.dg(s);
  }
  return grad;
}

}  // namespace

GridFunction::GridFunction(double half_width, Eigen::VectorXd values)
    : half_width_(half_width), values_(std::move(values)) {
  validate();
}

GridFunction GridFunction::zeros(double half_width, int n) {
  if (n < 3 || n % 2 == 0) throw InputError("grid: node count must be odd and at least 3");
  return GridFunction(half_width, Eigen::VectorXd::Zero(n));
}

void GridFunction::validate() const {
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_))
    throw InputError("grid: half_width must be positive");
  if (values_.size() < 3 || values_.size() % 2 == 0)
    throw InputError("grid: node count must be odd and at least 3");
  if (!values_.allFinite()) throw InputError("grid: values must be finite");
}

double grid_mass(const GridFunction& u) {
  const auto& v = u.values();
  const auto n = v.size();
  return u.spacing() * (v.squaredNorm() - 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]));
}

double grid_energy(const GridFunction& u, const Nonlinearity& nl) {
  const auto& v = u.values();
  const auto n = v.size();
  const double h = u.spacing();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double d;
    if (i == 0) {
      d = (v[1] - v[0]) / h;
    } else if (i == n - 1) {
      d = (v[n - 1] - v[n - 2]) / h;
    } else {
      d = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    const double density = 0.5 * d * d + nl.g(std::abs(v[i]));
    total += (i == 0 || i == n - 1 ? 0.5 : 1.0) * density;
  }
  return h * total;
}

GridFunction sample_branch(const Nonlinearity& nl, double omega, double half_width, int n) {
  const auto sol = solve_profile(nl, omega);
  return GridFunction::sample(half_width, n, [&](double x) { return sample_profile(sol, x); });
}

GridFunction discrete_branch(const Nonlinearity& nl, double omega, double half_width, int n) {
  GridFunction r = sample_branch(nl, omega, half_width, n);
  const double h = r.spacing();
  Eigen::VectorXd u = interior(r);
  const double off = -1.0 / (h * h);
  const auto defect = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd f = apply_tridiagonal(Eigen::VectorXd::Constant(v.size(), 2.0 / (h * h) + omega), off, v);
    for (Eigen::Index i = 0; i < v.size(); ++i) f[i] += nl.dg(std::abs(v[i]));
    return f;
  };
  const double scale = omega * u.cwiseAbs().maxCoeff();
  Eigen::VectorXd f = defect(u);
  int it = 0;
  while (f.cwiseAbs().maxCoeff() > 1e-13 * scale) {
    if (++it > 50)
      throw ConvergenceError("discrete_branch: Newton iteration did not converge at omega = " +
                             std::to_string(omega));
    Eigen::VectorXd diag(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
      diag[i] = 2.0 / (h * h) + omega + nl.d2g(std::abs(u[i]));
    u -= solve_even(diag, off, f);
    const Eigen::VectorXd next = defect(u);
    if (it > 3 && next.cwiseAbs().maxCoeff() >= f.cwiseAbs().maxCoeff()) {
      f = next;
      break;
    }
    f = next;
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(r.size());
  full.segment(1, u.size()) = u;
  return GridFunction(half_width, std::move(full));
}

MinimizerResult minimize_on_sphere(const Nonlinearity& nl, double lambda,
                                   const MinimizerOptions& opts) {
  if (!(lambda > 0.0)) throw InputError("minimize: lambda must be positive");
  if (opts.max_iterations < 1) throw InputError("minimize: max_iterations must be positive");
  if (!(opts.tol > 0.0)) throw InputError("minimize: tol must be positive");

  GridFunction start = GridFunction::zeros(opts.half_width, opts.n);
  if (opts.init == InitialGuess::supplied) {
    if (!opts.supplied) throw InputError("minimize: init=supplied without a supplied profile");
    start = *opts.supplied;
  } else {
    start = GridFunction::sample(opts.half_width, opts.n, [](double x) { return std::exp(-0.5 * x * x); });
  }
  const double h = start.spacing();
  Eigen::VectorXd u = interior(start);
  const auto project = [&](Eigen::VectorXd& v) {
    const double mass = h * v.squaredNorm();
    if (!(mass > 0.0)) throw InputError("minimize: initial profile has zero mass");
    v *= std::sqrt(lambda / mass);
  };
  project(u);

  const auto residual_of = [&](const Eigen::VectorXd& v, double& omega) {
    const Eigen::VectorXd grad = flow_gradient(nl, v, h);
    omega = -grad.dot(v) / v.squaredNorm();
    return (grad + omega * v).norm() / v.norm();
  };

  std::vector<double> history;
  double energy = flow_energy(nl, u, h);
  double omega = 0.0;
  double residual = residual_of(u, omega);
  double tau = 1.0;
  int it = 0;
  while (residual >= opts.tol) {
    if (it >= opts.max_iterations) {
      std::ostringstream os;
      os << "minimize: no convergence after " << it << " iterations, last residual " << residual;
      throw ConvergenceError(os.str());
    }
    ++it;
    // Tangential gradient, preconditioned by (c - Laplacian) with c ~ omega.
    const Eigen::VectorXd grad = flow_gradient(nl, u, h) + omega * u;
    const double c = std::max(std::abs(omega), 1e-2);
    const Tridiagonal precond(Eigen::VectorXd::Constant(u.size(), c + 2.0 / (h * h)), -1.0 / (h * h));
    const Eigen::VectorXd direction = precond.solve(grad);
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::VectorXd next = u - tau * direction;
      project(next);
      const double e_next = flow_energy(nl, next, h);
      if (e_next <= energy + 1e-13 * std::abs(energy)) {
        u = std::move(next);
        energy = e_next;
        tau = std::min(tau * 1.2, 1.0);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "minimize: step size collapsed at iteration " << it << ", residual " << residual;
      throw ConvergenceError(os.str());
    }
    history.push_back(energy);
    residual = residual_of(u, omega);
  }

  // Non-negative representative with its peak on the centre node.
  Eigen::VectorXd full = Eigen::VectorXd::Zero(start.size());
  full.segment(1, u.size()) = u.cwiseAbs();
  Eigen::Index peak = 0;
  full.maxCoeff(&peak);
  const Eigen::Index shift = start.center() - peak;
  if (shift != 0) {
    Eigen::VectorXd moved = Eigen::VectorXd::Zero(full.size());
    for (Eigen::Index i = 0; i < full.size(); ++i) {
      const Eigen::Index j = i + shift;
      if (j >= 0 && j < full.size()) moved[j] = full[i];
    }
    full = std::move(moved);
  }

  MinimizerResult res{GridFunction(opts.half_width, std::move(full)), lambda, 0.0, 0.0, 0.0, 0,
                      std::move(history), {}};
  res.omega_estimate = omega;
  res.gradient_residual = residual;
  res.iterations = it;
  res.energy = grid_energy(res.u, nl);
  if (energy >= 0.0)
    res.warnings.push_back("flat minimizer: energy is not below that of u = 0 (lambda may be below lambda_*)");
  return res;
}

double quadratic_form_xi(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                         const GridFunction& v) {
  if (!r0.same_grid(v)) throw InputError("xi: R0 and v live on different grids");
  const double h = r0.spacing();
  const auto& a = v.values();
  const auto n = a.size();
  const double kinetic = (a.tail(n - 1) - a.head(n - 1)).squaredNorm() / (h * h);
  double potential = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    potential += w * (nl.d2g(std::abs(r0[i])) + omega0) * a[i] * a[i];
  }
  return h * (kinetic + potential);
}

Eigen::VectorXd apply_lplus(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                            const Eigen::VectorXd& v) {
  const double h = r0.spacing();
  return apply_tridiagonal(lplus_diagonal(nl, r0, omega0), -1.0 / (h * h), v);
}

SpectralReport hessian_spectrum(const Nonlinearity& nl, const GridFunction& r0, double omega0,
                                const SpectralOptions& opts) {
  const double h = r0.spacing();
  const double off = -1.0 / (h * h);
  const Eigen::VectorXd diag = lplus_diagonal(nl, r0, omega0);
  const auto apply = [&](const Eigen::VectorXd& v) { return apply_tridiagonal(diag, off, v); };
  const auto rayleigh = [&](const Eigen::VectorXd& v) { return v.dot(apply(v)) / v.squaredNorm(); };

  // Shift strictly below the Gershgorin bound: L+ - shift is positive definite.
  const double shift = (diag.array() - 2.0 * std::abs(off)).minCoeff() - 1.0;
  const Tridiagonal inverse(diag.array() - shift, off);

  SpectralReport rep;
  const Eigen::VectorXd r = interior(r0);
  if (!(r.norm() > 0.0)) throw InputError("spectrum: R0 vanishes");

  // Unrestricted: plain inverse iteration from R0.
  {
    Eigen::VectorXd v = r.normalized();
    double mu = rayleigh(v);
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      v = inverse.solve(v).normalized();
      const double next = rayleigh(v);
      const bool settled = std::abs(next - mu) <= opts.tol * std::max(1.0, std::abs(next));
      mu = next;
      if (settled && (apply(v) - mu * v).norm() <= 1e-6 * std::max(1.0, std::abs(mu))) break;
    }
    if (it == opts.max_iterations)
      throw ConvergenceError("spectrum: unrestricted inverse iteration stagnated at mu = " +
                             std::to_string(mu));
    rep.eig_min_unrestricted = mu;
    rep.iterations_unrestricted = it + 1;
  }

  // Even functions orthogonal to R0: inverse of the compressed operator via a
  // bordered solve, (L - shift) w = v + beta R0 with (w, R0) = 0.
  {
    const Eigen::VectorXd b = inverse.solve(r);
    const double br = b.dot(r);
    const auto project = [&](Eigen::VectorXd& v) { v -= (v.dot(r) / r.squaredNorm()) * r; };
    Eigen::VectorXd v(r.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double x = r0.x(i + 1);
      v[i] = std::cos(0.5 * M_PI * x / r0.half_width());
    }
    project(v);
    v.normalize();
    double mu = rayleigh(v);
    int it = 0;
    std::vector<double> history;
    for (; it < opts.max_iterations; ++it) {
      Eigen::VectorXd a = inverse.solve(v);
      a -= (a.dot(r) / br) * b;
      symmetrize(a);
      project(a);
      v = a.normalized();
      const double next = rayleigh(v);
      const bool settled = std::abs(next - mu) <= opts.tol * std::max(1.0, std::abs(next));
      mu = next;
      if (settled) {
        Eigen::VectorXd res = apply(v) - mu * v;
        project(res);
        if (res.norm() <= 1e-6 * std::max(1.0, std::abs(mu))) break;
      }
      if (it % 1000 == 0) history.push_back(mu);
    }
    if (it == opts.max_iterations) {
      std::ostringstream os;
      os << "spectrum: orthogonal inverse iteration stagnated; Rayleigh quotients:";
      for (double m : history) os << ' ' << m;
      throw ConvergenceError(os.str());
    }
    rep.eig_min_orthogonal = mu;
    rep.iterations_orthogonal = it + 1;
  }

  // Translation mode: L+ applied to the central difference of R0.
  {
    const auto& full = r0.values();
    Eigen::VectorXd d(r.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = (full[i + 2] - full[i]) / (2.0 * h);
    rep.zero_mode_residual = apply(d).norm() / d.norm();
  }

  // S0 = dR/domega from neighbouring discrete profiles; L+ S0 = -R0.
  {
    const auto iv = admissible_frequencies(nl);
    double step = 1e-3 * omega0;
    if (iv.bounded) step = std::min(step, 0.25 * (iv.upper - omega0));
    rep.omega_step = step;
    const double X = r0.half_width();
    const int n = static_cast<int>(r0.size());
    const auto at = [&](double w) { return interior(discrete_branch(nl, w, X, n)); };
    Eigen::VectorXd s0;
    if (iv.contains(omega0 - step) && iv.contains(omega0 + step)) {
      s0 = (at(omega0 + step) - at(omega0 - step)) / (2.0 * step);
    } else if (iv.contains(omega0 + 2.0 * step)) {
      s0 = (-3.0 * at(omega0) + 4.0 * at(omega0 + step) - at(omega0 + 2.0 * step)) / (2.0 * step);
    } else {
      s0 = (3.0 * at(omega0) - 4.0 * at(omega0 - step) + at(omega0 - 2.0 * step)) / (2.0 * step);
    }
    const Eigen::VectorXd ls0 = apply(s0);
    rep.lplus_s0_residual = (ls0 + r).norm() / r.norm();
    rep.lplus_s0_pairing = h * ls0.dot(r);
    rep.s0_pairing = h * s0.dot(r);
  }
  return rep;
}

}  // namespace nls1d
