#include "nls1d/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace nls1d {
namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 20;

// Integrands along the branch at one frequency. With s = R_* - u^2 near the
// peak the 1/sqrt(W) endpoint singularity disappears; below R_*/2 the
// variable is y = log(s).
class Branch {
 public:
  Branch(const Nonlinearity& nl, double omega) : nl_(nl), v_(nl.v_sum()) {
    r_star_ = nls1d::r_star(nl, omega);
    omega_ = v_(r_star_);  // exactly the level crossed at r_star
    s_split_ = 0.5 * r_star_;
    u_split_ = std::sqrt(r_star_ - s_split_);
    y_split_ = std::log(s_split_);
  }

  double r_star() const { return r_star_; }
  double omega() const { return omega_; }
  double u_split() const { return u_split_; }
  double y_split() const { return y_split_; }

  // omega - V(R_* - u^2), accurate as u -> 0.
  double gap_u(double u) const {
    const double ratio = -u * u / r_star_;
    double sum = 0.0;
    for (const auto& t : v_.terms()) {
      // R_*^m - s^m = -R_*^m expm1(m log1p(-u^2 / R_*))
      const double diff = -std::pow(r_star_, t.exponent) * std::expm1(t.exponent * std::log1p(ratio));
      sum += t.coeff * diff;
    }
    return checked(sum, r_star_ - u * u);
  }

  double gap_s(double s) const { return checked(omega_ - v_(s), s); }

  // dx/du, with the u -> 0 limit 2 / (R_* sqrt(V'(R_*))).
  double dxdu(double u) const {
    const double s = r_star_ - u * u;
    if (u == 0.0) return 2.0 / (r_star_ * std::sqrt(nl_.dv_sum()(r_star_)));
    return 2.0 * u / (s * std::sqrt(gap_u(u)));
  }
  double dxdy(double y) const { return 1.0 / std::sqrt(gap_s(std::exp(y))); }

  // Mass and energy densities per du and per dy (whole line, both halves).
  double mass_u(double u) const {
    const double s = r_star_ - u * u;
    return 2.0 * s * s * dxdu(u);
  }
  double energy_u(double u) const {
    const double s = r_star_ - u * u;
    return 2.0 * s * s * (gap_u(u) - 0.5 * omega_) * dxdu(u);
  }
  double mass_y(double y) const {
    const double s = std::exp(y);
    return 2.0 * s * s * dxdy(y);
  }
  double energy_y(double y) const {
    const double s = std::exp(y);
    return 2.0 * s * s * (gap_s(s) - 0.5 * omega_) * dxdy(y);
  }

 private:
  double checked(double gap, double s) const {
    if (!(gap > 0.0)) {
      std::ostringstream os;
      os << "W(s) <= 0 at s = " << s << " inside (0, R_*) with R_* = " << r_star_;
      throw BranchError(os.str());
    }
    return gap;
  }

  const Nonlinearity& nl_;
  PowerSum<double> v_;
  double r_star_ = 0.0;
  double omega_ = 0.0;
  double s_split_ = 0.0;
  double u_split_ = 0.0;
  double y_split_ = 0.0;
};

template <typename F>
double integrate(F f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, kQuadDepth, kQuadTol);
}

// Fixed rule for the short pieces between consecutive profile nodes.
template <typename F>
double integrate_piece(F f, double a, double b) {
  return gauss_kronrod<double, 31>::integrate(f, a, b, 0);
}

// Whole-line integral of a density over the branch, with the analytic
// contribution of s < s_tail where omega - V(s) ~ omega.
template <typename FU, typename FY>
double branch_integral(const Branch& br, FU fu, FY fy, double tail_density) {
  const double y_tail = std::log(br.r_star()) + std::log(1e-20);
  const double s_tail = std::exp(y_tail);
  return integrate(fu, 0.0, br.u_split()) + integrate(fy, y_tail, br.y_split()) +
         tail_density * s_tail * s_tail;
}

void require_admissible(const Nonlinearity& nl, double omega) {
  const auto iv = admissible_frequencies(nl);
  if (!iv.contains(omega)) {
    std::ostringstream os;
    os << "omega = " << omega << " is outside the admissible interval (0, " << iv.upper << ")";
    throw NoCrossingError(os.str());
  }
}

ProfileSolution quadrature_profile(const Branch& br, double dx,
                                   double tail_ratio) {
  const double omega = br.omega();
  const double y_tail = std::log(tail_ratio * br.r_star());
  if (!(y_tail < br.y_split())) throw InputError("tail_ratio must be below 1/2");

  const double x_peak = integrate([&](double u) { return br.dxdu(u); }, 0.0, br.u_split());
  const double x_tail = integrate([&](double y) { return br.dxdy(y); }, y_tail, br.y_split());
  const int n_a = std::max(8, static_cast<int>(std::ceil(x_peak / dx)));
  const int n_b = std::max(8, static_cast<int>(std::ceil(x_tail / dx)));

  ProfileSolution sol;
  sol.omega = omega;
  sol.r_star = br.r_star();
  sol.xs.resize(n_a + n_b + 1);
  sol.rs.resize(n_a + n_b + 1);
  sol.drs.resize(n_a + n_b + 1);

  const auto slope = [&](double s) { return -s * std::sqrt(br.gap_s(s)); };
  sol.xs[0] = 0.0;
  sol.rs[0] = br.r_star();
  sol.drs[0] = 0.0;
  double x = 0.0;
  for (int j = 1; j <= n_a; ++j) {
    const double u0 = br.u_split() * (j - 1) / n_a;
    const double u1 = br.u_split() * j / n_a;
    x += integrate_piece([&](double u) { return br.dxdu(u); }, u0, u1);
    const double s = br.r_star() - u1 * u1;
    sol.xs[j] = x;
    sol.rs[j] = s;
    sol.drs[j] = -s * std::sqrt(br.gap_u(u1));
  }
  for (int j = 1; j <= n_b; ++j) {
    const double y0 = br.y_split() + (y_tail - br.y_split()) * (j - 1) / n_b;
    const double y1 = br.y_split() + (y_tail - br.y_split()) * j / n_b;
    x += integrate_piece([&](double y) { return br.dxdy(y); }, y1, y0);
    const double s = std::exp(y1);
    sol.xs[n_a + j] = x;
    sol.rs[n_a + j] = s;
    sol.drs[n_a + j] = slope(s);
  }
  return sol;
}

ProfileSolution shooting_profile(const Nonlinearity& nl, double omega, double r0, double dx,
                                 const ProfileOptions& opts) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;

  const double x_max = opts.x_max > 0.0 ? opts.x_max : 50.0 / std::sqrt(omega);
  const auto rhs = [&](const State& y, State& dydx, double) {
    dydx[0] = y[1];
    dydx[1] = nl.dg(std::max(y[0], 0.0)) + omega * y[0];
  };

  auto stepper = ode::make_dense_output(1e-3 * opts.ode_tol * r0, opts.ode_tol,
                                        ode::runge_kutta_dopri5<State>());
  State y{r0, 0.0};
  stepper.initialize(y, 0.0, 1e-3 * dx);

  std::vector<double> xs{0.0}, rs{r0}, drs{0.0};
  double next = dx;
  bool done = false;
  while (!done) {
    const auto [t0, t1] = stepper.do_step(rhs);
    (void)t0;
    while (next <= t1 && !done) {
      State st;
      stepper.calc_state(next, st);
      if (st[0] > r0 * (1.0 + 1e-6)) {
        std::ostringstream os;
        os << "shooting blow-up: R(" << next << ") = " << st[0] << " exceeds R_* = " << r0
           << " at omega = " << omega << "; reduce the step or check omega";
        throw ConvergenceError(os.str());
      }
      // The trajectory has left the separatrix: it turns back up or crosses 0.
      if (st[1] >= 0.0 || st[0] <= 0.0) {
        done = true;
        break;
      }
      xs.push_back(next);
      rs.push_back(st[0]);
      drs.push_back(st[1]);
      if (st[0] < opts.stop_ratio * r0 || next >= x_max) done = true;
      next += dx;
    }
    if (t1 > x_max + dx) done = true;
  }

  ProfileSolution sol;
  sol.omega = omega;
  sol.r_star = r0;
  sol.xs = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  sol.rs = Eigen::Map<Eigen::VectorXd>(rs.data(), static_cast<Eigen::Index>(rs.size()));
  sol.drs = Eigen::Map<Eigen::VectorXd>(drs.data(), static_cast<Eigen::Index>(drs.size()));
  return sol;
}

}  // namespace

FrequencyInterval admissible_frequencies(const Nonlinearity& nl) {
  const auto rep = check_conditions(nl);
  if (!rep.g1.holds) throw BranchError("no standing-wave branch: (G1) fails, G >= 0");
  FrequencyInterval iv;
  iv.bounded = rep.v_bounded;
  iv.upper = rep.sup_v;
  return iv;
}

ProfileSolution solve_profile(const Nonlinearity& nl, double omega, const ProfileOptions& opts) {
  require_admissible(nl, omega);
  const double dx = opts.dx > 0.0 ? opts.dx : 0.02 / std::sqrt(omega);
  const Branch br(nl, omega);

  ProfileSolution sol = opts.method == ProfileMethod::quadrature
                            ? quadrature_profile(br, dx, opts.tail_ratio)
                            : shooting_profile(nl, omega, br.r_star(), dx, opts);
  sol.omega = omega;
  sol.mass = mass_of(nl, omega);
  sol.energy = energy_of(nl, omega);
  double residual = 0.0;
  for (Eigen::Index i = 0; i < sol.rs.size(); ++i) {
    const double r = sol.rs[i];
    const double w = omega * r * r + 2.0 * nl.g(r);
    residual = std::max(residual, std::abs(sol.drs[i] * sol.drs[i] - w));
  }
  sol.residual_first_integral = residual;
  sol.d2rs.resize(sol.rs.size());
  for (Eigen::Index i = 0; i < sol.rs.size(); ++i) sol.d2rs[i] = nl.dg(sol.rs[i]) + omega * sol.rs[i];
  return sol;
}

double mass_of(const Nonlinearity& nl, double omega) {
  require_admissible(nl, omega);
  const Branch br(nl, omega);
  return branch_integral(
      br, [&](double u) { return br.mass_u(u); }, [&](double y) { return br.mass_y(y); },
      1.0 / std::sqrt(br.omega()));
}

double energy_of(const Nonlinearity& nl, double omega) {
  require_admissible(nl, omega);
  const Branch br(nl, omega);
  return branch_integral(
      br, [&](double u) { return br.energy_u(u); }, [&](double y) { return br.energy_y(y); },
      0.5 * std::sqrt(br.omega()));
}

double vk_slope(const Nonlinearity& nl, double omega, double h) {
  if (!(h > 0.0)) throw InputError("vk_slope: step must be positive");
  const auto iv = admissible_frequencies(nl);
  if (!iv.contains(omega - h) || !iv.contains(omega + h)) {
    std::ostringstream os;
    os << "vk_slope: omega +- h = [" << omega - h << ", " << omega + h
       << "] leaves the admissible interval (0, " << iv.upper << ")";
    throw StepError(os.str());
  }
  return (mass_of(nl, omega + h) - mass_of(nl, omega - h)) / (2.0 * h);
}

double sample_profile(const ProfileSolution& sol, double x) {
  x = std::abs(x);
  const auto n = sol.xs.size();
  if (x >= sol.xs[n - 1]) {
    return sol.rs[n - 1] * std::exp(-std::sqrt(sol.omega) * (x - sol.xs[n - 1]));
  }
  const auto* begin = sol.xs.data();
  const auto it = std::upper_bound(begin, begin + n, x);
  const auto i = static_cast<Eigen::Index>(it - begin) - 1;
  const double h = sol.xs[i + 1] - sol.xs[i];
  const double t = (x - sol.xs[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 0.5 * (t3 - 2 * t4 + t5);
  return h0 * sol.rs[i] + h1 * h * sol.drs[i] + h2 * h * h * sol.d2rs[i] + h3 * sol.rs[i + 1] +
         h4 * h * sol.drs[i + 1] + h5 * h * h * sol.d2rs[i + 1];
}

GridIntegrals profile_grid_integrals(const Nonlinearity& nl, const ProfileSolution& sol) {
  const double omega = sol.omega;
  const auto n = sol.xs.size();
  GridIntegrals out;
  const auto mass_density = [&](Eigen::Index i) { return sol.rs[i] * sol.rs[i]; };
  const auto mass_slope = [&](Eigen::Index i) { return 2.0 * sol.rs[i] * sol.drs[i]; };
  const auto energy_density = [&](Eigen::Index i) {
    return 0.5 * sol.drs[i] * sol.drs[i] + nl.g(sol.rs[i]);
  };
  const auto energy_slope = [&](Eigen::Index i) {
    return sol.drs[i] * (2.0 * nl.dg(sol.rs[i]) + omega * sol.rs[i]);
  };
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = sol.xs[i + 1] - sol.xs[i];
    out.mass += 0.5 * h * (mass_density(i) + mass_density(i + 1)) +
                h * h / 12.0 * (mass_slope(i) - mass_slope(i + 1));
    out.energy += 0.5 * h * (energy_density(i) + energy_density(i + 1)) +
                  h * h / 12.0 * (energy_slope(i) - energy_slope(i + 1));
  }
  const double r_end = sol.rs[n - 1];
  out.mass += r_end * r_end / (2.0 * std::sqrt(omega));
  out.energy += 0.5 * omega * r_end * r_end / (2.0 * std::sqrt(omega));
  out.mass *= 2.0;
  out.energy *= 2.0;
  return out;
}

LambdaCurve lambda_curve(const Nonlinearity& nl, int n_points,
                         std::optional<std::pair<double, double>> range) {
  if (n_points < 3) throw InputError("lambda_curve: n_points must be at least 3");
  const auto iv = admissible_frequencies(nl);
  double lo = 0.0, hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(lo < hi) || !iv.contains(lo) || !iv.contains(hi)) {
      std::ostringstream os;
      os << "lambda_curve: range [" << lo << ", " << hi << "] is not inside (0, " << iv.upper
         << ")";
      throw InputError(os.str());
    }
  } else if (iv.bounded) {
    lo = 0.01 * iv.upper;
    hi = 0.98 * iv.upper;
  } else {
    lo = 0.02;
    hi = 2.0;
  }
  const double length = range ? hi - lo : (iv.bounded ? iv.upper : hi);

  LambdaCurve curve;
  curve.omegas.resize(n_points);
  curve.r_stars.resize(n_points);
  curve.lambdas.resize(n_points);
  curve.energies.resize(n_points);
  curve.slopes.resize(n_points);
  curve.monotone = true;
  for (int i = 0; i < n_points; ++i) {
    const double omega = lo + (hi - lo) * i / (n_points - 1);
    double h = std::max(1e-4, 1e-3 * length);
    h = std::min(h, 0.5 * omega);
    if (iv.bounded) h = std::min(h, 0.5 * (iv.upper - omega));
    curve.omegas[i] = omega;
    curve.r_stars[i] = r_star(nl, omega);
    curve.lambdas[i] = mass_of(nl, omega);
    curve.energies[i] = energy_of(nl, omega);
    curve.slopes[i] = vk_slope(nl, omega, h);
    if (!(curve.slopes[i] > 0.0) && curve.monotone) {
      curve.monotone = false;
      curve.first_violation = i;
    }
  }
  return curve;
}

std::string to_string(Certification c) {
  return c == Certification::CertifiedUnique ? "CERTIFIED_UNIQUE" : "INCONCLUSIVE";
}

UniquenessCertificate uniqueness_certificate(const Nonlinearity& nl, int n_points) {
  UniquenessCertificate cert;
  cert.nonlinearity = to_inline(nl);
  cert.n_points = n_points;
  const auto rep = check_conditions(nl);
  if (!rep.g1.holds) {
    cert.reason = rep.first_failure();
    return cert;
  }
  const auto curve = lambda_curve(nl, n_points);
  cert.omega_lower = curve.omegas[0];
  cert.omega_upper = curve.omegas[n_points - 1];
  cert.min_slope = curve.slopes.minCoeff();
  cert.max_lambda = curve.lambdas.maxCoeff();
  if (!rep.all_hold()) {
    cert.reason = rep.first_failure();
  } else if (!curve.monotone || !(cert.min_slope > 1e-10 * cert.max_lambda)) {
    cert.reason = "lambda not strictly increasing";
  } else {
    cert.verdict = Certification::CertifiedUnique;
  }
  return cert;
}

}  // namespace nls1d
