#include <doctest.h>

#include <chrono>
#include <cmath>

#include "nls1d/criteria.hpp"
#include "nls1d/errors.hpp"
#include "nls1d/profile.hpp"

using namespace nls1d;

namespace {

Nonlinearity make(std::vector<PowerTerm> t) { return Nonlinearity(std::move(t)); }

// Ground state of R'' = omega R - p R^{p-1}: A sech^alpha(k x) with
// alpha = 2/(p-2), k = sqrt(omega)/alpha, A^{p-2} = k^2 alpha (alpha+1) / p.
double pure_power_profile(double p, double omega, double x) {
  const double alpha = 2.0 / (p - 2.0);
  const double k = std::sqrt(omega) / alpha;
  const double amp = std::pow(k * k * alpha * (alpha + 1.0) / p, 1.0 / (p - 2.0));
  return amp * std::pow(1.0 / std::cosh(k * x), alpha);
}

struct Case {
  Nonlinearity nl;
  double omega;
};

std::vector<Case> method_cases() {
  return {{make({{-1, 1, 4}}), 1.0},
          {make({{-1, 1, 3}}), 0.7},
          {make({{-1, 1, 4}, {1, 1, 6}}), 0.3},
          {make({{-1, 1, 3}, {-1, 1, 4}}), 1.5},
          {make({{-1, 1, 3}, {1, 2, 4}, {-1, 1, 5}}), 0.5},
          {make({{-1, 1, 2.5}, {1, 1, 4}}), 0.2}};
}

}  // namespace

TEST_SUITE("profile") {
  TEST_CASE("cubic branch mass and energy in closed form") {
    const auto nl = make({{-1, 1, 4}});
    for (double omega : {0.25, 1.0, 4.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      CHECK(mass_of(nl, omega) == doctest::Approx(std::sqrt(omega)).epsilon(1e-6));
      CHECK(energy_of(nl, omega) == doctest::Approx(-std::pow(omega, 1.5) / 6).epsilon(1e-6));
      CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);
    }
  }

  TEST_CASE("pure-power profiles match the sech closed form at every node") {
    for (double p : {3.0, 3.5, 4.0, 5.0}) {
      for (double omega : {0.5, 1.0, 2.0}) {
        const auto nl = make({{-1, 1, p}});
        for (auto method : {ProfileMethod::quadrature, ProfileMethod::shooting}) {
          ProfileOptions o;
          o.method = method;
          const auto sol = solve_profile(nl, omega, o);
          double err = 0.0;
          for (Eigen::Index i = 0; i < sol.xs.size(); ++i)
            err = std::max(err, std::abs(sol.rs[i] - pure_power_profile(p, omega, sol.xs[i])));
          CAPTURE(p);
          CAPTURE(omega);
          CHECK(err < 1e-6);
          CHECK(sol.residual_first_integral < 1e-8);
        }
      }
    }
  }

  TEST_CASE("quadrature and shooting agree") {
    for (const auto& c : method_cases()) {
      ProfileOptions shoot;
      shoot.method = ProfileMethod::shooting;
      const auto q = solve_profile(c.nl, c.omega);
      const auto s = solve_profile(c.nl, c.omega, shoot);
      CHECK(q.r_star == s.r_star);
      double err = 0.0;
      for (Eigen::Index i = 0; i < s.xs.size(); ++i)
        err = std::max(err, std::abs(s.rs[i] - sample_profile(q, s.xs[i])));
      CAPTURE(to_inline(c.nl));
      CHECK(err < 1e-5);
      CHECK(q.residual_first_integral < 1e-8);
      CHECK(s.residual_first_integral < 1e-8);
      // Profile is strictly decreasing from R_*.
      for (Eigen::Index i = 1; i < q.rs.size(); ++i) CHECK(q.rs[i] < q.rs[i - 1]);
    }
  }

  TEST_CASE("gridded integrals reproduce mass_of and energy_of") {
    for (const auto& c : method_cases()) {
      const auto sol = solve_profile(c.nl, c.omega);
      const auto g = profile_grid_integrals(c.nl, sol);
      CAPTURE(to_inline(c.nl));
      CHECK(g.mass == doctest::Approx(sol.mass).epsilon(1e-6));
      CHECK(g.energy == doctest::Approx(sol.energy).epsilon(1e-6));
    }
  }

  TEST_CASE("pure-power mass scaling exponent") {
    for (double p : {3.0, 4.0, 5.0}) {
      const auto nl = make({{-1, 1, p}});
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const int n = 9;
      for (int i = 0; i < n; ++i) {
        const double omega = 0.5 + 1.5 * i / (n - 1);
        const double x = std::log(omega), y = std::log(mass_of(nl, omega));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      CHECK(slope == doctest::Approx((6 - p) / (2 * (p - 2))).epsilon(1e-3));
    }
  }

  TEST_CASE("Vakhitov-Kolokolov slope of the cubic branch") {
    const auto nl = make({{-1, 1, 4}});
    CHECK(std::abs(vk_slope(nl, 1.0, 1e-3) - 0.5) < 1e-4);
    CHECK(std::abs(vk_slope(nl, 4.0, 1e-3) - 0.25) < 1e-4);
    CHECK_THROWS_AS(vk_slope(nl, 1e-4, 1e-3), StepError);
    CHECK_THROWS_AS(vk_slope(make({{-1, 1, 4}, {1, 1, 6}}), 0.4999, 1e-3), StepError);
  }

  TEST_CASE("dE/dlambda = -omega/2 along branches satisfying G3 and G5") {
    const std::vector<Nonlinearity> cases{make({{-1, 1, 4}}), make({{-1, 1, 3}, {-1, 1, 4}}),
                                          make({{-1, 1, 4}, {1, 1, 6}}), make({{-1, 1, 3}, {1, 1, 5}}),
                                          make({{-1, 1, 4}, {1, 0.5, 5}, {1, 1, 7}})};
    for (const auto& nl : cases) {
      const auto rep = check_conditions(nl);
      REQUIRE(rep.g3.holds);
      REQUIRE(rep.g5.holds);
      const auto curve = lambda_curve(nl, 9);
      for (Eigen::Index i = 0; i < curve.omegas.size(); ++i) {
        const double w = curve.omegas[i];
        const double h = 1e-4 * w;
        const double de = energy_of(nl, w + h) - energy_of(nl, w - h);
        const double dl = mass_of(nl, w + h) - mass_of(nl, w - h);
        CAPTURE(to_inline(nl));
        CAPTURE(w);
        CHECK(de / dl == doctest::Approx(-w / 2).epsilon(1e-3));
        CHECK(curve.slopes[i] > -1e-8);
      }
    }
  }

  TEST_CASE("K is non-decreasing on Omega when G3 holds") {
    for (const auto& nl : {make({{-1, 1, 4}, {1, 1, 6}}), make({{-1, 1, 3}, {-1, 1, 4}})}) {
      const auto rep = check_conditions(nl);
      REQUIRE(rep.g3.holds);
      const double hi = rep.omega.bounded ? rep.omega.upper : 10.0;
      const auto k = nl.k_sum();
      double prev = k(1e-3 * hi);
      for (int i = 1; i <= 1000; ++i) {
        const double cur = k(1e-3 * hi + (hi - 1e-3 * hi) * i / 1000.0);
        CHECK(cur >= prev - 1e-14 * std::abs(prev));
        prev = cur;
      }
    }
  }

  TEST_CASE("lambda curve") {
    const auto nl = make({{-1, 1, 4}, {1, 1, 6}});
    const auto c = lambda_curve(nl, 7);
    CHECK(c.omegas[0] == doctest::Approx(0.005));
    CHECK(c.omegas[6] == doctest::Approx(0.49));
    CHECK(c.monotone);
    CHECK_FALSE(c.first_violation);
    for (Eigen::Index i = 0; i < 7; ++i) {
      CHECK(c.lambdas[i] == mass_of(nl, c.omegas[i]));
      CHECK(c.r_stars[i] == r_star(nl, c.omegas[i]));
    }
    const auto steep = lambda_curve(make({{-1, 1, 7}}), 5);
    CHECK_FALSE(steep.monotone);
    REQUIRE(steep.first_violation);
    CHECK(*steep.first_violation == 0);
    CHECK_THROWS_AS(lambda_curve(nl, 5, std::make_pair(0.1, 0.6)), InputError);
  }

  TEST_CASE("uniqueness certificates") {
    for (const auto& nl : {make({{-1, 1, 4}}), make({{-1, 1, 3}, {-1, 1, 4}}), make({{-1, 1, 4}, {1, 1, 6}})}) {
      const auto c = uniqueness_certificate(nl);
      CAPTURE(c.nonlinearity);
      CHECK(c.verdict == Certification::CertifiedUnique);
      CHECK(c.reason.empty());
    }
    const auto cubic_quartic = uniqueness_certificate(make({{1, 1, 3}, {-1, 1, 4}}));
    CHECK(cubic_quartic.verdict == Certification::Inconclusive);
    CHECK(cubic_quartic.reason == "G3 fails");
    for (double u : {0.2, 0.5, 0.8}) {
      const double a = u * infimum_sign_threshold(1.0, 1.0, 3.0, 4.0, 5.0);
      const auto c = uniqueness_certificate(make({{1, a, 3}, {-1, 1, 4}, {1, 1, 5}}));
      CHECK(c.verdict == Certification::Inconclusive);
      CHECK(c.reason == "G3 fails");
    }
    CHECK(uniqueness_certificate(make({{1, 1, 4}})).reason == "G1 fails");
    CHECK(uniqueness_certificate(make({{-1, 1, 7}})).reason == "G2b fails");
  }

  TEST_CASE("input errors") {
    const auto nl = make({{-1, 1, 4}, {1, 1, 6}});
    CHECK_THROWS_AS(solve_profile(nl, 0.5), NoCrossingError);
    CHECK_THROWS_AS(solve_profile(nl, -1.0), NoCrossingError);
    CHECK_THROWS_AS(mass_of(make({{1, 1, 4}}), 1.0), BranchError);
  }

  TEST_CASE("repeated solves are identical") {
    const auto nl = make({{-1, 1, 3}, {1, 2, 4}, {-1, 1, 5}});
    const auto a = solve_profile(nl, 0.5), b = solve_profile(nl, 0.5);
    CHECK(a.xs == b.xs);
    CHECK(a.rs == b.rs);
    CHECK(a.mass == b.mass);
  }
}
