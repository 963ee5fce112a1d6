#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densbound/drbm.hpp"
#include "densbound/probe.hpp"

using namespace densbound;
using drbm::DrbmParams;

namespace {

// Independent re-implementations of the series summands, kept deliberately
// naive (no shared factoring with the library).
double oracle_f(double z, double t, double x, double C) {
  const double num = std::pow(z, 2) * std::cos(z * x);
  return num / (std::pow(C, 2) + std::pow(z, 2)) * std::exp(-t * std::pow(z, 2) / 2.0);
}

double oracle_g(double z, double t, double x, double C) {
  const double num = C * z * std::sin(z * x);
  return num / (std::pow(C, 2) + std::pow(z, 2)) * std::exp(-t * std::pow(z, 2) / 2.0);
}

// Brute-force partial sum of [f - g](n pi / l) for n in (from, to].
double partial_sum(const DrbmParams& p, long from, long to) {
  double s = 0.0;
  for (long n = from + 1; n <= to; ++n) {
    const double z = n * std::numbers::pi / p.l;
    s += drbm::summand_f(z, p.t, p.x, p.C) - drbm::summand_g(z, p.t, p.x, p.C);
  }
  return s;
}

// (2/l) sum of [f - g](n pi / l), converged to a certified raw tail <= tol.
double raw_series(const DrbmParams& p, double tol) {
  double s = 0.0;
  long n = 0;
  while (drbm::series_tail_bound(n, p) > tol) {
    ++n;
    REQUIRE(n < 2000000);
    const double z = n * std::numbers::pi / p.l;
    s += drbm::summand_f(z, p.t, p.x, p.C) - drbm::summand_g(z, p.t, p.x, p.C);
  }
  return 2.0 / p.l * s;
}

}  // namespace

TEST_CASE("summands match an independent re-implementation") {
  CHECK(drbm::summand_f(0.0, 1.0, 0.5, 1.0) == 0.0);
  CHECK(drbm::summand_g(0.0, 0.5, 0.3, 1.0) == 0.0);
  for (double z : {0.1, 0.7, 1.0, 2.0, 5.5}) {
    CHECK(drbm::summand_f(z, 1.0, std::numbers::pi, 1.0) ==
          doctest::Approx(oracle_f(z, 1.0, std::numbers::pi, 1.0)).epsilon(1e-14));
    CHECK(drbm::summand_g(z, 0.5, 0.3, 1.0) ==
          doctest::Approx(oracle_g(z, 0.5, 0.3, 1.0)).epsilon(1e-14));
  }
  // x = 0: f in (0,1), g = 0
  for (double z : {0.5, 1.0, 3.0}) {
    const double f = drbm::summand_f(z, 1.0, 0.0, 1.0);
    CHECK(f > 0.0);
    CHECK(f < 1.0);
    CHECK(drbm::summand_g(z, 1.0, 0.0, 1.0) == 0.0);
  }
  // |g| <= (1/2) exp(-t z^2 / 2)
  for (double z = 0.0; z < 8.0; z += 0.37)
    CHECK(std::abs(drbm::summand_g(z, 0.5, 0.3, 1.0)) <= 0.5 * std::exp(-0.25 * z * z));
}

TEST_CASE("series_tail_bound dominates brute-force remainders") {
  const DrbmParams p{1.0, 1.0, 1.0, 0.3};
  // bound(N) >= |sum between N and 4N|
  for (long N : {1L, 2L, 3L, 5L, 8L}) {
    CHECK(drbm::series_tail_bound(N, p) >= std::abs(partial_sum(p, N, 4 * N)));
  }
  // N = 0: bound dominates the (essentially) full sum
  CHECK(drbm::series_tail_bound(0, p) >= std::abs(partial_sum(p, 0, 100000)));
  // monotone decrease towards zero
  double prev = drbm::series_tail_bound(0, p);
  for (long N = 1; N <= 40; ++N) {
    const double b = drbm::series_tail_bound(N, p);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK(drbm::series_tail_bound(40, p) < 1e-200);
}

TEST_CASE("transition_density_at_zero") {
  SUBCASE("stationary limit at huge t") {
    const auto r = drbm::transition_density_at_zero({1.0, 1.0, 1e6, 0.3}, {1e-9, 1000000});
    CHECK(r.value == doctest::Approx(2.0 / (1.0 - std::exp(-2.0))).epsilon(1e-9));
  }
  SUBCASE("boundary maximum p(x,0) <= p(0,0)") {
    const auto at0 = drbm::transition_density_at_zero({1.0, 1.0, 0.5, 0.0});
    const auto at7 = drbm::transition_density_at_zero({1.0, 1.0, 0.5, 0.7});
    CHECK(at0.value + at0.tail_bound + at7.tail_bound >= at7.value);
    for (int i = 0; i <= 50; ++i) {
      const auto r = drbm::transition_density_at_zero({1.0, 1.0, 0.5, i / 50.0});
      CHECK(r.value <= at0.value + at0.tail_bound + r.tail_bound);
      CHECK(r.value + r.tail_bound >= 0.0);  // nonnegativity
    }
  }
  SUBCASE("halving the tolerance moves the value by at most the old tail") {
    const DrbmParams p{2.0, 0.5, 0.25, 0.2};
    double tol = 1e-4;
    auto prev = drbm::transition_density_at_zero(p, {tol, 1000000});
    for (int iter = 0; iter < 20; ++iter) {
      tol *= 0.5;
      const auto next = drbm::transition_density_at_zero(p, {tol, 1000000});
      CHECK(std::abs(next.value - prev.value) <= prev.tail_bound + 1e-16);
      CHECK(next.tail_bound <= tol);
      prev = next;
    }
  }
  SUBCASE("large-t envelope limit") {
    for (double t : {100.0, 300.0, 1000.0}) {
      const DrbmParams p{1.0, 1.0, t, 0.4};
      const auto r = drbm::transition_density_at_zero(p, {1e-10, 1000000});
      const double constant = 2.0 / (1.0 - std::exp(-2.0));
      const double envelope = 2.0 / p.l * std::exp(p.C * p.x - 0.5 * p.C * p.C * p.t) *
                              drbm::series_tail_bound(0, p);
      CHECK(std::abs(r.value - constant) <= 1e-10 + envelope);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS((void)drbm::transition_density_at_zero({0.0, 1.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)drbm::transition_density_at_zero({1.0, 1.0, 1.0, 2.0}),
                    std::invalid_argument);
    // tiny cap cannot certify a small tolerance at small t
    CHECK_THROWS_AS((void)drbm::transition_density_at_zero({1.0, 1.0, 0.01, 0.0}, {1e-12, 3}),
                    std::runtime_error);
  }
}

TEST_CASE("integral_I matches the quadrature of the rescaled summands") {
  for (double l : {0.7, 1.0, 2.0}) {
    const DrbmParams p{1.0, l, 1.0, 0.5};
    auto integrand = [&p](double z) {
      const double u = z * std::numbers::pi / p.l;
      return drbm::summand_f(u, p.t, p.x, p.C) - drbm::summand_g(u, p.t, p.x, p.C);
    };
    const double by_quad = 2.0 / p.l * probe::quadrature_to_inf(integrand, 0.0, 1e-11);
    CHECK(drbm::integral_I(p) == doctest::Approx(by_quad).epsilon(1e-8));
  }
  // second term vanishes with C
  const double I = drbm::integral_I({1e-8, 1.0, 1.0, 0.0});
  CHECK(I == doctest::Approx(2.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
  // Phi argument zero: x = tC
  {
    const double C = 1.0, t = 1.0, x = t * C;
    const double expected = 2.0 / std::sqrt(2.0 * std::numbers::pi * t) * std::exp(-x * x / (2 * t)) -
                            C * std::exp(-C * x + 0.5 * t * C * C);
    CHECK(drbm::integral_I({C, 1.0, t, x}) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("euler_maclaurin_error_F") {
  CHECK(drbm::euler_maclaurin_error_F({1.0, 1.0, 1.0, 0.0}) == doctest::Approx(18.0));
  CHECK(drbm::euler_maclaurin_error_F({1.0, 2.0, 1.0, 3.0}) == doctest::Approx(36.0));
  const double f1 = drbm::euler_maclaurin_error_F({0.7, 1.3, 0.4, 0.9});
  const double f2 = drbm::euler_maclaurin_error_F({0.7, 2.6, 0.4, 0.9});
  CHECK(f2 == doctest::Approx(0.5 * f1).epsilon(1e-15));
  DrbmParams zero_c{0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS((void)drbm::euler_maclaurin_error_F(zero_c), std::invalid_argument);
}

TEST_CASE("derivative_envelope dominates |f'| + |g'|") {
  CHECK(drbm::derivative_envelope(0.0, {1.0, 1.0, 1.0, 0.0}) == 0.0);
  CHECK(drbm::derivative_envelope(1.0, {1.0, 1.0, 1.0, 0.0}) ==
        doctest::Approx(5.0 * std::exp(-0.5)).epsilon(1e-14));

  const double h = 1e-6;
  for (const DrbmParams p : {DrbmParams{1.0, 1.0, 0.5, 0.3}, DrbmParams{2.0, 0.5, 1.0, 0.4},
                             DrbmParams{0.5, 2.0, 0.25, 1.5}}) {
    for (int i = 1; i <= 200; ++i) {
      const double z = 8.0 * i / 200.0;
      const double fp = (drbm::summand_f(z + h, p.t, p.x, p.C) -
                         drbm::summand_f(z - h, p.t, p.x, p.C)) / (2.0 * h);
      const double gp = (drbm::summand_g(z + h, p.t, p.x, p.C) -
                         drbm::summand_g(z - h, p.t, p.x, p.C)) / (2.0 * h);
      CHECK(std::abs(fp) + std::abs(gp) <=
            drbm::derivative_envelope(z, p) * (1.0 + 1e-4) + 1e-12);
    }
  }

  SUBCASE("integrated envelope stays below F") {
    for (const DrbmParams p : {DrbmParams{1.0, 1.0, 1.0, 0.5}, DrbmParams{2.0, 0.5, 0.25, 0.1}}) {
      const double integral = probe::quadrature_to_inf(
          [&p](double z) { return drbm::derivative_envelope(z, p); }, 0.0, 1e-10);
      CHECK(2.0 / p.l * integral <= drbm::euler_maclaurin_error_F(p) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("Euler-Maclaurin sandwich I - F <= (2/l) sum <= I + F") {
  for (double C : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      for (double x : {0.0, 0.5, 1.0}) {
        for (double l : {0.5, 1.0, 2.0}) {
          if (x > l) continue;
          const DrbmParams p{C, l, t, x};
          const double mid = raw_series(p, 1e-10 * l / 2.0);
          const double I = drbm::integral_I(p);
          const double F = drbm::euler_maclaurin_error_F(p);
          CHECK(I - F <= mid + 1e-9);
          CHECK(mid <= I + F + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("density_upper_bound dominates the series") {
  for (double C : {0.5, 1.0, 2.0}) {
    for (double l : {0.5, 1.0, 2.0}) {
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        for (double frac : {0.0, 0.25, 0.5, 1.0}) {
          const DrbmParams p{C, l, t, frac * l};
          const auto series = drbm::transition_density_at_zero(p, {1e-10, 1000000});
          const double bound = drbm::density_upper_bound(p);
          CHECK(series.value - series.tail_bound <= bound);
          CHECK(bound <= drbm::density_upper_bound_simple(p) * (1.0 + 1e-12));
        }
      }
    }
  }
  SUBCASE("first term vanishes as l grows at fixed C") {
    const DrbmParams big{1.0, 1e6, 1.0, 0.0};
    const double first_term = 2.0 * big.C * std::exp(-2.0 * big.C * big.l) /
                              (1.0 - std::exp(-2.0 * big.C * big.l));
    CHECK(first_term == 0.0);
    CHECK(std::isfinite(drbm::density_upper_bound(big)));
  }
  DrbmParams zero_c{0.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS((void)drbm::density_upper_bound(zero_c), std::invalid_argument);
}
