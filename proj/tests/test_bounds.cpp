#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "densbound/bounds.hpp"
#include "densbound/normal.hpp"

using namespace densbound;
using bounds::LocalBoundInput;

TEST_CASE("local_density_bound factors") {
  SUBCASE("factor_j is exactly half the kernel bound at x = a_j") {
    const LocalBoundInput in{{0.0, 1.3}, {0.4, 0.9}, 0.7, 1.5, 1.0, 2};
    const auto r = bounds::local_density_bound(in);
    for (int j = 0; j < 2; ++j) {
      const double a = std::min(in.l, std::abs(in.x0[j] - in.x[j]));
      CHECK(r.a[j] == a);
      CHECK(r.factor[j] == 0.5 * drbm::density_upper_bound({in.C, in.l, in.t, a}));
      CHECK(r.factor[j] > 0.0);
    }
    CHECK(r.product == doctest::Approx(r.factor[0] * r.factor[1]).epsilon(1e-15));
  }
  SUBCASE("a = 0 substitution") {
    const double C = 1.0, l = 1.0, t = 0.5;
    const auto r = bounds::local_density_bound({{0.0}, {0.0}, t, C, l, 1});
    const double z = std::sqrt(t) * C;
    const double expected = C * std::exp(-2 * C * l) / (1 - std::exp(-2 * C * l)) +
                            normal::std_normal_pdf(z) / std::sqrt(t) +
                            C * normal::std_normal_cdf(z) +
                            9.0 * std::exp(-C * C * t / 2) / (l * t * C * C);
    CHECK(r.factor[0] == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("clipping a_j = min(l, distance)") {
    const auto r = bounds::local_density_bound({{0.0}, {5.0}, 1.0, 1.0, 2.0, 1});
    CHECK(r.a[0] == 2.0);
    const auto r2 = bounds::local_density_bound({{0.0}, {0.5}, 1.0, 1.0, 2.0, 1});
    CHECK(r2.a[0] == 0.5);
  }
  SUBCASE("C = 0 is rejected") {
    CHECK_THROWS_AS((void)bounds::local_density_bound({{0.0}, {0.0}, 1.0, 0.0, 1.0, 1}),
                    std::invalid_argument);
  }
}

TEST_CASE("large-l local factor approaches the global factor") {
  // The series-based factor converges to phi(z)/sqrt(t) + C Phi(z) as the
  // box grows; the closed-form factor keeps an O(1/l) allowance and does not.
  for (double a : {0.0, 0.5, 1.0}) {
    for (double C : {0.5, 1.0}) {
      for (double t : {0.5, 1.0}) {
        const auto local = bounds::sharp_local_bound({{0.0}, {a}, t, C, 1e3, 1});
        const auto global = bounds::global_density_bound({0.0}, {a}, t, C, 1);
        CHECK(std::abs(local.value - global.value) <= 1e-3);
      }
    }
  }
}

TEST_CASE("sharp_local_bound") {
  SUBCASE("product structure for equal distances") {
    const LocalBoundInput in{{0.0, 0.0}, {0.25, 0.25}, 0.5, 1.0, 1.0, 2};
    const auto sharp = bounds::sharp_local_bound(in);
    const auto single = drbm::transition_density_at_zero({1.0, 1.0, 0.5, 0.25});
    CHECK(sharp.value == doctest::Approx(0.25 * single.value * single.value).epsilon(1e-12));
  }
  SUBCASE("sharp <= closed-form product bound on a grid") {
    for (double C : {0.5, 1.0, 2.0}) {
      for (double t : {0.25, 1.0, 2.0}) {
        for (double a : {0.0, 0.3, 0.9}) {
          const LocalBoundInput in{{0.0}, {a}, t, C, 1.0, 1};
          const auto sharp = bounds::sharp_local_bound(in);
          const auto closed = bounds::local_density_bound(in);
          CHECK(sharp.value <= closed.product + sharp.certified_error);
        }
      }
    }
  }
  SUBCASE("stationary limit") {
    const LocalBoundInput in{{0.0, 0.0}, {0.1, 0.2}, 1e6, 1.0, 1.0, 2};
    const auto sharp = bounds::sharp_local_bound(in, {1e-9, 1000000});
    const double factor = 1.0 / (1.0 - std::exp(-2.0));
    CHECK(sharp.value == doctest::Approx(factor * factor).epsilon(1e-6));
  }
}

TEST_CASE("global_density_bound") {
  const auto peak = bounds::global_density_bound({0.0}, {0.0}, 1.0, 0.0, 1);
  CHECK(peak.value == doctest::Approx(0.3989422804014327).epsilon(1e-13));
  CHECK(peak.value <= peak.crude);

  // drift-free case is the exact heat kernel
  for (double x : {0.0, 0.5, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      const auto g = bounds::global_density_bound({0.0}, {x}, t, 0.0, 1);
      CHECK(g.value ==
            doctest::Approx(normal::std_normal_pdf(x / std::sqrt(t)) / std::sqrt(t))
                .epsilon(1e-13));
    }
  }

  // product structure in d = 3
  const auto g1 = bounds::global_density_bound({0.0}, {0.4}, 0.5, 1.0, 1);
  const auto g3 = bounds::global_density_bound({0.0, 1.0, -1.0}, {0.4, 1.4, -0.6}, 0.5, 1.0, 3);
  CHECK(g3.value == doctest::Approx(std::pow(g1.value, 3)).epsilon(1e-13));
  CHECK(g3.value <= g3.crude);
}

TEST_CASE("lamperti_transform") {
  const bounds::ScalarFieldSpec unit{[](double) { return 1.0; }, 1.0, 1.0, 0.0, 0.0};
  CHECK(bounds::lamperti_transform(unit, 0.0) == 0.0);
  CHECK(bounds::lamperti_transform(unit, 2.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(bounds::lamperti_transform(unit, -1.5) == doctest::Approx(-1.5).epsilon(1e-12));

  const bounds::ScalarFieldSpec two{[](double) { return 2.0; }, 2.0, 2.0, 0.0, 0.0};
  CHECK(bounds::lamperti_transform(two, 3.0) == doctest::Approx(1.5).epsilon(1e-12));

  const bounds::ScalarFieldSpec quad{[](double u) { return 1.0 + u * u; }, 1.0, 26.0, 10.0, 0.0};
  for (double y : {-5.0, -1.0, 0.5, 2.0, 5.0}) {
    CHECK(std::abs(bounds::lamperti_transform(quad, y, 1e-12) - std::atan(y)) < 1e-10);
  }

  // strictly increasing on sampled pairs
  double prev = bounds::lamperti_transform(quad, -5.0);
  for (double y = -4.5; y <= 5.0; y += 0.5) {
    const double v = bounds::lamperti_transform(quad, y);
    CHECK(v > prev);
    prev = v;
  }

  // sigma goes negative inside (0, 2), so the quadrature must sample it
  const bounds::ScalarFieldSpec bad{[](double u) { return u - 1.0; }, 1.0, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS((void)bounds::lamperti_transform(bad, 2.0), std::domain_error);
}

TEST_CASE("state_dependent_bound_1d") {
  SUBCASE("identity sigma reduces to the local bound") {
    const bounds::ScalarFieldSpec spec{[](double) { return 1.0; }, 1.0, 1.0, 0.0, 1.0};
    const double got = bounds::state_dependent_bound_1d(spec, 0.0, 0.4, 0.5, {-2.0, 2.0});
    const auto direct = bounds::local_density_bound({{0.0}, {0.4}, 0.5, 1.0, 1.6, 1});
    CHECK(got == doctest::Approx(direct.product).epsilon(1e-10));
  }
  SUBCASE("pure Brownian with sigma = 2 falls back to the scaled global bound") {
    const bounds::ScalarFieldSpec spec{[](double) { return 2.0; }, 2.0, 2.0, 0.0, 0.0};
    const double t = 1.0, y0 = 0.0, y = 1.0;
    const double got = bounds::state_dependent_bound_1d(spec, y0, y, t, {-5.0, 5.0});
    const double expected =
        2.0 * normal::std_normal_pdf(std::abs(y0 - y) / (2.0 * std::sqrt(t))) / std::sqrt(t);
    CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    // exact density of Y(t) = 2W(t) + y0; the bound must dominate it
    const double exact =
        normal::std_normal_pdf((y - y0) / (2.0 * std::sqrt(t))) / (2.0 * std::sqrt(t));
    CHECK(got >= exact);
  }
  SUBCASE("region too small") {
    const bounds::ScalarFieldSpec spec{[](double) { return 1.0; }, 1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(
        (void)bounds::state_dependent_bound_1d(spec, 0.0, 2.0, 0.5, {-2.0, 2.0}),
        std::invalid_argument);
  }
}
