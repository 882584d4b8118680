#include <cmath>
#include <vector>

#include "doctest.h"
#include "statusgame/density.hpp"
#include "statusgame/quadrature.hpp"

using namespace statusgame;

namespace {

// Independent quadrature route for conditional means.
double quad_truncated_mean(const TypeDistribution& d, double lo, double hi) {
  const double mass =
      adaptive_simpson([&](double t) { return d.pdf(t); }, lo, hi);
  const double moment =
      adaptive_simpson([&](double t) { return t * d.pdf(t); }, lo, hi);
  return moment / mass;
}

std::vector<TypeDistribution> all_families() {
  return {TypeDistribution::uniform(),
          TypeDistribution::linear_decreasing(),
          TypeDistribution::linear_increasing(),
          TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {1.5, 1.0, 0.5}),
          TypeDistribution::tabulated({0.6, 1.0, 1.4, 1.0, 0.6})};
}

}  // namespace

TEST_CASE("cdf closed forms and tabulated approximation") {
  CHECK(TypeDistribution::uniform().cdf(0.3) ==
        doctest::Approx(0.3).epsilon(1e-14));
  CHECK(TypeDistribution::linear_decreasing().cdf(0.5) ==
        doctest::Approx(0.75).epsilon(1e-14));

  // A tabulated density sampling the constant function reproduces the
  // uniform cdf.
  const TypeDistribution tab =
      TypeDistribution::tabulated({1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK(std::abs(tab.cdf(0.3) - 0.3) <= 1e-9);
  CHECK(tab.cdf(0.0) == 0.0);
  CHECK(tab.cdf(1.0) == 1.0);

  CHECK_THROWS_AS((void)tab.cdf(1.5), std::domain_error);
  CHECK_THROWS_AS((void)tab.cdf(-0.1), std::domain_error);
}

TEST_CASE("cdf is nondecreasing with unit endpoints") {
  for (const TypeDistribution& d : all_families()) {
    CHECK(d.cdf(0.0) == 0.0);
    CHECK(d.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double x = static_cast<double>(i) / 200.0;
      const double cur = d.cdf(x);
      CHECK(cur >= prev - 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("normalization integrates to one") {
  for (const TypeDistribution& d : all_families()) {
    const double total =
        adaptive_simpson([&](double t) { return d.pdf(t); }, 0.0, 1.0);
    const double tol = d.family() == DensityFamily::Tabulated ? 1e-9 : 1e-12;
    CHECK(std::abs(total - 1.0) <= tol);
  }
}

TEST_CASE("truncated mean closed-form examples") {
  const TypeDistribution uni = TypeDistribution::uniform();
  CHECK(uni.truncated_mean(0.2, 0.6) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(uni.truncated_mean(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));

  // For f(t) = 2(1-t): mean over [0,1] is the integral of 2t(1-t) = 1/3.
  const TypeDistribution dec = TypeDistribution::linear_decreasing();
  CHECK(dec.truncated_mean(0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(quad_truncated_mean(dec, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("truncated mean agrees with quadrature") {
  const std::vector<std::pair<double, double>> intervals = {
      {0.0, 1.0}, {0.1, 0.35}, {0.45, 0.55}, {0.2, 0.9}, {0.85, 1.0}};
  for (const TypeDistribution& d : all_families()) {
    for (const auto& [lo, hi] : intervals) {
      CHECK(std::abs(d.truncated_mean(lo, hi) -
                     quad_truncated_mean(d, lo, hi)) <= 1e-9);
    }
  }
}

TEST_CASE("truncated mean is strictly interior, even on tiny intervals") {
  for (const TypeDistribution& d : all_families()) {
    for (double lo : {0.0, 0.13, 0.499999999, 0.7}) {
      for (double len : {1e-9, 1e-6, 1e-3, 0.25}) {
        const double hi = lo + len;
        if (hi > 1.0) continue;
        const double m = d.truncated_mean(lo, hi);
        CHECK(m > lo);
        CHECK(m < hi);
      }
    }
  }
}

TEST_CASE("degenerate intervals error unless boundary beliefs are requested") {
  const TypeDistribution uni = TypeDistribution::uniform();
  CHECK_THROWS_AS((void)uni.truncated_mean(0.5, 0.5 + 1e-11),
                  DegenerateIntervalError);
  CHECK_THROWS_AS((void)uni.truncated_mean(0.6, 0.4), PreconditionError);
  CHECK(uni.truncated_mean_or_midpoint(0.5, 0.5 + 1e-11) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(uni.truncated_mean_or_midpoint(1.0, 1.0) == 1.0);
}

TEST_CASE("two-sided gap: uniform constancy and monotone densities") {
  const TypeDistribution uni = TypeDistribution::uniform();
  CHECK(uni.jewitt_gap(0.5, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));

  // Constant in the cut for the uniform density.
  const double base = uni.jewitt_gap(0.1, 0.0, 1.0);
  for (int i = 1; i < 20; ++i) {
    const double cut = static_cast<double>(i) / 20.0;
    CHECK(std::abs(uni.jewitt_gap(cut, 0.0, 1.0) - base) <= 1e-10);
  }

  // Non-decreasing for a non-increasing density, non-increasing for a
  // non-decreasing one, on two different base intervals.
  for (const auto& [lo, hi] :
       std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.1, 0.9}}) {
    double prev_dec = -1e300;
    double prev_inc = 1e300;
    for (int i = 1; i <= 9; ++i) {
      const double cut = lo + (hi - lo) * static_cast<double>(i) / 10.0;
      const double zd =
          TypeDistribution::linear_decreasing().jewitt_gap(cut, lo, hi);
      const double zi =
          TypeDistribution::linear_increasing().jewitt_gap(cut, lo, hi);
      CHECK(zd >= prev_dec - 1e-12);
      CHECK(zi <= prev_inc + 1e-12);
      prev_dec = zd;
      prev_inc = zi;
    }
  }

  CHECK_THROWS_AS((void)uni.jewitt_gap(0.05, 0.1, 0.9), PreconditionError);
  // Collapsed side intervals propagate the degenerate-interval signal.
  CHECK_THROWS_AS((void)uni.jewitt_gap(0.5, 0.5 - 1e-12, 1.0),
                  DegenerateIntervalError);
}

TEST_CASE("endpoint derivatives of the truncated mean match central "
          "differences") {
  const double h = 1e-6;
  for (const TypeDistribution& d : all_families()) {
    for (const auto& [lo, hi] : std::vector<std::pair<double, double>>{
             {0.1, 0.6}, {0.3, 0.95}, {0.02, 0.2}}) {
      const double d_hi = d.truncated_mean_deriv_hi(lo, hi);
      const double d_lo = d.truncated_mean_deriv_lo(lo, hi);
      const double fd_hi =
          (d.truncated_mean(lo, hi + h) - d.truncated_mean(lo, hi - h)) /
          (2.0 * h);
      const double fd_lo =
          (d.truncated_mean(lo + h, hi) - d.truncated_mean(lo - h, hi)) /
          (2.0 * h);
      CHECK(d_hi == doctest::Approx(fd_hi).epsilon(1e-5));
      CHECK(d_lo == doctest::Approx(fd_lo).epsilon(1e-5));
      CHECK(d_hi > 0.0);
      CHECK(d_lo > 0.0);
    }
  }
}

TEST_CASE("construction rejects bad knot data") {
  CHECK_THROWS_AS(TypeDistribution::piecewise_linear({0.0, 1.0}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TypeDistribution::piecewise_linear({0.1, 1.0}, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TypeDistribution::piecewise_linear({0.0, 0.5, 0.4, 1.0},
                                                     {1.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {1.0, -0.2, 1.0}),
      std::invalid_argument);
  // Interior zero violates full support; boundary zeros are fine.
  CHECK_THROWS_AS(
      TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {1.0, 0.0, 1.0}),
      std::invalid_argument);
  CHECK_NOTHROW(
      TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 1.5, 0.0}));
  CHECK_THROWS_AS(TypeDistribution::tabulated({2.0}), std::invalid_argument);
}

TEST_CASE("pdf positive on the open interval") {
  for (const TypeDistribution& d : all_families()) {
    for (int i = 1; i < 100; ++i) {
      CHECK(d.pdf(static_cast<double>(i) / 100.0) > 0.0);
    }
  }
}
