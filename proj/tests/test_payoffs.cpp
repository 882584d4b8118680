#include <cmath>

#include "doctest.h"
#include "statusgame/payoffs.hpp"

using namespace statusgame;

namespace {

ModelSpec baseline() {
  ModelSpec spec;
  spec.dist = TypeDistribution::uniform();
  spec.action_cost = LinearGapActionCost{1.0, 0.5};
  spec.group_cost = LinearGapGroupCost{0.1, 0.0};
  spec.mu_inside = 0.4;
  spec.mu_outside = 0.5;
  return spec;
}

// Exact baseline equilibrium from the affine reduction of the uniform case:
// the group condition collapses to 1.22 c - 1.09 = 0.
CutoffProfile baseline_equilibrium() {
  const double group = 109.0 / 122.0;
  return {1.0 - 0.4 * group, group, 1.0 - 0.2 * (1.0 - group)};
}

Matrix3 jacobian_by_differences(const ModelSpec& spec, const CutoffProfile& p,
                                double h) {
  Matrix3 fd{};
  auto eval = [&](CutoffProfile q) {
    const ResidualVector r = equilibrium_residual(spec, q);
    return Vec3{r.action_high, r.action_low, r.group};
  };
  for (int col = 0; col < 3; ++col) {
    CutoffProfile plus = p;
    CutoffProfile minus = p;
    double* pv = col == 0 ? &plus.action_cutoff_high
                 : col == 1 ? &plus.action_cutoff_low
                            : &plus.group_cutoff;
    double* mv = col == 0 ? &minus.action_cutoff_high
                 : col == 1 ? &minus.action_cutoff_low
                            : &minus.group_cutoff;
    *pv += h;
    *mv -= h;
    const Vec3 up = eval(plus);
    const Vec3 dn = eval(minus);
    for (int row = 0; row < 3; ++row) {
      fd[row][col] = (up[row] - dn[row]) / (2.0 * h);
    }
  }
  return fd;
}

}  // namespace

TEST_CASE("profile classification") {
  CHECK(classify_profile({0.2, 0.5, 0.8}) == ProfileClass::Interior);
  CHECK(classify_profile({0.0, 0.5, 0.8}) == ProfileClass::PoolingLowGroup);
  CHECK(classify_profile({0.5, 0.5, 0.8}) == ProfileClass::PoolingLowGroup);
  CHECK(classify_profile({0.2, 0.5, 1.0}) == ProfileClass::PoolingHighGroup);
  CHECK(classify_profile({0.2, 0.5, 0.5}) == ProfileClass::PoolingHighGroup);
  CHECK(classify_profile({0.0, 0.0, 0.0}) == ProfileClass::AllInOneGroup);
  CHECK(classify_profile({0.2, 1.0, 1.0}) == ProfileClass::AllInOneGroup);
  CHECK(classify_profile({0.6, 0.5, 0.8}) == ProfileClass::Invalid);
}

TEST_CASE("in-group reputation gaps under the uniform density") {
  const TypeDistribution uni = TypeDistribution::uniform();
  // Both halves of the high gap are segment midpoints: the gap reduces to
  // (1 - group_cutoff) / 2 and is independent of the action cutoff.
  CHECK(inside_reputation_gap(uni, {0.0, 0.4, 0.7}, Group::High) ==
        doctest::Approx(0.3).epsilon(1e-13));
  CHECK(inside_reputation_gap(uni, {0.2, 0.4, 0.9}, Group::High) ==
        doctest::Approx(0.3).epsilon(1e-13));
  CHECK(inside_reputation_gap(uni, {0.2, 0.4, 0.7}, Group::Low) ==
        doctest::Approx(0.2).epsilon(1e-13));

  const CutoffProfile star = baseline_equilibrium();
  CHECK(inside_reputation_gap(uni, star, Group::High) ==
        doctest::Approx(0.0533).epsilon(2e-3));
  CHECK(inside_reputation_gap(uni, star, Group::Low) ==
        doctest::Approx(0.4467).epsilon(1e-3));

  // Collapsed outer segment takes the boundary value; the low gap is then
  // the low-striver midpoint itself.
  CHECK(inside_reputation_gap(uni, {0.0, 0.5, 0.8}, Group::Low) ==
        doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("in-group reputation gap off the uniform density") {
  const TypeDistribution dec = TypeDistribution::linear_decreasing();
  const double gap = inside_reputation_gap(dec, {0.0, 0.4, 0.7}, Group::High);
  CHECK(gap > 0.0);
  CHECK(gap < 0.6);
}

TEST_CASE("group reputation gap") {
  const TypeDistribution uni = TypeDistribution::uniform();
  CHECK(group_reputation_gap(uni, 0.3) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(group_reputation_gap(uni, 0.8934) ==
        doctest::Approx(0.5).epsilon(1e-13));

  // Non-decreasing in the cutoff for a non-increasing density.
  const TypeDistribution dec = TypeDistribution::linear_decreasing();
  double prev = -1e300;
  for (int i = 1; i < 10; ++i) {
    const double cut = static_cast<double>(i) / 10.0;
    const double g = group_reputation_gap(dec, cut);
    CHECK(g >= prev - 1e-12);
    prev = g;
  }
}

TEST_CASE("cross-cutoff reputation gap") {
  const TypeDistribution uni = TypeDistribution::uniform();
  CHECK(cross_cutoff_reputation_gap(uni, {0.2, 0.5, 0.8}) ==
        doctest::Approx(0.3).epsilon(1e-13));
  const CutoffProfile star = baseline_equilibrium();
  CHECK(cross_cutoff_reputation_gap(uni, star) ==
        doctest::Approx(0.168).epsilon(1e-2));
  // Symmetric collapse: the gap shrinks like the segment width.
  for (double eps : {1e-3, 1e-5}) {
    CHECK(cross_cutoff_reputation_gap(uni, {0.5 - eps, 0.5, 0.5 + eps}) ==
          doctest::Approx(eps).epsilon(1e-9));
  }
}

TEST_CASE("residuals vanish at the baseline equilibrium") {
  const ModelSpec spec = baseline();
  const ResidualVector r = equilibrium_residual(spec, baseline_equilibrium());
  CHECK(r.max_norm() <= 1e-12);
}

TEST_CASE("residuals at a hand-evaluated off-equilibrium profile") {
  const ModelSpec spec = baseline();
  // Profile (low 0.5, group 0.7, high 0.9): effort margin in the high group
  // is 1.0*(0.1) - 0.4*(1-0.7)/2 = 0.04.
  const ResidualVector r = equilibrium_residual(spec, {0.5, 0.7, 0.9});
  CHECK(std::isfinite(r.action_low));
  CHECK(std::isfinite(r.group));
  CHECK(r.action_high == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("group residual reduces to the reputational term when the wedges "
          "vanish") {
  ModelSpec spec = baseline();
  spec.mu_outside = spec.mu_inside;  // kills the outside-inside asymmetry
  // Tabulated costs with d(1,h) = d(0,l) = 1-t (zero cross wedge) and
  // strictly decreasing gaps.
  TabulatedActionCost tab;
  tab.grid = {0.0, 1.0};
  const int hi = static_cast<int>(Group::High);
  const int lo = static_cast<int>(Group::Low);
  tab.values[hi][1] = {1.0, 0.0};
  tab.values[hi][0] = {0.5, 0.0};
  tab.values[lo][1] = {1.8, 0.0};
  tab.values[lo][0] = {1.0, 0.0};
  spec.action_cost = tab;
  spec.group_cost = LinearGapGroupCost{0.0, 0.0};

  const CutoffProfile p{0.3, 0.55, 0.85};
  CHECK(spec.cross_cost_gap(0.55) == 0.0);
  const ResidualVector r = equilibrium_residual(spec, p);
  const double expected =
      spec.mu_inside * cross_cutoff_reputation_gap(spec.dist, p);
  CHECK(r.group == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("jacobian entries at the baseline equilibrium") {
  const ModelSpec spec = baseline();
  const CutoffProfile star = baseline_equilibrium();
  const Matrix3 j = residual_jacobian(spec, star);

  // Uniform density: in-group gaps do not move with the own action cutoff,
  // so the action diagonal is the bare cost-gap slope.
  CHECK(j[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(j[1][1] == doctest::Approx(-0.5).epsilon(1e-12));
  // Structural zeros are exact.
  CHECK(j[0][1] == 0.0);
  CHECK(j[1][0] == 0.0);
  // Both cross entries tied to the cutoff-straddling segments equal
  // mu_inside / 2 under the uniform density.
  CHECK(j[2][0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(j[0][2] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(j[2][2] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(det3(j) == doctest::Approx(0.61).epsilon(1e-12));

  // Full sign pattern of a stable interior equilibrium.
  CHECK(j[0][0] < 0.0);
  CHECK(j[0][2] > 0.0);
  CHECK(j[1][1] < 0.0);
  CHECK(j[1][2] < 0.0);
  CHECK(j[2][0] > 0.0);
  CHECK(j[2][1] < 0.0);
  CHECK(j[2][2] > 0.0);
}

TEST_CASE("jacobian agrees with central differences of the residuals") {
  const std::vector<TypeDistribution> dists = {
      TypeDistribution::uniform(),
      TypeDistribution::linear_decreasing(),
      TypeDistribution::piecewise_linear({0.0, 0.5, 1.0}, {0.5, 1.5, 0.5})};
  for (const TypeDistribution& dist : dists) {
    ModelSpec spec = baseline();
    spec.dist = dist;
    for (const CutoffProfile& p :
         {CutoffProfile{0.3, 0.55, 0.8}, baseline_equilibrium()}) {
      const Matrix3 j = residual_jacobian(spec, p);
      const Matrix3 fd = jacobian_by_differences(spec, p, 1e-6);
      for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
          const double diff = std::abs(j[row][col] - fd[row][col]);
          const bool ok =
              diff <= 1e-8 || diff <= 1e-5 * std::abs(j[row][col]);
          CHECK_MESSAGE(ok, "entry (", row, ",", col, "): analytic ",
                        j[row][col], " vs fd ", fd[row][col]);
        }
      }
    }
  }
}

TEST_CASE("gap derivatives have the expected signs, by central differences") {
  const std::vector<TypeDistribution> dists = {
      TypeDistribution::uniform(), TypeDistribution::linear_decreasing(),
      TypeDistribution::linear_increasing()};
  const double h = 1e-6;
  for (const TypeDistribution& dist : dists) {
    for (const CutoffProfile& p :
         {CutoffProfile{0.2, 0.5, 0.8}, CutoffProfile{0.4, 0.6, 0.9}}) {
      auto phi_h = [&](double c) {
        return dist.truncated_mean(p.action_cutoff_high, 1.0) -
               dist.truncated_mean(c, p.action_cutoff_high);
      };
      auto phi_l = [&](double c) {
        return dist.truncated_mean(p.action_cutoff_low, c) -
               dist.truncated_mean(0.0, p.action_cutoff_low);
      };
      const double cut = p.group_cutoff;
      CHECK((phi_h(cut + h) - phi_h(cut - h)) / (2 * h) < 0.0);
      CHECK((phi_l(cut + h) - phi_l(cut - h)) / (2 * h) > 0.0);
      // Analytic counterparts share the signs.
      CHECK(inside_reputation_gap_d_group(dist, p, Group::High) < 0.0);
      CHECK(inside_reputation_gap_d_group(dist, p, Group::Low) > 0.0);
      CHECK(cross_cutoff_gap_d_high(dist, p) > 0.0);
      CHECK(cross_cutoff_gap_d_low(dist, p) < 0.0);
    }
  }
}

TEST_CASE("group-indifference identity holds in the reduced arrangement") {
  const ModelSpec spec = baseline();
  const CutoffProfile star = baseline_equilibrium();
  // mu_o * group gap + value gap - group cost gap vanishes at equilibrium.
  CHECK(std::abs(group_indifference_residual(spec, star)) <= 1e-8);
  // And is the same number as the group residual, identically.
  const ResidualVector r = equilibrium_residual(spec, star);
  CHECK(group_indifference_residual(spec, star) ==
        doctest::Approx(r.group).epsilon(1e-14));
}

TEST_CASE("direct and reduced group residuals differ by the predicted offset") {
  ModelSpec spec = baseline();
  spec.benefits.idle_high = 0.02;
  spec.benefits.effort_low = 0.01;
  spec.policy = {0.01, 0.005, 0.002};
  for (const CutoffProfile& p :
       {baseline_equilibrium(), CutoffProfile{0.55, 0.8, 0.95}}) {
    // Valid wherever the marginal type idles in high and strives in low.
    const auto high_choice = stage_value(spec, p, Group::High, p.group_cutoff);
    const auto low_choice = stage_value(spec, p, Group::Low, p.group_cutoff);
    REQUIRE(high_choice.action == ActionChoice::Idle);
    REQUIRE(low_choice.action == ActionChoice::Effort);
    const double direct = group_indifference_residual_direct(spec, p);
    const double reduced = group_indifference_residual(spec, p);
    CHECK(direct - reduced ==
          doctest::Approx(value_gap_form_offset(spec, p.group_cutoff))
              .epsilon(1e-12));
  }
}

TEST_CASE("reduced value gap drops to the cost wedge when status is muted") {
  ModelSpec spec = baseline();
  spec.mu_inside = 0.0;
  const CutoffProfile star = baseline_equilibrium();
  CHECK(reduced_value_gap(spec, star) ==
        doctest::Approx(-spec.cross_cost_gap(star.group_cutoff))
            .epsilon(1e-14));
}

TEST_CASE("continuation value gap for a type above both action cutoffs") {
  ModelSpec spec = baseline();
  spec.benefits.effort_high = 0.3;
  spec.benefits.effort_low = 0.1;
  const CutoffProfile star = baseline_equilibrium();
  const double theta = 0.995;
  REQUIRE(theta > star.action_cutoff_high);
  // Direct evaluation: effort in both groups, so benefit gap, cost gap, and
  // the striver-segment reputation difference.
  const TypeDistribution& dist = spec.dist;
  const double striver_high = dist.truncated_mean(star.action_cutoff_high, 1.0);
  const double striver_low =
      dist.truncated_mean(star.action_cutoff_low, star.group_cutoff);
  const double group_high = dist.truncated_mean(star.group_cutoff, 1.0);
  const double group_low = dist.truncated_mean(0.0, star.group_cutoff);
  const double expected =
      (0.3 - 0.1) -
      (spec.action_cost_raw(ActionChoice::Effort, Group::High, theta) -
       spec.action_cost_raw(ActionChoice::Effort, Group::Low, theta)) +
      0.4 * ((striver_high - group_high) - (striver_low - group_low));
  CHECK(continuation_value_gap(spec, star, theta) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("residuals are homogeneous of degree one in the payoff scale") {
  ModelSpec spec = baseline();
  spec.benefits = {0.05, 0.01, 0.02, 0.0};
  spec.policy = {0.01, -0.005, 0.02};
  ModelSpec doubled = spec;
  doubled.action_cost = LinearGapActionCost{2.0, 1.0};
  doubled.group_cost = LinearGapGroupCost{0.2, 0.0};
  doubled.benefits = {0.1, 0.02, 0.04, 0.0};
  doubled.mu_inside = 0.8;
  doubled.mu_outside = 1.0;
  doubled.policy = {0.02, -0.01, 0.04};
  for (const CutoffProfile& p :
       {CutoffProfile{0.3, 0.55, 0.8}, CutoffProfile{0.6, 0.85, 0.97}}) {
    const ResidualVector r = equilibrium_residual(spec, p);
    const ResidualVector r2 = equilibrium_residual(doubled, p);
    CHECK(r2.action_high == doctest::Approx(2.0 * r.action_high).epsilon(1e-13));
    CHECK(r2.action_low == doctest::Approx(2.0 * r.action_low).epsilon(1e-13));
    CHECK(r2.group == doctest::Approx(2.0 * r.group).epsilon(1e-13));
  }
}

TEST_CASE("per-group sensitivity override reduces to the common case when "
          "equal") {
  ModelSpec spec = baseline();
  ModelSpec with_override = spec;
  with_override.mu_inside_high = 0.4;
  with_override.mu_inside_low = 0.4;
  const CutoffProfile p{0.3, 0.6, 0.9};
  const ResidualVector a = equilibrium_residual(spec, p);
  const ResidualVector b = equilibrium_residual(with_override, p);
  CHECK(a.action_high == b.action_high);
  CHECK(a.action_low == b.action_low);
  CHECK(a.group == doctest::Approx(b.group).epsilon(1e-15));
}

TEST_CASE("degenerate inner segments raise errors") {
  const ModelSpec spec = baseline();
  CHECK_THROWS_AS(
      (void)equilibrium_residual(spec, {0.5, 0.5, 0.9}),
      DegenerateIntervalError);
  CHECK_THROWS_AS(
      (void)inside_reputation_gap(spec.dist, {0.2, 0.9, 0.9 + 1e-12},
                                  Group::High),
      DegenerateIntervalError);
}
