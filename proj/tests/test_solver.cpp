#include <cmath>
#include <random>

#include "doctest.h"

#include "common.hpp"
#include "ivtree/error.hpp"
#include "ivtree/recurrence.hpp"
#include "ivtree/solver.hpp"

using namespace ivtree;

namespace {

ModelParams random_params(std::mt19937_64& rng) {
  return make_params(testing::uniform(rng, -10, 10), testing::uniform(rng, -10, 10), testing::uniform(rng, 1, 50),
                     testing::uniform_int(rng, 2, 20));
}

// Sign changes of log map(x) - log(slope x) on a dense log grid.
int brute_intersections(const ModelParams& p, double slope) {
  const auto [lo, hi] = fixed_point_bracket(p, 10.0);
  const double ls = std::log(slope);
  const int n = 200000;
  int changes = 0;
  double prev = reduced_log_residual(lo - ls, p) - ls;
  for (int i = 1; i <= n; ++i) {
    const double l = lo - ls + (hi - lo) * i / n;
    const double cur = reduced_log_residual(l, p) - ls;
    if ((cur > 0) != (prev > 0)) ++changes;
    prev = cur;
  }
  return changes;
}

}  // namespace

TEST_CASE("even reference fixed points") {
  const auto r = find_fixed_points(testing::even_example());
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].x == doctest::Approx(0.106457).epsilon(1e-4));
  CHECK(r.points[1].x == doctest::Approx(2.13383).epsilon(1e-4));
  CHECK(r.points[2].x == doctest::Approx(8.30085).epsilon(1e-4));
  CHECK(r.points[0].stability == Stability::Stable);
  CHECK(r.points[1].stability == Stability::Unstable);
  CHECK(r.points[2].stability == Stability::Stable);
  CHECK_FALSE(r.grid_flagged);
}

TEST_CASE("degenerate and single-root cases") {
  const auto flat = find_fixed_points(make_params(-2.0, 0.0, 1.0, 6));
  REQUIRE(flat.points.size() == 1);
  CHECK(flat.points[0].x == 1.0);
  CHECK(find_fixed_points(testing::odd_example(7)).points.size() == 1);
  CHECK(find_fixed_points(make_params(0, 0, 1, 2)).points.size() == 1);
}

TEST_CASE("classify_stability") {
  const auto p = testing::even_example();
  // The printed six-digit values miss the default 1e-8 residual, so a looser one is passed.
  CHECK(classify_stability(8.30085, p, 1e-5).stability == Stability::Stable);
  CHECK(classify_stability(2.13383, p, 1e-5).stability == Stability::Unstable);
  CHECK(classify_stability(0.106457, p, 1e-5).stability == Stability::Stable);
  try {
    classify_stability(2.13383, p);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAFixedPoint);
  }
  try {
    classify_stability(1.0, p);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAFixedPoint);
  }
  const auto flat = classify_stability(1.0, make_params(1.0, 0.0, 1.0, 4));
  CHECK(flat.stability == Stability::Stable);
  CHECK(flat.derivative == 0.0);
  CHECK_THROWS_AS(classify_stability(-1.0, p), Error);
  CHECK(to_string(Stability::Neutral) == "neutral");
}

TEST_CASE("critical points") {
  const auto p = testing::even_example();
  const auto c = critical_points(p);
  REQUIRE(c.x_lo.has_value());
  REQUIRE(c.x_hi.has_value());
  CHECK(*c.x_lo < 2.13383);
  CHECK(2.13383 < *c.x_hi);
  for (double x : {*c.x_lo, *c.x_hi}) CHECK(elasticity(std::log(x), p) == doctest::Approx(1.0).epsilon(1e-10));

  const auto w = derived_weights(p);
  const double k = p.k;
  const double B = w.d * w.d * k - 1 - w.d * w.d - k;
  const double disc = B * B - 4 * w.d * w.d;
  const double y_lo = (B - std::sqrt(disc)) / (2 * w.c * w.d);
  CHECK(*c.x_lo == doctest::Approx(std::sqrt(y_lo)).epsilon(1e-10));

  CHECK_FALSE(critical_points(make_params(0, 0, 1, 4)).x_lo.has_value());
  CHECK(critical_points(make_params(0, 0, 1, 4)).threshold_d == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(critical_points(make_params(0, 0, 1, 5)).threshold_d == doctest::Approx(6.0 / 4.0));

  const auto q = testing::odd_example();
  const auto co = critical_points(q);
  REQUIRE(co.x_lo.has_value());
  for (double x : {*co.x_lo, *co.x_hi}) CHECK(elasticity(std::log(x), q) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("no critical pair below the even threshold, and then a single root") {
  std::mt19937_64 rng(17);
  int below = 0;
  for (int t = 0; t < 2000 && below < 300; ++t) {
    const int k = 2 * testing::uniform_int(rng, 1, 10);
    const auto p = make_params(testing::uniform(rng, -10, 10), testing::uniform(rng, -3, 3), testing::uniform(rng, 1, 50), k);
    const auto c = critical_points(p);
    if (std::exp(p.log_d()) >= c.threshold_d) continue;
    ++below;
    CHECK_FALSE(c.x_lo.has_value());
    CHECK(find_fixed_points(p).points.size() == 1);
  }
  CHECK(below >= 300);
}

TEST_CASE("eta thresholds and predicted counts") {
  const auto c10 = eta_thresholds(testing::even_example(10));
  REQUIRE(c10.eta_lo.has_value());
  CHECK(*c10.eta_lo < 1.0);
  CHECK(1.0 < *c10.eta_hi);
  const auto c6 = eta_thresholds(testing::even_example(6));
  if (c6.eta_lo) CHECK((1.0 <= *c6.eta_lo || 1.0 >= *c6.eta_hi));
  CHECK_FALSE(eta_thresholds(make_params(1, 0.1, 10, 4)).eta_lo.has_value());

  CHECK(predicted_solution_count(testing::even_example(10)) == 3);
  CHECK(predicted_solution_count(testing::even_example(6)) == 1);
  CHECK(predicted_solution_count(make_params(-5.8, -3.25, 14.358, 10)) == 1);
  CHECK(predicted_solution_count(testing::odd_example(9)) == 3);
  CHECK(predicted_solution_count(testing::odd_example(7)) == 1);
}

TEST_CASE("intersection counts with lines of any slope match a dense scan") {
  std::mt19937_64 rng(23);
  int three = 0;
  for (int t = 0; t < 60; ++t) {
    const auto p = random_params(rng);
    const auto c = eta_thresholds(p);
    double slope = std::exp(testing::uniform(rng, -2, 2));
    if (c.eta_lo && t % 2 == 0) slope = std::sqrt(*c.eta_lo * *c.eta_hi);
    const int predicted = predicted_intersection_count(p, slope);
    if (predicted == 3) ++three;
    CHECK(brute_intersections(p, slope) == predicted);
  }
  CHECK(three > 5);
}

TEST_CASE("inflection point") {
  const auto p = testing::even_example();
  const auto xs = inflection_point_even(p);
  REQUIRE(xs.has_value());
  const auto w = derived_weights(p);
  const double d = w.d, k = p.k;
  const double printed = std::sqrt((-1 - d * d - k + d * d * k + std::sqrt(12 * d * d + std::pow(1 + d * d + k - d * d * k, 2))) / (6 * w.c * d));
  CHECK(*xs == doctest::Approx(printed).epsilon(1e-12));
  const double delta = *xs * 1e-3;
  CHECK(reduced_map_derivatives(*xs - delta, p).second * reduced_map_derivatives(*xs + delta, p).second < 0);

  // x* scales as c^{-1/2} at fixed d and k: change J with Jp/T held fixed.
  const auto p1 = make_params(-1.0, 2.0, 4.0, 6);
  const auto p2 = make_params(1.0, 2.0, 4.0, 6);
  const double ratio = *inflection_point_even(p1) / *inflection_point_even(p2);
  CHECK(ratio == doctest::Approx(std::sqrt(std::exp(p2.log_c() - p1.log_c()))).epsilon(1e-12));

  CHECK_FALSE(inflection_point_even(make_params(1, 0, 1, 4)).has_value());
  CHECK_THROWS_AS(inflection_point_even(testing::odd_example()), Error);
}

TEST_CASE("near tangency at k = 8") {
  const auto p = testing::even_example(8);
  const auto r = find_fixed_points(p);
  const auto gap = tangency_gap(p);
  REQUIRE(gap.has_value());
  CHECK(*gap < 5e-2);
  CHECK(r.points.size() == 1);
  CHECK_FALSE(tangency_gap(make_params(0, 0, 1, 4)).has_value());
}

TEST_CASE("bracket contains every root") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_params(rng);
    const auto [lo, hi] = fixed_point_bracket(p, 10.0);
    for (const auto& fp : find_fixed_points(p).points) {
      CHECK(std::log(fp.x) > lo);
      CHECK(std::log(fp.x) < hi);
    }
  }
}

TEST_CASE("solver properties over random parameters") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    const auto p = random_params(rng);
    const auto r = find_fixed_points(p);
    const auto& pts = r.points;
    CHECK(!pts.empty());
    CHECK(pts.size() <= 3);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(reduced_map(pts[i].x, p) - pts[i].x) / pts[i].x < 1e-10);
      if (i > 0) CHECK(pts[i - 1].x < pts[i].x);
    }
    if (pts.size() == 3) {
      CHECK(pts[0].stability == Stability::Stable);
      CHECK(pts[1].stability == Stability::Unstable);
      CHECK(pts[2].stability == Stability::Stable);
    }
    if (p.log_d() < 0) CHECK(pts.size() == 1);
  }
}

TEST_CASE("solver options are validated") {
  SolverOptions bad;
  bad.grid_points = 1;
  CHECK_THROWS_AS(find_fixed_points(testing::even_example(), bad), Error);
  bad = SolverOptions{};
  bad.margin = 0.5;
  CHECK_THROWS_AS(find_fixed_points(testing::even_example(), bad), Error);
}

TEST_CASE("a coarse grid still finds the reference roots") {
  SolverOptions coarse;
  coarse.grid_points = 16;
  CHECK(find_fixed_points(testing::even_example(), coarse).points.size() == 3);
  CHECK(find_fixed_points(testing::odd_example(), coarse).points.size() == 3);
}
