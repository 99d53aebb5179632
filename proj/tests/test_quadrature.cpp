#include <anharmonic/nelder_mead.hpp>
#include <anharmonic/quadrature.hpp>

#include <doctest.h>

#include <cmath>

using namespace anharmonic;

TEST_CASE("exp-sinh grid integrates a Gaussian and an odd-state density") {
  const auto g = exp_sinh_grid<double>(1.0, 10.0, 400);
  double s0 = 0, s2 = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    s0 += g.w[i] * std::exp(-g.x[i] * g.x[i]);
    s2 += g.w[i] * g.x[i] * g.x[i] * std::exp(-g.x[i] * g.x[i]);
  }
  CHECK(s0 == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(std::sqrt(M_PI) / 4).epsilon(1e-14));
}

TEST_CASE("exp-sinh grid handles a narrow core") {
  // width 0.05 with the map scale left at 1
  const auto g = exp_sinh_grid<double>(1.0, 1.0, 400);
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::exp(-400 * g.x[i] * g.x[i]);
  CHECK(s == doctest::Approx(std::sqrt(M_PI) / 40).epsilon(1e-13));
}

TEST_CASE("panel grid: cumulative integrals from both ends") {
  const PanelGrid<double> pg({0.0, 1.3, 3.0}, {1.3}, 0.5);
  const auto& x = pg.x();
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::cos(x[i]);
  CHECK(pg.integrate(f) == doctest::Approx(std::sin(3.0)).epsilon(1e-15));
  const auto left = pg.cumulative_from_left(f);
  const auto right = pg.cumulative_from_right(f, 0.25);
  double worst_l = 0, worst_r = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst_l = std::max(worst_l, std::abs(left[i] - std::sin(x[i])));
    worst_r = std::max(worst_r, std::abs(right[i] - (std::sin(3.0) - std::sin(x[i]) + 0.25)));
  }
  CHECK(worst_l < 1e-14);
  CHECK(worst_r < 1e-14);
  CHECK(pg.integral_left_of(f, 1.3) == doctest::Approx(std::sin(1.3)).epsilon(1e-15));
}

TEST_CASE("panel grid: collars around a centre are symmetric") {
  const double c = 0.9;
  const PanelGrid<double> pg({0.0, c, 2.0}, {c}, 0.25);
  // Points mirror each other across the centre inside the collar.
  const auto& x = pg.x();
  std::vector<double> below, above;
  for (double v : x) {
    if (v < c && v > c - 0.25) below.push_back(c - v);
    if (v > c && v < c + 0.25) above.push_back(v - c);
  }
  REQUIRE(below.size() == above.size());
  std::sort(below.begin(), below.end());
  std::sort(above.begin(), above.end());
  for (std::size_t i = 0; i < below.size(); ++i) CHECK(below[i] == doctest::Approx(above[i]).epsilon(1e-13));

  // Principal value of 1/(x - c) over the collar pair is zero.
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = (std::abs(x[i] - c) < 0.25) ? 1.0 / (x[i] - c) : 0.0;
  CHECK(std::abs(pg.integrate(f)) < 1e-12);
}

TEST_CASE("quadrature settings validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.points = 62;
  CHECK_THROWS_AS(q.validate(), ValidationError);
  q.points = 400;
  q.rel_tol = 1e-17;
  CHECK_THROWS_AS(q.validate(), ValidationError);
  q.rel_tol = 1e-6;
  CHECK_THROWS_AS(q.validate(), ValidationError);
}

TEST_CASE("simplex finds the minimum of a tilted valley") {
  auto f = [](const std::array<double, 2>& v) {
    const double a = v[0] - 1.5, b = v[1] + 0.5;
    return 3.0 + a * a + 10 * (b - 0.3 * a) * (b - 0.3 * a);
  };
  SimplexOptions opt;
  const auto r = minimize_with_restarts(f, {0.0, 0.0}, {0.1, 0.1}, opt);
  CHECK(r.f == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(-0.5).epsilon(1e-5));
}

TEST_CASE("simplex restarts are reproducible from the seed") {
  auto f = [](const std::array<double, 2>& v) { return std::cos(3 * v[0]) + v[0] * v[0] / 4 + (v[1] - 2) * (v[1] - 2); };
  SimplexOptions opt;
  const auto a = minimize_with_restarts(f, {1.0, 1.0}, {0.1, 0.1}, opt);
  const auto b = minimize_with_restarts(f, {1.0, 1.0}, {0.1, 0.1}, opt);
  CHECK(a.x == b.x);
  CHECK(a.f == b.f);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("simplex reports a stall") {
  SimplexOptions opt;
  opt.max_iterations = 3;
  opt.restarts = 1;
  auto f = [](const std::array<double, 2>& v) { return v[0] * v[0] + v[1] * v[1]; };
  CHECK_THROWS_AS(nelder_mead_2d(f, {5.0, 5.0}, {0.1, 0.1}, opt), OptimizerStalled);
}
