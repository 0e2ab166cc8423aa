#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "zsa/errors.hpp"
#include "zsa/levelset.hpp"

using namespace zsa;

namespace {

const double kPi = std::numbers::pi;
const double kLog2 = std::log(2.0);

double b3(double x0) { return std::log(1 + std::pow(3.0, x0)) / kLog2; }
double b4(double x0) { return std::log(1 + 2 * std::pow(3.0, x0 - 0.5)) / std::log(4.0); }

// min over u of |1 + e^{iu} + e^{2iu}| on nested dense grids, each one
// spanning two cells of the previous grid around its best point.
double dense_grid_min_n4() {
  auto f = [](double u) { return std::abs(Complex(1, 0) + std::polar(1.0, u) + std::polar(1.0, 2 * u)); };
  double lo = 0.0, hi = 2 * kPi, best = 1e300, best_u = 0.0;
  const int points = 100000;
  for (int level = 0; level < 4; ++level) {
    const double h = (hi - lo) / points;
    for (int i = 0; i <= points; ++i) {
      const double u = lo + h * i;
      const double v = f(u);
      if (v < best) best = v, best_u = u;
    }
    lo = best_u - h;
    hi = best_u + h;
  }
  return best;
}

}  // namespace

TEST_CASE("profile of G_3^*") {
  for (double x : {-1.0, 0.0, 0.5}) {
    const auto p = modulus_profile(3, x);
    CHECK(std::abs(p.m_hat - std::abs(1 - std::pow(2.0, x))) < 1e-8);
    CHECK(p.M == 1 + std::pow(2.0, x));
  }
  const auto p0 = modulus_profile(3, 0.0);
  CHECK(p0.m_hat < 1e-8);
  CHECK(p0.M == 2.0);
}

TEST_CASE("profile of G_4^* at x = 0") {
  const auto p = modulus_profile(4, 0.0);
  CHECK(std::abs(p.m_hat - dense_grid_min_n4()) < 1e-6);
  CHECK(p.M == 3.0);
}

TEST_CASE("profile invariants") {
  double prev_M = -1.0;
  for (double x = -2.0; x <= 1.5; x += 0.25) {
    const auto p = modulus_profile(6, x);
    CHECK(p.m_hat >= 0.0);
    CHECK(p.m_hat <= p.M);
    CHECK(p.M == make_g_star(6).real_value(x));
    CHECK(p.M > prev_M);
    prev_M = p.M;
  }
  ProfileOptions tiny;
  tiny.Y = 1.0;
  CHECK_THROWS_AS(modulus_profile(4, 0.0, tiny), PreconditionError);
}

TEST_CASE("upper extremes") {
  CHECK(upper_extreme(3, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(upper_extreme(3, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(upper_extreme(4, 0.0) - b4(0.0)) < 1e-8);
  CHECK(b4(0.0) == doctest::Approx(0.5538).epsilon(1e-4));
  for (double x0 : {-1.0, 0.3, 0.8}) CHECK(std::abs(upper_extreme(4, x0) - b4(x0)) < 1e-8);
}

TEST_CASE("lower extremes") {
  CHECK(lower_extreme(3, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(lower_extreme(4, 1.0)) < 1e-10);
  CHECK(lower_extreme(3, -1.0) == doctest::Approx(std::log(2.0 / 3.0) / kLog2).epsilon(1e-12));
  CHECK_THROWS_AS(lower_extreme(3, 0.0), DomainError);
}

TEST_CASE("feasibility is consistent with the extremes") {
  const double x0 = 0.5;
  const double level = level_for(5, x0);
  const double hi = upper_extreme(5, x0);
  const double lo = lower_extreme(5, x0);
  CHECK(lo < hi);
  for (double x = lo - 0.5; x <= hi + 0.5; x += 0.05) {
    const bool inside = x >= lo + 1e-6 && x <= hi - 1e-6;
    const bool outside = x < lo - 1e-6 || x > hi + 1e-6;
    const double gap = feasibility_gap(modulus_profile(5, x), level);
    if (inside) CHECK(gap <= 1e-9);
    if (outside) CHECK(gap > 0.0);
  }
}

TEST_CASE("n = 3, x0 = -1: closed loops around the zeros") {
  const auto r = trace_level_curve(3, -1.0, make_rectangle(-3, 2, 0, 20));
  REQUIRE(!r.components.empty());
  int loops = 0;
  for (const auto& c : r.components) {
    CHECK(c.kind == ComponentClass::ClosedLoop);
    CHECK(c.winding == 1);
    CHECK(c.zeros_inside == 1);
    ++loops;
  }
  // Zeros i pi (2k+1) / log 2 with imaginary part in (0, 20): k = 0, 1.
  CHECK(loops == 2);
  CHECK(r.b_minus.has_value());
  CHECK(r.b_plus == doctest::Approx(b3(-1.0)).epsilon(1e-10));
}

TEST_CASE("n = 3, x0 = 0: asymptotes") {
  const auto r = trace_level_curve(3, 0.0);
  REQUIRE(!r.components.empty());
  for (const auto& c : r.components) {
    CHECK(c.kind == ComponentClass::OpenWithAsymptote);
    for (double y : c.asymptotes) {
      const double k = (y * 2 * kLog2 / kPi - 1) / 2;
      CHECK(std::abs(y - (2 * std::round(k) + 1) * kPi / (2 * kLog2)) < 0.05);
    }
  }
}

TEST_CASE("n = 4, x0 = 1: single open curve") {
  const auto r = trace_level_curve(4, 1.0, make_rectangle(-2, 2, -20, 20));
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].kind == ComponentClass::SingleOpenCurve);
  REQUIRE(r.real_axis_hits.size() == 1);
  CHECK(std::abs(r.real_axis_hits[0]) < 1e-10);
  REQUIRE(r.b_minus.has_value());
  CHECK(std::abs(*r.b_minus - r.real_axis_hits[0]) < 1e-9);
}

TEST_CASE("traced vertices lie on the level curve and are mirror-symmetric") {
  const auto r = trace_level_curve(5, 0.5, make_rectangle(-1.5, 1.5, -12, 12));
  const auto g = make_g_star(5);
  std::size_t count = 0;
  for (const auto& c : r.components) {
    for (Complex v : c.vertices) {
      CHECK(std::abs(std::abs(g(v)) - r.level) <= 1e-2 * r.level);
      ++count;
    }
  }
  CHECK(count > 0);
  // Every vertex has a conjugate partner on some component, up to grid size.
  for (const auto& c : r.components) {
    for (std::size_t i = 0; i < c.vertices.size(); i += 37) {
      const Complex w = std::conj(c.vertices[i]);
      double best = 1e300;
      for (const auto& d : r.components) {
        for (Complex u : d.vertices) best = std::min(best, std::abs(u - w));
      }
      CHECK(best <= 2 * r.grid);
    }
  }
}

TEST_CASE("monotonicity of the upper extreme") {
  const auto v3 = extreme_monotonicity(3, {-2, -1, 0, 1});
  CHECK(v3.increasing);
  REQUIRE(v3.values.size() == 4);
  CHECK(v3.values[0] == doctest::Approx(std::log(1 + 1.0 / 9) / kLog2).epsilon(1e-10));
  CHECK(v3.values[1] == doctest::Approx(std::log(1 + 1.0 / 3) / kLog2).epsilon(1e-10));
  CHECK(v3.values[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(v3.values[3] == doctest::Approx(2.0).epsilon(1e-10));

  const auto v4 = extreme_monotonicity(4, {-1, 0, 0.5});
  CHECK(v4.increasing);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(v4.values[i] - b4(std::vector{-1.0, 0.0, 0.5}[i])) < 1e-8);

  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(-2.0 + 3.0 * i / 19);
  CHECK(extreme_monotonicity(6, grid).increasing);
}

TEST_CASE("dominance of b_n^*") {
  for (int n : {3, 4}) {
    const auto d = bstar_dominance(n, {-1, 0, 1});
    CHECK(d.holds);
    CHECK(std::abs(d.b_star) < 1e-12);
  }
  const auto d5 = bstar_dominance(5, {-1, 0, 1});
  CHECK(d5.holds);
  CHECK(d5.b_star > 0.0);
}
