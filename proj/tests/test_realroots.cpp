#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "zsa/errors.hpp"
#include "zsa/realroots.hpp"

using namespace zsa;

namespace {

GeneralizedDirichletPoly poly_of(std::vector<std::pair<double, std::int64_t>> terms) {
  std::vector<std::pair<double, Rational>> t;
  for (auto [c, b] : terms) t.push_back({c, make_rational(b, 1)});
  return GeneralizedDirichletPoly(std::move(t), "test");
}

// Root of t^2 + t + (1 - c) = 0 in t = 2^x, i.e. 1 + 2^x + 4^x = c.
double quadratic_oracle(double c) {
  const double t = (-1.0 + std::sqrt(1.0 - 4.0 * (1.0 - c))) / 2.0;
  return std::log2(t);
}

// Brute-force real zero count: sign changes between nonzero residual
// samples on a fine grid.
int brute_zero_count(const RealExpEquation& eq, double lo, double hi, int points) {
  int count = 0;
  double prev = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double v = eq.residual(lo + (hi - lo) * i / points);
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0) != (prev > 0)) ++count;
    prev = v;
  }
  return count;
}

}  // namespace

TEST_CASE("sign changes") {
  CHECK(sign_changes({poly_of({{1, 1}, {1, 2}, {1, 4}}), 3.0}) == 1);
  CHECK(sign_changes({poly_of({{1, 1}, {2, 2}, {3, 3}}), 0.0}) == 0);
  CHECK(sign_changes({poly_of({{-1, 1}, {2, 2}, {-1, 3}}), 0.0}) == 2);
  CHECK_THROWS_AS(sign_changes({poly_of({{0, 1}, {0, 2}}), 0.0}), DomainError);
}

TEST_CASE("real zero crossings") {
  const auto g4s = poly_of({{1, 1}, {1, 2}, {1, 4}});
  const auto r1 = real_zero_crossings({g4s, 3.0}, {-10, 10});
  REQUIRE(r1.size() == 1);
  CHECK(std::abs(r1[0] - quadratic_oracle(3.0)) < 1e-12);
  CHECK(std::abs(r1[0]) < 1e-12);

  const auto g3s = poly_of({{1, 1}, {1, 2}});
  const auto r2 = real_zero_crossings({g3s, 3.0}, {-10, 10});
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(real_zero_crossings({g3s, 0.5}, {-10, 10}).empty());
}

TEST_CASE("unique root") {
  const auto g4s = poly_of({{1, 1}, {1, 2}, {1, 4}});
  CHECK(std::abs(solve_unique_root({g4s, 3.0}, {-1, 1})) < 1e-12);
  for (double c : {1.5, 2.0, 7.0, 40.0}) {
    CHECK(std::abs(solve_unique_root({g4s, c}, {-20, 20}) - quadratic_oracle(c)) < 1e-11);
  }

  // 1 + 2^x - 3^x = 0 at x = 1.
  CHECK(std::abs(solve_unique_root({poly_of({{1, 1}, {1, 2}, {-1, 3}}), 0.0}, {0, 3}) - 1.0) < 1e-12);

  // beta_4: 4^x = 1 + 2 * 3^(x - 1/2). Bracket certified by endpoint signs.
  auto beta_residual = [](double x) { return std::pow(4.0, x) - 1.0 - 2.0 * std::pow(3.0, x - 0.5); };
  REQUIRE(beta_residual(1.0) < 0.0);
  REQUIRE(beta_residual(1.5) > 0.0);
  const auto beta_poly = GeneralizedDirichletPoly(
      {{1.0, make_rational(4, 1)}, {-1.0, make_rational(1, 1)}, {-2.0 / std::sqrt(3.0), make_rational(3, 1)}}, "beta4");
  const double beta = solve_unique_root({beta_poly, 0.0}, {1.0, 1.5});
  CHECK(beta > 1.0);
  CHECK(beta < 1.5);
  CHECK(std::abs(beta_residual(beta)) < 1e-12);

  // W = 1, but the root near x = 996.6 lies beyond every widened bracket.
  CHECK_THROWS_AS(solve_unique_root({poly_of({{1, 1}, {-1e-300, 2}}), 0.0}, {0, 1}), BracketError);
  CHECK_THROWS_AS(solve_unique_root({poly_of({{-1, 1}, {2, 2}, {-1, 3}}), -0.1}, {-5, 5}), PreconditionError);
}

TEST_CASE("Polya-Szego rule on fixed equations") {
  const auto c41 = polya_szego_check({poly_of({{1, 1}, {1, 2}, {1, 4}}), 3.0});
  CHECK(c41.W == 1);
  CHECK(c41.N == 1);
  CHECK(c41.parity_ok);
  const auto pos = polya_szego_check({poly_of({{1, 1}, {1, 2}, {1, 3}}), 0.0});
  CHECK(pos.W == 0);
  CHECK(pos.N == 0);
  CHECK(pos.parity_ok);
}

TEST_CASE("Polya-Szego rule on random equations") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coeff(-5, 5);
  std::uniform_int_distribution<int> nterms(1, 5);
  std::vector<std::int64_t> all_bases{1, 2, 3, 4, 5, 6, 7, 8, 9};
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    std::shuffle(all_bases.begin(), all_bases.end(), rng);
    std::vector<std::pair<double, std::int64_t>> terms;
    const int k = nterms(rng) + 1;
    for (int j = 0; j < k; ++j) terms.push_back({coeff(rng), all_bases[j]});
    const RealExpEquation eq{poly_of(terms), 0.0};
    const auto r = polya_szego_check(eq);
    const Interval env = real_zero_envelope(eq);
    const int oracle = brute_zero_count(eq, env.lo, env.hi, 200000);
    if (r.N != oracle || r.W < r.N || (r.W - r.N) % 2 != 0) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("factorial inequalities") {
  const auto k3 = factorial_inequality_check(3);
  CHECK(k3.holds_weak);
  CHECK(k3.weak_margin == doctest::Approx(std::log(36.0 / 27.0)).epsilon(1e-12));
  const auto k6 = factorial_inequality_check(6);
  CHECK(k6.holds_sharp);
  CHECK(k6.sharp_margin == doctest::Approx(std::log(518400.0 / 194400.0)).epsilon(1e-12));
  const auto k300 = factorial_inequality_check(300);
  CHECK(k300.holds_weak);
  CHECK(k300.holds_sharp);
  CHECK(std::isfinite(k300.weak_margin));
  CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)).epsilon(1e-14));
}

TEST_CASE("drift constant") {
  const auto d5 = hadamard_drift_constant(5);
  CHECK(d5.A == doctest::Approx(std::log(24.0) / 4.0).epsilon(1e-14));
  CHECK(d5.margin == doctest::Approx(2 * std::log(24.0) / 4.0 - std::log(4.0)).epsilon(1e-12));
  CHECK(d5.margin > 0);
  CHECK(hadamard_drift_constant(6).margin > 0);
  // Direct sum of logs as the oracle for m = 10^4.
  double log_fact = 0.0;
  for (int j = 2; j <= 10000; ++j) log_fact += std::log(static_cast<double>(j));
  const auto d = hadamard_drift_constant(10000);
  CHECK(d.A == doctest::Approx((log_fact - std::log(9973.0)) / 9999.0).epsilon(1e-10));
  CHECK(d.margin > 0);
}

TEST_CASE("dominance interval contains all real zeros") {
  const RealExpEquation eq{poly_of({{2, 1}, {-3, 2}, {1, 5}}), 0.0};
  const Interval env = real_zero_envelope(eq);
  for (double r : real_zero_crossings(eq, {-60, 60})) CHECK(env.contains(r));
}
