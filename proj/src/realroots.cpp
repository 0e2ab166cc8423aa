#include "zsa/realroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zsa/errors.hpp"

namespace zsa {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Residual divided by exp(max_k x log mu_k): same sign and same roots, no
// overflow for large |x|.
double normalized_residual(const GeneralizedDirichletPoly& merged, double x) {
  double top = -std::numeric_limits<double>::infinity();
  for (const Term& t : merged.terms()) top = std::max(top, x * t.log_base);
  double s = 0.0;
  for (const Term& t : merged.terms()) s += t.coeff * std::exp(x * t.log_base - top);
  return s;
}

double bisect(const GeneralizedDirichletPoly& merged, double lo, double hi, int sign_lo, double tol) {
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = sign_of(normalized_residual(merged, mid));
    if (s == 0) return mid;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Crossings {
  std::vector<double> roots;
  bool touching = false;
};

Crossings scan_crossings(const GeneralizedDirichletPoly& merged, Interval interval, int grid_points) {
  Crossings out;
  const double h = interval.width() / (grid_points - 1);
  std::vector<double> values(static_cast<std::size_t>(grid_points));
  bool any_nonzero = false;
  for (int i = 0; i < grid_points; ++i) {
    values[i] = normalized_residual(merged, interval.lo + i * h);
    any_nonzero = any_nonzero || values[i] != 0.0;
  }
  if (!any_nonzero) throw DomainError("residual vanishes identically on the grid");

  int last_sign = 0;
  int last_index = -1;
  for (int i = 0; i < grid_points; ++i) {
    const int s = sign_of(values[i]);
    if (s == 0) {
      // An exact zero on the grid: a crossing if the neighbours disagree,
      // otherwise a touching point.
      const int prev = i > 0 ? sign_of(values[i - 1]) : 0;
      const int next = i + 1 < grid_points ? sign_of(values[i + 1]) : 0;
      if (prev != 0 && next != 0 && prev == next) out.touching = true;
      continue;
    }
    if (last_sign != 0 && s != last_sign) {
      const double lo = interval.lo + last_index * h;
      const double hi = interval.lo + i * h;
      out.roots.push_back(bisect(merged, lo, hi, last_sign, 1e-14 * std::max(1.0, std::abs(lo))));
    }
    last_sign = s;
    last_index = i;
  }
  return out;
}

}  // namespace

int sign_changes(const RealExpEquation& equation) {
  const GeneralizedDirichletPoly merged = equation.merged();
  if (merged.empty()) throw DomainError("sign_changes: all coefficients vanish");
  int changes = 0;
  int last = 0;
  for (const Term& t : merged.terms()) {
    const int s = sign_of(t.coeff);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<double> real_zero_crossings(const RealExpEquation& equation, Interval interval,
                                        int grid_points) {
  if (!(interval.lo < interval.hi)) throw PreconditionError("count_real_zeros_brute: lo must be < hi");
  if (grid_points < 1000) throw PreconditionError("count_real_zeros_brute: need at least 1000 grid points");
  const GeneralizedDirichletPoly merged = equation.merged();
  if (merged.empty()) throw DomainError("residual vanishes identically");
  Crossings c = scan_crossings(merged, interval, grid_points);
  if (!c.touching) return c.roots;
  for (double nudge : {1e-9, -1e-9}) {
    Crossings retry = scan_crossings(equation.poly.minus_constant(equation.level + nudge), interval, grid_points);
    if (!retry.touching) return retry.roots;
  }
  return c.roots;
}

int count_real_zeros_brute(const RealExpEquation& equation, Interval interval, int grid_points) {
  return static_cast<int>(real_zero_crossings(equation, interval, grid_points).size());
}

double default_root_tolerance(const RealExpEquation& equation) {
  return 1e-12 * std::max(1.0, std::abs(equation.level));
}

namespace {

// Root of |c_dom| mu_dom^x = sum_{others} |c_i| mu_i^x, which has a single
// sign change in its coefficients.
double dominance_threshold(const GeneralizedDirichletPoly& merged, std::size_t dominant) {
  std::vector<std::pair<double, Rational>> terms;
  const auto all = merged.terms();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double c = std::abs(all[i].coeff);
    terms.emplace_back(i == dominant ? c : -c, all[i].base);
  }
  RealExpEquation eq{GeneralizedDirichletPoly(std::move(terms), "envelope"), 0.0};
  return solve_unique_root(eq, {-1.0, 1.0}, 1e-10);
}

}  // namespace

Interval dominance_interval(const GeneralizedDirichletPoly& poly) {
  if (poly.size() < 2) throw DomainError("dominance_interval needs at least two terms");
  const double left = dominance_threshold(poly, 0);
  const double right = dominance_threshold(poly, poly.size() - 1);
  return {std::min(left, right), std::max(left, right)};
}

Interval real_zero_envelope(const RealExpEquation& equation) {
  const GeneralizedDirichletPoly merged = equation.merged();
  if (merged.size() < 2) return {-1.0, 1.0};
  const Interval d = dominance_interval(merged);
  return {d.lo - 1.0, d.hi + 1.0};
}

double solve_unique_root(const RealExpEquation& equation, Interval bracket, double tol) {
  if (!(bracket.lo < bracket.hi)) throw PreconditionError("solve_unique_root: empty bracket");
  const int w = sign_changes(equation);
  if (w != 1) {
    throw PreconditionError("solve_unique_root: equation has W = " + std::to_string(w) + ", expected 1");
  }
  if (tol <= 0.0) tol = default_root_tolerance(equation);
  const GeneralizedDirichletPoly merged = equation.merged();

  double lo = bracket.lo;
  double hi = bracket.hi;
  int s_lo = sign_of(normalized_residual(merged, lo));
  int s_hi = sign_of(normalized_residual(merged, hi));
  if (s_lo == 0) return lo;
  if (s_hi == 0) return hi;
  for (int doubling = 0; s_lo == s_hi; ++doubling) {
    if (doubling == 10) throw BracketError("solve_unique_root: no sign change after 2^10 expansions");
    const double centre = 0.5 * (lo + hi);
    const double half = hi - lo;
    lo = centre - half;
    hi = centre + half;
    s_lo = sign_of(normalized_residual(merged, lo));
    s_hi = sign_of(normalized_residual(merged, hi));
    if (s_lo == 0) return lo;
    if (s_hi == 0) return hi;
  }

  // Bisection down to the tolerance, then a few secant steps kept inside
  // the final bracket.
  double a = lo;
  double b = hi;
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const int s = sign_of(normalized_residual(merged, mid));
    if (s == 0) return mid;
    if (s == s_lo) {
      a = mid;
    } else {
      b = mid;
    }
  }
  double x0 = a;
  double x1 = b;
  double f0 = equation.residual(x0);
  double f1 = equation.residual(x1);
  double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
  double best_abs = std::min(std::abs(f0), std::abs(f1));
  for (int it = 0; it < 8 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= a && x2 <= b)) break;
    const double f2 = equation.residual(x2);
    if (std::abs(f2) < best_abs) {
      best = x2;
      best_abs = std::abs(f2);
    }
    if (f2 == 0.0 || x2 == x1) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  return best;
}

SignChangeReport polya_szego_check(const RealExpEquation& equation, Interval interval) {
  SignChangeReport r;
  r.W = sign_changes(equation);
  r.N = count_real_zeros_brute(equation, interval);
  r.parity_ok = r.W >= r.N && (r.W - r.N) % 2 == 0;
  return r;
}

SignChangeReport polya_szego_check(const RealExpEquation& equation) {
  return polya_szego_check(equation, real_zero_envelope(equation));
}

double log_factorial(int k) {
  double s = 0.0;
  for (int j = 2; j <= k; ++j) s += std::log(static_cast<double>(j));
  return s;
}

FactorialCheck factorial_inequality_check(int k) {
  if (k < 2) throw DomainError("factorial_inequality_check requires k >= 2");
  const double lf = log_factorial(k);
  const double lk = std::log(static_cast<double>(k));
  FactorialCheck c;
  c.weak_margin = 2.0 * lf - k * lk;
  c.sharp_margin = 2.0 * lf - ((k - 1) * lk + 2.0 * std::log(static_cast<double>(k - 1)));
  c.holds_weak = c.weak_margin > 0.0;
  c.holds_sharp = c.sharp_margin > 0.0;
  return c;
}

DriftConstant hadamard_drift_constant(int m) {
  if (m <= 4) throw DomainError("hadamard_drift_constant requires m > 4");
  const double p = static_cast<double>(last_prime_leq(m));
  DriftConstant d;
  d.A = (log_factorial(m) - std::log(p)) / (m - 1);
  d.margin = 2.0 * d.A - std::log(static_cast<double>(m_star(m)));
  return d;
}

}  // namespace zsa
