#pragma once

// Real-line tools for exponential sums: coefficient sign changes, brute-force
// real zero counting, unique-root solving, and the factorial / drift-constant
// inequalities.

#include <optional>
#include <vector>

#include "zsa/gdpoly.hpp"

namespace zsa {

struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// poly(x) = level on the real line.
struct RealExpEquation {
  GeneralizedDirichletPoly poly;
  double level = 0.0;

  double residual(double x) const { return poly.real_value(x) - level; }
  /// poly - level with the constant merged at base 1.
  GeneralizedDirichletPoly merged() const { return poly.minus_constant(level); }
};

struct SignChangeReport {
  int W = 0;  // sign changes of the base-ordered coefficients
  int N = 0;  // real zeros found by the brute-force oracle
  bool parity_ok = false;
};

/// Strict sign alternations of the coefficients of poly - level ordered by
/// ascending base. Throws DomainError if every coefficient vanishes.
int sign_changes(const RealExpEquation& equation);

/// Sign crossings of the residual on a uniform grid, each located by
/// bisection. Tangential zeros are invisible; a touching sample triggers a
/// retry with the level nudged by 1e-9.
std::vector<double> real_zero_crossings(const RealExpEquation& equation, Interval interval,
                                        int grid_points = 4096);
int count_real_zeros_brute(const RealExpEquation& equation, Interval interval,
                           int grid_points = 4096);

/// [L, R] such that every zero of poly, real or complex, has L <= Re z <= R:
/// beyond R the largest-base term outweighs all others in modulus, below L
/// the smallest-base term does. Requires at least two terms.
Interval dominance_interval(const GeneralizedDirichletPoly& poly);

/// dominance_interval of poly - level, padded by 1 on each side.
Interval real_zero_envelope(const RealExpEquation& equation);

/// 1e-12 * max(1, |level|).
double default_root_tolerance(const RealExpEquation& equation);

/// The unique real root of an equation with W = 1. The bracket is doubled
/// about its centre (at most 2^10 times) until the residual changes sign.
/// A non-positive tol selects default_root_tolerance.
double solve_unique_root(const RealExpEquation& equation, Interval bracket, double tol = 0.0);

SignChangeReport polya_szego_check(const RealExpEquation& equation, Interval interval);
/// Uses real_zero_envelope as the counting interval.
SignChangeReport polya_szego_check(const RealExpEquation& equation);

/// log(k!) by direct summation of log j.
double log_factorial(int k);

struct FactorialCheck {
  bool holds_weak = false;   // (k!)^2 > k^k
  bool holds_sharp = false;  // (k!)^2 > k^(k-1) (k-1)^2
  double weak_margin = 0.0;  // log of the ratio
  double sharp_margin = 0.0;
};

FactorialCheck factorial_inequality_check(int k);

struct DriftConstant {
  double A = 0.0;       // log(m!/p) / (m-1), p the last prime <= m
  double margin = 0.0;  // 2A - log m^*
};

DriftConstant hadamard_drift_constant(int m);

}  // namespace zsa
