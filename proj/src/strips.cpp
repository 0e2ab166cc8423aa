#include "zsa/strips.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <tuple>

#include "zsa/errors.hpp"
#include "zsa/levelset.hpp"
#include "zsa/zerofinder.hpp"

namespace zsa {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double membership_gap(int n, double x) {
  return feasibility_gap(modulus_profile(n, x), level_for(n, x));
}

double membership_slack(int n, double x, double tol) { return tol * std::max(1.0, level_for(n, x)); }

// Root of 2^x + ... + n^x = 1: no zero of G_n has a smaller real part.
double left_scan_limit(int n) {
  std::vector<std::pair<double, Rational>> terms;
  for (int k = 2; k <= n; ++k) terms.emplace_back(1.0, make_rational(k, 1));
  return solve_unique_root({GeneralizedDirichletPoly(std::move(terms), "tail"), 1.0}, {-1.0, 1.0}, 1e-14);
}

double beta4() {
  // 4^x = 1 + 2 * 3^(x - 1/2)
  GeneralizedDirichletPoly poly({{1.0, make_rational(4, 1)}, {-2.0 / std::sqrt(3.0), make_rational(3, 1)}},
                                "beta4");
  return solve_unique_root({poly, 1.0}, {1.0, 1.5}, 1e-14);
}

struct WitnessCount {
  int positive = 0;
  int negative = 0;
  int near_positive = 0;  // 0 < Re z <= 0.05
  int near_negative = 0;
  double height = 0.0;
};

WitnessCount count_witnesses(int n, double height) {
  WitnessCount w;
  w.height = height;
  for (const ComplexZero& z : ZeroCatalog::shared().zeros(Family::G, n, height)) {
    if (!z.certified) continue;
    const double x = z.position.real();
    if (x > 1e-12) ++w.positive;
    if (x < -1e-12) ++w.negative;
    if (x > 1e-12 && x <= 0.05) ++w.near_positive;
    if (x < -1e-12 && x >= -0.05) ++w.near_negative;
  }
  return w;
}

// Raises the search height geometrically until `done` holds or the budget
// is spent.
template <typename Done>
std::pair<bool, WitnessCount> search_witnesses(int n, const VerifyBudget& budget, Done&& done) {
  double h = std::min(budget.first_height, budget.height);
  for (;;) {
    const WitnessCount w = count_witnesses(n, h);
    if (done(w)) return {true, w};
    if (h >= budget.height) return {false, w};
    h = std::min(2.0 * h, budget.height);
  }
}

Verdict pass_or(bool ok, VerdictStatus otherwise, std::string detail) {
  return {ok ? VerdictStatus::Pass : otherwise, std::move(detail)};
}

}  // namespace

double analytic_upper_bound(int n) {
  if (n < 3) throw DomainError("analytic_upper_bound requires n >= 3");
  std::vector<std::pair<double, Rational>> terms;
  for (int k = 1; k < n; ++k) terms.emplace_back(-1.0, make_rational(k, 1));
  terms.emplace_back(1.0, make_rational(n, 1));
  return solve_unique_root({GeneralizedDirichletPoly(std::move(terms), "upper"), 0.0}, {0.0, 2.0}, 1e-14);
}

bool rn_membership(int n, double x, double tol) {
  return membership_gap(n, x) <= membership_slack(n, x, tol);
}

ProjectionInterval projection_interval(int n, double grid_step, double tol) {
  if (!(grid_step > 0.0) || !(tol > 0.0)) throw DomainError("projection_interval: step and tol must be positive");
  static std::mutex memo_mutex;
  static std::map<std::tuple<int, double, double>, ProjectionInterval> memo;
  {
    std::lock_guard lock(memo_mutex);
    const auto it = memo.find({n, grid_step, tol});
    if (it != memo.end()) return it->second;
  }

  ProjectionInterval out;
  out.step = grid_step;
  out.scan = {left_scan_limit(n) - 0.05, analytic_upper_bound(n) + 0.05};
  const int count = static_cast<int>(std::floor(out.scan.width() / grid_step)) + 1;
  out.grid_points = count;
  auto x_at = [&](int i) { return out.scan.lo + i * grid_step; };
  const double slack_tol = 1e-12;
  auto member = [&](double x) { return membership_gap(n, x) <= membership_slack(n, x, slack_tol); };

  std::vector<char> in(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) in[i] = member(x_at(i));
  const auto first = std::find(in.begin(), in.end(), 1);
  if (first == in.end()) throw SearchError("projection_interval: no member on the scan grid");
  const int i_lo = static_cast<int>(first - in.begin());
  const int i_hi = count - 1 - static_cast<int>(std::find(in.rbegin(), in.rend(), 1) - in.rbegin());

  auto refine = [&](double good, double bad) {
    for (int it = 0; it < 200 && std::abs(bad - good) > tol; ++it) {
      const double mid = 0.5 * (good + bad);
      (member(mid) ? good : bad) = mid;
    }
    return good;
  };
  out.lo = i_lo > 0 ? refine(x_at(i_lo), x_at(i_lo - 1)) : x_at(0);
  out.hi = i_hi + 1 < count ? refine(x_at(i_hi), x_at(i_hi + 1)) : x_at(count - 1);
  for (int i = i_lo; i <= i_hi;) {
    if (in[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (!in[j]) ++j;
    out.holes.push_back({x_at(i), x_at(j - 1)});
    i = j;
  }

  std::lock_guard lock(memo_mutex);
  memo.emplace(std::make_tuple(n, grid_step, tol), out);
  return out;
}

EmpiricalBounds empirical_bounds(int n, Family family, double height) {
  if (!(height > 0.0)) throw DomainError("empirical_bounds: height must be positive");
  EmpiricalBounds b;
  b.family = family;
  b.n = n;
  b.height = height;
  const Interval env = ZeroCatalog::envelope(family == Family::Zeta ? Family::G : family, n);
  b.envelope = family == Family::Zeta ? Interval{-env.hi, -env.lo} : env;
  const auto zeros = ZeroCatalog::shared().zeros(family, n, height);
  b.a_hat = std::numeric_limits<double>::infinity();
  b.b_hat = -std::numeric_limits<double>::infinity();
  for (const ComplexZero& z : zeros) {
    if (!z.certified) continue;
    ++b.count;
    b.a_hat = std::min(b.a_hat, z.position.real());
    b.b_hat = std::max(b.b_hat, z.position.real());
  }
  b.empty = b.count == 0;
  if (b.empty) b.a_hat = b.b_hat = 0.0;
  return b;
}

DeltaReport delta_n(int n, double height, double grid_step) {
  if (n <= 2) throw DomainError("delta_n requires n > 2");
  DeltaReport d;
  d.height = height;
  d.a_n = projection_interval(n, grid_step).lo;
  d.b_at_a = upper_extreme(n, d.a_n);
  d.b_hat = empirical_bounds(n, Family::G, height).b_hat;
  d.delta = std::min(d.b_at_a, d.b_hat);
  return d;
}

const char* verdict_name(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Pass:
      return "pass";
    case VerdictStatus::Inconclusive:
      return "inconclusive";
    case VerdictStatus::Fail:
      return "fail";
    case VerdictStatus::ReportOnly:
      return "report-only";
    case VerdictStatus::NotApplicable:
      return "n/a";
  }
  return "n/a";
}

const std::vector<std::string>& supported_theorems() {
  static const std::vector<std::string> ids{"T2",  "C3",  "T10", "C11", "L12", "L13", "T14",          "T15",
                                            "C16", "T17", "C19", "C20", "C21", "asympt_report", "factorials"};
  return ids;
}

namespace {

Verdict verify_one(std::string_view id, int n, const VerifyBudget& budget) {
  const double ln2 = std::numbers::ln2;
  if (id == "T2" || id == "C3" || id == "C20") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "all zeros lie on the imaginary axis"};
    int need = id == "T2" ? 3 : 1;
    const bool near = id == "C20";
    const auto [ok, w] = search_witnesses(n, budget, [&](const WitnessCount& c) {
      return near ? c.near_positive >= 1 && c.near_negative >= 1 : c.positive >= need && c.negative >= need;
    });
    char buf[160];
    if (near) {
      std::snprintf(buf, sizeof buf, "|Re z| <= 0.05: %d with Re > 0, %d with Re < 0 up to height %g",
                    w.near_positive, w.near_negative, w.height);
    } else {
      std::snprintf(buf, sizeof buf, "%d zeros with Re > 0, %d with Re < 0 up to height %g", w.positive, w.negative,
                    w.height);
    }
    return pass_or(ok, VerdictStatus::Inconclusive, buf);
  }
  if (id == "T10") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    const ProjectionInterval pi = projection_interval(n, budget.grid_step);
    const double x0 = pi.lo;
    const double b = upper_extreme(n, x0);
    const double hi = std::min(b, pi.hi);
    int failures = 0;
    constexpr int kPoints = 50;
    for (int i = 0; i <= kPoints; ++i) {
      if (!rn_membership(n, x0 + (hi - x0) * i / kPoints)) ++failures;
    }
    return pass_or(failures == 0, VerdictStatus::Fail,
                   fmt("[x0, b] = [%.6f, %.6f], %g grid points outside R_n", x0, hi, failures));
  }
  if (id == "C11") {
    if (n != 3) return {VerdictStatus::NotApplicable, "statement is about n = 3"};
    const ProjectionInterval pi = projection_interval(3, 1e-3);
    const double a3 = left_scan_limit(3);
    const bool ok = std::abs(pi.lo - a3) <= 1e-6 && std::abs(pi.hi - 1.0) <= 1e-6 && pi.holes.empty();
    return pass_or(ok, VerdictStatus::Fail, fmt("R_3 = [%.9f, %.9f], a_3 = %.9f", pi.lo, pi.hi, a3));
  }
  if (id == "L12") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(-2.0 + 3.0 * i / 19.0);
    const MonotonicityVerdict v = extreme_monotonicity(n, grid);
    return pass_or(v.increasing, VerdictStatus::Fail,
                   fmt("b_{n,x0} from %.6f to %.6f over x0 in [-2, 1]", v.values.front(), v.values.back()));
  }
  if (id == "L13") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    const DominanceVerdict v = bstar_dominance(n, {-1.0, 0.0, 1.0}, budget.dominance_height);
    const double smallest = *std::min_element(v.extremes.begin(), v.extremes.end());
    return pass_or(v.holds, VerdictStatus::Fail,
                   fmt("b*_n = %.3g (height %g) vs min b_{n,x0} = %.6f", v.b_star, v.height, smallest));
  }
  if (id == "T14") {
    if (n != 4) return {VerdictStatus::NotApplicable, "statement is about n = 4"};
    const ProjectionInterval pi = projection_interval(4, 1e-3);
    const double beta = beta4();
    const double upper = analytic_upper_bound(4);
    const double b_hat = empirical_bounds(4, Family::G, std::min(budget.report_height, budget.height)).b_hat;
    const bool ok = pi.holes.empty() && b_hat <= beta && pi.hi <= beta + 1e-6 && beta <= upper &&
                    upper > 1.6 && upper < 1.8 && beta > 1.0 && beta < 1.5;
    return pass_or(ok, VerdictStatus::Fail,
                   fmt("R_4 right end %.9f, beta_4 = %.9f, analytic bound %.6f", pi.hi, beta, upper));
  }
  if (id == "T15" || id == "C16") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    const auto zeros = ZeroCatalog::shared().zeros(Family::GStar, n, budget.dominance_height);
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    for (const ComplexZero& z : zeros) {
      a = std::min(a, z.position.real());
      b = std::max(b, z.position.real());
    }
    if (zeros.empty()) return {VerdictStatus::Inconclusive, "no zeros of G_n^* found"};
    if (n <= 4) {
      const bool ok = std::max(std::abs(a), std::abs(b)) <= 1e-9;
      return pass_or(ok, VerdictStatus::Fail,
                     fmt("a*_n = %.3g, b*_n = %.3g (height %g)", a, b, budget.dominance_height));
    }
    // For n >= 5 the statement is that some zero leaves the imaginary axis.
    const bool ok = id == "T15" ? std::max(std::abs(a), std::abs(b)) > 1e-6 : b > 1e-6;
    return pass_or(ok, VerdictStatus::Inconclusive,
                   fmt("a*_n = %.6f, b*_n = %.6f (height %g)", a, b, budget.dominance_height));
  }
  if (id == "T17") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    const DeltaReport d = delta_n(n, budget.dominance_height, budget.grid_step);
    return pass_or(d.delta > 0.0, VerdictStatus::Fail,
                   fmt("delta_n = %.6f (b_{n,a_n} = %.6f, b_hat = %.6f)", d.delta, d.b_at_a, d.b_hat));
  }
  if (id == "C21") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "the projection set is {0}"};
    const ProjectionInterval pi = projection_interval(n, budget.grid_step);
    return pass_or(pi.lo < 0.0 && 0.0 < pi.hi && rn_membership(n, 0.0), VerdictStatus::Fail,
                   fmt("projection interval [%.6f, %.6f]", pi.lo, pi.hi));
  }
  if (id == "asympt_report") {
    if (n <= 2) return {VerdictStatus::NotApplicable, "needs n > 2"};
    const EmpiricalBounds e = empirical_bounds(n, Family::G, budget.report_height);
    const double ln = std::log(static_cast<double>(n));
    const double predicted = 1.0 + (4.0 / std::numbers::pi - 1.0) * std::log(ln) / ln;
    char buf[200];
    std::snprintf(buf, sizeof buf, "b^(n) = %.6f vs %.6f; a^(n)/n = %.6f vs %.6f (height %g)", -e.a_hat,
                  predicted, -e.b_hat / n, -ln2, e.height);
    return {VerdictStatus::ReportOnly, buf};
  }
  throw DomainError("unknown theorem id '" + std::string(id) + "'");
}

Verdict verify_factorials(const VerifyBudget& budget) {
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 3; k <= budget.k_max; ++k) {
    const FactorialCheck c = factorial_inequality_check(k);
    if (!c.holds_weak) ++failures;
    if (k >= 6 && !c.holds_sharp) ++failures;
    worst = std::min(worst, k >= 6 ? std::min(c.weak_margin, c.sharp_margin) : c.weak_margin);
  }
  for (int m = 5; m <= budget.m_max; ++m) {
    const DriftConstant d = hadamard_drift_constant(m);
    if (!(d.margin > 0.0)) ++failures;
    worst = std::min(worst, d.margin);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "k <= %d, m <= %d: %d failures, smallest log margin %.6g", budget.k_max,
                budget.m_max, failures, worst);
  return pass_or(failures == 0, VerdictStatus::Fail, buf);
}

}  // namespace

std::map<int, Verdict> verify_theorem(std::string_view id, const std::vector<int>& n_values,
                                      const VerifyBudget& budget) {
  const auto& ids = supported_theorems();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw DomainError("unknown theorem id '" + std::string(id) + "'");
  }
  std::map<int, Verdict> out;
  if (id == "factorials") {
    out[0] = verify_factorials(budget);
    return out;
  }
  if (id == "C19") {
    // The common part of the projection intervals must contain [a, delta]
    // with delta = min delta_n > 0 and some a < 0.
    double left = -std::numeric_limits<double>::infinity();
    double right = std::numeric_limits<double>::infinity();
    double delta = std::numeric_limits<double>::infinity();
    for (int n : n_values) {
      if (n <= 2) continue;
      const ProjectionInterval pi = projection_interval(n, budget.grid_step);
      left = std::max(left, pi.lo);
      right = std::min(right, pi.hi);
      delta = std::min(delta, delta_n(n, budget.dominance_height, budget.grid_step).delta);
    }
    Verdict v = pass_or(left < 0.0 && 0.0 < delta && delta <= right, VerdictStatus::Fail,
                        fmt("common part [%.6f, %.6f], min delta_n = %.6f", left, right, delta));
    for (int n : n_values) out[n] = n <= 2 ? Verdict{VerdictStatus::NotApplicable, "needs n > 2"} : v;
    return out;
  }
  for (int n : n_values) out[n] = verify_one(id, n, budget);
  return out;
}

StripReport strip_report(int n, const ReportOptions& options) {
  if (n < 2) throw DomainError("strip_report requires n >= 2");
  StripReport r;
  r.n = n;
  r.family = Family::G;
  r.bounds = empirical_bounds(n, Family::G, options.height);
  r.zeta_b_hat = -r.bounds.a_hat;
  r.zeta_a_hat_over_n = -r.bounds.b_hat / n;
  const double ln = std::log(static_cast<double>(n));
  r.upper_asymptote = 1.0 + (4.0 / std::numbers::pi - 1.0) * std::log(ln) / ln;
  for (double T : options.ritt_heights) {
    double s = 0.0;
    for (const ComplexZero& z : ZeroCatalog::shared().zeros(Family::G, n, T)) s += z.position.real() * z.multiplicity;
    r.ritt_sums.emplace_back(T, s);
  }
  if (n == 2) {
    r.degenerate = true;
    ProjectionInterval pi;
    pi.step = options.grid_step;
    r.projection = pi;
    return r;
  }
  r.analytic_upper = analytic_upper_bound(n);
  r.projection = projection_interval(n, options.grid_step);
  r.delta = delta_n(n, std::min(options.height, 200.0), options.grid_step);
  VerifyBudget budget;
  budget.grid_step = options.grid_step;
  budget.height = options.height;
  budget.report_height = options.height;
  for (const char* id : {"C3", "T10", "T17", "C21", "asympt_report"}) {
    r.verdicts[id] = verdict_name(verify_theorem(id, {n}, budget).at(n).status);
  }
  return r;
}

}  // namespace zsa
