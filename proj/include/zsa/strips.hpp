#pragma once

// Critical strips of the partial sums: empirical bounds from certified
// zeros, the projection sets R_n computed by membership scans, delta_n, and
// the verification suite for the theorems about them.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zsa/gdpoly.hpp"
#include "zsa/realroots.hpp"

namespace zsa {

/// Root of 1 + 2^x + ... + (n-1)^x = n^x (n >= 3).
double analytic_upper_bound(int n);

/// True iff m_hat(x) <= p^x <= M(x) up to tol * max(1, p^x).
bool rn_membership(int n, double x, double tol = 1e-9);

struct ProjectionInterval {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;           // membership grid resolution
  Interval scan{0.0, 0.0};     // scanned range
  std::vector<Interval> holes;  // non-member grid runs between lo and hi
  int grid_points = 0;
};

/// Membership scan from just left of the root of 2^x + ... + n^x = 1 to
/// just right of analytic_upper_bound(n); endpoints refined by bisection to
/// tol. Results are memoized per (n, step, tol). Throws SearchError if no
/// grid point is a member.
ProjectionInterval projection_interval(int n, double grid_step = 1e-3, double tol = 1e-10);

struct EmpiricalBounds {
  Family family = Family::G;
  int n = 0;
  double height = 0.0;
  Interval envelope{0.0, 0.0};
  std::size_t count = 0;  // zeros with 0 < Im z <= height
  bool empty = true;
  double a_hat = 0.0;
  double b_hat = 0.0;
};

EmpiricalBounds empirical_bounds(int n, Family family, double height);

struct DeltaReport {
  double delta = 0.0;
  double a_n = 0.0;      // left end of the projection interval
  double b_at_a = 0.0;   // upper_extreme(n, a_n)
  double b_hat = 0.0;    // empirical right bound of the zeros of G_n
  double height = 0.0;
};

DeltaReport delta_n(int n, double height = 200.0, double grid_step = 1e-2);

enum class VerdictStatus { Pass, Inconclusive, Fail, ReportOnly, NotApplicable };

const char* verdict_name(VerdictStatus status);

struct Verdict {
  VerdictStatus status = VerdictStatus::NotApplicable;
  std::string detail;
};

struct VerifyBudget {
  double height = 1.0e4;        // zero-search height for existence witnesses
  double first_height = 50.0;   // searches double from here up to `height`
  double dominance_height = 200.0;
  double report_height = 1000.0;
  double grid_step = 1e-2;      // membership grid for projection intervals
  int k_max = 300;
  int m_max = 10000;
};

const std::vector<std::string>& supported_theorems();

/// Verdict per n (key 0 for the n-independent "factorials"). Existence
/// claims yield Pass or Inconclusive, never Fail. Throws DomainError for an
/// unknown id.
std::map<int, Verdict> verify_theorem(std::string_view id, const std::vector<int>& n_values,
                                      const VerifyBudget& budget = {});

struct StripReport {
  int n = 0;
  Family family = Family::G;
  bool degenerate = false;  // n = 2: the projection set is {0}
  EmpiricalBounds bounds;
  std::optional<double> analytic_upper;
  std::optional<ProjectionInterval> projection;
  std::optional<DeltaReport> delta;
  std::map<std::string, std::string> verdicts;
  // Report-only comparisons in the zeta frame: b^(n) = -a_n, a^(n) = -b_n.
  double zeta_b_hat = 0.0;
  double upper_asymptote = 0.0;  // 1 + (4/pi - 1) log log n / log n
  double zeta_a_hat_over_n = 0.0;
  std::vector<std::pair<double, double>> ritt_sums;  // (height, sum of Re z)
};

struct ReportOptions {
  double height = 1000.0;
  double grid_step = 1e-2;
  std::vector<double> ritt_heights{100.0, 1000.0};
};

StripReport strip_report(int n, const ReportOptions& options = {});

}  // namespace zsa
