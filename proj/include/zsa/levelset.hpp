#pragma once

// Level curves |G_n^*(z)| = p^{x0} of the pruned sums: the modulus range on
// vertical lines, the extreme abscissas reached by a level curve, and
// marching-squares tracing with component classification.

#include <optional>
#include <vector>

#include "zsa/gdpoly.hpp"
#include "zsa/zerofinder.hpp"

namespace zsa {

struct ProfileOptions {
  double Y = 0.0;     // window [0, Y]; 0 selects 200 * 2pi / log 2
  double step = 0.0;  // sampling step; 0 selects pi / (8 log n)
  /// Also minimize over the torus of prime phases (the closure of the
  /// orbit y -> (y log q)_q), which turns the windowed minimum into the
  /// exact infimum whenever the local descent finds the global minimum.
  bool torus = true;
};

struct ModulusProfile {
  int n = 0;
  double x = 0.0;
  double m_hat = 0.0;       // estimated inf over y of |G_n^*(x+iy)|
  double M = 0.0;           // max over y, attained at y = 0
  double y_witness = 0.0;   // best sampled y in the window
  double window_min = 0.0;  // minimum over the window alone
  double Y = 0.0;
  double step = 0.0;
  int torus_dimension = 0;  // number of prime phases, 0 if not used
};

/// Throws PreconditionError if Y < 4pi/log 2 or step > pi/(8 log n).
ModulusProfile modulus_profile(int n, double x, const ProfileOptions& options = {});

/// p^{x0} with p the largest prime <= n.
double level_for(int n, double x0);

/// max(m_hat - c, c - M): non-positive exactly when the level c is attained
/// on the line Re z = x.
double feasibility_gap(const ModulusProfile& profile, double level);

/// Largest x where the level curve for x0 reaches; SearchError if none.
double upper_extreme(int n, double x0, double tol = 1e-11, const ProfileOptions& options = {});

/// Smallest such x; throws DomainError for x0 == 0 (the curve is unbounded
/// to the left).
double lower_extreme(int n, double x0, double tol = 1e-11, const ProfileOptions& options = {});

enum class ComponentClass { ClosedLoop, OpenWithAsymptote, SingleOpenCurve, Unclassified };

const char* component_class_name(ComponentClass c);

struct LevelComponent {
  std::vector<Complex> vertices;  // closed loops do not repeat the first vertex
  ComponentClass kind = ComponentClass::Unclassified;
  bool closed = false;
  std::vector<double> asymptotes;  // one ordinate per end for OpenWithAsymptote
  int winding = 0;                 // |winding of G_n^*| along a closed loop
  int zeros_inside = 0;            // certified zeros enclosed by a closed loop
};

struct TraceOptions {
  double grid = 0.0;      // 0 selects min(0.01, pi / (16 log n))
  bool snap_edges = true;  // move top/bottom edges onto curve-free rows (x0 <= 0)
  bool check_loops = true;
};

struct LevelCurveAnalysis {
  int n = 0;
  double x0 = 0.0;
  double level = 0.0;
  Rectangle window;
  double grid = 0.0;
  std::vector<LevelComponent> components;
  std::optional<double> b_minus;
  double b_plus = 0.0;
  std::vector<double> real_axis_hits;
  std::vector<Complex> flagged_cells;  // cell centres of unresolved saddles
  std::vector<ComplexZero> window_zeros;  // filled when loops are checked
};

/// x in [b^- - 1, b^+ + 0.5] (left edge -12 for x0 = 0), y in
/// [-4pi/log 2, 4pi/log 2].
Rectangle default_trace_window(int n, double x0);

LevelCurveAnalysis trace_level_curve(int n, double x0, const Rectangle& window,
                                     const TraceOptions& options = {});
LevelCurveAnalysis trace_level_curve(int n, double x0, const TraceOptions& options = {});

struct MonotonicityVerdict {
  bool increasing = true;
  std::vector<double> values;
  std::optional<std::size_t> failing_index;  // values[i] >= values[i+1]
};

/// Upper extremes along a strictly increasing x0 grid, checked for strict
/// increase by more than `margin`.
MonotonicityVerdict extreme_monotonicity(int n, const std::vector<double>& x0_grid, double margin = 1e-9);

struct DominanceVerdict {
  bool holds = true;
  double b_star = 0.0;  // max Re over zeros of G_n^* up to `height`
  double height = 0.0;
  std::vector<double> extremes;  // upper_extreme at each sample
};

DominanceVerdict bstar_dominance(int n, const std::vector<double>& x0_samples, double height = 200.0);

}  // namespace zsa
