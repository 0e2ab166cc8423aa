#pragma once

// Complex zero location in rectangles by the argument principle, closed-form
// zero oracles for the exactly solvable families, translation numbers and
// zero replication along vertical translates.

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsa/gdpoly.hpp"
#include "zsa/realroots.hpp"

namespace zsa {

struct Rectangle {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double diameter() const;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
  Complex centre() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool contains(Complex z) const {
    return x_min <= z.real() && z.real() <= x_max && y_min <= z.imag() && z.imag() <= y_max;
  }
};

/// Validated constructor: throws DomainError unless bounds are finite and ordered.
Rectangle make_rectangle(double x_min, double x_max, double y_min, double y_max);

struct ComplexZero {
  Complex position;
  double residual = 0.0;
  bool certified = false;  // isolated by a box of winding number 1
  int multiplicity = 1;    // > 1 only for boxes that never separated
};

struct ContourOptions {
  double max_step = 0.5;
  /// Relative boundary guard: |f| < guard * scale(Re z) on the contour is a
  /// BoundaryError.
  double guard = 1e-8;
};

/// Total change of arg f along the straight segment a -> b. Steps are chosen
/// so that h * max|f'| <= |f|/2 on each step, which keeps f inside a disc
/// that excludes 0 and makes every principal-value increment exact.
double phase_change(const GeneralizedDirichletPoly& poly, Complex a, Complex b,
                    const ContourOptions& options = {});

/// Winding number of f around the counter-clockwise boundary of rect.
int winding_number(const GeneralizedDirichletPoly& poly, const Rectangle& rect,
                   double max_step = 0.5);
int winding_number(const GeneralizedDirichletPoly& poly, const Rectangle& rect,
                   const ContourOptions& options);

/// Winding number of f along a closed polygon (last vertex joins the first).
int winding_along_polygon(const GeneralizedDirichletPoly& poly, std::span<const Complex> vertices,
                          const ContourOptions& options = {});

struct ZeroSearchOptions {
  double tol = 1e-10;
  int max_depth = 60;
  int newton_iterations = 50;
  /// Tall rectangles are first cut into horizontal bands of at most this
  /// height; 0 picks max(2, width).
  double band_height = 0.0;
  unsigned threads = 1;
  ContourOptions contour;
};

/// Zeros of poly inside rect, sorted by (Im, Re). The sum of multiplicities
/// equals winding_number(poly, rect). Throws BoundaryError if the outer
/// contour fails the guard and IncompleteEnumeration if the subdivision
/// budget runs out.
std::vector<ComplexZero> find_zeros(const GeneralizedDirichletPoly& poly, const Rectangle& rect,
                                    double tol);
std::vector<ComplexZero> find_zeros(const GeneralizedDirichletPoly& poly, const Rectangle& rect,
                                    const ZeroSearchOptions& options);

/// Newton iteration from start; nullopt if it leaves `region` or fails to
/// converge within max_iterations.
std::optional<Complex> newton_polish(const GeneralizedDirichletPoly& poly, Complex start,
                                     const Rectangle& region, double tol, int max_iterations = 50);

enum class ClosedFormFamily { Zeta2, G3Star, G4Star };

ClosedFormFamily parse_closed_form_family(std::string_view name);

/// Exact zeros for k in [k_lo, k_hi]: i pi (2k+1)/log 2 for zeta_2 and
/// G_3^*; i 2pi(3k+1)/(3 log 2) and i 2pi(3k+2)/(3 log 2) for G_4^*,
/// merged and sorted by imaginary part.
std::vector<Complex> closed_form_zeros(ClosedFormFamily family, int k_lo, int k_hi);

struct TranslationNumber {
  double T = 0.0;
  double delta = 0.0;  // max |f(z+iT) - f(z)| over the sampled strip grid
  double bound = 0.0;  // analytic upper bound of the same quantity on the strip
};

/// Smallest T > T_min (on a 1e-3 grid, then locally refined) with
/// sup_{a<=Re z<=b} |f(z+iT) - f(z)| <= delta, certified by the bound
/// sum_k |a_k| max(mu_k^a, mu_k^b) |e^{iT log mu_k} - 1| and verified on a
/// strip grid of 10^4 points. Throws SearchError if T would exceed
/// search_span.
TranslationNumber translation_number(const GeneralizedDirichletPoly& poly, double delta,
                                     Interval strip, double search_span, double T_min = 1.0);

struct ReplicationResult {
  std::vector<ComplexZero> zeros;
  std::vector<TranslationNumber> translations;
  bool complete = true;
  std::string warning;
};

struct ReplicationOptions {
  double epsilon = 0.05;       // strip half-width around Re z0
  double delta = 0.0;          // first tolerance; 0 derives it from |f| around z0
  double search_span = 2.0e4;  // per translation search
  double tol = 1e-10;
};

/// count further zeros with |Re z - Re z0| < epsilon, one near each
/// z0 + i T_k for translation numbers with T_{k+1} - T_k > 1 and tolerances
/// delta / 2^(k-1).
ReplicationResult replicate_zero(const GeneralizedDirichletPoly& poly, const ComplexZero& z0,
                                 int count, const ReplicationOptions& options = {});

/// Negated positions re-certified against target (zeta_n for zeros of G_n).
/// Throws ConsistencyError if a residual re-check fails.
std::vector<ComplexZero> mirror_zeros(std::span<const ComplexZero> zeros,
                                      const GeneralizedDirichletPoly& target, double tol = 1e-10);

/// For each height T, the sum of Re z over zeros with 0 < Im z <= T inside
/// the dominance envelope.
std::vector<double> ritt_partial_sums(const GeneralizedDirichletPoly& poly,
                                      std::span<const double> heights,
                                      const ZeroSearchOptions& options = {});

/// dominance_interval padded by `pad`: a rectangle x-range holding every zero.
Interval zero_envelope(const GeneralizedDirichletPoly& poly, double pad = 0.1);

}  // namespace zsa

namespace zsa {

/// Process-wide store of zeros in the upper half plane for (family, n),
/// extended on demand in height. Zeta zeros are derived from G zeros by
/// negation and conjugation. Thread-safe; extensions are serialized.
class ZeroCatalog {
 public:
  static ZeroCatalog& shared();

  /// Search strip used for the family: for G_n the envelope
  /// [-(n+1) log 2 - 1, R + 0.1] with R the dominance root of n^x, for
  /// G_n^* its own dominance interval padded by 0.1.
  static Interval envelope(Family family, int n);

  /// Zeros with 0 < Im z <= height, sorted by (Im, Re).
  std::vector<ComplexZero> zeros(Family family, int n, double height);
  /// Height actually covered for (family, n); 0 if nothing is cached.
  double covered_height(Family family, int n);
  /// Installs a previously computed list covering (0, height] unless more
  /// is already known. Zeta entries are not accepted.
  void seed(Family family, int n, double height, std::vector<ComplexZero> zeros);

 private:
  struct Entry {
    double height = 0.0;
    std::vector<ComplexZero> zeros;
  };
  std::mutex mutex_;
  std::map<std::pair<int, int>, Entry> entries_;
};

}  // namespace zsa
