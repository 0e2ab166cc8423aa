#pragma once

// Generalized Dirichlet polynomials f(z) = sum_k a_k * mu_k^z with real
// coefficients and positive rational bases, and the constructors for the
// zeta partial sums and their mirrored / pruned variants.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zsa {

using Complex = std::complex<double>;

/// Exponents of the form Re(z) * log(mu) are clamped to this magnitude.
inline constexpr double kExponentClamp = 700.0;

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  double log() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduced form with positive denominator; throws DomainError unless num/den > 0.
Rational make_rational(std::int64_t num, std::int64_t den);

struct Term {
  double coeff;
  Rational base;
  double log_base;
};

class GeneralizedDirichletPoly {
 public:
  GeneralizedDirichletPoly() = default;

  /// Terms are sorted by base; duplicate bases are merged and zero
  /// coefficients dropped. Throws DomainError on non-positive bases.
  GeneralizedDirichletPoly(std::vector<std::pair<double, Rational>> terms, std::string label);

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::string& label() const { return label_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  double real_value(double x) const;
  double real_derivative(double x) const;

  /// sum_k |a_k| mu_k^x, the natural magnitude of f on the line Re z = x.
  double scale(double x) const;
  /// Upper bound of |f'| on the vertical strip x_lo <= Re z <= x_hi.
  double derivative_bound(double x_lo, double x_hi) const;

  /// g(z) = f(-z): every base replaced by its reciprocal.
  GeneralizedDirichletPoly mirrored(std::string label) const;
  /// f - level, with the constant merged into the base-1 term.
  GeneralizedDirichletPoly minus_constant(double level) const;

 private:
  std::vector<Term> terms_;
  std::string label_;
};

enum class Family { Zeta, G, GStar };

std::string_view family_name(Family family);
/// Accepts "zeta", "G", "Gstar" (case-insensitive, also "g_star").
Family parse_family(std::string_view text);

bool is_prime(std::int64_t n);
/// Largest prime p <= n (n >= 2).
std::int64_t last_prime_leq(std::int64_t n);
/// m - 1 if m is prime, m otherwise: the largest base of G_m^* (m > 2).
std::int64_t m_star(std::int64_t m);
/// Prime factorization as (prime, exponent) pairs in ascending prime order.
std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t n);

/// zeta_n(z) = sum_{k<=n} k^{-z}, stored with bases 1/k.
GeneralizedDirichletPoly make_partial_sum(int n);
/// G_n(z) = zeta_n(-z) = sum_{k<=n} k^z.
GeneralizedDirichletPoly make_g(int n);
/// G_n^*(z) = G_n(z) - p^z with p the last prime not exceeding n (n > 2).
GeneralizedDirichletPoly make_g_star(int n);
GeneralizedDirichletPoly make_family(Family family, int n);

/// Throws DomainError for non-finite z.
Complex evaluate(const GeneralizedDirichletPoly& poly, Complex z);

/// |f(x+iy)|^2 = sum_k a_k^2 mu_k^{2x}
///             + sum_{j<m} 2 a_j a_m (mu_j mu_m)^x cos(y log(mu_m/mu_j)).
struct SquaredModulusExpansion {
  struct Diagonal {
    double coeff;       // a_k^2
    Rational base;      // mu_k^2
    double log_base;    // 2 log mu_k
  };
  struct Cross {
    std::size_t j, m;   // term indices, j < m
    double amplitude;   // 2 a_j a_m
    Rational base;      // mu_j mu_m
    double log_base;
    double frequency;   // log(mu_m / mu_j) > 0
  };
  std::vector<Diagonal> diagonal;
  std::vector<Cross> cross;

  double operator()(double x, double y) const;
};

SquaredModulusExpansion squared_modulus_expansion(const GeneralizedDirichletPoly& poly);

}  // namespace zsa
