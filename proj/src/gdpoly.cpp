#include "zsa/gdpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "zsa/errors.hpp"

namespace zsa {

namespace {

double clamped_exp(double exponent) {
  return std::exp(std::clamp(exponent, -kExponentClamp, kExponentClamp));
}

Rational multiply(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num, b.den);
  const std::int64_t g2 = std::gcd(b.num, a.den);
  return make_rational((a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1));
}

}  // namespace

double Rational::log() const {
  return std::log(static_cast<double>(num)) - std::log(static_cast<double>(den));
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational base with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num <= 0) throw DomainError("bases must be positive");
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

GeneralizedDirichletPoly::GeneralizedDirichletPoly(std::vector<std::pair<double, Rational>> terms,
                                                   std::string label)
    : label_(std::move(label)) {
  // Keyed by the reduced fraction; compared exactly via cross multiplication.
  auto less = [](const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  };
  std::map<Rational, double, decltype(less)> merged(less);
  for (const auto& [coeff, base] : terms) {
    if (!std::isfinite(coeff)) throw DomainError("non-finite coefficient");
    merged[make_rational(base.num, base.den)] += coeff;
  }
  for (const auto& [base, coeff] : merged) {
    if (coeff == 0.0) continue;
    terms_.push_back(Term{coeff, base, base.log()});
  }
}

Complex GeneralizedDirichletPoly::operator()(Complex z) const {
  const double x = z.real();
  const double y = z.imag();
  double re = 0.0;
  double im = 0.0;
  for (const Term& t : terms_) {
    const double mag = t.coeff * clamped_exp(x * t.log_base);
    const double phase = y * t.log_base;
    re += mag * std::cos(phase);
    im += mag * std::sin(phase);
  }
  return {re, im};
}

Complex GeneralizedDirichletPoly::derivative(Complex z) const {
  const double x = z.real();
  const double y = z.imag();
  double re = 0.0;
  double im = 0.0;
  for (const Term& t : terms_) {
    const double mag = t.coeff * t.log_base * clamped_exp(x * t.log_base);
    const double phase = y * t.log_base;
    re += mag * std::cos(phase);
    im += mag * std::sin(phase);
  }
  return {re, im};
}

double GeneralizedDirichletPoly::real_value(double x) const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.coeff * clamped_exp(x * t.log_base);
  return s;
}

double GeneralizedDirichletPoly::real_derivative(double x) const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.coeff * t.log_base * clamped_exp(x * t.log_base);
  return s;
}

double GeneralizedDirichletPoly::scale(double x) const {
  double s = 0.0;
  for (const Term& t : terms_) s += std::abs(t.coeff) * clamped_exp(x * t.log_base);
  return s;
}

double GeneralizedDirichletPoly::derivative_bound(double x_lo, double x_hi) const {
  double s = 0.0;
  for (const Term& t : terms_) {
    const double x = t.log_base > 0.0 ? x_hi : x_lo;
    s += std::abs(t.coeff * t.log_base) * clamped_exp(x * t.log_base);
  }
  return s;
}

GeneralizedDirichletPoly GeneralizedDirichletPoly::mirrored(std::string label) const {
  std::vector<std::pair<double, Rational>> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.emplace_back(t.coeff, Rational{t.base.den, t.base.num});
  return GeneralizedDirichletPoly(std::move(out), std::move(label));
}

GeneralizedDirichletPoly GeneralizedDirichletPoly::minus_constant(double level) const {
  std::vector<std::pair<double, Rational>> out;
  out.reserve(terms_.size() + 1);
  for (const Term& t : terms_) out.emplace_back(t.coeff, t.base);
  out.emplace_back(-level, Rational{1, 1});
  return GeneralizedDirichletPoly(std::move(out), label_);
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Zeta: return "zeta";
    case Family::G: return "G";
    case Family::GStar: return "Gstar";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (c != '_' && c != '*') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "zeta") return Family::Zeta;
  if (lower == "g") return Family::G;
  if (lower == "gstar") return Family::GStar;
  throw DomainError("unknown family '" + std::string(text) + "'");
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t last_prime_leq(std::int64_t n) {
  if (n < 2) throw DomainError("last_prime_leq requires n >= 2");
  while (!is_prime(n)) --n;
  return n;
}

std::int64_t m_star(std::int64_t m) {
  if (m <= 2) throw DomainError("m_star requires m > 2");
  return is_prime(m) ? m - 1 : m;
}

std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t n) {
  if (n < 1) throw DomainError("factor_integer requires n >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

GeneralizedDirichletPoly make_partial_sum(int n) {
  if (n < 2) throw DomainError("make_partial_sum requires n >= 2");
  std::vector<std::pair<double, Rational>> terms;
  for (int k = 1; k <= n; ++k) terms.emplace_back(1.0, Rational{1, k});
  return GeneralizedDirichletPoly(std::move(terms), "zeta_" + std::to_string(n));
}

GeneralizedDirichletPoly make_g(int n) {
  if (n < 2) throw DomainError("make_g requires n >= 2");
  std::vector<std::pair<double, Rational>> terms;
  for (int k = 1; k <= n; ++k) terms.emplace_back(1.0, Rational{k, 1});
  return GeneralizedDirichletPoly(std::move(terms), "G_" + std::to_string(n));
}

GeneralizedDirichletPoly make_g_star(int n) {
  if (n <= 2) throw DomainError("make_g_star requires n > 2");
  const std::int64_t p = last_prime_leq(n);
  std::vector<std::pair<double, Rational>> terms;
  for (int k = 1; k <= n; ++k) {
    if (k != p) terms.emplace_back(1.0, Rational{k, 1});
  }
  return GeneralizedDirichletPoly(std::move(terms), "G_" + std::to_string(n) + "_star");
}

GeneralizedDirichletPoly make_family(Family family, int n) {
  switch (family) {
    case Family::Zeta: return make_partial_sum(n);
    case Family::G: return make_g(n);
    case Family::GStar: return make_g_star(n);
  }
  throw DomainError("unknown family");
}

Complex evaluate(const GeneralizedDirichletPoly& poly, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("evaluate: non-finite argument");
  }
  return poly(z);
}

double SquaredModulusExpansion::operator()(double x, double y) const {
  double s = 0.0;
  for (const Diagonal& d : diagonal) s += d.coeff * clamped_exp(x * d.log_base);
  for (const Cross& c : cross) {
    s += c.amplitude * clamped_exp(x * c.log_base) * std::cos(y * c.frequency);
  }
  return s;
}

SquaredModulusExpansion squared_modulus_expansion(const GeneralizedDirichletPoly& poly) {
  SquaredModulusExpansion out;
  const auto terms = poly.terms();
  for (const Term& t : terms) {
    out.diagonal.push_back({t.coeff * t.coeff, multiply(t.base, t.base), 2.0 * t.log_base});
  }
  for (std::size_t j = 0; j < terms.size(); ++j) {
    for (std::size_t m = j + 1; m < terms.size(); ++m) {
      const Rational product = multiply(terms[j].base, terms[m].base);
      out.cross.push_back({j, m, 2.0 * terms[j].coeff * terms[m].coeff, product,
                           terms[j].log_base + terms[m].log_base,
                           terms[m].log_base - terms[j].log_base});
    }
  }
  return out;
}

}  // namespace zsa
