#include "zsa/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "golden.hpp"
#include "zsa/errors.hpp"
#include "zsa/realroots.hpp"

namespace zsa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

// |f|^2 as a function of the prime phases theta_q, where mu_k^{iy} is
// replaced by exp(i sum_q v_q(mu_k) theta_q).
class TorusModulus {
 public:
  TorusModulus(const GeneralizedDirichletPoly& poly, double x) {
    std::vector<std::int64_t> primes;
    std::vector<std::vector<std::pair<std::int64_t, int>>> factors;
    for (const Term& t : poly.terms()) {
      if (t.base.den != 1) return;  // only integer bases are supported
      factors.push_back(factor_integer(t.base.num));
      for (const auto& [q, e] : factors.back()) primes.push_back(q);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    dim_ = static_cast<int>(primes.size());
    log_primes_.reserve(primes.size());
    for (std::int64_t q : primes) log_primes_.push_back(std::log(static_cast<double>(q)));
    const auto terms = poly.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      coeff_.push_back(terms[k].coeff * std::exp(x * terms[k].log_base));
      std::vector<double> row(primes.size(), 0.0);
      for (const auto& [q, e] : factors[k]) {
        row[std::lower_bound(primes.begin(), primes.end(), q) - primes.begin()] = e;
      }
      exponents_.push_back(std::move(row));
    }
  }

  int dim() const { return dim_; }

  std::vector<double> phases_at(double y) const {
    std::vector<double> th(log_primes_.size());
    for (std::size_t q = 0; q < th.size(); ++q) th[q] = std::remainder(y * log_primes_[q], 2.0 * kPi);
    return th;
  }

  Complex sum(const std::vector<double>& th) const {
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < coeff_.size(); ++k) s += coeff_[k] * std::polar(1.0, phase(k, th));
    return s;
  }

  // Levenberg-Marquardt on |S|^2 with exact gradient and Hessian.
  double minimize(std::vector<double>& th) const {
    const std::size_t d = th.size();
    double lambda = 1e-3;
    double f = std::norm(sum(th));
    std::vector<double> grad(d), hess(d * d), step(d), trial(d);
    for (int it = 0; it < 200 && f > 1e-300; ++it) {
      derivatives(th, grad, hess);
      double diag = 0.0;
      for (std::size_t q = 0; q < d; ++q) diag = std::max(diag, std::abs(hess[q * d + q]));
      diag = std::max(diag, 1e-300);
      bool accepted = false;
      for (int inner = 0; inner < 40 && !accepted; ++inner) {
        std::vector<double> a = hess;
        for (std::size_t q = 0; q < d; ++q) a[q * d + q] += lambda * diag;
        for (std::size_t q = 0; q < d; ++q) step[q] = -grad[q];
        if (!solve(a, step, d)) {
          lambda *= 10.0;
          continue;
        }
        for (std::size_t q = 0; q < d; ++q) trial[q] = th[q] + step[q];
        const double ft = std::norm(sum(trial));
        if (ft < f) {
          th = trial;
          f = ft;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
        } else {
          lambda *= 4.0;
          if (lambda > 1e12) break;
        }
      }
      if (!accepted) break;
      double size = 0.0;
      for (double s : step) size = std::max(size, std::abs(s));
      if (size < 1e-15) break;
    }
    return f;
  }

 private:
  double phase(std::size_t k, const std::vector<double>& th) const {
    double p = 0.0;
    for (std::size_t q = 0; q < th.size(); ++q) p += exponents_[k][q] * th[q];
    return p;
  }

  void derivatives(const std::vector<double>& th, std::vector<double>& grad, std::vector<double>& hess) const {
    const std::size_t d = th.size();
    Complex s{0.0, 0.0};
    std::vector<Complex> s1(d), s2(d * d);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
      const Complex w = coeff_[k] * std::polar(1.0, phase(k, th));
      s += w;
      for (std::size_t q = 0; q < d; ++q) {
        if (exponents_[k][q] == 0.0) continue;
        s1[q] += Complex{0.0, exponents_[k][q]} * w;
        for (std::size_t r = 0; r < d; ++r) s2[q * d + r] -= exponents_[k][q] * exponents_[k][r] * w;
      }
    }
    for (std::size_t q = 0; q < d; ++q) {
      grad[q] = 2.0 * std::real(std::conj(s) * s1[q]);
      for (std::size_t r = 0; r < d; ++r) {
        hess[q * d + r] = 2.0 * std::real(std::conj(s1[r]) * s1[q] + std::conj(s) * s2[q * d + r]);
      }
    }
  }

  static bool solve(std::vector<double>& a, std::vector<double>& b, std::size_t d) {
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < d; ++r) {
        if (std::abs(a[r * d + col]) > std::abs(a[pivot * d + col])) pivot = r;
      }
      if (!(std::abs(a[pivot * d + col]) > 0.0)) return false;
      if (pivot != col) {
        for (std::size_t c = 0; c < d; ++c) std::swap(a[col * d + c], a[pivot * d + c]);
        std::swap(b[col], b[pivot]);
      }
      for (std::size_t r = col + 1; r < d; ++r) {
        const double factor = a[r * d + col] / a[col * d + col];
        for (std::size_t c = col; c < d; ++c) a[r * d + c] -= factor * a[col * d + c];
        b[r] -= factor * b[col];
      }
    }
    for (std::size_t col = d; col-- > 0;) {
      double v = b[col];
      for (std::size_t c = col + 1; c < d; ++c) v -= a[col * d + c] * b[c];
      b[col] = v / a[col * d + col];
      if (!std::isfinite(b[col])) return false;
    }
    return true;
  }

  int dim_ = 0;
  std::vector<double> log_primes_;
  std::vector<double> coeff_;
  std::vector<std::vector<double>> exponents_;
};

struct WindowScan {
  double min_sq = std::numeric_limits<double>::infinity();
  double y = 0.0;
  std::vector<double> best_y;  // refined local minima, best first
};

// Samples |f(x+iy)|^2 for y = 0, step, ..., Y with a rotation recurrence
// (resynchronized every 256 steps), then refines the five best local minima.
WindowScan scan_window(const GeneralizedDirichletPoly& poly, double x, double Y, double step) {
  const auto terms = poly.terms();
  const std::size_t K = terms.size();
  std::vector<double> amp(K), freq(K);
  std::vector<Complex> w(K), rot(K);
  for (std::size_t k = 0; k < K; ++k) {
    amp[k] = terms[k].coeff * std::exp(x * terms[k].log_base);
    freq[k] = terms[k].log_base;
    rot[k] = std::polar(1.0, step * freq[k]);
  }
  const std::size_t N = static_cast<std::size_t>(std::ceil(Y / step));
  std::vector<double> values(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    if (j % 256 == 0) {
      for (std::size_t k = 0; k < K; ++k) w[k] = std::polar(1.0, static_cast<double>(j) * step * freq[k]);
    }
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < K; ++k) {
      s += amp[k] * w[k];
      w[k] *= rot[k];
    }
    values[j] = std::norm(s);
  }

  std::vector<std::size_t> minima;
  for (std::size_t j = 0; j <= N; ++j) {
    const bool left_ok = j == 0 || values[j] <= values[j - 1];
    const bool right_ok = j == N || values[j] <= values[j + 1];
    if (left_ok && right_ok) minima.push_back(j);
  }
  const std::size_t keep = std::min<std::size_t>(5, minima.size());
  std::partial_sort(minima.begin(), minima.begin() + static_cast<std::ptrdiff_t>(keep), minima.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  WindowScan out;
  auto modulus_sq = [&](double y) { return std::norm(poly(Complex{x, y})); };
  for (std::size_t i = 0; i < keep; ++i) {
    const double yc = static_cast<double>(minima[i]) * step;
    const double y = detail::golden_minimize(modulus_sq, yc - step, yc + step);
    const double v = std::min(modulus_sq(y), values[minima[i]]);
    out.best_y.push_back(v == values[minima[i]] ? yc : y);
    if (v < out.min_sq) {
      out.min_sq = v;
      out.y = out.best_y.back();
    }
  }
  return out;
}

double torus_minimum(const TorusModulus& torus, const std::vector<double>& window_y) {
  const int d = torus.dim();
  const int per_dim = d <= 4 ? 8 : (d == 5 ? 6 : 4);
  std::size_t total = 1;
  for (int q = 0; q < d; ++q) total *= static_cast<std::size_t>(per_dim);

  // Coarse grid seeds: keep the six best points.
  std::vector<std::pair<double, std::vector<double>>> seeds;
  std::vector<double> th(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int q = 0; q < d; ++q) {
      th[q] = 2.0 * kPi * static_cast<double>(rest % per_dim) / per_dim;
      rest /= per_dim;
    }
    const double v = std::norm(torus.sum(th));
    if (seeds.size() < 6) {
      seeds.emplace_back(v, th);
    } else {
      auto worst = std::max_element(seeds.begin(), seeds.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
      if (v < worst->first) *worst = {v, th};
    }
  }
  for (double y : window_y) seeds.emplace_back(0.0, torus.phases_at(y));

  double best = std::numeric_limits<double>::infinity();
  for (auto& [value, start] : seeds) {
    std::vector<double> t = start;
    torus.minimize(t);
    best = std::min(best, std::abs(torus.sum(t)));
  }
  return best;
}

// Crossing of the gap from feasible (<= 0) at `good` to infeasible at `bad`.
double bisect_feasibility(const std::function<double(double)>& gap, double good, double bad, double tol,
                          double slack) {
  for (int it = 0; it < 200 && std::abs(bad - good) > tol; ++it) {
    const double mid = 0.5 * (good + bad);
    if (gap(mid) <= slack) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

// The largest-base term against all the others: +a for keep_base, -a else.
GeneralizedDirichletPoly signed_against(const GeneralizedDirichletPoly& poly, std::int64_t keep_base) {
  std::vector<std::pair<double, Rational>> terms;
  for (const Term& t : poly.terms()) {
    const bool kept = t.base.den == 1 && t.base.num == keep_base;
    terms.emplace_back(kept ? t.coeff : -t.coeff, t.base);
  }
  return GeneralizedDirichletPoly(std::move(terms), "bound");
}

constexpr double kScanStep = 0.05;
constexpr int kScanLimit = 4000;

}  // namespace

double level_for(int n, double x0) {
  return std::exp(x0 * std::log(static_cast<double>(last_prime_leq(n))));
}

ModulusProfile modulus_profile(int n, double x, const ProfileOptions& options) {
  const GeneralizedDirichletPoly g = make_g_star(n);
  ModulusProfile out;
  out.n = n;
  out.x = x;
  out.Y = options.Y > 0.0 ? options.Y : 200.0 * 2.0 * kPi / kLog2;
  const double max_step = kPi / (8.0 * std::log(static_cast<double>(n)));
  out.step = options.step > 0.0 ? options.step : max_step;
  if (out.Y < 4.0 * kPi / kLog2) throw PreconditionError("modulus_profile: window shorter than 4pi/log 2");
  if (out.step > max_step * (1.0 + 1e-12)) throw PreconditionError("modulus_profile: step above pi/(8 log n)");

  out.M = g.real_value(x);
  const WindowScan scan = scan_window(g, x, out.Y, out.step);
  out.window_min = std::sqrt(scan.min_sq);
  out.y_witness = scan.y;
  out.m_hat = out.window_min;
  if (options.torus) {
    const TorusModulus torus(g, x);
    if (torus.dim() > 0) {
      out.torus_dimension = torus.dim();
      out.m_hat = std::min(out.m_hat, torus_minimum(torus, scan.best_y));
    }
  }
  out.m_hat = std::min(out.m_hat, out.M);
  return out;
}

double feasibility_gap(const ModulusProfile& profile, double level) {
  return std::max(profile.m_hat - level, level - profile.M);
}

double upper_extreme(int n, double x0, double tol, const ProfileOptions& options) {
  const GeneralizedDirichletPoly g = make_g_star(n);
  const double c = level_for(n, x0);
  const double slack = 1e-12 * std::max(1.0, c);
  auto gap = [&](double x) { return feasibility_gap(modulus_profile(n, x, options), c); };

  // Beyond the root of m*^x - (all other terms) = c the largest term alone
  // keeps |G_n^*| above the level.
  const RealExpEquation right{signed_against(g, m_star(n)), c};
  const double x_right = solve_unique_root(right, {-1.0, 1.0}, 1e-14);
  double bad = x_right;
  if (gap(bad) <= slack) return bad;
  for (int i = 1; i <= kScanLimit; ++i) {
    const double x = x_right - i * kScanStep;
    if (gap(x) <= slack) return bisect_feasibility(gap, x, bad, tol, slack);
    bad = x;
  }
  throw SearchError("upper_extreme: no feasible abscissa in the scan range");
}

double lower_extreme(int n, double x0, double tol, const ProfileOptions& options) {
  if (x0 == 0.0) throw DomainError("lower_extreme: the level curve for x0 = 0 is unbounded on the left");
  const GeneralizedDirichletPoly g = make_g_star(n);
  const double c = level_for(n, x0);
  if (x0 > 0.0) {
    // The level is first reached on the real axis, where |G_n^*| = G_n^*(x).
    return solve_unique_root({g, c}, {-1.0, 1.0}, std::min(tol, 1e-14));
  }
  const double slack = 1e-12;
  auto gap = [&](double x) { return feasibility_gap(modulus_profile(n, x, options), c); };
  // Left of the root of sum_{k>=2} k^x = 1 - c the constant term dominates.
  std::vector<std::pair<double, Rational>> terms;
  for (const Term& t : g.terms()) {
    if (t.log_base != 0.0) terms.emplace_back(t.coeff, t.base);
  }
  const double x_left =
      solve_unique_root({GeneralizedDirichletPoly(std::move(terms), "tail"), 1.0 - c}, {-1.0, 1.0}, 1e-14);
  double bad = x_left;
  if (gap(bad) <= slack) return bad;
  for (int i = 1; i <= kScanLimit; ++i) {
    const double x = x_left + i * kScanStep;
    if (gap(x) <= slack) return bisect_feasibility(gap, x, bad, tol, slack);
    bad = x;
  }
  throw SearchError("lower_extreme: no feasible abscissa in the scan range");
}

const char* component_class_name(ComponentClass c) {
  switch (c) {
    case ComponentClass::ClosedLoop:
      return "ClosedLoop";
    case ComponentClass::OpenWithAsymptote:
      return "OpenWithAsymptote";
    case ComponentClass::SingleOpenCurve:
      return "SingleOpenCurve";
    case ComponentClass::Unclassified:
      return "Unclassified";
  }
  return "Unclassified";
}

Rectangle default_trace_window(int n, double x0) {
  const double right = upper_extreme(n, x0) + 0.5;
  const double left = x0 == 0.0 ? -12.0 : lower_extreme(n, x0) - 1.0;
  const double h = 4.0 * kPi / kLog2;
  return make_rectangle(left, right, -h, h);
}

namespace {

bool point_in_polygon(Complex p, const std::vector<Complex>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Complex a = poly[i];
    const Complex b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

// Ordinate of the asymptote approached by the end of a branch: the odd
// multiple of pi/(2 log 2) shared by the leftmost tenth of the branch.
std::optional<double> branch_asymptote(const std::vector<Complex>& v, bool from_front, double x_cut) {
  const double unit = kPi / (2.0 * kLog2);
  std::vector<double> ys;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex p = from_front ? v[i] : v[v.size() - 1 - i];
    if (p.real() > x_cut) break;
    ys.push_back(p.imag());
  }
  if (ys.empty()) return std::nullopt;
  const double k = std::round((ys.front() / unit - 1.0) / 2.0);
  const double target = (2.0 * k + 1.0) * unit;
  for (double y : ys) {
    if (std::abs(y - target) > 0.05) return std::nullopt;
  }
  return target;
}

}  // namespace

LevelCurveAnalysis trace_level_curve(int n, double x0, const Rectangle& window, const TraceOptions& options) {
  make_rectangle(window.x_min, window.x_max, window.y_min, window.y_max);
  const GeneralizedDirichletPoly g = make_g_star(n);
  const double max_grid = std::min(0.01, kPi / (16.0 * std::log(static_cast<double>(n))));
  const double h = options.grid > 0.0 ? options.grid : max_grid;
  if (h > max_grid * (1.0 + 1e-12)) throw PreconditionError("trace_level_curve: grid spacing too coarse");

  LevelCurveAnalysis out;
  out.n = n;
  out.x0 = x0;
  out.level = level_for(n, x0);
  out.grid = h;
  const double c = out.level;

  const int nx = std::max(2, static_cast<int>(std::ceil(window.width() / h - 1e-9)));
  const int ny = std::max(2, static_cast<int>(std::ceil(window.height() / h - 1e-9)));
  const double hx = window.width() / nx;
  const double hy = window.height() / ny;
  auto node_x = [&](int i) { return i == nx ? window.x_max : window.x_min + i * hx; };
  auto node_y = [&](int j) { return j == ny ? window.y_max : window.y_min + j * hy; };

  const auto terms = g.terms();
  const std::size_t K = terms.size();
  std::vector<double> amp(static_cast<std::size_t>(nx + 1) * K);
  for (int i = 0; i <= nx; ++i) {
    for (std::size_t k = 0; k < K; ++k) amp[i * K + k] = terms[k].coeff * std::exp(node_x(i) * terms[k].log_base);
  }
  std::vector<Complex> rot(K);
  auto fill_row = [&](int j, std::vector<double>& row) {
    const double y = node_y(j);
    for (std::size_t k = 0; k < K; ++k) rot[k] = std::polar(1.0, y * terms[k].log_base);
    for (int i = 0; i <= nx; ++i) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < K; ++k) s += amp[i * K + k] * rot[k];
      row[i] = std::abs(s) - c;
    }
  };

  struct Segment {
    std::int64_t a, b;
    int row;
  };
  std::vector<Segment> segments;
  std::unordered_map<std::int64_t, Complex> points;
  const std::int64_t stride = nx + 1;
  auto h_edge = [&](int i, int j) { return 2 * (j * stride + i); };
  auto v_edge = [&](int i, int j) { return 2 * (j * stride + i) + 1; };
  auto crossing = [&](std::int64_t id, Complex p0, Complex p1, double f0, double f1) {
    if (points.count(id) == 0) points.emplace(id, p0 + (p1 - p0) * (f0 / (f0 - f1)));
    return id;
  };

  std::vector<char> row_free(static_cast<std::size_t>(ny + 1));
  std::vector<double> below(static_cast<std::size_t>(nx + 1)), above(below.size());
  fill_row(0, below);
  auto free_row = [&](const std::vector<double>& row) {
    const bool s = row[0] >= 0.0;
    for (double v : row) {
      if ((v >= 0.0) != s) return false;
    }
    return true;
  };
  row_free[0] = free_row(below);
  for (int j = 0; j < ny; ++j) {
    fill_row(j + 1, above);
    row_free[j + 1] = free_row(above);
    const double y0 = node_y(j);
    const double y1 = node_y(j + 1);
    for (int i = 0; i < nx; ++i) {
      const double f[4] = {below[i], below[i + 1], above[i + 1], above[i]};
      const bool s[4] = {f[0] >= 0.0, f[1] >= 0.0, f[2] >= 0.0, f[3] >= 0.0};
      if (s[0] == s[1] && s[1] == s[2] && s[2] == s[3]) continue;
      const double x0c = node_x(i);
      const double x1c = node_x(i + 1);
      const Complex p[4] = {{x0c, y0}, {x1c, y0}, {x1c, y1}, {x0c, y1}};
      std::int64_t e[4] = {-1, -1, -1, -1};
      if (s[0] != s[1]) e[0] = crossing(h_edge(i, j), p[0], p[1], f[0], f[1]);
      if (s[1] != s[2]) e[1] = crossing(v_edge(i + 1, j), p[1], p[2], f[1], f[2]);
      if (s[3] != s[2]) e[2] = crossing(h_edge(i, j + 1), p[3], p[2], f[3], f[2]);
      if (s[0] != s[3]) e[3] = crossing(v_edge(i, j), p[0], p[3], f[0], f[3]);
      if (e[0] >= 0 && e[1] >= 0 && e[2] >= 0 && e[3] >= 0) {
        const Complex mid = 0.5 * (p[0] + p[2]);
        const double fc = std::abs(g(mid)) - c;
        if (fc == 0.0) out.flagged_cells.push_back(mid);
        if ((fc >= 0.0) == s[0]) {
          segments.push_back({e[0], e[1], j});
          segments.push_back({e[2], e[3], j});
        } else {
          segments.push_back({e[3], e[0], j});
          segments.push_back({e[1], e[2], j});
        }
        continue;
      }
      std::int64_t found[2];
      int count = 0;
      for (std::int64_t id : e) {
        if (id >= 0) found[count++] = id;
      }
      if (count == 2) segments.push_back({found[0], found[1], j});
    }
    std::swap(below, above);
  }

  // Move the top and bottom edges onto rows the curve does not cross, so
  // that components are not cut open by the window.
  int j_lo = 0;
  int j_hi = ny;
  if (options.snap_edges && x0 <= 0.0) {
    for (int j = 0; j <= ny / 4; ++j) {
      if (row_free[j]) {
        j_lo = j;
        break;
      }
    }
    for (int j = ny; j >= ny - ny / 4; --j) {
      if (row_free[j]) {
        j_hi = j;
        break;
      }
    }
  }
  out.window = {window.x_min, window.x_max, node_y(j_lo), node_y(j_hi)};
  std::erase_if(segments, [&](const Segment& s) { return s.row < j_lo || s.row >= j_hi; });

  // Link segments sharing an edge crossing into polylines.
  std::unordered_map<std::int64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  auto walk = [&](std::size_t first, std::int64_t start) {
    std::vector<std::int64_t> chain{start};
    std::size_t seg = first;
    std::int64_t at = start;
    for (;;) {
      used[seg] = 1;
      at = segments[seg].a == at ? segments[seg].b : segments[seg].a;
      chain.push_back(at);
      std::optional<std::size_t> next;
      for (std::size_t cand : incident[at]) {
        if (!used[cand]) next = cand;
      }
      if (!next) break;
      seg = *next;
    }
    return chain;
  };
  std::vector<std::vector<std::int64_t>> chains;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::int64_t end : {segments[s].a, segments[s].b}) {
      if (!used[s] && incident[end].size() == 1) chains.push_back(walk(s, end));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) chains.push_back(walk(s, segments[s].a));
  }

  const double edge_tol = 1e-9 * (1.0 + std::abs(window.x_min) + std::abs(window.x_max) +
                                  std::abs(out.window.y_min) + std::abs(out.window.y_max));
  for (const auto& chain : chains) {
    LevelComponent comp;
    comp.closed = chain.size() > 2 && chain.front() == chain.back();
    for (std::size_t i = 0; i + (comp.closed ? 1 : 0) < chain.size(); ++i) comp.vertices.push_back(points.at(chain[i]));
    if (comp.closed) {
      comp.kind = ComponentClass::ClosedLoop;
    } else {
      auto on_left = [&](Complex p) { return std::abs(p.real() - window.x_min) <= edge_tol; };
      auto on_bottom = [&](Complex p) { return std::abs(p.imag() - out.window.y_min) <= edge_tol; };
      auto on_top = [&](Complex p) { return std::abs(p.imag() - out.window.y_max) <= edge_tol; };
      const Complex a = comp.vertices.front();
      const Complex b = comp.vertices.back();
      if (on_left(a) && on_left(b)) {
        double right = window.x_min;
        for (Complex p : comp.vertices) right = std::max(right, p.real());
        const double cut = window.x_min + 0.1 * (right - window.x_min);
        const auto ya = branch_asymptote(comp.vertices, true, cut);
        const auto yb = branch_asymptote(comp.vertices, false, cut);
        if (ya && yb) {
          comp.kind = ComponentClass::OpenWithAsymptote;
          comp.asymptotes = {*ya, *yb};
        }
      } else if ((on_bottom(a) && on_top(b)) || (on_top(a) && on_bottom(b))) {
        comp.kind = ComponentClass::SingleOpenCurve;
      }
    }
    out.components.push_back(std::move(comp));
  }

  if (out.window.y_min <= 0.0 && 0.0 <= out.window.y_max) {
    out.real_axis_hits = real_zero_crossings({g, c}, {window.x_min, window.x_max});
  }
  out.b_plus = upper_extreme(n, x0);
  if (x0 != 0.0) out.b_minus = lower_extreme(n, x0);

  const bool any_closed = std::any_of(out.components.begin(), out.components.end(),
                                      [](const LevelComponent& comp) { return comp.closed; });
  if (options.check_loops && any_closed) {
    for (double shrink : {0.0, 1e-4, 3e-4, 7e-4}) {
      try {
        out.window_zeros = find_zeros(g,
                                      {out.window.x_min + shrink, out.window.x_max - shrink,
                                       out.window.y_min + shrink, out.window.y_max - shrink},
                                      ZeroSearchOptions{});
        break;
      } catch (const BoundaryError&) {
      }
    }
    for (LevelComponent& comp : out.components) {
      if (!comp.closed) continue;
      try {
        comp.winding = std::abs(winding_along_polygon(g, comp.vertices));
      } catch (const BoundaryError&) {
        comp.winding = -1;
      }
      for (const ComplexZero& z : out.window_zeros) {
        if (point_in_polygon(z.position, comp.vertices)) ++comp.zeros_inside;
      }
    }
  }
  return out;
}

LevelCurveAnalysis trace_level_curve(int n, double x0, const TraceOptions& options) {
  return trace_level_curve(n, x0, default_trace_window(n, x0), options);
}

MonotonicityVerdict extreme_monotonicity(int n, const std::vector<double>& x0_grid, double margin) {
  for (std::size_t i = 1; i < x0_grid.size(); ++i) {
    if (!(x0_grid[i] > x0_grid[i - 1])) throw PreconditionError("extreme_monotonicity: grid not increasing");
  }
  MonotonicityVerdict v;
  for (double x0 : x0_grid) v.values.push_back(upper_extreme(n, x0));
  for (std::size_t i = 0; i + 1 < v.values.size(); ++i) {
    if (!(v.values[i + 1] - v.values[i] > margin)) {
      v.increasing = false;
      v.failing_index = i;
      break;
    }
  }
  return v;
}

DominanceVerdict bstar_dominance(int n, const std::vector<double>& x0_samples, double height) {
  DominanceVerdict v;
  v.height = height;
  const auto zeros = ZeroCatalog::shared().zeros(Family::GStar, n, height);
  v.b_star = -std::numeric_limits<double>::infinity();
  for (const ComplexZero& z : zeros) v.b_star = std::max(v.b_star, z.position.real());
  for (double x0 : x0_samples) {
    const double b = upper_extreme(n, x0);
    v.extremes.push_back(b);
    if (!(v.b_star < b)) v.holds = false;
  }
  return v;
}

}  // namespace zsa
