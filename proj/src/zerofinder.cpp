#include "zsa/zerofinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "zsa/errors.hpp"
#include "zsa/parallel.hpp"
#include "golden.hpp"

namespace zsa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cut positions tried in order when a subdivision line fails the guard.
// Starting off-centre keeps symmetric boxes from cutting through zeros on
// their axis of symmetry.
constexpr std::array<double, 10> kCutFractions = {0.4937, 0.5171, 0.4711, 0.5389, 0.4469,
                                                  0.5613, 0.4237, 0.5857, 0.3989, 0.6113};

void sort_zeros(std::vector<ComplexZero>& zeros) {
  std::sort(zeros.begin(), zeros.end(), [](const ComplexZero& a, const ComplexZero& b) {
    if (a.position.imag() != b.position.imag()) return a.position.imag() < b.position.imag();
    return a.position.real() < b.position.real();
  });
}

int to_winding(double total_phase) {
  const double turns = total_phase / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25) {
    throw std::logic_error("phase tracking produced a non-integer winding");
  }
  return static_cast<int>(rounded);
}

void check_guard(const GeneralizedDirichletPoly& poly, Complex z, Complex f, double guard) {
  if (!(std::abs(f) >= guard * poly.scale(z.real()))) {
    throw BoundaryError("contour passes too close to a zero near (" + std::to_string(z.real()) + ", " +
                        std::to_string(z.imag()) + ")");
  }
}

}  // namespace

double Rectangle::diameter() const { return std::hypot(width(), height()); }

Rectangle make_rectangle(double x_min, double x_max, double y_min, double y_max) {
  const Rectangle r{x_min, x_max, y_min, y_max};
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw DomainError("rectangle bounds must be finite");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) throw DomainError("rectangle bounds must be ordered");
  return r;
}

double phase_change(const GeneralizedDirichletPoly& poly, Complex a, Complex b,
                    const ContourOptions& options) {
  if (poly.empty()) throw PreconditionError("phase_change: zero polynomial");
  const Complex d = b - a;
  const double len = std::abs(d);
  Complex f0 = poly(a);
  check_guard(poly, a, f0, options.guard);
  if (len == 0.0) return 0.0;
  const Complex dir = d / len;

  double t = 0.0;
  double total = 0.0;
  while (t < len) {
    double h = std::min(options.max_step, len - t);
    const double m0 = std::abs(f0);
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double xa = (a + dir * t).real();
      const double xb = (a + dir * (t + h)).real();
      const double lip = poly.derivative_bound(std::min(xa, xb), std::max(xa, xb));
      if (h * lip <= 0.5 * m0) break;
      h = 0.499 * m0 / lip;
    }
    const bool last = t + h >= len * (1.0 - 1e-13);
    if (!last && h <= 1e-15 * std::max(1.0, std::abs(a + dir * t))) {
      throw BoundaryError("phase tracking stalled next to a zero");
    }
    const Complex z1 = last ? b : a + dir * (t + h);
    const Complex f1 = poly(z1);
    check_guard(poly, z1, f1, options.guard);
    total += std::arg(f1 / f0);
    t = last ? len : t + h;
    f0 = f1;
  }
  return total;
}

int winding_number(const GeneralizedDirichletPoly& poly, const Rectangle& rect, const ContourOptions& options) {
  make_rectangle(rect.x_min, rect.x_max, rect.y_min, rect.y_max);
  const Complex c00{rect.x_min, rect.y_min};
  const Complex c10{rect.x_max, rect.y_min};
  const Complex c11{rect.x_max, rect.y_max};
  const Complex c01{rect.x_min, rect.y_max};
  const double total = phase_change(poly, c00, c10, options) + phase_change(poly, c10, c11, options) +
                       phase_change(poly, c11, c01, options) + phase_change(poly, c01, c00, options);
  return to_winding(total);
}

int winding_number(const GeneralizedDirichletPoly& poly, const Rectangle& rect, double max_step) {
  ContourOptions options;
  options.max_step = max_step;
  return winding_number(poly, rect, options);
}

int winding_along_polygon(const GeneralizedDirichletPoly& poly, std::span<const Complex> vertices,
                          const ContourOptions& options) {
  if (vertices.size() < 3) throw PreconditionError("winding_along_polygon: need at least 3 vertices");
  double total = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    total += phase_change(poly, vertices[i], vertices[(i + 1) % vertices.size()], options);
  }
  return to_winding(total);
}

std::optional<Complex> newton_polish(const GeneralizedDirichletPoly& poly, Complex start,
                                     const Rectangle& region, double tol, int max_iterations) {
  Complex z = start;
  for (int it = 0; it < max_iterations; ++it) {
    const Complex d = poly.derivative(z);
    if (d == Complex{0.0, 0.0}) return std::nullopt;
    const Complex step = poly(z) / d;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !region.contains(z)) return std::nullopt;
    const double converged = std::max(1e-2 * tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(z));
    if (std::abs(step) <= converged) {
      const Complex d2 = poly.derivative(z);
      if (d2 != Complex{0.0, 0.0}) {
        const Complex candidate = z - poly(z) / d2;
        if (region.contains(candidate) && std::abs(poly(candidate)) <= std::abs(poly(z))) z = candidate;
      }
      return z;
    }
  }
  return std::nullopt;
}

namespace {

class Subdivider {
 public:
  Subdivider(const GeneralizedDirichletPoly& poly, const ZeroSearchOptions& options)
      : poly_(poly), options_(options) {}

  void run(const Rectangle& box, int winding, int depth) {
    if (winding <= 0) return;
    if (winding == 1) {
      if (auto z = newton_polish(poly_, box.centre(), box, options_.tol, options_.newton_iterations)) {
        zeros.push_back({*z, std::abs(poly_(*z)), true, 1});
        return;
      }
    }
    if (depth >= options_.max_depth || box.diameter() <= 10.0 * options_.tol) {
      const Complex z = newton_polish(poly_, box.centre(), box, options_.tol, options_.newton_iterations)
                            .value_or(box.centre());
      zeros.push_back({z, std::abs(poly_(z)), winding == 1, winding});
      return;
    }

    const bool split_x = box.width() >= 0.5 * box.height();
    const bool split_y = box.height() >= 0.5 * box.width();
    for (double fraction : kCutFractions) {
      std::vector<Rectangle> children;
      const double xc = box.x_min + fraction * box.width();
      const double yc = box.y_min + fraction * box.height();
      if (split_x && split_y) {
        children = {{box.x_min, xc, box.y_min, yc},
                    {xc, box.x_max, box.y_min, yc},
                    {box.x_min, xc, yc, box.y_max},
                    {xc, box.x_max, yc, box.y_max}};
      } else if (split_x) {
        children = {{box.x_min, xc, box.y_min, box.y_max}, {xc, box.x_max, box.y_min, box.y_max}};
      } else {
        children = {{box.x_min, box.x_max, box.y_min, yc}, {box.x_min, box.x_max, yc, box.y_max}};
      }
      std::vector<int> windings;
      try {
        for (const Rectangle& c : children) windings.push_back(winding_number(poly_, c, options_.contour));
      } catch (const BoundaryError&) {
        continue;
      }
      int sum = 0;
      for (int w : windings) sum += w;
      if (sum != winding) continue;
      for (std::size_t i = 0; i < children.size(); ++i) run(children[i], windings[i], depth + 1);
      return;
    }
    unresolved.push_back({box.x_min, box.x_max, box.y_min, box.y_max, winding});
  }

  std::vector<ComplexZero> zeros;
  std::vector<UnresolvedBox> unresolved;

 private:
  const GeneralizedDirichletPoly& poly_;
  const ZeroSearchOptions& options_;
};

}  // namespace

std::vector<ComplexZero> find_zeros(const GeneralizedDirichletPoly& poly, const Rectangle& rect,
                                    const ZeroSearchOptions& options) {
  make_rectangle(rect.x_min, rect.x_max, rect.y_min, rect.y_max);
  if (poly.empty()) throw PreconditionError("find_zeros: zero polynomial");
  const double band = options.band_height > 0.0 ? options.band_height : std::max(2.0, rect.width());
  const int bands = std::max(1, static_cast<int>(std::ceil(rect.height() / band - 1e-9)));

  // Horizontal cut lines with their left-to-right phase changes; interior
  // cuts are nudged when they pass too close to a zero.
  std::vector<double> cuts(static_cast<std::size_t>(bands) + 1);
  std::vector<double> horizontal(cuts.size());
  cuts.front() = rect.y_min;
  cuts.back() = rect.y_max;
  const double step = rect.height() / bands;
  auto line_phase = [&](double y) {
    return phase_change(poly, {rect.x_min, y}, {rect.x_max, y}, options.contour);
  };
  horizontal.front() = line_phase(rect.y_min);
  horizontal.back() = line_phase(rect.y_max);
  for (int i = 1; i < bands; ++i) {
    bool placed = false;
    for (double fraction : kCutFractions) {
      const double y = rect.y_min + (i - 1 + 2.0 * fraction) * step;
      try {
        horizontal[i] = line_phase(y);
        cuts[i] = y;
        placed = true;
        break;
      } catch (const BoundaryError&) {
      }
    }
    if (!placed) {
      throw IncompleteEnumeration("find_zeros: no admissible band cut",
                                  {{rect.x_min, rect.x_max, rect.y_min + (i - 1) * step,
                                    rect.y_min + (i + 1) * step, -1}});
    }
  }

  std::vector<int> windings(static_cast<std::size_t>(bands));
  for (int i = 0; i < bands; ++i) {
    const double right = phase_change(poly, {rect.x_max, cuts[i]}, {rect.x_max, cuts[i + 1]}, options.contour);
    const double left = phase_change(poly, {rect.x_min, cuts[i + 1]}, {rect.x_min, cuts[i]}, options.contour);
    windings[i] = to_winding(horizontal[i] + right - horizontal[i + 1] + left);
  }

  std::vector<Subdivider> workers;
  workers.reserve(static_cast<std::size_t>(bands));
  for (int i = 0; i < bands; ++i) workers.emplace_back(poly, options);
  parallel_for(static_cast<std::size_t>(bands), options.threads, [&](std::size_t i) {
    workers[i].run({rect.x_min, rect.x_max, cuts[i], cuts[i + 1]}, windings[i], 0);
  });

  std::vector<ComplexZero> zeros;
  std::vector<UnresolvedBox> unresolved;
  for (auto& w : workers) {
    zeros.insert(zeros.end(), w.zeros.begin(), w.zeros.end());
    unresolved.insert(unresolved.end(), w.unresolved.begin(), w.unresolved.end());
  }
  if (!unresolved.empty()) {
    throw IncompleteEnumeration("find_zeros: " + std::to_string(unresolved.size()) + " unresolved boxes",
                                std::move(unresolved));
  }
  sort_zeros(zeros);
  return zeros;
}

std::vector<ComplexZero> find_zeros(const GeneralizedDirichletPoly& poly, const Rectangle& rect, double tol) {
  ZeroSearchOptions options;
  options.tol = tol;
  return find_zeros(poly, rect, options);
}

ClosedFormFamily parse_closed_form_family(std::string_view name) {
  if (name == "zeta2") return ClosedFormFamily::Zeta2;
  if (name == "g3star") return ClosedFormFamily::G3Star;
  if (name == "g4star") return ClosedFormFamily::G4Star;
  throw DomainError("unknown closed-form family '" + std::string(name) + "'");
}

std::vector<Complex> closed_form_zeros(ClosedFormFamily family, int k_lo, int k_hi) {
  const double pi = std::numbers::pi;
  const double log2 = std::numbers::ln2;
  std::vector<Complex> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    switch (family) {
      case ClosedFormFamily::Zeta2:
      case ClosedFormFamily::G3Star:
        out.emplace_back(0.0, pi * (2.0 * k + 1.0) / log2);
        break;
      case ClosedFormFamily::G4Star:
        out.emplace_back(0.0, 2.0 * pi * (3.0 * k + 1.0) / (3.0 * log2));
        out.emplace_back(0.0, 2.0 * pi * (3.0 * k + 2.0) / (3.0 * log2));
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
  return out;
}

namespace {

// U(T) = sum_k w_k |e^{iT log mu_k} - 1| with w_k = |a_k| max over the strip
// of mu_k^x; an upper bound of |f(z+iT) - f(z)| on the strip.
struct ShiftBound {
  std::vector<double> weight;
  std::vector<double> frequency;
  double lipschitz = 0.0;

  ShiftBound(const GeneralizedDirichletPoly& poly, Interval strip) {
    for (const Term& t : poly.terms()) {
      if (t.log_base == 0.0) continue;
      const double w = std::abs(t.coeff) * std::max(std::exp(strip.lo * t.log_base), std::exp(strip.hi * t.log_base));
      weight.push_back(w);
      frequency.push_back(t.log_base);
      lipschitz += w * std::abs(t.log_base);
    }
  }

  double operator()(double T) const {
    double s = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) s += weight[k] * 2.0 * std::abs(std::sin(0.5 * T * frequency[k]));
    return s;
  }
};

double sampled_shift_sup(const GeneralizedDirichletPoly& poly, Interval strip, double T) {
  double sup = 0.0;
  constexpr int kX = 100;
  constexpr int kY = 100;
  for (int i = 0; i < kX; ++i) {
    const double x = strip.lo + (strip.hi - strip.lo) * i / (kX - 1);
    for (int j = 0; j < kY; ++j) {
      const double y = 0.37 * j;
      sup = std::max(sup, std::abs(poly(Complex{x, y + T}) - poly(Complex{x, y})));
    }
  }
  return sup;
}

}  // namespace

TranslationNumber translation_number(const GeneralizedDirichletPoly& poly, double delta, Interval strip,
                                     double search_span, double T_min) {
  if (!(delta > 0.0)) throw DomainError("translation_number: delta must be positive");
  if (!(strip.lo <= strip.hi)) throw DomainError("translation_number: empty strip");
  const ShiftBound bound(poly, strip);
  auto finish = [&](double T) {
    TranslationNumber out;
    out.T = T;
    out.bound = bound(T);
    out.delta = sampled_shift_sup(poly, strip, T);
    return out;
  };
  if (bound.weight.empty()) return finish(T_min + 1e-3);  // constant: every T works

  constexpr double kStep = 1e-3;
  const double inf = std::numeric_limits<double>::infinity();
  double before = inf;  // U at the previous two consecutive grid points
  double prev = inf;
  double prev_T = T_min;
  for (double T = T_min + kStep; T <= search_span;) {
    const double u = bound(T);
    if (u <= delta) {
      // Minimize over the whole first sublevel interval so that exact
      // periods are recovered whatever the tolerance.
      double end = T;
      for (int i = 0; i < 100000 && bound(end + kStep) <= delta; ++i) end += kStep;
      const double refined = detail::golden_minimize(bound, std::max(T_min + 1e-12, T - kStep), end + kStep);
      return finish(bound(refined) <= u ? refined : T);
    }
    if (prev <= before && prev <= u && prev_T > T_min) {
      const double refined = detail::golden_minimize(bound, std::max(T_min + 1e-12, prev_T - kStep), prev_T + kStep);
      if (bound(refined) <= delta) return finish(refined);
    }
    const double skip = (u - delta) / bound.lipschitz;
    if (skip > 2.0 * kStep) {
      // No T in (T, T + skip) can satisfy the bound.
      T += std::floor(skip / kStep) * kStep;
      before = inf;
      prev = inf;
    } else {
      before = prev;
      prev = u;
      prev_T = T;
      T += kStep;
    }
  }
  throw SearchError("translation_number: no T found up to " + std::to_string(search_span));
}

ReplicationResult replicate_zero(const GeneralizedDirichletPoly& poly, const ComplexZero& z0, int count,
                                 const ReplicationOptions& options) {
  ReplicationResult result;
  if (count <= 0) return result;
  if (!z0.certified) throw PreconditionError("replicate_zero: seed zero is not certified");
  if (!(options.epsilon > 0.0)) throw DomainError("replicate_zero: epsilon must be positive");

  const double r = std::min(0.5 * options.epsilon, 0.25);
  const Complex c = z0.position;
  const Interval strip{c.real() - r, c.real() + r};

  double delta = options.delta;
  if (delta <= 0.0) {
    // Half the minimum of |f| on the box boundary around z0: a shift by any
    // T with bound below this keeps at least one zero inside the shifted box.
    double m = std::numeric_limits<double>::infinity();
    constexpr int kPerSide = 100;
    for (int i = 0; i < kPerSide; ++i) {
      const double s = -r + 2.0 * r * i / kPerSide;
      for (Complex p : {Complex{s, -r}, Complex{r, s}, Complex{-s, r}, Complex{-r, -s}}) {
        m = std::min(m, std::abs(poly(c + p)));
      }
    }
    delta = 0.5 * m;
  }

  double last_T = 0.0;
  for (int k = 0; static_cast<int>(result.zeros.size()) < count; ++k) {
    if (k >= count + 8) {
      result.complete = false;
      result.warning = "replication budget exhausted";
      break;
    }
    const double delta_k = delta / std::pow(2.0, k);
    TranslationNumber tn;
    try {
      tn = translation_number(poly, delta_k, strip, last_T + options.search_span, std::max(1.0, last_T + 1.0));
    } catch (const SearchError&) {
      result.complete = false;
      result.warning = "translation search exhausted";
      break;
    }
    last_T = tn.T;
    const Complex shifted = c + Complex{0.0, tn.T};
    std::vector<ComplexZero> found;
    for (double shrink : {1.0, 0.97, 0.91}) {
      const double h = r * shrink;
      try {
        found = find_zeros(poly, {shifted.real() - h, shifted.real() + h, shifted.imag() - h, shifted.imag() + h},
                           options.tol);
        break;
      } catch (const BoundaryError&) {
      }
    }
    if (found.empty()) continue;
    result.translations.push_back(tn);
    const auto nearest = std::min_element(found.begin(), found.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.position - shifted) < std::abs(b.position - shifted);
    });
    result.zeros.push_back(*nearest);
  }
  return result;
}

std::vector<ComplexZero> mirror_zeros(std::span<const ComplexZero> zeros, const GeneralizedDirichletPoly& target,
                                      double tol) {
  std::vector<ComplexZero> out;
  out.reserve(zeros.size());
  for (const ComplexZero& z : zeros) {
    ComplexZero m = z;
    m.position = -z.position;
    m.residual = std::abs(target(m.position));
    const double allowed = std::max(1e-8 * target.scale(m.position.real()), 1e3 * tol * z.residual);
    if (!(m.residual <= allowed)) {
      throw ConsistencyError("mirror_zeros: residual " + std::to_string(m.residual) + " at mirrored zero");
    }
    out.push_back(m);
  }
  sort_zeros(out);
  return out;
}

Interval zero_envelope(const GeneralizedDirichletPoly& poly, double pad) {
  const Interval d = dominance_interval(poly);
  return {d.lo - pad, d.hi + pad};
}

std::vector<double> ritt_partial_sums(const GeneralizedDirichletPoly& poly, std::span<const double> heights,
                                      const ZeroSearchOptions& options) {
  std::vector<double> out;
  if (heights.empty()) return out;
  const double top = *std::max_element(heights.begin(), heights.end());
  if (!(top > 0.0)) throw DomainError("ritt_partial_sums: heights must be positive");
  const Interval env = zero_envelope(poly);
  std::vector<ComplexZero> zeros;
  try {
    zeros = find_zeros(poly, {env.lo, env.hi, 0.0, top}, options);
  } catch (const BoundaryError&) {
    zeros = find_zeros(poly, {env.lo, env.hi, 1e-7, top}, options);
  }
  for (double T : heights) {
    double s = 0.0;
    for (const ComplexZero& z : zeros) {
      if (z.position.imag() > 0.0 && z.position.imag() <= T) s += z.position.real() * z.multiplicity;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace zsa

namespace zsa {

ZeroCatalog& ZeroCatalog::shared() {
  static ZeroCatalog catalog;
  return catalog;
}

Interval ZeroCatalog::envelope(Family family, int n) {
  const GeneralizedDirichletPoly poly = make_family(family == Family::GStar ? Family::GStar : Family::G, n);
  const Interval d = zero_envelope(poly, 0.1);
  if (family == Family::GStar) return d;
  return {std::min(d.lo, -(n + 1) * std::numbers::ln2 - 1.0), d.hi};
}

double ZeroCatalog::covered_height(Family family, int n) {
  const Family base = family == Family::Zeta ? Family::G : family;
  std::lock_guard lock(mutex_);
  const auto it = entries_.find({static_cast<int>(base), n});
  return it == entries_.end() ? 0.0 : it->second.height;
}

void ZeroCatalog::seed(Family family, int n, double height, std::vector<ComplexZero> zeros) {
  if (family == Family::Zeta) throw PreconditionError("ZeroCatalog::seed: store G or Gstar zeros");
  std::lock_guard lock(mutex_);
  Entry& entry = entries_[{static_cast<int>(family), n}];
  if (entry.height >= height) return;
  entry.height = height;
  entry.zeros = std::move(zeros);
}

std::vector<ComplexZero> ZeroCatalog::zeros(Family family, int n, double height) {
  if (!(height > 0.0)) throw DomainError("ZeroCatalog: height must be positive");
  const Family base = family == Family::Zeta ? Family::G : family;
  std::vector<ComplexZero> out;
  {
    std::lock_guard lock(mutex_);
    Entry& entry = entries_[{static_cast<int>(base), n}];
    if (entry.height < height) {
      const GeneralizedDirichletPoly poly = make_family(base, n);
      const Interval env = envelope(base, n);
      std::vector<ComplexZero> found;
      double top = height;
      for (int attempt = 0;; ++attempt) {
        try {
          found = find_zeros(poly, {env.lo, env.hi, entry.height, top}, ZeroSearchOptions{});
          break;
        } catch (const BoundaryError&) {
          if (attempt == 8) throw;
          top = height + 1e-3 * (attempt + 1);
        }
      }
      for (const ComplexZero& z : found) {
        if (z.position.imag() > 0.0) entry.zeros.push_back(z);
      }
      entry.height = top;
    }
    for (const ComplexZero& z : entry.zeros) {
      if (z.position.imag() <= height) out.push_back(z);
    }
  }
  if (family == Family::Zeta) {
    for (ComplexZero& z : out) z.position = -std::conj(z.position);
    // Residuals are unchanged: zeta_n(-conj z) = conj G_n(z).
  }
  sort_zeros(out);
  return out;
}

}  // namespace zsa
