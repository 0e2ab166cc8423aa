// Acceptance run: one PASS/FAIL line per criterion. The optional argument is
// the path of the zsa executable, used by the report check.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "zsa/errors.hpp"
#include "zsa/io.hpp"
#include "zsa/levelset.hpp"
#include "zsa/strips.hpp"
#include "zsa/zerofinder.hpp"

using namespace zsa;

namespace {

const double kPi = std::numbers::pi;
const double kLog2 = std::numbers::ln2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Criterion {
 public:
  void fail(const std::string& why) {
    if (out_.pass) out_.detail = why;
    out_.pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  void note(const std::string& text) {
    if (out_.pass) out_.detail = text;
  }
  Outcome outcome() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool has_zero_near(const std::vector<ComplexZero>& zeros, Complex w, double tol) {
  for (const auto& z : zeros) {
    if (std::abs(z.position - w) <= tol) return true;
  }
  return false;
}

// 1. Closed-form zeros of zeta_2, G_3^*, G_4^*.
void closed_forms(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* name;
    GeneralizedDirichletPoly poly;
    ClosedFormFamily family;
    int k_hi;
  };
  const std::vector<Case> cases{{"zeta2", make_partial_sum(2), ClosedFormFamily::Zeta2, 19},
                                {"g3star", make_g_star(3), ClosedFormFamily::G3Star, 19},
                                {"g4star", make_g_star(4), ClosedFormFamily::G4Star, 9}};
  double worst = 0.0;
  for (const Case& k : cases) {
    const auto expected = closed_form_zeros(k.family, 0, k.k_hi);
    const auto next = closed_form_zeros(k.family, k.k_hi + 1, k.k_hi + 1);
    const double top = 0.5 * (expected.back().imag() + next.front().imag());
    const auto found = find_zeros(k.poly, make_rectangle(-1, 1, 0, top), 1e-10);
    if (found.size() != 20 || expected.size() != 20) {
      c.fail(std::string(k.name) + ": " + std::to_string(found.size()) + " zeros found, 20 expected");
      continue;
    }
    for (std::size_t i = 0; i < 20; ++i) worst = std::max(worst, std::abs(found[i].position - expected[i]));
  }
  const double secs = seconds_since(t0);
  c.expect(worst <= 1e-10, fmt("max error %.3g", worst));
  c.expect(secs < 10.0, fmt("runtime %.1f s", secs));
  c.note(fmt("60 zeros, max error %.2g, %.2f s", worst, secs));
}

// 2. Count equals winding on random rectangles, with conjugate pairing.
void winding_counts(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> pick_n(3, 8), pick_family(0, 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int tested = 0, zeros_seen = 0, rejected = 0;
  while (tested < 200) {
    const int n = pick_n(rng);
    const Family family = std::array{Family::Zeta, Family::G, Family::GStar}[pick_family(rng)];
    const auto poly = make_family(family, n);
    const Interval env = zero_envelope(poly);
    const double w = 0.3 + env.width() * u01(rng);
    const double h = 0.5 + 40.0 * u01(rng);
    const double x = env.lo - 0.5 + (env.width() + 1.0 - w) * u01(rng);
    const double y = -60.0 + 100.0 * u01(rng);
    const Rectangle r = make_rectangle(x, x + w, y, y + h);
    int winding;
    try {
      winding = winding_number(poly, r);
    } catch (const BoundaryError&) {
      ++rejected;
      continue;
    }
    ++tested;
    const auto zeros = find_zeros(poly, r, 1e-10);
    zeros_seen += static_cast<int>(zeros.size());
    if (static_cast<int>(zeros.size()) != winding) {
      c.fail(fmt("count %g vs winding %g", static_cast<double>(zeros.size()), winding) + " for " +
             poly.label());
    }
    const Rectangle mirror = make_rectangle(r.x_min, r.x_max, -r.y_max, -r.y_min);
    const auto conj_zeros = find_zeros(poly, mirror, 1e-10);
    for (const auto& z : zeros) {
      if (!z.certified) c.fail("uncertified zero in " + poly.label());
      if (!has_zero_near(conj_zeros, std::conj(z.position), 1e-9)) c.fail("missing conjugate in " + poly.label());
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 120.0, fmt("runtime %.1f s", secs));
  c.note(fmt("200 rectangles (%g guard rejections), %g zeros, %.1f s", rejected, zeros_seen, secs));
}

// 3. Zeros of G_n negate onto zeros of zeta_n.
void mirror_identity(Criterion& c) {
  double worst = 0.0;
  int total = 0;
  for (int n = 2; n <= 8; ++n) {
    const auto g = make_g(n);
    const auto zeta = make_partial_sum(n);
    const Interval env = ZeroCatalog::envelope(Family::G, n);
    const Rectangle r = make_rectangle(env.lo, env.hi, 0.37, 60.41);
    const auto zg = find_zeros(g, r, 1e-10);
    const auto mirrored = mirror_zeros(zg, zeta);
    const auto direct = find_zeros(zeta, make_rectangle(-env.hi, -env.lo, -60.41, -0.37), 1e-10);
    if (mirrored.size() != zg.size() || direct.size() != zg.size()) {
      c.fail("count mismatch for n = " + std::to_string(n));
      continue;
    }
    for (const auto& m : mirrored) {
      if (!m.certified) c.fail("mirrored zero not certified for n = " + std::to_string(n));
      double best = 1e300;
      for (const auto& d : direct) best = std::min(best, std::abs(d.position - m.position));
      worst = std::max(worst, best);
    }
    total += static_cast<int>(zg.size());
  }
  c.expect(worst <= 1e-10, fmt("max distance %.3g", worst));
  c.note(fmt("%g zeros for n = 2..8, max distance %.2g", total, worst));
}

// Root of 2^x + 3^x = 1 by bisection on (-0.80, -0.78).
double a3_oracle(Criterion& c) {
  auto f = [](double x) { return std::pow(2.0, x) + std::pow(3.0, x) - 1.0; };
  double lo = -0.80, hi = -0.78;
  c.expect(f(lo) < 0.0 && f(hi) > 0.0, "a3 bracket signs");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// 4. Projection interval for n = 3.
void projection_n3(Criterion& c) {
  const double a3 = a3_oracle(c);
  const auto p = projection_interval(3, 1e-3);
  c.expect(std::abs(p.lo - a3) <= 1e-6, fmt("left end %.12g vs %.12g", p.lo, a3));
  c.expect(std::abs(p.hi - 1.0) <= 1e-6, fmt("right end %.12g", p.hi));
  c.expect(p.holes.empty(), "membership holes");
  c.note(fmt("[%.10f, %.10f], oracle left end %.10f, no holes", p.lo, p.hi, a3));
}

// 5. Extremes and bounds for n = 4.
void extremes_n4(Criterion& c) {
  auto closed = [](double x0) { return std::log(1 + 2 * std::pow(3.0, x0 - 0.5)) / std::log(4.0); };
  const auto p = projection_interval(4, 1e-3);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x0 = p.hi * i / 20.0;
    worst = std::max(worst, std::abs(upper_extreme(4, x0) - closed(x0)));
  }
  c.expect(worst <= 1e-8, fmt("upper extreme error %.3g", worst));
  const double low = lower_extreme(4, 1.0);
  c.expect(std::abs(low) <= 1e-10, fmt("lower_extreme(4, 1) = %.3g", low));

  auto beta_residual = [](double x) { return std::pow(4.0, x) - 1.0 - 2.0 * std::pow(3.0, x - 0.5); };
  c.expect(beta_residual(1.0) < 0.0 && beta_residual(1.5) > 0.0, "beta4 bracket signs");
  const GeneralizedDirichletPoly beta_poly(
      {{1.0, make_rational(4, 1)}, {-1.0, make_rational(1, 1)}, {-2.0 / std::sqrt(3.0), make_rational(3, 1)}}, "beta4");
  const double beta = solve_unique_root({beta_poly, 0.0}, {1.0, 1.5});
  c.expect(beta > 1.0 && beta < 1.5, fmt("beta4 = %.12g", beta));
  c.expect(p.holes.empty(), "membership holes for n = 4");
  const double upper = analytic_upper_bound(4);
  const double b_hat = empirical_bounds(4, Family::G, 1000).b_hat;
  c.expect(b_hat <= beta, fmt("b_hat4 %.12g > beta4 %.12g", b_hat, beta));
  c.expect(p.hi <= beta + 1e-9, fmt("projection right end %.12g > beta4 %.12g", p.hi, beta));
  c.expect(beta <= upper, "beta4 above the analytic bound");
  c.expect(upper > 1.6 && upper < 1.8, fmt("analytic bound %.12g", upper));
  c.note(fmt("upper extreme error %.2g, b_hat4 %.6f, beta4 %.6f", worst, b_hat, beta) +
         fmt(", analytic %.6f", upper));
}

// 6. Upper extremes increase with x0.
void monotonicity(Criterion& c) {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(-2.0 + 3.0 * i / 19.0);
  double smallest_step = 1e300;
  for (int n = 3; n <= 8; ++n) {
    const auto v = extreme_monotonicity(n, grid, 1e-9);
    if (!v.increasing) c.fail("not increasing for n = " + std::to_string(n));
    for (std::size_t i = 0; i + 1 < v.values.size(); ++i) smallest_step = std::min(smallest_step, v.values[i + 1] - v.values[i]);
  }
  c.expect(smallest_step > 1e-9, fmt("smallest increment %.3g", smallest_step));
  c.note(fmt("n = 3..8 on 20 points in [-2, 1], smallest increment %.3g", smallest_step));
}

// 7. b_n^* lies left of every upper extreme.
void dominance(Criterion& c) {
  std::string summary;
  for (int n = 3; n <= 8; ++n) {
    const auto d = bstar_dominance(n, {-1.0, 0.0, 1.0}, 200.0);
    if (!d.holds) c.fail("dominance fails for n = " + std::to_string(n));
    if (n <= 4 && std::abs(d.b_star) > 1e-12) c.fail(fmt("b*_%g = %.3g, expected 0", n, d.b_star));
    summary += fmt(" %.4f", d.b_star);
  }
  c.note("b*_3..8 =" + summary);
}

// 8. Zeros on both sides of, and close to, the imaginary axis.
void desk_witnesses(Criterion& c) {
  VerifyBudget budget;
  budget.height = 1.0e4;
  std::vector<int> ns;
  for (int n = 3; n <= 10; ++n) ns.push_back(n);
  int inconclusive = 0;
  for (const char* id : {"T2", "C20"}) {
    for (const auto& [n, v] : verify_theorem(id, ns, budget)) {
      if (v.status == VerdictStatus::Fail) c.fail(std::string(id) + " failed for n = " + std::to_string(n));
      if (v.status != VerdictStatus::Pass) {
        ++inconclusive;
        if (n <= 8) c.fail(std::string(id) + " inconclusive for n = " + std::to_string(n) + ": " + v.detail);
      }
    }
  }
  c.note(fmt("T2 and C20 for n = 3..10, %g inconclusive", inconclusive));
}

// 9. Sign rule on random real exponential equations.
void polya_szego(Criterion& c) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coeff(-5, 5);
  std::uniform_int_distribution<int> nterms(2, 6);
  std::vector<std::int64_t> bases{1, 2, 3, 4, 5, 6, 7, 8, 9};
  int failures = 0, total_zeros = 0;
  for (int i = 0; i < 1000; ++i) {
    std::shuffle(bases.begin(), bases.end(), rng);
    std::vector<std::pair<double, Rational>> terms;
    const int k = nterms(rng);
    for (int j = 0; j < k; ++j) terms.push_back({coeff(rng), make_rational(bases[j], 1)});
    const RealExpEquation eq{GeneralizedDirichletPoly(std::move(terms), "random"), 0.0};
    const Interval env = real_zero_envelope(eq);
    // Oracle: sign changes between nonzero samples on a fine grid.
    int n_oracle = 0;
    double prev = 0.0;
    constexpr int kPoints = 100000;
    for (int q = 0; q <= kPoints; ++q) {
      const double v = eq.residual(env.lo + env.width() * q / kPoints);
      if (v == 0.0) continue;
      if (prev != 0.0 && (v > 0) != (prev > 0)) ++n_oracle;
      prev = v;
    }
    const int W = sign_changes(eq);
    if (W < n_oracle || (W - n_oracle) % 2 != 0) ++failures;
    if (polya_szego_check(eq).N != n_oracle) ++failures;
    total_zeros += n_oracle;
  }
  c.expect(failures == 0, fmt("%g failures", failures));
  c.note(fmt("1000 equations, %g real zeros, %g failures", total_zeros, failures));
}

// 10. Factorial and drift inequalities.
void factorials(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (int k = 3; k <= 300; ++k) {
    const auto f = factorial_inequality_check(k);
    // Log-domain oracle: 2 sum log j - k log k.
    double s = 0.0;
    for (int j = 2; j <= k; ++j) s += std::log(static_cast<double>(j));
    const double weak = 2 * s - k * std::log(static_cast<double>(k));
    const double sharp = 2 * s - (k - 1) * std::log(static_cast<double>(k)) - 2 * std::log(k - 1.0);
    if (!f.holds_weak || !(weak > 0) || std::abs(f.weak_margin - weak) > 1e-9 * std::max(1.0, std::abs(weak))) ++failures;
    if (k >= 6 && (!f.holds_sharp || !(sharp > 0))) ++failures;
  }
  for (int m = 5; m <= 10000; ++m) {
    if (!(hadamard_drift_constant(m).margin > 0)) ++failures;
  }
  const double secs = seconds_since(t0);
  c.expect(failures == 0, fmt("%g failures", failures));
  c.expect(secs < 5.0, fmt("runtime %.2f s", secs));
  c.note(fmt("k = 3..300, m = 5..10000, %g failures, %.2f s", failures, secs));
}

// 11. delta_n > 0 and 0 inside the projection interval.
void delta_positive(Criterion& c) {
  double smallest = 1e300;
  for (int n = 3; n <= 10; ++n) {
    const double d = delta_n(n).delta;
    smallest = std::min(smallest, d);
    if (!(d > 0.0)) c.fail(fmt("delta_%g = %.3g", n, d));
    const auto p = projection_interval(n, 1e-2);
    if (!(p.lo < 0.0 && 0.0 < p.hi)) c.fail(fmt("0 not inside [%.6f, %.6f] for n = %g", p.lo, p.hi, n));
  }
  const auto r2 = strip_report(2);
  c.expect(r2.degenerate && r2.projection && r2.projection->lo == 0.0 && r2.projection->hi == 0.0,
           "n = 2 is not the single point 0");
  c.note(fmt("min delta_n over n = 3..10 is %.6f", smallest));
}

// 12. Component classes of the level curves.
void level_classes(Criterion& c) {
  std::string summary;
  for (int n : {3, 5, 6}) {
    for (double x0 : {-1.0, 0.0, 0.5}) {
      const auto r = trace_level_curve(n, x0);
      int loops = 0, asym = 0, single = 0, other = 0;
      for (const auto& comp : r.components) {
        switch (comp.kind) {
          case ComponentClass::ClosedLoop: ++loops; break;
          case ComponentClass::OpenWithAsymptote: ++asym; break;
          case ComponentClass::SingleOpenCurve: ++single; break;
          default: ++other; break;
        }
      }
      const std::string where = "n = " + std::to_string(n) + fmt(", x0 = %g", x0);
      if (r.components.empty()) c.fail(where + ": no components");
      if (x0 < 0) {
        if (asym + single + other > 0) c.fail(where + ": non-loop components");
        for (const auto& comp : r.components) {
          if (comp.closed && comp.zeros_inside != 1) c.fail(where + fmt(": loop with %g zeros", comp.zeros_inside));
        }
      } else if (x0 == 0) {
        if (loops + single + other > 0) {
          c.fail(where + fmt(": %g closed loops, %g single curves", loops, single) + fmt(", %g unclassified", other));
        }
        for (const auto& comp : r.components) {
          for (double y : comp.asymptotes) {
            const double k = std::round((y * 2 * kLog2 / kPi - 1) / 2);
            if (std::abs(y - (2 * k + 1) * kPi / (2 * kLog2)) > 0.05) c.fail(where + fmt(": asymptote %.4f", y));
          }
        }
      } else {
        if (single != 1 || r.components.size() != 1) c.fail(where + ": not a single open curve");
      }
      summary += " " + std::to_string(n) + fmt("/%g:%g", x0, static_cast<double>(r.components.size()));
    }
  }
  c.note("n/x0:components" + summary);
}

// 13. The report command emits the report-only comparison columns.
void asymptotic_report(Criterion& c, const std::string& exe) {
  if (exe.empty()) {
    c.fail("no zsa executable given");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / ("zsa_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const std::string cmd = "\"" + exe + "\" report --n 3..12 --out-dir \"" + dir.string() + "\" > /dev/null";
  const int rc = std::system(cmd.c_str());
  c.expect(rc == 0, fmt("report exited with status %g", rc));
  std::ifstream in(dir / "aggregate.csv");
  std::string header, line;
  std::getline(in, header);
  for (const char* col : {"zeta_b_hat", "upper_asymptote_report_only", "zeta_a_hat_over_n", "minus_log2_report_only",
                          "ritt_sum_100_report_only", "ritt_sum_1000_report_only"}) {
    c.expect(header.find(col) != std::string::npos, std::string("missing column ") + col);
  }
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::ifstream report(dir / ("report_n" + std::to_string(rows + 2) + ".json"));
    const Json j = Json::parse(report, nullptr, false);
    c.expect(!j.is_discarded() && j.contains("report_only"), "report_only section missing");
  }
  c.expect(rows == 10, fmt("%g rows", rows));
  std::filesystem::remove_all(dir);
  c.note("aggregate.csv with report-only columns for n = 3..12");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<void(Criterion&)>>> criteria{
      {"closed-form zeros", closed_forms},
      {"count equals winding", winding_counts},
      {"mirror identity", mirror_identity},
      {"n=3 projection set", projection_n3},
      {"n=4 extremes", extremes_n4},
      {"upper extreme monotonicity", monotonicity},
      {"b* dominance", dominance},
      {"half-plane witnesses", desk_witnesses},
      {"sign rule", polya_szego},
      {"factorial and drift inequalities", factorials},
      {"delta_n positivity", delta_positive},
      {"level-curve classes", level_classes},
      {"asymptotic report", [&](Criterion& c) { asymptotic_report(c, exe); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    const Outcome o = c.outcome();
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
